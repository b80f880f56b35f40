#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "pglab/ffcore/grassmannian.hpp"

/// Bit-packed linear algebra over F_2. Coordinate i of a vector is bit i of
/// a 64-bit word, so ambient dimensions are limited to 64.
namespace pglab::gf2 {

using Row = std::uint64_t;

inline constexpr std::size_t kMaxDim = 64;

inline bool parity(Row x) { return std::popcount(x) & 1; }

Row pack(std::span<const Residue> v);
FpVector unpack(Row r, std::size_t n);

/// XOR basis keyed by leading (highest) bit.
class SpanBuilder {
  public:
    bool insert(Row v) {
        while (v) {
            int b = 63 - std::countl_zero(v);
            if (!basis_[b]) {
                basis_[b] = v;
                ++rank_;
                return true;
            }
            v ^= basis_[b];
        }
        return false;
    }
    std::size_t rank() const { return rank_; }
    void clear() {
        for (auto& b : basis_) b = 0;
        rank_ = 0;
    }

  private:
    Row basis_[64] = {};
    std::size_t rank_ = 0;
};

std::size_t rank(std::span<const Row> rows);

/// Every d-dimensional subspace of F_2^n as packed RREF rows, in the same
/// order as GrassmannianStream.
class SubspaceList {
  public:
    SubspaceList(std::size_t n, std::size_t d);

    std::size_t ambient_dim() const { return n_; }
    std::size_t dim() const { return d_; }
    std::size_t size() const { return count_; }
    std::span<const Row> rows(std::size_t i) const { return {rows_.data() + i * d_, d_}; }
    Subspace subspace(std::size_t i) const;

  private:
    std::size_t n_, d_, count_ = 0;
    std::vector<Row> rows_;
};

/// Process-wide cache of subspace lists; safe to call from several threads.
const SubspaceList& subspaces(std::size_t n, std::size_t d, const EnumerationGuard& guard = {});

}  // namespace pglab::gf2
