#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pglab/ffcore/bignum.hpp"
#include "pglab/ffcore/subspace.hpp"

namespace pglab {

inline constexpr std::uint64_t kDefaultEnumerationGuard = 100'000'000;

/// Upper limit on the number of subspaces an enumeration may visit.
struct EnumerationGuard {
    std::uint64_t limit = kDefaultEnumerationGuard;
    bool force = false;

    bool allows(const BigInt& count) const { return force || count <= BigInt(std::to_string(limit)); }
};

/// Throws GuardExceeded when [n d]_p exceeds the guard.
void check_guard(std::uint32_t p, std::size_t n, std::size_t d, const EnumerationGuard& guard);

/// Streams every d-dimensional subspace of F_p^n exactly once as an RREF
/// block. Order: pivot-column sets in lexicographic order; within a pivot
/// set, the free entries (row-major, columns ascending) run as an odometer
/// whose last digit moves fastest.
///
///     GrassmannianStream s(2, 4, 2);
///     while (s.next()) use(s.rows());
class GrassmannianStream {
  public:
    GrassmannianStream(std::uint32_t p, std::size_t n, std::size_t d, EnumerationGuard guard = {});
    /// Restricts the stream to one pivot-column set, for partitioned scans.
    GrassmannianStream(std::uint32_t p, std::size_t n, std::size_t d, std::vector<std::size_t> pivot_set);

    bool next();

    /// Current d x n RREF block, row-major.
    std::span<const Residue> rows() const { return rows_; }
    std::span<const Residue> row(std::size_t r) const { return {rows_.data() + r * n_, n_}; }
    Subspace current() const { return Subspace::from_rref(p_, n_, d_, rows_); }
    const std::vector<std::size_t>& pivots() const { return pivots_; }

    std::uint32_t p() const { return p_; }
    std::size_t ambient_dim() const { return n_; }
    std::size_t dim() const { return d_; }

    /// All pivot-column sets in enumeration order.
    static std::vector<std::vector<std::size_t>> pivot_sets(std::size_t n, std::size_t d);

  private:
    void load_pivot_set();
    bool next_pivot_set();

    std::uint32_t p_;
    std::size_t n_, d_;
    bool started_ = false;
    bool single_pivot_set_ = false;
    bool done_ = false;
    std::vector<std::size_t> pivots_;
    std::vector<std::size_t> free_pos_;  // flat offsets into rows_
    std::vector<Residue> rows_;
};

/// Collects a whole Grassmannian. Intended for small cases and tests.
std::vector<Subspace> enumerate_subspaces(std::uint32_t p, std::size_t n, std::size_t d,
                                          EnumerationGuard guard = {});

}  // namespace pglab
