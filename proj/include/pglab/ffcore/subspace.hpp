#pragma once

#include <span>
#include <vector>

#include "pglab/ffcore/matrix.hpp"

namespace pglab {

/// A subspace of F_p^n held by its RREF basis. Two Subspace values compare
/// equal exactly when they are the same subspace.
class Subspace {
  public:
    Subspace() : Subspace(zero(2, 0)) {}

    static Subspace zero(std::uint32_t p, std::size_t n);
    static Subspace full(std::uint32_t p, std::size_t n);
    static Subspace span(std::uint32_t p, std::size_t n, const std::vector<FpVector>& vectors);
    /// `rows` must already be a d x n RREF block with independent rows.
    static Subspace from_rref(std::uint32_t p, std::size_t n, std::size_t d,
                              std::span<const Residue> rows);

    std::uint32_t p() const { return basis_.p(); }
    std::size_t ambient_dim() const { return basis_.cols(); }
    std::size_t dim() const { return basis_.rows(); }
    const FpMatrix& basis() const { return basis_; }
    const std::vector<std::size_t>& pivots() const { return pivots_; }
    std::vector<FpVector> basis_rows() const { return basis_.row_vectors(); }

    bool contains(std::span<const Residue> v) const;
    bool contains(const Subspace& other) const;
    bool is_proper() const { return dim() < ambient_dim(); }

    bool operator==(const Subspace& other) const = default;

  private:
    Subspace(FpMatrix basis, std::vector<std::size_t> pivots)
        : basis_(std::move(basis)), pivots_(std::move(pivots)) {}

    FpMatrix basis_;
    std::vector<std::size_t> pivots_;
};

Subspace subspace_from_generators(std::uint32_t p, std::size_t n, const std::vector<FpVector>& vectors);
Subspace subspace_sum(const Subspace& a, const Subspace& b);
bool subspace_contains(const Subspace& a, std::span<const Residue> v);

/// Kernel {x : m x = 0} as a subspace of F_p^{m.cols()}.
Subspace nullspace(const FpMatrix& m);

/// Unit vector e_i (0-based) in F_p^n.
FpVector unit_vector(std::size_t n, std::size_t i);

}  // namespace pglab
