#pragma once

#include <utility>
#include <vector>

#include "pglab/ffcore/subspace.hpp"

namespace pglab {

/// Basis of V ^ V for V = F_p^n: the pairs (i, j), i < j, in lexicographic
/// order. Coordinate k of a wedge vector refers to pairs()[k].
class WedgeIndex {
  public:
    explicit WedgeIndex(std::size_t n);

    std::size_t n() const { return n_; }
    std::size_t size() const { return pairs_.size(); }
    const std::vector<std::pair<std::size_t, std::size_t>>& pairs() const { return pairs_; }
    /// Position of pair (i, j), i < j.
    std::size_t index(std::size_t i, std::size_t j) const;

  private:
    std::size_t n_;
    std::vector<std::pair<std::size_t, std::size_t>> pairs_;
};

/// Coordinate (i, j) is u_i v_j - u_j v_i.
FpVector wedge_coords(const PrimeField& f, std::span<const Residue> u, std::span<const Residue> v,
                      const WedgeIndex& idx);

/// H ^ H inside V ^ V, spanned by b_r ^ b_s over basis pairs r < s.
Subspace wedge_subspace(const Subspace& h, const WedgeIndex& idx);

}  // namespace pglab
