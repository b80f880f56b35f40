#include "pglab/ffcore/wedge.hpp"

namespace pglab {

WedgeIndex::WedgeIndex(std::size_t n) : n_(n) {
    pairs_.reserve(n * (n > 0 ? n - 1 : 0) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) pairs_.emplace_back(i, j);
}

std::size_t WedgeIndex::index(std::size_t i, std::size_t j) const {
    if (!(i < j && j < n_)) throw std::out_of_range("wedge pair out of range");
    // rows 0..i-1 contribute (n-1) + (n-2) + ... + (n-i) pairs
    return i * (2 * n_ - i - 1) / 2 + (j - i - 1);
}

FpVector wedge_coords(const PrimeField& f, std::span<const Residue> u, std::span<const Residue> v,
                      const WedgeIndex& idx) {
    if (u.size() != idx.n() || v.size() != idx.n()) throw DimensionMismatch("wedge_coords: dimension mismatch");
    FpVector out(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) {
        auto [i, j] = idx.pairs()[k];
        out[k] = f.sub(f.mul(u[i], v[j]), f.mul(u[j], v[i]));
    }
    return out;
}

Subspace wedge_subspace(const Subspace& h, const WedgeIndex& idx) {
    if (h.ambient_dim() != idx.n()) throw DimensionMismatch("wedge_subspace: dimension mismatch");
    PrimeField f(h.p());
    std::vector<FpVector> gens;
    for (std::size_t r = 0; r < h.dim(); ++r)
        for (std::size_t s = r + 1; s < h.dim(); ++s)
            gens.push_back(wedge_coords(f, h.basis().row(r), h.basis().row(s), idx));
    return Subspace::span(h.p(), idx.size(), gens);
}

}  // namespace pglab
