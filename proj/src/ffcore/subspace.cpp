#include "pglab/ffcore/subspace.hpp"

#include <algorithm>

namespace pglab {

Subspace Subspace::zero(std::uint32_t p, std::size_t n) { return Subspace(FpMatrix(p, 0, n), {}); }

Subspace Subspace::full(std::uint32_t p, std::size_t n) {
    std::vector<std::size_t> piv(n);
    for (std::size_t i = 0; i < n; ++i) piv[i] = i;
    return Subspace(FpMatrix::identity(p, n), std::move(piv));
}

Subspace Subspace::span(std::uint32_t p, std::size_t n, const std::vector<FpVector>& vectors) {
    if (vectors.empty()) return zero(p, n);
    auto e = rref(FpMatrix::from_rows(p, n, vectors));
    FpMatrix basis(p, e.rank, n);
    for (std::size_t r = 0; r < e.rank; ++r)
        for (std::size_t c = 0; c < n; ++c) basis.set(r, c, e.rref.at(r, c));
    return Subspace(std::move(basis), std::move(e.pivots));
}

Subspace Subspace::from_rref(std::uint32_t p, std::size_t n, std::size_t d, std::span<const Residue> rows) {
    if (rows.size() != d * n) throw DimensionMismatch("from_rref: block size mismatch");
    FpMatrix basis(p, d, n);
    std::vector<std::size_t> piv;
    piv.reserve(d);
    for (std::size_t r = 0; r < d; ++r) {
        std::size_t lead = n;
        for (std::size_t c = 0; c < n; ++c) {
            basis.set(r, c, rows[r * n + c]);
            if (lead == n && rows[r * n + c] != 0) lead = c;
        }
        piv.push_back(lead);
    }
    return Subspace(std::move(basis), std::move(piv));
}

bool Subspace::contains(std::span<const Residue> v) const {
    if (v.size() != ambient_dim()) throw DimensionMismatch("membership: vector length mismatch");
    PrimeField f(p());
    FpVector w(v.begin(), v.end());
    for (std::size_t r = 0; r < dim(); ++r) {
        Residue factor = w[pivots_[r]];
        if (factor == 0) continue;
        auto row = basis_.row(r);
        for (std::size_t c = 0; c < w.size(); ++c) w[c] = f.sub(w[c], f.mul(factor, row[c]));
    }
    return std::all_of(w.begin(), w.end(), [](Residue e) { return e == 0; });
}

bool Subspace::contains(const Subspace& other) const {
    if (other.ambient_dim() != ambient_dim() || other.p() != p())
        throw DimensionMismatch("containment: ambient mismatch");
    for (std::size_t r = 0; r < other.dim(); ++r)
        if (!contains(other.basis().row(r))) return false;
    return true;
}

Subspace subspace_from_generators(std::uint32_t p, std::size_t n, const std::vector<FpVector>& vectors) {
    return Subspace::span(p, n, vectors);
}

Subspace subspace_sum(const Subspace& a, const Subspace& b) {
    if (a.ambient_dim() != b.ambient_dim() || a.p() != b.p())
        throw DimensionMismatch("subspace sum: ambient mismatch");
    auto gens = a.basis_rows();
    auto more = b.basis_rows();
    gens.insert(gens.end(), more.begin(), more.end());
    return Subspace::span(a.p(), a.ambient_dim(), gens);
}

bool subspace_contains(const Subspace& a, std::span<const Residue> v) { return a.contains(v); }

Subspace nullspace(const FpMatrix& m) {
    const std::size_t n = m.cols();
    PrimeField f(m.p());
    auto e = rref(m);
    std::vector<bool> is_pivot(n, false);
    for (auto c : e.pivots) is_pivot[c] = true;
    std::vector<FpVector> gens;
    for (std::size_t free = 0; free < n; ++free) {
        if (is_pivot[free]) continue;
        FpVector v(n, 0);
        v[free] = 1;
        for (std::size_t r = 0; r < e.rank; ++r) v[e.pivots[r]] = f.neg(e.rref.at(r, free));
        gens.push_back(std::move(v));
    }
    return Subspace::span(m.p(), n, gens);
}

FpVector unit_vector(std::size_t n, std::size_t i) {
    FpVector v(n, 0);
    v.at(i) = 1;
    return v;
}

}  // namespace pglab
