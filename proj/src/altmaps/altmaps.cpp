#include "pglab/altmaps.hpp"

namespace pglab {

namespace {

std::size_t choose2(std::size_t n) { return n * (n > 0 ? n - 1 : 0) / 2; }

void require_p2(const char* what, std::uint32_t p) {
    if (p != 2) throw std::invalid_argument(std::string(what) + " requires p = 2");
}

}  // namespace

AlternatingMap::AlternatingMap(std::uint32_t p, std::size_t n, std::size_t m)
    : n_(n), coeff_(p, m, choose2(n)), idx_(n) {}

AlternatingMap::AlternatingMap(std::size_t n, FpMatrix coeff) : n_(n), coeff_(std::move(coeff)), idx_(n) {
    if (coeff_.cols() != choose2(n))
        throw DimensionMismatch("alternating map on F_p^" + std::to_string(n) + " needs " +
                                std::to_string(choose2(n)) + " wedge coefficients per row, got " +
                                std::to_string(coeff_.cols()));
}

AlternatingMap AlternatingMap::standard_symplectic(std::uint32_t p, std::size_t n) {
    if (n % 2) throw std::invalid_argument("symplectic form needs even dimension");
    AlternatingMap b(p, n, 1);
    for (std::size_t i = 0; i + 1 < n; i += 2) b.set_pair_coeff(0, i, i + 1, 1);
    return b;
}

FpVector AlternatingMap::apply(std::span<const Residue> u, std::span<const Residue> v) const {
    if (u.size() != n_ || v.size() != n_) throw DimensionMismatch("apply_B: vector length mismatch");
    PrimeField f(p());
    return coeff_.multiply(wedge_coords(f, u, v, idx_));
}

LinearPowerMap::LinearPowerMap(FpMatrix matrix) : matrix_(std::move(matrix)) {
    if (matrix_.p() == 2) throw std::invalid_argument("linear power maps are for odd p; use QuadraticMap for p = 2");
}

QuadraticMap::QuadraticMap(std::size_t n, std::size_t m) : n_(n), coeff_(2, m, n * (n + 1) / 2) {}

QuadraticMap::QuadraticMap(std::size_t n, FpMatrix coeff) : n_(n), coeff_(std::move(coeff)) {
    require_p2("QuadraticMap", coeff_.p());
    if (coeff_.cols() != n * (n + 1) / 2)
        throw DimensionMismatch("quadratic map on F_2^" + std::to_string(n) + " needs " +
                                std::to_string(n * (n + 1) / 2) + " coefficients per row");
}

std::size_t QuadraticMap::slot(std::size_t i, std::size_t j) const {
    if (!(i <= j && j < n_)) throw std::out_of_range("quadratic coefficient index out of range");
    // rows 0..i-1 hold n + (n-1) + ... + (n-i+1) entries
    return i * (2 * n_ - i + 1) / 2 + (j - i);
}

FpVector QuadraticMap::apply(std::span<const Residue> x) const {
    if (x.size() != n_) throw DimensionMismatch("apply_F_quad: vector length mismatch");
    FpVector out(m(), 0);
    for (std::size_t k = 0; k < m(); ++k) {
        unsigned acc = 0;
        for (std::size_t i = 0; i < n_; ++i) {
            if (!(x[i] & 1)) continue;
            for (std::size_t j = i; j < n_; ++j)
                if (x[j] & 1) acc ^= q(k, i, j);
        }
        out[k] = Residue(acc & 1);
    }
    return out;
}

AlternatingMap sample_alternating(std::uint32_t p, std::size_t n, std::size_t m, Rng& rng) {
    AlternatingMap b(p, n, m);
    FpMatrix c(p, m, choose2(n));
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t w = 0; w < c.cols(); ++w) c.set(k, w, Residue(rng.below(p)));
    return AlternatingMap(n, std::move(c));
}

QuadraticMap sample_quadratic(std::size_t n, std::size_t m, Rng& rng) {
    FpMatrix c(2, m, n * (n + 1) / 2);
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t w = 0; w < c.cols(); ++w) c.set(k, w, Residue(rng.below(2)));
    return QuadraticMap(n, std::move(c));
}

FpVector apply_B(const AlternatingMap& b, std::span<const Residue> u, std::span<const Residue> v) {
    return b.apply(u, v);
}

FpVector apply_F_quad(const QuadraticMap& f, std::span<const Residue> x) { return f.apply(x); }

AlternatingMap associated_B(const QuadraticMap& f) {
    AlternatingMap b(2, f.n(), f.m());
    for (std::size_t k = 0; k < f.m(); ++k)
        for (std::size_t i = 0; i < f.n(); ++i)
            for (std::size_t j = i + 1; j < f.n(); ++j) b.set_pair_coeff(k, i, j, f.q(k, i, j));
    return b;
}

QuadraticMap zero_diagonal_quadratic(const AlternatingMap& b) {
    require_p2("zero_diagonal_quadratic", b.p());
    QuadraticMap f(b.n(), b.m());
    for (std::size_t k = 0; k < b.m(); ++k)
        for (std::size_t i = 0; i < b.n(); ++i)
            for (std::size_t j = i + 1; j < b.n(); ++j) f.set_q(k, i, j, b.pair_coeff(k, i, j));
    return f;
}

LinearPowerMap canonical_linear_F(std::uint32_t p, std::size_t n, std::size_t m) {
    if (m > n) throw std::invalid_argument("canonical_linear_F: m > n");
    FpMatrix a(p, m, n);
    for (std::size_t i = 0; i < m; ++i) a.set(i, i, 1);
    return LinearPowerMap(std::move(a));
}

Subspace image_span_B(const AlternatingMap& b, const Subspace& h) {
    if (h.ambient_dim() != b.n() || h.p() != b.p()) throw DimensionMismatch("image_span_B: ambient mismatch");
    std::vector<FpVector> imgs;
    for (std::size_t r = 0; r < h.dim(); ++r)
        for (std::size_t s = r + 1; s < h.dim(); ++s) imgs.push_back(b.apply(h.basis().row(r), h.basis().row(s)));
    return Subspace::span(b.p(), b.m(), imgs);
}

Subspace image_span_F(const LinearPowerMap& f, const Subspace& h) {
    if (h.ambient_dim() != f.n() || h.p() != f.p()) throw DimensionMismatch("image_span_F: ambient mismatch");
    std::vector<FpVector> imgs;
    for (std::size_t r = 0; r < h.dim(); ++r) imgs.push_back(f.apply(h.basis().row(r)));
    return Subspace::span(f.p(), f.m(), imgs);
}

Subspace image_span_F(const QuadraticMap& f, const Subspace& h) {
    if (h.ambient_dim() != f.n() || h.p() != 2) throw DimensionMismatch("image_span_F: ambient mismatch");
    std::vector<FpVector> imgs;
    for (std::size_t r = 0; r < h.dim(); ++r) imgs.push_back(f.apply(h.basis().row(r)));
    auto b = associated_B(f);
    for (std::size_t r = 0; r < h.dim(); ++r)
        for (std::size_t s = r + 1; s < h.dim(); ++s) imgs.push_back(b.apply(h.basis().row(r), h.basis().row(s)));
    return Subspace::span(2, f.m(), imgs);
}

bool is_surjective(const AlternatingMap& b) { return rank(b.coeff()) == b.m(); }

AltEvaluator::AltEvaluator(const AlternatingMap& b)
    : field_(b.p()), n_(b.n()), m_(b.m()), forms_(b.m() * b.n() * b.n(), 0), acc_(b.m(), 0) {
    for (std::size_t k = 0; k < m_; ++k)
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = i + 1; j < n_; ++j) {
                Residue c = b.pair_coeff(k, i, j);
                forms_[(k * n_ + i) * n_ + j] = c;
                forms_[(k * n_ + j) * n_ + i] = field_.neg(c);
            }
}

void AltEvaluator::left_functionals(std::span<const Residue> u, std::span<Residue> out) const {
    const unsigned p = field_.p();
    for (std::size_t k = 0; k < m_; ++k)
        for (std::size_t j = 0; j < n_; ++j) {
            unsigned s = 0;
            for (std::size_t i = 0; i < n_; ++i) s += unsigned(u[i]) * forms_[(k * n_ + i) * n_ + j];
            out[k * n_ + j] = Residue(s % p);
        }
}

void AltEvaluator::eval(std::span<const Residue> u, std::span<const Residue> v, std::span<Residue> out) const {
    const unsigned p = field_.p();
    for (std::size_t k = 0; k < m_; ++k) {
        const Residue* form = forms_.data() + k * n_ * n_;
        std::uint32_t total = 0;
        for (std::size_t i = 0; i < n_; ++i) {
            if (!u[i]) continue;
            std::uint32_t s = 0;
            const Residue* row = form + i * n_;
            for (std::size_t j = 0; j < n_; ++j) s += unsigned(row[j]) * v[j];
            total += unsigned(u[i]) * (s % p);
        }
        out[k] = Residue(total % p);
    }
}

namespace gf2 {

AltForm::AltForm(const AlternatingMap& b) : n_(b.n()), m_(b.m()), pair_(b.n() * b.n(), 0) {
    require_p2("gf2::AltForm", b.p());
    if (m_ > kMaxDim || n_ > kMaxDim) throw DimensionMismatch("gf2::AltForm: dimension above 64");
    for (std::size_t k = 0; k < m_; ++k)
        for (std::size_t w = 0; w < b.wedge_index().size(); ++w)
            if (b.coeff().at(k, w)) {
                auto [i, j] = b.wedge_index().pairs()[w];
                pair_[i * n_ + j] |= Row(1) << k;
                pair_[j * n_ + i] |= Row(1) << k;
            }
    build();
}

AltForm::AltForm(std::size_t n, std::size_t m, std::span<const Row> pair_masks)
    : n_(n), m_(m), pair_(n * n, 0) {
    if (pair_masks.size() != choose2(n)) throw DimensionMismatch("gf2::AltForm: wrong number of pair masks");
    std::size_t w = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j, ++w) {
            pair_[i * n + j] = pair_masks[w];
            pair_[j * n + i] = pair_masks[w];
        }
    build();
}

void AltForm::build() {
    constexpr std::size_t kTableMaxDim = 12;
    if (n_ > kTableMaxDim) return;
    const std::size_t stride = std::size_t(1) << n_;
    table_.assign(n_ * stride, 0);
    for (std::size_t i = 0; i < n_; ++i) {
        Row* t = table_.data() + i * stride;
        for (std::size_t v = 1; v < stride; ++v) t[v] = t[v & (v - 1)] ^ pair_[i * n_ + std::countr_zero(v)];
    }
}

QuadForm::QuadForm(const QuadraticMap& f) : diag_(f.n(), 0), assoc_(associated_B(f)) {
    for (std::size_t k = 0; k < f.m(); ++k)
        for (std::size_t i = 0; i < f.n(); ++i)
            if (f.q(k, i, i)) diag_[i] |= Row(1) << k;
}

}  // namespace gf2

}  // namespace pglab
