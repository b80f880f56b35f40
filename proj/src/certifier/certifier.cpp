#include "pglab/certifier.hpp"

#include <numeric>

namespace pglab {

namespace {

constexpr std::uint64_t kGf2CacheLimit = 1'000'000;

long threshold(std::size_t h, std::size_t n, std::size_t m) { return long(h) - (long(n) - long(m)); }

std::size_t first_candidate_dim(std::size_t n, std::size_t m) { return n > m ? n - m : 0; }

void require_proper(const AlternatingMap& b, const Subspace& h) {
    if (h.ambient_dim() != b.n() || h.p() != b.p()) throw DimensionMismatch("subspace not in the domain of B");
    if (!h.is_proper()) throw std::invalid_argument("badness is defined for proper subspaces only");
}

const LinearPowerMap* linear_of(const PowerMap& f) { return std::get_if<LinearPowerMap>(&f); }
const QuadraticMap* quadratic_of(const PowerMap& f) { return std::get_if<QuadraticMap>(&f); }

void validate(const AlternatingMap& b, const PowerMap& f, Mode mode) {
    if (mode == Mode::AbMax) return;
    if (b.p() == 2) {
        auto q = quadratic_of(f);
        if (!q) throw std::invalid_argument("d-max search over F_2 needs a quadratic power map");
        if (q->n() != b.n() || q->m() != b.m()) throw DimensionMismatch("quadratic map shape differs from B");
        if (!(associated_B(*q) == b)) throw std::invalid_argument("B is not the alternating map associated to F");
        return;
    }
    if (quadratic_of(f)) throw std::invalid_argument("quadratic power maps exist only for p = 2");
    if (auto lin = linear_of(f)) {
        if (lin->p() != b.p() || lin->n() != b.n() || lin->m() != b.m())
            throw DimensionMismatch("linear power map shape differs from B");
    }
}

/// Odd p, surjective linear F, m = n - 2: the bad subspaces all contain ker F.
bool quotient_route(const AlternatingMap& b, const PowerMap& f, Mode mode) {
    if (mode != Mode::DMax || b.p() == 2) return false;
    auto lin = linear_of(f);
    return lin && b.m() + 2 == b.n() && lin->is_surjective();
}

/// Images F(x) for odd-p linear F or generic-path quadratic F.
void power_image(const PowerMap& f, std::span<const Residue> x, FpVector& out) {
    if (auto lin = linear_of(f))
        out = lin->apply(x);
    else if (auto q = quadratic_of(f))
        out = q->apply(x);
}

class GenericChecker {
  public:
    GenericChecker(const AlternatingMap& b, const PowerMap& f, Mode mode)
        : ev_(b), f_(f), use_f_(mode == Mode::DMax && !std::holds_alternative<std::monostate>(f)),
          n_(b.n()), m_(b.m()), img_(b.m(), 0) {}

    bool bad(std::span<const Residue> rows, std::size_t h, long t) {
        if (t < 0) return false;
        SpanBuilder sb(ev_.field(), m_);
        if (use_f_) {
            for (std::size_t r = 0; r < h; ++r) {
                power_image(f_, rows.subspan(r * n_, n_), fimg_);
                if (sb.insert(fimg_) && long(sb.rank()) > t) return false;
            }
        }
        for (std::size_t r = 0; r < h; ++r)
            for (std::size_t s = r + 1; s < h; ++s) {
                ev_.eval(rows.subspan(r * n_, n_), rows.subspan(s * n_, n_), img_);
                if (sb.insert(img_) && long(sb.rank()) > t) return false;
            }
        return true;
    }

    const AltEvaluator& evaluator() const { return ev_; }

  private:
    AltEvaluator ev_;
    const PowerMap& f_;
    bool use_f_;
    std::size_t n_, m_;
    FpVector img_, fimg_;
};

class Gf2Checker {
  public:
    Gf2Checker(const AlternatingMap& b, const PowerMap& f, Mode mode) : alt_(b) {
        if (mode == Mode::DMax)
            if (auto q = quadratic_of(f)) quad_.emplace(*q);
    }

    bool bad(std::span<const gf2::Row> rows, long t) const {
        if (t < 0) return false;
        gf2::SpanBuilder sb;
        const std::size_t h = rows.size();
        if (quad_) {
            for (std::size_t r = 0; r < h; ++r)
                if (sb.insert(quad_->eval(rows[r])) && long(sb.rank()) > t) return false;
        }
        for (std::size_t r = 0; r < h; ++r)
            for (std::size_t s = r + 1; s < h; ++s)
                if (sb.insert(alt_.eval(rows[r], rows[s])) && long(sb.rank()) > t) return false;
        return true;
    }

    const gf2::AltForm& alt() const { return alt_; }

  private:
    gf2::AltForm alt_;
    std::optional<gf2::QuadForm> quad_;
};

bool use_gf2(const AlternatingMap& b, const SearchOptions& opts) {
    return b.p() == 2 && !opts.generic_only && b.n() <= gf2::kMaxDim && b.m() <= gf2::kMaxDim;
}

/// Visits every h-dimensional subspace of F_2^n as packed rows; `fn` returns
/// false to stop. Returns false if stopped early.
template <class Fn>
bool for_each_gf2(std::size_t n, std::size_t h, const EnumerationGuard& guard, Fn&& fn) {
    auto count = gaussian_binomial(unsigned(n), unsigned(h), 2);
    if (count <= BigInt(std::to_string(kGf2CacheLimit))) {
        const auto& list = gf2::subspaces(n, h, guard);
        for (std::size_t i = 0; i < list.size(); ++i)
            if (!fn(list.rows(i))) return false;
        return true;
    }
    GrassmannianStream s(2, n, h, guard);
    std::vector<gf2::Row> rows(h);
    while (s.next()) {
        for (std::size_t r = 0; r < h; ++r) rows[r] = gf2::pack(s.row(r));
        if (!fn(std::span<const gf2::Row>(rows))) return false;
    }
    return true;
}

Subspace unpack_subspace(std::span<const gf2::Row> rows, std::size_t n) {
    std::vector<FpVector> vs;
    for (auto r : rows) vs.push_back(gf2::unpack(r, n));
    return Subspace::span(2, n, vs);
}

/// Odd-p d-max scan over H = F^{-1}(S), S < W.
BadnessReport quotient_scan(const AlternatingMap& b, const LinearPowerMap& f, BadnessReport report,
                            const SearchOptions& opts, bool first_hit, bool throw_on_guard) {
    const std::uint32_t p = b.p();
    const std::size_t n = b.n(), m = b.m();
    PrimeField field(p);

    // Lifts: with R F = E (RREF, pivots c_i), F u = y for u[c_i] = (R y)_i.
    FpMatrix aug(p, m, n + m);
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t c = 0; c < n; ++c) aug.set(r, c, f.matrix().at(r, c));
        aug.set(r, n + r, 1);
    }
    auto e = rref(aug);
    std::vector<FpVector> lift_unit(m, FpVector(n, 0));
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t i = 0; i < m; ++i) lift_unit[k][e.pivots[i]] = e.rref.at(i, n + k);
    auto ker = f.kernel().basis_rows();

    AltEvaluator ev(b);
    FpVector img(m, 0);
    for (std::size_t s = 0; s < m; ++s) {
        const std::size_t h = s + 2;
        if (!opts.guard.allows(gaussian_binomial(unsigned(m), unsigned(s), p))) {
            if (throw_on_guard) check_guard(p, m, s, opts.guard);
            report.exhaustive = false;
            return report;
        }
        GrassmannianStream stream(p, m, s, opts.guard);
        std::uint64_t found = 0;
        std::vector<FpVector> hrows(h, FpVector(n, 0));
        while (stream.next()) {
            SpanBuilder target(field, m);
            for (std::size_t r = 0; r < s; ++r) {
                target.insert(stream.row(r));
                auto& u = hrows[r];
                std::fill(u.begin(), u.end(), 0);
                for (std::size_t k = 0; k < m; ++k) {
                    Residue y = stream.row(r)[k];
                    if (!y) continue;
                    for (std::size_t c = 0; c < n; ++c) u[c] = field.add(u[c], field.mul(y, lift_unit[k][c]));
                }
            }
            hrows[s] = ker[0];
            hrows[s + 1] = ker[1];
            bool bad = true;
            for (std::size_t r = 0; r < h && bad; ++r)
                for (std::size_t t = r + 1; t < h && bad; ++t) {
                    ev.eval(hrows[r], hrows[t], img);
                    if (!target.contains(img)) bad = false;
                }
            if (!bad) continue;
            ++found;
            if (first_hit) {
                report.counts[h] = 1;
                report.witness = Subspace::span(p, n, hrows);
                report.exhaustive = false;
                return report;
            }
        }
        report.counts[h] = found;
    }
    report.exhaustive = true;
    return report;
}

BadnessReport scan(const AlternatingMap& b, const PowerMap& f, Mode mode, const SearchOptions& opts,
                   bool first_hit, bool throw_on_guard) {
    validate(b, f, mode);
    BadnessReport report;
    report.p = b.p();
    report.n = b.n();
    report.m = b.m();
    report.mode = mode;
    if (quotient_route(b, f, mode))
        return quotient_scan(b, *linear_of(f), std::move(report), opts, first_hit, throw_on_guard);

    const std::size_t n = b.n(), m = b.m();
    const bool packed = use_gf2(b, opts);
    std::optional<Gf2Checker> fast;
    std::optional<GenericChecker> slow;
    if (packed)
        fast.emplace(b, f, mode);
    else
        slow.emplace(b, f, mode);

    for (std::size_t h = first_candidate_dim(n, m); h < n; ++h) {
        if (!opts.guard.allows(gaussian_binomial(unsigned(n), unsigned(h), b.p()))) {
            if (throw_on_guard) check_guard(b.p(), n, h, opts.guard);
            report.exhaustive = false;
            return report;
        }
        const long t = threshold(h, n, m);
        std::uint64_t found = 0;
        bool stopped = false;
        if (packed) {
            for_each_gf2(n, h, opts.guard, [&](std::span<const gf2::Row> rows) {
                if (!fast->bad(rows, t)) return true;
                ++found;
                if (first_hit) {
                    report.witness = unpack_subspace(rows, n);
                    stopped = true;
                    return false;
                }
                return true;
            });
        } else {
            GrassmannianStream s(b.p(), n, h, opts.guard);
            while (s.next()) {
                if (!slow->bad(s.rows(), h, t)) continue;
                ++found;
                if (first_hit) {
                    report.witness = s.current();
                    stopped = true;
                    break;
                }
            }
        }
        report.counts[h] = found;
        if (stopped) {
            report.exhaustive = false;
            return report;
        }
    }
    report.exhaustive = true;
    return report;
}

}  // namespace

std::string_view to_string(Mode mode) { return mode == Mode::AbMax ? "abmax" : "dmax"; }

Mode parse_mode(std::string_view text) {
    if (text == "abmax") return Mode::AbMax;
    if (text == "dmax") return Mode::DMax;
    throw std::invalid_argument("unknown mode '" + std::string(text) + "' (expected abmax or dmax)");
}

std::size_t mode_gap(Mode mode) { return mode == Mode::AbMax ? 3 : 2; }

std::uint64_t BadnessReport::total() const {
    std::uint64_t t = 0;
    for (auto& [h, c] : counts) t += c;
    return t;
}

bool is_bad_abmax(const AlternatingMap& b, const Subspace& h) {
    require_proper(b, h);
    return long(image_span_B(b, h).dim()) <= threshold(h.dim(), b.n(), b.m());
}

bool is_bad_dmax_definition(const AlternatingMap& b, const PowerMap& f, const Subspace& h) {
    require_proper(b, h);
    validate(b, f, Mode::DMax);
    Subspace img = image_span_B(b, h);
    if (auto lin = linear_of(f))
        img = subspace_sum(img, image_span_F(*lin, h));
    else if (auto q = quadratic_of(f))
        img = subspace_sum(img, image_span_F(*q, h));
    return long(img.dim()) <= threshold(h.dim(), b.n(), b.m());
}

bool is_bad_dmax(const AlternatingMap& b, const PowerMap& f, const Subspace& h) {
    require_proper(b, h);
    validate(b, f, Mode::DMax);
    if (b.p() == 2) {
        auto& q = std::get<QuadraticMap>(f);
        return long(image_span_F(q, h).dim()) <= threshold(h.dim(), b.n(), b.m());
    }
    if (quotient_route(b, f, Mode::DMax)) {
        auto& lin = std::get<LinearPowerMap>(f);
        return h.contains(lin.kernel()) && image_span_F(lin, h).contains(image_span_B(b, h));
    }
    return is_bad_dmax_definition(b, f, h);
}

BadnessReport find_bad_subspace(const AlternatingMap& b, const PowerMap& f, Mode mode, const SearchOptions& opts) {
    return scan(b, f, mode, opts, true, false);
}

BadnessReport count_bad(const AlternatingMap& b, const PowerMap& f, Mode mode, const SearchOptions& opts) {
    return scan(b, f, mode, opts, false, true);
}

std::uint64_t count_isotropic_3(const AlternatingMap& b, const SearchOptions& opts) {
    const std::size_t n = b.n();
    if (n < 3) return 0;
    check_guard(b.p(), n, 3, opts.guard);
    std::uint64_t count = 0;
    if (use_gf2(b, opts)) {
        gf2::AltForm form(b);
        for_each_gf2(n, 3, opts.guard, [&](std::span<const gf2::Row> r) {
            if ((form.eval(r[0], r[1]) | form.eval(r[0], r[2]) | form.eval(r[1], r[2])) == 0) ++count;
            return true;
        });
        return count;
    }
    AltEvaluator ev(b);
    FpVector img(b.m(), 0);
    auto zero = [&] { return std::all_of(img.begin(), img.end(), [](Residue e) { return e == 0; }); };
    GrassmannianStream s(b.p(), n, 3, opts.guard);
    while (s.next()) {
        ev.eval(s.row(0), s.row(1), img);
        if (!zero()) continue;
        ev.eval(s.row(0), s.row(2), img);
        if (!zero()) continue;
        ev.eval(s.row(1), s.row(2), img);
        if (zero()) ++count;
    }
    return count;
}

std::uint64_t count_isotropic_3_flags(const AlternatingMap& b, const SearchOptions& opts) {
    const std::size_t n = b.n(), m = b.m();
    const std::uint64_t p = b.p();
    if (n < 3) return 0;
    check_guard(b.p(), n, 2, opts.guard);
    // lines of P^perp / P when dim P^perp = c
    std::vector<std::uint64_t> lines(n + 1, 0);
    for (std::size_t c = 3; c <= n; ++c) lines[c] = lines[c - 1] * p + 1;
    std::uint64_t total = 0;

    if (use_gf2(b, opts)) {
        gf2::AltForm form(b);
        std::vector<gf2::Row> functionals(2 * m);
        for_each_gf2(n, 2, opts.guard, [&](std::span<const gf2::Row> r) {
            if (form.eval(r[0], r[1]) != 0) return true;
            std::fill(functionals.begin(), functionals.end(), 0);
            for (std::size_t j = 0; j < n; ++j) {
                gf2::Row e = gf2::Row(1) << j;
                gf2::Row a = form.eval(r[0], e), c = form.eval(r[1], e);
                for (std::size_t k = 0; k < m; ++k) {
                    functionals[k] |= ((a >> k) & 1) << j;
                    functionals[m + k] |= ((c >> k) & 1) << j;
                }
            }
            total += lines[n - gf2::rank(functionals)];
            return true;
        });
    } else {
        AltEvaluator ev(b);
        FpVector img(m, 0), block(m * n, 0);
        GrassmannianStream s(b.p(), n, 2, opts.guard);
        while (s.next()) {
            ev.eval(s.row(0), s.row(1), img);
            if (std::any_of(img.begin(), img.end(), [](Residue e) { return e != 0; })) continue;
            SpanBuilder sb(ev.field(), n);
            for (std::size_t r = 0; r < 2; ++r) {
                ev.left_functionals(s.row(r), block);
                for (std::size_t k = 0; k < m; ++k) sb.insert(std::span<const Residue>(block).subspan(k * n, n));
            }
            total += lines[n - sb.rank()];
        }
    }
    const std::uint64_t planes_per_space = p * p + p + 1;
    if (total % planes_per_space != 0) throw std::logic_error("isotropic flag count not divisible by p^2+p+1");
    return total / planes_per_space;
}

std::pair<AlternatingMap, PowerMap> sample_instance(std::uint32_t p, std::size_t n, Mode mode, Rng& rng) {
    const std::size_t gap = mode_gap(mode);
    if (n < gap) throw std::invalid_argument("n too small for mode " + std::string(to_string(mode)));
    const std::size_t m = n - gap;
    if (mode == Mode::DMax && p == 2) {
        auto q = sample_quadratic(n, m, rng);
        auto b = associated_B(q);
        return {std::move(b), PowerMap(std::move(q))};
    }
    auto b = sample_alternating(p, n, m, rng);
    if (mode == Mode::DMax) return {std::move(b), PowerMap(canonical_linear_F(p, n, m))};
    if (p == 2) {
        auto q = zero_diagonal_quadratic(b);
        return {std::move(b), PowerMap(std::move(q))};
    }
    return {std::move(b), PowerMap()};
}

Certificate certify_loop(std::uint32_t p, std::size_t n, Mode mode, std::uint64_t seed, std::uint64_t max_attempts,
                         const SearchOptions& opts) {
    require_matrix_prime(p);
    if (max_attempts == 0) throw std::invalid_argument("max_attempts must be positive");
    Certificate cert;
    cert.p = p;
    cert.n = n;
    cert.m = n - mode_gap(mode);
    cert.mode = mode;
    cert.seed = seed;
    cert.max_attempts = max_attempts;
    for (std::uint64_t a = 1; a <= max_attempts; ++a) {
        Rng rng(substream_seed(seed, a));
        auto [b, f] = sample_instance(p, n, mode, rng);
        auto report = find_bad_subspace(b, f, mode, opts);
        if (!report.witness && !report.exhaustive)
            throw GuardExceeded("search guard exceeded before the scan completed");
        cert.attempts = a;
        cert.b = std::move(b);
        cert.f = std::move(f);
        cert.witness = std::move(report.witness);
        if (!cert.witness) {
            cert.certified = true;
            return cert;
        }
    }
    return cert;
}

}  // namespace pglab
