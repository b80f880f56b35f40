#include "pglab/experiments.hpp"

#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "pglab/boundscalc.hpp"

namespace pglab {

namespace {

/// Runs body(i) for i in [0, count) on `threads` workers. Each index writes
/// its own slot, so the result does not depend on scheduling.
template <class Fn>
void parallel_for(std::uint64_t count, unsigned threads, Fn&& body) {
    if (threads <= 1 || count < 2) {
        for (std::uint64_t i = 0; i < count; ++i) body(i);
        return;
    }
    threads = unsigned(std::min<std::uint64_t>(threads, count));
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w)
        pool.emplace_back([&, w] {
            try {
                for (std::uint64_t i = w; i < count; i += threads) body(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

std::size_t choose2(std::size_t n) { return n * (n > 0 ? n - 1 : 0) / 2; }

BigInt map_space_size(std::uint32_t p, std::size_t n, std::size_t m) {
    return ipow(BigInt(p), (unsigned long)(m * choose2(n)));
}

/// Odometer over every coefficient matrix of Alt(F_p^n, F_p^m).
template <class Fn>
void for_each_alternating(std::uint32_t p, std::size_t n, std::size_t m, Fn&& fn) {
    const std::size_t cols = choose2(n);
    std::vector<Residue> digits(m * cols, 0);
    while (true) {
        FpMatrix c(p, m, cols);
        for (std::size_t i = 0; i < digits.size(); ++i) c.set(i / cols, i % cols, digits[i]);
        fn(AlternatingMap(n, std::move(c)));
        std::size_t i = 0;
        while (i < digits.size() && ++digits[i] == p) digits[i++] = 0;
        if (i == digits.size()) break;
    }
}

void require_limit(std::uint32_t p, std::size_t n, std::size_t m, std::uint64_t limit) {
    if (map_space_size(p, n, m) > BigInt(std::to_string(limit)))
        throw GuardExceeded("map space of size " + map_space_size(p, n, m).get_str() + " exceeds the limit " +
                            std::to_string(limit));
}

bool has_bad(const AlternatingMap& b, const PowerMap& f, Mode mode, const SearchOptions& opts, TrialOutput& out) {
    auto rep = find_bad_subspace(b, f, mode, opts);
    if (!rep.witness && !rep.exhaustive) throw GuardExceeded("search guard exceeded before the scan completed");
    if (rep.witness) out.bad_dim = rep.witness->dim();
    return rep.witness.has_value();
}

}  // namespace

ExperimentRecord run_moments(std::uint32_t p, std::size_t n, std::uint64_t trials, unsigned k_max, std::uint64_t seed,
                             const RunOptions& opts) {
    require_matrix_prime(p);
    if (n < 3) throw std::invalid_argument("moments need n >= 3");
    ExperimentRecord rec;
    rec.experiment = "moments";
    rec.p = p;
    rec.n = n;
    rec.m = n - 3;
    rec.mode = Mode::AbMax;
    rec.trials = trials;
    rec.seed = seed;
    rec.outputs.resize(trials);
    parallel_for(trials, opts.threads, [&](std::uint64_t i) {
        Rng rng(substream_seed(seed, i + 1));
        auto b = sample_alternating(p, n, n - 3, rng);
        rec.outputs[i].trial = i + 1;
        rec.outputs[i].n3 = count_isotropic_3_flags(b, opts.search);
    });
    summarize_moments(rec, k_max);
    return rec;
}

void summarize_moments(ExperimentRecord& rec, unsigned k_max) {
    rec.moments.reset();
    if (rec.outputs.empty()) return;
    MomentSummary s;
    std::vector<double> xs;
    for (auto& o : rec.outputs) xs.push_back(double(o.n3));
    auto mv = stats::mean_var(xs);
    s.mean = mv.mean;
    s.variance = mv.variance;
    const BigInt g = gaussian_binomial(unsigned(rec.n), 3, rec.p);
    for (unsigned k = 1; k <= k_max; ++k) {
        double acc = 0;
        for (double x : xs) {
            double f = 1;
            for (unsigned i = 0; i < k; ++i) f *= x - i;
            acc += f;
        }
        s.factorial_moments.push_back(acc / double(xs.size()));
        s.factorial_targets.push_back(falling_factorial(BigRational(g), k) *
                                      rpow(BigRational(long(rec.p)), -3L * long(k) * (long(rec.n) - 3)));
    }
    s.target_mean = BigRational(g) * rpow(BigRational(long(rec.p)), -3L * (long(rec.n) - 3));
    s.mean_interval = stats::normal_interval(to_double(s.target_mean), s.variance, xs.size());
    s.mean_ok = s.mean_interval.contains(s.mean);
    rec.moments = std::move(s);
}

ExperimentRecord run_no_bad_frequency(std::uint32_t p, std::size_t n, Mode mode, std::uint64_t trials,
                                      std::uint64_t seed, const RunOptions& opts,
                                      const std::optional<LinearPowerMap>& f_override) {
    require_matrix_prime(p);
    if (n < mode_gap(mode)) throw std::invalid_argument("n too small for mode " + std::string(to_string(mode)));
    if (f_override && (mode != Mode::DMax || p == 2 || f_override->n() != n || f_override->m() != n - 2))
        throw std::invalid_argument("an F override needs odd-p d-max with matching shape");
    ExperimentRecord rec;
    rec.experiment = "frequency";
    rec.p = p;
    rec.n = n;
    rec.m = n - mode_gap(mode);
    rec.mode = mode;
    rec.trials = trials;
    rec.seed = seed;
    rec.outputs.resize(trials);
    parallel_for(trials, opts.threads, [&](std::uint64_t i) {
        Rng rng(substream_seed(seed, i + 1));
        auto [b, f] = sample_instance(p, n, mode, rng);
        if (f_override) f = *f_override;
        auto& out = rec.outputs[i];
        out.trial = i + 1;
        if (mode == Mode::AbMax && n >= 3) out.n3 = count_isotropic_3_flags(b, opts.search);
        out.bad_found = has_bad(b, f, mode, opts.search, out);
    });
    summarize_frequency(rec);
    return rec;
}

void summarize_frequency(ExperimentRecord& rec) {
    rec.frequency.reset();
    if (rec.outputs.empty() || !rec.mode) return;
    FrequencySummary s;
    for (auto& o : rec.outputs) s.no_bad += o.bad_found ? 0 : 1;
    const std::uint64_t t = rec.outputs.size();
    s.no_bad_interval = stats::wilson(s.no_bad, t);
    s.bad_interval = stats::wilson(t - s.no_bad, t);
    if (*rec.mode == Mode::AbMax) {
        s.comparator = std::exp(-to_double(bounds::lambda_p_n(rec.p, unsigned(rec.n))));
        s.comparator_kind = "exp(-lambda_p(n)), asymptotic";
    } else {
        s.bad_bound = bounds::dmax_markov_bound(rec.p, unsigned(rec.n));
        s.comparator = std::max(0.0, 1 - to_double(*s.bad_bound));
        s.comparator_kind = "1 - Markov bound, lower bound";
    }
    rec.frequency = std::move(s);
}

ExhaustiveResult exhaustive_tiny(std::uint32_t p, std::size_t n, std::size_t m, std::uint64_t limit,
                                 const SearchOptions& opts) {
    require_matrix_prime(p);
    require_limit(p, n, m, limit);
    ExhaustiveResult r;
    r.p = p;
    r.n = n;
    r.m = m;
    const bool isotropic_is_bad = n <= m + 3;
    BigInt sum = 0;
    auto record = [&](std::uint64_t n3, bool surjective, auto&& no_bad) {
        ++r.maps;
        ++r.n3_distribution[n3];
        sum += BigInt(std::to_string(n3));
        if (surjective) {
            ++r.surjective;
            if (!r.min_n3_surjective || n3 < *r.min_n3_surjective) r.min_n3_surjective = n3;
            if (n3 == 0) ++r.surjective_without_n3;
        }
        if (!(n3 > 0 && isotropic_is_bad) && no_bad()) ++r.no_bad;
    };
    auto no_bad_of = [&](const AlternatingMap& b) { return !find_bad_subspace(b, {}, Mode::AbMax, opts).witness; };

    if (p == 2 && !opts.generic_only && n >= 3 && n <= 12 && m <= 32) {
        const std::size_t cols = choose2(n), bits = m * cols;
        const auto& threes = gf2::subspaces(n, 3);
        std::vector<gf2::Row> masks(cols);
        for (std::uint64_t code = 0; code < (std::uint64_t(1) << bits); ++code) {
            for (std::size_t w = 0; w < cols; ++w) {
                gf2::Row mask = 0;
                for (std::size_t k = 0; k < m; ++k) mask |= ((code >> (k * cols + w)) & 1) << k;
                masks[w] = mask;
            }
            gf2::AltForm form(n, m, masks);
            std::uint64_t n3 = 0;
            for (std::size_t i = 0; i < threes.size(); ++i) {
                auto h = threes.rows(i);
                if ((form.eval(h[0], h[1]) | form.eval(h[0], h[2]) | form.eval(h[1], h[2])) == 0) ++n3;
            }
            record(n3, gf2::rank(masks) == m, [&] {
                FpMatrix c(2, m, cols);
                for (std::size_t k = 0; k < m; ++k)
                    for (std::size_t w = 0; w < cols; ++w) c.set(k, w, Residue((code >> (k * cols + w)) & 1));
                return no_bad_of(AlternatingMap(n, std::move(c)));
            });
        }
    } else {
        for_each_alternating(p, n, m, [&](const AlternatingMap& b) {
            record(count_isotropic_3(b, opts), is_surjective(b), [&] { return no_bad_of(b); });
        });
    }
    r.mean_n3 = BigRational(sum, BigInt(std::to_string(r.maps)));
    r.mean_n3.canonicalize();
    r.closed_form_mean = BigRational(gaussian_binomial(unsigned(n), 3, p)) * rpow(BigRational(long(p)), -3L * long(m));
    return r;
}

LemmaP7Result verify_lemma_p7(std::uint32_t p, std::uint64_t trials, std::uint64_t seed) {
    LemmaP7Result r;
    r.p = p;
    if (p == 2) {
        auto ex = exhaustive_tiny(2, 5, 2);
        r.exhaustive = true;
        r.scanned = ex.maps;
        r.surjective = ex.surjective;
        r.counterexamples = ex.surjective_without_n3;
        r.min_n3_surjective = ex.min_n3_surjective;
        return r;
    }
    require_matrix_prime(p);
    for (std::uint64_t t = 1; t <= trials; ++t) {
        Rng rng(substream_seed(seed, t));
        auto b = sample_alternating(p, 5, 2, rng);
        ++r.scanned;
        if (!is_surjective(b)) continue;
        ++r.surjective;
        auto n3 = count_isotropic_3_flags(b);
        if (!r.min_n3_surjective || n3 < *r.min_n3_surjective) r.min_n3_surjective = n3;
        if (n3 == 0) ++r.counterexamples;
    }
    return r;
}

std::pair<std::size_t, std::size_t> wedge_lemma_dims(const std::vector<Subspace>& hs) {
    if (hs.empty()) return {0, 0};
    const std::uint32_t p = hs.front().p();
    const std::size_t n = hs.front().ambient_dim();
    WedgeIndex idx(n);
    Subspace wedge_sum = Subspace::zero(p, idx.size()), sum = Subspace::zero(p, n);
    for (auto& h : hs) {
        wedge_sum = subspace_sum(wedge_sum, wedge_subspace(h, idx));
        sum = subspace_sum(sum, h);
    }
    return {wedge_sum.dim(), sum.dim()};
}

WedgeLemmaResult wedge_lemma_property(std::uint32_t p, std::size_t n, std::size_t k, std::uint64_t trials,
                                      std::uint64_t seed) {
    require_matrix_prime(p);
    if (k == 0 || n < 3 || (k > 1 && n < 4)) throw std::invalid_argument("wedge lemma needs n >= 3 (n >= 4 for k > 1)");
    if (BigInt(std::to_string(k)) > gaussian_binomial(unsigned(n), 3, p))
        throw std::invalid_argument("fewer than k distinct 3-spaces exist");
    WedgeLemmaResult r;
    r.p = p;
    r.n = n;
    r.k = k;
    r.trials = trials;
    r.seed = seed;
    PrimeField field(p);
    // dimensions D of the container U with at least k distinct 3-spaces
    std::size_t lo = 3;
    while (BigInt(std::to_string(k)) > gaussian_binomial(unsigned(lo), 3, p)) ++lo;
    const std::size_t hi = std::max(lo, std::min(n, 3 * k));

    auto random_vector = [&](Rng& rng, std::size_t len) {
        FpVector v(len);
        for (auto& x : v) x = Residue(rng.below(p));
        return v;
    };
    for (std::uint64_t t = 1; t <= trials; ++t) {
        Rng rng(substream_seed(seed, t));
        const std::size_t d = lo + rng.below(std::uint32_t(hi - lo + 1));
        std::vector<FpVector> u;
        SpanBuilder ub(field, n);
        while (u.size() < d) {
            auto v = random_vector(rng, n);
            if (ub.insert(v)) u.push_back(std::move(v));
        }
        std::vector<Subspace> hs;
        while (hs.size() < k) {
            std::vector<FpVector> gens;
            SpanBuilder hb(field, n);
            while (gens.size() < 3) {
                auto c = random_vector(rng, d);
                FpVector v(n, 0);
                for (std::size_t i = 0; i < d; ++i)
                    for (std::size_t j = 0; j < n; ++j) v[j] = field.add(v[j], field.mul(c[i], u[i][j]));
                if (hb.insert(v)) gens.push_back(std::move(v));
            }
            auto h = Subspace::span(p, n, gens);
            if (std::find(hs.begin(), hs.end(), h) == hs.end()) hs.push_back(std::move(h));
        }
        auto [lhs, rhs] = wedge_lemma_dims(hs);
        const bool independent = rhs == 3 * k;
        if (lhs == rhs)
            ++r.equality_cases;
        else
            ++r.strict_cases;
        if (lhs < rhs || (lhs == rhs) != independent) ++r.violations;
    }
    return r;
}

bool quadratic_map_is_good(const QuadraticMap& f) {
    const std::size_t n = f.n();
    if (n > gf2::kMaxDim) throw DimensionMismatch("quadratic_map_is_good: n above 64");
    gf2::QuadForm qf(f);
    for (std::size_t h = 2; h < n; ++h) {
        const auto& list = gf2::subspaces(n, h);
        for (std::size_t i = 0; i < list.size(); ++i) {
            auto rows = list.rows(i);
            gf2::SpanBuilder sb;
            gf2::Row x = 0;
            bool enough = false;
            // Gray-code walk through the 2^h elements of H
            for (std::uint64_t g = 1; g < (std::uint64_t(1) << h) && !enough; ++g) {
                x ^= rows[std::countr_zero(g)];
                sb.insert(qf.eval(x));
                enough = sb.rank() + 1 >= h;
            }
            if (!enough) return false;
        }
    }
    return true;
}

QuadSearchResult quadratic_search(std::size_t n, std::uint64_t max_attempts, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("quad-search needs n >= 2");
    QuadSearchResult r;
    r.n = n;
    r.seed = seed;
    r.max_attempts = max_attempts;
    for (std::uint64_t a = 1; a <= max_attempts; ++a) {
        Rng rng(substream_seed(seed, a));
        auto f = sample_quadratic(n, n - 2, rng);
        r.attempts = a;
        if (!quadratic_map_is_good(f)) continue;
        auto rep = find_bad_subspace(associated_B(f), PowerMap(f), Mode::DMax);
        r.reverified = rep.exhaustive && !rep.witness;
        r.found = std::move(f);
        return r;
    }
    return r;
}

LinearPowerMap mixed_surjection(std::uint32_t p, std::size_t n, std::size_t m, std::uint64_t seed) {
    if (p == 2) throw std::invalid_argument("mixed_surjection: odd p only");
    Rng rng(substream_seed(seed, 0));
    const auto canonical = canonical_linear_F(p, n, m);
    while (true) {
        FpMatrix a(p, m, n);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) a.set(i, j, Residue(rng.below(p)));
        if (rank(a) == m && !(a == canonical.matrix())) return LinearPowerMap(std::move(a));
    }
}

FIndependenceResult f_independence_check(std::uint32_t p, std::size_t n, std::uint64_t trials, std::uint64_t seed,
                                         const RunOptions& opts) {
    if (p == 2 || n < 2) throw std::invalid_argument("f-independence needs odd p and n >= 2");
    auto mixed_f = mixed_surjection(p, n, n - 2, seed);
    auto canonical = run_no_bad_frequency(p, n, Mode::DMax, trials, seed, opts);
    auto mixed = run_no_bad_frequency(p, n, Mode::DMax, trials, seed, opts, mixed_f);
    bool overlap = trials > 0 && canonical.frequency->no_bad_interval.overlaps(mixed.frequency->no_bad_interval);
    return {std::move(canonical), std::move(mixed), std::move(mixed_f), overlap};
}

std::uint64_t dmax_bad_total_exhaustive(std::uint32_t p, std::size_t n, const LinearPowerMap& f, std::uint64_t limit) {
    if (n < 2 || f.n() != n || f.m() != n - 2) throw DimensionMismatch("F must map F_p^n onto F_p^{n-2}");
    require_limit(p, n, n - 2, limit);
    std::uint64_t total = 0;
    PowerMap pf = f;
    for_each_alternating(p, n, n - 2, [&](const AlternatingMap& b) { total += count_bad(b, pf, Mode::DMax).total(); });
    return total;
}

std::map<std::uint64_t, std::uint64_t> sampled_n3_distribution(std::uint32_t p, std::size_t n, std::size_t m,
                                                               std::uint64_t trials, std::uint64_t seed) {
    std::map<std::uint64_t, std::uint64_t> hist;
    for (std::uint64_t t = 1; t <= trials; ++t) {
        Rng rng(substream_seed(seed, t));
        ++hist[count_isotropic_3_flags(sample_alternating(p, n, m, rng))];
    }
    return hist;
}

}  // namespace pglab
