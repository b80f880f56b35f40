#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pglab/certifier.hpp"
#include "pglab/stats.hpp"

namespace pglab {

inline constexpr int kExperimentSchemaVersion = 1;

/// Result of one trial. Fields that an experiment does not measure stay at
/// their defaults.
struct TrialOutput {
    std::uint64_t trial = 0;  // 1-based substream index
    std::uint64_t n3 = 0;
    bool bad_found = false;
    std::uint64_t bad_dim = 0;  // dimension of the first bad subspace
};

struct MomentSummary {
    double mean = 0, variance = 0;
    /// Empirical E[(N_3)_k], k = 1..k_max.
    std::vector<double> factorial_moments;
    /// ([n 3]_p)_k p^{-3k(n-3)}; exact for k = 1, asymptotic for k >= 2.
    std::vector<BigRational> factorial_targets;
    BigRational target_mean;
    stats::Interval mean_interval;  // target +- z s / sqrt(trials)
    bool mean_ok = false;
};

struct FrequencySummary {
    std::uint64_t no_bad = 0;
    stats::Interval no_bad_interval;   // Wilson, for Pr(no bad subspace)
    stats::Interval bad_interval;      // Wilson, for Pr(some bad subspace)
    /// exp(-lambda_p(n)) for ab-max; 1 - Markov bound (floored at 0) for d-max.
    double comparator = 0;
    std::string comparator_kind;
    /// Markov upper bound on Pr(bad) for d-max; absent for ab-max.
    std::optional<BigRational> bad_bound;
};

struct ExperimentRecord {
    std::string experiment;
    std::uint32_t p = 2;
    std::size_t n = 0, m = 0;
    std::optional<Mode> mode;
    std::uint64_t trials = 0, seed = 0;
    std::vector<TrialOutput> outputs;
    std::optional<MomentSummary> moments;
    std::optional<FrequencySummary> frequency;
};

struct RunOptions {
    SearchOptions search;
    /// Worker threads; the record does not depend on this.
    unsigned threads = 1;
};

/// m = n-3: N_3 per sampled map via the plane-extension counter.
ExperimentRecord run_moments(std::uint32_t p, std::size_t n, std::uint64_t trials, unsigned k_max, std::uint64_t seed,
                             const RunOptions& opts = {});

/// Frequency of maps with no bad subspace, sampled as in certify_loop.
/// `f_override` replaces the canonical F in odd-p d-max runs.
ExperimentRecord run_no_bad_frequency(std::uint32_t p, std::size_t n, Mode mode, std::uint64_t trials,
                                      std::uint64_t seed, const RunOptions& opts = {},
                                      const std::optional<LinearPowerMap>& f_override = std::nullopt);

/// Recomputes the summaries of a record from its raw outputs.
void summarize_moments(ExperimentRecord& rec, unsigned k_max);
void summarize_frequency(ExperimentRecord& rec);

inline constexpr std::uint64_t kDefaultExhaustiveLimit = std::uint64_t(1) << 24;

struct ExhaustiveResult {
    std::uint32_t p = 2;
    std::size_t n = 0, m = 0;
    std::uint64_t maps = 0;
    std::map<std::uint64_t, std::uint64_t> n3_distribution;
    BigRational mean_n3;
    /// [n 3]_p p^{-3m}: every 3-space is totally isotropic with probability p^{-3m}.
    BigRational closed_form_mean;
    /// Maps without a bad subspace (ab-max threshold).
    std::uint64_t no_bad = 0;
    std::uint64_t surjective = 0;
    std::optional<std::uint64_t> min_n3_surjective;
    /// Surjective maps with N_3 = 0.
    std::uint64_t surjective_without_n3 = 0;
};

/// Walks all of Alt(F_p^n, F_p^m). Throws if p^{m C(n,2)} > limit.
ExhaustiveResult exhaustive_tiny(std::uint32_t p, std::size_t n, std::size_t m,
                                 std::uint64_t limit = kDefaultExhaustiveLimit, const SearchOptions& opts = {});

struct LemmaP7Result {
    std::uint32_t p = 2;
    bool exhaustive = false;
    std::uint64_t scanned = 0, surjective = 0, counterexamples = 0;
    std::optional<std::uint64_t> min_n3_surjective;
    bool holds() const { return counterexamples == 0; }
};

/// Surjective B in Alt(F_p^5, F_p^2) always has a totally isotropic
/// 3-space. Exhaustive for p = 2, sampled (`trials`, `seed`) otherwise.
LemmaP7Result verify_lemma_p7(std::uint32_t p, std::uint64_t trials = 0, std::uint64_t seed = 0);

struct WedgeLemmaResult {
    std::uint32_t p = 2;
    std::size_t n = 0, k = 0;
    std::uint64_t trials = 0, seed = 0;
    std::uint64_t violations = 0, equality_cases = 0, strict_cases = 0;
};

/// dim sum H_i^H_i = dim sum H_i for distinct 3-spaces H_1..H_k, which is
/// >= with equality iff dim sum H_i = 3k, checked on random tuples drawn
/// inside random subspaces so both branches occur.
WedgeLemmaResult wedge_lemma_property(std::uint32_t p, std::size_t n, std::size_t k, std::uint64_t trials,
                                      std::uint64_t seed);

/// One tuple: returns (dim sum H_i^H_i, dim sum H_i).
std::pair<std::size_t, std::size_t> wedge_lemma_dims(const std::vector<Subspace>& hs);

struct QuadSearchResult {
    std::size_t n = 0;
    std::uint64_t seed = 0, max_attempts = 0, attempts = 0;
    std::optional<QuadraticMap> found;
    /// find_bad_subspace on the found map reports no bad subspace.
    bool reverified = false;
};

/// dim F(H) >= dim H - 1 for every proper H, with F(H) computed by
/// enumerating the elements of H.
bool quadratic_map_is_good(const QuadraticMap& f);

/// Rejection sampling of F: F_2^n -> F_2^{n-2}; attempt a uses substream a.
QuadSearchResult quadratic_search(std::size_t n, std::uint64_t max_attempts, std::uint64_t seed);

struct FIndependenceResult {
    ExperimentRecord canonical, mixed;
    LinearPowerMap mixed_f;
    bool overlap = false;
};

/// A fixed surjection different from the canonical projection, drawn from substream 0.
LinearPowerMap mixed_surjection(std::uint32_t p, std::size_t n, std::size_t m, std::uint64_t seed);

FIndependenceResult f_independence_check(std::uint32_t p, std::size_t n, std::uint64_t trials, std::uint64_t seed,
                                         const RunOptions& opts = {});

/// Total number of (B, H) bad pairs over every B in Alt(F_p^n, F_p^{n-2}) for a fixed F.
std::uint64_t dmax_bad_total_exhaustive(std::uint32_t p, std::size_t n, const LinearPowerMap& f,
                                        std::uint64_t limit = kDefaultExhaustiveLimit);

/// Empirical N_3 histogram over sampled maps (for comparison with exhaustive_tiny).
std::map<std::uint64_t, std::uint64_t> sampled_n3_distribution(std::uint32_t p, std::size_t n, std::size_t m,
                                                               std::uint64_t trials, std::uint64_t seed);

}  // namespace pglab
