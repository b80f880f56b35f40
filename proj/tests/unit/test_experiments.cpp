#include <cmath>

#include "doctest.h"
#include "pglab/boundscalc.hpp"
#include "pglab/experiments.hpp"

using namespace pglab;

TEST_CASE("Wilson and normal intervals") {
    auto w = stats::wilson(0, 100);
    CHECK(w.lo == 0.0);
    CHECK(w.hi > 0.04);
    CHECK(w.hi < 0.07);
    auto h = stats::wilson(50, 100);
    CHECK(h.contains(0.5));
    CHECK(h.hi - 0.5 == doctest::Approx(0.5 - h.lo));
    CHECK_THROWS(stats::wilson(0, 0));
    auto n = stats::normal_interval(1.0, 4.0, 100);
    CHECK(n.lo == doctest::Approx(1 - 2.576 * 0.2));
    auto mv = stats::mean_var({1, 2, 3, 4});
    CHECK(mv.mean == 2.5);
    CHECK(mv.variance == doctest::Approx(5.0 / 3));
}

TEST_CASE("chi-square helpers") {
    CHECK(stats::chi_square_critical(2, 1e-3) == doctest::Approx(13.816).epsilon(1e-4));
    CHECK(stats::chi_square_critical(4, 1e-3) == doctest::Approx(18.467).epsilon(1e-4));
    CHECK(stats::chi_square_statistic({50, 50}, {0.5, 0.5}) == 0.0);
}

TEST_CASE("sampled coefficients are uniform") {
    Rng rng(99);
    std::vector<std::uint64_t> hist(5, 0);
    for (int t = 0; t < 10000; ++t) ++hist[sample_alternating(5, 2, 1, rng).coeff().at(0, 0)];
    CHECK(stats::chi_square_statistic(hist, std::vector<double>(5, 0.2)) < stats::chi_square_critical(4, 1e-3));
}

TEST_CASE("quadratic maps hit a fixed subspace with the counted probability") {
    // F: F_2^4 -> F_2^2. H = span(e1,e2), K = 0: 3 coefficients per coordinate vanish, 2^-6.
    // H = span(e1,e2,e3), K = span(f1): 6 coefficients of the second coordinate vanish, 2^-6.
    auto h2 = Subspace::span(2, 4, {unit_vector(4, 0), unit_vector(4, 1)});
    auto h3 = Subspace::span(2, 4, {unit_vector(4, 0), unit_vector(4, 1), unit_vector(4, 2)});
    auto k1 = Subspace::span(2, 2, {unit_vector(2, 0)});
    Rng rng(5);
    std::uint64_t hit2 = 0, hit3 = 0;
    const std::uint64_t trials = 10000;
    for (std::uint64_t t = 0; t < trials; ++t) {
        auto f = sample_quadratic(4, 2, rng);
        hit2 += image_span_F(f, h2).dim() == 0;
        hit3 += k1.contains(image_span_F(f, h3));
    }
    CHECK(stats::wilson(hit2, trials).contains(1.0 / 64));
    CHECK(stats::wilson(hit3, trials).contains(1.0 / 64));
}

TEST_CASE("exhaustive tiny cases") {
    auto r = exhaustive_tiny(2, 4, 1);
    CHECK(r.maps == 64);
    CHECK(r.mean_n3 == BigRational(15, 8));
    CHECK(r.mean_n3 == r.closed_form_mean);
    CHECK(r.n3_distribution == std::map<std::uint64_t, std::uint64_t>{{0, 28}, {3, 35}, {15, 1}});
    CHECK(r.no_bad == 28);
    CHECK(r.surjective == 63);

    SearchOptions generic;
    generic.generic_only = true;
    auto g = exhaustive_tiny(2, 4, 1, kDefaultExhaustiveLimit, generic);
    CHECK(g.n3_distribution == r.n3_distribution);
    CHECK(g.no_bad == r.no_bad);

    auto r3 = exhaustive_tiny(3, 4, 1);
    CHECK(r3.maps == 729);
    CHECK(r3.mean_n3 == r3.closed_form_mean);
    CHECK(r3.mean_n3 == BigRational(40, 27));

    CHECK_THROWS_AS(exhaustive_tiny(2, 6, 3), GuardExceeded);
    CHECK_THROWS_AS(exhaustive_tiny(2, 5, 2, 1000), GuardExceeded);
}

TEST_CASE("sampled N_3 distribution matches the exhaustive one") {
    auto exact = exhaustive_tiny(2, 4, 1);
    auto hist = sampled_n3_distribution(2, 4, 1, 10000, 3);
    std::vector<std::uint64_t> obs;
    std::vector<double> probs;
    for (auto [v, c] : exact.n3_distribution) {
        obs.push_back(hist.count(v) ? hist.at(v) : 0);
        probs.push_back(double(c) / double(exact.maps));
    }
    std::uint64_t seen = 0;
    for (auto [v, c] : hist) seen += c;
    CHECK(seen == 10000);
    CHECK(stats::chi_square_statistic(obs, probs) < stats::chi_square_critical(2, 1e-3));
}

TEST_CASE("lemma p^7 by sampling for p = 3") {
    auto r = verify_lemma_p7(3, 300, 8);
    CHECK(r.scanned == 300);
    CHECK(r.surjective > 250);
    CHECK(r.holds());
    CHECK(*r.min_n3_surjective >= 1);
}

TEST_CASE("moments record") {
    auto r = run_moments(2, 6, 300, 3, 17);
    REQUIRE(r.moments);
    CHECK(r.outputs.size() == 300);
    CHECK(r.m == 3);
    CHECK(r.moments->target_mean == bounds::lambda_p_n(2, 6));
    CHECK(r.moments->factorial_targets.size() == 3);
    CHECK(r.moments->factorial_moments[0] == doctest::Approx(r.moments->mean));
    CHECK(r.moments->mean_ok);
    auto copy = r;
    summarize_moments(copy, 3);
    CHECK(copy.moments->mean == r.moments->mean);
    RunOptions threaded;
    threaded.threads = 3;
    auto par = run_moments(2, 6, 300, 3, 17, threaded);
    for (std::size_t i = 0; i < 300; ++i) CHECK(par.outputs[i].n3 == r.outputs[i].n3);
    CHECK_FALSE(run_moments(2, 6, 0, 3, 1).moments);
}

TEST_CASE("no-bad frequency records") {
    auto r = run_no_bad_frequency(2, 5, Mode::AbMax, 60, 4);
    CHECK(r.frequency->no_bad == 0);
    auto d = run_no_bad_frequency(3, 5, Mode::DMax, 200, 4);
    REQUIRE(d.frequency);
    REQUIRE(d.frequency->bad_bound);
    CHECK(d.frequency->bad_interval.lo <= to_double(*d.frequency->bad_bound));
    CHECK(d.frequency->comparator == doctest::Approx(1 - (4.0 / 27 + 8.0 / 81)));
    for (auto& o : d.outputs)
        if (o.bad_found) CHECK(o.bad_dim >= 2);
    auto a = run_no_bad_frequency(2, 7, Mode::AbMax, 50, 4);
    for (auto& o : a.outputs)
        if (o.n3 > 0) CHECK(o.bad_found);
}

TEST_CASE("wedge lemma examples") {
    auto e = [](std::vector<std::size_t> idx, std::size_t n) {
        std::vector<FpVector> v;
        for (auto i : idx) v.push_back(unit_vector(n, i));
        return Subspace::span(2, n, v);
    };
    CHECK(wedge_lemma_dims({e({0, 1, 2}, 6), e({3, 4, 5}, 6)}) == std::pair<std::size_t, std::size_t>{6, 6});
    CHECK(wedge_lemma_dims({e({0, 1, 2}, 5), e({0, 1, 3}, 5)}) == std::pair<std::size_t, std::size_t>{5, 4});
    CHECK(wedge_lemma_dims({e({0, 1, 2}, 5)}) == std::pair<std::size_t, std::size_t>{3, 3});
    auto r = wedge_lemma_property(2, 9, 2, 500, 1);
    CHECK(r.violations == 0);
    CHECK(r.equality_cases > 0);
    CHECK(r.strict_cases > 0);
    auto r3 = wedge_lemma_property(3, 7, 2, 300, 2);
    CHECK(r3.violations == 0);
    CHECK(wedge_lemma_property(2, 6, 1, 50, 3).strict_cases == 0);
}

TEST_CASE("quadratic search") {
    for (std::size_t n = 3; n <= 6; ++n) {
        auto r = quadratic_search(n, 10000, 11);
        REQUIRE(r.found);
        CHECK(r.reverified);
        CHECK(quadratic_map_is_good(*r.found));
        CHECK(count_bad(associated_B(*r.found), PowerMap(*r.found), Mode::DMax).total() == 0);
    }
    auto two = quadratic_search(2, 5, 1);
    CHECK(two.attempts == 1);
    CHECK(two.found);
    CHECK_FALSE(quadratic_map_is_good(QuadraticMap(4, 2)));
}

TEST_CASE("good quadratic maps agree with the certifier on random samples") {
    Rng rng(3);
    for (int t = 0; t < 200; ++t) {
        auto f = sample_quadratic(5, 3, rng);
        CHECK(quadratic_map_is_good(f) == !find_bad_subspace(associated_B(f), PowerMap(f), Mode::DMax).witness);
    }
}

TEST_CASE("fixed F choice does not change the d-max statistics") {
    auto r = f_independence_check(3, 5, 300, 21);
    CHECK(r.overlap);
    CHECK_FALSE(r.mixed_f == canonical_linear_F(3, 5, 3));
    CHECK(r.mixed_f.is_surjective());
    auto again = f_independence_check(3, 5, 300, 21);
    CHECK(again.mixed.frequency->no_bad == r.mixed.frequency->no_bad);
}

TEST_CASE("exact d-max totals are independent of F") {
    // E[N] = 7/27 at (3,4) over all 3^12 maps
    auto canonical = dmax_bad_total_exhaustive(3, 4, canonical_linear_F(3, 4, 2));
    CHECK(canonical * 27 == 7 * 531441);
    CHECK(dmax_bad_total_exhaustive(3, 4, mixed_surjection(3, 4, 2, 5)) == canonical);
}
