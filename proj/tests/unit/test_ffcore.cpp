#include <cmath>
#include <set>

#include "doctest.h"
#include "pglab/ffcore/gf2.hpp"
#include "pglab/ffcore/grassmannian.hpp"
#include "pglab/ffcore/wedge.hpp"
#include "pglab/random.hpp"

using namespace pglab;

namespace {

// All vectors of F_p^n in odometer order.
std::vector<FpVector> all_vectors(std::uint32_t p, std::size_t n) {
    std::vector<FpVector> out;
    FpVector v(n, 0);
    while (true) {
        out.push_back(v);
        std::size_t i = 0;
        while (i < n && ++v[i] == p) v[i++] = 0;
        if (i == n) break;
    }
    return out;
}

// Element set of the row space of `rows`, by summing all combinations.
std::set<FpVector> row_space(std::uint32_t p, std::size_t n, const std::vector<FpVector>& rows) {
    std::set<FpVector> out;
    for (auto& c : all_vectors(p, rows.size())) {
        FpVector v(n, 0);
        for (std::size_t r = 0; r < rows.size(); ++r)
            for (std::size_t j = 0; j < n; ++j) v[j] = Residue((v[j] + c[r] * rows[r][j]) % p);
        out.insert(v);
    }
    return out;
}

std::size_t log_p(std::size_t x, std::size_t p) {
    std::size_t k = 0;
    while (x > 1) x /= p, ++k;
    return k;
}

FpMatrix random_matrix(std::uint32_t p, std::size_t r, std::size_t c, Rng& rng) {
    FpMatrix m(p, r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m.set(i, j, Residue(rng.below(p)));
    return m;
}

}  // namespace

TEST_CASE("field arithmetic") {
    for (std::uint32_t p : {2u, 3u, 5u, 7u, 251u}) {
        PrimeField f(p);
        for (unsigned a = 1; a < p; ++a) CHECK(f.mul(Residue(a), f.inv(Residue(a))) == 1);
        CHECK(f.reduce(-1) == p - 1);
    }
    CHECK_THROWS(PrimeField(4));
    CHECK_THROWS(require_matrix_prime(257));
    CHECK(is_prime(65537));
    CHECK_FALSE(is_prime(1));
}

TEST_CASE("rank agrees with the size of the row space") {
    Rng rng(11);
    for (std::uint32_t p : {2u, 3u, 5u}) {
        for (int t = 0; t < 40; ++t) {
            std::size_t r = 1 + rng.below(3), c = 1 + rng.below(3);
            auto m = random_matrix(p, r, c, rng);
            auto space = row_space(p, c, m.row_vectors());
            CHECK(rank(m) == log_p(space.size(), p));
            auto e = rref(m);
            CHECK(row_space(p, c, e.rref.row_vectors()) == space);
        }
    }
}

TEST_CASE("nullspace is annihilated and has complementary dimension") {
    Rng rng(5);
    for (int t = 0; t < 50; ++t) {
        std::uint32_t p = t % 2 ? 3 : 7;
        auto m = random_matrix(p, 1 + rng.below(4), 1 + rng.below(5), rng);
        auto k = nullspace(m);
        CHECK(k.dim() + rank(m) == m.cols());
        for (auto& v : k.basis_rows())
            for (auto x : m.multiply(v)) CHECK(x == 0);
    }
}

TEST_CASE("subspace canonical form and containment") {
    auto a = Subspace::span(3, 3, {{1, 2, 0}, {2, 1, 0}, {0, 0, 0}});
    auto b = Subspace::span(3, 3, {{1, 2, 0}});
    CHECK(a == b);
    CHECK(a.dim() == 1);
    CHECK(a.contains(FpVector{2, 1, 0}));
    CHECK_FALSE(a.contains(FpVector{1, 1, 0}));
    auto s = subspace_sum(a, Subspace::span(3, 3, {{0, 0, 1}}));
    CHECK(s.dim() == 2);
    CHECK(s.contains(a));
    CHECK(Subspace::full(5, 4).dim() == 4);
    CHECK(Subspace::zero(5, 4).is_proper());
    CHECK_THROWS_AS(Subspace::span(3, 3, {{1, 2}}), DimensionMismatch);
}

TEST_CASE("gaussian binomials") {
    CHECK(gaussian_binomial(4, 2, 2) == 35);
    CHECK(gaussian_binomial(5, 2, 3) == 1210);
    CHECK(gaussian_binomial(7, 3, 2) == 11811);
    CHECK(gaussian_binomial(3, 5, 2) == 0);
    CHECK(gaussian_binomial(6, 0, 7) == 1);
}

TEST_CASE("Grassmannian stream visits every row space exactly once") {
    for (auto [p, n] : {std::pair{2u, 4u}, {3u, 3u}, {2u, 5u}, {5u, 2u}}) {
        for (unsigned d = 0; d <= n; ++d) {
            if (std::pow(double(std::pow(p, n)), d) > 2e5) continue;
            // oracle: distinct row spaces of all d x n matrices
            std::set<std::set<FpVector>> distinct;
            auto vecs = all_vectors(p, n);
            std::vector<std::size_t> pick(d, 0);
            while (true) {
                std::vector<FpVector> rows;
                for (auto i : pick) rows.push_back(vecs[i]);
                auto space = row_space(p, n, rows);
                if (log_p(space.size(), p) == d) distinct.insert(space);
                std::size_t i = 0;
                while (i < d && ++pick[i] == vecs.size()) pick[i++] = 0;
                if (i == d) break;
            }
            std::set<std::set<FpVector>> streamed;
            std::size_t visits = 0;
            GrassmannianStream s(p, n, d);
            while (s.next()) {
                ++visits;
                streamed.insert(row_space(p, n, s.current().basis_rows()));
                CHECK(s.current() == Subspace::span(p, n, s.current().basis_rows()));
            }
            CHECK(visits == distinct.size());
            CHECK(streamed == distinct);
            CHECK(BigInt(visits) == gaussian_binomial(n, d, p));
        }
    }
}

TEST_CASE("Grassmannian order: lexicographic pivots, last free entry fastest") {
    GrassmannianStream s(2, 3, 1);
    std::vector<FpVector> seen;
    while (s.next()) seen.push_back(FpVector(s.rows().begin(), s.rows().end()));
    std::vector<FpVector> expect = {{1, 0, 0}, {1, 0, 1}, {1, 1, 0}, {1, 1, 1}, {0, 1, 0}, {0, 1, 1}, {0, 0, 1}};
    CHECK(seen == expect);
    CHECK(GrassmannianStream::pivot_sets(4, 2).size() == 6);
}

TEST_CASE("enumeration guard") {
    EnumerationGuard g{100, false};
    CHECK_THROWS_AS(check_guard(2, 8, 4, g), GuardExceeded);
    CHECK_NOTHROW(check_guard(2, 4, 2, g));
    g.force = true;
    CHECK_NOTHROW(check_guard(2, 8, 4, g));
}

TEST_CASE("wedge index") {
    WedgeIndex idx(5);
    CHECK(idx.size() == 10);
    std::size_t w = 0;
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = i + 1; j < 5; ++j) {
            CHECK(idx.index(i, j) == w);
            CHECK(idx.pairs()[w] == std::pair{i, j});
            ++w;
        }
    PrimeField f(5);
    FpVector u{1, 2, 0, 0, 3}, v{0, 1, 4, 0, 0};
    auto c = wedge_coords(f, u, v, idx);
    auto c2 = wedge_coords(f, v, u, idx);
    for (std::size_t k = 0; k < c.size(); ++k) CHECK(f.add(c[k], c2[k]) == 0);
    CHECK(c[idx.index(0, 1)] == 1);  // 1*1 - 2*0
}

TEST_CASE("wedge subspace of a subspace has dimension C(h,2)") {
    WedgeIndex idx(5);
    for (unsigned d = 0; d <= 5; ++d) {
        GrassmannianStream s(3, 5, d);
        int budget = 20;
        while (s.next() && budget--) CHECK(wedge_subspace(s.current(), idx).dim() == d * (d ? d - 1 : 0) / 2);
    }
}

TEST_CASE("F_2 packed helpers") {
    FpVector v{1, 0, 1, 1};
    CHECK(gf2::pack(v) == 0b1101);
    CHECK(gf2::unpack(0b1101, 4) == v);
    std::vector<gf2::Row> rows{0b011, 0b110, 0b101};
    CHECK(gf2::rank(rows) == 2);
    auto& list = gf2::subspaces(5, 2);
    GrassmannianStream s(2, 5, 2);
    std::size_t i = 0;
    while (s.next()) {
        CHECK(list.subspace(i) == s.current());
        ++i;
    }
    CHECK(list.size() == i);
}

TEST_CASE("random substreams") {
    CHECK(substream_seed(7, 1) != substream_seed(7, 2));
    Rng a(substream_seed(42, 3)), b(substream_seed(42, 3));
    for (int i = 0; i < 10; ++i) CHECK(a.below(7) == b.below(7));
    Rng r(1);
    std::vector<int> hist(5, 0);
    for (int i = 0; i < 5000; ++i) ++hist[r.below(5)];
    for (int h : hist) CHECK(h > 850);
}
