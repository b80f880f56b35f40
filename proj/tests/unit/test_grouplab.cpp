#include "doctest.h"
#include "pglab/certifier.hpp"
#include "pglab/grouplab.hpp"

using namespace pglab;

namespace {

AlternatingMap heisenberg(std::uint32_t p) { return AlternatingMap::standard_symplectic(p, 2); }

LinearPowerMap order_p4_power_map() {
    FpMatrix f(3, 1, 3);
    f.set(0, 2, 1);
    return LinearPowerMap(f);
}

AlternatingMap order_p4_commutator_map() {
    AlternatingMap b(3, 3, 1);
    b.set_pair_coeff(0, 0, 1, 1);
    return b;
}

PowerMap sample_power_map(std::uint32_t p, const AlternatingMap& b, Rng& rng) {
    if (p == 2) {
        QuadraticMap q = zero_diagonal_quadratic(b);
        for (std::size_t k = 0; k < b.m(); ++k)
            for (std::size_t i = 0; i < b.n(); ++i) q.set_q(k, i, i, Residue(rng.below(2)));
        return q;
    }
    FpMatrix f(p, b.m(), b.n());
    for (std::size_t k = 0; k < b.m(); ++k)
        for (std::size_t i = 0; i < b.n(); ++i) f.set(k, i, Residue(rng.below(p)));
    return LinearPowerMap(f);
}

}  // namespace

TEST_CASE("heisenberg presentation text is exact") {
    Presentation pres = presentation(heisenberg(3), std::monostate{});
    CHECK(pres.relations.size() == 6);
    std::string text = export_text(pres);
    CHECK(std::count(text.begin(), text.end(), '\n') == 7);
    CHECK(text ==
          "pgroup p=3 n=2 m=1\n"
          "comm 1 2 : 1\n"
          "pow 1 : 0\n"
          "pow 2 : 0\n"
          "central 1 1\n"
          "central 2 1\n"
          "exp y 1\n");
}

TEST_CASE("order p^4 d-maximal group") {
    // x, y, z, z^p  ->  x1, x2, x3, y1
    Presentation pres = presentation(order_p4_commutator_map(), order_p4_power_map());
    CHECK(export_text(pres) ==
          "pgroup p=3 n=3 m=1\n"
          "comm 1 2 : 1\n"
          "comm 1 3 : 0\n"
          "comm 2 3 : 0\n"
          "pow 1 : 0\n"
          "pow 2 : 0\n"
          "pow 3 : 1\n"
          "central 1 1\n"
          "central 2 1\n"
          "central 3 1\n"
          "exp y 1\n");
    CHECK_FALSE(find_bad_subspace(order_p4_commutator_map(), order_p4_power_map(), Mode::DMax).witness);
}

TEST_CASE("surjectivity is enforced") {
    AlternatingMap b(3, 3, 2);
    b.set_pair_coeff(0, 0, 1, 1);
    CHECK_THROWS_AS(presentation(b, std::monostate{}), std::invalid_argument);
    CHECK_THROWS_AS(presentation(b, std::monostate{}, SurjectivityCheck::ImageOfB), std::invalid_argument);
    CHECK_NOTHROW(presentation(b, std::monostate{}, SurjectivityCheck::None));

    // F covers the missing coordinate.
    FpMatrix f(3, 2, 3);
    f.set(1, 2, 1);
    CHECK_NOTHROW(presentation(b, LinearPowerMap(f)));
    CHECK_THROWS_AS(presentation(b, LinearPowerMap(f), SurjectivityCheck::ImageOfB), std::invalid_argument);

    // p = 2 needs F whose polarisation is B.
    AlternatingMap b2 = AlternatingMap::standard_symplectic(2, 2);
    CHECK_THROWS_AS(presentation(b2, QuadraticMap(2, 1)), std::invalid_argument);
    CHECK_NOTHROW(presentation(b2, zero_diagonal_quadratic(b2)));
}

TEST_CASE("text and script round trips") {
    Rng rng(17);
    for (std::uint32_t p : {2u, 3u, 5u}) {
        for (std::size_t n = 1; n <= 5; ++n) {
            for (std::size_t m = 0; m <= 3; ++m) {
                AlternatingMap b = sample_alternating(p, n, m, rng);
                PowerMap f = sample_power_map(p, b, rng);
                Presentation pres = presentation(b, f, SurjectivityCheck::None);
                CHECK(pres.relations.size() == n * (n - 1) / 2 + n + n * m + m);
                CHECK(parse_text(export_text(pres)).same_relations(pres));
                CHECK(parse_cas(export_cas(pres)).same_relations(pres));
                CHECK(export_text(parse_cas(export_cas(pres))) == export_text(pres));
            }
        }
    }
}

TEST_CASE("script layout") {
    std::string script = export_cas(presentation(heisenberg(3), std::monostate{}));
    CHECK(script ==
          "# pgroup p=3 n=2 m=1\n"
          "F := FreeGroup(\"x1\", \"x2\", \"y1\");;\n"
          "x1 := F.1;;\n"
          "x2 := F.2;;\n"
          "y1 := F.3;;\n"
          "rels := [\n"
          "  Comm(x1,x2)^-1*y1^1,\n"
          "  x1^-3*y1^0,\n"
          "  x2^-3*y1^0,\n"
          "  Comm(x1,y1),\n"
          "  Comm(x2,y1),\n"
          "  y1^3\n"
          "];;\n"
          "G := F / rels;;\n");
}

TEST_CASE("malformed text is rejected") {
    CHECK_THROWS(parse_text(""));
    CHECK_THROWS(parse_text("pgroup p=4 n=1 m=0\npow 1 :\n"));
    CHECK_THROWS(parse_text("pgroup p=3 n=2 m=1\ncomm 1 2 : 1\n"));
    CHECK_THROWS(parse_text("pgroup p=3 n=2 m=1\ncomm 1 2 : 3\npow 1 : 0\npow 2 : 0\ncentral 1 1\ncentral 2 1\nexp y 1\n"));
    CHECK_THROWS(parse_text("pgroup p=3 n=2 m=1\npow 1 : 0\ncomm 1 2 : 1\npow 2 : 0\ncentral 1 1\ncentral 2 1\nexp y 1\n"));
    CHECK_NOTHROW(parse_text("pgroup p=3 n=2 m=1\ncomm 1 2 : 2\npow 1 : 0\npow 2 : 1\ncentral 1 1\ncentral 2 1\nexp y 1\n"));
}

TEST_CASE("baer group axioms on the heisenberg group of order 27") {
    BaerGroup g(heisenberg(3));
    REQUIRE(g.order() == 27);
    std::vector<BaerElement> els;
    for (std::uint64_t i = 0; i < 27; ++i) {
        els.push_back(g.element(i));
        CHECK(g.index(els.back()) == i);
    }
    std::uint64_t failures = 0;
    for (const auto& a : els)
        for (const auto& b : els)
            for (const auto& c : els)
                if (!(g.mul(g.mul(a, b), c) == g.mul(a, g.mul(b, c)))) ++failures;
    CHECK(failures == 0);
    for (const auto& a : els) {
        CHECK(g.mul(a, g.inverse(a)) == g.identity());
        CHECK(g.power(a, 3) == g.identity());
        CHECK(g.mul(g.identity(), a) == a);
    }
    // [(v1,w1), (v2,w2)] = (0, B(v1,v2))
    AlternatingMap b = heisenberg(3);
    for (const auto& a : els)
        for (const auto& c : els) {
            BaerElement k = g.commutator(a, c);
            CHECK(k.v == FpVector{0, 0});
            CHECK(k.w == b.apply(a.v, c.v));
            CHECK(baer_commutator(a, c, b) == k);
        }
    CHECK(baer_mul(els[1], els[3], b) == g.mul(els[1], els[3]));
    CHECK(baer_power(els[5], 4, b) == els[5]);
    CHECK_THROWS(BaerGroup(heisenberg(2)));
}

TEST_CASE("baer group identities on random elements") {
    Rng rng(5);
    std::uint64_t pairs = 0;
    for (std::uint32_t p : {3u, 5u}) {
        for (std::size_t n = 1; n <= 5; ++n) {
            const std::size_t m = 1 + rng.below(3);
            AlternatingMap b = sample_alternating(p, n, m, rng);
            BaerGroup g(b);
            for (int t = 0; t < 1000; ++t, ++pairs) {
                BaerElement x = g.element(rng.below(g.order()));
                BaerElement y = g.element(rng.below(g.order()));
                BaerElement z = g.element(rng.below(g.order()));
                CHECK(g.mul(g.mul(x, y), z) == g.mul(x, g.mul(y, z)));
                CHECK(g.power(x, p) == g.identity());
                BaerElement k = g.commutator(x, y);
                CHECK(k.v == FpVector(n, 0));
                CHECK(k.w == b.apply(x.v, y.v));
            }
        }
    }
    CHECK(pairs == 10000);
}

TEST_CASE("audit: heisenberg group is not ab-maximal") {
    AuditResult r = audit_abmax(heisenberg(3));
    CHECK(r.order == 27);
    CHECK(r.subgroups == 19);  // 1, 13 of order 3, 4 of order 9, G
    CHECK(r.derived_order == 3);
    CHECK(r.abelianization_index == 9);
    CHECK(r.max_proper_index == 9);
    CHECK(r.violations == 4);
    CHECK(r.first_violation_order == 9);
    CHECK_FALSE(r.ab_maximal);
}

TEST_CASE("audit: extraspecial group of order 243 is ab-maximal") {
    AlternatingMap b = AlternatingMap::standard_symplectic(3, 4);
    AuditResult r = audit_abmax(b);
    CHECK(r.order == 243);
    CHECK(r.derived_order == 3);
    CHECK(r.abelianization_index == 81);
    CHECK(r.max_proper_index == 27);
    CHECK(r.ab_maximal);
    CHECK_FALSE(find_bad_subspace(b, std::monostate{}, Mode::AbMax).witness);
}

TEST_CASE("audit: elementary abelian groups") {
    AuditResult r = audit_abmax(AlternatingMap(3, 2, 0));
    CHECK(r.order == 9);
    CHECK(r.subgroups == 6);
    CHECK(r.abelianization_index == 9);
    CHECK(r.ab_maximal);
    CHECK_FALSE(find_bad_subspace(AlternatingMap(3, 2, 0), std::monostate{}, Mode::AbMax).witness);
}

TEST_CASE("audit: cap is enforced") {
    CHECK_THROWS_AS(audit_abmax(AlternatingMap(3, 5, 1)), GuardExceeded);
    CHECK_NOTHROW(audit_abmax(AlternatingMap(3, 2, 1), 27));
}

TEST_CASE("audit agrees with the linear criterion on random small maps") {
    Rng rng(2024);
    const std::vector<std::pair<std::size_t, std::size_t>> shapes{{2, 1}, {3, 1}, {3, 2}, {4, 1}, {2, 2}, {3, 0}};
    std::uint64_t certified = 0, rejected = 0;
    for (auto [n, m] : shapes) {
        for (int t = 0; t < 12; ++t) {
            AlternatingMap b = sample_alternating(3, n, m, rng);
            AuditResult r = audit_abmax(b);
            bool no_bad = count_bad(b, std::monostate{}, Mode::AbMax).total() == 0;
            CHECK((r.ab_maximal && is_surjective(b)) == no_bad);
            (no_bad ? certified : rejected) += 1;
        }
    }
    CHECK(certified > 0);
    CHECK(rejected > 0);
}
