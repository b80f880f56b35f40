#pragma once

#include <string>
#include <vector>

#include "pglab/altmaps.hpp"

namespace pglab {

/// One defining relation of G_{B,F}. Indices are 1-based as in the text format.
///   Comm:    [x_i, x_j] = prod_k y_k^{e_k}   (i < j)
///   Pow:     x_i^p = prod_k y_k^{e_k}
///   Central: [x_i, y_j] = 1
///   Exp:     y_i^p = 1
struct Relation {
    enum class Kind { Comm, Pow, Central, Exp };
    Kind kind;
    std::size_t i = 0, j = 0;
    std::vector<Residue> exponents;

    bool operator==(const Relation&) const = default;
};

struct Presentation {
    std::uint32_t p = 2;
    std::size_t n = 0, m = 0;
    std::vector<Relation> relations;
    /// Free-form note on where the data came from; not part of the text format.
    std::string provenance;

    std::size_t expected_relation_count() const { return n * (n - 1) / 2 + n + n * m + m; }
    bool same_relations(const Presentation& o) const {
        return p == o.p && n == o.n && m == o.m && relations == o.relations;
    }
};

enum class SurjectivityCheck { None, ImageOfB, ImageOfBAndF };

/// Generators x_1..x_n, y_1..y_m with exponents read off B and F.
/// Throws std::invalid_argument when the requested image is not all of W.
Presentation presentation(const AlternatingMap& b, const PowerMap& f,
                          SurjectivityCheck check = SurjectivityCheck::ImageOfBAndF);

/// "pgroup p=.. n=.. m=.." followed by one relation per line.
std::string export_text(const Presentation& pres);
Presentation parse_text(const std::string& text);

/// Finitely presented group script: free group on x1..xn,y1..ym and the
/// relators in text-format order. A non-empty provenance becomes a comment line.
std::string export_cas(const Presentation& pres);
Presentation parse_cas(const std::string& text);

/// Exponent-p class-two group on F_p^n x F_p^m (p odd):
/// (v1,w1)(v2,w2) = (v1+v2, w1+w2+B(v1,v2)/2).
struct BaerElement {
    FpVector v, w;
    bool operator==(const BaerElement&) const = default;
};

class BaerGroup {
  public:
    explicit BaerGroup(AlternatingMap b);

    std::uint32_t p() const { return b_.p(); }
    std::size_t n() const { return b_.n(); }
    std::size_t m() const { return b_.m(); }

    BaerElement identity() const;
    BaerElement mul(const BaerElement& a, const BaerElement& c) const;
    BaerElement inverse(const BaerElement& a) const;
    /// a^-1 c^-1 a c.
    BaerElement commutator(const BaerElement& a, const BaerElement& c) const;
    BaerElement power(const BaerElement& a, std::uint64_t k) const;

    /// Elements indexed 0..p^{n+m}-1, digits of v then w, first coordinate least significant.
    std::uint64_t order() const;
    BaerElement element(std::uint64_t index) const;
    std::uint64_t index(const BaerElement& e) const;

  private:
    AlternatingMap b_;
    PrimeField field_;
    Residue half_;
};

BaerElement baer_mul(const BaerElement& a, const BaerElement& c, const AlternatingMap& b);
BaerElement baer_commutator(const BaerElement& a, const BaerElement& c, const AlternatingMap& b);
BaerElement baer_power(const BaerElement& a, std::uint64_t k, const AlternatingMap& b);

inline constexpr std::uint64_t kDefaultAuditOrderCap = 243;

struct AuditResult {
    std::uint64_t order = 0;
    std::uint64_t subgroups = 0;  // including 1 and G
    std::uint64_t derived_order = 0;
    /// |G : G'|
    std::uint64_t abelianization_index = 0;
    /// Largest |H : H'| over proper H.
    std::uint64_t max_proper_index = 0;
    /// Proper subgroups with |H : H'| >= |G : G'|.
    std::uint64_t violations = 0;
    std::uint64_t first_violation_order = 0;
    bool ab_maximal = false;
};

/// Enumerates every subgroup of the Baer group of B (cyclic subgroups, then
/// joins until nothing new appears) and tests |H:H'| < |G:G'| for all proper H.
AuditResult audit_abmax(const AlternatingMap& b, std::uint64_t order_cap = kDefaultAuditOrderCap);

}  // namespace pglab
