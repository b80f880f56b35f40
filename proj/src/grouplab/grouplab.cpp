#include "pglab/grouplab.hpp"

#include <algorithm>
#include <cstdint>
#include <queue>
#include <regex>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace pglab {

namespace {

FpVector power_image(const PowerMap& f, std::size_t n, std::size_t m, std::size_t i) {
    if (const auto* lin = std::get_if<LinearPowerMap>(&f)) {
        return lin->apply(unit_vector(n, i));
    }
    if (const auto* quad = std::get_if<QuadraticMap>(&f)) {
        return quad->apply(unit_vector(n, i));
    }
    return FpVector(m, 0);
}

void check_power_map(const AlternatingMap& b, const PowerMap& f) {
    if (const auto* lin = std::get_if<LinearPowerMap>(&f)) {
        if (b.p() == 2) throw std::invalid_argument("presentation: p = 2 needs a quadratic power map");
        if (lin->p() != b.p() || lin->n() != b.n() || lin->m() != b.m())
            throw DimensionMismatch("presentation: F does not match B");
    } else if (const auto* quad = std::get_if<QuadraticMap>(&f)) {
        if (b.p() != 2) throw std::invalid_argument("presentation: quadratic power map needs p = 2");
        if (quad->n() != b.n() || quad->m() != b.m()) throw DimensionMismatch("presentation: F does not match B");
        if (!(associated_B(*quad) == b))
            throw std::invalid_argument("presentation: F(x+y) - F(x) - F(y) differs from B(x,y)");
    }
}

Subspace power_span(const PowerMap& f, const Subspace& full) {
    if (const auto* lin = std::get_if<LinearPowerMap>(&f)) return image_span_F(*lin, full);
    if (const auto* quad = std::get_if<QuadraticMap>(&f)) return image_span_F(*quad, full);
    return Subspace::zero(full.p(), 0);
}

std::string join_exponents(const std::vector<Residue>& e) {
    std::string out;
    for (Residue r : e) {
        out += ' ';
        out += std::to_string(unsigned(r));
    }
    return out;
}

void validate_shape(const Presentation& pres) {
    if (pres.relations.size() != pres.expected_relation_count())
        throw std::invalid_argument("presentation: expected " + std::to_string(pres.expected_relation_count()) +
                                    " relations, got " + std::to_string(pres.relations.size()));
    std::size_t pos = 0;
    auto expect = [&](Relation::Kind kind, std::size_t i, std::size_t j) {
        const Relation& r = pres.relations[pos++];
        if (r.kind != kind || r.i != i || r.j != j)
            throw std::invalid_argument("presentation: relation " + std::to_string(pos) + " out of order");
        bool with_exponents = kind == Relation::Kind::Comm || kind == Relation::Kind::Pow;
        if (with_exponents ? r.exponents.size() != pres.m : !r.exponents.empty())
            throw std::invalid_argument("presentation: relation " + std::to_string(pos) + " has wrong length");
        for (Residue e : r.exponents)
            if (e >= pres.p) throw std::invalid_argument("presentation: exponent out of range");
    };
    for (std::size_t i = 1; i <= pres.n; ++i)
        for (std::size_t j = i + 1; j <= pres.n; ++j) expect(Relation::Kind::Comm, i, j);
    for (std::size_t i = 1; i <= pres.n; ++i) expect(Relation::Kind::Pow, i, 0);
    for (std::size_t i = 1; i <= pres.n; ++i)
        for (std::size_t j = 1; j <= pres.m; ++j) expect(Relation::Kind::Central, i, j);
    for (std::size_t k = 1; k <= pres.m; ++k) expect(Relation::Kind::Exp, k, 0);
}

std::size_t parse_size(const std::string& s) {
    std::size_t used = 0;
    unsigned long long v = std::stoull(s, &used);
    if (used != s.size()) throw std::invalid_argument("parse: bad integer '" + s + "'");
    return std::size_t(v);
}

void parse_header(const std::string& line, Presentation& pres) {
    static const std::regex header(R"(pgroup p=(\d+) n=(\d+) m=(\d+))");
    std::smatch mt;
    if (!std::regex_match(line, mt, header)) throw std::invalid_argument("parse: bad header '" + line + "'");
    pres.p = std::uint32_t(parse_size(mt[1]));
    pres.n = parse_size(mt[2]);
    pres.m = parse_size(mt[3]);
    require_matrix_prime(pres.p);
}

std::vector<Residue> parse_exponents(const std::string& text, std::uint32_t p) {
    std::istringstream in(text);
    std::vector<Residue> out;
    std::string tok;
    while (in >> tok) {
        std::size_t v = parse_size(tok);
        if (v >= p) throw std::invalid_argument("parse: exponent out of range");
        out.push_back(Residue(v));
    }
    return out;
}

std::string y_product(const std::vector<Residue>& e) {
    std::string out;
    for (std::size_t k = 0; k < e.size(); ++k) out += "*y" + std::to_string(k + 1) + "^" + std::to_string(unsigned(e[k]));
    return out;
}

std::vector<Residue> parse_y_product(const std::string& text, std::size_t m, std::uint32_t p) {
    static const std::regex factor(R"(\*y(\d+)\^(\d+))");
    std::vector<Residue> out;
    std::size_t consumed = 0;
    for (auto it = std::sregex_iterator(text.begin(), text.end(), factor); it != std::sregex_iterator(); ++it) {
        const auto& mt = *it;
        if (std::size_t(mt.position(0)) != consumed) throw std::invalid_argument("parse_cas: bad relator tail");
        consumed += mt.length(0);
        if (parse_size(mt[1]) != out.size() + 1) throw std::invalid_argument("parse_cas: y factors out of order");
        std::size_t e = parse_size(mt[2]);
        if (e >= p) throw std::invalid_argument("parse_cas: exponent out of range");
        out.push_back(Residue(e));
    }
    if (consumed != text.size() || out.size() != m) throw std::invalid_argument("parse_cas: bad relator tail");
    return out;
}

}  // namespace

Presentation presentation(const AlternatingMap& b, const PowerMap& f, SurjectivityCheck check) {
    check_power_map(b, f);
    const std::size_t n = b.n(), m = b.m();
    if (check != SurjectivityCheck::None) {
        Subspace full = Subspace::full(b.p(), n);
        Subspace image = image_span_B(b, full);
        if (check == SurjectivityCheck::ImageOfBAndF && m > 0 && !std::holds_alternative<std::monostate>(f))
            image = subspace_sum(image, power_span(f, full));
        if (image.dim() != m) {
            throw std::invalid_argument(check == SurjectivityCheck::ImageOfB
                                            ? "presentation: B(V,V) is not all of W"
                                            : "presentation: B(V,V) + F(V) is not all of W");
        }
    }

    Presentation pres;
    pres.p = b.p();
    pres.n = n;
    pres.m = m;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            Relation r{Relation::Kind::Comm, i + 1, j + 1, {}};
            for (std::size_t k = 0; k < m; ++k) r.exponents.push_back(b.pair_coeff(k, i, j));
            pres.relations.push_back(std::move(r));
        }
    for (std::size_t i = 0; i < n; ++i)
        pres.relations.push_back({Relation::Kind::Pow, i + 1, 0, power_image(f, n, m, i)});
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) pres.relations.push_back({Relation::Kind::Central, i + 1, j + 1, {}});
    for (std::size_t k = 0; k < m; ++k) pres.relations.push_back({Relation::Kind::Exp, k + 1, 0, {}});
    return pres;
}

std::string export_text(const Presentation& pres) {
    validate_shape(pres);
    std::string out = "pgroup p=" + std::to_string(pres.p) + " n=" + std::to_string(pres.n) +
                      " m=" + std::to_string(pres.m) + "\n";
    for (const Relation& r : pres.relations) {
        switch (r.kind) {
            case Relation::Kind::Comm:
                out += "comm " + std::to_string(r.i) + " " + std::to_string(r.j) + " :" + join_exponents(r.exponents);
                break;
            case Relation::Kind::Pow:
                out += "pow " + std::to_string(r.i) + " :" + join_exponents(r.exponents);
                break;
            case Relation::Kind::Central:
                out += "central " + std::to_string(r.i) + " " + std::to_string(r.j);
                break;
            case Relation::Kind::Exp:
                out += "exp y " + std::to_string(r.i);
                break;
        }
        out += '\n';
    }
    return out;
}

Presentation parse_text(const std::string& text) {
    static const std::regex comm(R"(comm (\d+) (\d+) :((?: \d+)*))");
    static const std::regex pow(R"(pow (\d+) :((?: \d+)*))");
    static const std::regex central(R"(central (\d+) (\d+))");
    static const std::regex exp(R"(exp y (\d+))");

    std::istringstream in(text);
    std::string line;
    Presentation pres;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!have_header) {
            parse_header(line, pres);
            have_header = true;
            continue;
        }
        std::smatch mt;
        if (std::regex_match(line, mt, comm)) {
            pres.relations.push_back(
                {Relation::Kind::Comm, parse_size(mt[1]), parse_size(mt[2]), parse_exponents(mt[3], pres.p)});
        } else if (std::regex_match(line, mt, pow)) {
            pres.relations.push_back({Relation::Kind::Pow, parse_size(mt[1]), 0, parse_exponents(mt[2], pres.p)});
        } else if (std::regex_match(line, mt, central)) {
            pres.relations.push_back({Relation::Kind::Central, parse_size(mt[1]), parse_size(mt[2]), {}});
        } else if (std::regex_match(line, mt, exp)) {
            pres.relations.push_back({Relation::Kind::Exp, parse_size(mt[1]), 0, {}});
        } else {
            throw std::invalid_argument("parse_text: unrecognised line '" + line + "'");
        }
    }
    if (!have_header) throw std::invalid_argument("parse_text: missing header");
    validate_shape(pres);
    return pres;
}

std::string export_cas(const Presentation& pres) {
    validate_shape(pres);
    std::vector<std::string> names;
    for (std::size_t i = 1; i <= pres.n; ++i) names.push_back("x" + std::to_string(i));
    for (std::size_t k = 1; k <= pres.m; ++k) names.push_back("y" + std::to_string(k));

    std::string out = "# pgroup p=" + std::to_string(pres.p) + " n=" + std::to_string(pres.n) +
                      " m=" + std::to_string(pres.m) + "\n";
    if (!pres.provenance.empty()) out += "# source: " + pres.provenance + "\n";
    out += "F := FreeGroup(";
    for (std::size_t g = 0; g < names.size(); ++g) out += (g ? ", \"" : "\"") + names[g] + "\"";
    out += ");;\n";
    for (std::size_t g = 0; g < names.size(); ++g) out += names[g] + " := F." + std::to_string(g + 1) + ";;\n";
    out += "rels := [\n";
    const std::string p = std::to_string(pres.p);
    for (std::size_t idx = 0; idx < pres.relations.size(); ++idx) {
        const Relation& r = pres.relations[idx];
        std::string rel;
        switch (r.kind) {
            case Relation::Kind::Comm:
                rel = "Comm(x" + std::to_string(r.i) + ",x" + std::to_string(r.j) + ")^-1" + y_product(r.exponents);
                break;
            case Relation::Kind::Pow:
                rel = "x" + std::to_string(r.i) + "^-" + p + y_product(r.exponents);
                break;
            case Relation::Kind::Central:
                rel = "Comm(x" + std::to_string(r.i) + ",y" + std::to_string(r.j) + ")";
                break;
            case Relation::Kind::Exp:
                rel = "y" + std::to_string(r.i) + "^" + p;
                break;
        }
        out += "  " + rel + (idx + 1 < pres.relations.size() ? ",\n" : "\n");
    }
    out += "];;\nG := F / rels;;\n";
    return out;
}

Presentation parse_cas(const std::string& text) {
    static const std::regex comm(R"(Comm\(x(\d+),x(\d+)\)\^-1(.*))");
    static const std::regex pow(R"(x(\d+)\^-(\d+)(.*))");
    static const std::regex central(R"(Comm\(x(\d+),y(\d+)\))");
    static const std::regex exp(R"(y(\d+)\^(\d+))");

    std::istringstream in(text);
    std::string line;
    Presentation pres;
    bool have_header = false, in_rels = false, done = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!have_header) {
            if (line.rfind("# ", 0) == 0) {
                parse_header(line.substr(2), pres);
                have_header = true;
            }
            continue;
        }
        if (!in_rels) {
            if (line.rfind("# source: ", 0) == 0) pres.provenance = line.substr(10);
            if (line == "rels := [") in_rels = true;
            continue;
        }
        if (line == "];;") {
            done = true;
            break;
        }
        std::string rel = line;
        rel.erase(0, rel.find_first_not_of(' '));
        if (!rel.empty() && rel.back() == ',') rel.pop_back();
        std::smatch mt;
        if (std::regex_match(rel, mt, comm)) {
            pres.relations.push_back({Relation::Kind::Comm, parse_size(mt[1]), parse_size(mt[2]),
                                      parse_y_product(mt[3], pres.m, pres.p)});
        } else if (std::regex_match(rel, mt, central)) {
            pres.relations.push_back({Relation::Kind::Central, parse_size(mt[1]), parse_size(mt[2]), {}});
        } else if (std::regex_match(rel, mt, pow)) {
            if (parse_size(mt[2]) != pres.p) throw std::invalid_argument("parse_cas: power relator uses wrong prime");
            pres.relations.push_back(
                {Relation::Kind::Pow, parse_size(mt[1]), 0, parse_y_product(mt[3], pres.m, pres.p)});
        } else if (std::regex_match(rel, mt, exp)) {
            if (parse_size(mt[2]) != pres.p) throw std::invalid_argument("parse_cas: exponent relator uses wrong prime");
            pres.relations.push_back({Relation::Kind::Exp, parse_size(mt[1]), 0, {}});
        } else {
            throw std::invalid_argument("parse_cas: unrecognised relator '" + rel + "'");
        }
    }
    if (!have_header || !done) throw std::invalid_argument("parse_cas: incomplete script");
    validate_shape(pres);
    return pres;
}

BaerGroup::BaerGroup(AlternatingMap b) : b_(std::move(b)), field_(b_.p()), half_(0) {
    if (b_.p() == 2) throw std::invalid_argument("BaerGroup: p must be odd");
    half_ = field_.inv(2);
}

BaerElement BaerGroup::identity() const { return {FpVector(n(), 0), FpVector(m(), 0)}; }

BaerElement BaerGroup::mul(const BaerElement& a, const BaerElement& c) const {
    BaerElement out{FpVector(n()), FpVector(m())};
    for (std::size_t i = 0; i < n(); ++i) out.v[i] = field_.add(a.v[i], c.v[i]);
    FpVector cross = b_.apply(a.v, c.v);
    for (std::size_t k = 0; k < m(); ++k)
        out.w[k] = field_.add(field_.add(a.w[k], c.w[k]), field_.mul(half_, cross[k]));
    return out;
}

BaerElement BaerGroup::inverse(const BaerElement& a) const {
    BaerElement out{FpVector(n()), FpVector(m())};
    for (std::size_t i = 0; i < n(); ++i) out.v[i] = field_.neg(a.v[i]);
    for (std::size_t k = 0; k < m(); ++k) out.w[k] = field_.neg(a.w[k]);
    return out;
}

BaerElement BaerGroup::commutator(const BaerElement& a, const BaerElement& c) const {
    return mul(mul(inverse(a), inverse(c)), mul(a, c));
}

BaerElement BaerGroup::power(const BaerElement& a, std::uint64_t k) const {
    BaerElement result = identity(), base = a;
    while (k) {
        if (k & 1) result = mul(result, base);
        base = mul(base, base);
        k >>= 1;
    }
    return result;
}

std::uint64_t BaerGroup::order() const {
    std::uint64_t out = 1;
    for (std::size_t i = 0; i < n() + m(); ++i) {
        if (out > UINT64_MAX / p()) throw GuardExceeded("BaerGroup: order overflows");
        out *= p();
    }
    return out;
}

BaerElement BaerGroup::element(std::uint64_t index) const {
    BaerElement e{FpVector(n()), FpVector(m())};
    for (std::size_t i = 0; i < n(); ++i, index /= p()) e.v[i] = Residue(index % p());
    for (std::size_t k = 0; k < m(); ++k, index /= p()) e.w[k] = Residue(index % p());
    return e;
}

std::uint64_t BaerGroup::index(const BaerElement& e) const {
    std::uint64_t out = 0;
    for (std::size_t k = m(); k-- > 0;) out = out * p() + e.w[k];
    for (std::size_t i = n(); i-- > 0;) out = out * p() + e.v[i];
    return out;
}

BaerElement baer_mul(const BaerElement& a, const BaerElement& c, const AlternatingMap& b) {
    return BaerGroup(b).mul(a, c);
}

BaerElement baer_commutator(const BaerElement& a, const BaerElement& c, const AlternatingMap& b) {
    return BaerGroup(b).commutator(a, c);
}

BaerElement baer_power(const BaerElement& a, std::uint64_t k, const AlternatingMap& b) {
    return BaerGroup(b).power(a, k);
}

namespace {

struct BitsHash {
    std::size_t operator()(const std::vector<std::uint64_t>& bits) const {
        std::uint64_t h = 0x9e3779b97f4a7c15ULL;
        for (std::uint64_t w : bits) h = (h ^ w) * 0xbf58476d1ce4e5b9ULL + (h >> 29);
        return std::size_t(h);
    }
};

class SubgroupLattice {
  public:
    SubgroupLattice(std::vector<std::uint32_t> table, std::size_t order)
        : table_(std::move(table)), order_(order), words_((order + 63) / 64) {}

    struct Subgroup {
        std::vector<std::uint64_t> bits;
        std::vector<std::uint32_t> elements;
        std::vector<std::uint32_t> gens;
    };

    /// Subgroup generated by `gens`, by closing {1} under right multiplication.
    Subgroup generate(std::vector<std::uint32_t> gens) const {
        Subgroup s{std::vector<std::uint64_t>(words_, 0), {0}, std::move(gens)};
        s.bits[0] |= 1;
        for (std::size_t head = 0; head < s.elements.size(); ++head) {
            std::uint32_t x = s.elements[head];
            for (std::uint32_t g : s.gens) {
                std::uint32_t y = table_[std::size_t(x) * order_ + g];
                if (!(s.bits[y / 64] >> (y % 64) & 1)) {
                    s.bits[y / 64] |= std::uint64_t(1) << (y % 64);
                    s.elements.push_back(y);
                }
            }
        }
        return s;
    }

    std::vector<Subgroup> all_subgroups() const {
        std::vector<Subgroup> out;
        std::unordered_map<std::vector<std::uint64_t>, std::size_t, BitsHash> seen;
        auto add = [&](Subgroup s) {
            if (seen.emplace(s.bits, out.size()).second) out.push_back(std::move(s));
        };
        add(generate({}));
        std::vector<std::uint32_t> cyclic_gens;
        for (std::uint32_t g = 1; g < order_; ++g) {
            Subgroup c = generate({g});
            std::size_t before = out.size();
            add(std::move(c));
            if (out.size() > before) cyclic_gens.push_back(g);
        }
        for (std::size_t idx = 0; idx < out.size(); ++idx) {
            for (std::uint32_t g : cyclic_gens) {
                const Subgroup& s = out[idx];
                if (s.bits[g / 64] >> (g % 64) & 1) continue;
                std::vector<std::uint32_t> gens = s.gens;
                gens.push_back(g);
                add(generate(std::move(gens)));
            }
        }
        return out;
    }

    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const { return table_[std::size_t(a) * order_ + b]; }

  private:
    std::vector<std::uint32_t> table_;
    std::size_t order_;
    std::size_t words_;
};

}  // namespace

AuditResult audit_abmax(const AlternatingMap& b, std::uint64_t order_cap) {
    BaerGroup group(b);
    const std::uint64_t order = group.order();
    if (order > order_cap)
        throw GuardExceeded("audit_abmax: group order " + std::to_string(order) + " exceeds cap " +
                            std::to_string(order_cap));

    std::vector<BaerElement> elems;
    elems.reserve(order);
    for (std::uint64_t i = 0; i < order; ++i) elems.push_back(group.element(i));
    std::vector<std::uint32_t> table(order * order);
    std::vector<std::uint32_t> inv(order);
    for (std::uint64_t a = 0; a < order; ++a) {
        inv[a] = std::uint32_t(group.index(group.inverse(elems[a])));
        for (std::uint64_t c = 0; c < order; ++c)
            table[a * order + c] = std::uint32_t(group.index(group.mul(elems[a], elems[c])));
    }
    SubgroupLattice lattice(std::move(table), order);
    auto commutator = [&](std::uint32_t a, std::uint32_t c) {
        return lattice.mul(lattice.mul(inv[a], inv[c]), lattice.mul(a, c));
    };
    auto derived_order = [&](const SubgroupLattice::Subgroup& h) {
        std::vector<char> seen(order, 0);
        std::vector<std::uint32_t> comms;
        for (std::uint32_t a : h.elements)
            for (std::uint32_t c : h.elements) {
                std::uint32_t k = commutator(a, c);
                if (!seen[k]) {
                    seen[k] = 1;
                    comms.push_back(k);
                }
            }
        return std::uint64_t(lattice.generate(std::move(comms)).elements.size());
    };

    auto subgroups = lattice.all_subgroups();
    AuditResult res;
    res.order = order;
    res.subgroups = subgroups.size();
    for (const auto& h : subgroups) {
        if (h.elements.size() == order) {
            res.derived_order = derived_order(h);
            res.abelianization_index = order / res.derived_order;
        }
    }
    for (const auto& h : subgroups) {
        if (h.elements.size() == order) continue;
        std::uint64_t index = h.elements.size() / derived_order(h);
        res.max_proper_index = std::max(res.max_proper_index, index);
        if (index >= res.abelianization_index) {
            if (res.violations == 0) res.first_violation_order = h.elements.size();
            ++res.violations;
        }
    }
    res.ab_maximal = res.violations == 0;
    return res;
}

}  // namespace pglab
