#include "pglab/boundscalc.hpp"

#include <sstream>
#include <stdexcept>

namespace pglab::bounds {

namespace {

BigRational q(std::uint64_t p) { return BigRational(BigInt(std::to_string(p))); }

BigRational ppow(std::uint64_t p, long e) { return rpow(q(p), e); }

BigRational gb(unsigned n, unsigned d, std::uint64_t p) { return BigRational(gaussian_binomial(n, d, p)); }

long choose2(long h) { return h * (h - 1) / 2; }

/// sum_{k=1..kmax} (-1)^{k-1} C(G,k) p^{-3k(n-3)}, G = [n 3]_p.
BigRational inclusion_exclusion(std::uint64_t p, unsigned n, unsigned kmax) {
    BigInt g = gaussian_binomial(n, 3, p);
    BigRational s = 0;
    for (unsigned k = 1; k <= kmax; ++k) {
        BigRational t = BigRational(binomial(g, k)) * ppow(p, -3L * long(k) * (long(n) - 3));
        s += k % 2 ? t : BigRational(-t);
    }
    return s;
}

BigRational markov_tail(std::uint64_t p, unsigned n) { return BigRational(16 * (long(n) - 4)) * ppow(p, 4 - long(n)); }

}  // namespace

BigRational lambda_p(std::uint64_t p) {
    BigRational one = 1, x = one / q(p);
    BigRational prod = (one - x) * (one - x * x) * (one - x * x * x);
    return one / prod;
}

BigRational lambda_p_n(std::uint64_t p, unsigned n) {
    BigRational one = 1;
    return lambda_p(p) * (one - ppow(p, -long(n))) * (one - ppow(p, 1 - long(n))) * (one - ppow(p, 2 - long(n)));
}

BigRational f_cubic(long h, long n) {
    BigRational r((h - 2) * (h - 3) * (h - n), 2);
    r.canonicalize();
    return r;
}

BigRational F_partial(unsigned k, const BigRational& x) {
    BigRational s = 0, xp = 1;
    for (unsigned i = 1; i <= k; ++i) {
        xp *= x;
        BigRational t = xp / BigRational(factorial(i));
        s += i % 2 ? t : BigRational(-t);
    }
    return s;
}

BigRational bound_A1(std::uint64_t p, unsigned n) {
    BigRational s = inclusion_exclusion(p, n, 3);
    BigRational tail = 0;
    for (unsigned d = 3; d <= 8; ++d) {
        BigRational g3 = gb(d, 3, p);
        tail += gb(n, d, p) * g3 * g3 * g3 * ppow(p, -(long(n) - 3) * (long(d) + 1));
    }
    return s + tail / 6 + markov_tail(p, n);
}

BigRational bound_A2(std::uint64_t p, unsigned n) {
    BigRational one = 1, x = one / q(p);
    BigRational c = one - x - x * x;
    return F_partial(3, lambda_p(p)) + 2 * ppow(p, 9 - 3L * long(n)) +
           rpow(c, -4) * (BigRational(1, 6) + x) * ppow(p, 12 - long(n)) + markov_tail(p, n);
}

BigRational bound_A3(std::uint64_t p, unsigned n) {
    BigRational s = inclusion_exclusion(p, n, 9);
    for (long k : {3L, 5L, 7L, 9L}) {
        long sq = 9 * (k + 1) * (k + 1);
        if (sq % 4) throw std::logic_error("bound_A3: non-integral exponent");
        long e = -long(n) + 3 - 9 * k + sq / 4;
        s += BigRational((3 * k - 3) * (1L << (2 * (k + 1)))) / BigRational(factorial(unsigned(k))) * ppow(p, e);
    }
    return s + markov_tail(p, n);
}

BigRational bound_A4(unsigned n) {
    return F_partial(9, lambda_p(2)) + BigRational(ipow(4, 11)) * (ppow(2, 9 - 3L * long(n)) + ppow(2, 147 - long(n))) +
           markov_tail(2, n);
}

std::string_view to_string(BoundId id) {
    switch (id) {
        case BoundId::A1: return "A1";
        case BoundId::A2: return "A2";
        case BoundId::A3: return "A3";
        case BoundId::A4: return "A4";
    }
    return "?";
}

BoundId parse_bound_id(std::string_view text) {
    for (auto id : {BoundId::A1, BoundId::A2, BoundId::A3, BoundId::A4})
        if (text == to_string(id)) return id;
    throw std::invalid_argument("unknown bound '" + std::string(text) + "' (expected A1, A2, A3 or A4)");
}

AppendixReport verify_appendix_A1(std::optional<BoundId> only) {
    AppendixReport r;
    bool first = true;
    auto add = [&](BoundId id, std::uint64_t p, unsigned n, BigRational v) {
        if (only && *only != id) return;
        bool pass = v < 1;
        r.all_pass = r.all_pass && pass;
        if (first || v > r.max_value) r.max_value = v;
        first = false;
        r.items.push_back({id, p, n, std::move(v), pass});
    };
    for (unsigned n = 12; n <= 14; ++n) add(BoundId::A1, 13, n, bound_A1(13, n));
    add(BoundId::A2, 13, 15, bound_A2(13, 15));
    add(BoundId::A2, 17, 12, bound_A2(17, 12));
    for (std::uint64_t p : {2, 3, 5, 7, 11})
        for (unsigned n = 160; n <= 180; ++n) add(BoundId::A3, p, n, bound_A3(p, n));
    add(BoundId::A4, 2, 180, bound_A4(180));
    return r;
}

std::string report_csv(const AppendixReport& report) {
    std::ostringstream os;
    os << "item,p,n,value_num,value_den,approx,pass\n";
    for (auto& it : report.items)
        os << to_string(it.id) << ',' << it.p << ',' << it.n << ',' << it.value.get_num().get_str() << ','
           << it.value.get_den().get_str() << ',' << to_scientific(it.value) << ',' << (it.pass ? "true" : "false")
           << '\n';
    return os.str();
}

BigInt matrices_of_rank(std::uint64_t qq, unsigned rows, unsigned cols, unsigned r) {
    if (r > rows || r > cols) return 0;
    BigInt Q(std::to_string(qq)), num = 1, den = 1;
    for (unsigned i = 0; i < r; ++i) {
        BigInt qi = ipow(Q, i);
        num *= (ipow(Q, rows) - qi) * (ipow(Q, cols) - qi);
        den *= ipow(Q, r) - qi;
    }
    BigInt out;
    mpz_divexact(out.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return out;
}

BigRational abmax_expected_bad(std::uint64_t p, unsigned n, unsigned h) {
    if (n < 3 || h < 3 || h >= n) return 0;
    const unsigned m = n - 3, a = unsigned(choose2(h));
    BigInt low = 0;
    for (unsigned r = 0; r <= h - 3; ++r) low += matrices_of_rank(p, m, a, r);
    BigRational prob(low, ipow(BigInt(std::to_string(p)), (unsigned long)m * a));
    prob.canonicalize();
    return gb(n, h, p) * prob;
}

BigRational abmax_union_term(std::uint64_t p, unsigned n, unsigned h) {
    if (n < 3 || h < 3 || h >= n) return 0;
    return gb(n, h, p) * gb(n - 3, h - 3, p) * ppow(p, -choose2(h) * (long(n) - long(h)));
}

BigRational abmax_markov_bound(std::uint64_t p, unsigned n) { return markov_tail(p, n); }

BigRational dmax_expected_bad(std::uint64_t p, unsigned n) {
    if (p == 2) throw std::invalid_argument("dmax_expected_bad: odd p only");
    BigRational s = 0;
    for (unsigned h = 2; h < n; ++h) s += gb(n - 2, h - 2, p) * ppow(p, -choose2(h) * (long(n) - long(h)));
    return s;
}

BigRational dmax_markov_bound(std::uint64_t p, unsigned n) {
    const long c = p == 2 ? 16 : 4;
    return BigRational(c) * ppow(p, -(long(n) - 2)) + BigRational(c * (long(n) - 3)) * ppow(p, -2 * (long(n) - 3));
}

BigRational quad_union_term(unsigned n, unsigned h) {
    if (h < 2 || h >= n) return 0;
    return gb(n, h, 2) * gb(n - 2, h - 2, 2) * ppow(2, -long(h) * (long(h) + 1) * (long(n) - long(h)) / 2);
}

}  // namespace pglab::bounds
