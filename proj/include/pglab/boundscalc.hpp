#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pglab/ffcore/bignum.hpp"

/// Exact evaluation of the Poisson parameters, the truncated exponential
/// series and the four closed-form bounds, plus the Markov-inequality terms
/// behind them. Nothing here touches floating point except the rendered
/// approximations.
namespace pglab::bounds {

/// (1 - 1/p)^-1 (1 - 1/p^2)^-1 (1 - 1/p^3)^-1.
BigRational lambda_p(std::uint64_t p);

/// lambda_p (1 - p^-n)(1 - p^{1-n})(1 - p^{2-n}), which equals [n 3]_p p^{-3(n-3)}.
BigRational lambda_p_n(std::uint64_t p, unsigned n);

/// (h-2)(h-3)(h-n)/2.
BigRational f_cubic(long h, long n);

/// sum_{i=1..k} (-1)^{i-1} x^i / i!.
BigRational F_partial(unsigned k, const BigRational& x);

BigRational bound_A1(std::uint64_t p, unsigned n);
BigRational bound_A2(std::uint64_t p, unsigned n);
BigRational bound_A3(std::uint64_t p, unsigned n);
BigRational bound_A4(unsigned n);

enum class BoundId { A1, A2, A3, A4 };
std::string_view to_string(BoundId id);
BoundId parse_bound_id(std::string_view text);

struct BoundItem {
    BoundId id;
    std::uint64_t p;
    unsigned n;
    BigRational value;
    bool pass;
};

struct AppendixReport {
    std::vector<BoundItem> items;
    bool all_pass = true;
    BigRational max_value = 0;
};

/// The full list: A1(13, 12..14), A2(13,15), A2(17,12), A3(p, 160..180) for
/// p in {2,3,5,7,11}, A4(180); `only` keeps one family.
AppendixReport verify_appendix_A1(std::optional<BoundId> only = std::nullopt);

/// item,p,n,value_num,value_den,approx,pass
std::string report_csv(const AppendixReport& report);

/// Number of rows x cols matrices over F_q of rank r.
BigInt matrices_of_rank(std::uint64_t q, unsigned rows, unsigned cols, unsigned r);

/// m = n-3 ab-max model. Exact E[N_h] = [n h] Pr(rank of a uniform
/// (n-3) x C(h,2) matrix <= h-3).
BigRational abmax_expected_bad(std::uint64_t p, unsigned n, unsigned h);
/// Union bound [n h][n-3 h-3] p^{-C(h,2)(n-h)} for E[N_h].
BigRational abmax_union_term(std::uint64_t p, unsigned n, unsigned h);
/// 16 (n-4) p^{4-n}.
BigRational abmax_markov_bound(std::uint64_t p, unsigned n);

/// Odd p, m = n-2, fixed surjective F: E[N] = sum_{h=2}^{n-1} [n-2 h-2] p^{-C(h,2)(n-h)}.
BigRational dmax_expected_bad(std::uint64_t p, unsigned n);
/// 4 p^{-(n-2)} + 4(n-3) p^{-2(n-3)} for odd p, 16 2^{-(n-2)} + 16(n-3) 2^{-2(n-3)} for p = 2.
BigRational dmax_markov_bound(std::uint64_t p, unsigned n);
/// p = 2 union bound [n h][n-2 h-2] 2^{-h(h+1)(n-h)/2}.
BigRational quad_union_term(unsigned n, unsigned h);

}  // namespace pglab::bounds
