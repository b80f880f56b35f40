#include "pglab/ffcore/bignum.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace pglab {

BigInt ipow(const BigInt& base, unsigned long exp) {
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
    return r;
}

BigRational rpow(const BigRational& base, long exp) {
    if (exp >= 0) {
        BigRational r(ipow(base.get_num(), static_cast<unsigned long>(exp)),
                      ipow(base.get_den(), static_cast<unsigned long>(exp)));
        r.canonicalize();
        return r;
    }
    if (base == 0) throw std::domain_error("negative power of zero");
    auto e = static_cast<unsigned long>(-exp);
    BigRational r(ipow(base.get_den(), e), ipow(base.get_num(), e));
    r.canonicalize();
    return r;
}

BigInt gaussian_binomial(unsigned n, unsigned d, std::uint64_t p) {
    if (d > n) return 0;
    BigInt num = 1, den = 1;
    BigInt q(std::to_string(p));
    for (unsigned i = 0; i < d; ++i) {
        num *= ipow(q, n - i) - 1;
        den *= ipow(q, d - i) - 1;
    }
    BigInt r;
    mpz_divexact(r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return r;
}

BigRational falling_factorial(const BigRational& x, unsigned k) {
    BigRational r = 1;
    for (unsigned i = 0; i < k; ++i) r *= x - i;
    return r;
}

BigInt binomial(const BigInt& n, unsigned k) {
    BigInt r;
    mpz_bin_ui(r.get_mpz_t(), n.get_mpz_t(), k);
    return r;
}

BigInt factorial(unsigned k) {
    BigInt r;
    mpz_fac_ui(r.get_mpz_t(), k);
    return r;
}

std::uint64_t to_u64_saturating(const BigInt& x) {
    if (x < 0) return 0;
    if (mpz_sizeinbase(x.get_mpz_t(), 2) > 64) return std::numeric_limits<std::uint64_t>::max();
    std::uint64_t r = 0;
    mpz_export(&r, nullptr, -1, sizeof r, 0, 0, x.get_mpz_t());
    return r;
}

std::string to_scientific(const BigRational& x, int digits) {
    if (digits < 1) throw std::invalid_argument("to_scientific: digits must be positive");
    if (x == 0) return "0";
    BigRational a = abs(x);
    // First guess at floor(log10 a) from bit sizes, then correct.
    long e = static_cast<long>(std::floor(
        (double(mpz_sizeinbase(a.get_num_mpz_t(), 2)) - double(mpz_sizeinbase(a.get_den_mpz_t(), 2))) *
        0.30102999566398120));
    BigRational ten = 10;
    while (rpow(ten, e) > a) --e;
    while (rpow(ten, e + 1) <= a) ++e;
    // scaled in [10^(digits-1), 10^digits)
    BigRational scaled = a * rpow(ten, digits - 1 - e);
    BigInt q = scaled.get_num() / scaled.get_den();
    BigRational frac = scaled - BigRational(q);
    if (frac * 2 >= 1) q += 1;
    if (q == ipow(10, digits)) {
        q /= 10;
        ++e;
    }
    std::string s = q.get_str();
    std::string out = x < 0 ? "-" : "";
    out += s.substr(0, 1);
    if (digits > 1) out += "." + s.substr(1);
    out += "e";
    out += e < 0 ? "-" : "+";
    std::string es = std::to_string(e < 0 ? -e : e);
    if (es.size() < 2) es = "0" + es;
    return out + es;
}

double to_double(const BigRational& x) { return x.get_d(); }

}  // namespace pglab
