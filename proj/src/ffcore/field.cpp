#include "pglab/ffcore/field.hpp"

namespace pglab {

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::uint64_t d = 3; d * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

void require_matrix_prime(std::uint32_t p) {
    if (!is_prime(p))
        throw std::invalid_argument("modulus " + std::to_string(p) + " is not prime");
    if (p > kMaxMatrixPrime)
        throw std::invalid_argument("modulus " + std::to_string(p) + " exceeds byte-sized residues");
}

PrimeField::PrimeField(std::uint32_t p) : p_(p) {
    require_matrix_prime(p);
    for (std::uint32_t a = 1; a < p; ++a) {
        // a^(p-2) by square and multiply
        std::uint32_t r = 1, b = a, e = p - 2;
        while (e) {
            if (e & 1) r = (r * b) % p;
            b = (b * b) % p;
            e >>= 1;
        }
        inv_[a] = Residue(r);
    }
}

Residue PrimeField::inv(Residue a) const {
    if (a == 0) throw std::domain_error("inverse of zero in F_p");
    return inv_[a];
}

}  // namespace pglab
