#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace pglab {

/// A residue modulo a prime p <= 251, always stored reduced.
using Residue = std::uint8_t;
using FpVector = std::vector<Residue>;

/// Largest prime whose residues fit in a Residue.
inline constexpr std::uint32_t kMaxMatrixPrime = 251;

class DimensionMismatch : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class GuardExceeded : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

bool is_prime(std::uint64_t n);

/// Arithmetic in F_p for byte-sized primes. Cheap to copy.
class PrimeField {
  public:
    explicit PrimeField(std::uint32_t p);

    std::uint32_t p() const { return p_; }

    Residue add(Residue a, Residue b) const {
        unsigned s = unsigned(a) + b;
        return Residue(s >= p_ ? s - p_ : s);
    }
    Residue sub(Residue a, Residue b) const {
        return Residue(a >= b ? a - b : a + p_ - b);
    }
    Residue neg(Residue a) const { return Residue(a == 0 ? 0 : p_ - a); }
    Residue mul(Residue a, Residue b) const { return Residue((unsigned(a) * b) % p_); }
    Residue inv(Residue a) const;
    Residue reduce(std::int64_t x) const {
        std::int64_t r = x % std::int64_t(p_);
        return Residue(r < 0 ? r + p_ : r);
    }

  private:
    std::uint32_t p_;
    std::array<Residue, 256> inv_{};
};

/// Validates that p is a prime usable for matrices; throws std::invalid_argument otherwise.
void require_matrix_prime(std::uint32_t p);

}  // namespace pglab
