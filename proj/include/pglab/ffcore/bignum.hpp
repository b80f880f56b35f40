#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace pglab {

/// Arbitrary-precision integers and rationals. mpq_class keeps the
/// denominator positive and the fraction reduced after every operation.
using BigInt = mpz_class;
using BigRational = mpq_class;

BigInt ipow(const BigInt& base, unsigned long exp);

/// base^exp for any signed exponent; base must be nonzero when exp < 0.
BigRational rpow(const BigRational& base, long exp);

/// Number of d-dimensional subspaces of F_p^n.
BigInt gaussian_binomial(unsigned n, unsigned d, std::uint64_t p);

/// x (x-1) ... (x-k+1); equals 1 for k = 0.
BigRational falling_factorial(const BigRational& x, unsigned k);

BigInt binomial(const BigInt& n, unsigned k);
BigInt factorial(unsigned k);

/// Saturating conversion for enumeration sizes.
std::uint64_t to_u64_saturating(const BigInt& x);

/// Scientific rendering with `digits` significant digits, rounded half away
/// from zero using exact integer arithmetic (e.g. "9.71468292152e-01").
std::string to_scientific(const BigRational& x, int digits = 12);

double to_double(const BigRational& x);

}  // namespace pglab
