#pragma once

#include <gmpxx.h>

namespace muprod::rat {

// ExactRational: reduced fraction with positive denominator. mpq_class
// canonicalizes to exactly that form, so it backs the type directly.
using ExactRational = mpq_class;
using BigInt = mpz_class;

inline BigInt factorial(long n) {
  BigInt r;
  mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
  return r;
}

// Pochhammer (-n)_k as an exact integer: (-1)^k n!/(n-k)! for k <= n, else 0.
inline BigInt pochhammer_neg(long n, long k) {
  if (k > n) return BigInt(0);
  BigInt r(1);
  for (long j = 0; j < k; ++j) r *= BigInt(-n + j);
  return r;
}

inline BigInt binomial(long n, long k) {
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

inline double to_double(const ExactRational& q) { return q.get_d(); }

}  // namespace muprod::rat
