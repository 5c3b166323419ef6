#pragma once

// Exact integer/rational arithmetic helpers shared by the lattice, oracle
// and search-planning modules.  Everything that feeds a decision (thresholds,
// determinants, iteration counts) is computed exactly or with an explicit
// precision budget; doubles only appear at the reporting boundary.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qsvp {

using Int = mpz_class;
using Rat = mpq_class;

// Number of bits needed to write |v| in binary; bitlen(0) == 0.
inline int bitlen(const Int& v) {
  if (v == 0) return 0;
  Int a = abs(v);
  return static_cast<int>(mpz_sizeinbase(a.get_mpz_t(), 2));
}

inline int bitlen_u64(std::uint64_t v) {
  int n = 0;
  while (v) { ++n; v >>= 1; }
  return n;
}

// ceil(log2(v)) for v >= 1.
inline int ceil_log2(std::uint64_t v) {
  if (v == 0) throw std::invalid_argument("ceil_log2: v must be >= 1");
  int b = bitlen_u64(v);
  return (v == (std::uint64_t(1) << (b - 1))) ? b - 1 : b;
}

inline Int pow2(unsigned e) {
  Int r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, e);
  return r;
}

inline Int floor_rat(const Rat& q) {
  Int r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  return r;
}

inline Int ceil_rat(const Rat& q) {
  Int r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  return r;
}

// Nearest integer; half-way cases round away from zero.  Only the
// |q - round(q)| <= 1/2 contract matters to the callers (size reduction).
inline Int round_rat(const Rat& q) {
  Rat twice = q * 2;
  Int num = twice.get_num(), den = twice.get_den();
  Int fl;
  mpz_fdiv_q(fl.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  // fl = floor(2q); round(q) = floor((2q + 1) / 2) works for all signs.
  Int r;
  Int shifted = fl + 1;
  mpz_fdiv_q_2exp(r.get_mpz_t(), shifted.get_mpz_t(), 1);
  return r;
}

// floor(sqrt(v)) for v >= 0.
inline Int isqrt(const Int& v) {
  if (v < 0) throw std::invalid_argument("isqrt: negative argument");
  Int r;
  mpz_sqrt(r.get_mpz_t(), v.get_mpz_t());
  return r;
}

// q^(1/k) for a nonnegative rational q, computed with `frac_bits` fractional
// bits of fixed-point precision before conversion to double.
inline double root_hp(const Rat& q, unsigned k, unsigned frac_bits = 64) {
  if (q < 0) throw std::invalid_argument("root_hp: negative argument");
  if (k == 0) throw std::invalid_argument("root_hp: zeroth root");
  if (q == 0) return 0.0;
  // Scale so that (num << k*F) / den is a big integer, take the integer
  // k-th root, and descale: the result carries F fractional bits.
  Int num = q.get_num(), den = q.get_den();
  Int scaled = num << (static_cast<unsigned long>(k) * frac_bits);
  Int t;
  mpz_fdiv_q(t.get_mpz_t(), scaled.get_mpz_t(), den.get_mpz_t());
  Int r;
  mpz_root(r.get_mpz_t(), t.get_mpz_t(), k);
  Rat out(r, pow2(frac_bits));
  return out.get_d();
}

// sqrt with the same fixed-point scheme.
inline double sqrt_hp(const Rat& q, unsigned frac_bits = 64) {
  return root_hp(q, 2, frac_bits);
}

// Decimal string for reports; GMP prints exact values.
inline std::string to_decimal(const Int& v) { return v.get_str(); }

}  // namespace qsvp
