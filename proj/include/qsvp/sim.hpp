#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "qsvp/circuit.hpp"
#include "qsvp/errors.hpp"
#include "qsvp/lattice.hpp"
#include "qsvp/numeric.hpp"

namespace qsvp {

// Packed classical assignment of circuit wires; bit i holds wire i.
struct BitString {
  std::vector<std::uint64_t> words;
  int width = 0;

  BitString() = default;
  explicit BitString(int w) : words((w + 63) / 64, 0), width(w) {}

  bool get(int i) const { return (words[i >> 6] >> (i & 63)) & 1; }
  void set(int i, bool v) {
    std::uint64_t m = std::uint64_t{1} << (i & 63);
    if (v) words[i >> 6] |= m;
    else words[i >> 6] &= ~m;
  }
  void flip(int i) { words[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  bool operator==(const BitString&) const = default;
};

// Classical-reversible execution.  Only X/CX/CCX/MCX are legal; any other
// gate kind raises std::invalid_argument.
BitString run_bitwise(const Circuit& c, BitString in);

// 64 classical executions in parallel: lanes[q] holds wire q across the 64
// runs, one run per bit position.  Same gate-set restriction as run_bitwise.
void run_bitsliced(const Circuit& c, std::vector<std::uint64_t>& lanes);

using Amp = std::complex<double>;

// |index> on `width` wires (wire i is bit i of the state index).
std::vector<Amp> basis_state(int width, std::uint64_t index);

// Dense statevector execution of the full gate set.  Circuits wider than
// max_width raise CapacityError; a wrong-sized state raises
// std::invalid_argument.
std::vector<Amp> run_statevector(const Circuit& c, std::vector<Amp> state,
                                 int max_width = 24);

struct SvpCount {
  std::uint64_t patterns = 0;
  std::uint64_t satisfying = 0;  // |xB|^2 <= tau; the zero vector counts
  bool found_nonzero = false;
  Int min_nonzero_norm_sq;
  IntVec argmin;
};

// Exhaustively scans integer coefficient vectors lo <= x <= hi (coordinate
// wise) against the row matrix and counts |x B|^2 <= tau; tau < 0 counts
// nothing and just tracks the minimum.  Scan order is lexicographic, ties on
// the minimum resolve to the lexicographically smallest witness.  Boxes with
// more than `cap` points raise CapacityError.
SvpCount count_short_vectors(const IntMat& rows, const IntVec& lo,
                             const IntVec& hi, const Int& tau,
                             std::uint64_t cap = std::uint64_t{1} << 26,
                             int jobs = 0);

struct ShortestResult {
  Int norm_sq;
  IntVec coeffs;
};

// Exact lambda_1^2 by box enumeration.  Per-coordinate bounds come from the
// dual row norms scaled by the length of the first basis row: any vector no
// longer than b_1 has |x_i| <= |b_1| * |dual_i| by Cauchy-Schwarz, so the box
// provably contains a shortest vector.  Intended for reduced bases, where
// the box stays small.
ShortestResult brute_force_lambda1(const LatticeBasis& basis,
                                   std::uint64_t cap = std::uint64_t{1} << 26,
                                   int jobs = 0);

}  // namespace qsvp
