#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qsvp/circuit.hpp"
#include "qsvp/errors.hpp"
#include "qsvp/lattice.hpp"
#include "qsvp/numeric.hpp"
#include "qsvp/sim.hpp"

namespace qsvp {

// Per-coordinate offset binary encoding:
//   x_i = -d_i + sum_j c_{ij} 2^j,  c_i on w_i = bitlen(2 d_i) bits,
// so x_i ranges over [-d_i, 2^{w_i} - 1 - d_i].
struct CoefficientEncoding {
  IntVec d;
  std::vector<int> w;

  int rank() const { return static_cast<int>(d.size()); }
  int total_bits() const;
  Int lo(int i) const { return -d[i]; }
  Int hi(int i) const { return pow2(static_cast<unsigned>(w[i])) - 1 - d[i]; }
  Int search_space() const;  // 2^total_bits

  // Input wire b of the oracle is bit (b - offset_i) of c_i, where
  // offset_i = w_0 + ... + w_{i-1}.
  IntVec decode(const BitString& bits) const;
  IntVec decode_index(std::uint64_t pattern) const;  // total_bits() <= 62
  BitString encode(const IntVec& x) const;           // throws if out of range
};

CoefficientEncoding encoding_from_bounds(const IntVec& d);

// Uniform w = max(2, ceil(log2 n)) bits per coordinate, d = 2^{w-2}.
CoefficientEncoding log_n_encoding(int n);

enum class BoundMode { Explicit, Uniform, Dual };

// Coefficient bounds for the search box.
//  - Explicit: caller-provided offsets (validated d_i >= 1).
//  - Uniform: log_n_encoding(rank), independent of the entries.
//  - Dual: d_i = max(1, ceil(A |dual row i|)), exact given A^2 as a
//    rational; A^2 defaults to the squared Gaussian heuristic.
CoefficientEncoding derive_bounds(const LatticeBasis& basis, BoundMode mode,
                                  const IntVec* explicit_d = nullptr,
                                  const Rat* radius_sq = nullptr);

struct Threshold {
  Int tau;             // mark |xB|^2 <= tau
  double radius = 0;   // informational sqrt(tau) scale for reports
  std::string source;  // "gh", "explicit"
};

// tau = floor((scale * gh)^2) with scale >= 1.
Threshold choose_threshold_gh(const LatticeBasis& basis, double scale);
// tau = floor(radius^2) for an exact squared radius.
Threshold choose_threshold_explicit(const Rat& radius_sq);

// Formula upper bounds for the arithmetic register widths.  Synthesis
// re-derives exact value intervals and raises PlanError if any physical
// register escapes its planned bound.
struct WidthPlan {
  std::vector<std::vector<int>> product_width;  // [i][j], 0 when row[i][j]==0
  std::vector<int> inner_sum_width;             // per column, 0 when empty
  int square_width = 0;
  int outer_sum_width = 0;
  int compare_width = 0;
};

WidthPlan plan_widths(const IntMat& effective_rows,
                      const CoefficientEncoding& enc);

struct OracleCircuit {
  Circuit circuit;
  CoefficientEncoding encoding;
  Threshold threshold;
  WidthPlan plan;
  IntMat effective_rows;          // rows after sign normalization
  std::vector<bool> negated_rows; // true where the original row was negated
  int input_bits = 0;             // wires [0, input_bits) hold c
  std::uint32_t y_index = 0;      // flip wire
  Int vacuous_tau;                // max reachable |xB|^2 over the box
};

// True iff |x . rows|^2 <= tau.
bool classical_predicate(const IntMat& rows, const IntVec& x, const Int& tau);

// Builds the marking oracle |c>|y> -> |c>|y xor [ |xB|^2 <= tau ]> from
// X/CX/CCX gates; every ancilla returns to zero.  Rows are sign-normalized
// so column 0 is non-negative; all counting against this oracle must use
// effective_rows, not the original basis.
OracleCircuit synthesize_oracle(const LatticeBasis& basis,
                                const CoefficientEncoding& enc,
                                const Threshold& thr);

// Planning heuristic 1.5 n log2(n) - 2.26 n for the working-register share
// of the oracle footprint.
double qubit_requirement_bound(int n);

// Exact number of encoded inputs the oracle marks (zero vector included).
Int count_marked(const OracleCircuit& oc,
                 std::uint64_t cap = std::uint64_t{1} << 26, int jobs = 0);

struct OracleCheckReport {
  std::uint64_t patterns_checked = 0;  // (input, y) pairs executed
  std::uint64_t flip_failures = 0;
  std::uint64_t ancilla_violations = 0;
  std::uint64_t input_preservation_violations = 0;
  bool has_counterexample = false;
  std::uint64_t counterexample_pattern = 0;
  IntVec counterexample;
  bool ok() const {
    return flip_failures == 0 && ancilla_violations == 0 &&
           input_preservation_violations == 0;
  }
};

// Exhaustive truth-table check of the oracle: every encoded input, under
// both initial values of y, executed 64 patterns at a time in bit-sliced
// form.  Input spaces larger than max_patterns raise CapacityError.
OracleCheckReport verify_oracle(const OracleCircuit& oc,
                                std::uint64_t max_patterns = std::uint64_t{1}
                                                             << 22,
                                int jobs = 0);

}  // namespace qsvp
