#pragma once

#include <cstdint>
#include <vector>

#include "qsvp/grover.hpp"
#include "qsvp/lattice.hpp"
#include "qsvp/numeric.hpp"

namespace qsvp {

// Exact-rational LLL on integer rows (delta defaults to 0.99).
IntMat lll_reduce(IntMat rows, const Rat& delta = Rat(99, 100));

struct EnumerationResult {
  bool found = false;
  IntVec coeffs;  // block-local coefficients of the minimizer
  Rat norm_sq;    // exact squared length of the projected vector
  std::uint64_t nodes = 0;
};

// Exact shortest nonzero vector of the projected block pi_i(b_i .. b_j)
// (0-based, inclusive), by depth-first enumeration with exact rational
// pruning.  Pass 1 searches inside min(|b*_i|^2, (1.05 gh_block)^2); if it
// finds nothing strictly shorter than b*_i and that ball was smaller, a
// second pass searches the full |b*_i|^2 ball.  `found` implies a strict
// improvement over b*_i.
EnumerationResult svp_in_block(const IntMat& rows, int i, int j,
                               std::uint64_t node_cap = std::uint64_t{1}
                                                        << 26);

enum class BkzBackend { Classical, GroverCost };

struct BkzOptions {
  int beta = 2;
  // Hard cap on tours; a tour with no insertion always ends the run early.
  int max_tours = 16;
  BkzBackend backend = BkzBackend::Classical;
  Rat delta = Rat(99, 100);
  Int grover_marked = 3;  // M assumed by the quantum cost model
};

// One per enumeration call under the GroverCost backend: the oracle for the
// denominator-cleared projected block, priced via the search plan.
struct BlockCost {
  int tour = 0;
  int i = 0, j = 0;  // 1-based window
  Int search_space;
  Int iterations;
  std::uint64_t width = 0;
  Int total_cost;
  Int total_depth;
  Int total_t_count;
  Int total_t_depth;
};

struct BkzResult {
  IntMat basis;
  int tours = 0;
  bool reached_fixpoint = false;  // a full tour ran without any insertion
  int insertions = 0;
  std::uint64_t enum_nodes = 0;
  std::vector<BlockCost> ledger;  // GroverCost backend only
};

BkzResult bkz_reduce(const LatticeBasis& basis, const BkzOptions& opt);

// Hermite-factor bound gamma_beta^((n-1)/(2(beta-1)) + (beta-2)/(2n)) on
// |b_1| / det^(1/n); exact Hermite constants cover 2 <= beta <= 8.
double quality_bound(int n, int beta);

// Smallest block size whose enumeration exponent beta log2 beta reaches
// twice that of the given classical block size (quadratic search speedup).
int crossover_beta(int beta_classical);

}  // namespace qsvp
