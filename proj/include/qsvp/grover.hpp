#pragma once

#include <cstdint>
#include <vector>

#include "qsvp/circuit.hpp"
#include "qsvp/errors.hpp"
#include "qsvp/numeric.hpp"
#include "qsvp/oracle.hpp"

namespace qsvp {

// k = ceil((pi/4) sqrt(N/M)), evaluated in 256-fractional-bit integer
// arithmetic (pi from a 200-digit literal).  Requires 1 <= M <= N.
Int iteration_count(const Int& N, const Int& M);

// sin^2((2k+1) asin sqrt(M/N)) in double precision.
double success_probability(const Int& N, const Int& M, const Int& k);

// Inversion about the mean on `bits` wires: H X (controlled-Z core) X H.
// The multi-controlled phase is held symbolically (H MCX H), so the
// circuit needs no scratch wires until decomposition.
Circuit build_diffusion(int bits);

struct GroverPlan {
  Int search_space;  // N = 2^(input bits)
  Int marked;        // M assumed when sizing k
  Int iterations;    // k
  ResourceMetrics per_iteration;  // one oracle + diffusion pass
  std::uint64_t prep_cost = 0;   // inbits + 2 (H layer, X y, H y)
  std::uint64_t prep_depth = 0;  // 2
  // Linear totals prep + k * per_iteration, computed arithmetically (k can
  // be astronomically large, so these are big integers).
  Int total_cost;
  Int total_depth;
  Int total_t_count;
  Int total_t_depth;
  std::uint64_t width = 0;
  double success = 0.0;  // success_probability(N, M, k)
};

GroverPlan plan_grover(const OracleCircuit& oc, const Int& M);

// Materializes preparation + k full iterations.  Refuses to build circuits
// beyond max_gates gates (CapacityError) -- planned totals stay available
// through plan_grover regardless.
Circuit assemble_grover(const OracleCircuit& oc, const Int& M,
                        std::uint64_t max_gates = std::uint64_t{1} << 26);

// Reference oracle that flips y exactly on the listed `bits`-wide input
// patterns (one X-conjugated MCX per pattern).
Circuit build_ideal_oracle(int bits, const std::vector<std::uint64_t>& marked);

// Full search instance over the ideal oracle, for statevector validation.
Circuit build_ideal_grover(int bits, const std::vector<std::uint64_t>& marked,
                           const Int& k);

}  // namespace qsvp
