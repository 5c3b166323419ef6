#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qsvp/grover.hpp"
#include "qsvp/numeric.hpp"
#include "qsvp/oracle.hpp"

namespace qsvp {

struct SweepRow {
  int n = 0;
  std::uint64_t width = 0;
  std::uint64_t depth = 0;
  std::uint64_t quantum_cost = 0;
  std::uint64_t t_count = 0;
  std::uint64_t t_depth = 0;
  Int k;          // iterations for the synthesized search space
  Int k_formula;  // iterations for the nominal N = 2^(n ceil log2 n)
};

struct SweepOptions {
  std::vector<int> dims;       // empty = default_sweep_dims()
  std::uint64_t seed = 1;
  int entry_range = 10;        // basis entries uniform in [-range, range]
  double gh_scale = 1.0;       // threshold radius scale
  Int marked = 3;              // M assumed when sizing k
};

std::vector<int> default_sweep_dims();  // {2,3,...,45,50}

// Synthesizes one random full-rank dimension-n instance (rng seeded with
// seed + n) and measures its oracle.
SweepRow sweep_point(int n, const SweepOptions& opt);

std::vector<SweepRow> run_sweep(const SweepOptions& opt);

// Round-trip CSV with the exact header
//   n,width,depth,quantum_cost,t_count,t_depth,k
// (k_formula is recomputed from n on load).
std::string sweep_to_csv(const std::vector<SweepRow>& rows);
std::vector<SweepRow> sweep_from_csv(const std::string& text);

enum class LogBase { Two, Natural };

struct FitResult {
  std::string family;  // "space", "time", or "cost"
  LogBase base = LogBase::Two;
  std::vector<std::string> term_names;
  std::vector<double> coeffs;
  double rms_rel_err = 0;
  double max_rel_err = 0;
};

// Least-squares fit over the family's term shapes with L = log(n):
//   space: n^2 L, n L, L, n^2, n, 1
//   time:  n^2 L^2, n L^2, n^2 L, n L, n^2, n, L^2, L, 1
//   cost:  n^3 L^2, n^2 L^2, n L^2, n^3 L, n^2 L, n L, n^3, n^2, n, L^2, L, 1
// Width belongs to "space", depth and t_depth to "time", quantum_cost and
// t_count to "cost".
FitResult fit_metric(const std::vector<double>& ns,
                     const std::vector<double>& values,
                     const std::string& family, LogBase base = LogBase::Two);

double eval_fit(const FitResult& fit, double n);

// Frozen long-range projection coefficients.  The Natural base is the
// calibrated form; the Two base evaluates the same shapes against log2 as a
// base-sensitivity cross-check.
double reference_space(double n, LogBase base);
double reference_time(double n, LogBase base);
double reference_cost(double n, LogBase base);
double reference_t_count(double n, LogBase base);

}  // namespace qsvp
