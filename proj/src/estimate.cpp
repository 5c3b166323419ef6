#include "qsvp/estimate.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdlib>
#include <functional>
#include <random>
#include <sstream>
#include <stdexcept>

#include "qsvp/circuit.hpp"
#include "qsvp/lattice.hpp"

namespace qsvp {

namespace {

constexpr const char* kCsvHeader = "n,width,depth,quantum_cost,t_count,t_depth,k";

IntMat random_full_rank_basis(int n, int range, std::mt19937_64& rng) {
  if (n < 1) throw std::invalid_argument("dimension must be positive");
  if (range < 1) throw std::invalid_argument("entry range must be positive");
  const std::uint64_t span = 2 * static_cast<std::uint64_t>(range) + 1;
  for (int attempt = 0; attempt < 100; ++attempt) {
    IntMat rows(n, IntVec(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        rows[i][j] = static_cast<long>(rng() % span) - range;
    try {
      LatticeBasis probe(rows);  // exact rank check
      return rows;
    } catch (const std::invalid_argument&) {
      continue;  // singular draw; resample the whole matrix
    }
  }
  throw std::runtime_error("failed to draw a full-rank basis");
}

Int iterations_or_zero(const Int& space, const Int& marked) {
  if (space < marked) return Int(0);
  return iteration_count(space, marked);
}

struct TermDef {
  const char* name;
  std::function<double(double, double)> eval;  // (n, L)
};

std::vector<TermDef> family_terms(const std::string& family) {
  if (family == "space")
    return {
        {"n^2*L", [](double n, double L) { return n * n * L; }},
        {"n*L", [](double n, double L) { return n * L; }},
        {"L", [](double, double L) { return L; }},
        {"n^2", [](double n, double) { return n * n; }},
        {"n", [](double n, double) { return n; }},
        {"1", [](double, double) { return 1.0; }},
    };
  if (family == "time")
    return {
        {"n^2*L^2", [](double n, double L) { return n * n * L * L; }},
        {"n*L^2", [](double n, double L) { return n * L * L; }},
        {"n^2*L", [](double n, double L) { return n * n * L; }},
        {"n*L", [](double n, double L) { return n * L; }},
        {"n^2", [](double n, double) { return n * n; }},
        {"n", [](double n, double) { return n; }},
        {"L^2", [](double, double L) { return L * L; }},
        {"L", [](double, double L) { return L; }},
        {"1", [](double, double) { return 1.0; }},
    };
  if (family == "cost")
    return {
        {"n^3*L^2", [](double n, double L) { return n * n * n * L * L; }},
        {"n^2*L^2", [](double n, double L) { return n * n * L * L; }},
        {"n*L^2", [](double n, double L) { return n * L * L; }},
        {"n^3*L", [](double n, double L) { return n * n * n * L; }},
        {"n^2*L", [](double n, double L) { return n * n * L; }},
        {"n*L", [](double n, double L) { return n * L; }},
        {"n^3", [](double n, double) { return n * n * n; }},
        {"n^2", [](double n, double) { return n * n; }},
        {"n", [](double n, double) { return n; }},
        {"L^2", [](double, double L) { return L * L; }},
        {"L", [](double, double L) { return L; }},
        {"1", [](double, double) { return 1.0; }},
    };
  throw std::invalid_argument("unknown fit family: " + family);
}

double log_of(double n, LogBase base) {
  return base == LogBase::Two ? std::log2(n) : std::log(n);
}

std::uint64_t parse_u64(const std::string& s) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw std::invalid_argument("bad unsigned field in CSV: " + s);
  return std::strtoull(s.c_str(), nullptr, 10);
}

}  // namespace

std::vector<int> default_sweep_dims() {
  return {2, 3, 4, 5, 6, 8, 10, 12, 15, 20, 25, 30, 35, 40, 45, 50};
}

SweepRow sweep_point(int n, const SweepOptions& opt) {
  std::mt19937_64 rng(opt.seed + static_cast<std::uint64_t>(n));
  IntMat rows = random_full_rank_basis(n, opt.entry_range, rng);
  LatticeBasis basis(rows);
  CoefficientEncoding enc = log_n_encoding(n);
  Threshold thr = choose_threshold_gh(basis, opt.gh_scale);
  OracleCircuit oc = synthesize_oracle(basis, enc, thr);
  ResourceMetrics met = metrics(oc.circuit);

  SweepRow row;
  row.n = n;
  row.width = met.width;
  row.depth = met.depth;
  row.quantum_cost = met.quantum_cost;
  row.t_count = met.t_count;
  row.t_depth = met.t_depth;
  row.k = iterations_or_zero(enc.search_space(), opt.marked);
  const unsigned logn = n > 1 ? ceil_log2(static_cast<std::uint64_t>(n)) : 0;
  row.k_formula = iterations_or_zero(
      pow2(static_cast<unsigned>(n) * logn), opt.marked);
  return row;
}

std::vector<SweepRow> run_sweep(const SweepOptions& opt) {
  std::vector<int> dims = opt.dims.empty() ? default_sweep_dims() : opt.dims;
  std::vector<SweepRow> out;
  out.reserve(dims.size());
  for (int n : dims) out.push_back(sweep_point(n, opt));
  return out;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << kCsvHeader << '\n';
  for (const SweepRow& r : rows) {
    os << r.n << ',' << r.width << ',' << r.depth << ',' << r.quantum_cost
       << ',' << r.t_count << ',' << r.t_depth << ',' << to_decimal(r.k)
       << '\n';
  }
  return os.str();
}

std::vector<SweepRow> sweep_from_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  bool saw_header = false;
  std::vector<SweepRow> out;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!saw_header) {
      if (line != kCsvHeader)
        throw std::invalid_argument("unexpected CSV header: " + line);
      saw_header = true;
      continue;
    }
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      std::size_t comma = line.find(',', start);
      fields.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 7)
      throw std::invalid_argument("expected 7 CSV fields, got line: " + line);
    SweepRow r;
    r.n = static_cast<int>(parse_u64(fields[0]));
    if (r.n < 1) throw std::invalid_argument("bad dimension in CSV");
    r.width = parse_u64(fields[1]);
    r.depth = parse_u64(fields[2]);
    r.quantum_cost = parse_u64(fields[3]);
    r.t_count = parse_u64(fields[4]);
    r.t_depth = parse_u64(fields[5]);
    if (fields[6].empty() ||
        fields[6].find_first_not_of("0123456789") != std::string::npos)
      throw std::invalid_argument("bad iteration count in CSV");
    r.k = Int(fields[6]);
    const unsigned logn =
        r.n > 1 ? ceil_log2(static_cast<std::uint64_t>(r.n)) : 0;
    r.k_formula =
        iterations_or_zero(pow2(static_cast<unsigned>(r.n) * logn), Int(3));
    out.push_back(std::move(r));
  }
  if (!saw_header) throw std::invalid_argument("empty CSV input");
  return out;
}

FitResult fit_metric(const std::vector<double>& ns,
                     const std::vector<double>& values,
                     const std::string& family, LogBase base) {
  if (ns.size() != values.size())
    throw std::invalid_argument("fit inputs must have matching lengths");
  std::vector<TermDef> terms = family_terms(family);
  if (ns.size() < terms.size())
    throw std::invalid_argument("fit needs at least " +
                                std::to_string(terms.size()) + " points");
  for (double n : ns)
    if (!(n > 1.0))
      throw std::invalid_argument("fit dimensions must exceed 1");

  const Eigen::Index rows = static_cast<Eigen::Index>(ns.size());
  const Eigen::Index cols = static_cast<Eigen::Index>(terms.size());
  Eigen::MatrixXd A(rows, cols);
  Eigen::VectorXd b(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double n = ns[static_cast<std::size_t>(i)];
    const double L = log_of(n, base);
    for (Eigen::Index j = 0; j < cols; ++j)
      A(i, j) = terms[static_cast<std::size_t>(j)].eval(n, L);
    b(i) = values[static_cast<std::size_t>(i)];
  }
  // Minimize relative, not absolute, residuals: the metrics span several
  // orders of magnitude across the fitted range, and unweighted least
  // squares would let the largest dimensions dominate the solution.
  Eigen::MatrixXd Aw = A;
  Eigen::VectorXd bw = b;
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double w = 1.0 / std::max(1.0, std::fabs(b(i)));
    Aw.row(i) *= w;
    bw(i) *= w;
  }
  Eigen::VectorXd x = Aw.colPivHouseholderQr().solve(bw);

  FitResult fit;
  fit.family = family;
  fit.base = base;
  for (const TermDef& t : terms) fit.term_names.push_back(t.name);
  fit.coeffs.assign(x.data(), x.data() + x.size());

  double sum_sq = 0, max_err = 0;
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double pred = A.row(i).dot(x);
    const double denom = std::max(1.0, std::fabs(b(i)));
    const double rel = std::fabs(pred - b(i)) / denom;
    sum_sq += rel * rel;
    max_err = std::max(max_err, rel);
  }
  fit.rms_rel_err = std::sqrt(sum_sq / static_cast<double>(rows));
  fit.max_rel_err = max_err;
  return fit;
}

double eval_fit(const FitResult& fit, double n) {
  if (!(n > 1.0)) throw std::invalid_argument("evaluation needs n > 1");
  std::vector<TermDef> terms = family_terms(fit.family);
  if (terms.size() != fit.coeffs.size())
    throw std::invalid_argument("fit coefficient count mismatch");
  const double L = log_of(n, fit.base);
  double acc = 0;
  for (std::size_t j = 0; j < terms.size(); ++j)
    acc += fit.coeffs[j] * terms[j].eval(n, L);
  return acc;
}

double reference_space(double n, LogBase base) {
  const double L = log_of(n, base);
  return 3.4 * n * n * L + 97.81 * n - 999.2;
}

double reference_time(double n, LogBase base) {
  const double L = log_of(n, base);
  return 0.34 * n * n * L * L + 4028.29 * L - 5124.38;
}

double reference_cost(double n, LogBase base) {
  const double L = log_of(n, base);
  return 2.038 * n * n * n * L * L + 6.3 * n - 2450093.0;
}

double reference_t_count(double n, LogBase base) {
  const double L = log_of(n, base);
  return 1803.57 * n * n + 2628.43 * n * L - 51449.96 * n + 281006.36;
}

}  // namespace qsvp
