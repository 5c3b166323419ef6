#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qsvp/bkz.hpp"
#include "qsvp/circuit.hpp"
#include "qsvp/errors.hpp"
#include "qsvp/estimate.hpp"
#include "qsvp/grover.hpp"
#include "qsvp/lattice.hpp"
#include "qsvp/numeric.hpp"
#include "qsvp/oracle.hpp"
#include "qsvp/sim.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace qsvp;

constexpr const char* kVersion = "0.1.0";

std::string iso_now() {
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

Int parse_big(const std::string& s) {
  Int v;
  if (s.empty() || v.set_str(s, 10) != 0)
    throw std::invalid_argument("bad integer '" + s + "'");
  return v;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw std::invalid_argument("cannot open output file: " + path);
  f << text;
  if (!f) throw std::invalid_argument("failed writing output file: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open input file: " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

json new_report(const std::string& command, bool no_timestamp) {
  json rep;
  rep["command"] = command;
  rep["version"] = kVersion;
  if (!no_timestamp) rep["generated_at"] = iso_now();
  return rep;
}

void emit_report(const json& rep, const std::string& path) {
  std::string text = rep.dump(2);
  text.push_back('\n');
  if (path.empty())
    std::cout << text;
  else
    write_text_file(path, text);
}

json metrics_json(const ResourceMetrics& m) {
  return json{{"width", m.width},
              {"depth", m.depth},
              {"quantum_cost", m.quantum_cost},
              {"t_count", m.t_count},
              {"t_depth", m.t_depth}};
}

json int_list_json(const IntVec& v) {
  json a = json::array();
  for (const Int& x : v) a.push_back(to_decimal(x));
  return a;
}

json basis_rows_json(const IntMat& rows) {
  json a = json::array();
  for (const IntVec& r : rows) a.push_back(int_list_json(r));
  return a;
}

// ---------------------------------------------------------------------------
// Shared oracle construction options.

struct OracleArgs {
  std::string basis_path;
  std::string tau;            // decimal; empty = Gaussian-heuristic radius
  double gh_scale = 1.0;
  std::string bounds = "uniform";  // uniform | dual | explicit
  std::vector<std::string> explicit_d;
};

void add_oracle_options(CLI::App* cmd, OracleArgs& a) {
  cmd->add_option("basis", a.basis_path,
                  "basis file: header 'n m', then n rows of m integers")
      ->required();
  cmd->add_option("--tau", a.tau,
                  "mark |xB|^2 <= tau (decimal integer); default is the "
                  "Gaussian-heuristic radius");
  cmd->add_option("--gh-scale", a.gh_scale,
                  "radius scale (>= 1) applied to the Gaussian heuristic");
  cmd->add_option("--bounds", a.bounds,
                  "coefficient box: uniform (log-n), dual, or explicit")
      ->check(CLI::IsMember({"uniform", "dual", "explicit"}));
  cmd->add_option("--d", a.explicit_d,
                  "per-coordinate offsets for --bounds explicit")
      ->delimiter(',');
}

struct BuiltOracle {
  LatticeBasis basis;
  OracleCircuit oc;
};

BuiltOracle build_oracle(const OracleArgs& a) {
  LatticeBasis basis = read_basis_file(a.basis_path);
  Threshold thr;
  bool explicit_tau = !a.tau.empty();
  if (explicit_tau)
    thr = choose_threshold_explicit(Rat(parse_big(a.tau)));
  else
    thr = choose_threshold_gh(basis, a.gh_scale);

  CoefficientEncoding enc;
  if (a.bounds == "uniform") {
    enc = log_n_encoding(basis.rank());
  } else if (a.bounds == "dual") {
    if (explicit_tau) {
      Rat r2(thr.tau);
      enc = derive_bounds(basis, BoundMode::Dual, nullptr, &r2);
    } else {
      enc = derive_bounds(basis, BoundMode::Dual);
    }
  } else {  // explicit
    if (a.explicit_d.empty())
      throw std::invalid_argument("--bounds explicit requires --d");
    IntVec d;
    for (const std::string& s : a.explicit_d) d.push_back(parse_big(s));
    enc = derive_bounds(basis, BoundMode::Explicit, &d);
  }
  return BuiltOracle{basis, synthesize_oracle(basis, enc, thr)};
}

json oracle_json(const BuiltOracle& b) {
  const OracleCircuit& oc = b.oc;
  json enc;
  enc["w"] = oc.encoding.w;
  enc["d"] = int_list_json(oc.encoding.d);
  enc["input_bits"] = oc.input_bits;
  enc["search_space"] = to_decimal(oc.encoding.search_space());

  json thr;
  thr["tau"] = to_decimal(oc.threshold.tau);
  thr["radius"] = oc.threshold.radius;
  thr["source"] = oc.threshold.source;
  thr["always_true"] = oc.threshold.tau >= oc.vacuous_tau;
  thr["max_reachable"] = to_decimal(oc.vacuous_tau);

  json neg = json::array();
  for (bool f : oc.negated_rows) neg.push_back(f);

  json out;
  out["rank"] = b.basis.rank();
  out["ambient_dim"] = b.basis.ambient_dim();
  out["gram_det"] = to_decimal(b.basis.gram_det());
  out["gaussian_heuristic"] = gaussian_heuristic(b.basis);
  out["minkowski_bound"] = minkowski_bound(b.basis);
  out["encoding"] = enc;
  out["threshold"] = thr;
  out["negated_rows"] = neg;
  out["compare_width"] = oc.plan.compare_width;
  out["y_index"] = oc.y_index;
  out["gates"] = oc.circuit.size();
  out["metrics"] = metrics_json(metrics(oc.circuit));
  out["working_register_bound"] = qubit_requirement_bound(b.basis.rank());
  return out;
}

Circuit drop_gate(const Circuit& c, std::uint64_t idx) {
  if (idx >= c.size())
    throw std::invalid_argument("mutation index out of range");
  Circuit out(c.width());
  for (const QubitRegister& r : c.registers())
    out.declare_register(r.name, r.offset, r.width, r.kind);
  for (std::size_t i = 0; i < c.size(); ++i)
    if (i != idx) out.append(c.gate(i));
  return out;
}

// ---------------------------------------------------------------------------
// Subcommands.

struct CommonArgs {
  std::string report;
  bool no_timestamp = false;
};

void add_common(CLI::App* cmd, CommonArgs& c) {
  cmd->add_option("--report", c.report,
                  "write the JSON report here instead of stdout");
  cmd->add_flag("--no-timestamp", c.no_timestamp,
                "omit the timestamp so reports are byte-reproducible");
}

int cmd_oracle_build(const OracleArgs& oa, const CommonArgs& ca,
                     const std::string& out_path, bool count,
                     std::uint64_t cap, int jobs) {
  BuiltOracle b = build_oracle(oa);
  json rep = new_report("oracle-build", ca.no_timestamp);
  rep["oracle"] = oracle_json(b);
  if (count) rep["marked"] = to_decimal(count_marked(b.oc, cap, jobs));
  if (!out_path.empty()) {
    write_circuit_file(out_path, b.oc.circuit);
    rep["circuit_file"] = out_path;
  }
  emit_report(rep, ca.report);
  return 0;
}

int cmd_oracle_verify(const OracleArgs& oa, const CommonArgs& ca,
                      bool have_mutation, std::uint64_t mutate_idx,
                      std::uint64_t cap, int jobs) {
  BuiltOracle b = build_oracle(oa);
  OracleCircuit checked = b.oc;
  if (have_mutation) checked.circuit = drop_gate(b.oc.circuit, mutate_idx);

  OracleCheckReport r = verify_oracle(checked, cap, jobs);

  json rep = new_report("oracle-verify", ca.no_timestamp);
  rep["oracle"] = oracle_json(b);
  if (have_mutation) rep["mutated_gate"] = mutate_idx;
  json chk;
  chk["patterns_checked"] = r.patterns_checked;
  chk["flip_failures"] = r.flip_failures;
  chk["ancilla_violations"] = r.ancilla_violations;
  chk["input_preservation_violations"] = r.input_preservation_violations;
  chk["ok"] = r.ok();
  if (r.has_counterexample) {
    chk["counterexample_pattern"] = r.counterexample_pattern;
    chk["counterexample"] = int_list_json(r.counterexample);
  }
  rep["check"] = chk;
  emit_report(rep, ca.report);
  if (!r.ok())
    throw VerificationError("oracle check failed on " +
                            std::to_string(r.flip_failures) + " flips, " +
                            std::to_string(r.ancilla_violations) +
                            " ancilla leaks, " +
                            std::to_string(r.input_preservation_violations) +
                            " clobbered inputs");
  return 0;
}

int cmd_grover(const OracleArgs& oa, const CommonArgs& ca, const std::string& M,
               bool simulate, const std::string& assemble_path,
               std::uint64_t max_gates) {
  BuiltOracle b = build_oracle(oa);
  Int m = parse_big(M);
  GroverPlan plan = plan_grover(b.oc, m);

  json rep = new_report("grover", ca.no_timestamp);
  rep["oracle"] = oracle_json(b);
  json pj;
  pj["search_space"] = to_decimal(plan.search_space);
  pj["marked_assumed"] = to_decimal(plan.marked);
  pj["iterations"] = to_decimal(plan.iterations);
  pj["per_iteration"] = metrics_json(plan.per_iteration);
  pj["prep_cost"] = plan.prep_cost;
  pj["prep_depth"] = plan.prep_depth;
  pj["total_cost"] = to_decimal(plan.total_cost);
  pj["total_depth"] = to_decimal(plan.total_depth);
  pj["total_t_count"] = to_decimal(plan.total_t_count);
  pj["total_t_depth"] = to_decimal(plan.total_t_depth);
  pj["width"] = plan.width;
  pj["success_probability"] = plan.success;
  rep["plan"] = pj;

  if (!assemble_path.empty()) {
    Circuit g = assemble_grover(b.oc, m, max_gates);
    write_circuit_file(assemble_path, g);
    rep["circuit_file"] = assemble_path;
    rep["assembled_gates"] = g.size();
  }

  if (simulate) {
    const int tb = b.oc.encoding.total_bits();
    if (tb + 1 > 24)
      throw CapacityError("statevector simulation supports at most 23 "
                          "input bits, oracle has " + std::to_string(tb));
    std::vector<std::uint64_t> marked;
    const std::uint64_t total = std::uint64_t{1} << tb;
    for (std::uint64_t p = 0; p < total; ++p) {
      IntVec x = b.oc.encoding.decode_index(p);
      if (classical_predicate(b.oc.effective_rows, x, b.oc.threshold.tau))
        marked.push_back(p);
    }
    Circuit g = build_ideal_grover(tb, marked, plan.iterations);
    std::vector<Amp> state =
        run_statevector(g, basis_state(tb + 1, 0));
    double hit = 0;
    for (std::uint64_t p : marked)
      hit += std::norm(state[p]) + std::norm(state[p | (std::uint64_t{1} << tb)]);
    json sj;
    sj["marked"] = marked.size();
    sj["empirical_success"] = hit;
    if (!marked.empty())
      sj["predicted_success"] = success_probability(
          plan.search_space, Int(static_cast<long>(marked.size())),
          plan.iterations);
    rep["simulation"] = sj;
  }

  emit_report(rep, ca.report);
  return 0;
}

int cmd_sweep(const CommonArgs& ca, const std::vector<int>& dims,
              std::uint64_t seed, int entry_range, double gh_scale,
              const std::string& M, const std::string& out_path) {
  SweepOptions opt;
  opt.dims = dims;
  opt.seed = seed;
  opt.entry_range = entry_range;
  opt.gh_scale = gh_scale;
  opt.marked = parse_big(M);
  std::vector<SweepRow> rows = run_sweep(opt);

  std::string csv = sweep_to_csv(rows);
  if (out_path.empty() && ca.report.empty()) {
    std::cout << csv;
    return 0;
  }
  if (!out_path.empty()) write_text_file(out_path, csv);

  if (!ca.report.empty() || out_path.empty()) {
    json rep = new_report("sweep", ca.no_timestamp);
    rep["seed"] = seed;
    rep["entry_range"] = entry_range;
    json arr = json::array();
    for (const SweepRow& r : rows) {
      json e;
      e["n"] = r.n;
      e["width"] = r.width;
      e["depth"] = r.depth;
      e["quantum_cost"] = r.quantum_cost;
      e["t_count"] = r.t_count;
      e["t_depth"] = r.t_depth;
      e["k"] = to_decimal(r.k);
      e["k_formula"] = to_decimal(r.k_formula);
      arr.push_back(e);
    }
    rep["rows"] = arr;
    if (!out_path.empty()) rep["csv_file"] = out_path;
    emit_report(rep, ca.report);
  }
  return 0;
}

json fit_json(const FitResult& f) {
  json terms = json::array();
  for (std::size_t i = 0; i < f.term_names.size(); ++i)
    terms.push_back(json{{"term", f.term_names[i]}, {"coeff", f.coeffs[i]}});
  return json{{"family", f.family},
              {"log_base", f.base == LogBase::Two ? "2" : "e"},
              {"terms", terms},
              {"rms_rel_err", f.rms_rel_err},
              {"max_rel_err", f.max_rel_err}};
}

int cmd_fit(const CommonArgs& ca, const std::string& csv_path,
            const std::string& metric, const std::string& log_base) {
  std::vector<SweepRow> rows = sweep_from_csv(read_text_file(csv_path));
  LogBase base = log_base == "e" ? LogBase::Natural : LogBase::Two;

  std::vector<double> ns;
  for (const SweepRow& r : rows) ns.push_back(static_cast<double>(r.n));

  auto column = [&](const std::string& name) {
    std::vector<double> v;
    for (const SweepRow& r : rows) {
      if (name == "width") v.push_back(static_cast<double>(r.width));
      else if (name == "depth") v.push_back(static_cast<double>(r.depth));
      else if (name == "quantum_cost")
        v.push_back(static_cast<double>(r.quantum_cost));
      else if (name == "t_count") v.push_back(static_cast<double>(r.t_count));
      else v.push_back(static_cast<double>(r.t_depth));
    }
    return v;
  };
  auto family_for = [](const std::string& name) -> std::string {
    if (name == "width") return "space";
    if (name == "depth" || name == "t_depth") return "time";
    return "cost";
  };

  std::vector<std::string> wanted;
  if (metric == "all")
    wanted = {"width", "depth", "quantum_cost", "t_count", "t_depth"};
  else
    wanted = {metric};

  json rep = new_report("fit", ca.no_timestamp);
  rep["csv_file"] = csv_path;
  rep["points"] = rows.size();
  json fits;
  for (const std::string& name : wanted)
    fits[name] = fit_json(fit_metric(ns, column(name), family_for(name), base));
  rep["fits"] = fits;
  emit_report(rep, ca.report);
  return 0;
}

int cmd_extrapolate(const CommonArgs& ca, const std::vector<int>& dims,
                    const std::string& M, const std::string& csv_path) {
  Int m = parse_big(M);
  json rep = new_report("extrapolate", ca.no_timestamp);
  rep["note"] =
      "reference model coefficients do not pin the logarithm base; "
      "log_e and log_2 interpretations are both reported";

  // Optional refit: fit our own sweep data and evaluate the fitted models
  // at the target dimensions, next to the reference-coefficient values.
  struct Refit {
    std::string metric;
    FitResult fit;
  };
  std::vector<Refit> refits;
  if (!csv_path.empty()) {
    std::vector<SweepRow> rows = sweep_from_csv(read_text_file(csv_path));
    std::vector<double> ns;
    for (const SweepRow& r : rows) ns.push_back(static_cast<double>(r.n));
    auto column = [&](const std::string& name) {
      std::vector<double> v;
      for (const SweepRow& r : rows) {
        if (name == "width") v.push_back(static_cast<double>(r.width));
        else if (name == "depth") v.push_back(static_cast<double>(r.depth));
        else if (name == "quantum_cost")
          v.push_back(static_cast<double>(r.quantum_cost));
        else v.push_back(static_cast<double>(r.t_count));
      }
      return v;
    };
    const std::pair<std::string, std::string> plan[] = {
        {"width", "space"},
        {"depth", "time"},
        {"quantum_cost", "cost"},
        {"t_count", "cost"}};
    json fj;
    for (LogBase base : {LogBase::Natural, LogBase::Two}) {
      json per;
      for (const auto& [name, family] : plan) {
        FitResult f = fit_metric(ns, column(name), family, base);
        per[name] = fit_json(f);
        refits.push_back({name, std::move(f)});
      }
      fj[base == LogBase::Natural ? "log_e" : "log_2"] = std::move(per);
    }
    rep["refit_csv"] = csv_path;
    rep["refit_points"] = rows.size();
    rep["fits"] = std::move(fj);
  }

  json arr = json::array();
  for (int n : dims) {
    if (n < 2) throw std::invalid_argument("extrapolation needs n >= 2");
    json e;
    e["n"] = n;
    const double dn = static_cast<double>(n);
    json ln, l2;
    ln["space"] = reference_space(dn, LogBase::Natural);
    ln["time"] = reference_time(dn, LogBase::Natural);
    ln["cost"] = reference_cost(dn, LogBase::Natural);
    ln["t_count"] = reference_t_count(dn, LogBase::Natural);
    l2["space"] = reference_space(dn, LogBase::Two);
    l2["time"] = reference_time(dn, LogBase::Two);
    l2["cost"] = reference_cost(dn, LogBase::Two);
    l2["t_count"] = reference_t_count(dn, LogBase::Two);
    e["log_e"] = ln;
    e["log_2"] = l2;
    if (!refits.empty()) {
      json rn, r2;
      for (const Refit& r : refits) {
        json& dst = r.fit.base == LogBase::Natural ? rn : r2;
        dst[r.metric] = eval_fit(r.fit, dn);
      }
      e["refit_log_e"] = std::move(rn);
      e["refit_log_2"] = std::move(r2);
    }
    const unsigned logn = ceil_log2(static_cast<std::uint64_t>(n));
    Int space = pow2(static_cast<unsigned>(n) * logn);
    e["search_space"] = to_decimal(space);
    e["iterations"] =
        to_decimal(space < m ? Int(0) : iteration_count(space, m));
    arr.push_back(e);
  }
  rep["projections"] = arr;
  emit_report(rep, ca.report);
  return 0;
}

int cmd_bkz(const CommonArgs& ca, const std::string& basis_path, int beta,
            const std::string& backend, int max_tours, const std::string& term,
            double delta, bool have_delta, const std::string& M,
            const std::string& out_path) {
  LatticeBasis basis = read_basis_file(basis_path);
  BkzOptions opt;
  opt.beta = beta;
  opt.backend =
      backend == "grover-cost" ? BkzBackend::GroverCost : BkzBackend::Classical;
  opt.max_tours = term == "none" ? 1000000 : max_tours;
  if (have_delta) opt.delta = Rat(delta);
  opt.grover_marked = parse_big(M);

  BkzResult res = bkz_reduce(basis, opt);

  json rep = new_report("bkz", ca.no_timestamp);
  rep["rank"] = basis.rank();
  rep["ambient_dim"] = basis.ambient_dim();
  json oj;
  oj["beta"] = opt.beta;
  oj["backend"] = backend;
  oj["max_tours"] = opt.max_tours;
  oj["delta"] = opt.delta.get_str();
  oj["marked_assumed"] = to_decimal(opt.grover_marked);
  rep["options"] = oj;

  json rj;
  rj["tours"] = res.tours;
  rj["reached_fixpoint"] = res.reached_fixpoint;
  rj["insertions"] = res.insertions;
  rj["enum_nodes"] = res.enum_nodes;
  rj["first_row_norm_sq"] = to_decimal(dot(res.basis[0], res.basis[0]));
  rj["basis"] = basis_rows_json(res.basis);
  rep["result"] = rj;

  if (beta >= 2 && beta <= 8 && basis.rank() >= 2)
    rep["quality_bound"] = quality_bound(basis.rank(), beta);

  if (opt.backend == BkzBackend::GroverCost) {
    json lj = json::array();
    for (const BlockCost& c : res.ledger) {
      json e;
      e["tour"] = c.tour;
      e["i"] = c.i;
      e["j"] = c.j;
      e["search_space"] = to_decimal(c.search_space);
      e["iterations"] = to_decimal(c.iterations);
      e["width"] = c.width;
      e["total_cost"] = to_decimal(c.total_cost);
      e["total_depth"] = to_decimal(c.total_depth);
      e["total_t_count"] = to_decimal(c.total_t_count);
      e["total_t_depth"] = to_decimal(c.total_t_depth);
      lj.push_back(e);
    }
    rep["ledger"] = lj;
  }

  if (!out_path.empty()) {
    std::ostringstream os;
    write_basis(os, LatticeBasis(res.basis));
    write_text_file(out_path, os.str());
    rep["basis_file"] = out_path;
  }
  emit_report(rep, ca.report);
  return 0;
}

int cmd_crossover(const CommonArgs& ca, int beta_classical) {
  json rep = new_report("crossover", ca.no_timestamp);
  rep["beta_classical"] = beta_classical;
  rep["beta_quantum"] = crossover_beta(beta_classical);
  emit_report(rep, ca.report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum-search oracle synthesis and cost estimation for the "
               "shortest lattice vector problem"};
  app.set_version_flag("--version", std::string("qsvp ") + kVersion);
  app.require_subcommand(1);

  int code = 0;

  // oracle-build ------------------------------------------------------------
  OracleArgs ob_oracle;
  CommonArgs ob_common;
  std::string ob_out;
  bool ob_count = false;
  std::uint64_t ob_cap = std::uint64_t{1} << 26;
  int ob_jobs = 0;
  CLI::App* ob = app.add_subcommand(
      "oracle-build", "synthesize the marking oracle for a basis");
  add_oracle_options(ob, ob_oracle);
  add_common(ob, ob_common);
  ob->add_option("--out", ob_out, "write the circuit in text form");
  ob->add_flag("--count-marked", ob_count,
               "count the marked inputs by exact enumeration");
  ob->add_option("--cap", ob_cap, "enumeration budget for --count-marked");
  ob->add_option("--jobs", ob_jobs, "worker threads (0 = hardware)");
  ob->callback([&]() {
    code = cmd_oracle_build(ob_oracle, ob_common, ob_out, ob_count, ob_cap,
                            ob_jobs);
  });

  // oracle-verify -----------------------------------------------------------
  OracleArgs ov_oracle;
  CommonArgs ov_common;
  std::uint64_t ov_mutate = 0;
  std::uint64_t ov_cap = std::uint64_t{1} << 22;
  int ov_jobs = 0;
  CLI::App* ov = app.add_subcommand(
      "oracle-verify",
      "exhaustively check the oracle truth table, ancillas, and inputs");
  add_oracle_options(ov, ov_oracle);
  add_common(ov, ov_common);
  CLI::Option* ov_mut_opt = ov->add_option(
      "--mutate", ov_mutate, "drop this gate first (the check must then fail)");
  ov->add_option("--cap", ov_cap, "largest input space to enumerate");
  ov->add_option("--jobs", ov_jobs, "worker threads (0 = hardware)");
  ov->callback([&]() {
    code = cmd_oracle_verify(ov_oracle, ov_common, ov_mut_opt->count() > 0,
                             ov_mutate, ov_cap, ov_jobs);
  });

  // grover --------------------------------------------------------------
  OracleArgs gr_oracle;
  CommonArgs gr_common;
  std::string gr_M = "3";
  bool gr_sim = false;
  std::string gr_assemble;
  std::uint64_t gr_max_gates = std::uint64_t{1} << 26;
  CLI::App* gr = app.add_subcommand(
      "grover", "size the amplitude-amplification loop around the oracle");
  add_oracle_options(gr, gr_oracle);
  add_common(gr, gr_common);
  gr->add_option("--M", gr_M, "assumed number of marked inputs");
  gr->add_flag("--simulate", gr_sim,
               "statevector-run an ideal-oracle instance of the same search");
  gr->add_option("--assemble", gr_assemble,
                 "materialize the full loop to this circuit file");
  gr->add_option("--max-gates", gr_max_gates,
                 "assembly refuses past this many gates");
  gr->callback([&]() {
    code = cmd_grover(gr_oracle, gr_common, gr_M, gr_sim, gr_assemble,
                      gr_max_gates);
  });

  // sweep ---------------------------------------------------------------
  CommonArgs sw_common;
  std::vector<int> sw_dims;
  std::uint64_t sw_seed = 1;
  int sw_range = 10;
  double sw_scale = 1.0;
  std::string sw_M = "3";
  std::string sw_out;
  CLI::App* sw = app.add_subcommand(
      "sweep", "synthesize random instances across dimensions and tabulate "
               "oracle resources as CSV");
  add_common(sw, sw_common);
  sw->add_option("--dims", sw_dims, "dimensions to sweep (comma separated)")
      ->delimiter(',');
  sw->add_option("--seed", sw_seed, "base RNG seed");
  sw->add_option("--entry-range", sw_range, "basis entries drawn from [-r, r]");
  sw->add_option("--gh-scale", sw_scale, "threshold radius scale");
  sw->add_option("--M", sw_M, "assumed marked count for iteration sizing");
  sw->add_option("--out", sw_out, "write the CSV here instead of stdout");
  sw->callback([&]() {
    code = cmd_sweep(sw_common, sw_dims, sw_seed, sw_range, sw_scale, sw_M,
                     sw_out);
  });

  // fit -----------------------------------------------------------------
  CommonArgs ft_common;
  std::string ft_csv;
  std::string ft_metric = "all";
  std::string ft_base = "2";
  CLI::App* ft = app.add_subcommand(
      "fit", "least-squares polylog model fit over a sweep CSV");
  add_common(ft, ft_common);
  ft->add_option("csv", ft_csv, "sweep CSV file")->required();
  ft->add_option("--metric", ft_metric, "which column to fit")
      ->check(CLI::IsMember(
          {"width", "depth", "quantum_cost", "t_count", "t_depth", "all"}));
  ft->add_option("--log-base", ft_base, "logarithm base for the L terms")
      ->check(CLI::IsMember({"2", "e"}));
  ft->callback(
      [&]() { code = cmd_fit(ft_common, ft_csv, ft_metric, ft_base); });

  // extrapolate -----------------------------------------------------------
  CommonArgs ex_common;
  std::vector<int> ex_dims;
  std::string ex_M = "3";
  std::string ex_csv;
  CLI::App* ex = app.add_subcommand(
      "extrapolate",
      "evaluate the frozen long-range resource models at large dimensions");
  add_common(ex, ex_common);
  ex->add_option("--n", ex_dims, "target dimensions (comma separated)")
      ->delimiter(',')
      ->required();
  ex->add_option("--M", ex_M, "assumed marked count for iteration sizing");
  ex->add_option("--csv", ex_csv,
                 "sweep CSV to refit; fitted models are evaluated at each "
                 "target dimension next to the reference values");
  ex->callback(
      [&]() { code = cmd_extrapolate(ex_common, ex_dims, ex_M, ex_csv); });

  // bkz -------------------------------------------------------------------
  CommonArgs bk_common;
  std::string bk_basis;
  int bk_beta = 2;
  std::string bk_backend = "classical";
  int bk_max_tours = 16;
  std::string bk_term = "max-tours";
  double bk_delta = 0.99;
  std::string bk_M = "3";
  std::string bk_out;
  CLI::App* bk = app.add_subcommand(
      "bkz", "block-reduce a basis, optionally costing each block's "
             "quantum search");
  add_common(bk, bk_common);
  bk->add_option("basis", bk_basis, "basis file")->required();
  bk->add_option("--beta", bk_beta, "block size (>= 2)");
  bk->add_option("--backend", bk_backend, "enumeration cost model")
      ->check(CLI::IsMember({"classical", "grover-cost"}));
  bk->add_option("--max-tours", bk_max_tours, "tour cap for --term max-tours");
  bk->add_option("--term", bk_term,
                 "termination: none = run until a tour makes no insertion")
      ->check(CLI::IsMember({"none", "max-tours"}));
  CLI::Option* bk_delta_opt =
      bk->add_option("--delta", bk_delta, "Lovasz parameter in (0.25, 1]");
  bk->add_option("--M", bk_M, "assumed marked count for the cost model");
  bk->add_option("--out", bk_out, "write the reduced basis here");
  bk->callback([&]() {
    code = cmd_bkz(bk_common, bk_basis, bk_beta, bk_backend, bk_max_tours,
                   bk_term, bk_delta, bk_delta_opt->count() > 0, bk_M, bk_out);
  });

  // crossover ---------------------------------------------------------------
  CommonArgs cr_common;
  int cr_beta = 2;
  CLI::App* cr = app.add_subcommand(
      "crossover", "smallest quantum-costed block size matching a classical "
                   "block size's effort");
  add_common(cr, cr_common);
  cr->add_option("--beta-classical", cr_beta, "classical block size")
      ->required();
  cr->callback([&]() { code = cmd_crossover(cr_common, cr_beta); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  } catch (const VerificationError& e) {
    std::cerr << "verification error: " << e.what() << '\n';
    return 4;
  } catch (const CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << '\n';
    return 3;
  } catch (const PlanError& e) {
    std::cerr << "plan error: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return code;
}
