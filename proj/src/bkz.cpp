#include "qsvp/bkz.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qsvp/errors.hpp"
#include "qsvp/oracle.hpp"

namespace qsvp {

namespace {

RatMat to_rat_rows(const IntMat& rows, std::size_t limit) {
  RatMat out(limit);
  for (std::size_t i = 0; i < limit; ++i) {
    out[i].reserve(rows[i].size());
    for (const Int& v : rows[i]) out[i].emplace_back(v);
  }
  return out;
}

// Exact size reduction of row k against rows j < k, with matching mu update.
void size_reduce_row(IntMat& rows, RatMat& mu, int k) {
  const int m = static_cast<int>(rows[0].size());
  for (int j = k - 1; j >= 0; --j) {
    const Int q = round_rat(mu[k][j]);
    if (q == 0) continue;
    for (int t = 0; t < m; ++t) rows[k][t] -= q * rows[j][t];
    for (int t = 0; t <= j; ++t) mu[k][t] -= Rat(q) * mu[j][t];
  }
}

void lll_inplace(IntMat& rows, const Rat& delta, std::size_t limit) {
  if (limit > rows.size()) limit = rows.size();
  if (limit <= 1) return;
  GramSchmidtData gs = gram_schmidt_rows(to_rat_rows(rows, limit));
  int k = 1;
  while (k < static_cast<int>(limit)) {
    size_reduce_row(rows, gs.mu, k);
    if (gs.norms_sq[k] == 0 || gs.norms_sq[k - 1] == 0) {
      throw std::logic_error("lll: dependent rows");
    }
    const Rat lovasz =
        (delta - gs.mu[k][k - 1] * gs.mu[k][k - 1]) * gs.norms_sq[k - 1];
    if (gs.norms_sq[k] >= lovasz) {
      ++k;
    } else {
      std::swap(rows[k], rows[k - 1]);
      gs = gram_schmidt_rows(to_rat_rows(rows, limit));
      k = std::max(k - 1, 1);
    }
  }
}

// Exact depth-first search for the shortest nonzero combination of the
// block's projected rows inside the open ball of squared radius `radius`.
struct BlockEnum {
  int L = 0;
  std::vector<Rat> B;      // projected squared norms, block-local
  RatMat mu;               // mu[t][s] for s < t, block-local
  Rat R;                   // current (shrinking) exclusive radius
  std::uint64_t node_cap = 0;
  std::uint64_t nodes = 0;
  bool found = false;
  IntVec best;
  IntVec x;

  void dfs(int t, const Rat& rho_next) {
    Rat c = 0;
    for (int s = t + 1; s < L; ++s) c -= mu[s][t] * Rat(x[s]);
    const Int x0 = round_rat(c);
    Int xr = x0;
    Int xl = x0 - 1;
    bool rok = true, lok = true;
    while (rok || lok) {
      bool right;
      if (rok && lok) {
        const Rat dr = Rat(xr) - c;
        const Rat dl = c - Rat(xl);
        right = dr * dr <= dl * dl;
      } else {
        right = rok;
      }
      const Int& xv = right ? xr : xl;
      if (++nodes > node_cap) {
        throw CapacityError("svp_in_block: enumeration node cap exceeded");
      }
      const Rat diff = Rat(xv) - c;
      const Rat rho = rho_next + diff * diff * B[t];
      if (rho >= R) {
        (right ? rok : lok) = false;
      } else {
        x[t] = xv;
        if (t == 0) {
          if (rho > 0) {
            found = true;
            best = x;
            R = rho;
          }
        } else {
          dfs(t - 1, rho);
        }
        if (right) ++xr;
        else --xl;
      }
    }
  }

  void run(const Rat& radius) {
    R = radius;
    found = false;
    x.assign(L, Int(0));
    dfs(L - 1, Rat(0));
  }
};

}  // namespace

IntMat lll_reduce(IntMat rows, const Rat& delta) {
  if (rows.empty()) throw std::invalid_argument("lll_reduce: empty basis");
  if (!(delta > Rat(1, 4) && delta <= 1)) {
    throw std::invalid_argument("lll_reduce: delta must be in (1/4, 1]");
  }
  lll_inplace(rows, delta, rows.size());
  return rows;
}

EnumerationResult svp_in_block(const IntMat& rows, int i, int j,
                               std::uint64_t node_cap) {
  const int n = static_cast<int>(rows.size());
  if (i < 0 || j < i || j >= n) {
    throw std::invalid_argument("svp_in_block: bad window");
  }
  const int L = j - i + 1;
  GramSchmidtData gs = gram_schmidt_rows(to_rat_rows(rows, rows.size()));

  BlockEnum en;
  en.L = L;
  en.node_cap = node_cap;
  en.B.resize(L);
  en.mu.assign(L, RatVec(L, Rat(0)));
  Rat det = 1;
  for (int t = 0; t < L; ++t) {
    en.B[t] = gs.norms_sq[i + t];
    if (en.B[t] == 0) throw std::invalid_argument("svp_in_block: rank defect");
    det *= en.B[t];
    for (int s = 0; s < t; ++s) en.mu[t][s] = gs.mu[i + t][i + s];
  }

  // Pass-1 ball: min(|b*_i|^2, an outward-rounded (1.05 gh_block)^2).
  const double ghsq =
      root_hp(det, static_cast<unsigned>(L)) *
      (static_cast<double>(L) / (2.0 * M_PI * std::exp(1.0)));
  const Rat gh_ball = Rat(1.1025 * ghsq * (1.0 + 1e-9));
  const Rat& bq0 = en.B[0];
  const Rat r1 = std::min(gh_ball, bq0);

  EnumerationResult res;
  en.run(r1);
  if (!en.found && r1 < bq0) {
    en.run(bq0);  // fallback: the gh ball undershot lambda_1 of the block
  }
  res.nodes = en.nodes;
  if (en.found) {
    res.found = true;
    res.coeffs = en.best;
    res.norm_sq = en.R;  // shrunk to the exact minimum
  }
  return res;
}

namespace {

// L x L unimodular matrix whose first row is the primitive vector c.
IntMat complete_unimodular(const IntVec& c) {
  const int L = static_cast<int>(c.size());
  if (L == 1) {
    if (abs(c[0]) != 1) throw std::logic_error("completion: not primitive");
    return {{c[0]}};
  }
  Int h = 0;
  for (int t = 0; t + 1 < L; ++t) mpz_gcd(h.get_mpz_t(), h.get_mpz_t(), c[t].get_mpz_t());
  IntMat U(L, IntVec(L, Int(0)));
  if (h == 0) {
    if (abs(c[L - 1]) != 1) throw std::logic_error("completion: not primitive");
    U[0][L - 1] = c[L - 1];
    for (int t = 1; t < L; ++t) U[t][t - 1] = 1;
    return U;
  }
  IntVec cp(L - 1);
  for (int t = 0; t + 1 < L; ++t) cp[t] = c[t] / h;
  const IntMat Up = complete_unimodular(cp);
  Int g, alpha, beta;
  mpz_gcdext(g.get_mpz_t(), alpha.get_mpz_t(), beta.get_mpz_t(), h.get_mpz_t(),
             c[L - 1].get_mpz_t());
  if (g != 1) throw std::logic_error("completion: gcd != 1");
  for (int t = 0; t < L; ++t) U[0][t] = c[t];
  for (int r = 1; r + 1 < L; ++r) {
    for (int t = 0; t + 1 < L; ++t) U[r][t] = Up[r][t];
  }
  for (int t = 0; t + 1 < L; ++t) U[L - 1][t] = -beta * cp[t];
  U[L - 1][L - 1] = alpha;
  return U;
}

void apply_block_transform(IntMat& rows, int i0, const IntMat& U) {
  const int L = static_cast<int>(U.size());
  const int m = static_cast<int>(rows[0].size());
  IntMat nb(L, IntVec(m, Int(0)));
  for (int r = 0; r < L; ++r) {
    for (int s = 0; s < L; ++s) {
      if (U[r][s] == 0) continue;
      for (int t = 0; t < m; ++t) nb[r][t] += U[r][s] * rows[i0 + s][t];
    }
  }
  for (int r = 0; r < L; ++r) rows[i0 + r] = std::move(nb[r]);
}

void record_block_cost(std::vector<BlockCost>& ledger, const IntMat& rows,
                       int i0, int jj, int tour, const BkzOptions& opt) {
  LatticeBasis basis(rows);
  GramSchmidtData gs = basis.gram_schmidt();
  const RatMat pi = project(basis, gs, i0 + 1, jj + 2);
  // Clear denominators: D * pi is an integer basis of the scaled block.
  Int den = 1;
  for (const RatVec& row : pi) {
    for (const Rat& v : row) {
      mpz_lcm(den.get_mpz_t(), den.get_mpz_t(),
              v.get_den().get_mpz_t());
    }
  }
  const int L = jj - i0 + 1;
  IntMat scaled(L, IntVec(pi[0].size()));
  for (int r = 0; r < L; ++r) {
    for (std::size_t t = 0; t < pi[r].size(); ++t) {
      Rat v = pi[r][t] * Rat(den);
      scaled[r][t] = v.get_num();  // exact: den cleared every denominator
    }
  }
  LatticeBasis block(scaled);

  // Same pass-1 ball the enumeration uses, scaled by D^2.
  Rat det = 1;
  for (int t = 0; t < L; ++t) det *= gs.norms_sq[i0 + t];
  const double ghsq =
      root_hp(det, static_cast<unsigned>(L)) *
      (static_cast<double>(L) / (2.0 * M_PI * std::exp(1.0)));
  const Rat gh_ball = Rat(1.1025 * ghsq * (1.0 + 1e-9));
  const Rat r1 = std::min(gh_ball, gs.norms_sq[i0]);
  const Rat scaled_r1 = r1 * Rat(den) * Rat(den);

  const CoefficientEncoding enc =
      derive_bounds(block, BoundMode::Dual, nullptr, &scaled_r1);
  const Threshold thr = choose_threshold_explicit(scaled_r1);
  const OracleCircuit oc = synthesize_oracle(block, enc, thr);
  const GroverPlan gp = plan_grover(oc, opt.grover_marked);

  BlockCost bc;
  bc.tour = tour;
  bc.i = i0 + 1;
  bc.j = jj + 1;
  bc.search_space = gp.search_space;
  bc.iterations = gp.iterations;
  bc.width = gp.width;
  bc.total_cost = gp.total_cost;
  bc.total_depth = gp.total_depth;
  bc.total_t_count = gp.total_t_count;
  bc.total_t_depth = gp.total_t_depth;
  ledger.push_back(std::move(bc));
}

}  // namespace

BkzResult bkz_reduce(const LatticeBasis& basis, const BkzOptions& opt) {
  if (opt.beta < 2) throw std::invalid_argument("bkz_reduce: beta >= 2");
  if (opt.max_tours < 1) throw std::invalid_argument("bkz_reduce: tours >= 1");
  if (!(opt.delta > Rat(1, 4) && opt.delta <= 1)) {
    throw std::invalid_argument("bkz_reduce: delta must be in (1/4, 1]");
  }
  IntMat rows = basis.rows();
  const int n = static_cast<int>(rows.size());
  lll_inplace(rows, opt.delta, rows.size());

  BkzResult res;
  if (n == 1) {
    res.basis = std::move(rows);
    res.reached_fixpoint = true;
    return res;
  }
  for (int tour = 1; tour <= opt.max_tours; ++tour) {
    bool changed = false;
    for (int i0 = 0; i0 + 1 < n; ++i0) {
      const int jj = std::min(i0 + opt.beta - 1, n - 1);
      if (opt.backend == BkzBackend::GroverCost) {
        record_block_cost(res.ledger, rows, i0, jj, tour, opt);
      }
      EnumerationResult er = svp_in_block(rows, i0, jj);
      res.enum_nodes += er.nodes;
      if (!er.found) continue;
      Int g = 0;
      for (const Int& v : er.coeffs) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
      }
      if (g != 1) throw std::logic_error("bkz_reduce: minimizer not primitive");
      apply_block_transform(rows, i0, complete_unimodular(er.coeffs));
      lll_inplace(rows, opt.delta, static_cast<std::size_t>(jj) + 1);
      changed = true;
      ++res.insertions;
    }
    res.tours = tour;
    if (!changed) {
      res.reached_fixpoint = true;
      break;
    }
  }
  res.basis = std::move(rows);
  return res;
}

double quality_bound(int n, int beta) {
  if (n < 2 || beta < 2 || beta > 8) {
    throw std::invalid_argument(
        "quality_bound: needs n >= 2 and 2 <= beta <= 8");
  }
  static const double kGammaPow[] = {4.0 / 3.0, 2.0,  4.0, 8.0,
                                     64.0 / 3.0, 64.0, 256.0};  // beta = 2..8
  const double ln_gamma = std::log(kGammaPow[beta - 2]) / beta;
  const double expo = (n - 1.0) / (2.0 * (beta - 1.0)) + (beta - 2.0) / (2.0 * n);
  return std::exp(expo * ln_gamma);
}

int crossover_beta(int beta_classical) {
  if (beta_classical < 2) {
    throw std::invalid_argument("crossover_beta: classical beta >= 2");
  }
  const double target =
      2.0 * beta_classical * std::log2(static_cast<double>(beta_classical));
  int b = beta_classical;
  while (b * std::log2(static_cast<double>(b)) < target) ++b;
  return b;
}

}  // namespace qsvp
