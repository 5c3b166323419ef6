#include <cmath>
#include <cstdlib>
#include <random>

#include "doctest.h"
#include "qsvp/bkz.hpp"
#include "qsvp/sim.hpp"

using namespace qsvp;

namespace {

Rat norm_sq_row(const IntVec& r) {
  Rat s = 0;
  for (const Int& v : r) s += Rat(v) * Rat(v);
  return s;
}

Int det_sq(const IntMat& rows) {
  return LatticeBasis{rows}.gram_det();
}

// Every row of `rows` lies in the lattice spanned by `orig` iff the
// coordinates rows * dual(orig)^T are integers.
bool same_lattice_members(const IntMat& rows, const LatticeBasis& orig) {
  RatMat dual = dual_basis(orig);
  for (const IntVec& r : rows) {
    for (const RatVec& d : dual) {
      Rat c = 0;
      for (size_t t = 0; t < r.size(); ++t) c += Rat(r[t]) * d[t];
      if (c.get_den() != 1) return false;
    }
  }
  return true;
}

bool size_reduced(const IntMat& rows) {
  LatticeBasis b{rows};
  GramSchmidtData gs = b.gram_schmidt();
  const int n = b.rank();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) {
      Rat mu = gs.mu[i][j];
      if (abs(mu.get_num()) * 2 > mu.get_den()) return false;
    }
  }
  return true;
}

IntMat random_full_rank(std::mt19937_64& rng, int n, int span) {
  for (;;) {
    IntMat rows(n, IntVec(n));
    for (auto& r : rows)
      for (auto& v : r)
        v = static_cast<long>(rng() % (2 * span + 1)) - span;
    try {
      LatticeBasis b{rows};
      (void)b;
      return rows;
    } catch (const std::invalid_argument&) {
    }
  }
}

}  // namespace

TEST_CASE("lll on a skewed plane") {
  IntMat rows{{1, 0}, {201, 1}};
  Int d0 = det_sq(rows);
  IntMat red = lll_reduce(rows);
  CHECK(norm_sq_row(red[0]) == 1);
  CHECK(det_sq(red) == d0);
  CHECK(size_reduced(red));
  CHECK(same_lattice_members(red, LatticeBasis{rows}));

  CHECK_THROWS_AS(lll_reduce(rows, Rat(1, 4)), std::invalid_argument);
  CHECK_THROWS_AS(lll_reduce(rows, Rat(5, 4)), std::invalid_argument);
  CHECK(lll_reduce(rows, Rat(1)).size() == 2);  // delta = 1 is allowed
}

TEST_CASE("exact block enumeration") {
  IntMat rows{{5, 3}, {3, 2}};
  EnumerationResult er = svp_in_block(rows, 0, 1);
  CHECK(er.found);
  CHECK(er.norm_sq == Rat(1));  // det-1 lattice: the whole plane
  CHECK(er.nodes > 0);

  // Combination check: the reported coefficients reproduce the norm.
  REQUIRE(er.coeffs.size() == 2);
  IntVec v(2, Int(0));
  for (int t = 0; t < 2; ++t)
    for (int c = 0; c < 2; ++c) v[t] += er.coeffs[c] * rows[c][t];
  CHECK(norm_sq_row(v) == er.norm_sq);

  // A basis whose first vector is already shortest: no improvement.
  IntMat id{{1, 0}, {0, 1}};
  CHECK_FALSE(svp_in_block(id, 0, 1).found);

  CHECK_THROWS_AS(svp_in_block(rows, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(svp_in_block(rows, 0, 5), std::invalid_argument);
  CHECK_THROWS_AS(svp_in_block(rows, 0, 1, /*node_cap=*/1), CapacityError);
}

TEST_CASE("full-block reduction finds the exact minimum") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 8; ++trial) {
    const int n = 2 + trial % 5;  // 2..6
    IntMat rows = random_full_rank(rng, n, 6);
    LatticeBasis b{rows};

    BkzOptions opt;
    opt.beta = n;
    opt.max_tours = 32;
    BkzResult res = bkz_reduce(b, opt);
    CHECK(res.reached_fixpoint);
    CHECK(res.ledger.empty());

    Int lam = brute_force_lambda1(LatticeBasis{lll_reduce(rows)}).norm_sq;
    CHECK(norm_sq_row(res.basis[0]) == Rat(lam));
    CHECK(det_sq(res.basis) == det_sq(rows));
    CHECK(size_reduced(res.basis));
    CHECK(same_lattice_members(res.basis, b));
  }
}

TEST_CASE("block-size quality sweep") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 4; ++trial) {
    const int n = 6 + 2 * trial;  // 6, 8, 10, 12
    IntMat rows = random_full_rank(rng, n, 5);
    LatticeBasis b{rows};
    const double vol_n =
        std::exp(std::log(std::sqrt(b.gram_det().get_d())) / n);

    for (int beta = 2; beta <= 5; ++beta) {
      BkzOptions opt;
      opt.beta = beta;
      opt.max_tours = 64;
      BkzResult res = bkz_reduce(b, opt);
      CHECK(res.reached_fixpoint);
      const double norm = std::sqrt(norm_sq_row(res.basis[0]).get_d());
      CHECK(norm <= quality_bound(n, beta) * vol_n * (1.0 + 1e-9));
    }
  }
}

TEST_CASE("hermite-factor bound anchors") {
  CHECK(quality_bound(2, 2) ==
        doctest::Approx(std::pow(4.0 / 3.0, 0.25)).epsilon(1e-12));
  CHECK(std::log(quality_bound(10, 3)) ==
        doctest::Approx(0.53142).epsilon(1e-4));
  CHECK(std::log(quality_bound(10, 4)) ==
        doctest::Approx(0.55452).epsilon(1e-4));
  CHECK(quality_bound(10, 4) > quality_bound(10, 3));
  CHECK(quality_bound(10, 8) > quality_bound(10, 7));
  CHECK_THROWS_AS(quality_bound(1, 2), std::invalid_argument);
  CHECK_THROWS_AS(quality_bound(10, 1), std::invalid_argument);
  CHECK_THROWS_AS(quality_bound(10, 9), std::invalid_argument);
}

TEST_CASE("quantum-assisted crossover block size") {
  CHECK(crossover_beta(2) == 3);
  CHECK(crossover_beta(20) == 34);
  CHECK(crossover_beta(40) == 70);
  CHECK_THROWS_AS(crossover_beta(1), std::invalid_argument);
}

TEST_CASE("search-cost ledger under the priced backend") {
  std::mt19937_64 rng(3);
  IntMat rows = random_full_rank(rng, 4, 5);
  LatticeBasis b{rows};

  BkzOptions opt;
  opt.beta = 3;
  opt.max_tours = 16;
  opt.backend = BkzBackend::GroverCost;
  BkzResult res = bkz_reduce(b, opt);
  CHECK(res.reached_fixpoint);
  REQUIRE(!res.ledger.empty());
  for (const BlockCost& bc : res.ledger) {
    CHECK(bc.tour >= 1);
    CHECK(bc.i >= 1);
    CHECK(bc.j >= bc.i);
    CHECK(bc.search_space > 1);
    CHECK(bc.iterations >= 1);
    CHECK(bc.width > 0);
    CHECK(bc.total_cost > 0);
    CHECK(bc.total_t_count > 0);
  }

  // Priced and classical backends agree on the reduction itself.
  BkzOptions copt = opt;
  copt.backend = BkzBackend::Classical;
  BkzResult cres = bkz_reduce(b, copt);
  CHECK(cres.basis == res.basis);

  BkzOptions bad;
  bad.beta = 1;
  CHECK_THROWS_AS(bkz_reduce(b, bad), std::invalid_argument);
  BkzOptions bad2;
  bad2.max_tours = 0;
  CHECK_THROWS_AS(bkz_reduce(b, bad2), std::invalid_argument);
  BkzOptions bad3;
  bad3.delta = Rat(1, 10);
  CHECK_THROWS_AS(bkz_reduce(b, bad3), std::invalid_argument);
  BkzOptions bad4;
  bad4.delta = Rat(5, 4);
  CHECK_THROWS_AS(bkz_reduce(b, bad4), std::invalid_argument);
}
