#include <cmath>
#include <random>

#include "doctest.h"
#include "qsvp/bkz.hpp"
#include "qsvp/sim.hpp"

using namespace qsvp;

TEST_CASE("bitstring accessors") {
  BitString s(130);
  CHECK(s.width == 130);
  s.set(0, true);
  s.set(64, true);
  s.set(129, true);
  CHECK(s.get(0));
  CHECK(s.get(64));
  CHECK(s.get(129));
  CHECK_FALSE(s.get(1));
  s.flip(0);
  CHECK_FALSE(s.get(0));
}

TEST_CASE("bitwise execution") {
  Circuit c(4);
  c.x(0);
  c.cx(0, 1);
  c.ccx(0, 1, 2);
  c.mcx({0, 1, 2}, 3);
  BitString out = run_bitwise(c, BitString(4));
  CHECK(out.get(0));
  CHECK(out.get(1));
  CHECK(out.get(2));
  CHECK(out.get(3));

  // CCX leaves the target alone unless both controls are set.
  Circuit d(3);
  d.ccx(0, 1, 2);
  for (std::uint64_t pat = 0; pat < 8; ++pat) {
    BitString in(3);
    for (int b = 0; b < 3; ++b) in.set(b, (pat >> b) & 1);
    BitString o = run_bitwise(d, in);
    const bool flip = (pat & 3) == 3;
    CHECK(o.get(2) == (((pat >> 2) & 1) ^ flip));
  }

  Circuit h(1);
  h.h(0);
  CHECK_THROWS_AS(run_bitwise(h, BitString(1)), std::invalid_argument);

  Circuit ok(2);
  ok.cx(0, 1);
  CHECK_THROWS_AS(run_bitwise(ok, BitString(1)), std::invalid_argument);
}

TEST_CASE("bitsliced matches bitwise on random circuits") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const int W = 3 + static_cast<int>(rng() % 6);
    Circuit c(static_cast<std::uint32_t>(W));
    const int G = 10 + static_cast<int>(rng() % 40);
    for (int g = 0; g < G; ++g) {
      std::uint32_t a = static_cast<std::uint32_t>(rng() % W);
      std::uint32_t b = static_cast<std::uint32_t>(rng() % W);
      std::uint32_t t = static_cast<std::uint32_t>(rng() % W);
      switch (rng() % 3) {
        case 0: c.x(t); break;
        case 1:
          if (a != t) c.cx(a, t);
          break;
        default:
          if (a != b && a != t && b != t) c.ccx(a, b, t);
          break;
      }
    }
    // 64 random patterns in one bitsliced pass.
    std::vector<std::uint64_t> lanes(W);
    std::vector<BitString> singles(64, BitString(W));
    for (int p = 0; p < 64; ++p) {
      for (int q = 0; q < W; ++q) {
        const bool bit = rng() & 1;
        singles[p].set(q, bit);
        if (bit) lanes[q] |= std::uint64_t{1} << p;
      }
    }
    run_bitsliced(c, lanes);
    for (int p = 0; p < 64; ++p) {
      BitString want = run_bitwise(c, singles[p]);
      for (int q = 0; q < W; ++q)
        CHECK(((lanes[q] >> p) & 1) == (want.get(q) ? 1u : 0u));
    }
  }
}

TEST_CASE("statevector basics") {
  auto s = basis_state(3, 5);
  CHECK(s.size() == 8);
  CHECK(std::abs(s[5]) == doctest::Approx(1.0));

  // H twice is the identity.
  Circuit hh(1);
  hh.h(0);
  hh.h(0);
  auto r = run_statevector(hh, basis_state(1, 1));
  CHECK(std::abs(r[1]) == doctest::Approx(1.0).epsilon(1e-12));

  // H gives the uniform pair.
  Circuit h(1);
  h.h(0);
  auto u = run_statevector(h, basis_state(1, 0));
  CHECK(u[0].real() == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
  CHECK(u[1].real() == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));

  // Phase algebra: S = T^2 on |1>, Z = S^2 on |1>.
  Circuit tt(1);
  tt.t(0);
  tt.t(0);
  tt.sdg(0);
  auto p1 = run_statevector(tt, basis_state(1, 1));
  CHECK(p1[1].real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p1[1].imag() == doctest::Approx(0.0).epsilon(1e-12));

  Circuit ss(1);
  ss.s(0);
  ss.s(0);
  ss.z(0);
  auto p2 = run_statevector(ss, basis_state(1, 1));
  CHECK(p2[1].real() == doctest::Approx(1.0).epsilon(1e-12));

  // Z only phases |1>.
  Circuit z(1);
  z.z(0);
  auto z0 = run_statevector(z, basis_state(1, 0));
  CHECK(z0[0].real() == doctest::Approx(1.0).epsilon(1e-12));
  auto z1 = run_statevector(z, basis_state(1, 1));
  CHECK(z1[1].real() == doctest::Approx(-1.0).epsilon(1e-12));

  // CZ phases |11> only.
  Circuit cz(2);
  cz.cz(0, 1);
  for (std::uint64_t pat = 0; pat < 4; ++pat) {
    auto v = run_statevector(cz, basis_state(2, pat));
    CHECK(v[pat].real() ==
          doctest::Approx(pat == 3 ? -1.0 : 1.0).epsilon(1e-12));
  }

  // Classical gates act classically on basis states.
  Circuit c(3);
  c.x(0);
  c.cx(0, 1);
  c.ccx(0, 1, 2);
  auto cv = run_statevector(c, basis_state(3, 0));
  CHECK(std::abs(cv[7]) == doctest::Approx(1.0).epsilon(1e-12));

  // Capacity and shape checks.
  Circuit wide(30);
  wide.x(0);
  CHECK_THROWS_AS(run_statevector(wide, std::vector<Amp>(8)), CapacityError);
  Circuit tiny(2);
  tiny.x(0);
  CHECK_THROWS_AS(run_statevector(tiny, basis_state(3, 0)),
                  std::invalid_argument);
}

TEST_CASE("short-vector counting") {
  IntMat rows{{2, 1}, {1, 3}};
  IntVec lo{-1, -1}, hi{2, 2};
  SvpCount sc = count_short_vectors(rows, lo, hi, Int(5));
  CHECK(sc.patterns == 16);
  CHECK(sc.satisfying == 5);
  CHECK(sc.found_nonzero);
  CHECK(sc.min_nonzero_norm_sq == 5);
  // The witness is a nonzero vector of squared length 5.
  Int n2 = 0;
  {
    IntVec v(2, Int(0));
    for (int j = 0; j < 2; ++j)
      for (int i = 0; i < 2; ++i) v[j] += sc.argmin[i] * rows[i][j];
    n2 = v[0] * v[0] + v[1] * v[1];
  }
  CHECK(n2 == 5);

  // tau < 0 counts nothing but still tracks the minimum.
  SvpCount none = count_short_vectors(rows, lo, hi, Int(-1));
  CHECK(none.satisfying == 0);
  CHECK(none.min_nonzero_norm_sq == 5);

  // The zero vector is always counted for tau >= 0.
  SvpCount zero_only = count_short_vectors(rows, lo, hi, Int(0));
  CHECK(zero_only.satisfying == 1);

  // Box capacity.
  CHECK_THROWS_AS(
      count_short_vectors(rows, lo, hi, Int(5), /*cap=*/8),
      CapacityError);

  // Threaded scan agrees with the single-threaded one.
  SvpCount mt = count_short_vectors(rows, lo, hi, Int(5), 1 << 26, 4);
  CHECK(mt.satisfying == sc.satisfying);
  CHECK(mt.min_nonzero_norm_sq == sc.min_nonzero_norm_sq);
}

TEST_CASE("exact shortest vector on reduced bases") {
  {
    LatticeBasis b{IntMat{{2, 1}, {1, 3}}};
    ShortestResult r = brute_force_lambda1(b);
    CHECK(r.norm_sq == 5);
    CHECK(b.vector_length_sq(r.coeffs) == 5);
  }
  {
    LatticeBasis id{IntMat{{1, 0}, {0, 1}}};
    CHECK(brute_force_lambda1(id).norm_sq == 1);
  }
  {
    // Cross-check against plain box counting on small random lattices.
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 8; ++trial) {
      const int n = 2 + static_cast<int>(rng() % 3);
      IntMat rows(n, IntVec(n));
      while (true) {
        for (auto& r : rows)
          for (auto& v : r)
            v = static_cast<long>(rng() % 7) - 3;
        try {
          LatticeBasis probe{rows};
          break;
        } catch (const std::invalid_argument&) {
        }
      }
      // Reduce first so the enumeration box stays small.
      LatticeBasis red{lll_reduce(rows)};
      ShortestResult r = brute_force_lambda1(red);
      // The result must be achieved by a lattice vector and no shorter one
      // may exist in a generous box around the reduced basis.
      CHECK(red.vector_length_sq(r.coeffs) == r.norm_sq);
      IntVec lo(n, Int(-4)), hi(n, Int(4));
      SvpCount sc = count_short_vectors(red.rows(), lo, hi, Int(-1));
      CHECK(sc.min_nonzero_norm_sq == r.norm_sq);
    }
  }
}
