#include <numeric>

#include "doctest.h"
#include "qsvp/arith.hpp"
#include "qsvp/circuit.hpp"
#include "qsvp/sim.hpp"

using namespace qsvp;

namespace {

std::uint64_t get_field(const BitString& s, int off, int w) {
  std::uint64_t v = 0;
  for (int i = 0; i < w; ++i)
    if (s.get(off + i)) v |= std::uint64_t{1} << i;
  return v;
}

void set_field(BitString& s, int off, int w, std::uint64_t v) {
  for (int i = 0; i < w; ++i) s.set(off + i, (v >> i) & 1);
}

std::int64_t as_signed(std::uint64_t raw, int w) {
  if (w < 64 && (raw >> (w - 1)) & 1)
    return static_cast<std::int64_t>(raw) - (std::int64_t{1} << w);
  return static_cast<std::int64_t>(raw);
}

std::uint64_t mask(int w) {
  return w >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << w) - 1;
}

// All wires in [from, to) must be zero (restored scratch).
void check_clean(const BitString& s, int from, int to) {
  for (int q = from; q < to; ++q) CHECK_FALSE(s.get(q));
}

}  // namespace

TEST_CASE("scratch pool semantics") {
  Circuit c;
  ScratchPool pool(c);

  WireVec w1 = pool.acquire(3, "s", RegKind::Ancilla);
  CHECK(w1.size() == 3);
  CHECK(c.width() == 3);
  CHECK(c.find_register("s") != nullptr);
  CHECK(pool.available() == 0);

  pool.release(w1);
  CHECK(pool.available() == 3);

  // Reuse before growth.
  WireVec w2 = pool.acquire(2, "t", RegKind::Ancilla);
  CHECK(c.width() == 3);
  CHECK(pool.available() == 1);

  // Partial reuse plus one fresh wire.
  WireVec w3 = pool.acquire(2, "u", RegKind::Ancilla);
  CHECK(c.width() == 4);

  pool.release(w2);
  CHECK_THROWS_AS(pool.release(w2), std::logic_error);

  // Drain the free list, then force a fresh register whose tag collides
  // with an existing one: it gets a unique suffixed name.
  WireVec w4 = pool.acquire(2, "drain", RegKind::Ancilla);
  (void)w4;
  CHECK(pool.available() == 0);
  CHECK(c.width() == 4);
  WireVec w5 = pool.acquire(1, "s", RegKind::Ancilla);
  (void)w5;
  CHECK(c.width() == 5);
  CHECK(c.find_register("s_0") != nullptr);

  CHECK(pool.acquire(0, "n", RegKind::Ancilla).empty());
  (void)w3;
}

TEST_CASE("adder closed forms") {
  for (int N : {3, 4, 8, 16}) {
    ResourceMetrics m = metrics(build_adder(N));
    CHECK(m.quantum_cost == static_cast<std::uint64_t>(13 * N - 10));
    CHECK(m.depth == static_cast<std::uint64_t>(10 * N - 4));
    CHECK(m.width == static_cast<std::uint64_t>(3 * N));  // a, b, carry, w
  }
}

TEST_CASE("adder truth table") {
  for (int N = 1; N <= 4; ++N) {
    Circuit c = build_adder(N);
    const int W = static_cast<int>(c.width());
    for (std::uint64_t a = 0; a < (std::uint64_t{1} << N); ++a) {
      for (std::uint64_t b = 0; b < (std::uint64_t{1} << N); ++b) {
        BitString in(W);
        set_field(in, 0, N, a);
        set_field(in, N, N, b);
        BitString out = run_bitwise(c, in);
        CHECK(get_field(out, 0, N) == a);                       // a preserved
        CHECK(get_field(out, N, N) == ((a + b) & mask(N)));     // sum
        CHECK(get_field(out, 2 * N, 1) == ((a + b) >> N));      // carry
      }
    }
  }
}

TEST_CASE("subtractor truth table") {
  for (int N = 1; N <= 4; ++N) {
    Circuit c = build_subtractor(N);
    const int W = static_cast<int>(c.width());
    for (std::uint64_t a = 0; a < (std::uint64_t{1} << N); ++a) {
      for (std::uint64_t b = 0; b < (std::uint64_t{1} << N); ++b) {
        BitString in(W);
        set_field(in, 0, N, a);
        set_field(in, N, N, b);
        BitString out = run_bitwise(c, in);
        CHECK(get_field(out, 0, N) == a);
        // (sign, b) is the (N+1)-bit two's-complement difference.
        const std::uint64_t diff =
            (b - a) & mask(N + 1);
        CHECK(get_field(out, N, N) == (diff & mask(N)));
        CHECK(get_field(out, 2 * N, 1) == (diff >> N));
        CHECK(get_field(out, 2 * N, 1) == (b < a ? 1u : 0u));
      }
    }
  }
}

TEST_CASE("controlled add/subtract truth table") {
  for (int N = 1; N <= 3; ++N) {
    Circuit c = build_ctrl_addsub(N);
    const int W = static_cast<int>(c.width());
    for (std::uint64_t ctrl = 0; ctrl < 2; ++ctrl) {
      for (std::uint64_t a = 0; a < (std::uint64_t{1} << N); ++a) {
        for (std::uint64_t b = 0; b < (std::uint64_t{1} << N); ++b) {
          BitString in(W);
          in.set(0, ctrl);
          set_field(in, 1, N, a);
          set_field(in, 1 + N, N, b);
          BitString out = run_bitwise(c, in);
          CHECK(out.get(0) == (ctrl == 1));
          CHECK(get_field(out, 1, N) == a);
          if (ctrl == 0) {
            CHECK(get_field(out, 1 + N, N) == ((a + b) & mask(N)));
            CHECK(get_field(out, 1 + 2 * N, 1) == ((a + b) >> N));
          } else {
            CHECK(get_field(out, 1 + N, N) == ((b - a) & mask(N)));
            CHECK(get_field(out, 1 + 2 * N, 1) == (b < a ? 1u : 0u));
          }
        }
      }
    }
  }
}

TEST_CASE("in-place addition block") {
  // Equal widths, shorter zero-extended addend, shorter sign-extended addend.
  for (int wa = 1; wa <= 4; ++wa) {
    for (int wb = wa; wb <= 4; ++wb) {
      for (bool sext : {false, true}) {
        Circuit c;
        c.add_register("a", wa, RegKind::Input);
        c.add_register("b", wb, RegKind::Input);
        ScratchPool pool(c);
        WireVec av(wa), bv(wb);
        std::iota(av.begin(), av.end(), 0u);
        std::iota(bv.begin(), bv.end(), static_cast<std::uint32_t>(wa));
        emit_add(c, av, bv, sext, pool);
        const int W = static_cast<int>(c.width());
        for (std::uint64_t a = 0; a < (std::uint64_t{1} << wa); ++a) {
          for (std::uint64_t b = 0; b < (std::uint64_t{1} << wb); ++b) {
            BitString in(W);
            set_field(in, 0, wa, a);
            set_field(in, wa, wb, b);
            BitString out = run_bitwise(c, in);
            const std::int64_t addend =
                sext ? as_signed(a, wa) : static_cast<std::int64_t>(a);
            const std::uint64_t want =
                (b + static_cast<std::uint64_t>(addend)) & mask(wb);
            CHECK(get_field(out, 0, wa) == a);
            CHECK(get_field(out, wa, wb) == want);
            check_clean(out, wa + wb, W);
          }
        }
      }
    }
  }
  // Operand validation.
  Circuit c;
  c.add_register("r", 4, RegKind::Input);
  ScratchPool pool(c);
  CHECK_THROWS_AS(emit_add(c, {0, 1, 2}, {3}, false, pool),
                  std::invalid_argument);
  CHECK_THROWS_AS(emit_add(c, {}, {0}, false, pool), std::invalid_argument);
}

TEST_CASE("in-place subtraction block") {
  for (int wa = 1; wa <= 3; ++wa) {
    for (int wb = wa; wb <= 4; ++wb) {
      for (bool sext : {false, true}) {
        Circuit c;
        c.add_register("a", wa, RegKind::Input);
        c.add_register("b", wb, RegKind::Input);
        ScratchPool pool(c);
        WireVec av(wa), bv(wb);
        std::iota(av.begin(), av.end(), 0u);
        std::iota(bv.begin(), bv.end(), static_cast<std::uint32_t>(wa));
        emit_sub(c, av, bv, sext, pool);
        const int W = static_cast<int>(c.width());
        for (std::uint64_t a = 0; a < (std::uint64_t{1} << wa); ++a) {
          for (std::uint64_t b = 0; b < (std::uint64_t{1} << wb); ++b) {
            BitString in(W);
            set_field(in, 0, wa, a);
            set_field(in, wa, wb, b);
            BitString out = run_bitwise(c, in);
            const std::int64_t sub =
                sext ? as_signed(a, wa) : static_cast<std::int64_t>(a);
            const std::uint64_t want =
                (b - static_cast<std::uint64_t>(sub)) & mask(wb);
            CHECK(get_field(out, 0, wa) == a);
            CHECK(get_field(out, wa, wb) == want);
            check_clean(out, wa + wb, W);
          }
        }
      }
    }
  }
}

TEST_CASE("constant addition block") {
  for (int W = 1; W <= 4; ++W) {
    for (long k = -9; k <= 2L << W; ++k) {
      Circuit c;
      c.add_register("b", W, RegKind::Input);
      ScratchPool pool(c);
      WireVec bv(W);
      std::iota(bv.begin(), bv.end(), 0u);
      emit_const_add(c, Int(k), bv, pool);
      const int cw = static_cast<int>(c.width());
      for (std::uint64_t b = 0; b < (std::uint64_t{1} << W); ++b) {
        BitString in(cw);
        set_field(in, 0, W, b);
        BitString out = run_bitwise(c, in);
        const std::uint64_t want =
            (b + static_cast<std::uint64_t>(k)) & mask(W);
        CHECK(get_field(out, 0, W) == want);
        check_clean(out, W, cw);
      }
    }
  }
  Circuit c;
  ScratchPool pool(c);
  CHECK_THROWS_AS(emit_const_add(c, Int(1), {}, pool), std::invalid_argument);
}

TEST_CASE("constant multiplier") {
  for (int w = 1; w <= 3; ++w) {
    for (long k = -6; k <= 6; ++k) {
      Circuit c = build_const_multiplier(Int(k), w);
      const int outw = k == 0 ? 1 : w + bitlen(Int(k));
      const int W = static_cast<int>(c.width());
      REQUIRE(c.find_register("out")->width ==
              static_cast<std::uint32_t>(outw));
      for (std::uint64_t x = 0; x < (std::uint64_t{1} << w); ++x) {
        BitString in(W);
        set_field(in, 0, w, x);
        BitString out = run_bitwise(c, in);
        const std::int64_t xs = as_signed(x, w);
        const std::uint64_t want =
            static_cast<std::uint64_t>(xs * k) & mask(outw);
        CHECK(get_field(out, 0, w) == x);
        CHECK(get_field(out, w, outw) == want);
        check_clean(out, w + outw, W);
      }
    }
  }
  CHECK_THROWS_AS(build_const_multiplier(Int(3), 0), std::invalid_argument);
}

TEST_CASE("squarer") {
  for (int w = 1; w <= 4; ++w) {
    Circuit c = build_squarer(w);
    const int W = static_cast<int>(c.width());
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << w); ++s) {
      BitString in(W);
      set_field(in, 0, w, s);
      BitString out = run_bitwise(c, in);
      const std::int64_t sv = as_signed(s, w);
      CHECK(get_field(out, 0, w) == s);
      CHECK(get_field(out, w, 2 * w) ==
            static_cast<std::uint64_t>(sv * sv));
      check_clean(out, 3 * w, W);
    }
  }
  CHECK_THROWS_AS(build_squarer(0), std::invalid_argument);
}

TEST_CASE("tree sum") {
  CHECK(tree_sum_layers(1) == 0);
  CHECK(tree_sum_layers(2) == 1);
  CHECK(tree_sum_layers(3) == 2);
  CHECK(tree_sum_layers(4) == 2);
  CHECK(tree_sum_layers(5) == 3);
  CHECK_THROWS_AS(tree_sum_layers(0), std::invalid_argument);

  const std::vector<std::vector<int>> cases = {
      {1, 1}, {2, 3}, {2, 2, 2}, {3, 1, 2, 2}, {1, 2, 1, 2, 1}};
  for (const std::vector<int>& widths : cases) {
    const int k = static_cast<int>(widths.size());
    int maxw = 0;
    for (int w : widths) maxw = std::max(maxw, w);
    const int W = maxw + tree_sum_layers(k);
    Circuit c = build_tree_sum(widths);
    REQUIRE(c.find_register("op0")->width == static_cast<std::uint32_t>(W));

    // Exhaustive over the declared operand widths.
    int total_bits = 0;
    for (int w : widths) total_bits += w;
    for (std::uint64_t pat = 0; pat < (std::uint64_t{1} << total_bits);
         ++pat) {
      BitString in(static_cast<int>(c.width()));
      std::uint64_t rest = pat;
      std::uint64_t sum = 0;
      for (int i = 0; i < k; ++i) {
        const std::uint64_t v = rest & mask(widths[i]);
        rest >>= widths[i];
        sum += v;
        set_field(in, i * W, widths[i], v);
      }
      BitString out = run_bitwise(c, in);
      CHECK(get_field(out, 0, W) == sum);
    }
  }
  CHECK_THROWS_AS(build_tree_sum({3}), std::invalid_argument);
  CHECK_THROWS_AS(build_tree_sum({3, 0}), std::invalid_argument);
}

TEST_CASE("threshold comparator") {
  for (int W = 1; W <= 4; ++W) {
    for (std::uint64_t tau = 0; tau < (std::uint64_t{1} << W); ++tau) {
      Circuit c = build_leq_const(W, Int(static_cast<unsigned long>(tau)));
      const int cw = static_cast<int>(c.width());
      for (std::uint64_t v = 0; v < (std::uint64_t{1} << W); ++v) {
        for (std::uint64_t y = 0; y < 2; ++y) {
          BitString in(cw);
          set_field(in, 0, W, v);
          in.set(W, y);
          BitString out = run_bitwise(c, in);
          CHECK(get_field(out, 0, W) == v);
          CHECK(out.get(W) == ((y ^ (v <= tau ? 1 : 0)) != 0));
          check_clean(out, W + 1, cw);
        }
      }
    }
  }
  // Gate count must not depend on tau except at the all-true threshold.
  {
    std::size_t base = build_leq_const(4, Int(3)).size();
    for (std::uint64_t tau = 0; tau < 15; ++tau)
      CHECK(build_leq_const(4, Int(static_cast<unsigned long>(tau))).size() ==
            base);
    CHECK(build_leq_const(4, Int(15)).size() == base + 1);
  }
  CHECK_THROWS_AS(build_leq_const(2, Int(-1)), std::invalid_argument);
  CHECK_THROWS_AS(build_leq_const(2, Int(4)), std::invalid_argument);
}
