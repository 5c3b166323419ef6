#include "qsvp/arith.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace qsvp {

WireVec ScratchPool::acquire(int count, const std::string& tag, RegKind kind) {
  if (count <= 0) return {};
  WireVec w;
  w.reserve(static_cast<std::size_t>(count));
  while (count > 0 && !free_.empty()) {
    w.push_back(free_.back());
    free_.pop_back();
    --count;
  }
  if (count > 0) {
    std::string name = tag;
    while (c_->find_register(name)) {
      name = tag + "_" + std::to_string(serial_++);
    }
    std::uint32_t off = c_->add_register(name, count, kind);
    for (int i = 0; i < count; ++i) w.push_back(off + i);
  }
  return w;
}

void ScratchPool::release(const WireVec& wires) {
  for (std::uint32_t q : wires) {
    if (std::find(free_.begin(), free_.end(), q) != free_.end()) {
      throw std::logic_error("ScratchPool: wire released twice");
    }
    free_.push_back(q);
  }
}

namespace {

bool const_bit(const Int& k, size_t i) {
  return mpz_tstbit(k.get_mpz_t(), i) != 0;
}

void check_operands(const WireVec& a, const WireVec& b, const char* who) {
  if (a.empty() || b.empty() || a.size() > b.size()) {
    throw std::invalid_argument(std::string(who) + ": bad operand widths");
  }
}

}  // namespace

void emit_add(Circuit& c, const WireVec& a, const WireVec& b, bool sign_extend,
              ScratchPool& pool) {
  check_operands(a, b, "emit_add");
  const size_t W = b.size();
  if (W == 1) {
    c.cx(a[0], b[0]);
    return;
  }
  // Physical addend: a, then extension wires carrying sign copies (or zero).
  WireVec A = a;
  WireVec ext;
  if (a.size() < W) {
    ext = pool.acquire(static_cast<int>(W - a.size()), "ext", RegKind::Ancilla);
    if (sign_extend) {
      for (std::uint32_t e : ext) c.cx(a.back(), e);
    }
    A.insert(A.end(), ext.begin(), ext.end());
  }
  WireVec x = pool.acquire(1, "rc", RegKind::Ancilla);
  // Majority ladder: the running carry rides on the addend wires and the
  // unmajority sweep restores them while writing the sum bits.
  auto maj = [&](std::uint32_t cw, std::uint32_t bw, std::uint32_t aw) {
    c.cx(aw, bw);
    c.cx(aw, cw);
    c.ccx(cw, bw, aw);
  };
  auto uma = [&](std::uint32_t cw, std::uint32_t bw, std::uint32_t aw) {
    c.ccx(cw, bw, aw);
    c.cx(aw, cw);
    c.cx(cw, bw);
  };
  maj(x[0], b[0], A[0]);
  for (size_t i = 1; i < W; ++i) maj(A[i - 1], b[i], A[i]);
  for (size_t i = W; i-- > 1;) uma(A[i - 1], b[i], A[i]);
  uma(x[0], b[0], A[0]);
  pool.release(x);
  if (!ext.empty()) {
    if (sign_extend) {
      for (std::uint32_t e : ext) c.cx(a.back(), e);
    }
    pool.release(ext);
  }
}

void emit_sub(Circuit& c, const WireVec& a, const WireVec& b, bool sign_extend,
              ScratchPool& pool) {
  check_operands(a, b, "emit_sub");
  if (b.size() == 1) {
    c.cx(a[0], b[0]);
    return;
  }
  // b - a = ~(~b + a) in two's complement.
  for (std::uint32_t q : b) c.x(q);
  emit_add(c, a, b, sign_extend, pool);
  for (std::uint32_t q : b) c.x(q);
}

void emit_const_add(Circuit& c, const Int& k, const WireVec& bits,
                    ScratchPool& pool) {
  const size_t W = bits.size();
  if (W == 0) throw std::invalid_argument("emit_const_add: empty register");
  Int kk;
  mpz_fdiv_r_2exp(kk.get_mpz_t(), k.get_mpz_t(), W);
  if (kk == 0) return;
  const size_t k0 = mpz_scan1(kk.get_mpz_t(), 0);
  if (k0 == W - 1) {
    c.x(bits[W - 1]);
    return;
  }
  // Materialize the constant's bits above its lowest set bit and ripple-add
  // into the matching register slice; the temporary is cleared and reused.
  const size_t span = W - k0;
  WireVec t = pool.acquire(static_cast<int>(span), "kbits", RegKind::Ancilla);
  WireVec sub(bits.begin() + static_cast<std::ptrdiff_t>(k0), bits.end());
  for (size_t j = 0; j < span; ++j) {
    if (const_bit(kk, k0 + j)) c.x(t[j]);
  }
  emit_add(c, t, sub, false, pool);
  for (size_t j = 0; j < span; ++j) {
    if (const_bit(kk, k0 + j)) c.x(t[j]);
  }
  pool.release(t);
}

void emit_const_multiplier(Circuit& c, const Int& k, const WireVec& x,
                           const WireVec& out, ScratchPool& pool) {
  if (x.empty()) throw std::invalid_argument("emit_const_multiplier: empty x");
  if (k == 0) return;
  const Int ka = abs(k);
  const int klen = bitlen(ka);
  if (out.size() != x.size() + static_cast<size_t>(klen)) {
    throw std::invalid_argument("emit_const_multiplier: bad output width");
  }
  const bool neg = k < 0;
  bool first = true;
  for (size_t p = 0; p < static_cast<size_t>(klen); ++p) {
    if (!const_bit(ka, p)) continue;
    WireVec sub(out.begin() + static_cast<std::ptrdiff_t>(p), out.end());
    if (!neg && first) {
      // out[p..] = x, sign-extended: an exact copy of x * 2^p.
      for (size_t i = 0; i < x.size(); ++i) c.cx(x[i], out[p + i]);
      for (size_t j = p + x.size(); j < out.size(); ++j) c.cx(x.back(), out[j]);
      first = false;
    } else if (neg) {
      emit_sub(c, x, sub, true, pool);
    } else {
      emit_add(c, x, sub, true, pool);
    }
  }
}

void emit_squarer(Circuit& c, const WireVec& s, const WireVec& out,
                  ScratchPool& pool) {
  const size_t w = s.size();
  if (w == 0) throw std::invalid_argument("emit_squarer: empty operand");
  if (out.size() != 2 * w) {
    throw std::invalid_argument("emit_squarer: output width must be 2w");
  }
  WireVec m = pool.acquire(static_cast<int>(w), "sqm", RegKind::Ancilla);
  for (size_t k = 0; k < w; ++k) {
    // m = s_k ? s : 0 (bit k needs no self-product).
    for (size_t i = 0; i < w; ++i) {
      if (i == k) c.cx(s[k], m[k]);
      else c.ccx(s[k], s[i], m[i]);
    }
    WireVec sub(out.begin() + static_cast<std::ptrdiff_t>(k), out.end());
    if (k + 1 == w) {
      emit_sub(c, m, sub, true, pool);  // sign-weight digit
    } else {
      emit_add(c, m, sub, true, pool);
    }
    for (size_t i = 0; i < w; ++i) {
      if (i == k) c.cx(s[k], m[k]);
      else c.ccx(s[k], s[i], m[i]);
    }
  }
  pool.release(m);
}

void emit_leq_const(Circuit& c, const WireVec& v, std::uint32_t y,
                    const Int& tau, ScratchPool& pool) {
  const size_t W = v.size();
  if (W == 0) throw std::invalid_argument("emit_leq_const: empty register");
  if (tau < 0 || static_cast<size_t>(bitlen(tau)) > W) {
    throw std::invalid_argument(
        "emit_leq_const: threshold does not fit comparator width");
  }
  Int C = tau + 1;
  const bool vacuous = static_cast<size_t>(bitlen(C)) > W;  // C == 2^W
  if (vacuous) C = 0;
  WireVec zero = pool.acquire(1, "cmp0", RegKind::ConstantZero);
  WireVec B = pool.acquire(static_cast<int>(W), "cmpb", RegKind::Ancilla);

  struct GS {
    GateKind k;
    std::uint32_t q[3];
  };
  std::vector<GS> seq;
  seq.reserve(4 * W);
  auto gx = [&](std::uint32_t q) { seq.push_back({GateKind::X, {q, 0, 0}}); };
  auto gcx = [&](std::uint32_t a, std::uint32_t b) {
    seq.push_back({GateKind::CX, {a, b, 0}});
  };
  auto gccx = [&](std::uint32_t a, std::uint32_t b, std::uint32_t t) {
    seq.push_back({GateKind::CCX, {a, b, t}});
  };
  for (size_t i = 0; i < W; ++i) {
    std::uint32_t bp = (i == 0) ? zero[0] : B[i - 1];
    std::uint32_t bn = B[i];
    if (const_bit(C, i)) {
      gccx(bp, v[i], bn);
      gx(bn);
      gcx(v[i], bn);
      gx(bp);
    } else {
      gx(bn);
      gccx(bp, v[i], bn);
      gcx(bp, bn);
      gx(bn);
    }
  }
  auto play = [&](const GS& g) {
    switch (g.k) {
      case GateKind::X: c.x(g.q[0]); break;
      case GateKind::CX: c.cx(g.q[0], g.q[1]); break;
      default: c.ccx(g.q[0], g.q[1], g.q[2]); break;
    }
  };
  for (const GS& g : seq) play(g);
  c.cx(B[W - 1], y);
  for (size_t i = seq.size(); i-- > 0;) play(seq[i]);
  if (vacuous) c.x(y);
  pool.release(B);
  pool.release(zero);
}

Circuit build_adder(int width) {
  if (width < 1) throw std::invalid_argument("build_adder: width >= 1");
  const int N = width;
  Circuit c;
  std::uint32_t a = c.add_register("a", N, RegKind::Input);
  std::uint32_t b = c.add_register("b", N, RegKind::Input);
  std::uint32_t z = c.add_register("carry", 1, RegKind::Output);
  if (N == 1) {
    c.ccx(a, b, z);
    c.cx(a, b);
    return c;
  }
  std::uint32_t w = c.add_register("w", N - 1, RegKind::Ancilla);
  c.ccx(a, b, w);
  c.cx(a, b);
  for (int i = 1; i <= N - 2; ++i) {
    std::uint32_t ai = a + i, bi = b + i, wi = w + i - 1, wn = w + i;
    c.cx(ai, bi);
    // Bit 1 orders its first pair of controls for the documented latency.
    if (i == 1) c.ccx(bi, wi, wn);
    else c.ccx(wi, bi, wn);
    c.ccx(ai, bi, wn);
    c.cx(ai, wn);
    c.cx(wi, bi);
  }
  std::uint32_t at = a + N - 1, bt = b + N - 1, wt = w + N - 2;
  c.cx(wt, at);
  c.cx(wt, bt);
  c.ccx(at, bt, z);
  c.cx(wt, z);
  c.cx(wt, at);
  c.cx(at, bt);
  return c;
}

Circuit build_subtractor(int width) {
  if (width < 1) throw std::invalid_argument("build_subtractor: width >= 1");
  const int N = width;
  Circuit c;
  std::uint32_t a = c.add_register("a", N, RegKind::Input);
  std::uint32_t b = c.add_register("b", N, RegKind::Input);
  std::uint32_t sg = c.add_register("sign", 1, RegKind::Output);
  if (N == 1) {
    c.cx(a, b);
    c.ccx(a, b, sg);
    return c;
  }
  std::uint32_t w = c.add_register("w", N - 1, RegKind::Ancilla);
  c.cx(a, b);
  c.ccx(a, b, w);
  for (int i = 1; i <= N - 1; ++i) {
    std::uint32_t ai = a + i, bi = b + i, wi = w + i - 1;
    std::uint32_t wn = (i == N - 1) ? sg : w + i;
    c.cx(ai, bi);
    c.ccx(wi, bi, wn);
    c.ccx(ai, bi, wn);
    c.cx(wi, wn);
    c.cx(wi, bi);
  }
  return c;
}

Circuit build_ctrl_addsub(int width) {
  if (width < 1) throw std::invalid_argument("build_ctrl_addsub: width >= 1");
  const int N = width;
  Circuit c;
  std::uint32_t ctrl = c.add_register("ctrl", 1, RegKind::Input);
  std::uint32_t a = c.add_register("a", N, RegKind::Input);
  std::uint32_t b = c.add_register("b", N, RegKind::Input);
  std::uint32_t z = c.add_register("carry", 1, RegKind::Output);
  std::uint32_t w = (N >= 2) ? c.add_register("w", N - 1, RegKind::Ancilla) : 0;
  for (int i = 0; i < N; ++i) c.cx(ctrl, a + i);
  // Full-adder cells with the control wire doubling as carry-in.
  for (int i = 0; i <= N - 2; ++i) {
    std::uint32_t cin = (i == 0) ? ctrl : w + i - 1;
    std::uint32_t ai = a + i, bi = b + i, wn = w + i;
    c.cx(ai, bi);
    c.ccx(cin, bi, wn);
    c.ccx(ai, bi, wn);
    c.cx(ai, wn);
    c.cx(cin, bi);
  }
  std::uint32_t cin = (N == 1) ? ctrl : w + N - 2;
  std::uint32_t at = a + N - 1, bt = b + N - 1;
  c.cx(cin, at);
  c.cx(cin, bt);
  c.ccx(at, bt, z);
  c.cx(cin, z);
  c.cx(cin, at);
  c.cx(at, bt);
  c.cx(ctrl, z);
  for (int i = 0; i < N; ++i) c.cx(ctrl, a + i);
  return c;
}

Circuit build_const_multiplier(const Int& k, int x_width) {
  if (x_width < 1) {
    throw std::invalid_argument("build_const_multiplier: x_width >= 1");
  }
  Circuit c;
  std::uint32_t x = c.add_register("x", x_width, RegKind::Input);
  const int out_w = (k == 0) ? 1 : x_width + bitlen(abs(k));
  std::uint32_t out = c.add_register("out", out_w, RegKind::Output);
  WireVec xb(x_width), ob(out_w);
  std::iota(xb.begin(), xb.end(), x);
  std::iota(ob.begin(), ob.end(), out);
  if (k != 0) {
    ScratchPool pool(c);
    emit_const_multiplier(c, k, xb, ob, pool);
  }
  return c;
}

Circuit build_squarer(int width) {
  if (width < 1) throw std::invalid_argument("build_squarer: width >= 1");
  Circuit c;
  std::uint32_t s = c.add_register("s", width, RegKind::Input);
  std::uint32_t out = c.add_register("out", 2 * width, RegKind::Output);
  WireVec sb(width), ob(2 * width);
  std::iota(sb.begin(), sb.end(), s);
  std::iota(ob.begin(), ob.end(), out);
  ScratchPool pool(c);
  emit_squarer(c, sb, ob, pool);
  return c;
}

int tree_sum_layers(int count) {
  if (count < 1) throw std::invalid_argument("tree_sum_layers: count >= 1");
  if (count == 1) return 0;
  return ceil_log2(static_cast<std::uint64_t>(count));
}

Circuit build_tree_sum(const std::vector<int>& operand_widths) {
  const int k = static_cast<int>(operand_widths.size());
  if (k < 2) throw std::invalid_argument("build_tree_sum: need >= 2 operands");
  int maxw = 0;
  for (int w : operand_widths) {
    if (w < 1) throw std::invalid_argument("build_tree_sum: widths >= 1");
    maxw = std::max(maxw, w);
  }
  const int W = maxw + tree_sum_layers(k);
  Circuit c;
  std::vector<WireVec> ops(k);
  for (int i = 0; i < k; ++i) {
    std::uint32_t off =
        c.add_register("op" + std::to_string(i), W, RegKind::Input);
    ops[i].resize(W);
    std::iota(ops[i].begin(), ops[i].end(), off);
  }
  ScratchPool pool(c);
  std::vector<int> active(k);
  std::iota(active.begin(), active.end(), 0);
  while (active.size() > 1) {
    std::vector<int> next;
    for (size_t t = 0; t + 1 < active.size(); t += 2) {
      emit_add(c, ops[active[t + 1]], ops[active[t]], false, pool);
      next.push_back(active[t]);
    }
    if (active.size() % 2) next.push_back(active.back());
    active = std::move(next);
  }
  return c;
}

Circuit build_leq_const(int width, const Int& tau) {
  if (width < 1) throw std::invalid_argument("build_leq_const: width >= 1");
  Circuit c;
  std::uint32_t v = c.add_register("v", width, RegKind::Input);
  std::uint32_t y = c.add_register("y", 1, RegKind::Output);
  WireVec vb(width);
  std::iota(vb.begin(), vb.end(), v);
  ScratchPool pool(c);
  emit_leq_const(c, vb, y, tau, pool);
  return c;
}

}  // namespace qsvp
