#include "qsvp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "qsvp/arith.hpp"

namespace qsvp {

int CoefficientEncoding::total_bits() const {
  int t = 0;
  for (int wi : w) t += wi;
  return t;
}

Int CoefficientEncoding::search_space() const {
  return pow2(static_cast<unsigned>(total_bits()));
}

IntVec CoefficientEncoding::decode(const BitString& bits) const {
  if (bits.width < total_bits()) {
    throw std::invalid_argument("decode: bit string too short");
  }
  IntVec x(d.size());
  int off = 0;
  for (size_t i = 0; i < d.size(); ++i) {
    Int c = 0;
    for (int j = 0; j < w[i]; ++j) {
      if (bits.get(off + j)) c += pow2(static_cast<unsigned>(j));
    }
    x[i] = c - d[i];
    off += w[i];
  }
  return x;
}

IntVec CoefficientEncoding::decode_index(std::uint64_t pattern) const {
  const int tb = total_bits();
  if (tb > 62) throw std::invalid_argument("decode_index: too many bits");
  IntVec x(d.size());
  int off = 0;
  for (size_t i = 0; i < d.size(); ++i) {
    const std::uint64_t mask = (std::uint64_t{1} << w[i]) - 1;
    const std::uint64_t c = (pattern >> off) & mask;
    x[i] = Int(static_cast<unsigned long>(c)) - d[i];
    off += w[i];
  }
  return x;
}

BitString CoefficientEncoding::encode(const IntVec& x) const {
  if (x.size() != d.size()) {
    throw std::invalid_argument("encode: dimension mismatch");
  }
  BitString bits(total_bits());
  int off = 0;
  for (size_t i = 0; i < d.size(); ++i) {
    Int c = x[i] + d[i];
    if (c < 0 || c >= pow2(static_cast<unsigned>(w[i]))) {
      throw std::invalid_argument("encode: coefficient out of range");
    }
    for (int j = 0; j < w[i]; ++j) {
      if (mpz_tstbit(c.get_mpz_t(), j)) bits.set(off + j, true);
    }
    off += w[i];
  }
  return bits;
}

CoefficientEncoding encoding_from_bounds(const IntVec& d) {
  if (d.empty()) throw std::invalid_argument("encoding: empty bounds");
  CoefficientEncoding enc;
  enc.d = d;
  enc.w.resize(d.size());
  for (size_t i = 0; i < d.size(); ++i) {
    if (d[i] < 1) throw std::invalid_argument("encoding: offsets must be >= 1");
    enc.w[i] = bitlen(2 * d[i]);
  }
  return enc;
}

CoefficientEncoding log_n_encoding(int n) {
  if (n < 1) throw std::invalid_argument("log_n_encoding: n >= 1");
  const int w = std::max(2, ceil_log2(static_cast<std::uint64_t>(n)));
  const Int d = pow2(static_cast<unsigned>(w - 2));
  return encoding_from_bounds(IntVec(n, d));
}

namespace {

Int ceil_sqrt_rat(const Rat& r) {
  if (r < 0) throw std::invalid_argument("ceil_sqrt_rat: negative");
  Int k = isqrt(floor_rat(r));
  while (Rat(Int(k * k)) < r) ++k;
  return k;
}

}  // namespace

CoefficientEncoding derive_bounds(const LatticeBasis& basis, BoundMode mode,
                                  const IntVec* explicit_d,
                                  const Rat* radius_sq) {
  const int n = basis.rank();
  switch (mode) {
    case BoundMode::Explicit: {
      if (!explicit_d) {
        throw std::invalid_argument("derive_bounds: explicit offsets missing");
      }
      if (static_cast<int>(explicit_d->size()) != n) {
        throw std::invalid_argument("derive_bounds: offset count != rank");
      }
      return encoding_from_bounds(*explicit_d);
    }
    case BoundMode::Uniform:
      return log_n_encoding(n);
    case BoundMode::Dual: {
      Rat a2;
      if (radius_sq) {
        if (*radius_sq <= 0) {
          throw std::invalid_argument("derive_bounds: radius^2 must be > 0");
        }
        a2 = *radius_sq;
      } else {
        const double g = gaussian_heuristic(basis);
        a2 = Rat(g) * Rat(g);
      }
      const RatVec duals = dual_row_norms_sq(basis);
      IntVec d(n);
      for (int i = 0; i < n; ++i) {
        Int di = ceil_sqrt_rat(a2 * duals[i]);
        d[i] = di < 1 ? Int(1) : di;
      }
      return encoding_from_bounds(d);
    }
  }
  throw std::invalid_argument("derive_bounds: bad mode");
}

Threshold choose_threshold_gh(const LatticeBasis& basis, double scale) {
  if (!(scale >= 1.0)) {
    throw std::invalid_argument("choose_threshold_gh: scale must be >= 1");
  }
  const double g = gaussian_heuristic(basis);
  const double t = scale * g;
  Threshold thr;
  thr.tau = floor_rat(Rat(t) * Rat(t));
  thr.radius = t;
  thr.source = "gh";
  return thr;
}

Threshold choose_threshold_explicit(const Rat& radius_sq) {
  if (radius_sq < 0) {
    throw std::invalid_argument("choose_threshold_explicit: radius^2 < 0");
  }
  Threshold thr;
  thr.tau = floor_rat(radius_sq);
  thr.radius = sqrt_hp(radius_sq);
  thr.source = "explicit";
  return thr;
}

WidthPlan plan_widths(const IntMat& eff, const CoefficientEncoding& enc) {
  const int n = static_cast<int>(eff.size());
  if (n == 0 || enc.rank() != n) {
    throw std::invalid_argument("plan_widths: shape mismatch");
  }
  const int m = static_cast<int>(eff[0].size());
  const int logn = ceil_log2(static_cast<std::uint64_t>(n));
  const int logm = ceil_log2(static_cast<std::uint64_t>(m));
  WidthPlan p;
  p.product_width.assign(n, std::vector<int>(m, 0));
  p.inner_sum_width.assign(m, 0);
  for (int j = 0; j < m; ++j) {
    int maxp = 0;
    for (int i = 0; i < n; ++i) {
      if (eff[i][j] == 0) continue;
      const int pw = enc.w[i] + 1 + bitlen(abs(eff[i][j]));
      p.product_width[i][j] = pw;
      maxp = std::max(maxp, pw);
    }
    if (maxp > 0) p.inner_sum_width[j] = maxp + logn;
  }
  int maxinner = 0;
  for (int j = 0; j < m; ++j) maxinner = std::max(maxinner, p.inner_sum_width[j]);
  if (maxinner == 0) throw std::invalid_argument("plan_widths: zero matrix");
  p.square_width = 2 * maxinner;
  p.outer_sum_width = p.square_width + logm;
  p.compare_width = p.outer_sum_width;
  return p;
}

bool classical_predicate(const IntMat& rows, const IntVec& x, const Int& tau) {
  const size_t n = rows.size();
  if (x.size() != n || n == 0) {
    throw std::invalid_argument("classical_predicate: shape mismatch");
  }
  const size_t m = rows[0].size();
  Int norm = 0;
  for (size_t j = 0; j < m; ++j) {
    Int v = 0;
    for (size_t i = 0; i < n; ++i) v += x[i] * rows[i][j];
    norm += v * v;
  }
  return norm <= tau;
}

double qubit_requirement_bound(int n) {
  if (n < 1) throw std::invalid_argument("qubit_requirement_bound: n >= 1");
  const double nn = static_cast<double>(n);
  return 1.5 * nn * std::log2(nn) - 2.26 * nn;
}

namespace {

struct Node {
  WireVec wires;
  Int lo, hi;
};

void check_signed_fit(const Node& nd, const char* where) {
  const Int half = pow2(static_cast<unsigned>(nd.wires.size() - 1));
  if (nd.lo < -half || nd.hi > half - 1) {
    throw PlanError(std::string(where) + ": value interval escapes register");
  }
}

void check_unsigned_fit(const Node& nd, const char* where) {
  const Int top = pow2(static_cast<unsigned>(nd.wires.size()));
  if (nd.lo < 0 || nd.hi > top - 1) {
    throw PlanError(std::string(where) + ": value interval escapes register");
  }
}

Node tree_reduce_signed(Circuit& c, std::vector<Node> nodes,
                        ScratchPool& pool) {
  while (nodes.size() > 1) {
    std::vector<Node> next;
    for (size_t t = 0; t + 1 < nodes.size(); t += 2) {
      Node dst = std::move(nodes[t]);
      Node& src = nodes[t + 1];
      const size_t W = std::max(dst.wires.size(), src.wires.size()) + 1;
      if (dst.wires.size() < W) {
        WireVec pad = pool.acquire(static_cast<int>(W - dst.wires.size()),
                                   "cpad", RegKind::Ancilla);
        const std::uint32_t top = dst.wires.back();
        for (std::uint32_t p : pad) {
          c.cx(top, p);
          dst.wires.push_back(p);
        }
      }
      emit_add(c, src.wires, dst.wires, /*sign_extend=*/true, pool);
      dst.lo += src.lo;
      dst.hi += src.hi;
      check_signed_fit(dst, "column sum");
      next.push_back(std::move(dst));
    }
    if (nodes.size() % 2) next.push_back(std::move(nodes.back()));
    nodes = std::move(next);
  }
  return std::move(nodes[0]);
}

Node tree_reduce_unsigned(Circuit& c, std::vector<Node> nodes,
                          ScratchPool& pool) {
  while (nodes.size() > 1) {
    std::vector<Node> next;
    for (size_t t = 0; t + 1 < nodes.size(); t += 2) {
      Node dst = std::move(nodes[t]);
      Node& src = nodes[t + 1];
      const size_t W = std::max(dst.wires.size(), src.wires.size()) + 1;
      if (dst.wires.size() < W) {
        WireVec pad = pool.acquire(static_cast<int>(W - dst.wires.size()),
                                   "opad", RegKind::Ancilla);
        for (std::uint32_t p : pad) dst.wires.push_back(p);
      }
      emit_add(c, src.wires, dst.wires, /*sign_extend=*/false, pool);
      dst.lo += src.lo;
      dst.hi += src.hi;
      check_unsigned_fit(dst, "outer sum");
      next.push_back(std::move(dst));
    }
    if (nodes.size() % 2) next.push_back(std::move(nodes.back()));
    nodes = std::move(next);
  }
  return std::move(nodes[0]);
}

struct GateRec {
  GateKind k;
  std::uint32_t q[3];
  std::uint32_t n;
};

void append_reversed(Circuit& c, std::size_t g0, std::size_t g1) {
  std::vector<GateRec> journal;
  journal.reserve(g1 - g0);
  for (std::size_t i = g0; i < g1; ++i) {
    GateView v = c.gate(i);
    if (v.n > 3) throw std::logic_error("append_reversed: unexpected gate");
    GateRec r{v.kind, {0, 0, 0}, v.n};
    for (std::uint32_t t = 0; t < v.n; ++t) r.q[t] = v.q[t];
    journal.push_back(r);
  }
  for (std::size_t i = journal.size(); i-- > 0;) {
    const GateRec& r = journal[i];
    c.append(GateView{r.k, r.q, r.n});
  }
}

}  // namespace

OracleCircuit synthesize_oracle(const LatticeBasis& basis,
                                const CoefficientEncoding& enc,
                                const Threshold& thr) {
  const int n = basis.rank();
  const int m = basis.ambient_dim();
  if (enc.rank() != n) {
    throw std::invalid_argument("synthesize_oracle: encoding rank mismatch");
  }
  if (thr.tau < 0) {
    throw std::invalid_argument("synthesize_oracle: negative threshold");
  }

  OracleCircuit oc;
  oc.encoding = enc;
  oc.threshold = thr;
  oc.effective_rows = basis.rows();
  oc.negated_rows.assign(n, false);
  for (int i = 0; i < n; ++i) {
    if (oc.effective_rows[i][0] < 0) {
      oc.negated_rows[i] = true;
      for (int j = 0; j < m; ++j) {
        oc.effective_rows[i][j] = -oc.effective_rows[i][j];
      }
    }
  }
  const IntMat& eff = oc.effective_rows;
  oc.plan = plan_widths(eff, enc);

  Circuit& c = oc.circuit;
  std::vector<WireVec> cbits(n);
  for (int i = 0; i < n; ++i) {
    const std::uint32_t off =
        c.add_register("c" + std::to_string(i), enc.w[i], RegKind::Input);
    cbits[i].resize(enc.w[i]);
    std::iota(cbits[i].begin(), cbits[i].end(), off);
  }
  oc.input_bits = static_cast<int>(c.width());
  oc.y_index = c.add_register("y", 1, RegKind::Output);
  ScratchPool pool(c);

  const std::size_t g0 = c.size();

  // Stage 1: decode c_i into the signed coefficient x_i = c_i - d_i on
  // w_i + 1 wires (one fresh sign wire on top).
  std::vector<Node> x(n);
  for (int i = 0; i < n; ++i) {
    WireVec sg = pool.acquire(1, "sgn" + std::to_string(i), RegKind::Ancilla);
    WireVec xb = cbits[i];
    xb.push_back(sg[0]);
    const Int K = pow2(static_cast<unsigned>(enc.w[i] + 1)) - enc.d[i];
    emit_const_add(c, K, xb, pool);
    x[i] = Node{std::move(xb), enc.lo(i), enc.hi(i)};
    check_signed_fit(x[i], "decode");
  }

  // Stage 2: products x_i * eff[i][j] for every nonzero entry.
  std::vector<std::vector<Node>> cols(m);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      if (eff[i][j] == 0) continue;
      const int pw =
          static_cast<int>(x[i].wires.size()) + bitlen(abs(eff[i][j]));
      if (pw != oc.plan.product_width[i][j]) {
        throw PlanError("product register disagrees with plan");
      }
      WireVec out = pool.acquire(
          pw, "p" + std::to_string(i) + "_" + std::to_string(j),
          RegKind::Ancilla);
      emit_const_multiplier(c, eff[i][j], x[i].wires, out, pool);
      const Int a = x[i].lo * eff[i][j];
      const Int b = x[i].hi * eff[i][j];
      Node nd{std::move(out), std::min(a, b), std::max(a, b)};
      check_signed_fit(nd, "product");
      cols[j].push_back(std::move(nd));
    }
  }

  // Stage 3: per-column signed sums.
  std::vector<Node> colsum;
  std::vector<int> colidx;
  for (int j = 0; j < m; ++j) {
    if (cols[j].empty()) continue;
    Node t = tree_reduce_signed(c, std::move(cols[j]), pool);
    if (static_cast<int>(t.wires.size()) > oc.plan.inner_sum_width[j]) {
      throw PlanError("column register escapes plan");
    }
    colsum.push_back(std::move(t));
    colidx.push_back(j);
  }

  // Stage 4: squares (unsigned from here on).
  std::vector<Node> squares;
  for (size_t k = 0; k < colsum.size(); ++k) {
    const Node& nd = colsum[k];
    const int w = static_cast<int>(nd.wires.size());
    if (2 * w > oc.plan.square_width) {
      throw PlanError("square register escapes plan");
    }
    WireVec out = pool.acquire(2 * w, "sq" + std::to_string(colidx[k]),
                               RegKind::Ancilla);
    emit_squarer(c, nd.wires, out, pool);
    const Int l2 = nd.lo * nd.lo, h2 = nd.hi * nd.hi;
    Node sq{std::move(out),
            (nd.lo <= 0 && nd.hi >= 0) ? Int(0) : std::min(l2, h2),
            std::max(l2, h2)};
    check_unsigned_fit(sq, "square");
    squares.push_back(std::move(sq));
  }

  // Stage 5: outer sum.
  Node total = tree_reduce_unsigned(c, std::move(squares), pool);
  if (static_cast<int>(total.wires.size()) > oc.plan.outer_sum_width) {
    throw PlanError("outer register escapes plan");
  }
  oc.vacuous_tau = total.hi;

  const std::size_t g1 = c.size();

  // Stage 6: threshold comparison into y (restores everything it touches).
  if (bitlen(thr.tau) > static_cast<int>(total.wires.size())) {
    c.x(oc.y_index);  // tau exceeds every reachable value: mark everything
  } else {
    emit_leq_const(c, total.wires, oc.y_index, thr.tau, pool);
  }

  // Uncompute stages 1-5.
  append_reversed(c, g0, g1);
  return oc;
}

Int count_marked(const OracleCircuit& oc, std::uint64_t cap, int jobs) {
  const int n = oc.encoding.rank();
  IntVec lo(n), hi(n);
  for (int i = 0; i < n; ++i) {
    lo[i] = oc.encoding.lo(i);
    hi[i] = oc.encoding.hi(i);
  }
  SvpCount sc = count_short_vectors(oc.effective_rows, lo, hi,
                                    oc.threshold.tau, cap, jobs);
  return Int(static_cast<unsigned long>(sc.satisfying));
}

namespace {

// Fast exact predicate evaluator over decoded patterns.
struct PredEval {
  const CoefficientEncoding& enc;
  const IntMat& rows;
  Int tau;
  bool small = false;
  std::vector<std::vector<long long>> r64;
  std::vector<long long> d64;
  std::vector<int> off;
  long long tau64 = 0;

  PredEval(const CoefficientEncoding& e, const IntMat& r, const Int& t)
      : enc(e), rows(r), tau(t) {
    const size_t n = rows.size();
    const size_t m = rows[0].size();
    off.resize(n);
    int o = 0;
    for (size_t i = 0; i < n; ++i) {
      off[i] = o;
      o += enc.w[i];
    }
    Int bound = 0;
    for (size_t j = 0; j < m; ++j) {
      Int sj = 0;
      for (size_t i = 0; i < n; ++i) {
        const Int la = abs(enc.lo(static_cast<int>(i)));
        const Int ha = abs(enc.hi(static_cast<int>(i)));
        sj += std::max(la, ha) * abs(rows[i][j]);
      }
      bound += sj * sj;
    }
    small = bound < (Int(1) << 62);
    for (size_t i = 0; i < n && small; ++i) {
      small = enc.d[i].fits_slong_p();
      for (size_t j = 0; j < m && small; ++j) small = rows[i][j].fits_slong_p();
    }
    if (small) {
      r64.assign(n, std::vector<long long>(m));
      d64.resize(n);
      for (size_t i = 0; i < n; ++i) {
        d64[i] = enc.d[i].get_si();
        for (size_t j = 0; j < m; ++j) r64[i][j] = rows[i][j].get_si();
      }
      tau64 = tau < (Int(1) << 62)
                  ? static_cast<long long>(tau.get_si())
                  : std::numeric_limits<long long>::max();
    }
  }

  bool operator()(std::uint64_t pattern) const {
    const size_t n = rows.size();
    const size_t m = rows[0].size();
    if (small) {
      long long norm = 0;
      for (size_t j = 0; j < m; ++j) {
        long long v = 0;
        for (size_t i = 0; i < n; ++i) {
          const std::uint64_t mask = (std::uint64_t{1} << enc.w[i]) - 1;
          const long long xi =
              static_cast<long long>((pattern >> off[i]) & mask) - d64[i];
          v += xi * r64[i][j];
        }
        norm += v * v;
      }
      return norm <= tau64;
    }
    return classical_predicate(rows, enc.decode_index(pattern), tau);
  }
};

struct VerifyPart {
  std::uint64_t checked = 0;
  std::uint64_t flips = 0;
  std::uint64_t anc = 0;
  std::uint64_t inp = 0;
  bool has_ce = false;
  std::uint64_t ce = 0;
};

}  // namespace

OracleCheckReport verify_oracle(const OracleCircuit& oc,
                                std::uint64_t max_patterns, int jobs) {
  const int tb = oc.encoding.total_bits();
  if (tb > 62 || (std::uint64_t{1} << tb) > max_patterns) {
    throw CapacityError("verify_oracle: 2^" + std::to_string(tb) +
                        " inputs exceed the verification cap " +
                        std::to_string(max_patterns));
  }
  const std::uint64_t P = std::uint64_t{1} << tb;
  const std::uint32_t W = oc.circuit.width();
  const std::uint32_t y = oc.y_index;
  const int nin = oc.input_bits;
  PredEval pred(oc.encoding, oc.effective_rows, oc.threshold.tau);

  const std::uint64_t chunks = (P + 63) / 64;
  int hw = jobs > 0 ? jobs : static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  const int nt = static_cast<int>(
      std::min<std::uint64_t>(static_cast<std::uint64_t>(hw), chunks));

  std::vector<VerifyPart> parts(nt);
  auto worker = [&](int t, std::uint64_t c0, std::uint64_t c1) {
    VerifyPart& r = parts[t];
    std::vector<std::uint64_t> lanes(W);
    std::vector<std::uint64_t> in0(nin);
    for (std::uint64_t k = c0; k < c1; ++k) {
      const std::uint64_t p0 = k * 64;
      const std::uint64_t cnt = std::min<std::uint64_t>(64, P - p0);
      const std::uint64_t used =
          cnt == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << cnt) - 1);
      std::uint64_t expect = 0;
      for (std::uint64_t i = 0; i < cnt; ++i) {
        if (pred(p0 + i)) expect |= std::uint64_t{1} << i;
      }
      for (int b = 0; b < nin; ++b) {
        std::uint64_t wv = 0;
        for (std::uint64_t i = 0; i < cnt; ++i) {
          wv |= (((p0 + i) >> b) & 1) << i;
        }
        in0[b] = wv;
      }
      for (int yv = 0; yv < 2; ++yv) {
        std::fill(lanes.begin(), lanes.end(), 0);
        for (int b = 0; b < nin; ++b) lanes[b] = in0[b];
        lanes[y] = yv ? ~std::uint64_t{0} : 0;
        run_bitsliced(oc.circuit, lanes);
        const std::uint64_t flip_bad =
            ((lanes[y] ^ (yv ? ~std::uint64_t{0} : 0)) ^ expect) & used;
        std::uint64_t anc_bad = 0;
        for (std::uint32_t q = 0; q < W; ++q) {
          if (q == y || static_cast<int>(q) < nin) continue;
          anc_bad |= lanes[q];
        }
        anc_bad &= used;
        std::uint64_t inp_bad = 0;
        for (int b = 0; b < nin; ++b) inp_bad |= lanes[b] ^ in0[b];
        inp_bad &= used;
        r.checked += cnt;
        r.flips += static_cast<std::uint64_t>(__builtin_popcountll(flip_bad));
        r.anc += static_cast<std::uint64_t>(__builtin_popcountll(anc_bad));
        r.inp += static_cast<std::uint64_t>(__builtin_popcountll(inp_bad));
        const std::uint64_t any = flip_bad | anc_bad | inp_bad;
        if (any && !r.has_ce) {
          r.has_ce = true;
          r.ce = p0 + static_cast<std::uint64_t>(__builtin_ctzll(any));
        }
      }
    }
  };

  if (nt <= 1) {
    worker(0, 0, chunks);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(nt);
    for (int t = 0; t < nt; ++t) {
      const std::uint64_t a = chunks * t / nt;
      const std::uint64_t b = chunks * (t + 1) / nt;
      threads.emplace_back(worker, t, a, b);
    }
    for (auto& th : threads) th.join();
  }

  OracleCheckReport rep;
  for (const VerifyPart& p : parts) {
    rep.patterns_checked += p.checked;
    rep.flip_failures += p.flips;
    rep.ancilla_violations += p.anc;
    rep.input_preservation_violations += p.inp;
    if (p.has_ce && (!rep.has_counterexample || p.ce < rep.counterexample_pattern)) {
      rep.has_counterexample = true;
      rep.counterexample_pattern = p.ce;
    }
  }
  if (rep.has_counterexample) {
    rep.counterexample = oc.encoding.decode_index(rep.counterexample_pattern);
  }
  return rep;
}

}  // namespace qsvp
