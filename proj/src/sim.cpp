#include "qsvp/sim.hpp"

#include <algorithm>
#include <cstring>
#include <limits>
#include <stdexcept>
#include <thread>

namespace qsvp {

BitString run_bitwise(const Circuit& c, BitString in) {
  if (in.width != static_cast<int>(c.width())) {
    throw std::invalid_argument("run_bitwise: state width mismatch");
  }
  for (std::size_t g = 0; g < c.size(); ++g) {
    GateView v = c.gate(g);
    switch (v.kind) {
      case GateKind::X:
        in.flip(v.q[0]);
        break;
      case GateKind::CX:
        if (in.get(v.q[0])) in.flip(v.q[1]);
        break;
      case GateKind::CCX:
        if (in.get(v.q[0]) && in.get(v.q[1])) in.flip(v.q[2]);
        break;
      case GateKind::MCX: {
        bool all = true;
        for (std::uint32_t i = 0; all && i + 1 < v.n; ++i) all = in.get(v.q[i]);
        if (all) in.flip(v.q[v.n - 1]);
        break;
      }
      default:
        throw std::invalid_argument(std::string("run_bitwise: non-classical gate ") +
                                    gate_name(v.kind));
    }
  }
  return in;
}

void run_bitsliced(const Circuit& c, std::vector<std::uint64_t>& lanes) {
  if (lanes.size() != c.width()) {
    throw std::invalid_argument("run_bitsliced: lane count mismatch");
  }
  std::uint64_t* L = lanes.data();
  for (std::size_t g = 0; g < c.size(); ++g) {
    GateView v = c.gate(g);
    switch (v.kind) {
      case GateKind::X:
        L[v.q[0]] = ~L[v.q[0]];
        break;
      case GateKind::CX:
        L[v.q[1]] ^= L[v.q[0]];
        break;
      case GateKind::CCX:
        L[v.q[2]] ^= L[v.q[0]] & L[v.q[1]];
        break;
      case GateKind::MCX: {
        std::uint64_t m = ~std::uint64_t{0};
        for (std::uint32_t i = 0; i + 1 < v.n; ++i) m &= L[v.q[i]];
        L[v.q[v.n - 1]] ^= m;
        break;
      }
      default:
        throw std::invalid_argument(std::string("run_bitsliced: non-classical gate ") +
                                    gate_name(v.kind));
    }
  }
}

std::vector<Amp> basis_state(int width, std::uint64_t index) {
  if (width < 0 || width > 62) {
    throw std::invalid_argument("basis_state: width out of range");
  }
  std::vector<Amp> s(std::uint64_t{1} << width, Amp{0.0, 0.0});
  if (index >= s.size()) throw std::invalid_argument("basis_state: bad index");
  s[index] = Amp{1.0, 0.0};
  return s;
}

namespace {

inline void apply_phase1(std::vector<Amp>& s, std::uint32_t q, Amp phase) {
  const std::uint64_t bit = std::uint64_t{1} << q;
  for (std::uint64_t i = 0; i < s.size(); ++i) {
    if (i & bit) s[i] *= phase;
  }
}

}  // namespace

std::vector<Amp> run_statevector(const Circuit& c, std::vector<Amp> state,
                                 int max_width) {
  const std::uint32_t W = c.width();
  if (static_cast<int>(W) > max_width) {
    throw CapacityError("run_statevector: circuit width " + std::to_string(W) +
                        " exceeds the statevector cap " +
                        std::to_string(max_width));
  }
  if (state.size() != (std::uint64_t{1} << W)) {
    throw std::invalid_argument("run_statevector: state size mismatch");
  }
  constexpr double kInvSqrt2 = 0.7071067811865475244;
  const Amp phase_i{0.0, 1.0};
  const Amp phase_mi{0.0, -1.0};
  const Amp phase_t{kInvSqrt2, kInvSqrt2};
  const Amp phase_tdg{kInvSqrt2, -kInvSqrt2};

  for (std::size_t g = 0; g < c.size(); ++g) {
    GateView v = c.gate(g);
    switch (v.kind) {
      case GateKind::X: {
        const std::uint64_t b = std::uint64_t{1} << v.q[0];
        for (std::uint64_t i = 0; i < state.size(); ++i) {
          if (!(i & b)) std::swap(state[i], state[i | b]);
        }
        break;
      }
      case GateKind::H: {
        const std::uint64_t b = std::uint64_t{1} << v.q[0];
        for (std::uint64_t i = 0; i < state.size(); ++i) {
          if (!(i & b)) {
            Amp a0 = state[i], a1 = state[i | b];
            state[i] = (a0 + a1) * kInvSqrt2;
            state[i | b] = (a0 - a1) * kInvSqrt2;
          }
        }
        break;
      }
      case GateKind::Z:
        apply_phase1(state, v.q[0], Amp{-1.0, 0.0});
        break;
      case GateKind::S:
        apply_phase1(state, v.q[0], phase_i);
        break;
      case GateKind::Sdg:
        apply_phase1(state, v.q[0], phase_mi);
        break;
      case GateKind::T:
        apply_phase1(state, v.q[0], phase_t);
        break;
      case GateKind::Tdg:
        apply_phase1(state, v.q[0], phase_tdg);
        break;
      case GateKind::CX: {
        const std::uint64_t cb = std::uint64_t{1} << v.q[0];
        const std::uint64_t tb = std::uint64_t{1} << v.q[1];
        for (std::uint64_t i = 0; i < state.size(); ++i) {
          if ((i & cb) && !(i & tb)) std::swap(state[i], state[i | tb]);
        }
        break;
      }
      case GateKind::CZ: {
        const std::uint64_t m =
            (std::uint64_t{1} << v.q[0]) | (std::uint64_t{1} << v.q[1]);
        for (std::uint64_t i = 0; i < state.size(); ++i) {
          if ((i & m) == m) state[i] = -state[i];
        }
        break;
      }
      case GateKind::CCX: {
        const std::uint64_t m =
            (std::uint64_t{1} << v.q[0]) | (std::uint64_t{1} << v.q[1]);
        const std::uint64_t tb = std::uint64_t{1} << v.q[2];
        for (std::uint64_t i = 0; i < state.size(); ++i) {
          if (((i & m) == m) && !(i & tb)) std::swap(state[i], state[i | tb]);
        }
        break;
      }
      case GateKind::MCX: {
        std::uint64_t m = 0;
        for (std::uint32_t k = 0; k + 1 < v.n; ++k) {
          m |= std::uint64_t{1} << v.q[k];
        }
        const std::uint64_t tb = std::uint64_t{1} << v.q[v.n - 1];
        for (std::uint64_t i = 0; i < state.size(); ++i) {
          if (((i & m) == m) && !(i & tb)) std::swap(state[i], state[i | tb]);
        }
        break;
      }
    }
  }
  return state;
}

namespace {

// One thread's share of the box scan: digit 0 runs over [lo0, hi0], the
// remaining digits run their full ranges in odometer (lexicographic) order.
template <typename T>
struct ScanResult {
  std::uint64_t patterns = 0;
  std::uint64_t satisfying = 0;
  bool found = false;
  T min_norm{};
  std::vector<long long> arg;  // digits as plain integers (boxes are small)
};

template <typename T>
T from_ll(long long v);

template <>
long long from_ll<long long>(long long v) {
  return v;
}

template <>
Int from_ll<Int>(long long v) {
  return Int(static_cast<long>(v));
}

Int widen(long long v) { return Int(static_cast<long>(v)); }
const Int& widen(const Int& v) { return v; }

template <typename T>
ScanResult<T> scan_box(const std::vector<std::vector<T>>& rows,
                       const std::vector<long long>& lo,
                       const std::vector<long long>& hi, long long lo0,
                       long long hi0, bool has_tau, const T& tau) {
  const std::size_t n = rows.size();
  const std::size_t m = rows[0].size();
  ScanResult<T> r;
  std::vector<long long> x(n);
  std::vector<T> v(m);
  for (long long x0 = lo0; x0 <= hi0; ++x0) {
    x[0] = x0;
    for (std::size_t i = 1; i < n; ++i) x[i] = lo[i];
    for (std::size_t j = 0; j < m; ++j) {
      T acc{};
      for (std::size_t i = 0; i < n; ++i) acc += rows[i][j] * from_ll<T>(x[i]);
      v[j] = acc;
    }
    for (;;) {
      T norm{};
      bool zero = true;
      for (std::size_t i = 0; i < n && zero; ++i) zero = (x[i] == 0);
      for (std::size_t j = 0; j < m; ++j) norm += v[j] * v[j];
      ++r.patterns;
      if (has_tau && norm <= tau) ++r.satisfying;
      if (!zero && (!r.found || norm < r.min_norm)) {
        r.found = true;
        r.min_norm = norm;
        r.arg = x;
      }
      // Advance the odometer over digits n-1 .. 1.
      std::size_t d = n;
      while (d-- > 1) {
        if (x[d] < hi[d]) {
          ++x[d];
          for (std::size_t j = 0; j < m; ++j) v[j] += rows[d][j];
          break;
        }
        const T span = from_ll<T>(hi[d] - lo[d]);
        for (std::size_t j = 0; j < m; ++j) v[j] -= rows[d][j] * span;
        x[d] = lo[d];
      }
      if (d == 0) break;  // every movable digit rolled over
    }
  }
  return r;
}

template <typename T>
SvpCount run_scan(const std::vector<std::vector<T>>& rows,
                  const std::vector<long long>& lo,
                  const std::vector<long long>& hi, bool has_tau, const T& tau,
                  int jobs) {
  const long long lo0 = lo[0], hi0 = hi[0];
  int hw = jobs > 0 ? jobs : static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  const long long span0 = hi0 - lo0 + 1;
  const int nt = static_cast<int>(std::min<long long>(hw, span0));

  std::vector<ScanResult<T>> parts(nt);
  if (nt <= 1) {
    parts[0] = scan_box(rows, lo, hi, lo0, hi0, has_tau, tau);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(nt);
    for (int t = 0; t < nt; ++t) {
      const long long a = lo0 + span0 * t / nt;
      const long long b = lo0 + span0 * (t + 1) / nt - 1;
      threads.emplace_back([&, t, a, b] {
        parts[t] = scan_box(rows, lo, hi, a, b, has_tau, tau);
      });
    }
    for (auto& th : threads) th.join();
  }

  SvpCount out;
  const ScanResult<T>* best = nullptr;
  for (const auto& p : parts) {
    out.patterns += p.patterns;
    out.satisfying += p.satisfying;
    if (p.found && (!best || p.min_norm < best->min_norm ||
                    (p.min_norm == best->min_norm && p.arg < best->arg))) {
      best = &p;
    }
  }
  if (best) {
    out.found_nonzero = true;
    out.min_nonzero_norm_sq = widen(best->min_norm);
    out.argmin.clear();
    out.argmin.reserve(best->arg.size());
    for (long long d : best->arg) out.argmin.push_back(from_ll<Int>(d));
  }
  return out;
}

}  // namespace

SvpCount count_short_vectors(const IntMat& rows, const IntVec& lo,
                             const IntVec& hi, const Int& tau,
                             std::uint64_t cap, int jobs) {
  const std::size_t n = rows.size();
  if (n == 0 || lo.size() != n || hi.size() != n) {
    throw std::invalid_argument("count_short_vectors: shape mismatch");
  }
  const std::size_t m = rows[0].size();
  for (const auto& r : rows) {
    if (r.size() != m || m == 0) {
      throw std::invalid_argument("count_short_vectors: ragged rows");
    }
  }
  Int total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (lo[i] > hi[i]) {
      throw std::invalid_argument("count_short_vectors: empty range");
    }
    if (!lo[i].fits_slong_p() || !hi[i].fits_slong_p()) {
      throw std::invalid_argument("count_short_vectors: bound out of range");
    }
    total *= hi[i] - lo[i] + 1;
  }
  if (total > Int(static_cast<unsigned long>(cap))) {
    throw CapacityError("count_short_vectors: box holds " + to_decimal(total) +
                        " points, cap is " + std::to_string(cap));
  }

  // int64 fast path: every reachable |v_j| and the norm bound must fit.
  bool small = true;
  Int norm_bound = 0;
  for (std::size_t j = 0; j < m && small; ++j) {
    Int sj = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const Int la = abs(lo[i]);
      const Int ha = abs(hi[i]);
      sj += std::max(la, ha) * abs(rows[i][j]);
    }
    norm_bound += sj * sj;
  }
  const Int i64max = (Int(1) << 62);
  small = small && norm_bound < i64max;
  for (std::size_t i = 0; i < n && small; ++i) {
    small = lo[i].fits_slong_p() && hi[i].fits_slong_p();
    for (std::size_t j = 0; j < m && small; ++j) {
      small = rows[i][j].fits_slong_p();
    }
  }

  std::vector<long long> l(n), h(n);
  for (std::size_t i = 0; i < n; ++i) {
    l[i] = static_cast<long long>(lo[i].get_si());
    h[i] = static_cast<long long>(hi[i].get_si());
  }
  const bool has_tau = tau >= 0;

  if (small) {
    std::vector<std::vector<long long>> r64(n, std::vector<long long>(m));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        r64[i][j] = static_cast<long long>(rows[i][j].get_si());
      }
    }
    long long t64 = 0;
    if (has_tau) {
      t64 = tau < i64max ? static_cast<long long>(tau.get_si())
                         : std::numeric_limits<long long>::max();
    }
    return run_scan<long long>(r64, l, h, has_tau, t64, jobs);
  }

  std::vector<std::vector<Int>> rI(n, std::vector<Int>(m));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) rI[i][j] = rows[i][j];
  }
  return run_scan<Int>(rI, l, h, has_tau, tau, jobs);
}

ShortestResult brute_force_lambda1(const LatticeBasis& basis,
                                   std::uint64_t cap, int jobs) {
  const int n = basis.rank();
  const Int b1 = dot(basis.row(0), basis.row(0));
  const RatVec duals = dual_row_norms_sq(basis);
  IntVec lo(n), hi(n);
  for (int i = 0; i < n; ++i) {
    Rat r = Rat(b1) * duals[i];
    Int d = isqrt(floor_rat(r));
    if (d < 1) d = 1;
    lo[i] = -d;
    hi[i] = d;
  }
  SvpCount sc = count_short_vectors(basis.rows(), lo, hi, Int(-1), cap, jobs);
  if (!sc.found_nonzero) {
    throw std::logic_error("brute_force_lambda1: empty box");  // unreachable
  }
  return {sc.min_nonzero_norm_sq, sc.argmin};
}

}  // namespace qsvp
