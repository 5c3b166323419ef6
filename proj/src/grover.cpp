#include "qsvp/grover.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qsvp {

namespace {

// 200 decimal digits of pi (scaled integer, one leading integer digit).
const char* const kPiDigits =
    "3"
    "14159265358979323846264338327950288419716939937510"
    "58209749445923078164062862089986280348253421170679"
    "82148086513282306647093844609550582231725359408128"
    "48111745028410270193852110555964462294895493038196";

constexpr unsigned kFrac = 256;

// floor(pi * 2^kFrac), derived once from the digit literal.
const Int& pi_fixed() {
  static const Int value = [] {
    const Int digits(kPiDigits);
    Int den = 1;
    for (int i = 0; i < 200; ++i) den *= 10;
    return Int((digits << kFrac) / den);
  }();
  return value;
}

}  // namespace

Int iteration_count(const Int& N, const Int& M) {
  if (N < 1 || M < 1 || M > N) {
    throw std::invalid_argument("iteration_count: need 1 <= M <= N");
  }
  // s = floor(sqrt(N/M) * 2^kFrac); k = ceil(pi_fixed * s / 2^(2 kFrac + 2)).
  const Int s = isqrt((N << (2 * kFrac)) / M);
  const Int q = pi_fixed() * s;
  Int k;
  mpz_cdiv_q_2exp(k.get_mpz_t(), q.get_mpz_t(), 2 * kFrac + 2);
  return k;
}

double success_probability(const Int& N, const Int& M, const Int& k) {
  if (N < 1 || M < 1 || M > N) {
    throw std::invalid_argument("success_probability: need 1 <= M <= N");
  }
  if (k < 0) throw std::invalid_argument("success_probability: k >= 0");
  const double ratio = Rat(Rat(M) / Rat(N)).get_d();
  const double theta = std::asin(std::min(1.0, std::sqrt(ratio)));
  const double angle = (2.0 * k.get_d() + 1.0) * theta;
  const double s = std::sin(angle);
  return s * s;
}

Circuit build_diffusion(int bits) {
  if (bits < 1) throw std::invalid_argument("build_diffusion: bits >= 1");
  Circuit c;
  const std::uint32_t r = c.add_register("s", bits, RegKind::Input);
  for (int i = 0; i < bits; ++i) c.h(r + i);
  for (int i = 0; i < bits; ++i) c.x(r + i);
  if (bits == 1) {
    c.z(r);
  } else if (bits == 2) {
    c.cz(r, r + 1);
  } else {
    const std::uint32_t tgt = r + bits - 1;
    c.h(tgt);
    std::vector<std::uint32_t> ctrls(bits - 1);
    std::iota(ctrls.begin(), ctrls.end(), r);
    c.mcx(ctrls, tgt);
    c.h(tgt);
  }
  for (int i = 0; i < bits; ++i) c.x(r + i);
  for (int i = 0; i < bits; ++i) c.h(r + i);
  return c;
}

GroverPlan plan_grover(const OracleCircuit& oc, const Int& M) {
  GroverPlan gp;
  gp.search_space = oc.encoding.search_space();
  gp.marked = M;
  gp.iterations = iteration_count(gp.search_space, M);

  Circuit iter = oc.circuit;
  const Circuit diff = build_diffusion(oc.input_bits);
  for (std::size_t i = 0; i < diff.size(); ++i) iter.append(diff.gate(i));
  gp.per_iteration = metrics(iter);
  gp.width = gp.per_iteration.width;

  gp.prep_cost = static_cast<std::uint64_t>(oc.input_bits) + 2;
  gp.prep_depth = 2;

  const Int k = gp.iterations;
  auto big = [](std::uint64_t v) { return Int(static_cast<unsigned long>(v)); };
  gp.total_cost = big(gp.prep_cost) + k * big(gp.per_iteration.quantum_cost);
  gp.total_depth = big(gp.prep_depth) + k * big(gp.per_iteration.depth);
  gp.total_t_count = k * big(gp.per_iteration.t_count);
  gp.total_t_depth = k * big(gp.per_iteration.t_depth);
  gp.success = success_probability(gp.search_space, M, k);
  return gp;
}

Circuit assemble_grover(const OracleCircuit& oc, const Int& M,
                        std::uint64_t max_gates) {
  const Int k = iteration_count(oc.encoding.search_space(), M);
  const Circuit diff = build_diffusion(oc.input_bits);
  const Int planned = Int(static_cast<unsigned long>(oc.input_bits)) + 2 +
                      k * Int(static_cast<unsigned long>(oc.circuit.size() +
                                                         diff.size()));
  if (planned > Int(static_cast<unsigned long>(max_gates))) {
    throw CapacityError("assemble_grover: " + to_decimal(planned) +
                        " gates exceed the assembly cap " +
                        std::to_string(max_gates));
  }
  Circuit out(oc.circuit.width());
  for (const QubitRegister& r : oc.circuit.registers()) {
    out.declare_register(r.name, r.offset, r.width, r.kind);
  }
  out.reserve(static_cast<std::size_t>(planned.get_ui()));
  for (int b = 0; b < oc.input_bits; ++b) out.h(b);
  out.x(oc.y_index);
  out.h(oc.y_index);
  const std::uint64_t reps = k.get_ui();
  for (std::uint64_t r = 0; r < reps; ++r) {
    for (std::size_t i = 0; i < oc.circuit.size(); ++i) {
      out.append(oc.circuit.gate(i));
    }
    for (std::size_t i = 0; i < diff.size(); ++i) out.append(diff.gate(i));
  }
  return out;
}

Circuit build_ideal_oracle(int bits, const std::vector<std::uint64_t>& marked) {
  if (bits < 1 || bits > 62) {
    throw std::invalid_argument("build_ideal_oracle: bits out of range");
  }
  Circuit c;
  const std::uint32_t s = c.add_register("s", bits, RegKind::Input);
  const std::uint32_t y = c.add_register("y", 1, RegKind::Output);
  std::vector<std::uint32_t> ctrls(bits);
  std::iota(ctrls.begin(), ctrls.end(), s);
  for (std::uint64_t p : marked) {
    if (p >> bits) {
      throw std::invalid_argument("build_ideal_oracle: pattern out of range");
    }
    for (int b = 0; b < bits; ++b) {
      if (!((p >> b) & 1)) c.x(s + b);
    }
    c.mcx(ctrls, y);
    for (int b = 0; b < bits; ++b) {
      if (!((p >> b) & 1)) c.x(s + b);
    }
  }
  return c;
}

Circuit build_ideal_grover(int bits, const std::vector<std::uint64_t>& marked,
                           const Int& k) {
  if (k < 0 || !k.fits_ulong_p()) {
    throw std::invalid_argument("build_ideal_grover: bad iteration count");
  }
  const Circuit oracle = build_ideal_oracle(bits, marked);
  const Circuit diff = build_diffusion(bits);
  Circuit out(oracle.width());
  for (const QubitRegister& r : oracle.registers()) {
    out.declare_register(r.name, r.offset, r.width, r.kind);
  }
  const std::uint32_t y = bits;  // the flip wire sits after the inputs
  for (int b = 0; b < bits; ++b) out.h(b);
  out.x(y);
  out.h(y);
  const std::uint64_t reps = k.get_ui();
  for (std::uint64_t r = 0; r < reps; ++r) {
    for (std::size_t i = 0; i < oracle.size(); ++i) out.append(oracle.gate(i));
    for (std::size_t i = 0; i < diff.size(); ++i) out.append(diff.gate(i));
  }
  return out;
}

}  // namespace qsvp
