#include "qsvp/circuit.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace qsvp {

const char* gate_name(GateKind k) {
  switch (k) {
    case GateKind::X: return "x";
    case GateKind::H: return "h";
    case GateKind::Z: return "z";
    case GateKind::S: return "s";
    case GateKind::Sdg: return "sdg";
    case GateKind::T: return "t";
    case GateKind::Tdg: return "tdg";
    case GateKind::CX: return "cx";
    case GateKind::CZ: return "cz";
    case GateKind::CCX: return "ccx";
    case GateKind::MCX: return "mcx";
  }
  return "?";
}

const char* reg_kind_name(RegKind k) {
  switch (k) {
    case RegKind::Input: return "input";
    case RegKind::Ancilla: return "ancilla";
    case RegKind::Output: return "output";
    case RegKind::ConstantZero: return "constant-zero";
  }
  return "?";
}

RegKind reg_kind_from_name(const std::string& s) {
  if (s == "input") return RegKind::Input;
  if (s == "ancilla") return RegKind::Ancilla;
  if (s == "output") return RegKind::Output;
  if (s == "constant-zero") return RegKind::ConstantZero;
  throw std::invalid_argument("unknown register kind: " + s);
}

GateView Circuit::gate(std::size_t i) const {
  const Gate& g = gates_[i];
  if (g.nq == 0) {
    const auto& ops = pool_[g.q[0]];
    return GateView{g.kind, ops.data(), static_cast<std::uint32_t>(ops.size())};
  }
  return GateView{g.kind, g.q, g.nq};
}

std::uint32_t Circuit::add_register(const std::string& name,
                                    std::uint32_t width, RegKind kind) {
  if (width == 0) throw std::invalid_argument("register needs width >= 1");
  if (find_register(name)) {
    throw std::invalid_argument("register name already declared: " + name);
  }
  std::uint32_t offset = width_;
  registers_.push_back(QubitRegister{name, offset, width, kind});
  width_ += width;
  return offset;
}

void Circuit::declare_register(const std::string& name, std::uint32_t offset,
                               std::uint32_t width, RegKind kind) {
  if (width == 0) throw std::invalid_argument("register needs width >= 1");
  if (offset + width > width_) {
    throw std::invalid_argument("register exceeds circuit width: " + name);
  }
  if (find_register(name)) {
    throw std::invalid_argument("register name already declared: " + name);
  }
  registers_.push_back(QubitRegister{name, offset, width, kind});
}

const QubitRegister* Circuit::find_register(const std::string& name) const {
  for (const auto& r : registers_) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

void Circuit::check_q(std::uint32_t q) const {
  if (q >= width_) {
    throw std::invalid_argument("gate references qubit " + std::to_string(q) +
                                " beyond width " + std::to_string(width_));
  }
}

void Circuit::push1(GateKind k, std::uint32_t q) {
  check_q(q);
  if (k != GateKind::X) classical_ = false;
  gates_.push_back(Gate{k, 1, {q, 0, 0}});
}

void Circuit::push2(GateKind k, std::uint32_t a, std::uint32_t b) {
  check_q(a);
  check_q(b);
  if (a == b) throw std::invalid_argument("2-qubit gate needs distinct qubits");
  if (k != GateKind::CX) classical_ = false;
  gates_.push_back(Gate{k, 2, {a, b, 0}});
}

void Circuit::ccx(std::uint32_t a, std::uint32_t b, std::uint32_t t) {
  check_q(a);
  check_q(b);
  check_q(t);
  if (a == b || a == t || b == t) {
    throw std::invalid_argument("ccx needs distinct qubits");
  }
  gates_.push_back(Gate{GateKind::CCX, 3, {a, b, t}});
}

void Circuit::mcx(const std::vector<std::uint32_t>& controls,
                  std::uint32_t target) {
  const std::size_t k = controls.size();
  if (k == 0) {
    x(target);
    return;
  }
  if (k == 1) {
    cx(controls[0], target);
    return;
  }
  if (k == 2) {
    ccx(controls[0], controls[1], target);
    return;
  }
  check_q(target);
  std::vector<std::uint32_t> ops(controls);
  ops.push_back(target);
  for (std::size_t i = 0; i < ops.size(); ++i) {
    check_q(ops[i]);
    for (std::size_t j = i + 1; j < ops.size(); ++j) {
      if (ops[i] == ops[j]) {
        throw std::invalid_argument("mcx needs distinct qubits");
      }
    }
  }
  pool_.push_back(std::move(ops));
  gates_.push_back(
      Gate{GateKind::MCX, 0,
           {static_cast<std::uint32_t>(pool_.size() - 1), 0, 0}});
}

void Circuit::append(const GateView& g) {
  switch (g.kind) {
    case GateKind::X: x(g.q[0]); break;
    case GateKind::H: h(g.q[0]); break;
    case GateKind::Z: z(g.q[0]); break;
    case GateKind::S: s(g.q[0]); break;
    case GateKind::Sdg: sdg(g.q[0]); break;
    case GateKind::T: t(g.q[0]); break;
    case GateKind::Tdg: tdg(g.q[0]); break;
    case GateKind::CX: cx(g.q[0], g.q[1]); break;
    case GateKind::CZ: cz(g.q[0], g.q[1]); break;
    case GateKind::CCX: ccx(g.q[0], g.q[1], g.q[2]); break;
    case GateKind::MCX: {
      std::vector<std::uint32_t> ctl(g.q, g.q + g.n - 1);
      mcx(ctl, g.q[g.n - 1]);
      break;
    }
  }
}

bool Circuit::operator==(const Circuit& other) const {
  if (width_ != other.width_ || registers_ != other.registers_ ||
      gates_.size() != other.gates_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < gates_.size(); ++i) {
    GateView a = gate(i);
    GateView b = other.gate(i);
    if (a.kind != b.kind || a.n != b.n) return false;
    if (!std::equal(a.q, a.q + a.n, b.q)) return false;
  }
  return true;
}

Circuit compose(const Circuit& a, const Circuit& b) {
  Circuit out(std::max(a.width(), b.width()));
  auto add_regs = [&out](const Circuit& src) {
    for (const auto& r : src.registers()) {
      const QubitRegister* existing = out.find_register(r.name);
      if (existing) {
        if (*existing == r) continue;
        throw std::invalid_argument("compose: register collision: " + r.name);
      }
      for (const auto& have : out.registers()) {
        bool overlap = r.offset < have.offset + have.width &&
                       have.offset < r.offset + r.width;
        if (overlap) {
          throw std::invalid_argument("compose: register collision: " +
                                      r.name + " overlaps " + have.name);
        }
      }
      out.declare_register(r.name, r.offset, r.width, r.kind);
    }
  };
  add_regs(a);
  add_regs(b);
  for (std::size_t i = 0; i < a.size(); ++i) out.append(a.gate(i));
  for (std::size_t i = 0; i < b.size(); ++i) out.append(b.gate(i));
  return out;
}

Circuit inverse(const Circuit& c) {
  Circuit out(c.width());
  for (const auto& r : c.registers()) {
    out.declare_register(r.name, r.offset, r.width, r.kind);
  }
  for (std::size_t i = c.size(); i-- > 0;) {
    GateView g = c.gate(i);
    GateKind k = g.kind;
    if (k == GateKind::S) k = GateKind::Sdg;
    else if (k == GateKind::Sdg) k = GateKind::S;
    else if (k == GateKind::T) k = GateKind::Tdg;
    else if (k == GateKind::Tdg) k = GateKind::T;
    out.append(GateView{k, g.q, g.n});
  }
  return out;
}

namespace {

// Enumerates the CCX chain realizing an MCX with k >= 3 controls using
// k-2 clean scratch wires starting at scratch_base.
template <typename F>
void for_each_mcx_ccx(const std::uint32_t* ctl, std::uint32_t k,
                      std::uint32_t target, std::uint32_t scratch_base,
                      F&& visit) {
  visit(ctl[0], ctl[1], scratch_base);
  for (std::uint32_t i = 2; i + 1 < k; ++i) {
    visit(ctl[i], scratch_base + i - 2, scratch_base + i - 1);
  }
  visit(ctl[k - 1], scratch_base + k - 3, target);
  for (std::uint32_t i = k - 1; i-- > 2;) {
    visit(ctl[i], scratch_base + i - 2, scratch_base + i - 1);
  }
  visit(ctl[0], ctl[1], scratch_base);
}

std::uint32_t max_mcx_controls(const Circuit& c) {
  std::uint32_t mk = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    GateView g = c.gate(i);
    if (g.kind == GateKind::MCX) mk = std::max(mk, g.n - 1);
  }
  return mk;
}

std::string fresh_register_name(const Circuit& c, const std::string& base) {
  if (!c.find_register(base)) return base;
  for (int i = 1;; ++i) {
    std::string name = base + "_" + std::to_string(i);
    if (!c.find_register(name)) return name;
  }
}

}  // namespace

ResourceMetrics metrics(const Circuit& c) {
  const std::uint32_t mk = max_mcx_controls(c);
  const std::uint32_t vwidth = c.width() + (mk >= 3 ? mk - 2 : 0);
  std::vector<std::uint64_t> clock(vwidth, 0);
  std::vector<std::uint64_t> tclock(vwidth, 0);
  std::uint64_t cost = 0;
  std::uint64_t tcount = 0;

  auto op1 = [&](std::uint32_t q) { ++clock[q]; };
  auto op2 = [&](std::uint32_t a, std::uint32_t b) {
    std::uint64_t m = std::max(clock[a], clock[b]) + 1;
    clock[a] = clock[b] = m;
  };
  auto sync_t2 = [&](std::uint32_t a, std::uint32_t b) {
    std::uint64_t m = std::max(tclock[a], tclock[b]);
    tclock[a] = tclock[b] = m;
  };
  auto ccx_acc = [&](std::uint32_t x, std::uint32_t y, std::uint32_t z) {
    cost += 5;
    tcount += 7;
    op2(y, z);
    op2(x, y);
    op2(y, z);
    op2(x, y);
    op2(x, z);
    std::uint64_t m =
        std::max(tclock[x], std::max(tclock[y], tclock[z])) + 3;
    tclock[x] = tclock[y] = tclock[z] = m;
  };

  for (std::size_t i = 0; i < c.size(); ++i) {
    GateView g = c.gate(i);
    switch (g.kind) {
      case GateKind::X:
      case GateKind::H:
      case GateKind::Z:
      case GateKind::S:
      case GateKind::Sdg:
        op1(g.q[0]);
        ++cost;
        break;
      case GateKind::T:
      case GateKind::Tdg:
        op1(g.q[0]);
        ++cost;
        ++tcount;
        ++tclock[g.q[0]];
        break;
      case GateKind::CX:
      case GateKind::CZ:
        op2(g.q[0], g.q[1]);
        ++cost;
        sync_t2(g.q[0], g.q[1]);
        break;
      case GateKind::CCX:
        ccx_acc(g.q[0], g.q[1], g.q[2]);
        break;
      case GateKind::MCX:
        for_each_mcx_ccx(g.q, g.n - 1, g.q[g.n - 1], c.width(), ccx_acc);
        break;
    }
  }

  ResourceMetrics m;
  m.width = c.width();
  m.quantum_cost = cost;
  m.t_count = tcount;
  for (std::uint64_t v : clock) m.depth = std::max(m.depth, v);
  for (std::uint64_t v : tclock) m.t_depth = std::max(m.t_depth, v);
  return m;
}

Circuit expand_mcx(const Circuit& c) {
  const std::uint32_t mk = max_mcx_controls(c);
  if (mk < 3) return c;
  Circuit out(c.width());
  for (const auto& r : c.registers()) {
    out.declare_register(r.name, r.offset, r.width, r.kind);
  }
  const std::uint32_t scratch_base = out.add_register(
      fresh_register_name(c, "mcx_scratch"), mk - 2, RegKind::Ancilla);
  for (std::size_t i = 0; i < c.size(); ++i) {
    GateView g = c.gate(i);
    if (g.kind != GateKind::MCX) {
      out.append(g);
      continue;
    }
    for_each_mcx_ccx(g.q, g.n - 1, g.q[g.n - 1], scratch_base,
                     [&out](std::uint32_t a, std::uint32_t b,
                            std::uint32_t t) { out.ccx(a, b, t); });
  }
  return out;
}

Circuit decompose_clifford_t(const Circuit& input) {
  Circuit c = expand_mcx(input);
  Circuit out(c.width());
  for (const auto& r : c.registers()) {
    out.declare_register(r.name, r.offset, r.width, r.kind);
  }
  for (std::size_t i = 0; i < c.size(); ++i) {
    GateView g = c.gate(i);
    if (g.kind != GateKind::CCX) {
      out.append(g);
      continue;
    }
    // CCZ phase network on (a, b, c), conjugated by H on the target: seven
    // T gates in three stages, eight CX.
    const std::uint32_t a = g.q[0], b = g.q[1], t = g.q[2];
    out.h(t);
    out.t(a);
    out.t(b);
    out.t(t);
    out.cx(a, b);
    out.cx(b, t);
    out.cx(t, a);
    out.tdg(a);
    out.tdg(b);
    out.t(t);
    out.cx(b, a);
    out.tdg(a);
    out.cx(b, a);
    out.cx(t, a);
    out.cx(b, t);
    out.cx(a, b);
    out.h(t);
  }
  return out;
}

void write_circuit(std::ostream& out, const Circuit& c) {
  out << "qubits " << c.width() << '\n';
  for (const auto& r : c.registers()) {
    out << "reg " << r.name << ' ' << r.offset << ' ' << r.width << ' '
        << reg_kind_name(r.kind) << '\n';
  }
  for (std::size_t i = 0; i < c.size(); ++i) {
    GateView g = c.gate(i);
    out << gate_name(g.kind);
    for (std::uint32_t j = 0; j < g.n; ++j) out << ' ' << g.q[j];
    out << '\n';
  }
}

Circuit read_circuit(std::istream& in) {
  std::string line;
  bool have_width = false;
  Circuit c;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;
    auto fail = [&](const std::string& msg) {
      throw std::invalid_argument("circuit input line " +
                                  std::to_string(lineno) + ": " + msg);
    };
    if (word == "qubits") {
      if (have_width) fail("duplicate qubits line");
      std::uint32_t w = 0;
      if (!(ls >> w)) fail("expected width");
      c = Circuit(w);
      have_width = true;
      continue;
    }
    if (!have_width) fail("first line must be 'qubits <width>'");
    if (word == "reg") {
      std::string name, kind;
      std::uint32_t offset = 0, width = 0;
      if (!(ls >> name >> offset >> width >> kind)) fail("bad reg line");
      c.declare_register(name, offset, width, reg_kind_from_name(kind));
      continue;
    }
    std::vector<std::uint32_t> qs;
    std::uint32_t q;
    while (ls >> q) qs.push_back(q);
    auto need = [&](std::size_t n) {
      if (qs.size() != n) fail("gate '" + word + "' needs " +
                               std::to_string(n) + " qubits");
    };
    if (word == "x") { need(1); c.x(qs[0]); }
    else if (word == "h") { need(1); c.h(qs[0]); }
    else if (word == "z") { need(1); c.z(qs[0]); }
    else if (word == "s") { need(1); c.s(qs[0]); }
    else if (word == "sdg") { need(1); c.sdg(qs[0]); }
    else if (word == "t") { need(1); c.t(qs[0]); }
    else if (word == "tdg") { need(1); c.tdg(qs[0]); }
    else if (word == "cx") { need(2); c.cx(qs[0], qs[1]); }
    else if (word == "cz") { need(2); c.cz(qs[0], qs[1]); }
    else if (word == "ccx") { need(3); c.ccx(qs[0], qs[1], qs[2]); }
    else if (word == "mcx") {
      if (qs.size() < 2) fail("mcx needs at least 2 qubits");
      std::uint32_t target = qs.back();
      qs.pop_back();
      c.mcx(qs, target);
    } else {
      fail("unknown gate '" + word + "'");
    }
  }
  if (!have_width) {
    throw std::invalid_argument("circuit input: missing 'qubits' line");
  }
  return c;
}

Circuit read_circuit_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open circuit file: " + path);
  return read_circuit(f);
}

std::string circuit_to_string(const Circuit& c) {
  std::ostringstream os;
  write_circuit(os, c);
  return os.str();
}

void write_circuit_file(const std::string& path, const Circuit& c) {
  std::ofstream f(path);
  if (!f) throw std::invalid_argument("cannot open for write: " + path);
  write_circuit(f, c);
}

}  // namespace qsvp
