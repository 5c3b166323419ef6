#pragma once

// Gate-level circuit IR: a flat gate list over indexed qubits, with named
// registers, resource metrics, inversion/composition, multi-controlled-X
// expansion, and a Clifford+T lowering.  Gates are stored in 16 bytes each;
// multi-controlled gates spill their operand list into a side pool.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qsvp/errors.hpp"

namespace qsvp {

enum class GateKind : std::uint8_t { X, H, Z, S, Sdg, T, Tdg, CX, CZ, CCX, MCX };

const char* gate_name(GateKind k);

enum class RegKind : std::uint8_t { Input, Ancilla, Output, ConstantZero };

const char* reg_kind_name(RegKind k);
RegKind reg_kind_from_name(const std::string& s);

struct QubitRegister {
  std::string name;
  std::uint32_t offset = 0;
  std::uint32_t width = 0;
  RegKind kind = RegKind::Ancilla;

  bool operator==(const QubitRegister&) const = default;
};

// Non-owning view of one gate.  For MCX, q[0..n-2] are controls and q[n-1]
// is the target; for every other kind the operand order is as listed in the
// builder (controls first, target last).
struct GateView {
  GateKind kind;
  const std::uint32_t* q;
  std::uint32_t n;
};

struct ResourceMetrics {
  std::uint64_t width = 0;
  std::uint64_t depth = 0;
  std::uint64_t quantum_cost = 0;
  std::uint64_t t_count = 0;
  std::uint64_t t_depth = 0;

  bool operator==(const ResourceMetrics&) const = default;
};

class Circuit {
 public:
  explicit Circuit(std::uint32_t width = 0) : width_(width) {}

  std::uint32_t width() const { return width_; }
  std::size_t size() const { return gates_.size(); }
  bool empty() const { return gates_.empty(); }
  GateView gate(std::size_t i) const;

  // Appends a fresh register at the current top of the index space and grows
  // the circuit width.  Returns the register's offset.
  std::uint32_t add_register(const std::string& name, std::uint32_t width,
                             RegKind kind);

  // Declares a register over an existing index range (used by the reader).
  void declare_register(const std::string& name, std::uint32_t offset,
                        std::uint32_t width, RegKind kind);

  const std::vector<QubitRegister>& registers() const { return registers_; }
  const QubitRegister* find_register(const std::string& name) const;

  void x(std::uint32_t q) { push1(GateKind::X, q); }
  void h(std::uint32_t q) { push1(GateKind::H, q); }
  void z(std::uint32_t q) { push1(GateKind::Z, q); }
  void s(std::uint32_t q) { push1(GateKind::S, q); }
  void sdg(std::uint32_t q) { push1(GateKind::Sdg, q); }
  void t(std::uint32_t q) { push1(GateKind::T, q); }
  void tdg(std::uint32_t q) { push1(GateKind::Tdg, q); }
  void cx(std::uint32_t c, std::uint32_t t) { push2(GateKind::CX, c, t); }
  void cz(std::uint32_t a, std::uint32_t b) { push2(GateKind::CZ, a, b); }
  void ccx(std::uint32_t a, std::uint32_t b, std::uint32_t t);

  // k controls; k <= 2 normalizes to X / CX / CCX.
  void mcx(const std::vector<std::uint32_t>& controls, std::uint32_t target);

  // Appends a copy of a gate (revalidated against this circuit's width).
  void append(const GateView& g);

  // True iff every gate is in {X, CX, CCX, MCX}.
  bool is_classical_reversible() const { return classical_; }

  void reserve(std::size_t n) { gates_.reserve(n); }

  bool operator==(const Circuit& other) const;

 private:
  struct Gate {
    GateKind kind;
    std::uint8_t nq;        // 1..3 inline; 0 = operands in pool[q[0]]
    std::uint32_t q[3];
  };

  void check_q(std::uint32_t q) const;
  void push1(GateKind k, std::uint32_t q);
  void push2(GateKind k, std::uint32_t a, std::uint32_t b);

  std::uint32_t width_;
  bool classical_ = true;
  std::vector<QubitRegister> registers_;
  std::vector<Gate> gates_;
  std::vector<std::vector<std::uint32_t>> pool_;
};

// a's gates followed by b's.  Width is the max of the two; register tables
// are merged, with exact duplicates collapsed and any other name or index
// clash reported as std::invalid_argument.
Circuit compose(const Circuit& a, const Circuit& b);

// Reversed gate order with S<->Sdg and T<->Tdg swapped; an involution.
Circuit inverse(const Circuit& c);

// Resource accounting.
//
//   quantum_cost : 1- and 2-qubit gates count 1; CCX counts 5; MCX with k
//                  controls counts (2(k-2)+1) * 5.
//   depth        : ASAP wire-clock depth after expanding CCX into its
//                  standard five-gate two-qubit pattern and MCX into its
//                  CCX chain over shared scratch wires.
//   t_count      : T/Tdg count after lowering; CCX contributes 7, MCX with
//                  k controls (2(k-2)+1) * 7.
//   t_depth      : number of T stages on the critical path: T/Tdg advance
//                  their wire by one stage, multi-qubit gates synchronize
//                  their wires, one CCX contributes three stages to all
//                  three wires; single-qubit Cliffords are free.
//
// Scratch wires for MCX expansion are virtual: they affect depth scheduling
// but not the reported width.
ResourceMetrics metrics(const Circuit& c);

// Replaces each MCX by its CCX chain over a clean scratch register.  If the
// circuit contains an MCX with k >= 3 controls, an ancilla register named
// "mcx_scratch" (width max(k)-2) is appended and the output width grows
// accordingly; otherwise the circuit is returned unchanged.
Circuit expand_mcx(const Circuit& c);

// Lowers to {X, CX, H, Z, S, Sdg, T, Tdg, CZ}: MCX via expand_mcx, then each
// CCX into a 7-T-gate, T-depth-3 Clifford+T network.
Circuit decompose_clifford_t(const Circuit& c);

// Text serialization:
//
//   qubits <width>
//   reg <name> <offset> <width> <input|ancilla|output|constant-zero>
//   <mnemonic> <qubit>...
//
// one gate per line, lowercase mnemonics, '#' starts a comment.  For mcx the
// qubit list is all controls followed by the target.  Write-then-read is a
// bit-exact round trip.
void write_circuit(std::ostream& out, const Circuit& c);
Circuit read_circuit(std::istream& in);
Circuit read_circuit_file(const std::string& path);
std::string circuit_to_string(const Circuit& c);
void write_circuit_file(const std::string& path, const Circuit& c);

}  // namespace qsvp
