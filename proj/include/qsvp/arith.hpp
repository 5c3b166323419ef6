#pragma once

// Reversible integer arithmetic blocks over the circuit IR: ripple adders
// and subtractors, a controlled add/subtract, in-place constant addition,
// signed constant multiplication, squaring, balanced summation trees, and a
// threshold comparator.  Each standalone builder returns a circuit whose
// interface registers are named; the emit_* forms append the same logic
// into an existing circuit on caller-chosen wires.
//
// Conventions: registers are little-endian two's complement unless stated
// otherwise; "a" operands are read-only (restored by the time the block
// ends).  The emit_* blocks draw scratch from a ScratchPool and hand every
// wire back zeroed, so deep pipelines reuse a constant amount of scratch
// instead of accumulating it.

#include <cstdint>
#include <string>
#include <vector>

#include "qsvp/circuit.hpp"
#include "qsvp/numeric.hpp"

namespace qsvp {

using WireVec = std::vector<std::uint32_t>;

// Zero-initialized wire supply with a free list.  acquire() prefers wires
// released earlier (they are guaranteed zero again), and appends fresh
// registers to the circuit only when the free list runs dry.
class ScratchPool {
 public:
  explicit ScratchPool(Circuit& c) : c_(&c) {}

  WireVec acquire(int count, const std::string& tag, RegKind kind);

  // Returns wires for reuse.  The caller guarantees they are zero again;
  // releasing a wire twice throws std::logic_error.
  void release(const WireVec& wires);

  std::size_t available() const { return free_.size(); }

 private:
  Circuit* c_;
  WireVec free_;
  int serial_ = 0;
};

// b += a (mod 2^W), W = b_bits.size().  a_bits.size() <= W; missing high
// addend bits replicate the top a-wire when sign_extend is true
// (two's-complement extension) and read zero otherwise.  Ripple scheme with
// the carry riding on the addend wires (majority/unmajority ladder); one
// scratch wire plus any extension wires, all restored and released.
void emit_add(Circuit& c, const WireVec& a_bits, const WireVec& b_bits,
              bool sign_extend, ScratchPool& pool);

// b -= a (mod 2^W): complement-conjugated addition, same shape and scratch
// behavior as emit_add.
void emit_sub(Circuit& c, const WireVec& a_bits, const WireVec& b_bits,
              bool sign_extend, ScratchPool& pool);

// bits += k (mod 2^W), W = bits.size(), for a classical constant k >= 0
// (reduced mod 2^W).  The constant is materialized in a recycled register.
void emit_const_add(Circuit& c, const Int& k, const WireVec& bits,
                    ScratchPool& pool);

// out = x * k for signed x and classical k; out_bits.size() must equal
// x_bits.size() + bitlen(|k|) and out must be zero on entry.  k == 0 emits
// nothing.
void emit_const_multiplier(Circuit& c, const Int& k, const WireVec& x_bits,
                           const WireVec& out_bits, ScratchPool& pool);

// out = s^2 for signed s; out_bits.size() == 2 * s_bits.size(), out zero on
// entry.  The partial-product mask register is restored and released.
void emit_squarer(Circuit& c, const WireVec& s_bits, const WireVec& out_bits,
                  ScratchPool& pool);

// Flips y iff v <= tau, treating v as unsigned; 0 <= tau <= 2^W - 1.  The
// borrow chain of v - (tau+1) is computed and then uncomputed, so all
// scratch (and v) is restored.  Gate count and scheduling are independent
// of tau's value except at tau == 2^W - 1, which appends one extra X.
void emit_leq_const(Circuit& c, const WireVec& v_bits, std::uint32_t y,
                    const Int& tau, ScratchPool& pool);

// |a>|b>|0> -> |a>|a+b mod 2^N>|carry>.  Registers: a, b (in place), carry
// (1 bit), w (N-1 dirty carry wires for N >= 2).  Quantum cost 13N-10 and
// ASAP depth 10N-4 for N >= 3.
Circuit build_adder(int width);

// |a>|b>|0> -> |a>|b-a mod 2^N>|sign>, sign set iff b - a < 0; (sign, b) is
// the (N+1)-bit two's-complement difference.  Registers: a, b, sign, w.
Circuit build_subtractor(int width);

// |ctrl>|a>|b>|0> -> control clear: adder semantics on (a, b, carry);
// control set: subtractor semantics (two's-complement negate-then-add).
// Registers: ctrl, a, b, carry, w (N-1 dirty wires).
Circuit build_ctrl_addsub(int width);

// |x>|0> -> |x>|x*k> with out width x_width + bitlen(|k|) (1 for k == 0).
// Registers: x, out, plus recycled scratch.
Circuit build_const_multiplier(const Int& k, int x_width);

// |s>|0> -> |s>|s^2> with out width 2 * width.  Registers: s, out, plus
// recycled mask and scratch.
Circuit build_squarer(int width);

// Sums k >= 2 unsigned operands in ceil(log2(k)) balanced layers of
// pairwise in-place adds.  Every operand register is allocated at width
// W = max(widths) + ceil(log2(k)); callers place values zero-padded.  The
// exact sum lands in register "op0".  Registers: op0..op{k-1}, scratch.
Circuit build_tree_sum(const std::vector<int>& operand_widths);

// Number of pairwise-add layers build_tree_sum uses for k operands.
int tree_sum_layers(int count);

// |v>|y> -> |v>|y xor [v <= tau]>.  Registers: v, y, b0 (constant zero),
// borrow (restored).  Throws std::invalid_argument if tau is negative or
// needs more than `width` bits.
Circuit build_leq_const(int width, const Int& tau);

}  // namespace qsvp
