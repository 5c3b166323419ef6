#pragma once

// Integer lattice bases and the exact-arithmetic primitives built on them:
// Gram matrices, Gram-Schmidt data, projected blocks, dual bases, and the
// classical length estimates used when picking search thresholds.

#include <iosfwd>
#include <string>
#include <vector>

#include "qsvp/numeric.hpp"

namespace qsvp {

using IntVec = std::vector<Int>;
using IntMat = std::vector<IntVec>;   // row-major; rows are basis vectors
using RatVec = std::vector<Rat>;
using RatMat = std::vector<RatVec>;

// Exact Gram-Schmidt data for the rows of a rational matrix.
//   bstar[i]    : i-th orthogonalized row
//   mu[i][j]    : projection coefficients (j <= i; mu[i][i] == 1)
//   norms_sq[i] : squared length of bstar[i]
struct GramSchmidtData {
  RatMat bstar;
  RatMat mu;
  RatVec norms_sq;
};

GramSchmidtData gram_schmidt_rows(const RatMat& rows);

// A full-row-rank integer basis: n rows spanning a rank-n lattice in Z^m.
class LatticeBasis {
 public:
  // Throws std::invalid_argument if rows is empty, ragged, has more rows
  // than columns, or is rank-deficient.
  explicit LatticeBasis(IntMat rows);

  int rank() const { return static_cast<int>(rows_.size()); }
  int ambient_dim() const { return static_cast<int>(rows_[0].size()); }
  const IntMat& rows() const { return rows_; }
  const IntVec& row(int i) const { return rows_[i]; }

  // G = B B^T, symmetric positive definite, n x n.
  IntMat gram_matrix() const;

  // det(G) > 0; the squared volume of the lattice.
  Int gram_det() const;

  // |x B|^2 for integer coefficients x (size n).
  Int vector_length_sq(const IntVec& coeff) const;

  // The lattice vector x B itself (length m).
  IntVec vector(const IntVec& coeff) const;

  GramSchmidtData gram_schmidt() const;

 private:
  IntMat rows_;
};

// Rows pi_i(b_i), ..., pi_i(b_{j-1}): the block [i, j) projected onto the
// orthogonal complement of b_1..b_{i-1}.  Indices are 1-based and half-open,
// so project(basis, gs, 1, n+1) returns the basis itself.
RatMat project(const LatticeBasis& basis, const GramSchmidtData& gs, int i,
               int j);

// Gaussian-heuristic estimate of the shortest length:
//   gh = sqrt(n / (2 pi e)) * vol(L)^(1/n),  vol(L) = sqrt(det G).
// det G is evaluated as the exact product of Gram-Schmidt norms and rooted at
// >= `frac_bits` fractional bits before the final double conversion.
double gaussian_heuristic(const LatticeBasis& basis, unsigned frac_bits = 64);

// Same estimate from an explicit Gram determinant of an n-dim lattice.
double gaussian_heuristic_from_det(const Rat& gram_det, int n,
                                   unsigned frac_bits = 64);

// Minkowski bound sqrt(n) * vol(L)^(1/n): a guaranteed upper bound on the
// shortest length.
double minkowski_bound(const LatticeBasis& basis, unsigned frac_bits = 64);

// Dual basis (B B^T)^{-1} B; row i has inner product delta_ij with row j of
// the primal.  Exact rational output.
RatMat dual_basis(const LatticeBasis& basis);

// Squared Euclidean norms of the dual rows, exact.
RatVec dual_row_norms_sq(const LatticeBasis& basis);

// Text serialization.
//
//   # optional comment lines
//   n m
//   b_11 ... b_1m
//   ...
//
// Entries are arbitrary-precision decimal integers; write-then-read is a
// bit-exact round trip.
LatticeBasis read_basis(std::istream& in);
LatticeBasis read_basis_file(const std::string& path);
void write_basis(std::ostream& out, const LatticeBasis& basis);
std::string basis_to_string(const LatticeBasis& basis);

Rat dot(const RatVec& a, const RatVec& b);
Int dot(const IntVec& a, const IntVec& b);

// Gram matrix of arbitrary rational rows (used for projected blocks).
RatMat gram_matrix_rows(const RatMat& rows);

// Exact determinant of a rational square matrix by fraction-free elimination.
Rat det_rat(RatMat a);

// Diagonal of the inverse Gram matrix of the given rows: squared dual-row
// norms.  Throws std::invalid_argument on dependent rows.
RatVec dual_norms_sq_rows(const RatMat& rows);

}  // namespace qsvp
