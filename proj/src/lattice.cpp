#include "qsvp/lattice.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace qsvp {

Rat dot(const RatVec& a, const RatVec& b) {
  Rat s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Int dot(const IntVec& a, const IntVec& b) {
  Int s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

GramSchmidtData gram_schmidt_rows(const RatMat& rows) {
  GramSchmidtData gs;
  const size_t n = rows.size();
  gs.bstar.assign(n, RatVec());
  gs.mu.assign(n, RatVec(n, Rat(0)));
  gs.norms_sq.assign(n, Rat(0));
  for (size_t i = 0; i < n; ++i) {
    RatVec star = rows[i];
    for (size_t j = 0; j < i; ++j) {
      if (gs.norms_sq[j] == 0) continue;  // dependent earlier row
      Rat m = dot(rows[i], gs.bstar[j]) / gs.norms_sq[j];
      gs.mu[i][j] = m;
      if (m != 0) {
        for (size_t t = 0; t < star.size(); ++t) star[t] -= m * gs.bstar[j][t];
      }
    }
    gs.mu[i][i] = 1;
    gs.bstar[i] = star;
    gs.norms_sq[i] = dot(star, star);
  }
  return gs;
}

LatticeBasis::LatticeBasis(IntMat rows) : rows_(std::move(rows)) {
  if (rows_.empty()) throw std::invalid_argument("basis: no rows");
  const size_t m = rows_[0].size();
  if (m == 0) throw std::invalid_argument("basis: empty row");
  for (const auto& r : rows_) {
    if (r.size() != m) throw std::invalid_argument("basis: ragged rows");
  }
  if (rows_.size() > m) {
    throw std::invalid_argument("basis: more rows than ambient dimension");
  }
  RatMat rr(rows_.size());
  for (size_t i = 0; i < rows_.size(); ++i) {
    rr[i].assign(rows_[i].begin(), rows_[i].end());
  }
  GramSchmidtData gs = gram_schmidt_rows(rr);
  for (const Rat& ns : gs.norms_sq) {
    if (ns == 0) throw std::invalid_argument("basis: rank-deficient rows");
  }
}

IntMat LatticeBasis::gram_matrix() const {
  const int n = rank();
  IntMat g(n, IntVec(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      g[i][j] = dot(rows_[i], rows_[j]);
      g[j][i] = g[i][j];
    }
  }
  return g;
}

namespace {

// Bareiss fraction-free determinant of an integer matrix.
Int det_bareiss(IntMat a) {
  const size_t n = a.size();
  Int sign = 1;
  Int prev = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      size_t p = k + 1;
      while (p < n && a[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(a[k], a[p]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i) {
      for (size_t j = k + 1; j < n; ++j) {
        Int num = a[i][j] * a[k][k] - a[i][k] * a[k][j];
        mpz_divexact(a[i][j].get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
      }
      a[i][k] = 0;
    }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

}  // namespace

Int LatticeBasis::gram_det() const { return det_bareiss(gram_matrix()); }

IntVec LatticeBasis::vector(const IntVec& coeff) const {
  if (coeff.size() != rows_.size()) {
    throw std::invalid_argument("vector: coefficient count != rank");
  }
  IntVec v(ambient_dim(), Int(0));
  for (size_t i = 0; i < rows_.size(); ++i) {
    if (coeff[i] == 0) continue;
    for (size_t t = 0; t < v.size(); ++t) v[t] += coeff[i] * rows_[i][t];
  }
  return v;
}

Int LatticeBasis::vector_length_sq(const IntVec& coeff) const {
  IntVec v = vector(coeff);
  return dot(v, v);
}

GramSchmidtData LatticeBasis::gram_schmidt() const {
  RatMat rr(rows_.size());
  for (size_t i = 0; i < rows_.size(); ++i) {
    rr[i].assign(rows_[i].begin(), rows_[i].end());
  }
  return gram_schmidt_rows(rr);
}

RatMat project(const LatticeBasis& basis, const GramSchmidtData& gs, int i,
               int j) {
  const int n = basis.rank();
  if (i < 1 || j < i || j > n + 1) {
    throw std::invalid_argument("project: bad block indices");
  }
  RatMat out;
  out.reserve(j - i);
  for (int r = i - 1; r < j - 1; ++r) {
    // pi_i(b_r) = bstar_r + sum_{i-1 <= s < r} mu[r][s] * bstar_s
    RatVec v = gs.bstar[r];
    for (int s = i - 1; s < r; ++s) {
      const Rat& m = gs.mu[r][s];
      if (m == 0) continue;
      for (size_t t = 0; t < v.size(); ++t) v[t] += m * gs.bstar[s][t];
    }
    out.push_back(std::move(v));
  }
  return out;
}

double gaussian_heuristic_from_det(const Rat& gram_det, int n,
                                   unsigned frac_bits) {
  if (n < 1 || gram_det <= 0) {
    throw std::invalid_argument("gaussian_heuristic: need n >= 1, det > 0");
  }
  // vol^(1/n) = det(G)^(1/(2n))
  double root = root_hp(gram_det, 2 * static_cast<unsigned>(n), frac_bits);
  double factor = std::sqrt(n / (2.0 * M_PI * std::exp(1.0)));
  return factor * root;
}

double gaussian_heuristic(const LatticeBasis& basis, unsigned frac_bits) {
  GramSchmidtData gs = basis.gram_schmidt();
  Rat det = 1;
  for (const Rat& ns : gs.norms_sq) det *= ns;
  return gaussian_heuristic_from_det(det, basis.rank(), frac_bits);
}

double minkowski_bound(const LatticeBasis& basis, unsigned frac_bits) {
  GramSchmidtData gs = basis.gram_schmidt();
  Rat det = 1;
  for (const Rat& ns : gs.norms_sq) det *= ns;
  const int n = basis.rank();
  double root = root_hp(det, 2 * static_cast<unsigned>(n), frac_bits);
  return std::sqrt(static_cast<double>(n)) * root;
}

RatMat gram_matrix_rows(const RatMat& rows) {
  const size_t n = rows.size();
  RatMat g(n, RatVec(n));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j <= i; ++j) {
      g[i][j] = dot(rows[i], rows[j]);
      g[j][i] = g[i][j];
    }
  }
  return g;
}

Rat det_rat(RatMat a) {
  const size_t n = a.size();
  Rat det = 1;
  for (size_t k = 0; k < n; ++k) {
    size_t p = k;
    while (p < n && a[p][k] == 0) ++p;
    if (p == n) return 0;
    if (p != k) {
      std::swap(a[k], a[p]);
      det = -det;
    }
    det *= a[k][k];
    Rat inv = 1 / a[k][k];
    for (size_t i = k + 1; i < n; ++i) {
      if (a[i][k] == 0) continue;
      Rat f = a[i][k] * inv;
      for (size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
    }
  }
  return det;
}

namespace {

// Solves G X = I for symmetric positive definite rational G, returning X.
RatMat invert_rat(RatMat g) {
  const size_t n = g.size();
  RatMat inv(n, RatVec(n, Rat(0)));
  for (size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (size_t k = 0; k < n; ++k) {
    size_t p = k;
    while (p < n && g[p][k] == 0) ++p;
    if (p == n) throw std::invalid_argument("invert: singular matrix");
    if (p != k) {
      std::swap(g[k], g[p]);
      std::swap(inv[k], inv[p]);
    }
    Rat piv = g[k][k];
    for (size_t j = 0; j < n; ++j) {
      g[k][j] /= piv;
      inv[k][j] /= piv;
    }
    for (size_t i = 0; i < n; ++i) {
      if (i == k || g[i][k] == 0) continue;
      Rat f = g[i][k];
      for (size_t j = 0; j < n; ++j) {
        g[i][j] -= f * g[k][j];
        inv[i][j] -= f * inv[k][j];
      }
    }
  }
  return inv;
}

}  // namespace

RatMat dual_basis(const LatticeBasis& basis) {
  const int n = basis.rank();
  const int m = basis.ambient_dim();
  RatMat g(n, RatVec(n));
  IntMat gi = basis.gram_matrix();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) g[i][j] = Rat(gi[i][j]);
  }
  RatMat ginv = invert_rat(std::move(g));
  RatMat dual(n, RatVec(m, Rat(0)));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (ginv[i][j] == 0) continue;
      for (int t = 0; t < m; ++t) dual[i][t] += ginv[i][j] * basis.row(j)[t];
    }
  }
  return dual;
}

RatVec dual_row_norms_sq(const LatticeBasis& basis) {
  RatMat dual = dual_basis(basis);
  RatVec out(dual.size());
  for (size_t i = 0; i < dual.size(); ++i) out[i] = dot(dual[i], dual[i]);
  return out;
}

RatVec dual_norms_sq_rows(const RatMat& rows) {
  RatMat ginv = invert_rat(gram_matrix_rows(rows));
  RatVec out(rows.size());
  for (size_t i = 0; i < rows.size(); ++i) out[i] = ginv[i][i];
  return out;
}

LatticeBasis read_basis(std::istream& in) {
  std::string line;
  auto next_data_line = [&](std::string& out) -> bool {
    while (std::getline(in, line)) {
      size_t pos = line.find_first_not_of(" \t\r\n");
      if (pos == std::string::npos) continue;
      if (line[pos] == '#') continue;
      out = line;
      return true;
    }
    return false;
  };
  std::string header;
  if (!next_data_line(header)) {
    throw std::invalid_argument("basis input: missing header line");
  }
  std::istringstream hs(header);
  long n = 0, m = 0;
  if (!(hs >> n >> m) || n < 1 || m < 1) {
    throw std::invalid_argument("basis input: header must be 'n m'");
  }
  IntMat rows;
  rows.reserve(n);
  for (long i = 0; i < n; ++i) {
    std::string row_line;
    if (!next_data_line(row_line)) {
      throw std::invalid_argument("basis input: expected " + std::to_string(n) +
                                  " rows");
    }
    std::istringstream rs(row_line);
    IntVec row;
    row.reserve(m);
    std::string tok;
    while (rs >> tok) {
      try {
        row.emplace_back(tok);
      } catch (const std::invalid_argument&) {
        throw std::invalid_argument("basis input: bad integer '" + tok + "'");
      }
    }
    if (static_cast<long>(row.size()) != m) {
      throw std::invalid_argument("basis input: row " + std::to_string(i + 1) +
                                  " has " + std::to_string(row.size()) +
                                  " entries, expected " + std::to_string(m));
    }
    rows.push_back(std::move(row));
  }
  return LatticeBasis(std::move(rows));
}

LatticeBasis read_basis_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open basis file: " + path);
  return read_basis(f);
}

void write_basis(std::ostream& out, const LatticeBasis& basis) {
  out << basis.rank() << ' ' << basis.ambient_dim() << '\n';
  for (const auto& row : basis.rows()) {
    for (size_t t = 0; t < row.size(); ++t) {
      if (t) out << ' ';
      out << row[t].get_str();
    }
    out << '\n';
  }
}

std::string basis_to_string(const LatticeBasis& basis) {
  std::ostringstream os;
  write_basis(os, basis);
  return os.str();
}

}  // namespace qsvp
