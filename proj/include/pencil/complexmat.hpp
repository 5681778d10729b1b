#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "pencil/errors.hpp"
#include "pencil/rng.hpp"

namespace pencil {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

// ---------------------------------------------------------------------------
// Vector helpers.  Inner products are linear in the FIRST slot and conjugate
// linear in the second: inner(u, v) = sum_i u_i * conj(v_i).
// ---------------------------------------------------------------------------

inline cplx inner(const CVec& u, const CVec& v) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * std::conj(v[i]);
  return s;
}

// Real part of inner(u, v): the Euclidean inner product of C^n viewed as R^2n.
inline double rdot(const CVec& u, const CVec& v) { return inner(u, v).real(); }

inline double norm2(const CVec& u) {
  double s = 0.0;
  for (const cplx& c : u) s += std::norm(c);
  return s;
}

inline double vnorm(const CVec& u) { return std::sqrt(norm2(u)); }

inline void scale_in_place(CVec& u, cplx a) {
  for (cplx& c : u) c *= a;
}

inline CVec scaled(const CVec& u, cplx a) {
  CVec r = u;
  scale_in_place(r, a);
  return r;
}

// u += a * v
inline void axpy(CVec& u, cplx a, const CVec& v) {
  for (std::size_t i = 0; i < u.size(); ++i) u[i] += a * v[i];
}

inline CVec vadd(const CVec& u, const CVec& v) {
  CVec r = u;
  axpy(r, 1.0, v);
  return r;
}

inline CVec vsub(const CVec& u, const CVec& v) {
  CVec r = u;
  axpy(r, -1.0, v);
  return r;
}

// Returns u / ||u||.  Throws BAD_INPUT on (numerically) zero vectors.
inline CVec normalized(const CVec& u) {
  double n = vnorm(u);
  if (!(n > 0.0) || !std::isfinite(n)) fail(ErrorCode::BAD_INPUT, "cannot normalize zero/non-finite vector");
  return scaled(u, 1.0 / n);
}

inline CVec random_unit_vector(Rng& rng, std::size_t n) {
  CVec v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = cplx(rng.gaussian(), rng.gaussian());
  return normalized(v);
}

// Phase-invariant separation in [0, 1]: 0 iff x ~ e^{i t} y for unit vectors.
inline double phase_distance(const CVec& x, const CVec& y) {
  double c = std::abs(inner(x, y));
  double nx = vnorm(x), ny = vnorm(y);
  if (nx == 0.0 || ny == 0.0) return 1.0;
  double r = 1.0 - c / (nx * ny);
  return r < 0.0 ? 0.0 : r;
}

// ---------------------------------------------------------------------------
// HermitianMatrix: immutable dense Hermitian matrix.  Construction symmetrizes
// tiny asymmetries and rejects anything worse than a relative deviation of
// 1e-12 in max-abs-entry scale.
// ---------------------------------------------------------------------------

class HermitianMatrix {
 public:
  HermitianMatrix() : n_(0) {}

  // Raw row-major data; must be n*n entries.
  HermitianMatrix(std::size_t n, std::vector<cplx> data) : n_(n), a_(std::move(data)) {
    if (a_.size() != n_ * n_) fail(ErrorCode::DIM_MISMATCH, "matrix data size != n*n");
    double scale = 0.0;
    for (const cplx& c : a_) scale = std::max(scale, std::max(std::abs(c.real()), std::abs(c.imag())));
    double worst = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = i; j < n_; ++j) {
        cplx d = a_[i * n_ + j] - std::conj(a_[j * n_ + i]);
        worst = std::max(worst, std::abs(d));
      }
    }
    if (worst > 1e-12 * std::max(scale, 1e-300))
      fail(ErrorCode::NOT_HERMITIAN, "matrix deviates from Hermitian symmetry");
    // Exact symmetrization: diagonal made real, off-diagonal averaged.
    for (std::size_t i = 0; i < n_; ++i) {
      a_[i * n_ + i] = cplx(a_[i * n_ + i].real(), 0.0);
      for (std::size_t j = i + 1; j < n_; ++j) {
        cplx m = 0.5 * (a_[i * n_ + j] + std::conj(a_[j * n_ + i]));
        a_[i * n_ + j] = m;
        a_[j * n_ + i] = std::conj(m);
      }
    }
  }

  static HermitianMatrix zero(std::size_t n) { return HermitianMatrix(n, std::vector<cplx>(n * n, 0.0)); }

  static HermitianMatrix identity(std::size_t n) {
    std::vector<cplx> d(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) d[i * n + i] = 1.0;
    return HermitianMatrix(n, std::move(d));
  }

  static HermitianMatrix diag(const std::vector<double>& dv) {
    std::size_t n = dv.size();
    std::vector<cplx> d(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) d[i * n + i] = dv[i];
    return HermitianMatrix(n, std::move(d));
  }

  std::size_t dim() const { return n_; }
  cplx operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  const std::vector<cplx>& data() const { return a_; }

  // y = M x
  CVec apply(const CVec& x) const {
    if (x.size() != n_) fail(ErrorCode::DIM_MISMATCH, "apply: vector dim mismatch");
    CVec y(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
      cplx s = 0.0;
      const cplx* row = a_.data() + i * n_;
      for (std::size_t j = 0; j < n_; ++j) s += row[j] * x[j];
      y[i] = s;
    }
    return y;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const cplx& c : a_) s += std::norm(c);
    return std::sqrt(s);
  }

  double max_abs_entry() const {
    double s = 0.0;
    for (const cplx& c : a_) s = std::max(s, std::abs(c));
    return s;
  }

  HermitianMatrix plus(const HermitianMatrix& other, double coeff = 1.0) const {
    if (other.n_ != n_) fail(ErrorCode::DIM_MISMATCH, "plus: dim mismatch");
    std::vector<cplx> d = a_;
    for (std::size_t i = 0; i < d.size(); ++i) d[i] += coeff * other.a_[i];
    return HermitianMatrix(n_, std::move(d));
  }

  HermitianMatrix times(double c) const {
    std::vector<cplx> d = a_;
    for (cplx& e : d) e *= c;
    return HermitianMatrix(n_, std::move(d));
  }

 private:
  std::size_t n_;
  std::vector<cplx> a_;
};

// Columns of a (not necessarily unitary) matrix, used for basis changes.
using ColumnMatrix = std::vector<CVec>;

// Returns U with orthonormal columns obtained from seeded complex Gaussians by
// modified Gram-Schmidt.
inline ColumnMatrix random_unitary(Rng& rng, std::size_t n) {
  ColumnMatrix cols;
  cols.reserve(n);
  while (cols.size() < n) {
    CVec v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = cplx(rng.gaussian(), rng.gaussian());
    for (const CVec& u : cols) axpy(v, -inner(v, u), u);
    double nv = vnorm(v);
    if (nv < 1e-8) continue;  // essentially impossible; redraw
    scale_in_place(v, 1.0 / nv);
    cols.push_back(std::move(v));
  }
  return cols;
}

// B' = U B U^*  for U given by columns (so B'_{ij} = <B u_j, u_i> conjugated
// appropriately).  Used to hide the structure of generated instances.
inline HermitianMatrix conjugate_by(const HermitianMatrix& b, const ColumnMatrix& u_cols) {
  std::size_t n = b.dim();
  if (u_cols.size() != n) fail(ErrorCode::DIM_MISMATCH, "conjugate_by: dim mismatch");
  // M = U (B U^*) with u_cols[c][r] = U_{rc}.
  // T = B U^*: T_{kj} = sum_l B_{kl} conj(U_{jl}) = sum_l B_{kl} conj(u_cols[l][j])
  std::vector<cplx> t(n * n, 0.0);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < n; ++j) {
      cplx s = 0.0;
      for (std::size_t l = 0; l < n; ++l) s += b(k, l) * std::conj(u_cols[l][j]);
      t[k * n + j] = s;
    }
  std::vector<cplx> m(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      cplx s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += u_cols[k][i] * t[k * n + j];
      m[i * n + j] = s;
    }
  // Enforce exact Hermitian symmetry before handing to the validator.
  for (std::size_t i = 0; i < n; ++i) {
    m[i * n + i] = cplx(m[i * n + i].real(), 0.0);
    for (std::size_t j = i + 1; j < n; ++j) {
      cplx avg = 0.5 * (m[i * n + j] + std::conj(m[j * n + i]));
      m[i * n + j] = avg;
      m[j * n + i] = std::conj(avg);
    }
  }
  return HermitianMatrix(n, std::move(m));
}

}  // namespace pencil
