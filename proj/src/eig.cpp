#include "pencil/eig.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pencil {

namespace {

// Applies the 2x2 unitary U = [[c, -s e^{i phi}], [s e^{-i phi}, c]]^H ... we
// inline the update instead: for pivot (p, q) the rotation is built so that
// the transformed A' = J^* A J has A'(p,q) = 0.
struct JacobiWork {
  std::size_t n;
  std::vector<cplx> a;   // row-major, kept exactly Hermitian on touched entries
  std::vector<cplx> v;   // accumulated eigenvector matrix, column-major: v[j*n+i] = V_{ij}
};

double off_diagonal_norm(const JacobiWork& w) {
  double s = 0.0;
  for (std::size_t i = 0; i < w.n; ++i)
    for (std::size_t j = i + 1; j < w.n; ++j) s += 2.0 * std::norm(w.a[i * w.n + j]);
  return std::sqrt(s);
}

void rotate(JacobiWork& w, std::size_t p, std::size_t q) {
  const std::size_t n = w.n;
  cplx apq = w.a[p * n + q];
  double g = std::abs(apq);
  if (g == 0.0) return;
  // Phase factor e^{i phi} = apq / |apq| so that conj(phase) * apq is real > 0.
  cplx phase = apq / g;
  double app = w.a[p * n + p].real();
  double aqq = w.a[q * n + q].real();
  double tau = (aqq - app) / (2.0 * g);
  double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  double c = 1.0 / std::sqrt(1.0 + t * t);
  double s = t * c;
  // Unitary pivot-plane transform J (columns p, q):
  //   J e_p = c e_p - s e^{-i phi} e_q,   J e_q = s e^{i phi} e_p + c e_q,
  // chosen so that (J^* A J)(p, q) = 0.
  cplx sp = s * phase;                  // s e^{i phi}
  cplx spc = s * std::conj(phase);      // s e^{-i phi}
  // Update rows/columns p and q of A: A <- J^* A J.
  for (std::size_t k = 0; k < n; ++k) {
    if (k == p || k == q) continue;
    cplx akp = w.a[k * n + p];
    cplx akq = w.a[k * n + q];
    cplx nkp = c * akp - spc * akq;
    cplx nkq = sp * akp + c * akq;
    w.a[k * n + p] = nkp;
    w.a[p * n + k] = std::conj(nkp);
    w.a[k * n + q] = nkq;
    w.a[q * n + k] = std::conj(nkq);
  }
  double napp = app - t * g;
  double naqq = aqq + t * g;
  w.a[p * n + p] = napp;
  w.a[q * n + q] = naqq;
  w.a[p * n + q] = 0.0;
  w.a[q * n + p] = 0.0;
  // Accumulate eigenvectors: V <- V J (columns p, q mix).
  for (std::size_t k = 0; k < n; ++k) {
    cplx vkp = w.v[p * n + k];
    cplx vkq = w.v[q * n + k];
    w.v[p * n + k] = c * vkp - spc * vkq;
    w.v[q * n + k] = sp * vkp + c * vkq;
  }
}

}  // namespace

EigenDecomposition eig(const HermitianMatrix& m) {
  const std::size_t n = m.dim();
  EigenDecomposition out;
  if (n == 0) return out;
  JacobiWork w{n, m.data(), std::vector<cplx>(n * n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) w.v[i * n + i] = 1.0;

  double fro = m.frobenius_norm();
  double target = 1e-14 * std::max(fro, 1e-300);
  bool converged = (off_diagonal_norm(w) <= target);
  for (int sweep = 0; sweep < 100 && !converged; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) rotate(w, p, q);
    converged = (off_diagonal_norm(w) <= target);
  }
  if (!converged) fail(ErrorCode::EIG_NO_CONVERGENCE, "Jacobi sweeps did not converge");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return w.a[i * n + i].real() < w.a[j * n + j].real();
  });
  out.values.resize(n);
  out.vectors.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t src = order[k];
    out.values[k] = w.a[src * n + src].real();
    CVec col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = w.v[src * n + i];
    out.vectors[k] = std::move(col);
  }
  return out;
}

double min_eig(const HermitianMatrix& m) { return eig(m).values.front(); }

double max_eig(const HermitianMatrix& m) { return eig(m).values.back(); }

double spectral_norm(const HermitianMatrix& m) {
  if (m.dim() == 0) return 0.0;
  const auto& vals = eig(m).values;
  return std::max(std::abs(vals.front()), std::abs(vals.back()));
}

Classification classify(const HermitianMatrix& m, double tol) {
  if (m.dim() == 0) fail(ErrorCode::BAD_INPUT, "classify: empty matrix");
  const auto& vals = eig(m).values;
  double lo = vals.front(), hi = vals.back();
  double nrm = std::max(std::abs(lo), std::abs(hi));
  if (tol < 0.0) tol = 1e-9 * nrm;
  DefinitenessKind k;
  if (nrm <= tol)
    k = DefinitenessKind::ZERO;
  else if (lo > tol)
    k = DefinitenessKind::POSITIVE_DEFINITE;
  else if (hi < -tol)
    k = DefinitenessKind::NEGATIVE_DEFINITE;
  else if (lo >= -tol)
    k = DefinitenessKind::POSITIVE_SEMIDEFINITE;
  else if (hi <= tol)
    k = DefinitenessKind::NEGATIVE_SEMIDEFINITE;
  else
    k = DefinitenessKind::INDEFINITE;
  return Classification{k, lo, hi};
}

}  // namespace pencil
