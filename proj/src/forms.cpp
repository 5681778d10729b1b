#include "pencil/forms.hpp"

#include <cmath>
#include <numbers>

namespace pencil {

double quadratic_form(const HermitianMatrix& b, const CVec& x) {
  return inner(b.apply(x), x).real();
}

cplx cross_term(const HermitianMatrix& b, const CVec& y, const CVec& z) {
  return inner(b.apply(y), z);
}

CVec neutral_direction(const HermitianMatrix& b, double tol) {
  auto dec = eig(b);
  double lo = dec.values.front(), hi = dec.values.back();
  double nrm = std::max(std::abs(lo), std::abs(hi));
  if (tol < 0.0) tol = 1e-9 * nrm;
  if (!(lo < -tol && hi > tol)) fail(ErrorCode::NOT_INDEFINITE, "neutral_direction requires an indefinite form");
  // x = u_+/sqrt(hi) + u_-/sqrt(-lo): q(x) = hi/hi + lo/(-lo) = 0 exactly in
  // exact arithmetic, and Bx = u_+ sqrt(hi) - u_- sqrt(-lo) has norm
  // sqrt(hi + |lo|) >= min-extreme magnitude.
  const CVec& uminus = dec.vectors.front();
  const CVec& uplus = dec.vectors.back();
  CVec x = scaled(uplus, 1.0 / std::sqrt(hi));
  axpy(x, 1.0 / std::sqrt(-lo), uminus);
  return normalized(x);
}

double choose_theta(const HermitianMatrix& b, const CVec& y, const CVec& z) {
  cplx c = cross_term(b, y, z);
  double scale = b.frobenius_norm() * vnorm(y) * vnorm(z);
  if (std::abs(c) <= 1e-14 * scale) return 0.0;
  // Re(e^{-i theta} c) = 0  <=>  theta = arg(c) + pi/2  (mod pi); fold to [0, pi).
  double theta = std::arg(c) + std::numbers::pi / 2.0;
  theta = std::fmod(theta, std::numbers::pi);
  if (theta < 0.0) theta += std::numbers::pi;
  return theta;
}

double segment_neutral_root(const HermitianMatrix& b, const CVec& y, const CVec& z) {
  double p = quadratic_form(b, y);
  double q = quadratic_form(b, z);
  if (!(p < 0.0 && q > 0.0)) fail(ErrorCode::BAD_SIGNS, "segment endpoints must satisfy q(y) < 0 < q(z)");
  double r = cross_term(b, y, z).real();
  // f(t) = t^2 p + (1-t)^2 q + 2 t (1-t) r = a t^2 + b t + c.
  double a = p + q - 2.0 * r;
  double bb = 2.0 * r - 2.0 * q;
  double c = q;
  double scale = std::abs(p) + std::abs(q) + std::abs(r);
  auto eval = [&](double t) { return a * t * t + bb * t + c; };
  double root = -1.0;
  if (std::abs(a) <= 1e-14 * scale) {
    // Numerically linear: f(t) = bb t + c with f(0) = q > 0 > f(1) ~ p.
    if (bb != 0.0) root = -c / bb;
  } else {
    double disc = bb * bb - 4.0 * a * c;  // = 4 (r^2 - p q) > 0 for valid signs
    if (disc >= 0.0) {
      double sq = std::sqrt(disc);
      // Numerically stable split of the two roots.
      double qq = -0.5 * (bb + (bb >= 0.0 ? sq : -sq));
      double r1 = qq / a;
      double r2 = (qq != 0.0) ? c / qq : -1.0;
      bool ok1 = r1 > 0.0 && r1 < 1.0;
      bool ok2 = r2 > 0.0 && r2 < 1.0;
      if (ok1 && ok2) root = std::min(r1, r2);
      else if (ok1) root = r1;
      else if (ok2) root = r2;
    }
  }
  if (!(root > 0.0 && root < 1.0)) {
    // Sign change f(0) = q > 0, f(1) = p < 0 guarantees a bisection root.
    double lo = 0.0, hi = 1.0;
    double flo = eval(lo), fhi = eval(hi);
    if (!(flo > 0.0 && fhi < 0.0)) fail(ErrorCode::NO_ROOT, "no neutral root on segment");
    for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
      double mid = 0.5 * (lo + hi);
      if (eval(mid) > 0.0) lo = mid; else hi = mid;
    }
    root = 0.5 * (lo + hi);
  }
  if (!(root > 0.0 && root < 1.0)) fail(ErrorCode::NO_ROOT, "no neutral root on segment");
  return root;
}

double cone_witness_residual(const HermitianMatrix& b, const ConeWitness& w) {
  double scale = std::max(b.frobenius_norm() * std::max(norm2(w.x_minus), norm2(w.x_plus)), 1e-300);
  double p = quadratic_form(b, w.x_minus);
  double q = quadratic_form(b, w.x_plus);
  double worst = 0.0;
  if (!(p < 0.0)) worst = std::max(worst, 1.0);
  if (!(q > 0.0)) worst = std::max(worst, 1.0);
  // gamma(t0) = t0 x_minus + (1 - t0) e^{i theta} x_plus must be neutral for b.
  // (theta itself is provenance: it is chosen against whatever companion form
  // the segment must also stay neutral for, so it is not checked against b.)
  CVec zp = scaled(w.x_plus, std::polar(1.0, w.theta));
  CVec g = scaled(w.x_minus, w.t0);
  axpy(g, 1.0 - w.t0, zp);
  worst = std::max(worst, std::abs(quadratic_form(b, g)) / scale);
  return worst;
}

}  // namespace pencil
