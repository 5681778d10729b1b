#include "pencil/single_pencil.hpp"

#include <cmath>
#include <functional>

namespace pencil {

namespace {

double golden_max(const std::function<double(double)>& g, double lo, double hi) {
  const double invphi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - invphi * (hi - lo);
  double x2 = lo + invphi * (hi - lo);
  double f1 = g(x1), f2 = g(x2);
  while (hi - lo > 1e-11 * std::max(1.0, std::max(std::abs(lo), std::abs(hi)))) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + invphi * (hi - lo);
      f2 = g(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - invphi * (hi - lo);
      f1 = g(x1);
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

Interval feasible_interval(const HermitianMatrix& a, const HermitianMatrix& b, double tol) {
  if (a.dim() != b.dim()) fail(ErrorCode::DIM_MISMATCH, "feasible_interval: dim mismatch");
  if (!(tol >= 0.0)) fail(ErrorCode::BAD_INPUT, "tol must be >= 0");
  Classification cb = classify(b);
  if (cb.kind != DefinitenessKind::INDEFINITE)
    fail(ErrorCode::NOT_INDEFINITE, "feasible_interval requires indefinite B");
  double sigma = std::max(std::abs(cb.min_eigenvalue), std::abs(cb.max_eigenvalue));
  double anorm = spectral_norm(a);
  std::function<double(double)> g = [&](double lam) { return min_eig(a.plus(b, lam)); };

  // Bracket an interior maximum of the concave g by widening 5-point scans.
  double w = 1.0 + anorm / sigma;
  double center = 0.0;
  double blo = 0.0, bhi = 0.0;
  bool bracketed = false;
  for (int it = 0; it < 60 && !bracketed; ++it) {
    double xs[5], gs[5];
    int bestk = 0;
    for (int k = 0; k < 5; ++k) {
      xs[k] = center - w + 0.5 * w * k;
      gs[k] = g(xs[k]);
      if (gs[k] > gs[bestk]) bestk = k;
    }
    if (bestk != 0 && bestk != 4) {
      blo = xs[bestk - 1];
      bhi = xs[bestk + 1];
      bracketed = true;
    } else {
      center = xs[bestk];
      w *= 2.0;
    }
  }
  if (!bracketed) fail(ErrorCode::UNBOUNDED_BRACKET, "could not bracket the pencil maximum");

  double lam_star = golden_max(g, blo, bhi);
  double g_star = g(lam_star);
  double s = anorm + std::max(1.0, std::abs(lam_star)) * sigma;

  Interval out;
  if (g_star < -tol * s) return out;  // certified-empty at this tolerance

  double left = lam_star, right = lam_star;
  // Two passes: the second re-derives the scale s from the endpoints found by
  // the first, removing the max(1, |lam_star|) bootstrap.
  for (int pass = 0; pass < 2; ++pass) {
    auto phi = [&](double lam) { return g(lam) + tol * s; };
    // Right crossing: phi(lam_star) >= 0; exponential search then bisection.
    double step = std::max(1.0, std::abs(lam_star));
    double hi = lam_star + step;
    int guard = 0;
    while (phi(hi) >= 0.0 && guard++ < 60) {
      step *= 2.0;
      hi = lam_star + step;
    }
    if (guard > 60) fail(ErrorCode::UNBOUNDED_BRACKET, "right endpoint escaped the search window");
    double lo_b = lam_star;
    while (hi - lo_b > 1e-12 + 1e-9 * std::max(std::abs(lo_b), std::abs(hi))) {
      double mid = 0.5 * (lo_b + hi);
      if (phi(mid) >= 0.0) lo_b = mid; else hi = mid;
    }
    right = lo_b;  // inner (still-feasible) side
    // Left crossing, mirrored.
    step = std::max(1.0, std::abs(lam_star));
    double lo2 = lam_star - step;
    guard = 0;
    while (phi(lo2) >= 0.0 && guard++ < 60) {
      step *= 2.0;
      lo2 = lam_star - step;
    }
    if (guard > 60) fail(ErrorCode::UNBOUNDED_BRACKET, "left endpoint escaped the search window");
    double hi_b = lam_star;
    while (hi_b - lo2 > 1e-12 + 1e-9 * std::max(std::abs(lo2), std::abs(hi_b))) {
      double mid = 0.5 * (lo2 + hi_b);
      if (phi(mid) >= 0.0) hi_b = mid; else lo2 = mid;
    }
    left = hi_b;
    s = anorm + std::max(std::abs(left), std::abs(right)) * sigma;
    if (s <= 0.0) break;
  }
  out.empty = false;
  out.lo = left;
  out.hi = right;
  if (out.lo > out.hi) {  // collapse to the maximizer on near-singleton cases
    out.lo = lam_star;
    out.hi = lam_star;
  }
  return out;
}

RatioBounds ratio_bounds(const HermitianMatrix& a, const HermitianMatrix& b,
                         const SamplerBudget& budget) {
  RatioBounds out;
  out.lo = -ratio_extremum(a, b, {}, +1, budget);
  out.hi = -ratio_extremum(a, b, {}, -1, budget);
  return out;
}

CertReport neutral_positivity(const HermitianMatrix& a, const HermitianMatrix& b,
                              const SamplerBudget& budget) {
  if (a.dim() != b.dim()) fail(ErrorCode::DIM_MISMATCH, "neutral_positivity: dim mismatch");
  double anorm = spectral_norm(a);
  SphereMin best = min_on_sphere(a, {&b}, budget);
  CertReport rep;
  if (!best.feasible) {
    rep.verdict = Verdict::CONFIRMED;
    rep.vacuous = true;
    rep.summary = "no unit vector reached the neutral set of B at this resolution";
    rep.achieved["residual2_min"] = best.residual2;
    return rep;
  }
  rep.achieved["q_A_min"] = best.value;
  rep.achieved["residual2"] = best.residual2;
  if (best.value < -1e-7 * anorm) {
    rep.verdict = Verdict::REFUTED;
    rep.summary = "found a neutral vector of B with negative A-form";
    CertWitness w;
    w.vectors.push_back(best.argmin);
    w.details["q_A"] = best.value;
    w.details["q_B"] = quadratic_form(b, best.argmin);
    rep.witness = std::move(w);
  } else {
    rep.verdict = Verdict::CONFIRMED;
    rep.summary = "sampled minimum of q_A on the neutral set of B is nonnegative";
  }
  return rep;
}

}  // namespace pencil
