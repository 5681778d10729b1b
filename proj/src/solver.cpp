#include "pencil/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pencil {

namespace {

constexpr double kRecenter[3] = {0.5, 0.25, 0.75};

std::optional<FeasiblePoint> try_m2(const HermitianMatrix& a, const HermitianMatrix& b1,
                                    const HermitianMatrix& b2, std::size_t id1, std::size_t id2,
                                    const SamplerBudget& budget, double tol, int& attempts) {
  PencilFamily f({b1, b2});
  for (int rung = 0; rung < 3 && attempts > 0; ++rung) {
    --attempts;
    SamplerBudget sb = budget.scaled_restarts(1 << rung);
    RatioWitness wpos, wneg;
    try {
      double inf_plus = ratio_extremum(a, b1, {&b2}, +1, sb, &wpos);
      double sup_minus = ratio_extremum(a, b1, {&b2}, -1, sb, &wneg);
      double lo = -inf_plus, hi = -sup_minus;
      double t = kRecenter[rung];
      double lam1 = lo + t * (hi - lo);
      Interval iv = feasible_interval(a.plus(b1, lam1), b2, 1e-9);
      if (iv.empty) continue;
      double lam2 = iv.midpoint();
      auto ver = verify_feasible(a, f, {lam1, lam2}, tol);
      if (!ver.feasible) continue;

      FeasiblePoint fp;
      fp.lambda = {lam1, lam2};
      fp.min_eig = ver.min_eig;
      LevelTrace lt1;
      lt1.member = id1;
      lt1.lo = lo;
      lt1.hi = hi;
      lt1.lambda = lam1;
      // Segment witness: q_{B1} changes sign between the two harvested
      // vectors; the phase nulls the B2 cross term so the segment stays in
      // the neutral set of B2 and the root certifies a common neutral vector.
      ConeWitness cw;
      cw.x_minus = wneg.x;
      cw.x_plus = wpos.x;
      cw.theta = choose_theta(b2, wneg.x, wpos.x);
      CVec zp = scaled(wpos.x, std::polar(1.0, cw.theta));
      cw.t0 = segment_neutral_root(b1, wneg.x, zp);
      lt1.t_minus = segment_neutral_root(b1, wneg.x, scaled(zp, -1.0));
      lt1.witness = std::move(cw);
      fp.trace.push_back(std::move(lt1));
      LevelTrace lt2;
      lt2.member = id2;
      lt2.lo = iv.lo;
      lt2.hi = iv.hi;
      lt2.lambda = lam2;
      fp.trace.push_back(std::move(lt2));
      return fp;
    } catch (const PencilError& e) {
      if (e.code() == ErrorCode::SAMPLER_STARVED || e.code() == ErrorCode::NOT_INDEFINITE ||
          e.code() == ErrorCode::BAD_SIGNS || e.code() == ErrorCode::NO_ROOT)
        continue;  // retry at the next rung
      throw;
    }
  }
  return std::nullopt;
}

// active carries original member indices in elimination order; lambda in the
// returned point is aligned with `active`.
std::optional<FeasiblePoint> try_rec(const HermitianMatrix& a_acc, const PencilFamily& f,
                                     const std::vector<std::size_t>& active,
                                     const SamplerBudget& budget, double tol, int& attempts) {
  if (attempts <= 0) return std::nullopt;
  if (active.size() == 1) {
    --attempts;
    Interval iv;
    try {
      iv = feasible_interval(a_acc, f.member(active[0]), 1e-9);
    } catch (const PencilError& e) {
      if (e.code() == ErrorCode::NOT_INDEFINITE) {
        // Definite direction: any lambda of the right sign works iff the
        // pencil can be lifted; fall back to a direct check at lambda = 0.
        auto ver0 = verify_feasible(a_acc, f.subfamily({active[0]}), {0.0}, tol);
        if (!ver0.feasible) return std::nullopt;
        FeasiblePoint fp;
        fp.lambda = {0.0};
        fp.min_eig = ver0.min_eig;
        LevelTrace lt;
        lt.member = active[0];
        lt.lambda = 0.0;
        fp.trace.push_back(lt);
        return fp;
      }
      throw;
    }
    if (iv.empty) return std::nullopt;
    double lam = iv.midpoint();
    auto ver = verify_feasible(a_acc, f.subfamily({active[0]}), {lam}, tol);
    if (!ver.feasible) return std::nullopt;
    FeasiblePoint fp;
    fp.lambda = {lam};
    fp.min_eig = ver.min_eig;
    LevelTrace lt;
    lt.member = active[0];
    lt.lo = iv.lo;
    lt.hi = iv.hi;
    lt.lambda = lam;
    fp.trace.push_back(lt);
    return fp;
  }
  if (active.size() == 2)
    return try_m2(a_acc, f.member(active[0]), f.member(active[1]), active[0], active[1], budget,
                  tol, attempts);

  std::size_t el = active[0];
  std::vector<std::size_t> rest(active.begin() + 1, active.end());
  std::vector<const HermitianMatrix*> cons;
  cons.reserve(rest.size());
  for (std::size_t r : rest) cons.push_back(&f.member(r));

  for (int rung = 0; rung < 3 && attempts > 0; ++rung) {
    --attempts;
    SamplerBudget sb = budget.scaled_restarts(1 << rung);
    double lo, hi;
    try {
      lo = -ratio_extremum(a_acc, f.member(el), cons, +1, sb);
      hi = -ratio_extremum(a_acc, f.member(el), cons, -1, sb);
    } catch (const PencilError& e) {
      if (e.code() == ErrorCode::SAMPLER_STARVED) continue;
      throw;
    }
    double t = kRecenter[rung];
    double lam = lo + t * (hi - lo);
    auto sub = try_rec(a_acc.plus(f.member(el), lam), f, rest, budget, tol, attempts);
    if (!sub) continue;
    FeasiblePoint fp;
    fp.lambda.reserve(active.size());
    fp.lambda.push_back(lam);
    for (double v : sub->lambda) fp.lambda.push_back(v);
    fp.min_eig = sub->min_eig;
    LevelTrace lt;
    lt.member = el;
    lt.lo = lo;
    lt.hi = hi;
    lt.lambda = lam;
    fp.trace.push_back(std::move(lt));
    for (auto& t2 : sub->trace) fp.trace.push_back(std::move(t2));
    return fp;
  }
  return std::nullopt;
}

}  // namespace

VerifyResult verify_feasible(const HermitianMatrix& a, const PencilFamily& f,
                             const std::vector<double>& lambda, double tol) {
  if (!(tol >= 0.0)) fail(ErrorCode::BAD_INPUT, "tol must be >= 0");
  HermitianMatrix pv = pencil_value(a, f, lambda);
  double scale = spectral_norm(a);
  for (std::size_t i = 0; i < f.size(); ++i) scale += std::abs(lambda[i]) * f.member_norm(i);
  VerifyResult out;
  out.min_eig = min_eig(pv);
  out.scale = scale;
  out.feasible = out.min_eig >= -tol * scale;
  return out;
}

CertReport neutral_cone_positivity(const HermitianMatrix& a, const PencilFamily& f,
                                   const SamplerBudget& budget) {
  if (a.dim() != f.dim()) fail(ErrorCode::DIM_MISMATCH, "neutral_cone_positivity: dim mismatch");
  double anorm = spectral_norm(a);
  std::vector<const HermitianMatrix*> cons;
  for (std::size_t i = 0; i < f.size(); ++i) cons.push_back(&f.member(i));
  SphereMin best = min_on_sphere(a, cons, budget);
  CertReport rep;
  if (!best.feasible) {
    rep.verdict = Verdict::CONFIRMED;
    rep.vacuous = true;
    rep.summary = "no unit vector reached the common neutral set at this resolution";
    rep.achieved["residual2_min"] = best.residual2;
    return rep;
  }
  rep.achieved["q_A_min"] = best.value;
  rep.achieved["residual2"] = best.residual2;
  if (best.value < -1e-7 * anorm) {
    rep.verdict = Verdict::REFUTED;
    rep.summary = "found a common neutral vector with negative A-form";
    CertWitness w;
    w.vectors.push_back(best.argmin);
    w.details["q_A"] = best.value;
    rep.witness = std::move(w);
  } else {
    rep.verdict = Verdict::CONFIRMED;
    rep.summary = "sampled minimum of q_A on the common neutral set is nonnegative";
  }
  return rep;
}

FeasiblePoint solve_feasible_m2(const HermitianMatrix& a, const HermitianMatrix& b1,
                                const HermitianMatrix& b2, const SamplerBudget& budget,
                                double tol) {
  int attempts = 12;
  auto fp = try_m2(a, b1, b2, 0, 1, budget, tol, attempts);
  if (!fp)
    fail(ErrorCode::NOT_FEASIBLE,
         "no verified feasible point found at this budget (search failure, not an "
         "infeasibility certificate)");
  return *fp;
}

FeasiblePoint solve_feasible(const HermitianMatrix& a, const PencilFamily& f,
                             const SamplerBudget& budget, double tol, EliminationOrder order) {
  if (a.dim() != f.dim()) fail(ErrorCode::DIM_MISMATCH, "solve_feasible: dim mismatch");
  std::vector<std::size_t> idx(f.size());
  std::iota(idx.begin(), idx.end(), 0);
  switch (order) {
    case EliminationOrder::NORM_DESC:
      std::stable_sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
        return f.member_norm(i) > f.member_norm(j);
      });
      break;
    case EliminationOrder::NORM_ASC:
      std::stable_sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
        return f.member_norm(i) < f.member_norm(j);
      });
      break;
    case EliminationOrder::INDEX:
      std::reverse(idx.begin(), idx.end());  // eliminate the last-listed member first
      break;
  }
  int attempts = 40;
  auto got = try_rec(a, f, idx, budget, tol, attempts);
  if (!got)
    fail(ErrorCode::NOT_FEASIBLE,
         "no verified feasible point found at this budget (search failure, not an "
         "infeasibility certificate)");
  // Scatter lambda back into original member order and re-verify canonically.
  FeasiblePoint fp;
  fp.lambda.assign(f.size(), 0.0);
  for (std::size_t pos = 0; pos < idx.size(); ++pos) fp.lambda[idx[pos]] = got->lambda[pos];
  fp.trace = std::move(got->trace);
  auto ver = verify_feasible(a, f, fp.lambda, tol);
  if (!ver.feasible)
    fail(ErrorCode::NOT_FEASIBLE, "candidate failed canonical re-verification");
  fp.min_eig = ver.min_eig;
  return fp;
}

std::pair<double, double> ab_identity_check(const HermitianMatrix& b, const CVec& y,
                                            const CVec& z_phased, double t_plus, double t_minus) {
  if (!(t_plus > 0.0 && t_plus < 1.0 && t_minus > 0.0 && t_minus < 1.0))
    fail(ErrorCode::BAD_ROOT, "segment roots must lie in (0, 1)");
  double p = quadratic_form(b, y);
  double q = quadratic_form(b, z_phased);
  if (!(p < 0.0 && q > 0.0)) fail(ErrorCode::BAD_SIGNS, "expected q(y) < 0 < q(z)");
  double aa = t_plus / (1.0 - t_plus);
  double bb = t_minus / (1.0 - t_minus);
  return {aa * bb, -q / p};
}

}  // namespace pencil
