#include "pencil/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <string>

#include "pencil/rng.hpp"

namespace pencil {

namespace {

int thread_count() {
  static const int t = [] {
    const char* e = std::getenv("PENCIL_THREADS");
    if (!e) return 1;
    int v = std::atoi(e);
    return v < 1 ? 1 : (v > 64 ? 64 : v);
  }();
  return t;
}

struct Problem {
  const HermitianMatrix* obj = nullptr;
  std::vector<const HermitianMatrix*> cons;
  std::vector<double> cons_norm;  // spectral norms
  double max_cons_norm = 0.0;
  std::size_t n = 0;
  double thr2 = 0.0;  // feasibility threshold on residual2
};

Problem make_problem(const HermitianMatrix* obj, const std::vector<const HermitianMatrix*>& cons,
                     std::size_t dim) {
  Problem pr;
  pr.obj = obj;
  pr.cons = cons;
  pr.n = dim;
  if (obj && obj->dim() != dim) fail(ErrorCode::DIM_MISMATCH, "objective dimension mismatch");
  for (const auto* c : cons) {
    if (c->dim() != dim) fail(ErrorCode::DIM_MISMATCH, "constraint dimension mismatch");
    double nrm = spectral_norm(*c);
    if (nrm <= 0.0) fail(ErrorCode::BAD_INPUT, "constraint form must be nonzero");
    pr.cons_norm.push_back(nrm);
    pr.max_cons_norm = std::max(pr.max_cons_norm, nrm);
  }
  pr.thr2 = feasibility_threshold2(pr.max_cons_norm);
  return pr;
}

double residual2_at(const Problem& pr, const CVec& x) {
  double s = 0.0;
  for (const auto* c : pr.cons) {
    double q = quadratic_form(*c, x);
    s += q * q;
  }
  return s;
}

// Solves the small symmetric positive (semi)definite system M y = b in place
// by Gaussian elimination with partial pivoting.  Returns false if singular.
bool solve_small(std::vector<double>& m, std::vector<double>& b, std::size_t k) {
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < k; ++r)
      if (std::abs(m[r * k + col]) > std::abs(m[piv * k + col])) piv = r;
    if (std::abs(m[piv * k + col]) < 1e-300) return false;
    if (piv != col) {
      for (std::size_t c = 0; c < k; ++c) std::swap(m[col * k + c], m[piv * k + c]);
      std::swap(b[col], b[piv]);
    }
    double d = m[col * k + col];
    for (std::size_t r = col + 1; r < k; ++r) {
      double f = m[r * k + col] / d;
      if (f == 0.0) continue;
      for (std::size_t c = col; c < k; ++c) m[r * k + c] -= f * m[col * k + c];
      b[r] -= f * b[col];
    }
  }
  for (std::size_t col = k; col-- > 0;) {
    double s = b[col];
    for (std::size_t c = col + 1; c < k; ++c) s -= m[col * k + c] * b[c];
    b[col] = s / m[col * k + col];
  }
  return true;
}

// Gauss-Newton projection of x onto the constraint variety on the sphere.
// Residuals are normalized per constraint (q_i / ||C_i||).  Returns the final
// normalized max-residual.
double gn_project(const Problem& pr, CVec& x, int max_iters = 40) {
  const std::size_t m = pr.cons.size();
  if (m == 0) return 0.0;
  double last = 1e300;
  for (int it = 0; it < max_iters; ++it) {
    std::vector<CVec> grads(m);
    std::vector<double> r(m);
    double worst = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      CVec cx = pr.cons[i]->apply(x);
      double q = inner(cx, x).real();
      r[i] = q / pr.cons_norm[i];
      worst = std::max(worst, std::abs(r[i]));
      grads[i] = scaled(cx, 2.0 / pr.cons_norm[i]);
    }
    if (worst <= 1e-15) return worst;
    if (worst > 0.9 * last && it > 2) return worst;  // stagnating
    last = std::max(worst, 1e-300);
    // Solve (J J^T + ridge) y = -r with (J J^T)_{ij} = Re<g_i, g_j>.
    std::vector<double> jjt(m * m);
    double tr = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i; j < m; ++j) {
        double v = rdot(grads[i], grads[j]);
        jjt[i * m + j] = v;
        jjt[j * m + i] = v;
        if (i == j) tr += v;
      }
    double ridge = 1e-14 * (tr / static_cast<double>(m)) + 1e-300;
    for (std::size_t i = 0; i < m; ++i) jjt[i * m + i] += ridge;
    std::vector<double> rhs(m);
    for (std::size_t i = 0; i < m; ++i) rhs[i] = -r[i];
    if (!solve_small(jjt, rhs, m)) return worst;
    CVec delta(pr.n, 0.0);
    for (std::size_t i = 0; i < m; ++i) axpy(delta, rhs[i], grads[i]);
    axpy(x, 1.0, delta);
    double nx = vnorm(x);
    if (!(nx > 0.0) || !std::isfinite(nx)) return worst;
    scale_in_place(x, 1.0 / nx);
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    worst = std::max(worst, std::abs(quadratic_form(*pr.cons[i], x)) / pr.cons_norm[i]);
  return worst;
}

// Removes from g the radial/phase directions and (real-orthogonally) the
// constraint gradient directions at x.
void tangent_project(const Problem& pr, const CVec& x, CVec& g) {
  axpy(g, -inner(g, x), x);  // removes both x and ix real-directions
  if (pr.cons.empty()) return;
  std::vector<CVec> basis;
  basis.reserve(pr.cons.size());
  for (std::size_t i = 0; i < pr.cons.size(); ++i) {
    CVec h = pr.cons[i]->apply(x);
    axpy(h, -inner(h, x), x);
    for (const CVec& b : basis) axpy(h, cplx(-rdot(h, b), 0.0), b);
    double nh = vnorm(h);
    if (nh > 1e-12 * pr.cons_norm[i]) basis.push_back(scaled(h, 1.0 / nh));
  }
  for (const CVec& b : basis) axpy(g, cplx(-rdot(g, b), 0.0), b);
}

// Penalty-phase objective and gradient: q_obj + rho * sum (q_i / ||C_i||)^2.
double penalty_eval(const Problem& pr, const CVec& x, double rho, CVec* grad) {
  double f = 0.0;
  if (grad) grad->assign(pr.n, 0.0);
  if (pr.obj) {
    CVec ax = pr.obj->apply(x);
    f += inner(ax, x).real();
    if (grad) axpy(*grad, 2.0, ax);
  }
  for (std::size_t i = 0; i < pr.cons.size(); ++i) {
    CVec cx = pr.cons[i]->apply(x);
    double q = inner(cx, x).real();
    double nn = pr.cons_norm[i] * pr.cons_norm[i];
    f += rho * q * q / nn;
    if (grad) axpy(*grad, 4.0 * rho * q / nn, cx);
  }
  return f;
}

// Projected-gradient descent with backtracking for a fixed penalty weight.
void penalty_descend(const Problem& pr, CVec& x, double rho, int iters) {
  double alpha = 0.1;
  CVec g;
  double f = penalty_eval(pr, x, rho, &g);
  for (int it = 0; it < iters; ++it) {
    axpy(g, -inner(g, x), x);  // sphere tangent
    double gn2 = norm2(g);
    if (gn2 <= 1e-24 * (1.0 + f * f)) break;
    bool moved = false;
    for (int bt = 0; bt < 40; ++bt) {
      CVec xt = x;
      axpy(xt, cplx(-alpha, 0.0), g);
      double nv = vnorm(xt);
      if (!(nv > 0.0)) break;
      scale_in_place(xt, 1.0 / nv);
      double ft = penalty_eval(pr, xt, rho, nullptr);
      if (ft <= f - 1e-4 * alpha * gn2) {
        x = std::move(xt);
        f = penalty_eval(pr, x, rho, &g);
        alpha = std::min(alpha * 1.3, 1e3);
        moved = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!moved) break;
  }
}

// Objective-on-variety polish: Riemannian descent with Gauss-Newton
// retraction onto the constraint variety after every trial step.
void variety_polish(const Problem& pr, CVec& x, int iters) {
  if (!pr.obj) return;
  double alpha = 0.1;
  for (int it = 0; it < iters; ++it) {
    CVec g = pr.obj->apply(x);
    double f = inner(g, x).real();
    scale_in_place(g, 2.0);
    tangent_project(pr, x, g);
    double gn2 = norm2(g);
    if (gn2 <= 1e-26) break;
    bool moved = false;
    for (int bt = 0; bt < 30; ++bt) {
      CVec xt = x;
      axpy(xt, cplx(-alpha, 0.0), g);
      double nv = vnorm(xt);
      if (!(nv > 0.0)) break;
      scale_in_place(xt, 1.0 / nv);
      gn_project(pr, xt, 15);
      double ft = quadratic_form(*pr.obj, xt);
      if (ft <= f - 1e-4 * alpha * gn2) {
        x = std::move(xt);
        alpha = std::min(alpha * 1.3, 1e3);
        moved = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!moved) break;
  }
}

SphereMin run_restart(const Problem& pr, CVec x, int iters, int restart_index) {
  if (!pr.cons.empty() && pr.obj) {
    static const double rhos[] = {10.0, 100.0, 1000.0, 10000.0};
    int per_stage = std::max(20, iters / 4);
    for (double rho : rhos) penalty_descend(pr, x, rho, per_stage);
    gn_project(pr, x, 60);
    variety_polish(pr, x, iters);
    gn_project(pr, x, 40);
  } else if (!pr.cons.empty()) {
    penalty_descend(pr, x, 1.0, iters);
    gn_project(pr, x, 60);
  } else if (pr.obj) {
    penalty_descend(pr, x, 0.0, iters * 2);
  }
  SphereMin out;
  out.argmin = x;
  out.value = pr.obj ? quadratic_form(*pr.obj, x) : 0.0;
  out.residual2 = residual2_at(pr, x);
  out.feasible = pr.cons.empty() || out.residual2 <= pr.thr2;
  out.from_restart = restart_index;
  return out;
}

std::vector<CVec> build_starts(const Problem& pr, const SamplerBudget& budget, std::uint64_t tag,
                               const std::vector<CVec>* extra) {
  std::vector<CVec> starts;
  int total = std::max(1, budget.restarts);
  starts.reserve(static_cast<std::size_t>(total));
  if (pr.obj) {
    auto dec = eig(*pr.obj);
    starts.push_back(dec.vectors.front());  // steepest objective descent seed
  }
  int neutral_seeds = 0;
  for (const auto* c : pr.cons) {
    if (static_cast<int>(starts.size()) >= total || neutral_seeds >= 8) break;
    try {
      starts.push_back(neutral_direction(*c));
      ++neutral_seeds;
    } catch (const PencilError&) {
      // definite constraint: no neutral seed available
    }
  }
  if (extra) {
    for (const CVec& e : *extra) {
      if (static_cast<int>(starts.size()) >= total) break;
      if (e.size() == pr.n && vnorm(e) > 0.0) starts.push_back(normalized(e));
    }
  }
  std::uint64_t k = 0;
  while (static_cast<int>(starts.size()) < total) {
    Rng rng(derive_seed(budget.seed, tag, k++));
    starts.push_back(random_unit_vector(rng, pr.n));
  }
  return starts;
}

std::vector<SphereMin> run_all(const Problem& pr, const std::vector<CVec>& starts, int iters) {
  std::vector<SphereMin> results(starts.size());
  int threads = thread_count();
  if (threads <= 1 || starts.size() <= 1) {
    for (std::size_t i = 0; i < starts.size(); ++i)
      results[i] = run_restart(pr, starts[i], iters, static_cast<int>(i));
    return results;
  }
  std::size_t chunk = (starts.size() + threads - 1) / threads;
  std::vector<std::future<void>> futs;
  for (int t = 0; t < threads; ++t) {
    std::size_t begin = t * chunk;
    std::size_t end = std::min(starts.size(), begin + chunk);
    if (begin >= end) break;
    futs.push_back(std::async(std::launch::async, [&, begin, end] {
      for (std::size_t i = begin; i < end; ++i)
        results[i] = run_restart(pr, starts[i], iters, static_cast<int>(i));
    }));
  }
  for (auto& f : futs) f.get();
  return results;
}

// Best candidate: feasible ones ranked by (value, index); if none feasible,
// smallest residual wins.
SphereMin select_best(const std::vector<SphereMin>& all) {
  const SphereMin* best = nullptr;
  for (const auto& r : all) {  // restart order, so ties keep the lowest index
    if (!r.feasible) continue;
    if (!best || r.value < best->value) best = &r;
  }
  if (best) return *best;
  const SphereMin* fallback = nullptr;
  for (const auto& r : all)
    if (!fallback || r.residual2 < fallback->residual2) fallback = &r;
  return fallback ? *fallback : SphereMin{};
}

}  // namespace

double feasibility_threshold2(double max_constraint_norm) {
  double t = 1e-8 * max_constraint_norm;
  return t * t;
}

std::vector<SphereMin> sphere_search_all(const HermitianMatrix* objective,
                                         const std::vector<const HermitianMatrix*>& constraints,
                                         std::size_t dim, const SamplerBudget& budget,
                                         std::uint64_t purpose_tag,
                                         const std::vector<CVec>* extra_starts) {
  if (dim == 0) fail(ErrorCode::BAD_INPUT, "sphere search needs dim >= 1");
  Problem pr = make_problem(objective, constraints, dim);
  auto starts = build_starts(pr, budget, purpose_tag, extra_starts);
  return run_all(pr, starts, std::max(10, budget.iters));
}

SphereMin min_on_sphere(const HermitianMatrix& objective,
                        const std::vector<const HermitianMatrix*>& constraints,
                        const SamplerBudget& budget) {
  auto all = sphere_search_all(&objective, constraints, objective.dim(), budget,
                               oracle_tags::kMinSphere);
  return select_best(all);
}

std::optional<CVec> find_common_neutral(const PencilFamily& f, std::optional<std::size_t> exclude,
                                        const SamplerBudget& budget, const std::vector<CVec>* avoid) {
  std::vector<const HermitianMatrix*> cons;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (exclude && *exclude == i) continue;
    cons.push_back(&f.member(i));
  }
  if (cons.empty()) {
    CVec e(f.dim(), 0.0);
    e[0] = 1.0;
    return e;  // empty constraint set: every unit vector qualifies
  }
  auto all = sphere_search_all(nullptr, cons, f.dim(), budget, oracle_tags::kNeutral);
  const SphereMin* best = nullptr;
  double best_sep = -1.0;
  for (const auto& r : all) {
    if (!r.feasible) continue;
    if (!avoid || avoid->empty()) {
      if (!best) best = &r;  // lowest restart index wins
      continue;
    }
    double sep = 2.0;
    for (const CVec& a : *avoid) sep = std::min(sep, phase_distance(r.argmin, a));
    if (sep > best_sep + 1e-12) {
      best_sep = sep;
      best = &r;
    }
  }
  if (!best) return std::nullopt;
  return best->argmin;
}

double ratio_extremum(const HermitianMatrix& a, const HermitianMatrix& b,
                      const std::vector<const HermitianMatrix*>& constraints, int sign,
                      const SamplerBudget& budget, RatioWitness* witness) {
  if (sign != 1 && sign != -1) fail(ErrorCode::BAD_INPUT, "sign must be +1 or -1");
  if (a.dim() != b.dim()) fail(ErrorCode::DIM_MISMATCH, "ratio_extremum: dim mismatch");
  Problem pr = make_problem(nullptr, constraints, b.dim());
  double bnorm = spectral_norm(b);
  if (bnorm <= 0.0) fail(ErrorCode::BAD_INPUT, "ratio_extremum: B must be nonzero");
  std::uint64_t tag = (sign > 0) ? oracle_tags::kRatioPos : oracle_tags::kRatioNeg;

  // Phase A: harvest sign-feasible starts (q_{C_i} = 0, sign * q_B >= delta).
  HermitianMatrix push = b.times(sign > 0 ? -1.0 : 1.0);  // minimize => drives sign*q_B up
  Problem push_pr = make_problem(&push, constraints, b.dim());
  std::vector<CVec> extra;
  {
    auto dec = eig(b);
    extra.push_back(sign > 0 ? dec.vectors.back() : dec.vectors.front());
  }
  auto starts_pool = [&](const SamplerBudget& bud) {
    auto pool = build_starts(push_pr, bud, tag, &extra);
    return run_all(push_pr, pool, std::max(10, bud.iters));
  };
  std::vector<CVec> eligible;
  double delta = 1e-6 * bnorm;
  for (int relax = 0; relax < 2 && eligible.empty(); ++relax) {
    auto all = starts_pool(budget);
    // Greedy diverse selection in restart order.
    for (const auto& r : all) {
      if (!r.feasible) continue;
      double qb = quadratic_form(b, r.argmin);
      if (sign * qb < delta) continue;
      bool distinct = true;
      for (const CVec& e : eligible)
        if (phase_distance(r.argmin, e) < 0.02) { distinct = false; break; }
      if (distinct) eligible.push_back(r.argmin);
      if (eligible.size() >= 8) break;
    }
    if (eligible.empty()) delta = 1e-9 * bnorm;
  }
  if (eligible.empty())
    fail(ErrorCode::SAMPLER_STARVED,
         std::string("no constrained vector with ") + (sign > 0 ? "positive" : "negative") +
             " q_B found at this budget");

  // Phase B: ratio descent (sign=+1 minimizes, sign=-1 maximizes) with a
  // barrier keeping sign * q_B above delta_floor.
  double delta_floor = 1e-9 * bnorm;
  double best_val = 0.0;
  const CVec* best_x = nullptr;
  std::vector<CVec> finals(eligible.size());
  std::vector<double> vals(eligible.size());
  for (std::size_t s = 0; s < eligible.size(); ++s) {
    CVec x = eligible[s];
    double alpha = 0.1;
    double fprev = 0.0;
    for (int it = 0; it < std::max(50, budget.iters); ++it) {
      CVec ax = a.apply(x);
      CVec bx = b.apply(x);
      double qa = inner(ax, x).real();
      double qb = inner(bx, x).real();
      double ratio = qa / qb;
      if (it == 0) fprev = sign * ratio;
      CVec g = ax;
      axpy(g, -ratio, bx);
      scale_in_place(g, 2.0 / qb * (sign > 0 ? 1.0 : -1.0));  // descent dir for sign*ratio
      tangent_project(pr, x, g);
      double gn2 = norm2(g);
      if (gn2 <= 1e-26 * (1.0 + ratio * ratio)) break;
      bool moved = false;
      for (int bt = 0; bt < 40; ++bt) {
        CVec xt = x;
        axpy(xt, cplx(-alpha, 0.0), g);
        double nv = vnorm(xt);
        if (!(nv > 0.0)) break;
        scale_in_place(xt, 1.0 / nv);
        gn_project(pr, xt, 12);
        double qbt = quadratic_form(b, xt);
        if (sign * qbt >= delta_floor) {
          double ft = sign * (quadratic_form(a, xt) / qbt);
          if (ft <= sign * ratio - 1e-4 * alpha * gn2) {
            x = std::move(xt);
            alpha = std::min(alpha * 1.3, 1e3);
            moved = true;
            break;
          }
        }
        alpha *= 0.5;
      }
      if (!moved) break;
      double fcur = sign * (quadratic_form(a, x) / quadratic_form(b, x));
      if (std::abs(fprev - fcur) <= 1e-15 * (1.0 + std::abs(fcur))) break;
      fprev = fcur;
    }
    vals[s] = quadratic_form(a, x) / quadratic_form(b, x);
    finals[s] = std::move(x);
  }
  for (std::size_t s = 0; s < finals.size(); ++s) {
    if (!best_x || (sign > 0 ? vals[s] < best_val : vals[s] > best_val)) {
      best_val = vals[s];
      best_x = &finals[s];
    }
  }
  if (witness) {
    witness->x = *best_x;
    witness->ratio = best_val;
    witness->q_b = quadratic_form(b, *best_x);
  }
  return best_val;
}

GridResult grid_feasibility(const HermitianMatrix& a, const PencilFamily& f, const GridSpec& spec) {
  const std::size_t m = f.size();
  if (m > 4) fail(ErrorCode::GRID_TOO_LARGE, "grid scan supports at most 4 parameters");
  if (spec.lo.size() != m || spec.hi.size() != m)
    fail(ErrorCode::DIM_MISMATCH, "grid box must have one [lo, hi] per family member");
  if (spec.points_per_axis < 1) fail(ErrorCode::BAD_INPUT, "points_per_axis must be >= 1");
  for (std::size_t i = 0; i < m; ++i)
    if (!(spec.lo[i] <= spec.hi[i])) fail(ErrorCode::BAD_INPUT, "grid box must satisfy lo <= hi");
  double anorm = spectral_norm(a);
  const int p = spec.points_per_axis;
  GridResult out;
  std::vector<int> idx(m, 0);
  std::vector<double> lambda(m, 0.0);
  while (true) {
    for (std::size_t i = 0; i < m; ++i)
      lambda[i] = (p == 1) ? spec.lo[i]
                           : spec.lo[i] + (spec.hi[i] - spec.lo[i]) * idx[i] / double(p - 1);
    double scale = anorm;
    for (std::size_t i = 0; i < m; ++i) scale += std::abs(lambda[i]) * f.member_norm(i);
    HermitianMatrix pv = pencil_value(a, f, lambda);
    ++out.total_points;
    if (min_eig(pv) >= -spec.tol * scale) out.feasible_points.push_back(lambda);
    // Odometer increment, axis m-1 fastest.
    std::size_t ax = m;
    while (ax-- > 0) {
      if (++idx[ax] < p) break;
      idx[ax] = 0;
      if (ax == 0) return out;
    }
  }
}

}  // namespace pencil
