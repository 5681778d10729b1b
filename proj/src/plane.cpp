#include "pencil/plane.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pencil/optim_util.hpp"

namespace pencil {

std::optional<PlaneSection> PlaneSection::make(const CVec& u_raw, const CVec& v_raw) {
  if (u_raw.size() != v_raw.size() || u_raw.empty()) return std::nullopt;
  double nu = vnorm(u_raw);
  double nv0 = vnorm(v_raw);
  if (!(nu > 0.0) || !(nv0 > 0.0)) return std::nullopt;
  CVec u = scaled(u_raw, 1.0 / nu);
  CVec v = v_raw;
  axpy(v, cplx(-rdot(v, u), 0.0), u);  // real Gram-Schmidt step
  double nv = vnorm(v);
  if (nv <= 1e-12 * nv0) return std::nullopt;
  scale_in_place(v, 1.0 / nv);
  return PlaneSection(std::move(u), std::move(v));
}

Sym2 PlaneSection::restrict_form(const HermitianMatrix& b) const {
  CVec bu = b.apply(u_);
  Sym2 r;
  r.a = inner(bu, u_).real();
  r.b = inner(bu, v_).real();
  r.c = quadratic_form(b, v_);
  return r;
}

std::optional<std::array<double, 3>> psd_in_span_2x2(const Sym2& m1, const Sym2& m2,
                                                     const Sym2& m3, int sphere_grid) {
  const double maxfro = std::max({m1.fro(), m2.fro(), m3.fro()});
  if (!(maxfro > 0.0)) return std::nullopt;  // span of zero forms has no nonzero element

  auto penalty = [&](double l1, double l2, double l3) {
    Sym2 m = sym2_combine(l1, m1, l2, m2, l3, m3);
    double fro = m.fro();
    if (fro <= 1e-10 * maxfro) return 1.0;  // degenerate direction: not "nonzero psd"
    double tr = m.trace() / fro;
    double dt = m.det() / (fro * fro);
    double p = 0.0;
    if (tr < 0.0) p += tr * tr;
    if (dt < 0.0) p += dt * dt;
    return p;
  };
  auto accepts = [&](double l1, double l2, double l3) {
    Sym2 m = sym2_combine(l1, m1, l2, m2, l3, m3);
    double fro = m.fro();
    return m.trace() >= 0.0 && m.det() >= -1e-12 * fro * fro && fro > 1e-10 * maxfro;
  };

  // Signed axes first: a definite single member is reported as such exactly.
  static const std::array<std::array<double, 3>, 6> axes = {{{1, 0, 0},
                                                             {-1, 0, 0},
                                                             {0, 1, 0},
                                                             {0, -1, 0},
                                                             {0, 0, 1},
                                                             {0, 0, -1}}};
  std::array<double, 3> best{1, 0, 0};
  double best_pen = 2.0;
  for (const auto& l : axes) {
    double p = penalty(l[0], l[1], l[2]);
    if (p == 0.0 && accepts(l[0], l[1], l[2])) return l;
    if (p < best_pen) {
      best_pen = p;
      best = l;
    }
  }
  const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
  const int n = std::max(8, sphere_grid);
  for (int k = 0; k < n; ++k) {
    double z = 1.0 - 2.0 * (k + 0.5) / n;
    double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    double phi = golden_angle * k;
    double l1 = r * std::cos(phi), l2 = r * std::sin(phi), l3 = z;
    double p = penalty(l1, l2, l3);
    if (p == 0.0 && accepts(l1, l2, l3)) return std::array<double, 3>{l1, l2, l3};
    if (p < best_pen) {
      best_pen = p;
      best = {l1, l2, l3};
    }
  }
  // Local polish of the most promising direction.
  auto obj = [&](const std::vector<double>& y) {
    double nn = std::sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2]);
    if (nn < 1e-12) return 2.0;
    return penalty(y[0] / nn, y[1] / nn, y[2] / nn);
  };
  auto [yp, fp] = nelder_mead(obj, {best[0], best[1], best[2]}, 0.1, 300);
  double nn = std::sqrt(yp[0] * yp[0] + yp[1] * yp[1] + yp[2] * yp[2]);
  if (nn >= 1e-12) {
    std::array<double, 3> cand{yp[0] / nn, yp[1] / nn, yp[2] / nn};
    if (accepts(cand[0], cand[1], cand[2])) return cand;
  }
  if (accepts(best[0], best[1], best[2])) return best;
  return std::nullopt;
}

}  // namespace pencil
