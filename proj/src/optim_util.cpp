#include "pencil/optim_util.hpp"

#include <algorithm>
#include <cstddef>

namespace pencil {

std::pair<std::vector<double>, double> nelder_mead(
    const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
    double scale, int iters) {
  const std::size_t d = x0.size();
  std::vector<std::vector<double>> pts(d + 1, x0);
  std::vector<double> vals(d + 1);
  for (std::size_t i = 0; i < d; ++i) pts[i + 1][i] += scale;
  for (std::size_t i = 0; i <= d; ++i) vals[i] = f(pts[i]);

  auto centroid_excluding = [&](std::size_t worst) {
    std::vector<double> c(d, 0.0);
    for (std::size_t i = 0; i <= d; ++i) {
      if (i == worst) continue;
      for (std::size_t k = 0; k < d; ++k) c[k] += pts[i][k];
    }
    for (double& v : c) v /= static_cast<double>(d);
    return c;
  };
  auto blend = [&](const std::vector<double>& c, const std::vector<double>& w, double coef) {
    std::vector<double> r(d);
    for (std::size_t k = 0; k < d; ++k) r[k] = c[k] + coef * (c[k] - w[k]);
    return r;
  };

  for (int it = 0; it < iters; ++it) {
    std::size_t best = 0, worst = 0, second = 0;
    for (std::size_t i = 1; i <= d; ++i) {
      if (vals[i] < vals[best]) best = i;
      if (vals[i] > vals[worst]) worst = i;
    }
    second = best;
    for (std::size_t i = 0; i <= d; ++i)
      if (i != worst && vals[i] > vals[second]) second = i;
    if (vals[worst] - vals[best] <= 1e-15 * (1.0 + std::abs(vals[best]))) break;

    auto c = centroid_excluding(worst);
    auto xr = blend(c, pts[worst], 1.0);
    double fr = f(xr);
    if (fr < vals[best]) {
      auto xe = blend(c, pts[worst], 2.0);
      double fe = f(xe);
      if (fe < fr) {
        pts[worst] = std::move(xe);
        vals[worst] = fe;
      } else {
        pts[worst] = std::move(xr);
        vals[worst] = fr;
      }
    } else if (fr < vals[second]) {
      pts[worst] = std::move(xr);
      vals[worst] = fr;
    } else {
      auto xc = blend(c, pts[worst], -0.5);
      double fc = f(xc);
      if (fc < vals[worst]) {
        pts[worst] = std::move(xc);
        vals[worst] = fc;
      } else {
        for (std::size_t i = 0; i <= d; ++i) {
          if (i == best) continue;
          for (std::size_t k = 0; k < d; ++k) pts[i][k] = 0.5 * (pts[i][k] + pts[best][k]);
          vals[i] = f(pts[i]);
        }
      }
    }
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i <= d; ++i)
    if (vals[i] < vals[best]) best = i;
  return {pts[best], vals[best]};
}

}  // namespace pencil
