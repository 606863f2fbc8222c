#include "cstirap/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cstirap {

SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          const std::vector<double>& x0, const SimplexOptions& opts) {
  const std::size_t n = x0.size();
  SimplexResult result{x0, f(x0), 0, false};
  if (n == 0) {
    result.converged = true;
    return result;
  }
  if (!(opts.initial_step > 0.0)) throw std::invalid_argument("simplex step must be > 0");

  std::vector<std::vector<double>> pts(n + 1, x0);
  std::vector<double> vals(n + 1, result.value);
  for (std::size_t i = 0; i < n; ++i) {
    pts[i + 1][i] += opts.initial_step;
    vals[i + 1] = f(pts[i + 1]);
  }

  std::vector<std::size_t> order(n + 1);
  const auto combine = [n](const std::vector<double>& c, const std::vector<double>& x,
                           double coef) {
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) out[j] = c[j] + coef * (x[j] - c[j]);
    return out;
  };

  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t l, std::size_t r) { return vals[l] < vals[r]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[n - 1];

    double extent = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        extent = std::max(extent, std::abs(pts[i][j] - pts[best][j]));
      }
    }
    const bool f_flat = opts.f_tolerance > 0.0 && vals[worst] - vals[best] <= opts.f_tolerance;
    if (extent <= opts.x_tolerance || f_flat) {
      result.converged = true;
      break;
    }

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t j = 0; j < n; ++j) centroid[j] += pts[i][j] / static_cast<double>(n);
    }

    const auto reflected = combine(centroid, pts[worst], -1.0);
    const double f_r = f(reflected);
    if (f_r < vals[best]) {
      const auto expanded = combine(centroid, pts[worst], -2.0);
      const double f_e = f(expanded);
      if (f_e < f_r) {
        pts[worst] = expanded;
        vals[worst] = f_e;
      } else {
        pts[worst] = reflected;
        vals[worst] = f_r;
      }
      continue;
    }
    if (f_r < vals[second]) {
      pts[worst] = reflected;
      vals[worst] = f_r;
      continue;
    }
    const bool outside = f_r < vals[worst];
    const auto contracted = combine(centroid, pts[worst], outside ? -0.5 : 0.5);
    const double f_c = f(contracted);
    if (f_c < std::min(f_r, vals[worst])) {
      pts[worst] = contracted;
      vals[worst] = f_c;
      continue;
    }
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      pts[i] = combine(pts[best], pts[i], 0.5);
      vals[i] = f(pts[i]);
    }
  }

  result.iterations = it;
  const auto best_it = std::min_element(vals.begin(), vals.end());
  const std::size_t best = static_cast<std::size_t>(best_it - vals.begin());
  if (vals[best] <= result.value) {
    result.x = pts[best];
    result.value = vals[best];
  }
  return result;
}

}  // namespace cstirap
