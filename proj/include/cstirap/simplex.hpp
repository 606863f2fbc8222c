#pragma once

#include <functional>
#include <vector>

namespace cstirap {

struct SimplexOptions {
  int max_iterations = 2000;
  double x_tolerance = 1e-6;   // simplex extent in every coordinate
  double f_tolerance = 0.0;    // spread of function values; 0 disables
  double initial_step = 0.05;
};

struct SimplexResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Nelder-Mead downhill simplex with the standard coefficients
/// (reflection 1, expansion 2, contraction 1/2, shrink 1/2). The returned
/// point is the best vertex ever evaluated, so value <= f(x0).
SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          const std::vector<double>& x0, const SimplexOptions& opts = {});

}  // namespace cstirap
