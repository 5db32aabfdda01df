#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace muprod::quad {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long evaluations = 0;
};

// Vertical Mellin-Barnes line Re s = abscissa_c, truncated at |Im s| <= height_T,
// sampled with `nodes` trapezoid points.
struct ContourSpec {
  double abscissa_c = 0.5;
  double height_T = 80.0;
  int nodes = 4096;
};

using Integrand = std::function<double(double)>;

// Adaptive Gauss-Kronrod (7,15) on a finite interval.
QuadratureResult integrate(const Integrand& f, double a, double b, double tol);

// Integral over [0, inf) for integrands with exponential decay. Splits at 1
// and maps [1, inf) through x = 1 + t/(1-t). Throws ConvergenceError (with
// the partial estimate) if the subdivision cap is reached without meeting tol.
QuadratureResult integrate_semi_infinite(const Integrand& f, double tol);

// Gauss-Legendre nodes and weights on [0, 1], 2 <= n <= 512. Tables are
// cached after first construction.
const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre_nodes(int n);

}  // namespace muprod::quad
