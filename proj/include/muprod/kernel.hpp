#pragma once

#include <span>
#include <string>
#include <vector>

#include "muprod/biorthogonal.hpp"
#include "muprod/parameters.hpp"
#include "muprod/quadrature.hpp"

namespace muprod {

enum class KernelMethod { direct_sum, double_sum, christoffel_darboux, double_contour };

std::string to_string(KernelMethod m);
KernelMethod kernel_method_from_string(const std::string& s);

struct KernelValue {
  double x;
  double y;
  double value;
  KernelMethod method;
};

// Correlation kernel K_N(x, y) of the squared-singular-value process, N taken
// from sys.params(). The Christoffel-Darboux form needs N >= 2, tables up to
// N+1, and |x - y| > 1e-4 * max(x, y); inside that band it throws
// ProximityError and the caller should use the direct sum.
KernelValue kernel(double x, double y, const BiorthogonalSystem& sys, KernelMethod method,
                   const quad::ContourSpec& spec = {});

// Joint density of the N squared singular values. Coincident points give 0.
double jpdf(std::span<const double> points, const CouplingParameters& p);

// mu -> 1 limit of the jpdf (two independent Ginibre factors).
double jpdf_independent_limit(std::span<const double> points, int nu);
// mu -> 0 limit of the jpdf (Laguerre-type density in the y variables).
double jpdf_laguerre_limit(std::span<const double> points, int nu, int m_large);
// Classical Laguerre density in the variables v_i = 2 sqrt(y_i).
double laguerre_density(std::span<const double> v_points, int nu);

// Borodin Laguerre-type kernel K^Lag_N(x, y) (theta = 1).
double laguerre_type_kernel(double x, double y, int n_small, int nu);

}  // namespace muprod
