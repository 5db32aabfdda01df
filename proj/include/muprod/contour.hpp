#pragma once

#include "muprod/biorthogonal.hpp"
#include "muprod/quadrature.hpp"

namespace muprod {

// P_n(x) from its closed-contour representation, evaluated as the exact
// residue sum over the n+1 poles of Gamma(t-n) at t = 0..n.
double eval_P_contour(int n, double x, const BiorthogonalSystem& sys);

// Q_n(y) from its Mellin-Barnes line representation, truncated trapezoid
// quadrature on Re s = spec.abscissa_c.
double eval_Q_contour(int n, double y, const BiorthogonalSystem& sys,
                      const quad::ContourSpec& spec = {});

// Correlation kernel from the double contour representation: residue sum in
// t, line quadrature in s, summed over the geometric (delta^2/alpha^2)^k
// ladder. If k_terms is given it receives the N ladder contributions.
double kernel_double_contour(double x, double y, const BiorthogonalSystem& sys,
                             const quad::ContourSpec& spec = {},
                             std::vector<double>* k_terms = nullptr);

}  // namespace muprod
