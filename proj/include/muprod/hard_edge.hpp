#pragma once

#include <complex>
#include <utility>

#include "muprod/biorthogonal.hpp"
#include "muprod/quadrature.hpp"

namespace muprod {

struct HardEdgeContext {
  int nu = 0;
  int gl_order = 12;            // Gauss-Legendre order per dyadic panel of the u-integral
  int panel_depth = 45;         // panels down to u = 2^{-panel_depth}
  quad::ContourSpec contour{0.5, 40.0, 2048};
};

// f(x) = G^{1,0}_{0,3}(-; 0, -nu, 0 | x) = sum_k (-1)^k x^k / ((k!)^2 (k+nu)!)
double meijer_f(double x, int nu);
// (x d/dx)^order f(x); exact term-wise differentiated series, order in {0,1,2}.
double meijer_f_logd(double x, int nu, int order);

// g(y) = G^{2,0}_{0,3}(-; nu, 0, 0 | y), Mellin-Barnes line quadrature.
double meijer_g(double y, int nu, const quad::ContourSpec& spec = {0.5, 40.0, 2048});
// Returns {g, (y d/dy) g, (y d/dy)^2 g} from one line pass: the derivative
// factors are polynomials in s under the integral, never finite differences.
struct MeijerGDerivatives {
  double g;
  double ydg;
  double yd2g;
};
MeijerGDerivatives meijer_g_derivatives(double y, int nu,
                                        const quad::ContourSpec& spec = {0.5, 40.0, 2048});

// Limiting hard-edge kernel K_nu(x,y) = int_0^1 f(ux) g(uy) du (product form).
double limiting_kernel(double x, double y, const HardEdgeContext& ctx);
// Grid evaluation sharing the g(u y) quadratures across all x: out[i][j] = K_nu(xs[i], ys[j]).
std::vector<std::vector<double>> limiting_kernel_grid(const std::vector<double>& xs,
                                                      const std::vector<double>& ys,
                                                      const HardEdgeContext& ctx);
// The same kernel from the derivative form; x != y required. Cross-check only.
double limiting_kernel_derivative_form(double x, double y, const HardEdgeContext& ctx);

// (1/(N s)) K_N(x/(N s), y/(N s)) with s = alpha^2 - delta^2, direct-sum form.
double rescaled_finite_kernel(double x, double y, const BiorthogonalSystem& sys);

// The finite-N functions A(s,t;N), B(s,t;N) entering the hard-edge proof.
std::pair<std::complex<double>, std::complex<double>> scaling_limit_AB(std::complex<double> s,
                                                                       std::complex<double> t,
                                                                       double n, int nu);

}  // namespace muprod
