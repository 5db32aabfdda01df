#include "muprod/hard_edge.hpp"

#include <cmath>
#include <stdexcept>

#include "muprod/dd.hpp"
#include "muprod/errors.hpp"
#include "muprod/kernel.hpp"
#include "muprod/biorth_check.hpp"
#include "muprod/specfun.hpp"

namespace muprod {

using specfun::cplx;

double meijer_f_logd(double x, int nu, int order) {
  if (x < 0.0) throw std::domain_error("meijer_f: x must be non-negative");
  if (order < 0 || order > 2) throw std::domain_error("meijer_f_logd: order in {0,1,2}");
  double term = 1.0 / std::tgamma(nu + 1.0);  // k = 0
  DDSum sum;
  if (order == 0) sum.add(term);
  for (int k = 1; k <= 400; ++k) {
    term *= -x / (static_cast<double>(k) * k * (k + nu));
    double w = (order == 0) ? 1.0 : (order == 1 ? k : static_cast<double>(k) * k);
    sum.add(w * term);
    if (std::fabs(term) * (k + 1.0) * (k + 1.0) < 1e-18 * (std::fabs(sum.value()) + 1e-300) &&
        k > 3)
      break;
  }
  return sum.value();
}

double meijer_f(double x, int nu) { return meijer_f_logd(x, nu, 0); }

MeijerGDerivatives meijer_g_derivatives(double y, int nu, const quad::ContourSpec& spec) {
  if (!(y > 0.0)) throw std::domain_error("meijer_g: y must be positive");
  if (!(spec.abscissa_c > 0.0)) throw std::domain_error("meijer_g: contour abscissa must be > 0");
  double ly = std::log(y);
  double h = 2.0 * spec.height_T / (spec.nodes - 1);
  cplx a0 = 0.0, a1 = 0.0, a2 = 0.0;
  for (int i = 0; i < spec.nodes; ++i) {
    double u = -spec.height_T + i * h;
    cplx s(spec.abscissa_c, u);
    cplx lg = specfun::log_gamma_complex(s) + specfun::log_gamma_complex(s + (double)nu) -
              specfun::log_gamma_complex(1.0 - s) - s * ly;
    cplx v = std::exp(lg);
    if (i == 0 || i == spec.nodes - 1) v *= 0.5;
    a0 += v;
    a1 += s * v;
    a2 += s * s * v;
  }
  double c = h / (2.0 * specfun::pi);
  // y^{-s} differentiates to (-s) y^{-s} under y d/dy.
  return {c * a0.real(), -c * a1.real(), c * a2.real()};
}

double meijer_g(double y, int nu, const quad::ContourSpec& spec) {
  return meijer_g_derivatives(y, nu, spec).g;
}

double limiting_kernel(double x, double y, const HardEdgeContext& ctx) {
  if (!(x > 0.0) || !(y > 0.0)) throw std::domain_error("limiting_kernel: x, y must be positive");
  const auto& [nodes, weights] = quad::gauss_legendre_nodes(ctx.gl_order);
  // Dyadic panels toward u = 0: g(uy) carries a logarithmic endpoint term, so
  // geometric refinement buys spectral accuracy per panel.
  double total = 0.0;
  double hi = 1.0;
  for (int d = 0; d < ctx.panel_depth; ++d) {
    double lo = hi * 0.5;
    double w = hi - lo;
    double panel = 0.0;
    for (size_t i = 0; i < nodes.size(); ++i) {
      double u = lo + w * nodes[i];
      panel += weights[i] * meijer_f(u * x, ctx.nu) * meijer_g(u * y, ctx.nu, ctx.contour);
    }
    total += w * panel;
    hi = lo;
  }
  return total;
}

std::vector<std::vector<double>> limiting_kernel_grid(const std::vector<double>& xs,
                                                      const std::vector<double>& ys,
                                                      const HardEdgeContext& ctx) {
  const auto& [nodes, weights] = quad::gauss_legendre_nodes(ctx.gl_order);
  // Flatten the dyadic panels into one weighted node list on (0, 1].
  std::vector<double> u, w;
  double hi = 1.0;
  for (int d = 0; d < ctx.panel_depth; ++d) {
    double lo = hi * 0.5;
    double pw = hi - lo;
    for (size_t i = 0; i < nodes.size(); ++i) {
      u.push_back(lo + pw * nodes[i]);
      w.push_back(pw * weights[i]);
    }
    hi = lo;
  }
  std::vector<std::vector<double>> out(xs.size(), std::vector<double>(ys.size(), 0.0));
  for (size_t j = 0; j < ys.size(); ++j) {
    std::vector<double> gv(u.size());
    for (size_t q = 0; q < u.size(); ++q) gv[q] = meijer_g(u[q] * ys[j], ctx.nu, ctx.contour);
    for (size_t i = 0; i < xs.size(); ++i) {
      double acc = 0.0;
      for (size_t q = 0; q < u.size(); ++q)
        acc += w[q] * meijer_f(u[q] * xs[i], ctx.nu) * gv[q];
      out[i][j] = acc;
    }
  }
  return out;
}

double limiting_kernel_derivative_form(double x, double y, const HardEdgeContext& ctx) {
  if (!(x > 0.0) || !(y > 0.0))
    throw std::domain_error("limiting_kernel_derivative_form: x, y must be positive");
  if (x == y) throw ProximityError("derivative form undefined at x == y");
  double f = meijer_f_logd(x, ctx.nu, 0);
  double xdf = meijer_f_logd(x, ctx.nu, 1);
  double xd2f = meijer_f_logd(x, ctx.nu, 2);
  auto gd = meijer_g_derivatives(y, ctx.nu, ctx.contour);
  double num = f * (ctx.nu * gd.ydg - gd.yd2g) + xdf * (-ctx.nu * gd.g + gd.ydg) - xd2f * gd.g;
  return num / (x - y);
}

double rescaled_finite_kernel(double x, double y, const BiorthogonalSystem& sys) {
  const auto& p = sys.params();
  double c = 1.0 / (p.n_small * p.s);  // = mu / N
  // At the rescaled (tiny) arguments the Q_n sums cancel through
  // binom(N, N/2); beyond N ~ 30 the direct sum needs extended precision.
  if (p.n_small > 30) return c * kernel_direct_extended(c * x, c * y, sys);
  return c * kernel(c * x, c * y, sys, KernelMethod::direct_sum).value;
}

std::pair<cplx, cplx> scaling_limit_AB(cplx s, cplx t, double n, int nu) {
  // The two O(N^2) pieces cancel to O(1); 80-bit arithmetic keeps the
  // cancellation error well below the 1e-4 comparison scale at N = 1e6.
  using C = std::complex<long double>;
  C S(s.real(), s.imag()), T(t.real(), t.imag());
  long double N = n, V = nu;
  if (std::abs(S - C(N, 0)) < 1e-8 * N || std::abs(S - C(N - 1, 0)) < 1e-8 * N ||
      std::abs(T - C(N, 0)) < 1e-8 * N || std::abs(T - C(N + 1, 0)) < 1e-8 * N)
    throw std::domain_error("scaling_limit_AB: s or t too close to a pole");
  const long double one = 1.0L, two = 2.0L;
  C A = N * N * (N + V) / (S - N) - (T - N) * (S + T + N + V);
  C B = N * (N + one) * (N + V) * (N + V + one) / ((T - N - one) * (S - N)) +
        N * (N - one) * (N + V) * (N + V - one) / ((S - N + one) * (S - N)) +
        two * N * (N + V) * (two * N + V) / (S - N) - (T - N) * (T + S + two * N + two * V);
  return {cplx((double)A.real(), (double)A.imag()), cplx((double)B.real(), (double)B.imag())};
}

}  // namespace muprod
