#include "muprod/contour.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "muprod/dd.hpp"
#include "muprod/errors.hpp"
#include "muprod/specfun.hpp"

namespace muprod {

using specfun::cplx;
using rat::BigInt;
using rat::ExactRational;
using rat::factorial;

double eval_P_contour(int n, double x, const BiorthogonalSystem& sys) {
  if (n < 0) throw std::domain_error("eval_P_contour: n must be >= 0");
  if (x < 0.0) throw std::domain_error("eval_P_contour: x must be non-negative");
  const auto& p = sys.params();
  // Res_{t=j} Gamma(t-n) = (-1)^{n-j}/(n-j)!; everything else is regular.
  double q = p.delta * p.delta * x;
  DDSum sum;
  for (int j = 0; j <= n; ++j) {
    int sign = ((n - j) % 2 == 0) ? 1 : -1;
    ExactRational c(sign * factorial(p.nu + n) * factorial(n) * factorial(n),
                    factorial(n - j) * factorial(j) * factorial(j) * factorial(p.nu + j));
    c.canonicalize();
    double term = c.get_d() * std::pow(p.s * x, static_cast<double>(j)) *
                  specfun::hyp0f1(j + 1.0, q);
    sum.add(term);
  }
  return std::sqrt(p.s) * sum.value();
}

namespace {

void check_contour(const quad::ContourSpec& spec) {
  if (!(spec.abscissa_c > 0.0)) throw std::domain_error("ContourSpec: abscissa must be > 0");
  if (spec.nodes < 64) throw std::domain_error("ContourSpec: need at least 64 nodes");
  if (!(spec.height_T > 0.0)) throw std::domain_error("ContourSpec: height must be > 0");
}

}  // namespace

double eval_Q_contour(int n, double y, const BiorthogonalSystem& sys,
                      const quad::ContourSpec& spec) {
  if (n < 0) throw std::domain_error("eval_Q_contour: n must be >= 0");
  if (!(y > 0.0)) throw std::domain_error("eval_Q_contour: y must be positive");
  check_contour(spec);
  const auto& p = sys.params();
  double z = (p.delta * p.delta) / (p.alpha * p.alpha);
  double la2y = std::log(p.alpha * p.alpha * y);

  auto integrand = [&](double u) -> cplx {
    cplx s(spec.abscissa_c, u);
    cplx lg = 2.0 * specfun::log_gamma_complex(s) + specfun::log_gamma_complex(s + (double)p.nu) -
              specfun::log_gamma_complex(s - (double)n) - s * la2y;
    cplx f = specfun::hyp2f1_terminating(n, s + (double)p.nu, s - (double)n, z);
    return std::exp(lg) * f;
  };

  double h = 2.0 * spec.height_T / (spec.nodes - 1);
  cplx acc = 0.0;
  for (int i = 0; i < spec.nodes; ++i) {
    double u = -spec.height_T + i * h;
    cplx v = integrand(u);
    if (i == 0 || i == spec.nodes - 1) v *= 0.5;
    acc += v;
  }
  double tail = (std::abs(integrand(spec.height_T)) + std::abs(integrand(-spec.height_T)));
  double lpref = p.nu * std::log(1.0 - z) + 0.5 * std::log(p.s) -
                 2.0 * specfun::log_gamma(n + 1.0) - specfun::log_gamma(n + p.nu + 1.0);
  double pref = std::exp(lpref);
  double value = pref * (h / (2.0 * specfun::pi)) * acc.real();
  double trunc_est = pref * tail / (2.0 * specfun::pi);
  if (trunc_est > 1e-6 * std::fabs(value) + 1e-250)
    throw ConvergenceError("eval_Q_contour: truncation height too small", value, trunc_est);
  return value;
}

double kernel_double_contour(double x, double y, const BiorthogonalSystem& sys,
                             const quad::ContourSpec& spec, std::vector<double>* k_terms) {
  if (!(x > 0.0) || !(y > 0.0))
    throw std::domain_error("kernel_double_contour: x, y must be positive");
  check_contour(spec);
  const auto& p = sys.params();
  const int N = p.n_small, nu = p.nu;
  const double z = (p.delta * p.delta) / (p.alpha * p.alpha);
  const double la2y = std::log(p.alpha * p.alpha * y);
  const double q0f1 = p.delta * p.delta * x;

  // Residue factors at t = j of Gamma(t-N+1) times the regular t-part:
  //   R_j = (-1)^{N-1-j}/(N-1-j)! * s^{j+1} x^j 0F1(;j+1;delta^2 x) / ((j!)^2 (j+nu)!)
  std::vector<double> R(N);
  for (int j = 0; j < N; ++j) {
    int sign = ((N - 1 - j) % 2 == 0) ? 1 : -1;
    double lg = -specfun::log_gamma(N - j) - 2.0 * specfun::log_gamma(j + 1.0) -
                specfun::log_gamma(j + nu + 1.0);
    R[j] = sign * std::exp(lg + (j + 1.0) * std::log(p.s)) * std::pow(x, j) *
           specfun::hyp0f1(j + 1.0, q0f1);
  }

  std::vector<double> binom(N + 1);
  for (int m = 0; m <= N; ++m) {
    binom[m] = std::exp(specfun::log_gamma(N + 1.0) - specfun::log_gamma(m + 1.0) -
                        specfun::log_gamma(N - m + 1.0));
  }

  const double h = 2.0 * spec.height_T / (spec.nodes - 1);
  // One pass over line nodes; per node precompute the Gamma ladders in k, m.
  std::vector<cplx> lg_nk(N), lg_nm(N);
  std::vector<DDSum> acc_k(N);
  for (int i = 0; i < spec.nodes; ++i) {
    double u = -spec.height_T + i * h;
    cplx s(spec.abscissa_c, u);
    cplx base = 2.0 * specfun::log_gamma_complex(s) - s * la2y;
    for (int k = 0; k < N; ++k) lg_nk[k] = specfun::log_gamma_complex(s + (double)(nu + k));
    for (int m = 0; m < N; ++m) lg_nm[m] = specfun::log_gamma_complex(s + (double)(m - N));
    double wt = (i == 0 || i == spec.nodes - 1) ? 0.5 : 1.0;
    double zk = 1.0;
    for (int k = 0; k < N; ++k) {
      cplx ksum = 0.0;
      for (int m = 0; m <= k; ++m) {
        cplx g = std::exp(base + lg_nk[k] - lg_nm[m]);
        // sum over t-residues; the paired rational factor is
        // 1 / prod_{q=0}^{k-m} (s - j + m - 1 + q)
        cplx jsum = 0.0;
        for (int j = 0; j < N; ++j) {
          cplx prod = 1.0;
          for (int q = 0; q <= k - m; ++q) prod *= s + (double)(m - 1 + q - j);
          jsum += R[j] / prod;
        }
        double csign = (m % 2 == 0) ? 1.0 : -1.0;
        ksum += csign * binom[m] * zk * g * jsum;
      }
      acc_k[k].add(wt * ksum.real());
      zk *= z;
    }
  }
  double pref = std::pow(1.0 - z, nu) * h / (2.0 * specfun::pi);
  DDSum total;
  if (k_terms) k_terms->assign(N, 0.0);
  for (int k = 0; k < N; ++k) {
    double term = pref * acc_k[k].value();
    if (k_terms) (*k_terms)[k] = term;
    total.add(term);
  }
  return total.value();
}

}  // namespace muprod
