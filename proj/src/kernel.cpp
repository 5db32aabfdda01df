#include "muprod/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "muprod/contour.hpp"
#include "muprod/dd.hpp"
#include "muprod/errors.hpp"
#include "muprod/specfun.hpp"

namespace muprod {

using rat::BigInt;
using rat::ExactRational;
using rat::factorial;

std::string to_string(KernelMethod m) {
  switch (m) {
    case KernelMethod::direct_sum: return "direct-sum";
    case KernelMethod::double_sum: return "double-sum";
    case KernelMethod::christoffel_darboux: return "christoffel-darboux";
    case KernelMethod::double_contour: return "double-contour";
  }
  return "?";
}

KernelMethod kernel_method_from_string(const std::string& s) {
  if (s == "direct" || s == "direct-sum") return KernelMethod::direct_sum;
  if (s == "double" || s == "double-sum") return KernelMethod::double_sum;
  if (s == "cd" || s == "christoffel-darboux") return KernelMethod::christoffel_darboux;
  if (s == "contour" || s == "double-contour") return KernelMethod::double_contour;
  throw std::invalid_argument("unknown kernel method: " + s);
}

namespace {

double kernel_direct(double x, double y, const BiorthogonalSystem& sys) {
  int N = sys.params().n_small;
  auto P = sys.eval_P_all(N - 1, x);
  auto Q = sys.eval_Q_all(N - 1, y);
  DDSum sum;
  for (int n = 0; n < N; ++n) sum.add_prod(P[n], Q[n]);
  return sum.value();
}

double kernel_double_sum(double x, double y, const BiorthogonalSystem& sys) {
  const auto& p = sys.params();
  int N = p.n_small, nu = p.nu;
  // Coefficient in front of S_k(x) T_{l+nu}(y), exact up to the power factors:
  //   2 (l+nu)!/k! sum_i (-1)^{i+k} (nu+N+i)! /
  //     [(N-1-k)! (nu+k)! i! (l-i)! k! (nu+i)! (nu+k+i+1)]
  auto S = [&] {
    std::vector<double> t(N);
    double q = p.delta * p.delta * x;
    double xk = 1.0;
    for (int k = 0; k < N; ++k) {
      t[k] = (x == 0.0 && k > 0) ? 0.0 : xk * specfun::hyp0f1(k + 1.0, q);
      xk *= x;
    }
    return t;
  }();
  auto T = k_hat_table(y, p, N - 1 + nu);  // plain table, then normalized below
  // convert to T_m = alpha^m/m! * y^{m/2} K_m
  {
    double f = 1.0;
    for (int m = 0; m < static_cast<int>(T.size()); ++m) {
      T[m] *= f;
      f *= p.alpha / (m + 1.0);
    }
  }
  double sq = p.s / (p.alpha * p.alpha);
  DDSum sum;
  for (int k = 0; k < N; ++k) {
    for (int l = 0; l < N; ++l) {
      ExactRational c(0);
      for (int i = 0; i <= l; ++i) {
        int sign = ((i + k) % 2 == 0) ? 1 : -1;
        BigInt num = sign * factorial(nu + N + i);
        BigInt den = factorial(N - 1 - k) * factorial(nu + k) * factorial(i) *
                     factorial(l - i) * factorial(k) * factorial(nu + i) *
                     BigInt(nu + k + i + 1);
        c += ExactRational(num, den);
      }
      c *= ExactRational(2 * factorial(l + nu), factorial(k));
      c.canonicalize();
      double coef = c.get_d() * std::pow(p.s, k + 1.0) * std::pow(sq, static_cast<double>(l + nu));
      sum.add(coef * S[k] * T[l + nu]);
    }
  }
  return sum.value();
}

double kernel_cd(double x, double y, const BiorthogonalSystem& sys) {
  const auto& p = sys.params();
  int N = p.n_small;
  if (N < 2) throw std::domain_error("christoffel-darboux form requires N >= 2");
  if (sys.max_n() < N + 1)
    throw CapacityError("christoffel-darboux form needs tables up to N+1");
  if (std::fabs(x - y) <= 1e-4 * std::max(x, y))
    throw ProximityError("christoffel-darboux form near the diagonal; use direct-sum");
  auto P = sys.eval_P_all(N + 1, x);
  auto Q = sys.eval_Q_all(N + 1, y);
  auto aN = recurrence_a(N, p);
  auto aNp1 = recurrence_a(N + 1, p);
  auto aNm1 = recurrence_a(N - 1, p);
  auto aNm2 = recurrence_a(N - 2, p);
  // index map: [0]=a_{-2}, [1]=a_{-1}, [3]=a_{1}, [4]=a_{2}
  double num = -(aN[0] * P[N - 2] * Q[N] + aNp1[0] * P[N - 1] * Q[N + 1] +
                 aN[1] * P[N - 1] * Q[N]) +
               (aNm1[3] * P[N] * Q[N - 1] + aNm2[4] * P[N] * Q[N - 2] +
                aNm1[4] * P[N + 1] * Q[N - 1]);
  return num / (x - y);
}

// log|det| and sign via LU with partial pivoting; returns sign 0 for an
// exactly singular matrix.
struct LogDet {
  double log_abs;
  int sign;
};

LogDet log_det(std::vector<double> m, int n) {
  int sign = 1;
  double log_abs = 0.0;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    double best = std::fabs(m[c * n + c]);
    for (int r = c + 1; r < n; ++r) {
      double v = std::fabs(m[r * n + c]);
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best == 0.0) return {-std::numeric_limits<double>::infinity(), 0};
    if (piv != c) {
      for (int j = 0; j < n; ++j) std::swap(m[piv * n + j], m[c * n + j]);
      sign = -sign;
    }
    double d = m[c * n + c];
    log_abs += std::log(std::fabs(d));
    if (d < 0.0) sign = -sign;
    for (int r = c + 1; r < n; ++r) {
      double f = m[r * n + c] / d;
      for (int j = c; j < n; ++j) m[r * n + j] -= f * m[c * n + j];
    }
  }
  return {log_abs, sign};
}

bool has_duplicates(std::span<const double> pts) {
  std::vector<double> v(pts.begin(), pts.end());
  std::sort(v.begin(), v.end());
  return std::adjacent_find(v.begin(), v.end()) != v.end();
}

double log_z_n(const CouplingParameters& p) {
  int N = p.n_small, nu = p.nu;
  double lz = specfun::log_gamma(N + 1.0);
  lz += (N * nu + 0.5 * N * (N - 1.0)) * std::log(p.alpha);
  lz += 0.5 * N * (N - 1.0) * std::log(p.delta);
  lz -= N * std::log(2.0);
  lz -= (N * nu + static_cast<double>(N) * N) * std::log(p.s);
  for (int j = 1; j <= N; ++j)
    lz += specfun::log_gamma(j) + specfun::log_gamma(j + nu);
  return lz;
}

}  // namespace

KernelValue kernel(double x, double y, const BiorthogonalSystem& sys, KernelMethod method,
                   const quad::ContourSpec& spec) {
  if (!(x > 0.0) || !(y > 0.0)) throw std::domain_error("kernel: x, y must be positive");
  if (sys.max_n() < sys.params().n_small - 1)
    throw CapacityError("kernel: tables shorter than N-1");
  double v = 0.0;
  switch (method) {
    case KernelMethod::direct_sum: v = kernel_direct(x, y, sys); break;
    case KernelMethod::double_sum: v = kernel_double_sum(x, y, sys); break;
    case KernelMethod::christoffel_darboux: v = kernel_cd(x, y, sys); break;
    case KernelMethod::double_contour: v = kernel_double_contour(x, y, sys, spec); break;
  }
  return {x, y, v, method};
}

double jpdf(std::span<const double> points, const CouplingParameters& p) {
  int N = p.n_small, nu = p.nu;
  if (static_cast<int>(points.size()) != N)
    throw std::invalid_argument("jpdf: expected exactly N points");
  for (double y : points)
    if (!(y > 0.0)) throw std::domain_error("jpdf: points must be positive");
  if (has_duplicates(points)) return 0.0;

  // Row i of the I-matrix carries e^{+2 delta sqrt(y_i)}, row i of the
  // K-matrix e^{-2 alpha sqrt(y_i)}; with alpha - delta = 1 the exponents
  // combine to exp(-2 sum_i sqrt(y_i)), applied in log space.
  std::vector<double> mi(N * N), mk(N * N);
  double sum_sqrt = 0.0;
  for (int i = 0; i < N; ++i) {
    double y = points[i];
    double r = std::sqrt(y);
    sum_sqrt += r;
    double zi = 2.0 * p.delta * r;
    for (int j = 0; j < N; ++j)
      mi[i * N + j] = std::pow(y, 0.5 * j) * specfun::bessel_i_scaled(j, zi);
    double zk = 2.0 * p.alpha * r;
    // scaled K ladder: t_m = e^{z} y^{m/2} K_m(2 alpha sqrt(y))
    std::vector<double> t(N + nu);
    t[0] = specfun::bessel_k_scaled(0, zk);
    if (N + nu > 1) t[1] = r * specfun::bessel_k_scaled(1, zk);
    for (int m = 1; m + 1 < N + nu; ++m) t[m + 1] = (m / p.alpha) * t[m] + y * t[m - 1];
    for (int j = 0; j < N; ++j) mk[i * N + j] = t[j + nu];
  }
  LogDet di = log_det(std::move(mi), N);
  LogDet dk = log_det(std::move(mk), N);
  if (di.sign == 0 || dk.sign == 0) return 0.0;
  double lv = di.log_abs + dk.log_abs - 2.0 * sum_sqrt - log_z_n(p);
  return di.sign * dk.sign * std::exp(lv);
}

double jpdf_independent_limit(std::span<const double> points, int nu) {
  int N = static_cast<int>(points.size());
  std::vector<double> mv(N * N), mg(N * N);
  for (int i = 0; i < N; ++i) {
    double y = points[i];
    if (!(y > 0.0)) throw std::domain_error("jpdf_independent_limit: points must be positive");
    double z = 2.0 * std::sqrt(y);
    for (int j = 1; j <= N; ++j) {
      mv[i * N + (j - 1)] = std::pow(y, j - 1.0);
      int l = j + nu - 1;
      mg[i * N + (j - 1)] = 2.0 * std::pow(y, 0.5 * l) * specfun::bessel_k(l, z);
    }
  }
  LogDet dv = log_det(std::move(mv), N);
  LogDet dg = log_det(std::move(mg), N);
  if (dv.sign == 0 || dg.sign == 0) return 0.0;
  double lnorm = specfun::log_gamma(N + 1.0);
  for (int j = 1; j <= N; ++j)
    lnorm += 2.0 * specfun::log_gamma(j) + specfun::log_gamma(j + nu);
  return dv.sign * dg.sign * std::exp(dv.log_abs + dg.log_abs - lnorm);
}

double jpdf_laguerre_limit(std::span<const double> points, int nu, int m_large) {
  int N = static_cast<int>(points.size());
  std::vector<double> mv(N * N);
  double extra = 0.0;
  for (int i = 0; i < N; ++i) {
    double y = points[i];
    if (!(y > 0.0)) throw std::domain_error("jpdf_laguerre_limit: points must be positive");
    for (int j = 1; j <= N; ++j) mv[i * N + (j - 1)] = std::pow(y, 0.5 * (j - 1.0));
    extra += 0.5 * (nu - 1.0) * std::log(y) - 2.0 * std::sqrt(y);
  }
  LogDet dv = log_det(std::move(mv), N);
  if (dv.sign == 0) return 0.0;
  double lnorm = specfun::log_gamma(N + 1.0);
  for (int j = 1; j <= N; ++j)
    lnorm += specfun::log_gamma(j) + specfun::log_gamma(j + nu);
  double lv = N * (m_large - 1.0) * std::log(2.0) + 2.0 * dv.log_abs + extra - lnorm;
  return std::exp(lv);
}

double laguerre_density(std::span<const double> v_points, int nu) {
  int N = static_cast<int>(v_points.size());
  std::vector<double> mv(N * N);
  double extra = 0.0;
  for (int i = 0; i < N; ++i) {
    double v = v_points[i];
    if (!(v > 0.0)) throw std::domain_error("laguerre_density: points must be positive");
    for (int j = 1; j <= N; ++j) mv[i * N + (j - 1)] = std::pow(v, j - 1.0);
    extra += nu * std::log(v) - v;
  }
  LogDet dv = log_det(std::move(mv), N);
  if (dv.sign == 0) return 0.0;
  double lnorm = specfun::log_gamma(N + 1.0);
  for (int j = 1; j <= N; ++j)
    lnorm += specfun::log_gamma(j) + specfun::log_gamma(j + nu);
  return std::exp(2.0 * dv.log_abs + extra - lnorm);
}

double laguerre_type_kernel(double x, double y, int n_small, int nu) {
  if (!(x > 0.0) || !(y > 0.0))
    throw std::domain_error("laguerre_type_kernel: x, y must be positive");
  int N = n_small;
  DDSum sum;
  for (int k = 0; k < N; ++k) {
    for (int l = 0; l < N; ++l) {
      ExactRational c(0);
      for (int i = 0; i <= l; ++i) {
        int sign = ((i + k) % 2 == 0) ? 1 : -1;
        BigInt num = sign * factorial(nu + N + i);
        BigInt den = factorial(N - 1 - k) * factorial(nu + k) * factorial(i) *
                     factorial(l - i) * factorial(k) * factorial(nu + i) *
                     BigInt(nu + k + i + 1);
        c += ExactRational(num, den);
      }
      c.canonicalize();
      double coef = c.get_d() * std::pow(2.0, k + l + nu);
      sum.add(coef * std::pow(x, 0.5 * k) * std::pow(y, 0.5 * (l + nu)));
    }
  }
  double pref = std::exp(-std::sqrt(x) - std::sqrt(y)) / std::pow(x * y, 0.25);
  return pref * sum.value();
}

}  // namespace muprod
