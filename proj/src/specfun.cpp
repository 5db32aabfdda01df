#include "muprod/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "muprod/dd.hpp"
#include "muprod/errors.hpp"

namespace muprod::specfun {

namespace {

// Lanczos g = 7, 9 terms (Godfrey's coefficients).
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,    -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,  12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

constexpr double kLogSqrt2Pi = 0.91893853320467274178;

double lanczos_log_gamma_pos(double x) {
  // Valid for x >= 0.5.
  double acc = kLanczos[0];
  for (int i = 1; i < 9; ++i) acc += kLanczos[i] / (x - 1.0 + i);
  double t = x + kLanczosG - 0.5;
  return kLogSqrt2Pi + (x - 0.5) * std::log(t) - t + std::log(acc);
}

cplx lanczos_log_gamma_pos(cplx z) {
  cplx acc = kLanczos[0];
  for (int i = 1; i < 9; ++i) acc += kLanczos[i] / (z - 1.0 + static_cast<double>(i));
  cplx t = z + (kLanczosG - 0.5);
  return kLogSqrt2Pi + (z - 0.5) * std::log(t) - t + std::log(acc);
}

bool near_nonpositive_integer(cplx z, double tol) {
  if (z.real() > 0.5) return false;
  double r = std::round(z.real());
  if (r > 0.5) return false;
  return std::abs(z - cplx(r, 0.0)) < tol;
}

// Series term cap shared by all hypergeometric-type sums.
constexpr int kSeriesCap = 500;
constexpr double kSeriesEps = 1e-17;

// a_m(k) recursion factor for the large-argument expansions of I_k and K_k:
// a_m = a_{m-1} * (4k^2 - (2m-1)^2) / (8 m).
double asym_factor(int k, int m) {
  double fk2 = 4.0 * k * k;
  double o = 2.0 * m - 1.0;
  return (fk2 - o * o) / (8.0 * m);
}

double bessel_i_series(int k, double z) {
  // Ascending series; all terms positive, no cancellation.
  double half = 0.5 * z;
  double lterm0 = k * std::log(half) - log_gamma(k + 1.0);
  if (lterm0 < -745.0 && k > 0) {
    // Leading term underflows; build in log space until representable.
    // For the argument ranges used here this only happens at z ~ 0.
    return std::exp(lterm0);  // higher terms negligible
  }
  double term = std::exp(lterm0);
  double q = half * half;
  DDSum sum;
  sum.add(term);
  for (int m = 1; m <= kSeriesCap; ++m) {
    term *= q / (static_cast<double>(m) * (m + k));
    sum.add(term);
    if (term < kSeriesEps * sum.value()) return sum.value();
  }
  return sum.value();
}

double bessel_i_asym_scaled(int k, double z) {
  // e^{-z} I_k(z) ~ (2 pi z)^{-1/2} sum_m (-1)^m a_m(k) / z^m.
  double term = 1.0;
  DDSum sum;
  sum.add(term);
  for (int m = 1; m <= 60; ++m) {
    term *= -asym_factor(k, m) / z;
    sum.add(term);
    if (std::fabs(term) < 1e-18) break;
  }
  return sum.value() / std::sqrt(2.0 * pi * z);
}

// Asymptotic regime gate: the smallest term of the expansion sits far below
// 1e-13 once z is comfortably past both 50 and the order scale k^2.
bool i_asym_ok(int k, double z) { return z > 50.0 && 4.0 * k * k + 20.0 < z; }

double bessel_k_series(int k01, double z) {
  // Ascending series for K_0, K_1 (A&S 9.6.11/9.6.13 rearranged).
  double q = 0.25 * z * z;
  double lh = std::log(0.5 * z);
  if (k01 == 0) {
    // K_0 = -(ln(z/2)+gamma) I_0(z) + sum_{m>=1} q^m/(m!)^2 H_m
    double i0 = bessel_i_series(0, z);
    DDSum sum;
    sum.add(-(lh + euler_gamma) * i0);
    double term = 1.0;
    double h = 0.0;
    for (int m = 1; m <= kSeriesCap; ++m) {
      term *= q / (static_cast<double>(m) * m);
      h += 1.0 / m;
      double t = term * h;
      sum.add(t);
      if (t < kSeriesEps * std::fabs(sum.value()) && m > 4) break;
    }
    return sum.value();
  }
  // K_1 = 1/z + ln(z/2) I_1(z) - (z/4) sum_i [psi(i+1)+psi(i+2)] q^i/(i!(i+1)!)
  double i1 = bessel_i_series(1, z);
  DDSum sum;
  sum.add(1.0 / z);
  sum.add(lh * i1);
  double term = 1.0;  // q^i / (i! (i+1)!)
  for (int i = 0; i <= kSeriesCap; ++i) {
    if (i > 0) term *= q / (static_cast<double>(i) * (i + 1));
    double psi_sum = digamma_int(i + 1) + digamma_int(i + 2);
    double t = -0.25 * z * term * psi_sum;
    sum.add(t);
    if (std::fabs(t) < kSeriesEps * std::fabs(sum.value()) && i > 4) break;
  }
  return sum.value();
}

double bessel_k_asym_scaled(int k01, double z) {
  // e^{z} K_k(z) ~ sqrt(pi/(2z)) sum_m a_m(k)/z^m  (no sign alternation vs I).
  double term = 1.0;
  DDSum sum;
  sum.add(term);
  double prev = std::fabs(term);
  for (int m = 1; m <= 80; ++m) {
    term *= asym_factor(k01, m) / z;
    if (std::fabs(term) > prev) break;  // past the smallest term
    prev = std::fabs(term);
    sum.add(term);
    if (std::fabs(term) < 1e-18) break;
  }
  return sum.value() * std::sqrt(pi / (2.0 * z));
}

// Fixed 32-point Gauss-Legendre rule on [-1,1], built once by Newton
// iteration on the Legendre recurrence. Local to specfun so the module stays
// self-contained.
struct GL32 {
  std::array<double, 32> x{}, w{};
  GL32() {
    const int n = 32;
    for (int i = 0; i < n / 2; ++i) {
      double t = std::cos(pi * (i + 0.75) / (n + 0.5));
      double p0 = 0, p1 = 0, dp = 0;
      for (int it = 0; it < 100; ++it) {
        p0 = 1.0;
        p1 = t;
        for (int j = 2; j <= n; ++j) {
          double p2 = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (t * p1 - p0) / (t * t - 1.0);
        double dt = p1 / dp;
        t -= dt;
        if (std::fabs(dt) < 1e-15) break;
      }
      x[i] = -t;
      x[n - 1 - i] = t;
      w[i] = w[n - 1 - i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
  }
};
const GL32& gl32() {
  static const GL32 rule;
  return rule;
}

double bessel_k_coshint_scaled(int k01, double z) {
  // e^z K_k(z) = int_0^inf e^{-z(cosh t - 1)} cosh(k t) dt, composite GL
  // panels of width 0.5 up to where the integrand underflows.
  double tmax = std::acosh(1.0 + 745.0 / z);
  const auto& rule = gl32();
  double total = 0.0;
  double a = 0.0;
  while (a < tmax) {
    double b = std::min(a + 0.5, tmax);
    double hw = 0.5 * (b - a);
    double mid = 0.5 * (a + b);
    double panel = 0.0;
    for (int i = 0; i < 32; ++i) {
      double t = mid + hw * rule.x[i];
      double f = std::exp(-z * (std::cosh(t) - 1.0)) * std::cosh(k01 * t);
      panel += rule.w[i] * f;
    }
    total += hw * panel;
    a = b;
  }
  return total;
}

std::pair<double, double> bessel_k_base(int k01, double z, bool scaled) {
  // Returns (value, unused); dispatch between series / quadrature / asymptotic.
  if (z <= 6.0) {
    double v = bessel_k_series(k01, z);
    return {scaled ? v * std::exp(z) : v, 0.0};
  }
  if (z < 25.0) {
    double v = bessel_k_coshint_scaled(k01, z);
    return {scaled ? v : v * std::exp(-z), 0.0};
  }
  double v = bessel_k_asym_scaled(k01, z);
  return {scaled ? v : v * std::exp(-z), 0.0};
}

double bessel_k_impl(int k, double z, bool scaled) {
  if (z <= 0.0) throw std::domain_error("bessel_k: argument must be positive");
  if (k < 0) k = -k;  // K_{-v} = K_v
  double k0 = bessel_k_base(0, z, scaled).first;
  if (k == 0) return k0;
  double k1 = bessel_k_base(1, z, scaled).first;
  if (k == 1) return k1;
  // Upward recurrence K_{j+1} = K_{j-1} + (2j/z) K_j (stable: K grows in order).
  double prev = k0, cur = k1;
  for (int j = 1; j < k; ++j) {
    double next = prev + (2.0 * j / z) * cur;
    prev = cur;
    cur = next;
    if (!std::isfinite(cur)) throw std::overflow_error("bessel_k: overflow in recurrence");
  }
  return cur;
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("log_gamma: argument must be positive");
  return lanczos_log_gamma_pos(x);
}

SignedLogGamma log_gamma_signed(double x) {
  if (x > 0.0) return {lanczos_log_gamma_pos(x), 1};
  double r = std::round(x);
  if (x == r) throw std::domain_error("log_gamma_signed: pole at non-positive integer");
  // Reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x).
  double s = std::sin(pi * x);
  double la = std::log(pi / std::fabs(s)) - lanczos_log_gamma_pos(1.0 - x);
  return {la, s > 0.0 ? 1 : -1};
}

cplx log_sin_pi(cplx z) {
  if (z.imag() >= 0.0) {
    // sin(pi z) = -e^{-i pi z}(1 - e^{2 i pi z}) / (2i)
    cplx e = std::exp(cplx(0.0, 2.0 * pi) * z);
    return cplx(0.0, -pi) * z + std::log(1.0 - e) + cplx(-std::log(2.0), pi / 2.0);
  }
  cplx e = std::exp(cplx(0.0, -2.0 * pi) * z);
  return cplx(0.0, pi) * z + std::log(1.0 - e) - cplx(std::log(2.0), pi / 2.0);
}

cplx log_gamma_complex(cplx z) {
  if (z.real() >= 0.5) return lanczos_log_gamma_pos(z);
  // Reflection formula.
  return std::log(pi) - log_sin_pi(z) - lanczos_log_gamma_pos(1.0 - z);
}

cplx gamma_complex(cplx z) {
  if (near_nonpositive_integer(z, 1e-8))
    throw std::domain_error("gamma_complex: too close to a pole");
  return std::exp(log_gamma_complex(z));
}

double bessel_i(int k, double z) {
  if (k < 0) throw std::domain_error("bessel_i: order must be non-negative");
  if (z < 0.0) throw std::domain_error("bessel_i: argument must be non-negative");
  if (z == 0.0) return k == 0 ? 1.0 : 0.0;
  if (i_asym_ok(k, z)) {
    double s = bessel_i_asym_scaled(k, z);
    if (z > 708.0) throw std::overflow_error("bessel_i: e^z overflows; use bessel_i_scaled");
    return s * std::exp(z);
  }
  if (z > 713.0) throw std::overflow_error("bessel_i: argument beyond series range");
  return bessel_i_series(k, z);
}

double bessel_i_scaled(int k, double z) {
  if (k < 0) throw std::domain_error("bessel_i: order must be non-negative");
  if (z < 0.0) throw std::domain_error("bessel_i: argument must be non-negative");
  if (z == 0.0) return k == 0 ? 1.0 : 0.0;
  if (i_asym_ok(k, z)) return bessel_i_asym_scaled(k, z);
  if (z > 650.0) throw std::overflow_error("bessel_i_scaled: order too large for this argument");
  return bessel_i_series(k, z) * std::exp(-z);
}

double bessel_k(int k, double z) { return bessel_k_impl(k, z, false); }
double bessel_k_scaled(int k, double z) { return bessel_k_impl(k, z, true); }

double hyp0f1(double c, double z) {
  if (!(c > 0.0)) throw std::domain_error("hyp0f1: c must be positive");
  double term = 1.0;
  DDSum sum;
  sum.add(term);
  for (int m = 0; m < kSeriesCap; ++m) {
    term *= z / ((c + m) * (m + 1.0));
    sum.add(term);
    if (std::fabs(term) < kSeriesEps * std::fabs(sum.value())) break;
  }
  return sum.value();
}

double hyp2f1_terminating(int n, double b, double c, double z) {
  if (n < 0) throw std::domain_error("hyp2f1_terminating: n must be non-negative");
  for (int l = 0; l < n; ++l)
    if (c == -static_cast<double>(l))
      throw std::domain_error("hyp2f1_terminating: c hits a forbidden non-positive integer");
  double term = 1.0;
  DDSum sum;
  sum.add(term);
  for (int l = 0; l < n; ++l) {
    term *= (static_cast<double>(-n + l) * (b + l)) / ((c + l) * (l + 1.0)) * z;
    sum.add(term);
  }
  return sum.value();
}

cplx hyp2f1_terminating(int n, cplx b, cplx c, double z) {
  if (n < 0) throw std::domain_error("hyp2f1_terminating: n must be non-negative");
  cplx term = 1.0;
  cplx sum = term;
  for (int l = 0; l < n; ++l) {
    term *= (static_cast<double>(-n + l) * (b + static_cast<double>(l))) /
            ((c + static_cast<double>(l)) * (l + 1.0)) * z;
    sum += term;
  }
  return sum;
}

double digamma_int(int n) {
  if (n < 1) throw std::domain_error("digamma_int: n must be >= 1");
  double h = 0.0;
  for (int j = 1; j < n; ++j) h += 1.0 / j;
  return -euler_gamma + h;
}

}  // namespace muprod::specfun
