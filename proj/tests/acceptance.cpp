// Acceptance suite: one line per criterion, nonzero exit if any fails.
// Tolerances are pinned here, in code; nothing is deferred to calibration.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <string>
#include <vector>

#include "muprod/biorth_check.hpp"
#include "muprod/biorthogonal.hpp"
#include "muprod/clt.hpp"
#include "muprod/contour.hpp"
#include "muprod/errors.hpp"
#include "muprod/hard_edge.hpp"
#include "muprod/identities.hpp"
#include "muprod/kernel.hpp"
#include "muprod/quadrature.hpp"
#include "muprod/sampler.hpp"
#include "muprod/specfun.hpp"

using namespace muprod;

namespace {

int g_failures = 0;

void report(int idx, const std::string& name, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s (%s)\n", ok ? "PASS" : "FAIL", idx, name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

double wall_seconds(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// ---------------------------------------------------------------- criterion 1
void criterion_biorthogonality() {
  auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (double mu : {0.2, 0.5, 0.8})
    for (int nu : {0, 1, 3}) {
      auto p = make_parameters(mu, 2, 2 + nu);
      auto I = biorthogonality_matrix(p, 12);
      for (int n = 0; n <= 12; ++n)
        for (int m = 0; m <= 12; ++m)
          worst = std::max(worst, std::fabs(I[n][m] - (n == m ? 1.0 : 0.0)));
    }
  double secs = wall_seconds(t0);
  bool ok = worst < 1e-8 && secs < 120.0;
  report(1, "biorthogonality |int P_n Q_m - delta| < 1e-8, runtime < 2 min", ok,
         "max dev " + fmt(worst) + ", " + fmt(secs) + " s");
}

// ---------------------------------------------------------------- criterion 2
void criterion_recurrences() {
  double worst_p = 0.0, worst_q = 0.0, worst_dual = 0.0;
  for (double mu : {0.3, 0.6})
    for (int nu : {0, 2}) {
      auto p = make_parameters(mu, 2, 2 + nu);
      BiorthogonalSystem sys(p, 14);
      for (int n = 0; n <= 10; ++n) {
        for (double x : {0.1, 1.0, 5.0}) {
          auto a = recurrence_a(n, p);
          auto P = sys.eval_P_all(n + 2, x);
          double rhs = a[2] * P[n] + a[3] * P[n + 1] + a[4] * P[n + 2];
          double scale = std::fabs(x * P[n]);
          if (n >= 1) {
            rhs += a[1] * P[n - 1];
            scale = std::max(scale, std::fabs(a[1] * P[n - 1]));
          }
          if (n >= 2) rhs += a[0] * P[n - 2];
          worst_p = std::max(worst_p, std::fabs(x * P[n] - rhs) / std::max(scale, 1e-300));
          auto b = recurrence_b(n, p);
          auto Q = sys.eval_Q_all(n + 2, x);
          double rhsq = b[2] * Q[n] + b[3] * Q[n + 1] + b[4] * Q[n + 2];
          if (n >= 1) rhsq += b[1] * Q[n - 1];
          if (n >= 2) rhsq += b[0] * Q[n - 2];
          worst_q =
              std::max(worst_q, std::fabs(x * Q[n] - rhsq) / std::max(std::fabs(x * Q[n]), 1e-300));
        }
        auto a = recurrence_a(n, p);
        auto rel = [](double u, double v) {
          return std::fabs(u - v) / std::max({std::fabs(u), std::fabs(v), 1e-300});
        };
        worst_dual = std::max(worst_dual, rel(a[4], recurrence_b(n + 2, p)[0]));
        worst_dual = std::max(worst_dual, rel(a[3], recurrence_b(n + 1, p)[1]));
        worst_dual = std::max(worst_dual, rel(a[2], recurrence_b(n, p)[2]));
        if (n >= 1) worst_dual = std::max(worst_dual, rel(a[1], recurrence_b(n - 1, p)[3]));
        if (n >= 2) worst_dual = std::max(worst_dual, rel(a[0], recurrence_b(n - 2, p)[4]));
      }
    }
  bool ok = worst_p < 1e-9 && worst_q < 1e-9 && worst_dual < 1e-12;
  report(2, "five-term recurrence residuals < 1e-9, duality < 1e-12", ok,
         "P " + fmt(worst_p) + ", Q " + fmt(worst_q) + ", dual " + fmt(worst_dual));
}

// ---------------------------------------------------------------- criterion 3
void criterion_kernel_methods() {
  double worst_double = 0.0, worst_cd = 0.0, worst_contour = 0.0;
  for (int N : {2, 5, 10}) {
    auto p = make_parameters(0.5, N, N + 1);
    BiorthogonalSystem sys(p, N + 1);
    for (auto [x, y] : {std::pair{0.8, 1.3}, std::pair{2.1, 0.6}}) {
      double vd = kernel(x, y, sys, KernelMethod::direct_sum).value;
      double v2 = kernel(x, y, sys, KernelMethod::double_sum).value;
      double vc = kernel(x, y, sys, KernelMethod::christoffel_darboux).value;
      double vq = kernel(x, y, sys, KernelMethod::double_contour).value;
      double s = std::fabs(vd);
      worst_double = std::max(worst_double, std::fabs(v2 - vd) / s);
      worst_cd = std::max(worst_cd, std::fabs(vc - vd) / s);
      worst_contour = std::max(worst_contour, std::fabs(vq - vd) / s);
    }
  }
  bool ok = worst_double < 1e-10 && worst_cd < 1e-8 && worst_contour < 1e-5;
  report(3, "kernel methods: double 1e-10, CD 1e-8, contour 1e-5 (N=2,5,10)", ok,
         "double " + fmt(worst_double) + ", cd " + fmt(worst_cd) + ", contour " +
             fmt(worst_contour));
}

// ---------------------------------------------------------------- criterion 4
void criterion_jpdf() {
  auto p1 = make_parameters(0.5, 1, 1);
  auto r1 = quad::integrate_semi_infinite(
      [&](double t) {
        double q[1] = {t};
        return t <= 0 ? 0.0 : jpdf(q, p1);
      },
      1e-10);
  double dev1 = std::fabs(r1.value - 1.0);

  auto p2 = make_parameters(0.6, 2, 3);
  auto inner = [&](double y1) {
    return quad::integrate_semi_infinite(
               [&](double y2) {
                 double q[2] = {y1, y2};
                 return y2 <= 0 ? 0.0 : jpdf(q, p2);
               },
               1e-9)
        .value;
  };
  auto r2 = quad::integrate_semi_infinite([&](double y1) { return y1 <= 0 ? 0.0 : inner(y1); },
                                          1e-8);
  double dev2 = std::fabs(r2.value - 1.0);

  // determinantal identity at pseudo-random N=3 point sets; det[K]/N!
  auto p3 = make_parameters(0.4, 3, 4);
  BiorthogonalSystem sys3(p3, 5);
  CounterRng rng(2024, 0);
  double worst3 = 0.0;
  for (int trial = 0; trial < 4; ++trial) {
    double pts[3];
    for (double& v : pts) v = 0.1 + 4.0 * rng.next_uniform();
    double jp = jpdf(pts, p3);
    double m[9];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        m[i * 3 + j] = kernel(pts[i], pts[j], sys3, KernelMethod::direct_sum).value;
    double det = m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
                 m[2] * (m[3] * m[7] - m[4] * m[6]);
    worst3 = std::max(worst3, std::fabs(det / 6.0 - jp) / std::fabs(jp));
  }
  bool ok = dev1 < 1e-9 && dev2 < 1e-6 && worst3 < 1e-8;
  report(4, "jpdf: N=1 mass 1, N=2 mass 1 (1e-6), det identity (1e-8)", ok,
         "N1 " + fmt(dev1) + ", N2 " + fmt(dev2) + ", det " + fmt(worst3));
}

// ---------------------------------------------------------------- criterion 5
void criterion_traces() {
  double worst_trace = 0.0, worst_first = 0.0;
  struct Cfg {
    double mu;
    int n, m;
  };
  for (auto c : {Cfg{0.5, 5, 6}, Cfg{0.35, 8, 8}}) {
    auto p = make_parameters(c.mu, c.n, c.m);
    BiorthogonalSystem sys(p, c.n);
    auto tr = quad::integrate_semi_infinite(
        [&](double t) {
          return t <= 0 ? 0.0 : kernel(t, t, sys, KernelMethod::direct_sum).value;
        },
        1e-9);
    worst_trace = std::max(worst_trace, std::fabs(tr.value - c.n));
    auto fm = quad::integrate_semi_infinite(
        [&](double t) {
          return t <= 0 ? 0.0 : t * kernel(t, t, sys, KernelMethod::direct_sum).value;
        },
        1e-8);
    double expect = 0.0;
    for (int n = 0; n < c.n; ++n) expect += recurrence_a(n, p)[2];
    worst_first = std::max(worst_first, std::fabs(fm.value - expect));
  }
  bool ok = worst_trace < 1e-8 && worst_first < 1e-7;
  report(5, "trace identities: int K = N (1e-8), int xK = sum a0n (1e-7)", ok,
         "trace " + fmt(worst_trace) + ", first moment " + fmt(worst_first));
}

// ---------------------------------------------------------------- criterion 6
void criterion_density() {
  // histogram vs kernel diagonal at N = M = 8
  auto p = make_parameters(0.5, 8, 8);
  BiorthogonalSystem sys(p, 8);
  double hi = 60.0;
  while (kernel(hi, hi, sys, KernelMethod::direct_sum).value > 1e-10) hi *= 1.25;
  const int bins = 40, trials = 20000;
  auto batch = sample_batch(p, trials, 424242);
  auto h = empirical_density(batch, bins, 0.0, hi);
  int within = 0;
  for (int b = 0; b < bins; ++b) {
    double a = h.lo + b * h.width;
    double mb = quad::integrate(
                    [&](double t) {
                      return t <= 0 ? 0.0 : kernel(t, t, sys, KernelMethod::direct_sum).value;
                    },
                    std::max(a, 1e-12), a + h.width, 1e-9)
                    .value;
    double expect_count = trials * mb;
    double count = h.density[b] * trials * h.width;
    double sigma = std::sqrt(std::max(trials * mb, 1.0));
    if (std::fabs(count - expect_count) <= 3.0 * sigma) ++within;
  }
  double frac = static_cast<double>(within) / bins;

  // N=1 Kolmogorov-Smirnov at the 1% level
  auto p1 = make_parameters(0.5, 1, 1);
  auto b1 = sample_batch(p1, 10000, 77);
  std::vector<double> ys;
  ys.reserve(10000);
  for (const auto& sp : b1.spectra) ys.push_back(sp[0]);
  std::sort(ys.begin(), ys.end());
  double dks = 0.0, cdf = 0.0, prev = 0.0;
  for (size_t i = 0; i < ys.size(); ++i) {
    cdf += quad::integrate(
               [&](double t) {
                 double q[1] = {t};
                 return t <= 0 ? 0.0 : jpdf(q, p1);
               },
               std::max(prev, 1e-14), std::max(ys[i], 2e-14), 1e-11)
               .value;
    prev = ys[i];
    double emp_hi = (i + 1.0) / ys.size();
    double emp_lo = i / static_cast<double>(ys.size());
    dks = std::max({dks, std::fabs(cdf - emp_hi), std::fabs(cdf - emp_lo)});
  }
  double crit = 1.628 / std::sqrt(static_cast<double>(ys.size()));
  bool ok = frac >= 0.95 && dks < crit;
  report(6, "MC density: >=95% bins within 3 sigma; N=1 KS at 1%", ok,
         fmt(100.0 * frac) + "% bins, KS " + fmt(dks) + " vs " + fmt(crit));
}

// ---------------------------------------------------------------- criterion 7
void criterion_moment_from_sampling() {
  auto p = make_parameters(0.5, 6, 6);
  auto batch = sample_batch(p, 20000, 90125);
  auto sums = linear_statistic(batch, {0.0, 1.0});
  double mean = 0.0;
  for (double s : sums) mean += s;
  mean /= sums.size();
  double var = 0.0;
  for (double s : sums) var += (s - mean) * (s - mean);
  var /= (sums.size() - 1.0);
  double se = std::sqrt(var / sums.size());
  double expect = 0.0;
  for (int n = 0; n < 6; ++n) expect += recurrence_a(n, p)[2];
  double devs = std::fabs(mean - expect) / se;
  report(7, "sampled mean of sum y_i matches sum a_{0,n} within 3 SE", devs < 3.0,
         "mean " + fmt(mean) + " vs " + fmt(expect) + ", " + fmt(devs) + " SE");
}

// ---------------------------------------------------------------- criterion 8
void criterion_hard_edge() {
  std::vector<double> xs = {0.2, 0.9, 1.6, 2.3, 3.0};
  bool mono_ok = true, final_ok = true, mu_indep_ok = true, forms_ok = true;
  double worst_final = 0.0, worst_forms = 0.0;
  for (int nu : {0, 2}) {
    HardEdgeContext ctx;
    ctx.nu = nu;
    auto lim = limiting_kernel_grid(xs, xs, ctx);
    std::vector<std::vector<std::vector<double>>> val80;  // per mu at N=80
    std::vector<double> dev80;
    for (double mu : {0.3, 0.7}) {
      double prev = 1e9;
      for (int N : {20, 40, 80}) {
        auto p = make_parameters(mu, N, N + nu);
        BiorthogonalSystem sys(p, N);
        double sup = 0.0;
        std::vector<std::vector<double>> vals(xs.size(), std::vector<double>(xs.size()));
        for (size_t i = 0; i < xs.size(); ++i)
          for (size_t j = 0; j < xs.size(); ++j) {
            vals[i][j] = rescaled_finite_kernel(xs[i], xs[j], sys);
            sup = std::max(sup, std::fabs(vals[i][j] - lim[i][j]));
          }
        if (sup >= prev) mono_ok = false;
        prev = sup;
        if (N == 80) {
          val80.push_back(vals);
          dev80.push_back(sup);
          worst_final = std::max(worst_final, sup);
          if (sup >= 5e-2) final_ok = false;
        }
      }
    }
    // mu-independence: the two N=80 kernels agree within 2x their deviation
    double cross = 0.0;
    for (size_t i = 0; i < xs.size(); ++i)
      for (size_t j = 0; j < xs.size(); ++j)
        cross = std::max(cross, std::fabs(val80[0][i][j] - val80[1][i][j]));
    if (cross > 2.0 * std::max(dev80[0], dev80[1])) mu_indep_ok = false;
    // product-integral vs derivative form
    for (auto [x, y] : {std::pair{0.5, 1.5}, std::pair{2.2, 0.7}}) {
      double a = limiting_kernel(x, y, ctx);
      double b = limiting_kernel_derivative_form(x, y, ctx);
      worst_forms = std::max(worst_forms, std::fabs(a - b) / std::fabs(a));
    }
    if (worst_forms >= 1e-5) forms_ok = false;
  }
  bool ok = mono_ok && final_ok && mu_indep_ok && forms_ok;
  report(8, "hard edge: monotone ladder, dev@80 < 5e-2, mu-independent, forms 1e-5", ok,
         "dev@80 " + fmt(worst_final) + ", forms " + fmt(worst_forms) +
             (mono_ok ? "" : ", non-monotone") + (mu_indep_ok ? "" : ", mu-dependent"));
}

// ---------------------------------------------------------------- criterion 9
void criterion_clt() {
  double v1 = limiting_variance({0.0, 1.0}, 1.0);
  double v0 = limiting_variance({0.0, 1.0}, 0.0);
  bool exact_ok = v1 == 3.0 && v0 == 1.125;
  // hat f_k reality: the circle integral's imaginary part vanishes
  bool reality_ok = true;
  {
    auto fh = fourier_coefficients({0.5, 1.0, 1.0}, 0.5);  // f = 0.5 + x + x^2
    const int nodes = 512;
    for (const auto& [k, v] : fh) {
      std::complex<double> acc = 0.0;
      auto sym = symbol_s(0.5);
      for (int j = 0; j < nodes; ++j) {
        std::complex<double> w = std::polar(1.0, 2.0 * specfun::pi * j / nodes);
        std::complex<double> sw = 0.0;
        for (const auto& [d, c] : sym.terms()) sw += c.get_d() * std::pow(w, d);
        acc += (0.5 + sw + sw * sw) * std::pow(w, k);
      }
      acc /= nodes;
      if (std::fabs(acc.imag()) > 1e-12) reality_ok = false;
      if (std::fabs(acc.real() - v) > 1e-10) reality_ok = false;
    }
  }
  auto rep = clt_experiment(make_parameters(0.5, 100, 100), {0.0, 1.0}, 5000, 31337);
  bool mc_ok = rep.ratio > 0.9 && rep.ratio < 1.1;
  bool ok = exact_ok && reality_ok && mc_ok;
  report(9, "CLT: variance 3 at mu=1, 9/8 at mu=0, MC ratio in [0.9,1.1], real f-hat", ok,
         "ratio " + fmt(rep.ratio) + ", skew " + fmt(rep.skewness) + ", kurt " +
             fmt(rep.excess_kurtosis));
}

// --------------------------------------------------------------- criterion 10
void criterion_identities() {
  auto verdicts = identities::run_all_identity_checks();
  long failures = 0, passes = 0, skips = 0;
  for (const auto& v : verdicts) {
    failures += v.failures;
    passes += v.passes;
    skips += v.skips;
  }
  report(10, "exact identity suite: zero failures on the documented grids", failures == 0,
         std::to_string(passes) + " passes, " + std::to_string(failures) + " failures, " +
             std::to_string(skips) + " skips");
}

// --------------------------------------------------------------- criterion 11
void criterion_limit_endpoints() {
  int nu = 1;
  double worst1 = 0.0, worst0 = 0.0, worst_shape = 0.0;
  for (auto pts : {std::vector<double>{0.4, 1.7}, std::vector<double>{0.9, 2.6}}) {
    auto p1 = make_parameters(1.0 - 1e-6, 2, 3);
    double lim1 = jpdf_independent_limit(pts, nu);
    worst1 = std::max(worst1, std::fabs(jpdf(pts, p1) - lim1) / lim1);
    auto p0 = make_parameters(1e-4, 2, 3);
    double lim0 = jpdf_laguerre_limit(pts, nu, 3);
    worst0 = std::max(worst0, std::fabs(jpdf(pts, p0) - lim0) / lim0);
    std::vector<double> v = {2.0 * std::sqrt(pts[0]), 2.0 * std::sqrt(pts[1])};
    double jac = (v[0] / 2.0) * (v[1] / 2.0);
    worst_shape =
        std::max(worst_shape, std::fabs(lim0 * jac - laguerre_density(v, nu)) /
                                  laguerre_density(v, nu));
  }
  bool ok = worst1 < 1e-3 && worst0 < 1e-2 && worst_shape < 1e-10;
  report(11, "limit endpoints: mu->1 (1e-3), mu->0 (1e-2), Laguerre shape", ok,
         "mu1 " + fmt(worst1) + ", mu0 " + fmt(worst0) + ", shape " + fmt(worst_shape));
}

}  // namespace

int main() {
  auto t0 = std::chrono::steady_clock::now();
  criterion_biorthogonality();
  criterion_recurrences();
  criterion_kernel_methods();
  criterion_jpdf();
  criterion_traces();
  criterion_density();
  criterion_moment_from_sampling();
  criterion_hard_edge();
  criterion_clt();
  criterion_identities();
  criterion_limit_endpoints();
  std::printf("%d of 11 criteria failed (%.1f s total)\n", g_failures, wall_seconds(t0));
  return g_failures == 0 ? 0 : 1;
}
