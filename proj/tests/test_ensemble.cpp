#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "muprod/biorth_check.hpp"
#include "muprod/biorthogonal.hpp"
#include "muprod/errors.hpp"
#include "muprod/kernel.hpp"
#include "muprod/quadrature.hpp"
#include "muprod/specfun.hpp"

using namespace muprod;

TEST_CASE("make_parameters invariants") {
  auto p = make_parameters(0.5, 3, 5);
  CHECK(p.alpha == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(p.delta == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(p.nu == 2);
  CHECK(p.alpha - p.delta == doctest::Approx(1.0).epsilon(1e-15));
  for (double mu : {0.1, 0.37, 0.925}) {
    auto q = make_parameters(mu, 2, 2);
    CHECK(q.alpha * q.alpha - q.delta * q.delta == doctest::Approx(1.0 / mu).epsilon(1e-14));
  }
  // mu -> 1 boundary through a nearby value
  auto p1 = make_parameters(1.0 - 1e-9, 2, 2);
  CHECK(p1.alpha == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(p1.delta == doctest::Approx(0.0).scale(1.0).epsilon(1e-8));
  CHECK_THROWS_AS(make_parameters(0.0, 2, 2), std::domain_error);
  CHECK_THROWS_AS(make_parameters(1.0, 2, 2), std::domain_error);
  CHECK_THROWS_AS(make_parameters(0.5, 3, 2), std::domain_error);
  CHECK_THROWS_AS(make_parameters(0.5, 0, 2), std::domain_error);
}

TEST_CASE("eval_P closed forms") {
  auto p = make_parameters(0.5, 5, 6);
  BiorthogonalSystem sys(p, 12);
  for (double x : {0.2, 1.0, 6.0}) {
    double expect = std::sqrt(p.s) * specfun::bessel_i(0, 2.0 * p.delta * std::sqrt(x));
    CHECK(sys.eval_P(0, x) == doctest::Approx(expect).epsilon(1e-13));
  }
  for (int n : {1, 3, 8}) {
    double expect = (n % 2 ? -1.0 : 1.0) * std::sqrt(p.s) *
                    std::exp(specfun::log_gamma(p.nu + n + 1.0) + specfun::log_gamma(n + 1.0) -
                             specfun::log_gamma(p.nu + 1.0));
    CHECK(sys.eval_P(n, 0.0) == doctest::Approx(expect).epsilon(1e-13));
  }
  CHECK_THROWS_AS(sys.eval_P(13, 1.0), CapacityError);
}

TEST_CASE("eval_Q closed form and domain") {
  auto p = make_parameters(0.3, 4, 6);
  BiorthogonalSystem sys(p, 10);
  for (double y : {0.05, 0.9, 4.0}) {
    double expect = 2.0 * std::pow(p.s, p.nu + 0.5) * std::pow(p.alpha, -p.nu) /
                    std::tgamma(p.nu + 1.0) * std::pow(y, 0.5 * p.nu) *
                    specfun::bessel_k(p.nu, 2.0 * p.alpha * std::sqrt(y));
    CHECK(sys.eval_Q(0, y) == doctest::Approx(expect).epsilon(1e-13));
  }
  CHECK_THROWS_AS(sys.eval_Q(0, 0.0), std::domain_error);
  CHECK_THROWS_AS(sys.eval_Q(0, -1.0), std::domain_error);
}

TEST_CASE("int P_0 Q_0 = 1") {
  auto p = make_parameters(0.35, 3, 5);
  BiorthogonalSystem sys(p, 4);
  auto r = quad::integrate_semi_infinite(
      [&](double t) { return t <= 0 ? 0.0 : sys.eval_P(0, t) * sys.eval_Q(0, t); }, 1e-11);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("raw psi/phi") {
  auto p = make_parameters(0.5, 4, 5);
  CHECK(raw_psi(0, 0.0, p) == 1.0);
  CHECK(raw_psi(2, 0.0, p) == 0.0);
  // psi_2(x) = x I_2(2 delta sqrt(x))
  double x = 1.0;
  CHECK(raw_psi(2, x, p) ==
        doctest::Approx(x * specfun::bessel_i(2, 2.0 * p.delta * std::sqrt(x))).epsilon(1e-14));
  for (double y : {0.01, 1.0, 9.0})
    for (int j : {0, 1, 4}) CHECK(raw_phi(j, y, p) > 0.0);
}

TEST_CASE("moment matrix entries") {
  auto p = make_parameters(0.5, 4, 4);  // nu = 0
  CHECK(moment_matrix_entry(0, 0, p) == doctest::Approx(p.mu / 2.0).epsilon(1e-14));
  auto p2 = make_parameters(0.45, 4, 6);
  for (int k = 0; k <= 6; ++k) {
    for (int l = 0; l <= 6; ++l) {
      double g = moment_matrix_entry(k, l, p2);
      auto r = quad::integrate_semi_infinite(
          [&](double t) { return t <= 0 ? 0.0 : raw_psi(l, t, p2) * raw_phi(k, t, p2); },
          1e-9 * g);
      CHECK(r.value == doctest::Approx(g).epsilon(1e-8));
    }
  }
  // the Gamma factor depends on k+l only
  double r01 = moment_matrix_entry(0, 1, p2) / moment_matrix_entry(1, 0, p2);
  double expect = std::pow(p2.delta / p2.alpha, 1.0);  // delta^l alpha^k swap
  CHECK(r01 == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("hankel inverse entries") {
  using rat::ExactRational;
  CHECK(hankel_inverse_entry(0, 0, 2, 1) == ExactRational(1, 2));  // 1/nu!
  for (int k = 0; k < 4; ++k)
    for (int l = 0; l < 4; ++l)
      CHECK(hankel_inverse_entry(k, l, 2, 4) == hankel_inverse_entry(l, k, 2, 4));
  // H A = I exactly for N=4, nu=2
  using rat::factorial;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      ExactRational acc(0);
      for (int l = 0; l < 4; ++l)
        acc += ExactRational(factorial(i + l + 2)) * hankel_inverse_entry(l, j, 2, 4);
      acc.canonicalize();
      CHECK(acc == ExactRational(i == j ? 1 : 0));
    }
}

TEST_CASE("five-term recurrences") {
  // P side at (n=4, x=1.7, mu=0.5, nu=1)
  {
    auto p = make_parameters(0.5, 8, 9);
    BiorthogonalSystem sys(p, 8);
    auto a = recurrence_a(4, p);
    auto P = sys.eval_P_all(6, 1.7);
    double lhs = 1.7 * P[4];
    double rhs = a[0] * P[2] + a[1] * P[3] + a[2] * P[4] + a[3] * P[5] + a[4] * P[6];
    CHECK(std::fabs(lhs - rhs) <= 1e-9 * std::fabs(lhs));
  }
  // Q side at (n=3, y=0.9, mu=0.3, nu=2)
  {
    auto p = make_parameters(0.3, 8, 10);
    BiorthogonalSystem sys(p, 8);
    auto b = recurrence_b(3, p);
    auto Q = sys.eval_Q_all(5, 0.9);
    double lhs = 0.9 * Q[3];
    double rhs = b[0] * Q[1] + b[1] * Q[2] + b[2] * Q[3] + b[3] * Q[4] + b[4] * Q[5];
    CHECK(std::fabs(lhs - rhs) <= 1e-9 * std::fabs(lhs));
  }
  // coefficient formulas: vanishing entries, a_{0,0}, duality
  {
    auto p = make_parameters(0.4, 4, 6);
    CHECK(recurrence_a(0, p)[0] == 0.0);
    CHECK(recurrence_a(1, p)[0] == 0.0);
    CHECK(recurrence_a(0, p)[1] == 0.0);
    double nu = p.nu;
    double expect = (nu + 1.0) / p.s + (nu * nu + 3.0 * nu + 2.0) * p.delta * p.delta / (p.s * p.s);
    CHECK(recurrence_a(0, p)[2] == doctest::Approx(expect).epsilon(1e-14));
  }
  for (double mu : {0.2, 0.7})
    for (int nu : {0, 3}) {
      auto p = make_parameters(mu, 2, 2 + nu);
      for (int n = 0; n <= 20; ++n) {
        CHECK(recurrence_a(n, p)[3] ==
              doctest::Approx(recurrence_b(n + 1, p)[1]).epsilon(1e-12));
        CHECK(recurrence_a(n, p)[4] ==
              doctest::Approx(recurrence_b(n + 2, p)[0]).epsilon(1e-12));
      }
    }
}

TEST_CASE("biorthogonality (extended-precision quadrature)") {
  auto p = make_parameters(0.5, 5, 6);
  auto I = biorthogonality_matrix(p, 8);
  for (int n = 0; n <= 8; ++n)
    for (int m = 0; m <= 8; ++m)
      CHECK(std::fabs(I[n][m] - (n == m ? 1.0 : 0.0)) < 1e-10);
}

TEST_CASE("kernel methods agree") {
  auto p = make_parameters(0.5, 5, 6);
  BiorthogonalSystem sys(p, 8);
  double x = 0.8, y = 1.3;
  double kd = kernel(x, y, sys, KernelMethod::direct_sum).value;
  double k2 = kernel(x, y, sys, KernelMethod::double_sum).value;
  double kcd = kernel(x, y, sys, KernelMethod::christoffel_darboux).value;
  CHECK(std::fabs(k2 - kd) <= 1e-10 * std::fabs(kd));
  CHECK(std::fabs(kcd - kd) <= 1e-8 * std::fabs(kd));
  // N=1 reduction: K_1(x,y) = P_0(x) Q_0(y) in both closed forms
  auto p1 = make_parameters(0.6, 1, 3);
  BiorthogonalSystem sys1(p1, 3);
  double direct = kernel(x, y, sys1, KernelMethod::direct_sum).value;
  double dbl = kernel(x, y, sys1, KernelMethod::double_sum).value;
  CHECK(direct == doctest::Approx(sys1.eval_P(0, x) * sys1.eval_Q(0, y)).epsilon(1e-12));
  CHECK(dbl == doctest::Approx(direct).epsilon(1e-12));
  // CD proximity guard
  CHECK_THROWS_AS(kernel(1.0, 1.0 + 1e-6, sys, KernelMethod::christoffel_darboux),
                  ProximityError);
  CHECK_THROWS_AS(kernel(0.0, 1.0, sys, KernelMethod::direct_sum), std::domain_error);
}

TEST_CASE("kernel trace identities") {
  auto p = make_parameters(0.5, 6, 7);
  BiorthogonalSystem sys(p, 8);
  auto trace = quad::integrate_semi_infinite(
      [&](double t) {
        return t <= 0 ? 0.0 : kernel(t, t, sys, KernelMethod::direct_sum).value;
      },
      1e-9);
  CHECK(trace.value == doctest::Approx(6.0).epsilon(1e-8));
  auto first = quad::integrate_semi_infinite(
      [&](double t) {
        return t <= 0 ? 0.0 : t * kernel(t, t, sys, KernelMethod::direct_sum).value;
      },
      1e-8);
  double expect = 0.0;
  for (int n = 0; n < 6; ++n) expect += recurrence_a(n, p)[2];
  CHECK(first.value == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("kernel reproducing property") {
  auto p = make_parameters(0.4, 4, 5);
  BiorthogonalSystem sys(p, 6);
  double x = 0.7, y = 2.1;
  auto r = quad::integrate_semi_infinite(
      [&](double t) {
        if (t <= 0) return 0.0;
        return kernel(x, t, sys, KernelMethod::direct_sum).value *
               kernel(t, y, sys, KernelMethod::direct_sum).value;
      },
      1e-10);
  double expect = kernel(x, y, sys, KernelMethod::direct_sum).value;
  CHECK(std::fabs(r.value - expect) < 1e-7);
}

TEST_CASE("jpdf properties") {
  auto p = make_parameters(0.5, 2, 2);
  double two_equal[2] = {1.3, 1.3};
  CHECK(jpdf(two_equal, p) == 0.0);
  double wrong_count[1] = {1.0};
  CHECK_THROWS_AS(jpdf(std::span<const double>(wrong_count, 1), p), std::invalid_argument);

  // N=1, nu=0: (2/mu) I_0 K_0, integrates to 1
  auto p1 = make_parameters(0.5, 1, 1);
  double y0 = 0.8;
  double pt[1] = {y0};
  double expect = (2.0 / p1.mu) * specfun::bessel_i(0, 2.0 * p1.delta * std::sqrt(y0)) *
                  specfun::bessel_k(0, 2.0 * p1.alpha * std::sqrt(y0));
  CHECK(jpdf(pt, p1) == doctest::Approx(expect).epsilon(1e-12));
  auto r = quad::integrate_semi_infinite(
      [&](double t) {
        double q[1] = {t};
        return t <= 0 ? 0.0 : jpdf(q, p1);
      },
      1e-10);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("jpdf equals det kernel over N!") {
  auto p = make_parameters(0.4, 3, 4);
  BiorthogonalSystem sys(p, 5);
  double pts[3] = {0.3, 1.1, 2.4};
  double jp = jpdf(pts, p);
  double m[9];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      m[i * 3 + j] = kernel(pts[i], pts[j], sys, KernelMethod::direct_sum).value;
  double det = m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
               m[2] * (m[3] * m[7] - m[4] * m[6]);
  CHECK(jp == doctest::Approx(det / 6.0).epsilon(1e-8));
}

TEST_CASE("jpdf limits at N=2") {
  int nu = 1;
  double pts[2] = {0.4, 1.7};
  auto p1 = make_parameters(1.0 - 1e-6, 2, 3);
  double lim1 = jpdf_independent_limit(pts, nu);
  CHECK(jpdf(pts, p1) == doctest::Approx(lim1).epsilon(1e-3));
  auto p0 = make_parameters(1e-4, 2, 3);
  double lim0 = jpdf_laguerre_limit(pts, nu, 3);
  CHECK(jpdf(pts, p0) == doctest::Approx(lim0).epsilon(1e-2));
  // change of variables v = 2 sqrt(y) turns the limit into the Laguerre density
  double v[2] = {2.0 * std::sqrt(pts[0]), 2.0 * std::sqrt(pts[1])};
  double jac = (v[0] / 2.0) * (v[1] / 2.0);
  CHECK(lim0 * jac == doctest::Approx(laguerre_density(v, nu)).epsilon(1e-12));
}

TEST_CASE("laguerre-type kernel") {
  // N=1 reduction: single term
  int nu = 1;
  double x = 0.9, y = 1.4;
  // single k = l = i = 0 term: coefficient 2^nu / nu!
  double expect = std::exp(-std::sqrt(x) - std::sqrt(y)) / std::pow(x * y, 0.25) *
                  std::pow(2.0, nu) / std::tgamma(nu + 1.0) * std::pow(y, 0.5 * nu);
  CHECK(laguerre_type_kernel(x, y, 1, nu) == doctest::Approx(expect).epsilon(1e-12));
  for (double t : {0.3, 1.0, 2.5, 4.0})
    CHECK(laguerre_type_kernel(t, t, 4, 1) > 0.0);
  // mu -> 0 equivalence through 2x2 determinants (invariant under kernel
  // conjugation)
  int N = 3;
  auto p = make_parameters(0.01, N, N + nu);
  BiorthogonalSystem sys(p, N);
  double x1 = 0.6, x2 = 1.9;
  auto kv = [&](double a, double b) {
    return kernel(a, b, sys, KernelMethod::direct_sum).value;
  };
  double det = kv(x1, x1) * kv(x2, x2) - kv(x1, x2) * kv(x2, x1);
  double detl = laguerre_type_kernel(x1, x1, N, nu) * laguerre_type_kernel(x2, x2, N, nu) -
                laguerre_type_kernel(x1, x2, N, nu) * laguerre_type_kernel(x2, x1, N, nu);
  CHECK(det == doctest::Approx(detl).epsilon(5e-2));
}
