#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "muprod/contour.hpp"
#include "muprod/errors.hpp"
#include "muprod/kernel.hpp"
#include "muprod/specfun.hpp"

using namespace muprod;

TEST_CASE("P residue representation equals series representation") {
  // n=0 reduces to sqrt(s) I_0 via the 0F1 identity
  auto p = make_parameters(0.4, 5, 6);
  BiorthogonalSystem sys(p, 12);
  double x = 0.7;
  CHECK(eval_P_contour(0, x, sys) ==
        doctest::Approx(std::sqrt(p.s) * specfun::bessel_i(0, 2.0 * p.delta * std::sqrt(x)))
            .epsilon(1e-13));
  CHECK(eval_P_contour(3, 2.0, sys) == doctest::Approx(sys.eval_P(3, 2.0)).epsilon(1e-10));
  for (int n = 0; n <= 10; ++n)
    for (double xx : {0.1, 1.0, 10.0}) {
      double a = eval_P_contour(n, xx, sys);
      double b = sys.eval_P(n, xx);
      CHECK(std::fabs(a - b) <= 1e-10 * std::fabs(b));
    }
}

TEST_CASE("Q line representation matches the series") {
  {
    auto p = make_parameters(0.5, 4, 4);  // nu = 0
    BiorthogonalSystem sys(p, 6);
    CHECK(eval_Q_contour(0, 0.9, sys) == doctest::Approx(sys.eval_Q(0, 0.9)).epsilon(1e-6));
  }
  {
    auto p = make_parameters(0.6, 4, 6);  // n=2, y=0.7, nu=2
    BiorthogonalSystem sys(p, 6);
    CHECK(eval_Q_contour(2, 0.7, sys) == doctest::Approx(sys.eval_Q(2, 0.7)).epsilon(1e-6));
    // doubling the truncation height moves the result by less than 1e-8
    quad::ContourSpec tall{0.5, 160.0, 8192};
    double a = eval_Q_contour(2, 0.7, sys);
    double b = eval_Q_contour(2, 0.7, sys, tall);
    CHECK(std::fabs(a - b) <= 1e-8 * std::fabs(a) + 1e-300);
  }
}

TEST_CASE("Q line is independent of the abscissa") {
  auto p = make_parameters(0.45, 3, 4);
  BiorthogonalSystem sys(p, 5);
  quad::ContourSpec c1{0.5, 80.0, 4096}, c2{1.5, 80.0, 4096};
  double a = eval_Q_contour(2, 1.1, sys, c1);
  double b = eval_Q_contour(2, 1.1, sys, c2);
  CHECK(a == doctest::Approx(b).epsilon(1e-8));
}

TEST_CASE("contour spec validation") {
  auto p = make_parameters(0.5, 2, 3);
  BiorthogonalSystem sys(p, 4);
  CHECK_THROWS_AS(eval_Q_contour(1, 0.5, sys, quad::ContourSpec{-0.5, 80.0, 4096}),
                  std::domain_error);
  CHECK_THROWS_AS(eval_Q_contour(1, 0.5, sys, quad::ContourSpec{0.5, 80.0, 32}),
                  std::domain_error);
  // far too small a truncation height must be detected
  CHECK_THROWS_AS(eval_Q_contour(1, 0.5, sys, quad::ContourSpec{0.5, 2.0, 128}),
                  ConvergenceError);
}

TEST_CASE("double contour kernel") {
  // N=1: reduces to P_0(x) Q_0(y)
  {
    auto p = make_parameters(0.5, 1, 2);
    BiorthogonalSystem sys(p, 2);
    double v = kernel_double_contour(0.6, 1.1, sys);
    CHECK(v == doctest::Approx(sys.eval_P(0, 0.6) * sys.eval_Q(0, 1.1)).epsilon(1e-10));
  }
  // N=3 vs direct sum
  {
    auto p = make_parameters(0.5, 3, 4);
    BiorthogonalSystem sys(p, 4);
    double v = kernel_double_contour(0.6, 1.1, sys);
    double d = kernel(0.6, 1.1, sys, KernelMethod::direct_sum).value;
    CHECK(v == doctest::Approx(d).epsilon(1e-5));
  }
  // the k-ladder terms shrink geometrically at rate delta^2/alpha^2
  {
    auto p = make_parameters(0.5, 4, 4);
    BiorthogonalSystem sys(p, 5);
    std::vector<double> terms;
    double v = kernel_double_contour(0.9, 1.7, sys, {}, &terms);
    double d = kernel(0.9, 1.7, sys, KernelMethod::direct_sum).value;
    CHECK(v == doctest::Approx(d).epsilon(1e-5));
    REQUIRE(terms.size() == 4);
    double rate = (p.delta * p.delta) / (p.alpha * p.alpha);
    for (size_t k = 1; k < terms.size(); ++k) {
      double measured = std::fabs(terms[k] / terms[k - 1]);
      CHECK(measured < 4.0 * rate);  // geometric envelope, allowing k-dependent prefactors
    }
  }
}
