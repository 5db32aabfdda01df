#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "muprod/parameters.hpp"
#include "muprod/rational.hpp"

namespace muprod {

// Laurent polynomial with exact rational coefficients; zero coefficients are
// never stored.
class LaurentPolynomial {
 public:
  LaurentPolynomial() = default;

  void set(int degree, const rat::ExactRational& c);
  rat::ExactRational get(int degree) const;
  const std::map<int, rat::ExactRational>& terms() const { return terms_; }

  LaurentPolynomial operator*(const LaurentPolynomial& o) const;
  LaurentPolynomial operator+(const LaurentPolynomial& o) const;
  LaurentPolynomial& operator+=(const LaurentPolynomial& o);

 private:
  std::map<int, rat::ExactRational> terms_;
};

// s(w; mu) = (w+1)^3 (w (1-mu)^2 + (1+mu)^2) / (4 w^2); degrees -2..2.
// mu may take the endpoint values 0 and 1 (pure limit symbols).
LaurentPolynomial symbol_s(double mu);

// (alpha_2, alpha_1, alpha_0, alpha_{-1}, alpha_{-2}): the N -> infinity
// limits of the rescaled recurrence coefficients.
std::array<double, 5> limiting_recurrence_alphas(double mu);

// Rescaled-and-normalized recurrence coefficients a'_{j,n} at matrix size N,
// built from the finite-N coefficients with alpha -> N alpha, delta -> N delta
// and the 1/(n!(n+nu)!) normalization. Index [j+2] for j = -2..2.
std::array<double, 5> primed_recurrence_a(int n, double big_n, double mu, int nu);

// Exact Fourier/Laurent data of f(s(w; mu)) for a real-coefficient polynomial
// f (ascending coefficients): returns k -> hat f_k = coefficient of w^{-k}.
std::map<int, double> fourier_coefficients(const std::vector<double>& f, double mu);

// Limiting CLT variance sum_{k>=1} k hat f_k hat f_{-k} (finite for polynomial f).
double limiting_variance(const std::vector<double>& f, double mu);

struct CltReport {
  double mu;
  int n_small;
  int m_large;
  std::vector<double> f_coefficients;
  int trials;
  double sample_variance;
  double analytic_variance;
  double ratio;
  double skewness;
  double excess_kurtosis;
  std::uint64_t seed;
  int failed_trials;
};

// Monte Carlo comparison on the rescaled ensemble: sample variance of the
// centered linear statistic against the Theorem's variance.
CltReport clt_experiment(const CouplingParameters& p, const std::vector<double>& f, int trials,
                         std::uint64_t seed);

std::string clt_report_to_json(const CltReport& r);

}  // namespace muprod
