#include "muprod/biorthogonal.hpp"

#include <cmath>
#include <stdexcept>

#include "muprod/dd.hpp"
#include "muprod/errors.hpp"
#include "muprod/specfun.hpp"

namespace muprod {

using rat::BigInt;
using rat::ExactRational;
using rat::factorial;

double raw_psi(int j, double x, const CouplingParameters& p) {
  if (j < 0) throw std::domain_error("raw_psi: order must be non-negative");
  if (x < 0.0) throw std::domain_error("raw_psi: argument must be non-negative");
  if (x == 0.0) return j == 0 ? 1.0 : 0.0;
  return std::pow(x, 0.5 * j) * specfun::bessel_i(j, 2.0 * p.delta * std::sqrt(x));
}

double raw_phi(int j, double y, const CouplingParameters& p) {
  if (j < 0) throw std::domain_error("raw_phi: order must be non-negative");
  if (y <= 0.0) throw std::domain_error("raw_phi: argument must be positive");
  int m = j + p.nu;
  return std::pow(y, 0.5 * m) * specfun::bessel_k(m, 2.0 * p.alpha * std::sqrt(y));
}

std::vector<double> psi_hat_table(double x, const CouplingParameters& p, int kmax) {
  std::vector<double> t(kmax + 1);
  for (int k = 0; k <= kmax; ++k) t[k] = raw_psi(k, x, p);
  return t;
}

std::vector<double> k_hat_table(double y, const CouplingParameters& p, int mmax) {
  if (y <= 0.0) throw std::domain_error("k_hat_table: argument must be positive");
  std::vector<double> t(mmax + 1);
  double r = std::sqrt(y);
  double z = 2.0 * p.alpha * r;
  t[0] = specfun::bessel_k(0, z);
  if (mmax >= 1) t[1] = r * specfun::bessel_k(1, z);
  // y^{(m+1)/2} K_{m+1} = (m/alpha) y^{m/2} K_m + y * y^{(m-1)/2} K_{m-1}
  for (int m = 1; m < mmax; ++m) t[m + 1] = (m / p.alpha) * t[m] + y * t[m - 1];
  return t;
}

namespace {

// Growth-balanced tables used internally by the P/Q evaluators:
//   S_k(x) = k! delta^{-k} psi_hat_k(x) = x^k 0F1(; k+1; delta^2 x)
//   T_m(y) = alpha^m / m! * y^{m/2} K_m(2 alpha sqrt(y))
// Both stay in comfortable double range for all orders used here, whereas
// psi_hat / k_hat themselves span hundreds of decades at large order.
std::vector<double> psi_reg_table(double x, const CouplingParameters& p, int kmax) {
  std::vector<double> t(kmax + 1);
  double q = p.delta * p.delta * x;
  double xk = 1.0;
  for (int k = 0; k <= kmax; ++k) {
    t[k] = (x == 0.0 && k > 0) ? 0.0 : xk * specfun::hyp0f1(k + 1.0, q);
    xk *= x;
  }
  return t;
}

std::vector<double> k_norm_table(double y, const CouplingParameters& p, int mmax) {
  if (y <= 0.0) throw std::domain_error("k_norm_table: argument must be positive");
  std::vector<double> t(mmax + 1);
  double r = std::sqrt(y);
  double z = 2.0 * p.alpha * r;
  t[0] = specfun::bessel_k(0, z);
  if (mmax >= 1) t[1] = p.alpha * r * specfun::bessel_k(1, z);
  double ya2 = y * p.alpha * p.alpha;
  for (int m = 1; m < mmax; ++m)
    t[m + 1] = (m * t[m] + (ya2 / m) * t[m - 1]) / (m + 1.0);
  return t;
}

}  // namespace

double moment_matrix_entry(int k, int l, const CouplingParameters& p) {
  if (k < 0 || l < 0) throw std::domain_error("moment_matrix_entry: indices must be >= 0");
  double lg = specfun::log_gamma(k + l + p.nu + 1.0);
  double le = (k + p.nu) * std::log(p.alpha) + l * std::log(p.delta) -
              (k + p.nu + l + 1.0) * std::log(p.s);
  return 0.5 * std::exp(lg + le);
}

ExactRational hankel_inverse_entry(int k, int l, int nu, int n_small) {
  if (k < 0 || l < 0 || k >= n_small || l >= n_small)
    throw std::domain_error("hankel_inverse_entry: indices must lie in [0, N-1]");
  ExactRational sum(0);
  BigInt den_fixed = factorial(nu + k) * factorial(k) * factorial(nu + l) * factorial(l);
  for (long pidx = 0; pidx < n_small; ++pidx) {
    BigInt num = factorial(nu + pidx) * rat::pochhammer_neg(pidx, k) * rat::pochhammer_neg(pidx, l);
    if (num == 0) continue;
    sum += ExactRational(num, factorial(pidx) * den_fixed);
  }
  sum.canonicalize();
  return sum;
}

std::array<double, 5> recurrence_a(int n, const CouplingParameters& p) {
  if (n < 0) throw std::domain_error("recurrence_a: n must be >= 0");
  double nn = n, nu = p.nu;
  double s = p.s, d2 = p.delta * p.delta, a2 = p.alpha * p.alpha;
  double s2 = s * s;
  std::array<double, 5> a{};
  // index order: [a_{-2,n}, a_{-1,n}, a_{0,n}, a_{1,n}, a_{2,n}]
  a[0] = (nu + nn) * (nu + nn - 1.0) * nn * nn * (nn - 1.0) * (nn - 1.0) * a2 / s2;
  a[1] = nn * nn * (nn + nu) * (3.0 * nn + nu) / s +
         2.0 * nn * nn * (nu + nn) * (2.0 * nn + nu) * d2 / s2;
  a[2] = (3.0 * nn * nn + 2.0 * nu * nn + 3.0 * nn + nu + 1.0) / s +
         (6.0 * nn * nn + 6.0 * nn * nu + nu * nu + 6.0 * nn + 3.0 * nu + 2.0) * d2 / s2;
  a[3] = 1.0 / s + 2.0 * (2.0 * nn + nu + 2.0) / (nn + 1.0) * d2 / s2;
  a[4] = 1.0 / ((nn + 2.0) * (nn + 1.0)) * d2 / s2;
  return a;
}

std::array<double, 5> recurrence_b(int n, const CouplingParameters& p) {
  if (n < 0) throw std::domain_error("recurrence_b: n must be >= 0");
  double nn = n, nu = p.nu;
  double s = p.s, d2 = p.delta * p.delta, a2 = p.alpha * p.alpha;
  double s2 = s * s;
  std::array<double, 5> b{};
  // index order: [b_{-2,n}, b_{-1,n}, b_{0,n}, b_{1,n}, b_{2,n}]
  b[0] = (n >= 2) ? 1.0 / (nn * (nn - 1.0)) * d2 / s2 : 0.0;
  b[1] = (n >= 1) ? -(3.0 * nn + 2.0 * nu) / nn / s + 2.0 * (2.0 * nn + nu) / nn * a2 / s2 : 0.0;
  b[2] = -((nn + nu) * (nn + nu) + 2.0 * (nn + 1.0) * (nn + nu) + nn + 1.0) / s +
         ((nn + nu) * (5.0 * nn + nu + 3.0) + nn * (nn + 3.0) + 2.0) * a2 / s2;
  b[3] = -(nn + 1.0) * (nn + 1.0) * (nn + nu + 1.0) * (nn + nu + 1.0) / s +
         2.0 * (2.0 * nn + nu + 2.0) * (nn + nu + 1.0) * (nn + 1.0) * (nn + 1.0) * a2 / s2;
  b[4] = (nu + nn + 2.0) * (nu + nn + 1.0) * (nn + 2.0) * (nn + 2.0) * (nn + 1.0) * (nn + 1.0) *
         a2 / s2;
  return b;
}

namespace {

struct ExactWeightParams {
  ExactRational s, a2, d2;  // alpha^2 - delta^2, alpha^2, delta^2
};

ExactWeightParams exact_weights(const ExactRational& mu) {
  ExactRational one(1);
  ExactRational a = (one + mu) / (2 * mu);
  ExactRational d = (one - mu) / (2 * mu);
  return {a * a - d * d, a * a, d * d};
}

}  // namespace

std::array<ExactRational, 5> recurrence_a_exact(int n, const ExactRational& mu, int nu) {
  auto [s, a2, d2] = exact_weights(mu);
  ExactRational s2 = s * s;
  long nn = n, v = nu;
  std::array<ExactRational, 5> a;
  a[0] = ExactRational((v + nn) * (v + nn - 1) * nn * nn * (nn - 1) * (nn - 1)) * a2 / s2;
  a[1] = ExactRational(nn * nn * (nn + v) * (3 * nn + v)) / s +
         ExactRational(2 * nn * nn * (v + nn) * (2 * nn + v)) * d2 / s2;
  a[2] = ExactRational(3 * nn * nn + 2 * v * nn + 3 * nn + v + 1) / s +
         ExactRational(6 * nn * nn + 6 * nn * v + v * v + 6 * nn + 3 * v + 2) * d2 / s2;
  a[3] = 1 / s + ExactRational(2 * (2 * nn + v + 2), nn + 1) * d2 / s2;
  a[4] = ExactRational(1, (nn + 2) * (nn + 1)) * d2 / s2;
  for (auto& q : a) q.canonicalize();
  return a;
}

std::array<ExactRational, 5> recurrence_b_exact(int n, const ExactRational& mu, int nu) {
  auto [s, a2, d2] = exact_weights(mu);
  ExactRational s2 = s * s;
  long nn = n, v = nu;
  std::array<ExactRational, 5> b;
  b[0] = (n >= 2) ? ExactRational(1, nn * (nn - 1)) * d2 / s2 : ExactRational(0);
  b[1] = (n >= 1) ? ExactRational(-(3 * nn + 2 * v), nn) / s +
                        ExactRational(2 * (2 * nn + v), nn) * a2 / s2
                  : ExactRational(0);
  b[2] = ExactRational(-((nn + v) * (nn + v) + 2 * (nn + 1) * (nn + v) + nn + 1)) / s +
         ExactRational((nn + v) * (5 * nn + v + 3) + nn * (nn + 3) + 2) * a2 / s2;
  b[3] = ExactRational(-(nn + 1) * (nn + 1) * (nn + v + 1) * (nn + v + 1)) / s +
         ExactRational(2 * (2 * nn + v + 2) * (nn + v + 1) * (nn + 1) * (nn + 1)) * a2 / s2;
  b[4] = ExactRational((v + nn + 2) * (v + nn + 1) * (nn + 2) * (nn + 2) * (nn + 1) * (nn + 1)) *
         a2 / s2;
  for (auto& q : b) q.canonicalize();
  return b;
}

BiorthogonalSystem::BiorthogonalSystem(const CouplingParameters& p, int max_n)
    : params_(p), max_n_(max_n) {
  if (max_n < 0) throw std::domain_error("BiorthogonalSystem: max_n must be >= 0");
  p_coeffs_.resize(max_n + 1);
  q_coeffs_.resize(max_n + 1);
  p_weights_.resize(max_n + 1);
  q_weights_.resize(max_n + 1);
  long nu = p.nu;
  double sqrt_s = std::sqrt(p.s);
  // ratio bases for the folded double weights
  double sp = p.s;                              // s^k / k! handled per term
  double sq = p.s / (p.alpha * p.alpha);        // (s/alpha^2)^{l+nu}
  for (long n = 0; n <= max_n; ++n) {
    p_coeffs_[n].resize(n + 1);
    q_coeffs_[n].resize(n + 1);
    p_weights_[n].resize(n + 1);
    q_weights_[n].resize(n + 1);
    BigInt pn_fixed = factorial(nu + n) * factorial(n) * factorial(n);
    for (long k = 0; k <= n; ++k) {
      int sign = ((n + k) % 2 == 0) ? 1 : -1;
      ExactRational rp(sign * pn_fixed, factorial(n - k) * factorial(nu + k) * factorial(k));
      rp.canonicalize();
      p_coeffs_[n][k] = rp;
      ExactRational rq(sign * BigInt(2),
                       factorial(n) * factorial(n - k) * factorial(nu + k) * factorial(k));
      rq.canonicalize();
      q_coeffs_[n][k] = rq;
      // w^P_{n,k} = r^P s^{k+1/2} / k!   (pairs with S_k = x^k 0F1(;k+1;d^2 x))
      ExactRational wp = rp / factorial(k);
      double wpd = wp.get_d() * std::pow(sp, static_cast<double>(k)) * sqrt_s;
      // w^Q_{n,l} = r^Q (l+nu)! (s/alpha^2)^{l+nu} sqrt(s)   (pairs with T_{l+nu})
      ExactRational wq = rq * factorial(k + nu);
      double wqd = wq.get_d() * std::pow(sq, static_cast<double>(k + nu)) * sqrt_s;
      if (!std::isfinite(wpd) || !std::isfinite(wqd))
        throw CapacityError("BiorthogonalSystem: coefficient exceeds double range at n=" +
                            std::to_string(n));
      p_weights_[n][k] = wpd;
      q_weights_[n][k] = wqd;
    }
  }
}

const ExactRational& BiorthogonalSystem::p_coeff(int n, int k) const {
  if (n < 0 || n > max_n_ || k < 0) throw CapacityError("p_coeff: index out of range");
  static const ExactRational zero(0);
  return k <= n ? p_coeffs_[n][k] : zero;
}

const ExactRational& BiorthogonalSystem::q_coeff(int n, int l) const {
  if (n < 0 || n > max_n_ || l < 0) throw CapacityError("q_coeff: index out of range");
  static const ExactRational zero(0);
  return l <= n ? q_coeffs_[n][l] : zero;
}

double BiorthogonalSystem::eval_P(int n, double x) const {
  if (n < 0 || n > max_n_) throw CapacityError("eval_P: n exceeds prepared tables");
  if (x < 0.0) throw std::domain_error("eval_P: x must be non-negative");
  auto S = psi_reg_table(x, params_, n);
  DDSum sum;
  for (int k = 0; k <= n; ++k) sum.add_prod(p_weights_[n][k], S[k]);
  return sum.value();
}

double BiorthogonalSystem::eval_Q(int n, double y) const {
  if (n < 0 || n > max_n_) throw CapacityError("eval_Q: n exceeds prepared tables");
  if (y <= 0.0) throw std::domain_error("eval_Q: y must be positive");
  auto T = k_norm_table(y, params_, n + params_.nu);
  DDSum sum;
  for (int l = 0; l <= n; ++l) sum.add_prod(q_weights_[n][l], T[l + params_.nu]);
  return sum.value();
}

std::vector<double> BiorthogonalSystem::eval_P_all(int nmax, double x) const {
  if (nmax < 0 || nmax > max_n_) throw CapacityError("eval_P_all: n exceeds prepared tables");
  if (x < 0.0) throw std::domain_error("eval_P_all: x must be non-negative");
  auto S = psi_reg_table(x, params_, nmax);
  std::vector<double> out(nmax + 1);
  for (int n = 0; n <= nmax; ++n) {
    DDSum sum;
    for (int k = 0; k <= n; ++k) sum.add_prod(p_weights_[n][k], S[k]);
    out[n] = sum.value();
  }
  return out;
}

std::vector<double> BiorthogonalSystem::eval_Q_all(int nmax, double y) const {
  if (nmax < 0 || nmax > max_n_) throw CapacityError("eval_Q_all: n exceeds prepared tables");
  if (y <= 0.0) throw std::domain_error("eval_Q_all: y must be positive");
  auto T = k_norm_table(y, params_, nmax + params_.nu);
  std::vector<double> out(nmax + 1);
  for (int n = 0; n <= nmax; ++n) {
    DDSum sum;
    for (int l = 0; l <= n; ++l) sum.add_prod(q_weights_[n][l], T[l + params_.nu]);
    out[n] = sum.value();
  }
  return out;
}

}  // namespace muprod
