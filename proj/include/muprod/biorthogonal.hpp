#pragma once

#include <array>
#include <vector>

#include "muprod/parameters.hpp"
#include "muprod/rational.hpp"

namespace muprod {

// psi_j(x) = x^{j/2} I_j(2 delta sqrt(x)) and
// phi_j(y) = y^{(j+nu)/2} K_{j+nu}(2 alpha sqrt(y)).
double raw_psi(int j, double x, const CouplingParameters& p);
double raw_phi(int j, double y, const CouplingParameters& p);

// Tables of hat functions used by every kernel form:
//   psi_hat[k] = x^{k/2} I_k(2 delta sqrt(x)),         k = 0..kmax
//   k_hat[m]   = y^{m/2} K_m(2 alpha sqrt(y)),         m = 0..mmax
// The K table is filled by the order recurrence, which is stable and avoids
// the huge intermediate K values a naive per-order call would hit.
std::vector<double> psi_hat_table(double x, const CouplingParameters& p, int kmax);
std::vector<double> k_hat_table(double y, const CouplingParameters& p, int mmax);

// g_{k,l} = (1/2) alpha^{k+nu} delta^l s^{-k-nu-l-1} (k+l+nu)!  with s = alpha^2-delta^2.
double moment_matrix_entry(int k, int l, const CouplingParameters& p);

// Entry of the inverse of the Hankel matrix h_{k+l} = (k+l+nu)!, exact.
rat::ExactRational hankel_inverse_entry(int k, int l, int nu, int n_small);

// Five-term recurrence coefficients, index j = -2..2 stored at [j+2].
// b coefficients whose closed form divides by n or n(n-1) are returned as 0
// for n = 0, 1; they multiply Q_{-1}, Q_{-2} which vanish by convention.
std::array<double, 5> recurrence_a(int n, const CouplingParameters& p);
std::array<double, 5> recurrence_b(int n, const CouplingParameters& p);

// Exact-rational variants for rational mu (duality checks with zero tolerance).
std::array<rat::ExactRational, 5> recurrence_a_exact(int n, const rat::ExactRational& mu, int nu);
std::array<rat::ExactRational, 5> recurrence_b_exact(int n, const rat::ExactRational& mu, int nu);

// The biorthogonal pair P_n, Q_n. Coefficient tables are built in exact
// rational arithmetic (the alternating (-n)_k sums shred precision if
// assembled in floating point) and converted to double once. Conversion
// overflows double near n ~ 85; max_n is capped accordingly.
class BiorthogonalSystem {
 public:
  explicit BiorthogonalSystem(const CouplingParameters& p, int max_n = 40);

  const CouplingParameters& params() const { return params_; }
  int max_n() const { return max_n_; }

  // P_n(x); x = 0 is allowed (only the k = 0 term survives).
  double eval_P(int n, double x) const;
  // Q_n(y); y must be positive (K diverges at 0).
  double eval_Q(int n, double y) const;

  // Evaluate all of P_0..P_{nmax} (resp. Q) at once, sharing the Bessel tables.
  std::vector<double> eval_P_all(int nmax, double x) const;
  std::vector<double> eval_Q_all(int nmax, double y) const;

  // r^P_{n,k}: P_n(x) = sum_k r^P_{n,k} s^{k+1/2} delta^{-k} x^{k/2} I_k(2 delta sqrt(x)).
  const rat::ExactRational& p_coeff(int n, int k) const;
  // r^Q_{n,l}: Q_n(y) = sum_l r^Q_{n,l} s^{l+nu+1/2} alpha^{-l-nu} y^{(l+nu)/2} K_{l+nu}(...).
  const rat::ExactRational& q_coeff(int n, int l) const;

 private:
  CouplingParameters params_;
  int max_n_;
  std::vector<std::vector<rat::ExactRational>> p_coeffs_, q_coeffs_;
  // Double weights w^P_{n,k} = r^P_{n,k} s^{k+1/2} delta^{-k} (and the Q analogue),
  // folded once so evaluation is a dot product with the hat tables.
  std::vector<std::vector<double>> p_weights_, q_weights_;
};

}  // namespace muprod
