#pragma once

#include <complex>

namespace muprod::specfun {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double euler_gamma = 0.57721566490153286061;

// ln Gamma(x) for x > 0. Lanczos approximation, relative error well below
// 1e-13 across the positive axis.
double log_gamma(double x);

// ln|Gamma(x)| and the sign of Gamma(x) for any real x that is not a pole.
struct SignedLogGamma {
  double log_abs;
  int sign;  // +1 or -1
};
SignedLogGamma log_gamma_signed(double x);

// Principal-branch-free log Gamma for complex argument: exp(log_gamma_complex(z))
// equals Gamma(z), but the imaginary part may differ from the principal branch
// by multiples of 2*pi (harmless under exponentiation).
cplx log_gamma_complex(cplx z);

// Gamma(z). Throws std::domain_error when z is within 1e-8 of a non-positive
// integer.
cplx gamma_complex(cplx z);

// log(sin(pi z)) computed without overflow for large |Im z| (same branch
// caveat as log_gamma_complex).
cplx log_sin_pi(cplx z);

// Modified Bessel function of the first kind, integer order k >= 0, z >= 0.
double bessel_i(int k, double z);
// exp(-z) * I_k(z); safe for large z where I_k itself overflows.
double bessel_i_scaled(int k, double z);

// Modified Bessel function of the second kind, integer order k >= 0, z > 0.
double bessel_k(int k, double z);
// exp(z) * K_k(z).
double bessel_k_scaled(int k, double z);

// 0F1(; c; z) = sum_m z^m / ((c)_m m!), c > 0.
double hyp0f1(double c, double z);

// Terminating 2F1(-n, b; c; z) = sum_{l=0}^n (-n)_l (b)_l / ((c)_l l!) z^l.
// c must avoid {0, -1, ..., -(n-1)}.
double hyp2f1_terminating(int n, double b, double c, double z);
// Same finite sum with complex parameters (used on Mellin-Barnes lines).
cplx hyp2f1_terminating(int n, cplx b, cplx c, double z);

// psi(n) = -gamma + H_{n-1} for integer n >= 1.
double digamma_int(int n);

}  // namespace muprod::specfun
