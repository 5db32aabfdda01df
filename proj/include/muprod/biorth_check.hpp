#pragma once

#include <vector>

#include "muprod/biorthogonal.hpp"

namespace muprod {

// Biorthogonality integrals int_0^inf P_n(x) Q_m(x) dx for all n, m <= nmax,
// evaluated by composite Gauss-Legendre quadrature in extended precision.
//
// Double precision cannot do this job: the cross integrands P_n Q_m with
// n >> m carry cancelling mass of order n!(n+nu)!/(m!(m+nu)!), so a 1e-8
// absolute answer needs ~30 significant digits. The integrand here is built
// from the exact rational coefficient tables and MPFR Bessel series, with
// MPFR nodes and weights, which keeps the quadrature itself out of the error
// budget.
std::vector<std::vector<double>> biorthogonality_matrix(const CouplingParameters& p, int nmax,
                                                        int prec_bits = 256);

// Direct-sum kernel sum_{n<N} P_n(x) Q_n(y) evaluated in extended precision.
// Needed at large N and small arguments (the hard-edge rescaling), where the
// Q_n sums cancel through binom(N, N/2) ~ 1e23 and double precision returns
// noise.
double kernel_direct_extended(double x, double y, const BiorthogonalSystem& sys,
                              int prec_bits = 320);

}  // namespace muprod
