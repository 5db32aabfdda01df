#pragma once

namespace muprod {

// The single source of ensemble truth: the coupling mu in (0,1), the matrix
// shape N x M (M >= N), and the derived weight parameters
//   alpha = (1+mu)/(2mu),  delta = (1-mu)/(2mu),  nu = M - N.
// alpha - delta = 1 and alpha^2 - delta^2 = 1/mu hold identically; `s` stores
// the latter combination since every kernel formula uses it.
struct CouplingParameters {
  double mu;
  int n_small;
  int m_large;
  int nu;
  double alpha;
  double delta;
  double s;  // alpha^2 - delta^2 == 1/mu
};

CouplingParameters make_parameters(double mu, int n_small, int m_large);

}  // namespace muprod
