#include "muprod/parameters.hpp"

#include <stdexcept>

namespace muprod {

CouplingParameters make_parameters(double mu, int n_small, int m_large) {
  if (!(mu > 0.0 && mu < 1.0))
    throw std::domain_error("make_parameters: mu must lie strictly in (0,1)");
  if (n_small < 1) throw std::domain_error("make_parameters: N must be >= 1");
  if (m_large < n_small) throw std::domain_error("make_parameters: M must be >= N");
  CouplingParameters p;
  p.mu = mu;
  p.n_small = n_small;
  p.m_large = m_large;
  p.nu = m_large - n_small;
  p.alpha = (1.0 + mu) / (2.0 * mu);
  p.delta = (1.0 - mu) / (2.0 * mu);
  p.s = 1.0 / mu;  // alpha^2 - delta^2 collapses exactly
  return p;
}

}  // namespace muprod
