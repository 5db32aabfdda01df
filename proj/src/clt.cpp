#include "muprod/clt.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "muprod/sampler.hpp"

namespace muprod {

using rat::ExactRational;

void LaurentPolynomial::set(int degree, const ExactRational& c) {
  if (c == 0)
    terms_.erase(degree);
  else
    terms_[degree] = c;
}

ExactRational LaurentPolynomial::get(int degree) const {
  auto it = terms_.find(degree);
  return it == terms_.end() ? ExactRational(0) : it->second;
}

LaurentPolynomial LaurentPolynomial::operator*(const LaurentPolynomial& o) const {
  LaurentPolynomial out;
  for (const auto& [da, ca] : terms_) {
    for (const auto& [db, cb] : o.terms_) {
      ExactRational c = out.get(da + db) + ca * cb;
      c.canonicalize();
      out.set(da + db, c);
    }
  }
  return out;
}

LaurentPolynomial LaurentPolynomial::operator+(const LaurentPolynomial& o) const {
  LaurentPolynomial out = *this;
  out += o;
  return out;
}

LaurentPolynomial& LaurentPolynomial::operator+=(const LaurentPolynomial& o) {
  for (const auto& [d, c] : o.terms_) {
    ExactRational v = get(d) + c;
    v.canonicalize();
    set(d, v);
  }
  return *this;
}

LaurentPolynomial symbol_s(double mu) {
  if (!(mu >= 0.0 && mu <= 1.0)) throw std::domain_error("symbol_s: mu must lie in [0,1]");
  // Exact in the binary rational actually passed in.
  ExactRational m(mu);
  ExactRational dm = (1 - m) * (1 - m);  // (1-mu)^2
  ExactRational pm = (1 + m) * (1 + m);  // (1+mu)^2
  LaurentPolynomial s;
  auto q = [](ExactRational v) {
    v.canonicalize();
    return v;
  };
  s.set(2, q(dm / 4));
  s.set(1, q((3 * dm + pm) / 4));
  s.set(0, q((3 * dm + 3 * pm) / 4));
  s.set(-1, q((dm + 3 * pm) / 4));
  s.set(-2, q(pm / 4));
  return s;
}

std::array<double, 5> limiting_recurrence_alphas(double mu) {
  auto s = symbol_s(mu);
  return {s.get(2).get_d(), s.get(1).get_d(), s.get(0).get_d(), s.get(-1).get_d(),
          s.get(-2).get_d()};
}

std::array<double, 5> primed_recurrence_a(int n, double big_n, double mu, int nu) {
  if (n < 0) throw std::domain_error("primed_recurrence_a: n must be >= 0");
  // 1/(alpha^2-delta^2) -> mu/N^2 and delta^2/(alpha^2-delta^2)^2 -> (1-mu)^2/(4N^2)
  // after alpha -> N alpha, delta -> N delta; the 1/(n!(n+nu)!) normalization
  // turns the raw coefficients into the bounded primed ones.
  double inv = mu / (big_n * big_n);
  double d2 = (1.0 - mu) * (1.0 - mu) / (4.0 * big_n * big_n);
  double a2full = inv + d2;  // alpha^2/(alpha^2-delta^2)^2 rescaled
  double nn = n, v = nu;
  std::array<double, 5> a{};
  a[4] = d2 * (nn + v + 1.0) * (nn + v + 2.0);
  a[3] = inv * (nn + 1.0) * (nn + v + 1.0) + d2 * 2.0 * (2.0 * nn + v + 2.0) * (nn + v + 1.0);
  a[2] = inv * (3.0 * nn * nn + 2.0 * v * nn + 3.0 * nn + v + 1.0) +
         d2 * (6.0 * nn * nn + 6.0 * nn * v + v * v + 6.0 * nn + 3.0 * v + 2.0);
  a[1] = inv * nn * (3.0 * nn + v) + d2 * 2.0 * nn * (v + 2.0 * nn);
  a[0] = a2full * nn * (nn - 1.0);
  return a;
}

std::map<int, double> fourier_coefficients(const std::vector<double>& f, double mu) {
  if (f.empty()) throw std::invalid_argument("fourier_coefficients: empty polynomial");
  if (f.size() > 21) throw std::domain_error("fourier_coefficients: degree must be <= 20");
  LaurentPolynomial s = symbol_s(mu);
  // Horner in the Laurent ring: f(s) = c_0 + s (c_1 + s (...)).
  LaurentPolynomial acc;
  for (size_t d = f.size(); d-- > 0;) {
    LaurentPolynomial next = acc * s;
    ExactRational c(f[d]);
    c.canonicalize();
    LaurentPolynomial cpoly;
    cpoly.set(0, c);
    next += cpoly;
    acc = next;
  }
  // hat f_k is the coefficient of w^{-k} in f(s(w)).
  std::map<int, double> out;
  for (const auto& [d, c] : acc.terms()) out[-d] = c.get_d();
  return out;
}

double limiting_variance(const std::vector<double>& f, double mu) {
  auto fh = fourier_coefficients(f, mu);
  double var = 0.0;
  for (const auto& [k, v] : fh) {
    if (k < 1) continue;
    auto it = fh.find(-k);
    if (it == fh.end()) continue;
    var += k * v * it->second;
  }
  if (var < -1e-12 * (1.0 + std::fabs(var)))
    throw std::logic_error("limiting_variance: negative variance indicates a coefficient bug");
  return var < 0.0 ? 0.0 : var;
}

CltReport clt_experiment(const CouplingParameters& p, const std::vector<double>& f, int trials,
                         std::uint64_t seed) {
  if (trials < 1000) throw std::invalid_argument("clt_experiment: need at least 1000 trials");
  SampleBatch batch = sample_batch(p, trials, seed, /*rescaled=*/true);
  std::vector<double> yf = linear_statistic(batch, f);
  double n = static_cast<double>(yf.size());
  double mean = 0.0;
  for (double v : yf) mean += v;
  mean /= n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : yf) {
    double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  double var = m2 / (n - 1.0);
  m2 /= n;
  m3 /= n;
  m4 /= n;
  CltReport r;
  r.mu = p.mu;
  r.n_small = p.n_small;
  r.m_large = p.m_large;
  r.f_coefficients = f;
  r.trials = trials;
  r.sample_variance = var;
  r.analytic_variance = limiting_variance(f, p.mu);
  r.ratio = r.analytic_variance != 0.0 ? var / r.analytic_variance
                                       : (var == 0.0 ? 1.0 : std::numeric_limits<double>::infinity());
  r.skewness = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
  r.excess_kurtosis = m2 > 0.0 ? m4 / (m2 * m2) - 3.0 : 0.0;
  r.seed = seed;
  r.failed_trials = batch.failed_trials;
  return r;
}

std::string clt_report_to_json(const CltReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << "{\"analytic_variance\":" << r.analytic_variance << ",\"f_coefficients\":[";
  for (size_t i = 0; i < r.f_coefficients.size(); ++i)
    os << (i ? "," : "") << r.f_coefficients[i];
  os << "],\"failed_trials\":" << r.failed_trials << ",\"kurtosis\":" << r.excess_kurtosis
     << ",\"mu\":" << r.mu << ",\"N\":" << r.n_small << ",\"M\":" << r.m_large
     << ",\"ratio\":" << r.ratio << ",\"sample_variance\":" << r.sample_variance
     << ",\"seed\":" << r.seed << ",\"skewness\":" << r.skewness << ",\"trials\":" << r.trials
     << "}";
  return os.str();
}

}  // namespace muprod
