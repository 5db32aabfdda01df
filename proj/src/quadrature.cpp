#include "muprod/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <queue>
#include <stdexcept>

#include "muprod/errors.hpp"

namespace muprod::quad {

namespace {

// QUADPACK DQK15 abscissae and weights.
constexpr double kXgk[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691, 0.7415311855993944,
    0.5860872354676911, 0.4058451513773972, 0.2077849550078985, 0.0};
constexpr double kWgk[8] = {
    0.02293532201052922, 0.06309209262997855, 0.10479001032225018, 0.14065325971552591,
    0.16900472663926790, 0.19035057806478540, 0.20443294007529889, 0.20948214108472782};
constexpr double kWg[4] = {
    0.12948496616886969, 0.27970539148927666, 0.38183005050511894, 0.41795918367346938};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk15(const Integrand& f, double a, double b, long& evals) {
  double hw = 0.5 * (b - a);
  double mid = 0.5 * (a + b);
  double fc = f(mid);
  double res_g = fc * kWg[3];
  double res_k = fc * kWgk[7];
  for (int i = 0; i < 7; ++i) {
    double fa = f(mid - hw * kXgk[i]);
    double fb = f(mid + hw * kXgk[i]);
    res_k += kWgk[i] * (fa + fb);
    if (i % 2 == 1) res_g += kWg[i / 2] * (fa + fb);
  }
  evals += 15;
  double value = res_k * hw;
  double err = std::fabs((res_k - res_g) * hw);
  return {a, b, value, err};
}

QuadratureResult adaptive(const Integrand& f, double a, double b, double tol, int cap) {
  long evals = 0;
  std::priority_queue<Panel> heap;
  heap.push(gk15(f, a, b, evals));
  double total = heap.top().value;
  double total_abs = std::fabs(total);
  double toterr = heap.top().error;
  int splits = 0;
  // The L1 mass sets the double-precision roundoff floor; asking for less
  // than that only burns subdivisions.
  auto target = [&] { return std::max(tol, 1e-14 * total_abs); };
  while (toterr > target() && splits < cap) {
    Panel worst = heap.top();
    heap.pop();
    double mid = 0.5 * (worst.a + worst.b);
    Panel left = gk15(f, worst.a, mid, evals);
    Panel right = gk15(f, mid, worst.b, evals);
    total += left.value + right.value - worst.value;
    total_abs += std::fabs(left.value) + std::fabs(right.value) - std::fabs(worst.value);
    toterr += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++splits;
  }
  if (splits >= cap && toterr > 100.0 * target())
    throw ConvergenceError("integrate: subdivision cap reached", total, toterr);
  return {total, toterr, evals};
}

}  // namespace

QuadratureResult integrate(const Integrand& f, double a, double b, double tol) {
  if (!(b > a)) throw std::invalid_argument("integrate: need b > a");
  return adaptive(f, a, b, tol, 2000);
}

QuadratureResult integrate_semi_infinite(const Integrand& f, double tol) {
  QuadratureResult head = adaptive(f, 0.0, 1.0, 0.5 * tol, 2000);
  // x = 1 + t/(1-t), dx = dt/(1-t)^2; the 15-point rule never touches t = 1.
  auto tail = [&f](double t) {
    double om = 1.0 - t;
    double x = 1.0 + t / om;
    return f(x) / (om * om);
  };
  QuadratureResult rest = adaptive(tail, 0.0, 1.0, 0.5 * tol, 2000);
  return {head.value + rest.value, head.error_estimate + rest.error_estimate,
          head.evaluations + rest.evaluations};
}

const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre_nodes(int n) {
  if (n < 2 || n > 512) throw std::domain_error("gauss_legendre_nodes: n out of [2,512]");
  static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lk(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  std::vector<double> x(n), w(n);
  const double pi = 3.14159265358979323846;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double t = std::cos(pi * (i + 0.75) / (n + 0.5));
    double p0 = 0, p1 = 0, dp = 0;
    for (int it2 = 0; it2 < 100; ++it2) {
      p0 = 1.0;
      p1 = t;
      for (int j = 2; j <= n; ++j) {
        double p2 = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      double dt = p1 / dp;
      t -= dt;
      if (std::fabs(dt) < 1e-15) break;
    }
    // Map from [-1,1] to [0,1].
    x[i] = 0.5 * (1.0 - t);
    x[n - 1 - i] = 0.5 * (1.0 + t);
    double wi = 1.0 / ((1.0 - t * t) * dp * dp);
    w[i] = w[n - 1 - i] = wi;
  }
  auto [ins, ok] = cache.emplace(n, std::make_pair(std::move(x), std::move(w)));
  return ins->second;
}

}  // namespace muprod::quad
