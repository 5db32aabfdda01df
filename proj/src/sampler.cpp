#include "muprod/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "muprod/specfun.hpp"

namespace muprod {

namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(mix64(seed ^ mix64(stream * kGamma + 0x6A09E667F3BCC909ull))) {}

std::uint64_t CounterRng::next_u64() { return mix64(key_ + (++ctr_) * kGamma); }

double CounterRng::next_uniform() {
  // 53-bit mantissa mapped to (0, 1]
  return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
}

std::complex<double> CounterRng::next_std_gaussian() {
  double u1 = next_uniform();
  double u2 = next_uniform();
  double r = std::sqrt(-std::log(u1));  // sqrt(-2 ln u1) / sqrt(2): E|z|^2 = 1
  double th = 2.0 * specfun::pi * u2;
  return {r * std::cos(th), r * std::sin(th)};
}

ComplexMatrix matmul(const ComplexMatrix& x, const ComplexMatrix& y) {
  if (x.cols != y.rows) throw std::invalid_argument("matmul: shape mismatch");
  ComplexMatrix out(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i) {
    for (int k = 0; k < x.cols; ++k) {
      std::complex<double> v = x(i, k);
      if (v == 0.0) continue;
      for (int j = 0; j < y.cols; ++j) out(i, j) += v * y(k, j);
    }
  }
  return out;
}

std::pair<ComplexMatrix, ComplexMatrix> sample_coupled_pair(const CouplingParameters& p,
                                                            CounterRng& rng, bool rescaled) {
  int n = p.n_small, m = p.m_large;
  ComplexMatrix a(n, m), b(n, m);
  for (auto& v : a.a) v = rng.next_std_gaussian();
  for (auto& v : b.a) v = rng.next_std_gaussian();
  double scale = 1.0 / std::sqrt(2.0);
  if (rescaled) scale /= std::sqrt(static_cast<double>(n));
  std::complex<double> irm(0.0, std::sqrt(p.mu));
  ComplexMatrix x1(n, m), x2(m, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      x1(i, j) = scale * (a(i, j) - irm * b(i, j));
      x2(j, i) = scale * (std::conj(a(i, j)) - irm * std::conj(b(i, j)));
    }
  }
  return {std::move(x1), std::move(x2)};
}

std::vector<double> hermitian_eigenvalues_jacobi(ComplexMatrix h, ComplexMatrix* vectors) {
  if (h.rows != h.cols) throw std::invalid_argument("jacobi: matrix must be square");
  const int n = h.rows;
  ComplexMatrix v;
  if (vectors) {
    v = ComplexMatrix(n, n);
    for (int i = 0; i < n; ++i) v(i, i) = 1.0;
  }
  double norm = 0.0;
  for (const auto& e : h.a) norm += std::norm(e);
  norm = std::sqrt(norm);
  const double stop = 1e-13 * (norm > 0 ? norm : 1.0);
  const int max_sweeps = 40;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += std::norm(h(p, q));
    off = std::sqrt(2.0 * off);
    if (off <= stop) {
      std::vector<std::pair<double, int>> ev(n);
      for (int i = 0; i < n; ++i) ev[i] = {h(i, i).real(), i};
      std::sort(ev.begin(), ev.end());
      std::vector<double> out(n);
      for (int i = 0; i < n; ++i) out[i] = ev[i].first;
      if (vectors) {
        ComplexMatrix sorted(n, n);
        for (int j = 0; j < n; ++j)
          for (int i = 0; i < n; ++i) sorted(i, j) = v(i, ev[j].second);
        *vectors = std::move(sorted);
      }
      return out;
    }
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        std::complex<double> hpq = h(p, q);
        double apq = std::abs(hpq);
        if (apq <= 1e-300) continue;
        double app = h(p, p).real();
        double aqq = h(q, q).real();
        // Unitary 2x2: rows/cols p,q rotated by angle theta with phase of h_pq.
        double tau = (aqq - app) / (2.0 * apq);
        double t = (tau >= 0 ? 1.0 : -1.0) / (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = t * c;
        std::complex<double> phase = hpq / apq;
        std::complex<double> sp = s * phase;
        for (int k = 0; k < n; ++k) {
          std::complex<double> hkp = h(k, p), hkq = h(k, q);
          h(k, p) = c * hkp - std::conj(sp) * hkq;
          h(k, q) = sp * hkp + c * hkq;
        }
        for (int k = 0; k < n; ++k) {
          std::complex<double> hpk = h(p, k), hqk = h(q, k);
          h(p, k) = c * hpk - sp * hqk;
          h(q, k) = std::conj(sp) * hpk + c * hqk;
        }
        if (vectors) {
          for (int k = 0; k < n; ++k) {
            std::complex<double> vkp = v(k, p), vkq = v(k, q);
            v(k, p) = c * vkp - std::conj(sp) * vkq;
            v(k, q) = sp * vkp + c * vkq;
          }
        }
      }
    }
  }
  throw std::runtime_error("jacobi: no convergence within sweep cap");
}

std::vector<double> squared_singular_values(const ComplexMatrix& y) {
  if (y.rows != y.cols) throw std::invalid_argument("squared_singular_values: matrix must be square");
  const int n = y.rows;
  ComplexMatrix h(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      std::complex<double> acc = 0.0;
      for (int k = 0; k < n; ++k) acc += y(i, k) * std::conj(y(j, k));
      h(i, j) = acc;
      h(j, i) = std::conj(acc);
    }
  }
  auto ev = hermitian_eigenvalues_jacobi(std::move(h));
  for (double& e : ev) e = std::max(e, 0.0);
  return ev;
}

SampleBatch sample_batch(const CouplingParameters& p, int count, std::uint64_t seed, bool rescaled,
                         int threads) {
  if (count < 1) throw std::invalid_argument("sample_batch: count must be >= 1");
  SampleBatch batch;
  batch.params = p;
  batch.seed = seed;
  batch.rescaled = rescaled;
  batch.spectra.assign(count, {});
  std::vector<char> failed(count, 0);

  auto run = [&](int lo, int hi) {
    for (int t = lo; t < hi; ++t) {
      CounterRng rng(seed, static_cast<std::uint64_t>(t));
      try {
        auto [x1, x2] = sample_coupled_pair(p, rng, rescaled);
        batch.spectra[t] = squared_singular_values(matmul(x1, x2));
      } catch (const std::exception&) {
        failed[t] = 1;
      }
    }
  };

  int nthreads = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  if (nthreads < 1) nthreads = 1;
  nthreads = std::min<int>(nthreads, count);
  if (nthreads == 1) {
    run(0, count);
  } else {
    std::vector<std::thread> pool;
    int chunk = (count + nthreads - 1) / nthreads;
    for (int i = 0; i < nthreads; ++i) {
      int lo = i * chunk, hi = std::min(count, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(run, lo, hi);
    }
    for (auto& th : pool) th.join();
  }
  int nfail = 0;
  std::vector<std::vector<double>> kept;
  kept.reserve(count);
  for (int t = 0; t < count; ++t) {
    if (failed[t]) {
      ++nfail;
      continue;
    }
    kept.push_back(std::move(batch.spectra[t]));
  }
  batch.spectra = std::move(kept);
  batch.failed_trials = nfail;
  return batch;
}

Histogram empirical_density(const SampleBatch& batch, int bins, double lo, double hi) {
  if (batch.spectra.empty()) throw std::domain_error("empirical_density: empty batch");
  if (bins < 10) throw std::domain_error("empirical_density: need at least 10 bins");
  if (!(hi > lo)) throw std::domain_error("empirical_density: need hi > lo");
  Histogram h;
  h.lo = lo;
  h.hi = hi;
  h.width = (hi - lo) / bins;
  h.center.resize(bins);
  h.density.assign(bins, 0.0);
  h.stderr_.assign(bins, 0.0);
  std::vector<long> count(bins, 0);
  long total = 0, outside = 0;
  for (const auto& sp : batch.spectra) {
    for (double yv : sp) {
      ++total;
      if (yv < lo || yv >= hi) {
        ++outside;
        continue;
      }
      int b = static_cast<int>((yv - lo) / h.width);
      if (b >= bins) b = bins - 1;
      ++count[b];
    }
  }
  double trials = static_cast<double>(batch.spectra.size());
  for (int b = 0; b < bins; ++b) {
    h.center[b] = lo + (b + 0.5) * h.width;
    h.density[b] = count[b] / (trials * h.width);
    h.stderr_[b] = std::sqrt(static_cast<double>(count[b])) / (trials * h.width);
  }
  h.total_points = total;
  h.outside = outside;
  return h;
}

std::vector<double> linear_statistic(const SampleBatch& batch, const std::vector<double>& poly) {
  if (batch.spectra.empty()) throw std::domain_error("linear_statistic: empty batch");
  std::vector<double> out;
  out.reserve(batch.spectra.size());
  for (const auto& sp : batch.spectra) {
    double acc = 0.0;
    for (double yv : sp) {
      double f = 0.0;
      for (size_t d = poly.size(); d-- > 0;) f = f * yv + poly[d];
      acc += f;
    }
    out.push_back(acc);
  }
  return out;
}

void batch_to_json(const SampleBatch& batch, std::ostream& os) {
  os.precision(17);
  os << "{\"mu\":" << batch.params.mu << ",\"N\":" << batch.params.n_small
     << ",\"M\":" << batch.params.m_large << ",\"seed\":" << batch.seed
     << ",\"rescaled\":" << (batch.rescaled ? "true" : "false")
     << ",\"failed\":" << batch.failed_trials << ",\"spectra\":[";
  for (size_t t = 0; t < batch.spectra.size(); ++t) {
    os << (t ? ",[" : "[");
    const auto& sp = batch.spectra[t];
    for (size_t i = 0; i < sp.size(); ++i) os << (i ? "," : "") << sp[i];
    os << "]";
  }
  os << "]}";
}

void batch_to_csv(const SampleBatch& batch, std::ostream& os) {
  os.precision(17);
  os << "# mu=" << batch.params.mu << " N=" << batch.params.n_small
     << " M=" << batch.params.m_large << " seed=" << batch.seed
     << " rescaled=" << (batch.rescaled ? 1 : 0) << " trials=" << batch.spectra.size()
     << " failed=" << batch.failed_trials << "\n";
  for (const auto& sp : batch.spectra) {
    for (size_t i = 0; i < sp.size(); ++i) os << (i ? "," : "") << sp[i];
    os << "\n";
  }
}

}  // namespace muprod
