#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "muprod/parameters.hpp"

namespace muprod {

struct ComplexMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<std::complex<double>> a;

  ComplexMatrix() = default;
  ComplexMatrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}
  std::complex<double>& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  const std::complex<double>& operator()(int i, int j) const {
    return a[static_cast<size_t>(i) * cols + j];
  }
};

ComplexMatrix matmul(const ComplexMatrix& x, const ComplexMatrix& y);

// Counter-based uniform stream: output i is the splitmix64 finalizer applied
// to key + i * golden gamma, so draws are a pure function of (seed, trial,
// counter) and independent of scheduling. Gaussians come from Box-Muller.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);
  std::uint64_t next_u64();
  double next_uniform();                  // (0, 1]
  std::complex<double> next_std_gaussian();  // E|z|^2 = 1

 private:
  std::uint64_t key_;
  std::uint64_t ctr_ = 0;
};

// Draw a mu-coupled pair X1 = (A - i sqrt(mu) B)/sqrt(2), X2 = (A* - i sqrt(mu) B*)/sqrt(2)
// with A, B iid standard complex Gaussian N x M. `rescaled` divides the
// entries by sqrt(N), realizing the weight with N alpha, N delta.
std::pair<ComplexMatrix, ComplexMatrix> sample_coupled_pair(const CouplingParameters& p,
                                                            CounterRng& rng,
                                                            bool rescaled = false);

// Ascending eigenvalues of Y Y^dagger via cyclic Jacobi on the Hermitian
// product. Throws on non-convergence after the sweep cap.
std::vector<double> squared_singular_values(const ComplexMatrix& y);

// Hermitian eigensolver used above; exposed for tests. If `vectors` is given
// it receives the eigenvector matrix (columns match the eigenvalue order).
std::vector<double> hermitian_eigenvalues_jacobi(ComplexMatrix h, ComplexMatrix* vectors = nullptr);

struct SampleBatch {
  CouplingParameters params;
  std::uint64_t seed = 0;
  bool rescaled = false;
  std::vector<std::vector<double>> spectra;  // one sorted N-vector per trial
  int failed_trials = 0;
};

SampleBatch sample_batch(const CouplingParameters& p, int count, std::uint64_t seed,
                         bool rescaled = false, int threads = 0);

struct Histogram {
  double lo = 0.0, hi = 0.0, width = 0.0;
  std::vector<double> center;
  std::vector<double> density;  // normalized so sum(density * width) = N - tail mass
  std::vector<double> stderr_;  // per-bin multinomial standard error of `density`
  long total_points = 0;
  long outside = 0;
};

Histogram empirical_density(const SampleBatch& batch, int bins, double lo, double hi);

// Per-trial values of sum_i f(y_i) for a real-coefficient polynomial f
// (coefficients in ascending degree order).
std::vector<double> linear_statistic(const SampleBatch& batch, const std::vector<double>& poly);

void batch_to_csv(const SampleBatch& batch, std::ostream& os);
void batch_to_json(const SampleBatch& batch, std::ostream& os);

}  // namespace muprod
