#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace agc::num {

/// Solves A*X + X*A' + Q = 0 for symmetric Q via Kronecker vectorization.
/// Intended for the small (<= ~10 state) systems used here.
Eigen::MatrixXd lyapunov_continuous(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Q);

/// Solves X - A*X*A' = Q.
Eigen::MatrixXd lyapunov_discrete(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Q);

double spectral_radius(const Eigen::MatrixXd& M);

struct OlsFit {
  Eigen::VectorXd coef;
  Eigen::VectorXd residuals;
  double sigma2 = 0.0;  // SSE / (rows - cols)
  Eigen::Index rank = 0;
};

/// Least squares via column-pivoted QR; rank comes from the factorization.
OlsFit ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

/// Companion matrix of the lag polynomial 1 - c1 z - ... - cg z^g.
/// Spectral radius < 1 means the corresponding AR/MA polynomial has all
/// roots outside the unit circle.
Eigen::MatrixXd companion_matrix(const std::vector<double>& coeffs);

/// In-place radix-2 FFT. Length must be a power of two.
void fft_radix2(std::vector<std::complex<double>>& x);

bool is_power_of_two(std::size_t n);

/// Deterministic standard-normal stream: mt19937_64 with Box-Muller on
/// 53-bit uniforms. The generator identity is part of the reproducibility
/// contract; outputs are bit-stable across platforms for a fixed seed.
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : rng_(seed) {}

  double next();

  void fill(std::vector<double>& out, std::size_t n);

 private:
  double uniform01();  // in (0, 1]

  std::mt19937_64 rng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace agc::num
