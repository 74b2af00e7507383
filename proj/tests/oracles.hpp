// Test-only reference implementations, kept deliberately naive and
// independent of the library code paths they check.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "agc/core.hpp"
#include "agc/numeric.hpp"

namespace oracle {

inline double mean(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

/// Two-pass population variance.
inline double variance(const std::vector<double>& x) {
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size());
}

inline double stddev(const std::vector<double>& x) { return std::sqrt(variance(x)); }

/// O(n^2) DFT for FFT cross-checks.
inline std::vector<std::complex<double>> naive_dft(const std::vector<std::complex<double>>& x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> s{0.0, 0.0};
    for (std::size_t t = 0; t < n; ++t) {
      const double ang = -2.0 * std::numbers::pi * static_cast<double>(k * t) /
                         static_cast<double>(n);
      s += x[t] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    out[k] = s;
  }
  return out;
}

/// H2 norm of C (sI - A)^{-1} B by trapezoidal quadrature of the magnitude
/// response, independent of any Lyapunov solve.
inline double h2_by_quadrature(const Eigen::MatrixXd& A, const Eigen::VectorXd& B,
                               const Eigen::RowVectorXd& C, double w_max, std::size_t n_points) {
  auto mag2 = [&](double w) {
    const std::complex<double> jw(0.0, w);
    Eigen::MatrixXcd M = jw * Eigen::MatrixXcd::Identity(A.rows(), A.cols()) -
                         A.cast<std::complex<double>>();
    const Eigen::VectorXcd x = M.partialPivLu().solve(B.cast<std::complex<double>>());
    const std::complex<double> h = (C.cast<std::complex<double>>() * x).value();
    return std::norm(h);
  };
  // |H|^2 is even in w: integrate [0, w_max] and double.
  const double dw = w_max / static_cast<double>(n_points);
  double sum = 0.5 * (mag2(0.0) + mag2(w_max));
  for (std::size_t i = 1; i < n_points; ++i) sum += mag2(dw * static_cast<double>(i));
  return std::sqrt(2.0 * sum * dw / (2.0 * std::numbers::pi));
}

/// Yule-Walker AR coefficients from an autocorrelation sequence
/// (Levinson-Durbin recursion, order = rho.size() - 1).
inline std::vector<double> yule_walker(const std::vector<double>& rho) {
  const std::size_t p = rho.size() - 1;
  std::vector<double> phi(p + 1, 0.0), prev(p + 1, 0.0);
  double v = 1.0;
  for (std::size_t k = 1; k <= p; ++k) {
    double num = rho[k];
    for (std::size_t j = 1; j < k; ++j) num -= prev[j] * rho[k - j];
    const double refl = num / v;
    phi[k] = refl;
    for (std::size_t j = 1; j < k; ++j) phi[j] = prev[j] - refl * prev[k - j];
    v *= (1.0 - refl * refl);
    prev = phi;
  }
  return {phi.begin() + 1, phi.end()};
}

/// Simulates a stationary AR process driven by the library's Gaussian
/// source; the first `discard` samples are dropped.
inline agc::UniformSeries simulate_ar(const std::vector<double>& phi, double mu, double sigma,
                                      std::size_t n, std::uint64_t seed, double dt = 2.0,
                                      std::size_t discard = 2000) {
  agc::num::GaussianSource noise(seed);
  const std::size_t g = phi.size();
  std::vector<double> buf(n + discard, 0.0);
  for (std::size_t k = 0; k < buf.size(); ++k) {
    double v = mu + sigma * noise.next();
    for (std::size_t i = 1; i <= g && i <= k; ++i) v += phi[i - 1] * buf[k - i];
    buf[k] = v;
  }
  agc::UniformSeries out;
  out.dt = dt;
  out.values.assign(buf.begin() + static_cast<long>(discard), buf.end());
  return out;
}

/// ARMA(g,h) simulation with the library's noise source.
inline agc::UniformSeries simulate_arma(const std::vector<double>& phi,
                                        const std::vector<double>& theta, double mu, double sigma,
                                        std::size_t n, std::uint64_t seed, double dt = 2.0,
                                        std::size_t discard = 2000) {
  agc::num::GaussianSource noise(seed);
  std::vector<double> buf(n + discard, 0.0);
  std::vector<double> a(n + discard, 0.0);
  for (std::size_t k = 0; k < buf.size(); ++k) {
    a[k] = sigma * noise.next();
    double v = mu + a[k];
    for (std::size_t i = 1; i <= phi.size() && i <= k; ++i) v += phi[i - 1] * buf[k - i];
    for (std::size_t j = 1; j <= theta.size() && j <= k; ++j) v -= theta[j - 1] * a[k - j];
    buf[k] = v;
  }
  agc::UniformSeries out;
  out.dt = dt;
  out.values.assign(buf.begin() + static_cast<long>(discard), buf.end());
  return out;
}

/// Stationary bivariate VAR simulation.
inline std::pair<std::vector<double>, std::vector<double>> simulate_var(
    const std::vector<Eigen::Matrix2d>& phi, const Eigen::Vector2d& mu,
    const Eigen::Matrix2d& noise_chol, std::size_t n, std::uint64_t seed,
    std::size_t discard = 2000) {
  agc::num::GaussianSource noise(seed);
  const std::size_t g = phi.size();
  std::vector<Eigen::Vector2d> buf(n + discard, Eigen::Vector2d::Zero());
  for (std::size_t k = 0; k < buf.size(); ++k) {
    Eigen::Vector2d w(noise.next(), noise.next());
    Eigen::Vector2d v = mu + noise_chol * w;
    for (std::size_t i = 1; i <= g && i <= k; ++i) v += phi[i - 1] * buf[k - i];
    buf[k] = v;
  }
  std::vector<double> c0(n), c1(n);
  for (std::size_t k = 0; k < n; ++k) {
    c0[k] = buf[discard + k](0);
    c1[k] = buf[discard + k](1);
  }
  return {std::move(c0), std::move(c1)};
}

}  // namespace oracle
