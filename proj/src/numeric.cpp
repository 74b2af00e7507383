#include "agc/numeric.hpp"

#include <cmath>
#include <numbers>

#include "agc/error.hpp"

namespace agc::num {

namespace {

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Eigen::VectorXd vec(const Eigen::MatrixXd& m) {
  return Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
}

Eigen::MatrixXd unvec(const Eigen::VectorXd& v, Eigen::Index n) {
  return Eigen::Map<const Eigen::MatrixXd>(v.data(), n, n);
}

}  // namespace

Eigen::MatrixXd lyapunov_continuous(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Q) {
  const Eigen::Index n = A.rows();
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
  // vec(AX) = (I (x) A) vec(X), vec(XA') = (A (x) I) vec(X)
  const Eigen::MatrixXd lhs = kron(eye, A) + kron(A, eye);
  const Eigen::VectorXd rhs = -vec(Q);
  return unvec(lhs.colPivHouseholderQr().solve(rhs), n);
}

Eigen::MatrixXd lyapunov_discrete(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Q) {
  const Eigen::Index n = A.rows();
  const Eigen::MatrixXd lhs =
      Eigen::MatrixXd::Identity(n * n, n * n) - kron(A, A);
  return unvec(lhs.colPivHouseholderQr().solve(vec(Q)), n);
}

double spectral_radius(const Eigen::MatrixXd& M) {
  return M.eigenvalues().cwiseAbs().maxCoeff();
}

OlsFit ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  OlsFit fit;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  fit.rank = qr.rank();
  fit.coef = qr.solve(y);
  fit.residuals = y - X * fit.coef;
  const auto dof = X.rows() - X.cols();
  fit.sigma2 = dof > 0 ? fit.residuals.squaredNorm() / static_cast<double>(dof) : 0.0;
  return fit;
}

Eigen::MatrixXd companion_matrix(const std::vector<double>& coeffs) {
  const Eigen::Index g = static_cast<Eigen::Index>(coeffs.size());
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(g, g);
  for (Eigen::Index i = 0; i < g; ++i) C(0, i) = coeffs[static_cast<std::size_t>(i)];
  for (Eigen::Index i = 1; i < g; ++i) C(i, i - 1) = 1.0;
  return C;
}

bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

void fft_radix2(std::vector<std::complex<double>>& x) {
  const std::size_t n = x.size();
  if (!is_power_of_two(n)) {
    throw Error(ErrorKind::bad_argument, "fft_radix2: length must be a power of two");
  }
  // bit-reversal permutation
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(x[i], x[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = x[i + k];
        const std::complex<double> v = x[i + k + len / 2] * w;
        x[i + k] = u + v;
        x[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

double GaussianSource::uniform01() {
  // 53-bit mantissa draw; zero is mapped to the smallest positive value so
  // log() below stays finite.
  const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
  return u > 0.0 ? u : 0x1.0p-53;
}

double GaussianSource::next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform01();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

void GaussianSource::fill(std::vector<double>& out, std::size_t n) {
  out.resize(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = next();
}

}  // namespace agc::num
