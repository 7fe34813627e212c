#include "fgl/norms.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "fft_util.hpp"

namespace fgl {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

// uhat(s_m) for s_m = -pi + 2 pi m / K, m = 0..K-1, via one DFT:
// uhat(s_m) = (1/sqrt(2 pi)) sum_{j=1}^{n} [(-1)^j u_j] e^{-2 pi i j m / K}.
std::vector<std::complex<double>> hat_on_grid(const Eigen::VectorXcd& u, int K) {
  const int n = static_cast<int>(u.size());
  std::vector<std::complex<double>> buf(static_cast<size_t>(K), 0.0);
  for (int j = 1; j <= n; ++j) {
    const double sgn = (j % 2 == 0) ? 1.0 : -1.0;
    buf[static_cast<size_t>(j)] = sgn * u[j - 1];
  }
  detail::FftPlan plan(K, FFTW_FORWARD);
  plan.execute(buf.data());
  const double scale = 1.0 / std::sqrt(kTwoPi);
  for (auto& v : buf) v *= scale;
  return buf;
}

int quad_points(int n) { return 8 * n; }

}  // namespace

double norm_l2h(const Eigen::VectorXcd& u, double h) {
  return std::sqrt(h * u.squaredNorm());
}

double norm_linfh(const Eigen::VectorXcd& u) {
  double m = 0.0;
  for (Eigen::Index j = 0; j < u.size(); ++j) m = std::max(m, std::abs(u[j]));
  return m;
}

double norm_lph(const Eigen::VectorXcd& u, double h, double p) {
  if (std::isinf(p)) return norm_linfh(u);
  if (!(p >= 1.0)) throw std::domain_error("norm_lph: p must be >= 1");
  double s = 0.0;
  for (Eigen::Index j = 0; j < u.size(); ++j) s += std::pow(std::abs(u[j]), p);
  return std::pow(h * s, 1.0 / p);
}

double frac_seminorm(const Eigen::VectorXcd& u, double h, double sigma) {
  if (!(sigma >= 0.0 && sigma <= 1.0)) {
    throw std::domain_error("frac_seminorm: sigma must be in [0, 1]");
  }
  const int n = static_cast<int>(u.size());
  if (n == 0) return 0.0;
  const int K = quad_points(n);
  const auto hat = hat_on_grid(u, K);
  const double w = kTwoPi / K;
  double acc = 0.0;
  for (int m = 0; m < K; ++m) {
    const double s = -M_PI + kTwoPi * m / K;
    acc += std::pow(std::fabs(s), 2.0 * sigma) * std::norm(hat[static_cast<size_t>(m)]);
  }
  return std::sqrt(h * std::pow(h, -2.0 * sigma) * acc * w);
}

double frac_seminorm_direct(const Eigen::VectorXcd& u, double h, double sigma) {
  if (!(sigma >= 0.0 && sigma <= 1.0)) {
    throw std::domain_error("frac_seminorm_direct: sigma must be in [0, 1]");
  }
  const int n = static_cast<int>(u.size());
  if (n == 0) return 0.0;
  const int K = quad_points(n);
  const double w = kTwoPi / K;
  double acc = 0.0;
  for (int m = 0; m < K; ++m) {
    const double s = -M_PI + kTwoPi * m / K;
    std::complex<double> hat = 0.0;
    for (int j = 1; j <= n; ++j) {
      hat += u[j - 1] * std::exp(std::complex<double>(0.0, -s * j));
    }
    hat /= std::sqrt(kTwoPi);
    acc += std::pow(std::fabs(s), 2.0 * sigma) * std::norm(hat);
  }
  return std::sqrt(h * std::pow(h, -2.0 * sigma) * acc * w);
}

double parseval_residual(const Eigen::VectorXcd& u, double h) {
  const int n = static_cast<int>(u.size());
  if (n == 0) return 0.0;
  const int K = quad_points(n);
  const auto hat = hat_on_grid(u, K);
  double acc = 0.0;
  for (const auto& v : hat) acc += std::norm(v);
  const double quad = h * acc * (kTwoPi / K);
  const double direct = h * u.squaredNorm();
  return std::fabs(quad - direct) / direct;
}

std::pair<double, double> interpolation_probe(const Eigen::VectorXcd& u, double h,
                                              double sigma0, double sigma) {
  if (!(0.0 <= sigma0 && sigma0 <= sigma && sigma <= 1.0)) {
    throw std::domain_error("interpolation_probe: need 0 <= sigma0 <= sigma <= 1");
  }
  const double l2 = norm_l2h(u, h);
  const double s0 = frac_seminorm(u, h, sigma0);
  const double s1 = frac_seminorm(u, h, sigma);
  const double lhs = std::sqrt(l2 * l2 + s0 * s0);
  const double full = std::sqrt(l2 * l2 + s1 * s1);
  const double r = (sigma > 0.0) ? sigma0 / sigma : 1.0;
  const double rhs = std::pow(2.0, (sigma - sigma0) / (2.0 * sigma)) *
                     std::pow(full, r) * std::pow(l2, 1.0 - r);
  return {lhs, rhs};
}

std::pair<double, double> gn_probe(const Eigen::VectorXcd& u, double h,
                                   double sigma0, double sigma, double p) {
  if (!(p > 2.0)) throw std::domain_error("gn_probe: p must exceed 2");
  if (!((p - 2.0) / (2.0 * p) < sigma0 && sigma0 <= sigma && sigma <= 1.0)) {
    throw std::domain_error("gn_probe: need (p-2)/(2p) < sigma0 <= sigma <= 1");
  }
  const double lhs = norm_lph(u, h, p);
  const double l2 = norm_l2h(u, h);
  const double s1 = frac_seminorm(u, h, sigma);
  const double full = std::sqrt(l2 * l2 + s1 * s1);

  const auto log_beta = [](double x, double y) {
    return std::lgamma(x) + std::lgamma(y) - std::lgamma(x + y);
  };
  const double beta = std::exp(
      log_beta(1.0 / (2.0 * sigma0), p / (p - 2.0) - 1.0 / (2.0 * sigma0)));
  const double C = std::pow(2.0, (sigma - sigma0) / (2.0 * sigma)) *
                   std::pow(kTwoPi * sigma0, (2.0 - p) / (2.0 * p)) *
                   std::pow(beta, (p - 2.0) / (2.0 * p));
  const double r = sigma0 / sigma;
  const double rhs = C * std::pow(full, r) * std::pow(l2, 1.0 - r);
  return {lhs, rhs};
}

}  // namespace fgl
