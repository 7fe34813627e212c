#include "fgl/operators.hpp"

#include <cmath>
#include <stdexcept>

#include "fgl/coeffs.hpp"
#include "fft_util.hpp"

namespace fgl {

Grid1D Grid1D::make(double a, double b, int nx) {
  if (!(b > a)) throw std::domain_error("Grid1D: b must exceed a");
  if (nx < 3) throw std::domain_error("Grid1D: nx must be >= 3");
  Grid1D g;
  g.a = a;
  g.b = b;
  g.nx = nx;
  g.h = (b - a) / nx;
  return g;
}

struct DiscreteOperator::Fft {
  int m;                                   // circulant size (power of two)
  std::vector<std::complex<double>> chat;  // FFT of the embedded first column
  detail::FftPlan fwd;
  detail::FftPlan bwd;

  Fft(const VecR& col, int n)
      : m(detail::next_pow2(2 * n)), fwd(m, FFTW_FORWARD), bwd(m, FFTW_BACKWARD) {
    std::vector<std::complex<double>> c(static_cast<size_t>(m), 0.0);
    for (int j = 0; j < n; ++j) c[static_cast<size_t>(j)] = col[j];
    for (int j = 1; j < n; ++j) c[static_cast<size_t>(m - j)] = col[j];
    fwd.execute(c.data());
    chat = std::move(c);
  }
};

DiscreteOperator::DiscreteOperator() = default;
DiscreteOperator::~DiscreteOperator() = default;
DiscreteOperator::DiscreteOperator(DiscreteOperator&&) noexcept = default;
DiscreteOperator& DiscreteOperator::operator=(DiscreteOperator&&) noexcept = default;

DiscreteOperator DiscreteOperator::assemble(double alpha, const Grid1D& grid) {
  if (!(alpha > 1.0 && alpha <= 2.0)) {
    throw std::domain_error("DiscreteOperator: alpha must be in (1, 2]");
  }
  DiscreteOperator op;
  op.alpha_ = alpha;
  op.grid_ = grid;
  op.varrho2_ = expansion_coeffs(alpha).varrho2;

  const int n = grid.interior();
  const std::vector<double>& k4 = g4_coeffs(alpha, static_cast<std::size_t>(grid.nx)).values;
  const double scale = -1.0 / (2.0 * std::pow(grid.h, alpha) * std::cos(M_PI * alpha / 2.0));
  op.bcol_.resize(n);
  op.bcol_[0] = scale * 2.0 * k4[1];
  if (n > 1) op.bcol_[1] = scale * (k4[0] + k4[2]);
  for (int d = 2; d < n; ++d) op.bcol_[d] = scale * k4[static_cast<std::size_t>(d) + 1];

  // Tridiagonal factorization of A = tridiag(r2, 1-2r2, r2): forward
  // elimination multipliers w and pivots d. A is strictly diagonally dominant
  // on (1, 2] (r2 < 1/4), so no pivoting is needed.
  const double r2 = op.varrho2_;
  const double diag = 1.0 - 2.0 * r2;
  op.tri_w_.resize(n);
  op.tri_d_.resize(n);
  op.tri_w_[0] = 0.0;
  op.tri_d_[0] = diag;
  for (int i = 1; i < n; ++i) {
    op.tri_w_[i] = r2 / op.tri_d_[i - 1];
    op.tri_d_[i] = diag - op.tri_w_[i] * r2;
  }

  op.fft_ = std::make_unique<Fft>(op.bcol_, n);
  return op;
}

VecC DiscreteOperator::apply_B(const VecC& u) const {
  const int n = grid_.interior();
  if (u.size() != n) throw std::invalid_argument("apply_B: length mismatch");
  const int m = fft_->m;
  std::vector<std::complex<double>> buf(static_cast<size_t>(m), 0.0);
  for (int j = 0; j < n; ++j) buf[static_cast<size_t>(j)] = u[j];
  fft_->fwd.execute(buf.data());
  for (int j = 0; j < m; ++j) buf[static_cast<size_t>(j)] *= fft_->chat[static_cast<size_t>(j)];
  fft_->bwd.execute(buf.data());
  VecC out(n);
  const double inv_m = 1.0 / static_cast<double>(m);
  for (int j = 0; j < n; ++j) out[j] = buf[static_cast<size_t>(j)] * inv_m;
  return out;
}

VecC DiscreteOperator::apply_B_direct(const VecC& u) const {
  const int n = grid_.interior();
  if (u.size() != n) throw std::invalid_argument("apply_B_direct: length mismatch");
  VecC out(n);
  for (int i = 0; i < n; ++i) {
    std::complex<double> s = 0.0;
    for (int j = 0; j < n; ++j) s += bcol_[std::abs(i - j)] * u[j];
    out[i] = s;
  }
  return out;
}

VecC DiscreteOperator::apply_A(const VecC& u) const {
  const int n = grid_.interior();
  if (u.size() != n) throw std::invalid_argument("apply_A: length mismatch");
  const double w = varrho2_;
  const double diag = 1.0 - 2.0 * w;
  VecC out(n);
  for (int i = 0; i < n; ++i) {
    std::complex<double> s = diag * u[i];
    if (i > 0) s += w * u[i - 1];
    if (i + 1 < n) s += w * u[i + 1];
    out[i] = s;
  }
  return out;
}

namespace {
template <typename Vec>
Vec tri_solve(const VecR& w, const VecR& d, double r2, const Vec& rhs) {
  const int n = static_cast<int>(rhs.size());
  Vec y = rhs;
  for (int i = 1; i < n; ++i) y[i] -= w[i] * y[i - 1];
  Vec x(n);
  x[n - 1] = y[n - 1] / d[n - 1];
  for (int i = n - 2; i >= 0; --i) x[i] = (y[i] - r2 * x[i + 1]) / d[i];
  return x;
}
}  // namespace

VecC DiscreteOperator::solve_A(const VecC& rhs) const {
  if (rhs.size() != grid_.interior()) throw std::invalid_argument("solve_A: length mismatch");
  return tri_solve(tri_w_, tri_d_, varrho2_, rhs);
}

VecR DiscreteOperator::solve_A(const VecR& rhs) const {
  if (rhs.size() != grid_.interior()) throw std::invalid_argument("solve_A: length mismatch");
  return tri_solve(tri_w_, tri_d_, varrho2_, rhs);
}

VecC DiscreteOperator::frac_laplacian(const VecC& u) const {
  return solve_A(VecC(-apply_B(u)));
}

PolyOracle example1_poly(double alpha) {
  // x^4 (1-x)^4 = sum_k (-1)^k C(4,k) x^{4+k}; symmetric about 1/2, so the
  // (1-x)-expansion carries the same coefficients.
  PolyOracle o;
  o.a = 0.0;
  o.b = 1.0;
  o.alpha = alpha;
  o.left_coeffs.assign(9, 0.0);
  const double binom4[5] = {1.0, 4.0, 6.0, 4.0, 1.0};
  for (int k = 0; k <= 4; ++k) {
    o.left_coeffs[static_cast<std::size_t>(4 + k)] = ((k % 2 == 0) ? 1.0 : -1.0) * binom4[k];
  }
  o.right_coeffs = o.left_coeffs;
  return o;
}

double poly_value(const PolyOracle& o, double x) {
  double v = 0.0;
  const double t = x - o.a;
  double tp = 1.0;
  for (std::size_t p = 0; p < o.left_coeffs.size(); ++p) {
    v += o.left_coeffs[p] * tp;
    tp *= t;
  }
  return v;
}

double poly_exact_frac_laplacian(const PolyOracle& o, double x) {
  if (!(x > o.a && x < o.b)) {
    throw std::domain_error("poly_exact_frac_laplacian: x must be interior");
  }
  for (std::size_t p = 0; p < std::min<std::size_t>(4, o.left_coeffs.size()); ++p) {
    if (o.left_coeffs[p] != 0.0 || o.right_coeffs[p] != 0.0) {
      throw std::invalid_argument(
          "poly_exact_frac_laplacian: endpoint regularity requires zero "
          "coefficients below order 4");
    }
  }
  const double alpha = o.alpha;
  double dl = 0.0, dr = 0.0;
  for (std::size_t p = 4; p < o.left_coeffs.size(); ++p) {
    const double dp = static_cast<double>(p);
    const double t = std::tgamma(dp + 1.0) / std::tgamma(dp + 1.0 - alpha);
    if (o.left_coeffs[p] != 0.0) dl += o.left_coeffs[p] * t * std::pow(x - o.a, dp - alpha);
    if (o.right_coeffs[p] != 0.0) dr += o.right_coeffs[p] * t * std::pow(o.b - x, dp - alpha);
  }
  return (dl + dr) / (2.0 * std::cos(M_PI * alpha / 2.0));
}

}  // namespace fgl
