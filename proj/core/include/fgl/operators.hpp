#pragma once

#include <Eigen/Dense>
#include <complex>
#include <memory>
#include <vector>

namespace fgl {

// Uniform grid on [a, b] with nx intervals. Fields live on the nx-1 interior
// nodes x_j = a + j h, j = 1..nx-1; values at j = 0 and j = nx are identically
// zero (homogeneous condition of the zero-extended problem).
struct Grid1D {
  double a = 0.0;
  double b = 1.0;
  int nx = 0;
  double h = 0.0;

  static Grid1D make(double a, double b, int nx);
  int interior() const { return nx - 1; }
};

using VecC = Eigen::VectorXcd;
using VecR = Eigen::VectorXd;

// Discrete pair (A, B) of the fourth-order compact discretization:
//   A = tridiag(varrho2, 1 - 2 varrho2, varrho2)          (averaging operator)
//   B = symmetric Toeplitz from the kappa_4 table,
//       first column -(2 k1, k0 + k2, k3, ..., k_{nx-1}) / (2 h^alpha cos(pi alpha/2)).
// The compact fractional-Laplacian value y solves A y = -B u.
class DiscreteOperator {
 public:
  static DiscreteOperator assemble(double alpha, const Grid1D& grid);
  ~DiscreteOperator();
  DiscreteOperator(DiscreteOperator&&) noexcept;
  DiscreteOperator& operator=(DiscreteOperator&&) noexcept;
  DiscreteOperator(const DiscreteOperator&) = delete;
  DiscreteOperator& operator=(const DiscreteOperator&) = delete;

  double alpha() const { return alpha_; }
  const Grid1D& grid() const { return grid_; }
  double varrho2() const { return varrho2_; }

  // First column of B (length nx-1).
  const VecR& b_first_column() const { return bcol_; }

  // B u via circulant-embedded fast transform (default route).
  VecC apply_B(const VecC& u) const;
  // B u via direct O(n^2) summation (reference route; must agree to 1e-12).
  VecC apply_B_direct(const VecC& u) const;

  // Tridiagonal weight-matrix product A u.
  VecC apply_A(const VecC& u) const;

  // Solve A y = rhs with the precomputed tridiagonal factorization.
  VecC solve_A(const VecC& rhs) const;
  VecR solve_A(const VecR& rhs) const;

  // Compact approximation of the fractional Laplacian: solve A y = -B u.
  VecC frac_laplacian(const VecC& u) const;

 private:
  DiscreteOperator();

  double alpha_ = 0.0;
  Grid1D grid_;
  double varrho2_ = 0.0;
  VecR bcol_;
  // Tridiagonal factorization of A (forward-elimination multipliers and pivots).
  VecR tri_w_, tri_d_;
  struct Fft;
  std::unique_ptr<Fft> fft_;
};

// Polynomial with >= 4th-order zeros at both endpoints, represented twice:
// by coefficients c_p of (x-a)^p and by coefficients of (b-x)^p. The two
// expansions must describe the same polynomial; this enables the exact
// closed-form fractional Laplacian of the zero-extended function.
struct PolyOracle {
  double a = 0.0;
  double b = 1.0;
  double alpha = 1.5;
  std::vector<double> left_coeffs;   // index p: coefficient of (x-a)^p
  std::vector<double> right_coeffs;  // index p: coefficient of (b-x)^p
};

// The accuracy test function u = x^4 (1-x)^4 on [0, 1].
PolyOracle example1_poly(double alpha);

// Evaluate the polynomial at x (left expansion).
double poly_value(const PolyOracle& o, double x);

// Exact fractional Laplacian of the zero-extended polynomial at x in (a, b):
//   (1 / (2 cos(pi alpha/2))) * (D_L + D_R),
//   D_L = sum_p c_p^(a) Gamma(p+1)/Gamma(p+1-alpha) (x-a)^{p-alpha},
//   D_R mirrored with (b-x). Throws if the endpoint-regularity contract
// (zero coefficients below p = 4) is violated.
double poly_exact_frac_laplacian(const PolyOracle& o, double x);

}  // namespace fgl
