#pragma once

#include <Eigen/Dense>
#include <utility>

namespace fgl {

// Discrete norms for grid functions on interior nodes with spacing h, viewed
// as finitely supported sequences on the infinite grid (zero outside).
//
// The fractional seminorm uses the semidiscrete Fourier transform
//   uhat(s) = (1/sqrt(2 pi)) sum_j u_j e^{-i j s},  s in [-pi, pi],
//   |u|^2_{H^sigma} = h Int h^{-2 sigma} |s|^{2 sigma} |uhat(s)|^2 ds,
// discretized by the periodic rectangle rule on K = 8 n points (exact for the
// trigonometric-polynomial part; refinement changes results < 1e-10).

double norm_l2h(const Eigen::VectorXcd& u, double h);

// (h sum |u_j|^p)^{1/p}; p = inf gives max_j |u_j|. Throws for p < 1.
double norm_lph(const Eigen::VectorXcd& u, double h, double p);
double norm_linfh(const Eigen::VectorXcd& u);

// FFT-based seminorm (default route).
double frac_seminorm(const Eigen::VectorXcd& u, double h, double sigma);
// Same quadrature evaluated by direct O(K n) summation (reference route).
double frac_seminorm_direct(const Eigen::VectorXcd& u, double h, double sigma);

// | h Int |uhat|^2 ds - h sum |u_j|^2 | / (h sum |u_j|^2): the quadrature's
// Parseval residual; ~1e-15 by construction.
double parseval_residual(const Eigen::VectorXcd& u, double h);

// Interpolation inequality probe:
//   lhs = ||u||_{H^{sigma0}},
//   rhs = 2^{(sigma-sigma0)/(2 sigma)} ||u||_{H^sigma}^{sigma0/sigma}
//         ||u||_h^{1-sigma0/sigma}.
// The inequality lhs <= rhs holds for 0 <= sigma0 <= sigma <= 1.
std::pair<double, double> interpolation_probe(const Eigen::VectorXcd& u, double h,
                                              double sigma0, double sigma);

// Sobolev-embedding probe for p > 2, (p-2)/(2p) < sigma0 <= sigma <= 1:
//   lhs = ||u||_{l_h^p},
//   rhs = C(p, sigma0, sigma) ||u||_{H^sigma}^{sigma0/sigma} ||u||_h^{1-sigma0/sigma},
//   C   = 2^{(sigma-sigma0)/(2 sigma)} (2 pi sigma0)^{(2-p)/(2p)}
//         Beta(1/(2 sigma0), p/(p-2) - 1/(2 sigma0))^{(p-2)/(2p)}.
// The constant follows from Hausdorff-Young (series convention with the
// 1/(2 pi) measure) plus Hoelder and the Beta integral; lhs <= rhs holds for
// every grid function.
std::pair<double, double> gn_probe(const Eigen::VectorXcd& u, double h,
                                   double sigma0, double sigma, double p);

}  // namespace fgl
