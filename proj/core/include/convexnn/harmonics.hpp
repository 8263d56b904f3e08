#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "convexnn/common.hpp"

namespace convexnn {

// Legendre/Gegenbauer polynomial of degree k for the sphere S^d (dimension
// d+1), normalized so P_k(1) = 1. Three-term recurrence; d = 1 gives the
// Chebyshev polynomials.
double legendre_P(int k, int d, double t);

// N(d,k): dimension of the degree-k spherical-harmonic space on S^d.
std::int64_t harmonic_dim(int d, int k);

// omega_{d-1} / omega_d = Gamma((d+1)/2) / (sqrt(pi) Gamma(d/2)).
double omega_ratio(int d);

// Funk-Hecke coefficient of sigma(t) = (t)_+^alpha at degree k:
//   lambda_k = (omega_{d-1}/omega_d) int_{-1}^{1} sigma(t) P_k(t)
//              (1-t^2)^{(d-2)/2} dt,
// by adaptive quadrature on the theta substitution (reference-grade).
double lambda_quadrature(int d, int alpha, int k, double tol = 1e-12);

// d = 1 Fourier coefficients (1/2pi) int_0^{2pi} (cos)_+^alpha cos(k.) —
// closed forms for alpha <= 2, numeric otherwise.
double lambda_fourier(int alpha, int k);

struct ClosedLambda {
  double value = 0.0;           // the printed closed-form expression
  bool zero_by_parity = false;  // k > alpha with k = alpha (mod 2)
  double quadrature = 0.0;
  bool agrees_with_quadrature = false;
};

// Closed-form lambda_k as printed, with its (d-1)/(2pi) prefactor, evaluated
// verbatim and flagged against the quadrature value (the quadrature is
// authoritative; see the spectrum CLI output). Requires k >= alpha + 1.
ClosedLambda lambda_closed(int d, int alpha, int k);

// lambda_k for all k <= kmax in one pass (shared quadrature grid); matches
// lambda_quadrature to ~1e-12 and is the workhorse for series code.
std::vector<double> lambda_table(int d, int alpha, int kmax);

// Profile of a ridge function g(x) = phi(w^T x). Either a callable on
// [-1, 1] (with known kink locations for the quadrature) or an explicit
// Funk-Hecke coefficient table c_k, in which case
// phi(t) = sum_k c_k N(d,k) P_k(t).
struct RidgeProfile {
  std::function<double(double)> phi;
  std::vector<double> breakpoints;
  std::vector<double> coeffs;  // when non-empty, authoritative
  int parity = 0;              // +1 even, -1 odd, 0 unknown/mixed

  static RidgeProfile linear();
  static RidgeProfile absolute();
  static RidgeProfile relu_pow(int alpha);
  static RidgeProfile legendre(int j, int d);
  static RidgeProfile from_coeffs(std::vector<double> c, int parity = 0);
};

// c_k = (omega_{d-1}/omega_d) int phi(t) P_k(t) (1-t^2)^{(d-2)/2} dt for all
// k <= kmax on one shared panel grid.
std::vector<double> ridge_coeffs(const RidgeProfile& profile, int d, int kmax);

enum class Gamma2Verdict { Converged, Diverging, ParityViolation };

struct Gamma2Result {
  Gamma2Verdict verdict = Gamma2Verdict::Converged;
  double value = 0.0;  // sqrt(S_K); meaningful for Converged
  std::vector<std::pair<int, double>> partial_sums;  // (k, S_k) checkpoints
};

// gamma_2 of the ridge function with the given profile:
//   S_K = sum_{k <= K, lambda_k != 0} ||g_k||^2 / lambda_k^2,
//   ||g_k||^2 = c_k^2 N(d,k).
// Profiles with mass on a zero-lambda degree are not representable; tails
// that keep growing get the Diverging verdict (ratio test).
Gamma2Result gamma2_ridge(const RidgeProfile& profile, int d, int alpha, int K);

struct PoissonResult {
  RidgeProfile damped;      // coefficient-backed, c_k r^k
  double gamma2 = 0.0;      // gamma_2 of the damped ridge function
  double sup_error = 0.0;   // max_t |phi_hat - phi_sym| on a dense grid
  double r = 0.0;
};

// Poisson-kernel damping g_hat_k = r^k g_k of the (parity-corrected)
// profile; finite gamma_2 for every r < 1.
PoissonResult poisson_approximant(const RidgeProfile& profile, int d, int alpha,
                                  double r, int kmax = 2000, int grid = 10000);

// sum_{k <= K} N(d,k) lambda_k^2 P_k(u): the spherical dot-product kernel of
// the activation, built degree by degree.
double kernel_series(int d, int alpha, int K, double u);

}  // namespace convexnn
