#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <utility>

#include "convexnn/common.hpp"

namespace convexnn {

// Minkowski sum of segments [0, t_i]; rows of `generators` are the t_i.
struct Zonotope {
  Eigen::MatrixXd generators;  // r x d

  Eigen::Index dim() const { return generators.cols(); }
  Eigen::Index size() const { return generators.rows(); }
};

// h_Z(w) = sum_i max(0, t_i^T w)
double support(const Zonotope& Z, const Eigen::VectorXd& w);

// {x : (x - center)^T shape^{-1} (x - center) <= 1}, shape symmetric PD.
struct Ellipsoid {
  Eigen::VectorXd center;
  Eigen::MatrixXd shape;
};

// h_E(w) = center^T w + sqrt(w^T shape w)
double support(const Ellipsoid& E, const Eigen::VectorXd& w);

// min_{b in [0,1]^r} || G^T b - c ||_2 and the minimizer; accelerated
// projected gradient plus an active-set polish, accurate to ~1e-12.
std::pair<double, Eigen::VectorXd> box_least_squares(const Eigen::MatrixXd& G,
                                                     const Eigen::VectorXd& c,
                                                     double tol = 1e-12,
                                                     int max_iter = 20000);

// Hausdorff distance between two zonotopes. q = 2 runs the exact
// vertex-enumeration / convex-projection algorithm (outer max over hypercube
// vertices, budget-gated); q != 2 falls back to the directional-sampling
// oracle and requires dim <= 3.
double zonotope_hausdorff(const Zonotope& A, const Zonotope& B, double q = 2.0,
                          std::int64_t vertex_budget = (std::int64_t(1) << 22));

// Builds T+ from points with y_i >= 0 and T- from the rest (t_i = |y_i| z_i)
// and returns their Hausdorff distance; equals n * R * (exact alpha = 1
// oracle value) on the same instance.
double fw_step_as_hausdorff(const Eigen::MatrixXd& Z, const Eigen::VectorXd& y,
                            double q = 2.0);

// Directional-sampling evaluation of sup_w |h_A(w) - h_B(w)| over unit
// directions of the norm dual to lq; dense grid plus local refinement.
// Supports dim <= 3. Used as the independent geometric oracle in tests.
double hausdorff_by_sampling(const Zonotope& A, const Zonotope& B, double q = 2.0,
                             int grid = 200000);
double hausdorff_by_sampling(const Ellipsoid& A, const Ellipsoid& B,
                             int grid = 4000);

struct SaddleOptions {
  int outer_starts = 8;
  int outer_iters = 400;
  int inner_iters = 2000;
  std::uint64_t seed = 0;
};

struct SaddleResult {
  double value = 0.0;
  bool converged = true;
};

// Value of max_{b+ >= 0} min_{b- >= 0} ||T+^T b+ - T-^T b-||_q
// - (1/beta)||b+||_beta^beta + (1/beta)||b-||_beta^beta with
// t_i = |y_i|^{1/alpha} z_i and beta = alpha/(alpha-1); equals
// (n/alpha) R^alpha times the one-sided alpha-homogeneous step value.
SaddleResult alpha2_saddle(const Eigen::MatrixXd& Z, const Eigen::VectorXd& y,
                           int alpha, double q = 2.0,
                           const SaddleOptions& opts = {});

// Khachiyan minimum-volume enclosing ellipsoid with (1+tol) optimality;
// throws std::invalid_argument when the points do not affinely span.
Ellipsoid mvee(const Eigen::MatrixXd& points, double tol = 1e-7,
               int max_iter = 200000);

// l2 Hausdorff distance between ellipsoids: outer log-grid over the
// projection multiplier with local refinement, inner trust-region step per
// grid point (one eigendecomposition of each shape up front).
double ellipsoid_hausdorff(const Ellipsoid& A, const Ellipsoid& B,
                           int lambda_grid = 10000);

// All 2^r zonotope vertices (small r only; used by tests and MVEE feeds).
Eigen::MatrixXd zonotope_vertices(const Zonotope& Z);

// Euclidean distance from x to conv(rows of P) via simplex-projected FISTA.
double distance_to_hull(const Eigen::MatrixXd& P, const Eigen::VectorXd& x,
                        int max_iter = 20000);

}  // namespace convexnn
