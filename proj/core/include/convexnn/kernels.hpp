#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <utility>

#include "convexnn/common.hpp"
#include "convexnn/model.hpp"

namespace convexnn {

// Closed-form kernels exist for alpha in {0, 1, 2}.
struct KernelSpec {
  int alpha = 1;
  int d = 1;
  double R = 1.0;
};

// Angle phi in [0, pi] from x^T x'/R^2 + 1 = cos(phi) rho(x) rho(x') with
// rho = sqrt(||x||^2/R^2 + 1); cos(phi) clamped into [-1, 1].
double kernel_angle(const KernelSpec& spec, const Eigen::VectorXd& x,
                    const Eigen::VectorXd& y);

// E[(v^T z / R)_+^alpha (v^T z' / R)_+^alpha] over v uniform on the unit
// sphere of R^{d+1}, in closed form.
double kernel(const KernelSpec& spec, const Eigen::VectorXd& x,
              const Eigen::VectorXd& y);

// Same quantity through the degree-wise series sum N(d,k) lambda_k^2 P_k
// (truncated at K), mapped to the off-sphere points by homogeneity.
double kernel_series_points(const KernelSpec& spec, const Eigen::VectorXd& x,
                            const Eigen::VectorXd& y, int K);

// Monte-Carlo estimate with standard error; deterministic per seed and
// independent of worker count (fixed chunking).
std::pair<double, double> kernel_mc(const KernelSpec& spec, const Eigen::VectorXd& x,
                                    const Eigen::VectorXd& y, std::int64_t m,
                                    std::uint64_t seed);

Eigen::MatrixXd gram(const KernelSpec& spec, const Eigen::MatrixXd& xs);

// m i.i.d. unit directions of R^{d+1}; feature map psi_j(x) =
// (v_j^T z / R)_+^alpha / sqrt(m), so psi(x).psi(y) estimates the kernel.
struct RandomFeatureMap {
  int alpha = 1;
  double R = 1.0;
  Eigen::MatrixXd V;  // m x (d+1), unit rows

  Eigen::Index m() const { return V.rows(); }
};

RandomFeatureMap random_features(const KernelSpec& spec, int m, std::uint64_t seed);

Eigen::VectorXd featurize(const RandomFeatureMap& map, const Eigen::VectorXd& x);

struct F2Options {
  enum class Method { Kernel, RandomFeatures };
  Method method = Method::Kernel;
  int alpha = 1;
  int m = 100;                           // random-features count
  double lambda = 1e-6;                  // ridge penalty
  std::optional<double> norm_budget;     // constraint form: ||f||_H <= budget
  std::uint64_t seed = 0;
};

// Squared-loss F2 estimator: n x n regularized kernel solve, or ridge in the
// m-dimensional random-feature space.
class F2Predictor {
 public:
  double operator()(const Eigen::VectorXd& x) const;
  Eigen::VectorXd predict_all(const Eigen::MatrixXd& xs) const;
  double rkhs_norm() const { return rkhs_norm_; }
  double lambda_used() const { return lambda_; }

  // Random-features predictors are finite unit expansions; expose them as a
  // signed-measure model.
  bool is_random_features() const { return method_ == F2Options::Method::RandomFeatures; }
  SignedMeasureModel as_model() const;

 private:
  friend F2Predictor f2_estimate(const Dataset&, const F2Options&);
  F2Options::Method method_ = F2Options::Method::Kernel;
  KernelSpec spec_;
  Eigen::MatrixXd train_xs_;
  Eigen::VectorXd coef_;
  RandomFeatureMap map_;
  Eigen::VectorXd weights_;
  double rkhs_norm_ = 0.0;
  double lambda_ = 0.0;
};

F2Predictor f2_estimate(const Dataset& data, const F2Options& options);

}  // namespace convexnn
