#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "convexnn/common.hpp"

namespace convexnn {

// Inputs bounded by R in lq-norm, q in [2, inf]. Pass q = infinity for the
// sup-norm ball.
struct Dataset {
  Eigen::MatrixXd xs;  // n x d
  Eigen::VectorXd ys;  // n
  double R = 1.0;
  double q = 2.0;

  Dataset() = default;
  Dataset(Eigen::MatrixXd xs_, Eigen::VectorXd ys_, double R_, double q_);

  Eigen::Index n() const { return xs.rows(); }
  Eigen::Index d() const { return xs.cols(); }

  // Rows z_i = (x_i, R).
  Eigen::MatrixXd augmented() const;
};

double lq_norm(const Eigen::VectorXd& x, double q);

// z = (x, R); the lift that folds the bias into a homogeneous unit.
Eigen::VectorXd augment(const Eigen::VectorXd& x, double R);

// Direction on the unit lp-sphere, p in [1, 2]. The 1/R scaling lives in
// evaluation, not in the stored vector.
struct Unit {
  Eigen::VectorXd v;
  double p = 2.0;

  Unit() = default;
  Unit(Eigen::VectorXd v_, double p_);

  // (v^T z / R)_+^alpha, with (0)_+^0 = 0 (strict sign for alpha = 0).
  double activation(const Eigen::VectorXd& z, double R, int alpha) const;
};

struct WeightedUnit {
  double eta = 0.0;
  Unit unit;
};

// Finite-support signed measure over unit directions; the predictor
// x -> sum_j eta_j (v_j^T z / R)_+^alpha.
struct SignedMeasureModel {
  int alpha = 1;
  double p = 2.0;
  double R = 1.0;
  std::vector<WeightedUnit> units;

  Eigen::Index dim() const;  // d (input dimension), -1 when empty

  double predict(const Eigen::VectorXd& x) const;
  Eigen::VectorXd predict_all(const Eigen::MatrixXd& xs) const;

  // gamma_1 of this representation: sum |eta_j|.
  double variation_norm() const;

  void drop_zero_units(double tol = 0.0);
};

// Unit responses phi_j(x_i) without weights, n x k.
Eigen::MatrixXd unit_responses(const SignedMeasureModel& model, const Eigen::MatrixXd& xs);

enum class LossKind { Squared, Logistic, SmoothedHinge };

// Pointwise loss l(y, u) with derivative in u. Squared is (u - y)^2 / 2;
// logistic expects labels in {-1, +1}; smoothed hinge is the Huber-smoothed
// hinge with parameter eps (smoothness constant 1/eps).
struct Loss {
  LossKind kind = LossKind::Squared;
  double eps = 1.0;  // smoothed hinge only

  static Loss squared() { return {LossKind::Squared, 0.0}; }
  static Loss logistic() { return {LossKind::Logistic, 0.0}; }
  static Loss smoothed_hinge(double eps);

  double value(double y, double u) const;
  double grad(double y, double u) const;

  // Lipschitz constant of u -> l(y, u) on |u| <= u_bound, |y| <= y_bound.
  double lipschitz(double u_bound, double y_bound) const;
  // Smoothness constant of u -> l(y, u).
  double smoothness() const;
};

Loss parse_loss(const std::string& name, double eps = 1.0);

}  // namespace convexnn
