#include "convexnn/model.hpp"

#include <cmath>
#include <limits>

namespace convexnn {

double lq_norm(const Eigen::VectorXd& x, double q) {
  require(q >= 1.0, "lq_norm: q must be >= 1");
  if (std::isinf(q)) return x.lpNorm<Eigen::Infinity>();
  if (q == 2.0) return x.norm();
  if (q == 1.0) return x.lpNorm<1>();
  double s = 0;
  for (Eigen::Index i = 0; i < x.size(); ++i) s += std::pow(std::abs(x[i]), q);
  return std::pow(s, 1.0 / q);
}

Dataset::Dataset(Eigen::MatrixXd xs_, Eigen::VectorXd ys_, double R_, double q_)
    : xs(std::move(xs_)), ys(std::move(ys_)), R(R_), q(q_) {
  require(R > 0, "Dataset: R must be positive");
  require(q >= 2.0, "Dataset: q must be in [2, inf]");
  require(xs.rows() == ys.size(), "Dataset: |xs| != |ys|");
  for (Eigen::Index i = 0; i < xs.rows(); ++i) {
    require(lq_norm(xs.row(i), q) <= R * (1.0 + 1e-9),
            "Dataset: point outside the lq ball of radius R");
  }
}

Eigen::MatrixXd Dataset::augmented() const {
  Eigen::MatrixXd Z(xs.rows(), xs.cols() + 1);
  Z.leftCols(xs.cols()) = xs;
  Z.col(xs.cols()).setConstant(R);
  return Z;
}

Eigen::VectorXd augment(const Eigen::VectorXd& x, double R) {
  require(R > 0, "augment: R must be positive");
  Eigen::VectorXd z(x.size() + 1);
  z.head(x.size()) = x;
  z[x.size()] = R;
  return z;
}

Unit::Unit(Eigen::VectorXd v_, double p_) : v(std::move(v_)), p(p_) {
  require(p >= 1.0 && p <= 2.0, "Unit: p must be in [1, 2]");
  double nrm = lq_norm(v, p);
  require(std::abs(nrm - 1.0) <= 1e-12, "Unit: v must have unit lp norm");
}

double Unit::activation(const Eigen::VectorXd& z, double R, int alpha) const {
  require(z.size() == v.size(), "Unit: dimension mismatch");
  double u = v.dot(z) / R;
  if (alpha == 0) return u > 0.0 ? 1.0 : 0.0;
  if (u <= 0.0) return 0.0;
  if (alpha == 1) return u;
  return std::pow(u, alpha);
}

Eigen::Index SignedMeasureModel::dim() const {
  if (units.empty()) return -1;
  return units.front().unit.v.size() - 1;
}

double SignedMeasureModel::predict(const Eigen::VectorXd& x) const {
  if (units.empty()) return 0.0;
  require(x.size() + 1 == units.front().unit.v.size(),
          "predict: dimension mismatch");
  Eigen::VectorXd z = augment(x, R);
  double s = 0;
  for (const auto& wu : units) s += wu.eta * wu.unit.activation(z, R, alpha);
  return s;
}

Eigen::VectorXd SignedMeasureModel::predict_all(const Eigen::MatrixXd& xs) const {
  Eigen::VectorXd out(xs.rows());
  for (Eigen::Index i = 0; i < xs.rows(); ++i) out[i] = predict(xs.row(i));
  return out;
}

double SignedMeasureModel::variation_norm() const {
  double s = 0;
  for (const auto& wu : units) s += std::abs(wu.eta);
  return s;
}

void SignedMeasureModel::drop_zero_units(double tol) {
  std::erase_if(units, [tol](const WeightedUnit& wu) { return std::abs(wu.eta) <= tol; });
}

Eigen::MatrixXd unit_responses(const SignedMeasureModel& model, const Eigen::MatrixXd& xs) {
  Eigen::MatrixXd Phi(xs.rows(), Eigen::Index(model.units.size()));
  for (Eigen::Index i = 0; i < xs.rows(); ++i) {
    Eigen::VectorXd z = augment(xs.row(i), model.R);
    for (size_t j = 0; j < model.units.size(); ++j)
      Phi(i, Eigen::Index(j)) = model.units[j].unit.activation(z, model.R, model.alpha);
  }
  return Phi;
}

Loss Loss::smoothed_hinge(double eps) {
  require(eps > 0, "smoothed_hinge: eps must be positive");
  return {LossKind::SmoothedHinge, eps};
}

double Loss::value(double y, double u) const {
  switch (kind) {
    case LossKind::Squared: {
      double r = u - y;
      return 0.5 * r * r;
    }
    case LossKind::Logistic: {
      double m = -y * u;
      // log(1 + e^m) without overflow
      return m > 0 ? m + std::log1p(std::exp(-m)) : std::log1p(std::exp(m));
    }
    case LossKind::SmoothedHinge: {
      double m = y * u;
      if (m >= 1.0) return 0.0;
      if (m <= 1.0 - eps) return 1.0 - m - 0.5 * eps;
      double t = 1.0 - m;
      return 0.5 * t * t / eps;
    }
  }
  throw std::invalid_argument("Loss: unknown kind");
}

double Loss::grad(double y, double u) const {
  switch (kind) {
    case LossKind::Squared:
      return u - y;
    case LossKind::Logistic:
      return -y / (1.0 + std::exp(y * u));
    case LossKind::SmoothedHinge: {
      double m = y * u;
      if (m >= 1.0) return 0.0;
      if (m <= 1.0 - eps) return -y;
      return -y * (1.0 - m) / eps;
    }
  }
  throw std::invalid_argument("Loss: unknown kind");
}

double Loss::lipschitz(double u_bound, double y_bound) const {
  switch (kind) {
    case LossKind::Squared:
      return u_bound + y_bound;
    case LossKind::Logistic:
    case LossKind::SmoothedHinge:
      return 1.0;
  }
  throw std::invalid_argument("Loss: unknown kind");
}

double Loss::smoothness() const {
  switch (kind) {
    case LossKind::Squared:
      return 1.0;
    case LossKind::Logistic:
      return 0.25;
    case LossKind::SmoothedHinge:
      return 1.0 / eps;
  }
  throw std::invalid_argument("Loss: unknown kind");
}

Loss parse_loss(const std::string& name, double eps) {
  if (name == "sq" || name == "squared") return Loss::squared();
  if (name == "logistic") return Loss::logistic();
  if (name == "hinge" || name == "smoothed-hinge") return Loss::smoothed_hinge(eps);
  throw std::invalid_argument("parse_loss: unknown loss '" + name + "'");
}

}  // namespace convexnn
