#include "convexnn/caratheodory.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace convexnn {

ReduceResult caratheodory_reduce(const SignedMeasureModel& model,
                                 const Eigen::MatrixXd& xs, double null_tol) {
  const Eigen::Index n = xs.rows();
  SignedMeasureModel out = model;
  out.drop_zero_units();
  if (Eigen::Index(out.units.size()) <= n + 1) return {out, true, ""};

  // Column j: (sign_j * phi_j(x_1..n); 1), nonnegative weight a_j = |eta_j|.
  Eigen::MatrixXd Phi = unit_responses(out, xs);
  const double scale = std::max(1.0, Phi.cwiseAbs().maxCoeff());

  std::vector<double> a(out.units.size());
  std::vector<double> sgn(out.units.size());
  for (size_t j = 0; j < out.units.size(); ++j) {
    a[j] = std::abs(out.units[j].eta);
    sgn[j] = out.units[j].eta >= 0 ? 1.0 : -1.0;
  }
  std::vector<int> alive(out.units.size());
  for (size_t j = 0; j < alive.size(); ++j) alive[j] = int(j);

  while (Eigen::Index(alive.size()) > n + 1) {
    const Eigen::Index k = Eigen::Index(alive.size());
    Eigen::MatrixXd M(n + 1, k);
    for (Eigen::Index c = 0; c < k; ++c) {
      int j = alive[size_t(c)];
      M.block(0, c, n, 1) = sgn[j] * Phi.col(j);
      M(n, c) = 1.0;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV);  // need the null space
    Eigen::VectorXd c = svd.matrixV().col(k - 1);
    double resid = (M * c).norm();
    if (resid > null_tol * scale) {
      return {out, false,
              "caratheodory_reduce: null-space residual " + std::to_string(resid) +
                  " above tolerance"};
    }
    // Slide a <- a - t c until the first coordinate hits zero.
    double t = std::numeric_limits<double>::infinity();
    Eigen::Index hit = -1;
    for (Eigen::Index i = 0; i < k; ++i) {
      if (c[i] > 1e-14) {
        double ti = a[size_t(alive[size_t(i)])] / c[i];
        if (ti < t) {
          t = ti;
          hit = i;
        }
      }
    }
    if (hit < 0) {
      // Null vector one-signed within tolerance: use its negation.
      c = -c;
      for (Eigen::Index i = 0; i < k; ++i) {
        if (c[i] > 1e-14) {
          double ti = a[size_t(alive[size_t(i)])] / c[i];
          if (ti < t) {
            t = ti;
            hit = i;
          }
        }
      }
    }
    if (hit < 0) {
      return {out, false, "caratheodory_reduce: degenerate null vector"};
    }
    for (Eigen::Index i = 0; i < k; ++i) {
      int j = alive[size_t(i)];
      a[size_t(j)] = std::max(0.0, a[size_t(j)] - t * c[i]);
    }
    a[size_t(alive[size_t(hit)])] = 0.0;
    alive.erase(alive.begin() + hit);
  }

  SignedMeasureModel reduced;
  reduced.alpha = out.alpha;
  reduced.p = out.p;
  reduced.R = out.R;
  for (int j : alive)
    reduced.units.push_back({sgn[size_t(j)] * a[size_t(j)], out.units[size_t(j)].unit});
  reduced.drop_zero_units();
  return {reduced, true, ""};
}

}  // namespace convexnn
