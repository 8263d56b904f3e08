#include "convexnn/fw.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "convexnn/common.hpp"

namespace convexnn {

StepRule parse_step_rule(const std::string& name) {
  if (name == "harmonic") return StepRule::Harmonic;
  if (name == "linesearch") return StepRule::LineSearch;
  if (name == "fc" || name == "fully-corrective") return StepRule::FullyCorrective;
  throw std::invalid_argument("unknown step rule '" + name + "'");
}

double empirical_risk(const Loss& loss, const Eigen::VectorXd& ys,
                      const Eigen::VectorXd& preds) {
  double s = 0;
  for (Eigen::Index i = 0; i < ys.size(); ++i) s += loss.value(ys[i], preds[i]);
  return s / double(ys.size());
}

Eigen::VectorXd project_l1_ball(Eigen::VectorXd w, double delta) {
  require(delta >= 0, "project_l1_ball: delta must be >= 0");
  double nrm = w.lpNorm<1>();
  if (nrm <= delta) return w;
  // Duchi et al. soft-threshold level via the sorted cumulative sums.
  std::vector<double> a(static_cast<size_t>(w.size()));
  for (Eigen::Index i = 0; i < w.size(); ++i) a[size_t(i)] = std::abs(w[i]);
  std::sort(a.begin(), a.end(), std::greater<double>());
  double cum = 0, theta = 0;
  for (size_t k = 0; k < a.size(); ++k) {
    cum += a[k];
    double cand = (cum - delta) / double(k + 1);
    if (cand >= (k + 1 < a.size() ? a[k + 1] : 0.0)) {
      theta = cand;
      break;
    }
  }
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    double m = std::abs(w[i]) - theta;
    w[i] = m > 0 ? (w[i] > 0 ? m : -m) : 0.0;
  }
  return w;
}

Loss smoothing_schedule(double c, int t) {
  require(c > 0, "smoothing_schedule: c must be positive");
  require(t >= 0, "smoothing_schedule: t must be >= 0");
  return Loss::smoothed_hinge(c / std::sqrt(double(t + 1)));
}

namespace {

// Exact 1-D line search on rho in [0,1]: the derivative of the convex
// restriction is nondecreasing, so bisect it.
double line_search(const Loss& loss, const Eigen::VectorXd& ys,
                   const Eigen::VectorXd& u, const Eigen::VectorXd& e) {
  auto dphi = [&](double rho) {
    double s = 0;
    for (Eigen::Index i = 0; i < ys.size(); ++i) {
      double ui = (1 - rho) * u[i] + rho * e[i];
      s += loss.grad(ys[i], ui) * (e[i] - u[i]);
    }
    return s / double(ys.size());
  };
  if (dphi(0.0) >= 0) return 0.0;
  if (dphi(1.0) <= 0) return 1.0;
  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-12) {
    double mid = 0.5 * (lo + hi);
    (dphi(mid) <= 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

Eigen::VectorXd responses_of_unit(const Unit& unit, const Eigen::MatrixXd& Z, double R,
                                  int alpha) {
  Eigen::VectorXd e(Z.rows());
  for (Eigen::Index i = 0; i < Z.rows(); ++i)
    e[i] = unit.activation(Z.row(i), R, alpha);
  return e;
}

std::pair<SignedMeasureModel, TrainTrace> train_loop(const Dataset& data, const Loss& loss,
                                                     const FWConfig& config,
                                                     const UnitOracle& oracle) {
  require(config.delta > 0, "fw_train: delta must be positive");
  require(config.steps >= 1, "fw_train: steps must be >= 1");
  const Eigen::Index n = data.n();
  const Eigen::MatrixXd Z = data.augmented();

  std::vector<Unit> units;
  Eigen::VectorXd eta(0);
  Eigen::MatrixXd Phi(n, 0);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(n);

  TrainTrace trace;
  Loss loss_t = loss;

  for (int t = 0; t < config.steps; ++t) {
    if (config.smoothing_c) loss_t = smoothing_schedule(*config.smoothing_c, t);

    double risk = empirical_risk(loss_t, data.ys, u);
    Eigen::VectorXd g(n);
    for (Eigen::Index i = 0; i < n; ++i) g[i] = -loss_t.grad(data.ys[i], u[i]);

    OracleResult step;
    try {
      step = oracle(g);
    } catch (const std::exception& ex) {
      trace.aborted = true;
      trace.abort_reason = ex.what();
      break;
    }
    double gap = config.delta * step.value - g.dot(u) / double(n);

    TraceRow row;
    row.t = t;
    row.risk = risk;
    row.gap = gap;
    row.sign = step.sign;
    row.v = step.unit.v;

    if (gap <= config.gap_tol) {
      row.rho = 0.0;
      row.weight = 0.0;
      trace.rows.push_back(std::move(row));
      break;
    }

    Eigen::VectorXd phi_new = responses_of_unit(step.unit, Z, data.R, config.alpha);
    Eigen::VectorXd e = config.delta * double(step.sign) * phi_new;

    units.push_back(step.unit);
    Phi.conservativeResize(n, Phi.cols() + 1);
    Phi.col(Phi.cols() - 1) = phi_new;

    if (config.rule == StepRule::FullyCorrective) {
      Eigen::VectorXd warm(units.size());
      warm.head(eta.size()) = eta;
      warm[warm.size() - 1] = 0.0;
      eta = fully_corrective(units, data, loss_t, config.delta, config.alpha, warm);
      u = Phi * eta;
      row.rho = 1.0;
      row.weight = eta[eta.size() - 1];
    } else {
      double rho;
      if (config.rule == StepRule::Harmonic) {
        // rho_t = 2/(t+2); the 1-based form of the harmonic rule, which keeps
        // every iterate a convex combination.
        rho = 2.0 / double(t + 2);
      } else {
        rho = line_search(loss_t, data.ys, u, e);
      }
      eta.conservativeResize(eta.size() + 1);
      eta.head(eta.size() - 1) *= (1 - rho);
      eta[eta.size() - 1] = rho * config.delta * double(step.sign);
      u = (1 - rho) * u + rho * e;
      row.rho = rho;
      row.weight = eta[eta.size() - 1];
    }
    trace.rows.push_back(std::move(row));
  }

  trace.final_risk = empirical_risk(loss_t, data.ys, u);

  SignedMeasureModel model;
  model.alpha = config.alpha;
  model.p = config.p;
  model.R = data.R;
  for (size_t j = 0; j < units.size(); ++j)
    model.units.push_back({eta[Eigen::Index(j)], units[j]});
  model.drop_zero_units();
  return {std::move(model), std::move(trace)};
}

}  // namespace

std::pair<SignedMeasureModel, TrainTrace> fw_train(const Dataset& data, const Loss& loss,
                                                   const FWConfig& config) {
  UnitOracle oracle = make_oracle(data.augmented(), data.R, config.alpha, config.p,
                                  config.oracle);
  return train_loop(data, loss, config, oracle);
}

std::pair<SignedMeasureModel, TrainTrace> fw_train_approx(const Dataset& data,
                                                          const Loss& loss,
                                                          const FWConfig& config,
                                                          const UnitOracle& oracle) {
  FWConfig c = config;
  if (c.rule == StepRule::Harmonic) c.rule = StepRule::LineSearch;
  return train_loop(data, loss, c, oracle);
}

double duality_gap(const SignedMeasureModel& model, const Dataset& data,
                   const Loss& loss, double delta, const UnitOracle& oracle) {
  const Eigen::Index n = data.n();
  Eigen::VectorXd u = model.units.empty() ? Eigen::VectorXd::Zero(n)
                                          : model.predict_all(data.xs);
  Eigen::VectorXd g(n);
  for (Eigen::Index i = 0; i < n; ++i) g[i] = -loss.grad(data.ys[i], u[i]);
  OracleResult res = oracle(g);
  return delta * res.value - g.dot(u) / double(n);
}

Eigen::VectorXd fully_corrective(const std::vector<Unit>& units, const Dataset& data,
                                 const Loss& loss, double delta, int alpha,
                                 const Eigen::VectorXd& warm_start, double rel_tol,
                                 int max_iter) {
  require(!units.empty(), "fully_corrective: need at least one unit");
  const Eigen::Index n = data.n();
  const Eigen::Index k = Eigen::Index(units.size());
  const Eigen::MatrixXd Z = data.augmented();
  Eigen::MatrixXd Phi(n, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    for (Eigen::Index i = 0; i < n; ++i)
      Phi(i, j) = units[size_t(j)].activation(Z.row(i), data.R, alpha);
  }

  auto risk = [&](const Eigen::VectorXd& w) {
    return empirical_risk(loss, data.ys, Phi * w);
  };
  auto grad = [&](const Eigen::VectorXd& w) {
    Eigen::VectorXd u = Phi * w;
    Eigen::VectorXd gl(n);
    for (Eigen::Index i = 0; i < n; ++i) gl[i] = loss.grad(data.ys[i], u[i]);
    return Eigen::VectorXd(Phi.transpose() * gl / double(n));
  };

  // Lipschitz constant of the gradient: L_loss * ||Phi||_2^2 / n.
  double phi_norm2 = Phi.squaredNorm();
  if (k <= 256) {
    Eigen::VectorXd s = Eigen::JacobiSVD<Eigen::MatrixXd>(Phi).singularValues();
    phi_norm2 = s.size() ? s[0] * s[0] : 0.0;
  }
  double L = std::max(1e-12, loss.smoothness() * phi_norm2 / double(n));

  Eigen::VectorXd w = project_l1_ball(warm_start.size() == k ? warm_start
                                                             : Eigen::VectorXd::Zero(k),
                                      delta);
  Eigen::VectorXd best_w = w;
  double best_r = risk(w);
  Eigen::VectorXd y = w;
  double t_mom = 1.0;
  double prev_r = best_r;

  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXd w_next = project_l1_ball(y - grad(y) / L, delta);
    double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_mom * t_mom));
    Eigen::VectorXd y_next = w_next + ((t_mom - 1.0) / t_next) * (w_next - w);
    double r = risk(w_next);
    if (r > prev_r) {  // momentum restart
      y_next = w_next;
      t_next = 1.0;
    }
    if (r < best_r) {
      best_r = r;
      best_w = w_next;
    }
    bool settled = std::abs(prev_r - r) <= rel_tol * std::max(1e-30, std::abs(prev_r));
    w = w_next;
    y = y_next;
    t_mom = t_next;
    prev_r = r;
    if (settled && it > 32) break;
  }
  return best_w;
}

}  // namespace convexnn
