#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "convexnn/model.hpp"
#include "convexnn/oracles.hpp"

namespace convexnn {

enum class StepRule { Harmonic, LineSearch, FullyCorrective };

StepRule parse_step_rule(const std::string& name);

struct FWConfig {
  double delta = 1.0;  // gamma_1 budget
  int steps = 100;
  StepRule rule = StepRule::LineSearch;
  int alpha = 1;
  double p = 2.0;
  OracleSpec oracle;
  // Hinge smoothing schedule eps_t = c / sqrt(t+1); unset trains the loss
  // as given.
  std::optional<double> smoothing_c;
  std::uint64_t seed = 0;
  double gap_tol = 1e-14;  // early-stop threshold on the duality gap
};

struct TraceRow {
  int t = 0;
  double risk = 0.0;  // empirical risk at f_t, before the step
  double gap = 0.0;   // duality-gap certificate at f_t
  double rho = 0.0;
  double weight = 0.0;  // signed weight given to the new unit
  int sign = 1;
  Eigen::VectorXd v;
};

struct TrainTrace {
  std::vector<TraceRow> rows;
  double final_risk = 0.0;
  bool aborted = false;
  std::string abort_reason;
};

// Conditional-gradient minimization of the empirical risk over
// {gamma_1(f) <= delta}, starting from f_0 = 0.
std::pair<SignedMeasureModel, TrainTrace> fw_train(const Dataset& data, const Loss& loss,
                                                   const FWConfig& config);

// Same loop driven by an externally supplied (e.g. kappa-approximate) oracle;
// the step rule defaults to the segment line search the approximate-oracle
// analysis uses.
std::pair<SignedMeasureModel, TrainTrace> fw_train_approx(const Dataset& data,
                                                          const Loss& loss,
                                                          const FWConfig& config,
                                                          const UnitOracle& oracle);

// FW optimality certificate: delta * oracle(g) - <g, f>_n with
// g = -dJ. Zero iff f is optimal over the ball; nonnegative whenever the
// oracle is exact.
double duality_gap(const SignedMeasureModel& model, const Dataset& data,
                   const Loss& loss, double delta, const UnitOracle& oracle);

// Convex reoptimization of the output weights over ||eta||_1 <= delta
// (projected accelerated gradient + l1-ball projection). Never returns a
// worse risk than warm_start.
Eigen::VectorXd fully_corrective(const std::vector<Unit>& units, const Dataset& data,
                                 const Loss& loss, double delta, int alpha,
                                 const Eigen::VectorXd& warm_start,
                                 double rel_tol = 1e-9, int max_iter = 20000);

// eps_t = c / sqrt(t+1); only meaningful for hinge-type losses.
Loss smoothing_schedule(double c, int t);

// Projection onto the l1 ball of radius delta.
Eigen::VectorXd project_l1_ball(Eigen::VectorXd w, double delta);

double empirical_risk(const Loss& loss, const Eigen::VectorXd& ys,
                      const Eigen::VectorXd& preds);

}  // namespace convexnn
