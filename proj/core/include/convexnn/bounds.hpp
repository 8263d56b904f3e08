#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <utility>

#include "convexnn/model.hpp"
#include "convexnn/oracles.hpp"

namespace convexnn {

struct BoundSpec {
  double G = 1.0;
  double delta = 1.0;
  int n = 1;
  double p = 2.0;
  int d = 1;
  int alpha = 1;
  double c0 = 1.0;  // alpha = 0 universal constant (unspecified; configurable)
};

// C(p, d, alpha): alpha / sqrt(p-1) for p in (1,2], alpha sqrt(2 log(d+1))
// for p = 1, c0 sqrt(d+1) for alpha = 0.
double complexity_constant(const BoundSpec& spec);

// 4 G delta C(p,d,alpha) / sqrt(n): the uniform-deviation bound.
double rademacher_bound(const BoundSpec& spec);

// Bound on E sup_v |(1/n) sum tau_i (v^T z_i / R)_+^alpha| itself, the
// quantity the Monte-Carlo estimator below measures: alpha (sqrt2)^alpha
// C(p,d) / sqrt(n) for alpha >= 1 (the sqrt2 from ||z||_q <= sqrt2 R), and
// c0 sqrt(d+1) / sqrt(n) for alpha = 0.
double rademacher_mc_bound(const BoundSpec& spec);

// Single draw: oracle value at g = tau.
double rademacher_value(const ExactOracle& oracle, const Eigen::VectorXd& tau);

// MC estimate of E sup_v |(1/n) sum tau_i phi_v(x_i)| over random sign
// vectors, via the exact oracle; returns (estimate, standard error).
std::pair<double, double> rademacher_mc(const Dataset& data, int alpha, double p,
                                        int trials, std::uint64_t seed);

// Printed generalization-rate expressions for reporting.
// setting in {affine, projection-pursuit, multi-index}, norm in {l2, l1, a0}.
struct RateParams {
  int n = 100;
  int d = 10;
  int k = 1;
  int s = 1;
  int q = 1;  // sparsity level
  int alpha = 1;
};
double table1_rate(const std::string& setting, const std::string& norm,
                   const RateParams& params);

}  // namespace convexnn
