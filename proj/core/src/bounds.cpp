#include "convexnn/bounds.hpp"

#include <cmath>
#include <vector>

#include "convexnn/parallel.hpp"
#include "convexnn/rng.hpp"

namespace convexnn {

double complexity_constant(const BoundSpec& spec) {
  require(spec.p >= 1.0 && spec.p <= 2.0, "complexity_constant: p must be in [1, 2]");
  require(spec.alpha >= 0, "complexity_constant: alpha must be >= 0");
  if (spec.alpha == 0) return spec.c0 * std::sqrt(double(spec.d + 1));
  if (spec.p == 1.0) return spec.alpha * std::sqrt(2.0 * std::log(double(spec.d + 1)));
  return double(spec.alpha) / std::sqrt(spec.p - 1.0);
}

double rademacher_bound(const BoundSpec& spec) {
  require(spec.G > 0 && spec.delta > 0 && spec.n >= 1, "rademacher_bound: bad spec");
  return 4.0 * spec.G * spec.delta / std::sqrt(double(spec.n)) * complexity_constant(spec);
}

double rademacher_mc_bound(const BoundSpec& spec) {
  if (spec.alpha == 0)
    return spec.c0 * std::sqrt(double(spec.d + 1)) / std::sqrt(double(spec.n));
  return spec.alpha * std::pow(std::sqrt(2.0), spec.alpha) *
         (spec.p == 1.0 ? std::sqrt(2.0 * std::log(double(spec.d + 1)))
                        : 1.0 / std::sqrt(spec.p - 1.0)) /
         std::sqrt(double(spec.n));
}

double rademacher_value(const ExactOracle& oracle, const Eigen::VectorXd& tau) {
  return oracle.solve(tau).value;
}

std::pair<double, double> rademacher_mc(const Dataset& data, int alpha, double p,
                                        int trials, std::uint64_t seed) {
  require(trials >= 2, "rademacher_mc: trials must be >= 2");
  ExactOracle oracle(data.augmented(), data.R, alpha, p);
  const Eigen::Index n = data.n();
  std::vector<double> vals(static_cast<size_t>(trials), 0.0);
  Rng root(seed);
  std::vector<Eigen::VectorXd> taus(static_cast<size_t>(trials));
  for (int t = 0; t < trials; ++t) {
    Rng rng = root.fork(std::uint64_t(t));
    Eigen::VectorXd tau(n);
    for (Eigen::Index i = 0; i < n; ++i) tau[i] = double(rng.sign());
    taus[size_t(t)] = std::move(tau);
  }
  parallel_chunks(trials, 16, [&](int, std::int64_t lo, std::int64_t hi) {
    for (std::int64_t t = lo; t < hi; ++t)
      vals[size_t(t)] = oracle.solve(taus[size_t(t)]).value;
  });
  double mean = 0;
  for (double v : vals) mean += v;
  mean /= trials;
  double var = 0;
  for (double v : vals) var += (v - mean) * (v - mean);
  var /= double(trials - 1);
  return {mean, std::sqrt(var / trials)};
}

double table1_rate(const std::string& setting, const std::string& norm,
                   const RateParams& pr) {
  const double n = pr.n, d = pr.d, k = pr.k, s = pr.s, q = pr.q;
  const double a = pr.alpha;
  auto logn = std::log(n);
  if (setting == "affine") {
    if (norm == "l2") return std::sqrt(d) / std::sqrt(n);
    if (norm == "l1") return std::sqrt(q) * std::sqrt(std::log(d) / n);
    if (norm == "a0") return std::sqrt(d * q) / std::sqrt(n);
  } else if (setting == "projection-pursuit") {
    if (norm == "l2") return k * std::sqrt(d) * std::pow(n, -1.0 / (2 * a + 2)) * logn;
    if (norm == "l1")
      return k * std::sqrt(q) * std::pow(std::log(d), 1.0 / (a + 1)) *
             std::pow(n, -1.0 / (2 * a + 2)) * logn;
    if (norm == "a0") return k * std::sqrt(d * q) / std::sqrt(n);
  } else if (setting == "multi-index") {
    if (norm == "l2") return k * std::sqrt(d) * std::pow(n, -1.0 / (2 * a + s + 1)) * logn;
    if (norm == "l1")
      return k * std::sqrt(q) * std::pow(std::log(d), 1.0 / (a + (s + 1) / 2.0)) *
             std::pow(n, -1.0 / (2 * a + s + 1)) * logn;
    if (norm == "a0")
      return std::sqrt(d * q) * std::pow(d, 1.0 / (s + 1)) * std::pow(n, -1.0 / (s + 1)) * logn;
  }
  throw std::invalid_argument("table1_rate: unknown setting/norm pair '" + setting +
                              "'/'" + norm + "'");
}

}  // namespace convexnn
