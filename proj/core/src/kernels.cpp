#include "convexnn/kernels.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "convexnn/harmonics.hpp"
#include "convexnn/parallel.hpp"
#include "convexnn/rng.hpp"

namespace convexnn {

namespace {

double rho_of(const KernelSpec& spec, const Eigen::VectorXd& x) {
  return std::sqrt(x.squaredNorm() / (spec.R * spec.R) + 1.0);
}

void check_spec(const KernelSpec& spec, const Eigen::VectorXd& x,
                const Eigen::VectorXd& y) {
  require(spec.alpha >= 0 && spec.alpha <= 2,
          "kernel: closed forms exist for alpha in {0, 1, 2} only");
  require(spec.R > 0, "kernel: R must be positive");
  require(x.size() == spec.d && y.size() == spec.d, "kernel: dimension mismatch");
}

}  // namespace

double kernel_angle(const KernelSpec& spec, const Eigen::VectorXd& x,
                    const Eigen::VectorXd& y) {
  if (x == y) return 0.0;  // acos near 1 amplifies rounding; self-pairs are exact
  double c = (x.dot(y) / (spec.R * spec.R) + 1.0) / (rho_of(spec, x) * rho_of(spec, y));
  c = std::clamp(c, -1.0, 1.0);
  return std::acos(c);
}

double kernel(const KernelSpec& spec, const Eigen::VectorXd& x,
              const Eigen::VectorXd& y) {
  check_spec(spec, x, y);
  const double phi = kernel_angle(spec, x, y);
  const double d1 = double(spec.d) + 1.0;
  switch (spec.alpha) {
    case 0:
      return (M_PI - phi) / (2.0 * M_PI);
    case 1: {
      double pref = rho_of(spec, x) * rho_of(spec, y) / (2.0 * d1 * M_PI);
      return pref * ((M_PI - phi) * std::cos(phi) + std::sin(phi));
    }
    default: {
      double r2 = rho_of(spec, x) * rho_of(spec, x) * rho_of(spec, y) * rho_of(spec, y);
      double pref = r2 / (2.0 * M_PI * (d1 * d1 + 2.0 * d1));
      double c = std::cos(phi);
      return pref * (3.0 * std::sin(phi) * c + (M_PI - phi) * (1.0 + 2.0 * c * c));
    }
  }
}

double kernel_series_points(const KernelSpec& spec, const Eigen::VectorXd& x,
                            const Eigen::VectorXd& y, int K) {
  check_spec(spec, x, y);
  double u = std::cos(kernel_angle(spec, x, y));
  double scale = std::pow(rho_of(spec, x) * rho_of(spec, y), spec.alpha);
  return scale * kernel_series(spec.d, spec.alpha, K, u);
}

std::pair<double, double> kernel_mc(const KernelSpec& spec, const Eigen::VectorXd& x,
                                    const Eigen::VectorXd& y, std::int64_t m,
                                    std::uint64_t seed) {
  check_spec(spec, x, y);
  require(m >= 1, "kernel_mc: m must be >= 1");
  const Eigen::VectorXd zx = augment(x, spec.R) / spec.R;
  const Eigen::VectorXd zy = augment(y, spec.R) / spec.R;
  const int D = spec.d + 1;
  const std::int64_t chunk = 1 << 16;
  const int nchunks = int((m + chunk - 1) / chunk);
  std::vector<double> sums(static_cast<size_t>(nchunks), 0.0), sqs(static_cast<size_t>(nchunks), 0.0);
  parallel_chunks(m, chunk, [&](int ci, std::int64_t lo, std::int64_t hi) {
    Rng rng(seed ^ (0x9e3779b97f4a7c15ULL * (std::uint64_t(ci) + 1)));
    double s = 0, s2 = 0;
    for (std::int64_t i = lo; i < hi; ++i) {
      Eigen::VectorXd v = rng.sphere(D);
      double a = v.dot(zx), b = v.dot(zy);
      double pa = spec.alpha == 0 ? (a > 0 ? 1.0 : 0.0)
                                  : (a > 0 ? std::pow(a, spec.alpha) : 0.0);
      double pb = spec.alpha == 0 ? (b > 0 ? 1.0 : 0.0)
                                  : (b > 0 ? std::pow(b, spec.alpha) : 0.0);
      double prod = pa * pb;
      s += prod;
      s2 += prod * prod;
    }
    sums[size_t(ci)] = s;
    sqs[size_t(ci)] = s2;
  });
  double total = 0, total2 = 0;
  for (int c = 0; c < nchunks; ++c) {
    total += sums[size_t(c)];
    total2 += sqs[size_t(c)];
  }
  double mean = total / double(m);
  double var = std::max(0.0, total2 / double(m) - mean * mean);
  double se = m > 1 ? std::sqrt(var / double(m - 1)) : std::sqrt(var);
  return {mean, se};
}

Eigen::MatrixXd gram(const KernelSpec& spec, const Eigen::MatrixXd& xs) {
  const Eigen::Index n = xs.rows();
  Eigen::MatrixXd K(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      K(i, j) = K(j, i) = kernel(spec, xs.row(i), xs.row(j));
    }
  }
  return K;
}

RandomFeatureMap random_features(const KernelSpec& spec, int m, std::uint64_t seed) {
  require(m >= 1, "random_features: m must be >= 1");
  RandomFeatureMap map;
  map.alpha = spec.alpha;
  map.R = spec.R;
  map.V.resize(m, spec.d + 1);
  Rng rng(seed);
  for (int j = 0; j < m; ++j) map.V.row(j) = rng.sphere(spec.d + 1);
  return map;
}

Eigen::VectorXd featurize(const RandomFeatureMap& map, const Eigen::VectorXd& x) {
  const Eigen::VectorXd z = augment(x, map.R) / map.R;
  Eigen::VectorXd psi = map.V * z;
  const double scale = 1.0 / std::sqrt(double(map.m()));
  for (Eigen::Index j = 0; j < psi.size(); ++j) {
    double u = psi[j];
    psi[j] = map.alpha == 0 ? (u > 0 ? 1.0 : 0.0)
                            : (u > 0 ? std::pow(u, map.alpha) : 0.0);
    psi[j] *= scale;
  }
  return psi;
}

double F2Predictor::operator()(const Eigen::VectorXd& x) const {
  if (method_ == F2Options::Method::Kernel) {
    double s = 0;
    for (Eigen::Index i = 0; i < train_xs_.rows(); ++i)
      s += coef_[i] * kernel(spec_, train_xs_.row(i), x);
    return s;
  }
  return featurize(map_, x).dot(weights_);
}

Eigen::VectorXd F2Predictor::predict_all(const Eigen::MatrixXd& xs) const {
  Eigen::VectorXd out(xs.rows());
  for (Eigen::Index i = 0; i < xs.rows(); ++i) out[i] = (*this)(xs.row(i));
  return out;
}

SignedMeasureModel F2Predictor::as_model() const {
  require(method_ == F2Options::Method::RandomFeatures,
          "as_model: only random-features predictors are finite unit sums");
  SignedMeasureModel model;
  model.alpha = map_.alpha;
  model.p = 2.0;
  model.R = map_.R;
  const double scale = 1.0 / std::sqrt(double(map_.m()));
  for (Eigen::Index j = 0; j < map_.m(); ++j)
    model.units.push_back({weights_[j] * scale, Unit(map_.V.row(j), 2.0)});
  return model;
}

namespace {

struct FitResult {
  Eigen::VectorXd sol;
  double norm2 = 0.0;
};

FitResult solve_kernel_path(const Eigen::MatrixXd& K, const Eigen::VectorXd& y,
                            double lambda) {
  const Eigen::Index n = K.rows();
  Eigen::MatrixXd A = K;
  double jitter = 1e-10 * K.trace();
  A.diagonal().array() += double(n) * lambda + jitter;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
  if (ldlt.info() != Eigen::Success)
    throw convergence_error("f2_estimate: kernel system factorization failed");
  Eigen::VectorXd c = ldlt.solve(y);
  return {c, c.dot(K * c)};
}

FitResult solve_rf_path(const Eigen::MatrixXd& Psi, const Eigen::VectorXd& y,
                        double lambda) {
  const Eigen::Index n = Psi.rows();
  Eigen::MatrixXd A = Psi.transpose() * Psi;
  A.diagonal().array() += double(n) * lambda + 1e-12 * std::max(1.0, A.trace());
  Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
  if (ldlt.info() != Eigen::Success)
    throw convergence_error("f2_estimate: feature system factorization failed");
  Eigen::VectorXd w = ldlt.solve(Psi.transpose() * y);
  return {w, w.squaredNorm()};
}

}  // namespace

F2Predictor f2_estimate(const Dataset& data, const F2Options& options) {
  require(data.n() >= 1, "f2_estimate: empty dataset");
  KernelSpec spec{options.alpha, int(data.d()), data.R};
  F2Predictor pred;
  pred.method_ = options.method;
  pred.spec_ = spec;

  auto fit = [&](double lambda) -> FitResult {
    if (options.method == F2Options::Method::Kernel) {
      require(data.n() <= 2000, "f2_estimate: exact kernel path needs n <= 2000");
      return solve_kernel_path(gram(spec, data.xs), data.ys, lambda);
    }
    RandomFeatureMap map = random_features(spec, options.m, options.seed);
    Eigen::MatrixXd Psi(data.n(), map.m());
    for (Eigen::Index i = 0; i < data.n(); ++i)
      Psi.row(i) = featurize(map, data.xs.row(i));
    return solve_rf_path(Psi, data.ys, lambda);
  };

  double lambda = options.lambda;
  FitResult res = fit(lambda);
  if (options.norm_budget) {
    // Constraint form: largest-norm solution within the budget, by bisection
    // on the ridge parameter (the norm is decreasing in lambda).
    double budget2 = (*options.norm_budget) * (*options.norm_budget);
    if (res.norm2 > budget2) {
      double lo = lambda, hi = std::max(lambda, 1.0);
      while (fit(hi).norm2 > budget2 && hi < 1e9) hi *= 10;
      for (int it = 0; it < 80; ++it) {
        double mid = std::sqrt(lo * hi);
        (fit(mid).norm2 > budget2 ? lo : hi) = mid;
      }
      lambda = hi;
      res = fit(lambda);
    }
  }

  pred.lambda_ = lambda;
  pred.rkhs_norm_ = std::sqrt(std::max(0.0, res.norm2));
  if (options.method == F2Options::Method::Kernel) {
    pred.train_xs_ = data.xs;
    pred.coef_ = res.sol;
  } else {
    pred.map_ = random_features(spec, options.m, options.seed);
    pred.weights_ = res.sol;
  }
  return pred;
}

}  // namespace convexnn
