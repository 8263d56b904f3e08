#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>

namespace convexnn {

// Deterministic 64-bit generator (splitmix64). Distributions below are
// implemented directly so that seeded streams are identical across standard
// library versions; every randomized routine in the library derives its
// streams from this.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Child stream independent of subsequent draws from this one.
  Rng fork(std::uint64_t stream) {
    std::uint64_t s = next_u64();
    return Rng(s ^ (0x94d049bb133111ebULL * (stream + 1)));
  }

  // Uniform in [0, 1).
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Marsaglia polar method; no state besides the generator.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    have_spare_ = true;
    return u * m;
  }

  int sign() { return (next_u64() & 1) ? 1 : -1; }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

  Eigen::VectorXd gaussian_vector(int n) {
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x[i] = gaussian();
    return x;
  }

  // Uniform on the unit l2-sphere in R^n.
  Eigen::VectorXd sphere(int n) {
    Eigen::VectorXd x;
    double nrm = 0;
    do {
      x = gaussian_vector(n);
      nrm = x.norm();
    } while (nrm < 1e-12);
    return x / nrm;
  }

  // Uniform in the l2 ball of radius r in R^n.
  Eigen::VectorXd ball(int n, double r) {
    Eigen::VectorXd x = sphere(n);
    return x * (r * std::pow(uniform(), 1.0 / n));
  }

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace convexnn
