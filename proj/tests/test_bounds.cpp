#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "convexnn/bounds.hpp"
#include "convexnn/relaxations.hpp"  // loglog_slope
#include "convexnn/rng.hpp"

using namespace convexnn;

namespace {

Dataset ball_dataset(Rng& rng, int n, int d) {
  Eigen::MatrixXd xs(n, d);
  for (int i = 0; i < n; ++i) xs.row(i) = rng.ball(d, 1.0);
  return Dataset(std::move(xs), Eigen::VectorXd::Zero(n), 1.0, 2.0);
}

}  // namespace

TEST_SUITE("bounds") {
  TEST_CASE("bound spot values") {
    // p=2, alpha=1, G=delta=1, n=100 -> 4 * 1/10 * 1 = 0.4
    CHECK(rademacher_bound({1, 1, 100, 2.0, 3, 1, 1.0}) == doctest::Approx(0.4));
    // p=1, alpha=2, d=1: C = 2 sqrt(2 log 2)
    CHECK(complexity_constant({1, 1, 1, 1.0, 1, 2, 1.0}) ==
          doctest::Approx(2.0 * std::sqrt(2.0 * std::log(2.0))));
    // quadrupling n halves the bound
    BoundSpec s{1.5, 2.0, 64, 2.0, 4, 1, 1.0};
    BoundSpec s4 = s;
    s4.n = 256;
    CHECK(rademacher_bound(s4) == doctest::Approx(0.5 * rademacher_bound(s)));
  }

  TEST_CASE("bound monotonicity") {
    BoundSpec base{1.0, 1.0, 64, 2.0, 4, 1, 1.0};
    BoundSpec bigger = base;
    bigger.delta = 2.0;
    CHECK(rademacher_bound(bigger) > rademacher_bound(base));
    bigger = base;
    bigger.G = 3.0;
    CHECK(rademacher_bound(bigger) > rademacher_bound(base));
    bigger = base;
    bigger.alpha = 2;
    CHECK(rademacher_bound(bigger) > rademacher_bound(base));
    bigger = base;
    bigger.n = 256;
    CHECK(rademacher_bound(bigger) < rademacher_bound(base));
  }

  TEST_CASE("fixed all-plus signs reduce to a single oracle call") {
    Rng rng(5);
    Dataset data = ball_dataset(rng, 8, 2);
    ExactOracle oracle(data.augmented(), data.R, 1, 2.0);
    Eigen::VectorXd tau = Eigen::VectorXd::Ones(8);
    CHECK(rademacher_value(oracle, tau) == oracle.solve(tau).value);
  }

  TEST_CASE("mc estimates stay below the analytic bound") {
    Rng rng(7);
    for (int n : {8, 32}) {
      for (int alpha : {0, 1}) {
        for (double p : {1.0, 2.0}) {
          Dataset data = ball_dataset(rng, n, 2);
          auto [est, se] = rademacher_mc(data, alpha, p, 400, 17);
          BoundSpec spec{1, 1, n, p, 2, alpha, 1.0};
          CHECK(est <= rademacher_mc_bound(spec) + 3 * se);
        }
      }
    }
  }

  TEST_CASE("mc estimate scales like 1/sqrt(n)") {
    Rng rng(11);
    std::vector<double> ns, means;
    for (int n : {8, 16, 32, 64}) {
      Dataset data = ball_dataset(rng, n, 1);
      auto [est, se] = rademacher_mc(data, 1, 2.0, 600, 23);
      ns.push_back(n);
      means.push_back(est);
    }
    double slope = loglog_slope(ns, means);
    CHECK(std::abs(slope + 0.5) <= 0.15);
  }

  TEST_CASE("mc is deterministic per seed") {
    Rng rng(13);
    Dataset data = ball_dataset(rng, 10, 2);
    auto [e1, s1] = rademacher_mc(data, 1, 2.0, 100, 31);
    auto [e2, s2] = rademacher_mc(data, 1, 2.0, 100, 31);
    CHECK(e1 == e2);
    CHECK(s1 == s2);
  }

  TEST_CASE("printed rate expressions") {
    RateParams pr;
    pr.n = 100;
    pr.d = 9;
    pr.k = 1;
    pr.q = 1;
    pr.alpha = 1;
    CHECK(table1_rate("affine", "l2", pr) == doctest::Approx(std::sqrt(9.0) / 10.0));
    // projection pursuit, l2, alpha=1, k=1: sqrt(d) n^{-1/4} log n
    CHECK(table1_rate("projection-pursuit", "l2", pr) ==
          doctest::Approx(std::sqrt(9.0) * std::pow(100.0, -0.25) * std::log(100.0)));
    // rates vanish monotonically in n
    for (const char* setting : {"affine", "projection-pursuit", "multi-index"}) {
      for (const char* norm : {"l2", "l1", "a0"}) {
        RateParams big = pr;
        big.s = 2;
        double prev = 1e300;
        for (int n : {100, 1000, 10000, 100000}) {
          big.n = n;
          double r = table1_rate(setting, norm, big);
          CHECK(r < prev);
          prev = r;
        }
      }
    }
    CHECK_THROWS_AS(table1_rate("affine", "bogus", pr), std::invalid_argument);
  }
}
