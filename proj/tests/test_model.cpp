#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "convexnn/model.hpp"
#include "convexnn/rng.hpp"

using namespace convexnn;

namespace {

Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_SUITE("model") {
  TEST_CASE("augment appends R") {
    Eigen::VectorXd z = augment(vec2(0, 0), 1.0);
    CHECK(z.size() == 3);
    CHECK(z[0] == 0);
    CHECK(z[1] == 0);
    CHECK(z[2] == 1);

    Eigen::VectorXd z2 = augment(vec2(3, 4), 5.0);
    CHECK(z2[2] == 5.0);
    CHECK(z2.norm() == doctest::Approx(5.0 * std::sqrt(2.0)).epsilon(1e-14));

    Eigen::VectorXd one(1);
    one << 1.0;
    Eigen::VectorXd z3 = augment(one, 2.0);
    CHECK(z3[0] == 1.0);
    CHECK(z3[1] == 2.0);

    CHECK_THROWS_AS(augment(one, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(augment(one, -1.0), std::invalid_argument);
  }

  TEST_CASE("augmented points stay in the sqrt2 R ball") {
    Rng rng(3);
    for (int t = 0; t < 200; ++t) {
      double R = rng.uniform(0.1, 5.0);
      Eigen::VectorXd x = rng.ball(3, R);
      CHECK(augment(x, R).norm() <= std::sqrt(2.0) * R * (1 + 1e-12));
    }
  }

  TEST_CASE("predict on simple unit lists") {
    SignedMeasureModel empty;
    empty.alpha = 1;
    Eigen::VectorXd x1(1);
    x1 << 3.0;
    CHECK(empty.predict(x1) == 0.0);

    // d=1, R=1, alpha=1, one unit eta=2, v=(1,0)
    SignedMeasureModel m;
    m.alpha = 1;
    m.R = 1.0;
    m.units.push_back({2.0, Unit(vec2(1, 0), 2.0)});
    CHECK(m.predict(x1) == doctest::Approx(6.0));
    x1 << -1.0;
    CHECK(m.predict(x1) == 0.0);

    // alpha=0 constant unit fires everywhere: v=(0,1)
    SignedMeasureModel c;
    c.alpha = 0;
    c.R = 1.0;
    c.units.push_back({1.0, Unit(vec2(0, 1), 2.0)});
    for (double xv : {-5.0, 0.0, 0.3, 7.0}) {
      x1 << xv;
      CHECK(c.predict(x1) == 1.0);
    }
  }

  TEST_CASE("alpha=0 boundary is strict") {
    SignedMeasureModel m;
    m.alpha = 0;
    m.R = 1.0;
    m.units.push_back({1.0, Unit(vec2(1, 0), 2.0)});
    Eigen::VectorXd x(1);
    x << 0.0;  // v.z = 0 exactly
    CHECK(m.predict(x) == 0.0);
  }

  TEST_CASE("predict dimension mismatch throws") {
    SignedMeasureModel m;
    m.alpha = 1;
    m.units.push_back({1.0, Unit(vec2(1, 0), 2.0)});
    Eigen::VectorXd bad(3);
    bad.setZero();
    CHECK_THROWS_AS(m.predict(bad), std::invalid_argument);
  }

  TEST_CASE("variation norm") {
    SignedMeasureModel m;
    m.alpha = 1;
    Eigen::VectorXd v = vec2(1, 0);
    for (double eta : {1.0, -2.0, 0.5}) m.units.push_back({eta, Unit(v, 2.0)});
    CHECK(m.variation_norm() == doctest::Approx(3.5));
    SignedMeasureModel empty;
    CHECK(empty.variation_norm() == 0.0);
    for (auto& wu : m.units) wu.eta *= -3.0;
    CHECK(m.variation_norm() == doctest::Approx(10.5));
  }

  TEST_CASE("zero-weight units do not change predictions") {
    Rng rng(11);
    SignedMeasureModel m;
    m.alpha = 1;
    m.R = 1.0;
    for (int j = 0; j < 5; ++j) m.units.push_back({rng.gaussian(), Unit(rng.sphere(3), 2.0)});
    SignedMeasureModel with_zero = m;
    with_zero.units.push_back({0.0, Unit(rng.sphere(3), 2.0)});
    for (int t = 0; t < 50; ++t) {
      Eigen::VectorXd x = rng.ball(2, 1.0);
      CHECK(m.predict(x) == doctest::Approx(with_zero.predict(x)).epsilon(1e-15));
    }
  }

  TEST_CASE("predict is scale invariant: (cx, cR) leaves values unchanged") {
    Rng rng(7);
    for (int alpha : {0, 1, 2}) {
      SignedMeasureModel m;
      m.alpha = alpha;
      m.R = 1.3;
      for (int j = 0; j < 6; ++j) m.units.push_back({rng.gaussian(), Unit(rng.sphere(4), 2.0)});
      SignedMeasureModel scaled = m;
      double c = 3.7;
      scaled.R = c * m.R;
      for (int t = 0; t < 50; ++t) {
        Eigen::VectorXd x = rng.ball(3, 1.3);
        CHECK(m.predict(x) == doctest::Approx(scaled.predict(c * x)).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("convex combination does not increase the variation norm") {
    Rng rng(13);
    for (int t = 0; t < 20; ++t) {
      SignedMeasureModel f, g;
      f.alpha = g.alpha = 1;
      for (int j = 0; j < 4; ++j) {
        f.units.push_back({rng.gaussian(), Unit(rng.sphere(3), 2.0)});
        g.units.push_back({rng.gaussian(), Unit(rng.sphere(3), 2.0)});
      }
      double rho = rng.uniform();
      SignedMeasureModel mix = f;
      for (auto& wu : mix.units) wu.eta *= (1 - rho);
      for (auto wu : g.units) {
        wu.eta *= rho;
        mix.units.push_back(wu);
      }
      CHECK(mix.variation_norm() <=
            (1 - rho) * f.variation_norm() + rho * g.variation_norm() + 1e-12);
    }
  }

  TEST_CASE("dataset validation") {
    Eigen::MatrixXd xs(2, 2);
    xs << 0.5, 0.5, -0.3, 0.1;
    Eigen::VectorXd ys(2);
    ys << 1.0, -1.0;
    CHECK_NOTHROW(Dataset(xs, ys, 1.0, 2.0));
    CHECK_THROWS_AS(Dataset(xs, ys, 0.5, 2.0), std::invalid_argument);  // point outside
    CHECK_THROWS_AS(Dataset(xs, Eigen::VectorXd::Zero(3), 1.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(Dataset(xs, ys, -1.0, 2.0), std::invalid_argument);
    // q = inf box
    CHECK_NOTHROW(Dataset(xs, ys, 0.5, std::numeric_limits<double>::infinity()));
  }

  TEST_CASE("loss spot values") {
    Loss sq = Loss::squared();
    CHECK(sq.value(1.0, 1.0) == 0.0);
    CHECK(sq.grad(1.0, 1.0) == 0.0);

    Loss lg = Loss::logistic();
    CHECK(lg.value(1.0, 0.0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(lg.grad(1.0, 0.0) == doctest::Approx(-0.5).epsilon(1e-15));

    Loss sh = Loss::smoothed_hinge(0.5);
    CHECK(sh.value(1.0, 2.0) == 0.0);
    CHECK(sh.grad(1.0, 2.0) == 0.0);
    CHECK(sh.smoothness() == doctest::Approx(2.0));
    CHECK_THROWS_AS(Loss::smoothed_hinge(0.0), std::invalid_argument);
    CHECK_THROWS_AS(parse_loss("nope"), std::invalid_argument);
  }

  TEST_CASE("loss gradients match central differences") {
    Rng rng(5);
    for (Loss loss : {Loss::squared(), Loss::logistic(), Loss::smoothed_hinge(0.3)}) {
      for (int t = 0; t < 1000; ++t) {
        double y = loss.kind == LossKind::Squared ? rng.uniform(-2, 2) : double(rng.sign());
        double u = rng.uniform(-3, 3);
        double h = 1e-6;
        double fd = (loss.value(y, u + h) - loss.value(y, u - h)) / (2 * h);
        CHECK(loss.grad(y, u) == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
      }
    }
  }

  TEST_CASE("unit norm validation") {
    CHECK_THROWS_AS(Unit(vec2(1, 1), 2.0), std::invalid_argument);
    CHECK_NOTHROW(Unit(vec2(1, 1).normalized(), 2.0));
    CHECK_NOTHROW(Unit(vec2(0.5, 0.5), 1.0));
    CHECK_THROWS_AS(Unit(vec2(0.5, 0.5), 3.0), std::invalid_argument);
  }
}
