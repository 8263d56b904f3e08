#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "convexnn/geometry.hpp"
#include "convexnn/oracles.hpp"
#include "convexnn/rng.hpp"

using namespace convexnn;

namespace {

Zonotope random_zonotope(Rng& rng, int r, int d) {
  Zonotope Z;
  Z.generators.resize(r, d);
  for (int i = 0; i < r; ++i) Z.generators.row(i) = rng.gaussian_vector(d);
  return Z;
}

Ellipsoid random_ellipsoid(Rng& rng, int d) {
  Eigen::MatrixXd A(d, d);
  for (int i = 0; i < d; ++i) A.row(i) = rng.gaussian_vector(d);
  return {rng.gaussian_vector(d), A * A.transpose() + 0.3 * Eigen::MatrixXd::Identity(d, d)};
}

}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("support function basics") {
    Zonotope Z;
    Z.generators.resize(1, 2);
    Z.generators << 1, 0;
    Eigen::VectorXd e1(2), e2(2);
    e1 << 1, 0;
    e2 << 0, 1;
    CHECK(support(Z, e1) == 1.0);
    CHECK(support(Z, Eigen::VectorXd(-e1)) == 0.0);

    Zonotope Z2;
    Z2.generators.resize(2, 2);
    Z2.generators << 1, 0, 0, 1;
    Eigen::VectorXd w(2);
    w << 1, 1;
    CHECK(support(Z2, w) == 2.0);

    Rng rng(3);
    Zonotope Z3 = random_zonotope(rng, 5, 3);
    for (int t = 0; t < 100; ++t) {
      Eigen::VectorXd u = rng.gaussian_vector(3);
      double c = rng.uniform(0.1, 4.0);
      CHECK(support(Z3, Eigen::VectorXd(c * u)) ==
            doctest::Approx(c * support(Z3, u)).epsilon(1e-12));
      // convexity spot check
      Eigen::VectorXd v = rng.gaussian_vector(3);
      double lam = rng.uniform();
      CHECK(support(Z3, Eigen::VectorXd(lam * u + (1 - lam) * v)) <=
            lam * support(Z3, u) + (1 - lam) * support(Z3, v) + 1e-10);
    }
  }

  TEST_CASE("zonotope Hausdorff: identical and segment-vs-origin cases") {
    Rng rng(5);
    Zonotope A = random_zonotope(rng, 4, 2);
    CHECK(zonotope_hausdorff(A, A) == doctest::Approx(0.0).scale(1));

    Zonotope seg, origin;
    seg.generators.resize(1, 2);
    seg.generators << 1, 0;
    origin.generators.resize(0, 2);
    CHECK(zonotope_hausdorff(seg, origin) == doctest::Approx(1.0));
  }

  TEST_CASE("zonotope Hausdorff matches the sampled support oracle in 2-D") {
    Rng rng(7);
    for (int t = 0; t < 12; ++t) {
      Zonotope A = random_zonotope(rng, 5, 2);
      Zonotope B = random_zonotope(rng, 5, 2);
      double exact = zonotope_hausdorff(A, B);
      double sampled = hausdorff_by_sampling(A, B, 2.0, 100000);
      CHECK(exact == doctest::Approx(sampled).epsilon(1e-6).scale(1.0));
    }
  }

  TEST_CASE("Hausdorff symmetry and sampled triangle inequality") {
    Rng rng(11);
    for (int t = 0; t < 8; ++t) {
      Zonotope A = random_zonotope(rng, 4, 2);
      Zonotope B = random_zonotope(rng, 4, 2);
      Zonotope C = random_zonotope(rng, 4, 2);
      double ab = zonotope_hausdorff(A, B);
      double ba = zonotope_hausdorff(B, A);
      CHECK(ab == doctest::Approx(ba).epsilon(1e-10));
      CHECK(ab <= zonotope_hausdorff(A, C) + zonotope_hausdorff(C, B) + 1e-9);
    }
  }

  TEST_CASE("q != 2 falls back to the sampling oracle and rejects high dim") {
    Rng rng(13);
    Zonotope A = random_zonotope(rng, 4, 2);
    Zonotope B = random_zonotope(rng, 4, 2);
    double h1 = zonotope_hausdorff(A, B, 1.0);
    CHECK(h1 > 0);
    Zonotope A4 = random_zonotope(rng, 4, 4);
    Zonotope B4 = random_zonotope(rng, 4, 4);
    CHECK_THROWS_AS(zonotope_hausdorff(A4, B4, 1.0), budget_error);
  }

  TEST_CASE("step problem equals the zonotope Hausdorff distance") {
    Rng rng(17);
    for (int t = 0; t < 30; ++t) {
      int n = 2 + int(rng.below(9));
      int d = 1 + int(rng.below(2));
      Eigen::MatrixXd Z(n, d + 1);
      for (int i = 0; i < n; ++i) {
        Z.row(i).head(d) = rng.ball(d, 1.0);
        Z(i, d) = 1.0;
      }
      Eigen::VectorXd y = rng.gaussian_vector(n);
      double H = fw_step_as_hausdorff(Z, y);
      ExactOracle oracle(Z, 1.0, 1, 2.0);
      CHECK(H == doctest::Approx(n * oracle.solve(y).value).epsilon(1e-8));
    }
    // y = 0: both zonotopes are {0}
    Eigen::MatrixXd Z(3, 2);
    Z << 1, 1, -1, 1, 0.5, 1;
    CHECK(fw_step_as_hausdorff(Z, Eigen::VectorXd::Zero(3)) == doctest::Approx(0.0).scale(1));
    // all y >= 0: distance of the positive zonotope from the origin
    Eigen::VectorXd ypos(3);
    ypos << 1.0, 0.5, 0.2;
    ExactOracle oracle(Z, 1.0, 1, 2.0);
    CHECK(fw_step_as_hausdorff(Z, ypos) ==
          doctest::Approx(3 * oracle.solve(ypos).value).epsilon(1e-8));
  }

  TEST_CASE("alpha >= 2 saddle value") {
    // single positive point: max_v (v.z)_+^2 / 2 = 1/2
    Eigen::MatrixXd Z(1, 2);
    Z << 1, 0;
    Eigen::VectorXd y(1);
    y << 1;
    auto res = alpha2_saddle(Z, y, 2);
    CHECK(res.value == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(res.converged);

    CHECK(alpha2_saddle(Z, Eigen::VectorXd::Zero(1), 2).value == doctest::Approx(0.0).scale(1));

    // random instances: saddle = (n/alpha) R^alpha * one-sided step value
    Rng rng(19);
    for (int t = 0; t < 6; ++t) {
      int n = 3 + int(rng.below(4));
      Eigen::MatrixXd Zr(n, 2);
      for (int i = 0; i < n; ++i) Zr.row(i) = rng.gaussian_vector(2);
      Eigen::VectorXd yr = rng.gaussian_vector(n);
      auto plus = alpha2_saddle(Zr, yr, 2, 2.0, {16, 600, 4000, 5});
      auto minus = alpha2_saddle(Zr, Eigen::VectorXd(-yr), 2, 2.0, {16, 600, 4000, 5});
      double saddle = std::max(plus.value, minus.value);
      RestartsOptions ropts{64, 7, 300};
      double ov = oracle_restarts(Zr, 1.0, yr, 2, 2.0, ropts).value;
      CHECK(saddle == doctest::Approx(n * ov / 2.0).epsilon(1e-4).scale(1.0));
    }
  }

  TEST_CASE("mvee: signed unit vectors give the unit ball") {
    Eigen::MatrixXd P(4, 2);
    P << 1, 0, -1, 0, 0, 1, 0, -1;
    Ellipsoid E = mvee(P, 1e-9);
    CHECK(E.center.lpNorm<Eigen::Infinity>() <= 1e-9);
    CHECK((E.shape - Eigen::MatrixXd::Identity(2, 2)).lpNorm<Eigen::Infinity>() <= 1e-7);
  }

  TEST_CASE("mvee rejects degenerate spans") {
    Eigen::MatrixXd P(4, 2);
    P << 0, 0, 1, 1, 2, 2, 3, 3;  // a segment
    CHECK_THROWS_AS(mvee(P, 1e-7), std::invalid_argument);
  }

  TEST_CASE("mvee on zonotope vertices: containment and inscribed shrink") {
    Rng rng(23);
    for (int t = 0; t < 5; ++t) {
      Zonotope Z = random_zonotope(rng, 6, 2);
      Eigen::MatrixXd V = zonotope_vertices(Z);
      Ellipsoid E = mvee(V, 1e-8);
      Eigen::LLT<Eigen::MatrixXd> llt(E.shape);
      Eigen::MatrixXd Ainv = E.shape.inverse();
      for (Eigen::Index i = 0; i < V.rows(); ++i) {
        Eigen::VectorXd r = V.row(i).transpose() - E.center;
        CHECK(r.dot(Ainv * r) <= 1.0 + 1e-6);
      }
      // (1/sqrt(d))-scaled ellipsoid sits inside the hull of the vertices
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(E.shape);
      Eigen::MatrixXd half = eig.eigenvectors() *
                             eig.eigenvalues().cwiseSqrt().asDiagonal() *
                             eig.eigenvectors().transpose();
      for (int s = 0; s < 24; ++s) {
        double th = 2 * M_PI * s / 24;
        Eigen::VectorXd u(2);
        u << std::cos(th), std::sin(th);
        Eigen::VectorXd boundary = E.center + half * u / std::sqrt(2.0);
        CHECK(distance_to_hull(V, boundary) <= 1e-6);
      }
    }
  }

  TEST_CASE("ellipsoid Hausdorff analytic families") {
    for (int d : {2, 3}) {
      Eigen::MatrixXd I = Eigen::MatrixXd::Identity(d, d);
      Ellipsoid unit{Eigen::VectorXd::Zero(d), I};
      CHECK(ellipsoid_hausdorff(unit, unit) <= 1e-9);
      Ellipsoid r3{Eigen::VectorXd::Zero(d), 9.0 * I};
      CHECK(ellipsoid_hausdorff(unit, r3) == doctest::Approx(2.0).epsilon(1e-9));
      Eigen::VectorXd c = Eigen::VectorXd::Zero(d);
      c[0] = 5.0;
      Ellipsoid moved{c, I};
      CHECK(ellipsoid_hausdorff(unit, moved) == doctest::Approx(5.0).epsilon(1e-9));
    }
  }

  TEST_CASE("ellipsoid Hausdorff matches the support-sampling oracle") {
    Rng rng(29);
    for (int t = 0; t < 10; ++t) {
      int d = 2 + (t % 2);
      Ellipsoid A = random_ellipsoid(rng, d);
      Ellipsoid B = random_ellipsoid(rng, d);
      double h1 = ellipsoid_hausdorff(A, B);
      double h2 = hausdorff_by_sampling(A, B, d == 2 ? 4000 : 20000);
      CHECK(h1 == doctest::Approx(h2).epsilon(1e-6).scale(1.0));
    }
  }

  TEST_CASE("ellipsoid Hausdorff rejects singular shapes") {
    Eigen::MatrixXd S(2, 2);
    S << 1, 0, 0, 0;
    Ellipsoid bad{Eigen::VectorXd::Zero(2), S};
    Ellipsoid good{Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Identity(2, 2)};
    CHECK_THROWS_AS(ellipsoid_hausdorff(bad, good), std::invalid_argument);
  }

  TEST_CASE("box least squares is optimal to tight tolerance") {
    Rng rng(31);
    for (int t = 0; t < 30; ++t) {
      int r = 1 + int(rng.below(8)), d = 2 + int(rng.below(2));
      Eigen::MatrixXd G(r, d);
      for (int i = 0; i < r; ++i) G.row(i) = rng.gaussian_vector(d);
      Eigen::VectorXd c = 2.0 * rng.gaussian_vector(d);
      auto [val, b] = box_least_squares(G, c);
      REQUIRE(b.size() == r);
      for (int i = 0; i < r; ++i) {
        CHECK(b[i] >= -1e-12);
        CHECK(b[i] <= 1 + 1e-12);
      }
      // KKT: no coordinate move improves
      Eigen::VectorXd grad = G * (G.transpose() * b - c);
      for (int i = 0; i < r; ++i) {
        if (b[i] <= 1e-9)
          CHECK(grad[i] >= -1e-9 * std::max(1.0, c.norm()));
        else if (b[i] >= 1 - 1e-9)
          CHECK(grad[i] <= 1e-9 * std::max(1.0, c.norm()));
        else
          CHECK(std::abs(grad[i]) <= 1e-8 * std::max(1.0, c.norm()));
      }
    }
  }
}
