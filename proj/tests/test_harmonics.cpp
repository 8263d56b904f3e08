#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "convexnn/harmonics.hpp"
#include "convexnn/quadrature.hpp"
#include "convexnn/relaxations.hpp"  // loglog_slope

using namespace convexnn;

TEST_SUITE("harmonics") {
  TEST_CASE("legendre recurrence low-degree identities") {
    for (int d : {1, 2, 3, 5}) {
      for (double t : {-1.0, -0.4, 0.0, 0.3, 1.0}) {
        CHECK(legendre_P(0, d, t) == 1.0);
        CHECK(legendre_P(1, d, t) == t);
        CHECK(legendre_P(2, d, t) ==
              doctest::Approx(((d + 1) * t * t - 1.0) / d).epsilon(1e-14));
      }
      CHECK(legendre_P(17, d, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }

  TEST_CASE("legendre orthogonality under the sphere weight") {
    for (int d : {2, 3}) {
      // theta substitution keeps the weight smooth at the endpoints
      auto weighted = [&](int k, int j) {
        return integrate(
            [&](double th) {
              double t = std::cos(th);
              return legendre_P(k, d, t) * legendre_P(j, d, t) *
                     std::pow(std::sin(th), d - 1);
            },
            0.0, M_PI, 1e-13, {}, 16);
      };
      CHECK(std::abs(weighted(3, 5)) <= 1e-12);
      // \int P_k^2 w dt = (omega_d / omega_{d-1}) / N(d,k)
      for (int k : {1, 2, 4}) {
        double want = 1.0 / (omega_ratio(d) * double(harmonic_dim(d, k)));
        CHECK(weighted(k, k) == doctest::Approx(want).epsilon(1e-10));
      }
    }
  }

  TEST_CASE("harmonic space dimensions") {
    for (int d : {1, 2, 3, 7}) CHECK(harmonic_dim(d, 1) == d + 1);
    for (int k = 1; k <= 10; ++k) CHECK(harmonic_dim(2, k) == 2 * k + 1);
    CHECK(harmonic_dim(3, 2) == 9);
    CHECK(harmonic_dim(5, 0) == 1);
    CHECK_THROWS_AS(harmonic_dim(200, 150), std::overflow_error);
  }

  TEST_CASE("printed d=1 Fourier coefficients, quadrature route") {
    struct Case {
      int alpha, k;
      double want;
    };
    const Case cases[] = {{0, 0, 0.5},          {0, 1, 1.0 / M_PI},
                          {1, 0, 1.0 / M_PI},   {1, 1, 0.25},
                          {1, 2, 1.0 / (3 * M_PI)}, {2, 0, 0.25},
                          {2, 1, 2.0 / (3 * M_PI)}, {2, 2, 0.125}};
    for (const auto& c : cases) {
      CHECK(lambda_quadrature(1, c.alpha, c.k) == doctest::Approx(c.want).epsilon(1e-10));
      CHECK(lambda_fourier(c.alpha, c.k) == doctest::Approx(c.want).epsilon(1e-12));
    }
  }

  TEST_CASE("batch table matches the adaptive quadrature") {
    for (int d : {1, 2, 3, 5}) {
      for (int alpha : {0, 1, 2}) {
        auto tab = lambda_table(d, alpha, 40);
        for (int k = 0; k <= 40; k += 5)
          CHECK(tab[size_t(k)] ==
                doctest::Approx(lambda_quadrature(d, alpha, k)).epsilon(1e-11).scale(1.0));
      }
    }
  }

  TEST_CASE("parity law: zero coefficients above alpha at matching parity") {
    for (int d : {1, 2, 3, 5}) {
      for (int alpha : {0, 1, 2}) {
        for (int k = alpha + 2; k <= 40; k += 2)
          CHECK(std::abs(lambda_quadrature(d, alpha, k)) <= 1e-10);
        for (int k = alpha + 1; k <= 39; k += 2)
          CHECK(std::abs(lambda_quadrature(d, alpha, k)) > 1e-10);
      }
    }
  }

  TEST_CASE("decay exponent of the coefficients") {
    // slope fitted with a 1/k correction over k in [20, 80]; the plain
    // regression is still pre-asymptotic at d = 5.
    for (int d : {1, 2, 3, 5}) {
      for (int alpha : {0, 1, 2}) {
        auto tab = lambda_table(d, alpha, 80);
        std::vector<double> ks, ys;
        for (int k = 20; k <= 80; ++k) {
          if (k > alpha && (k - alpha) % 2 == 0) continue;
          ks.push_back(k);
          ys.push_back(std::log(std::abs(tab[size_t(k)])));
        }
        Eigen::MatrixXd X(ks.size(), 3);
        Eigen::VectorXd Y(ks.size());
        for (size_t i = 0; i < ks.size(); ++i) {
          X(Eigen::Index(i), 0) = 1.0;
          X(Eigen::Index(i), 1) = std::log(ks[i]);
          X(Eigen::Index(i), 2) = 1.0 / ks[i];
          Y[Eigen::Index(i)] = ys[i];
        }
        Eigen::VectorXd beta = (X.transpose() * X).ldlt().solve(X.transpose() * Y);
        CHECK(std::abs(beta[1] + (d / 2.0 + alpha + 0.5)) <= 0.1);
      }
    }
  }

  TEST_CASE("printed closed form is flagged against the quadrature") {
    // the (d-1)/(2pi) prefactor vanishes at d = 1 where the Fourier value is
    // 1/(3 pi); the flag records the disagreement instead of reconciling.
    ClosedLambda cl = lambda_closed(1, 1, 2);
    CHECK(cl.quadrature == doctest::Approx(1.0 / (3 * M_PI)).epsilon(1e-10));
    CHECK(cl.value == 0.0);
    CHECK(!cl.agrees_with_quadrature);

    // parity degrees are zero on both routes
    ClosedLambda pz = lambda_closed(3, 1, 5);
    CHECK(pz.zero_by_parity);
    CHECK(pz.agrees_with_quadrature);

    // at d = 3 the printed prefactor is half the Gamma-identity value
    ClosedLambda c3 = lambda_closed(3, 1, 2);
    CHECK(c3.value == doctest::Approx(0.5 * c3.quadrature).epsilon(1e-9));
    CHECK(!c3.agrees_with_quadrature);

    CHECK_THROWS_AS(lambda_closed(3, 1, 1), std::invalid_argument);
  }

  TEST_CASE("gamma2 of single-degree profiles") {
    for (int d : {1, 2, 3}) {
      for (int alpha : {0, 1, 2}) {
        auto res = gamma2_ridge(RidgeProfile::linear(), d, alpha, 120);
        CHECK(res.verdict == Gamma2Verdict::Converged);
        double l1 = lambda_quadrature(d, alpha, 1);
        CHECK(res.value ==
              doctest::Approx(1.0 / (std::sqrt(double(harmonic_dim(d, 1))) * l1))
                  .epsilon(1e-10));
      }
    }
    // phi = P_j collapses to a single term 1 / (N lambda_j^2)
    for (int d : {2, 3}) {
      for (int j : {2, 3}) {
        int alpha = j % 2 == 0 ? 1 : 0;  // pick alpha with lambda_j != 0
        auto res = gamma2_ridge(RidgeProfile::legendre(j, d), d, alpha, 120);
        CHECK(res.verdict == Gamma2Verdict::Converged);
        double lj = lambda_quadrature(d, alpha, j);
        CHECK(res.value ==
              doctest::Approx(1.0 / (std::sqrt(double(harmonic_dim(d, j))) * std::abs(lj)))
                  .epsilon(1e-9));
      }
    }
  }

  TEST_CASE("activation profile diverges with growing partial sums") {
    for (int d : {2, 3}) {
      for (int alpha : {0, 1, 2}) {
        double prev = 0;
        for (int K : {50, 100, 200}) {
          auto res = gamma2_ridge(RidgeProfile::relu_pow(alpha), d, alpha, K);
          CHECK(res.verdict == Gamma2Verdict::Diverging);
          double S = res.value * res.value;
          CHECK(S > prev * 1.5);
          prev = S;
        }
      }
    }
  }

  TEST_CASE("profiles with mass on zero-lambda degrees are flagged") {
    // odd profile t under alpha = 1 requires even parity: P_3 has lambda = 0
    auto res = gamma2_ridge(RidgeProfile::legendre(3, 2), 2, 1, 80);
    CHECK(res.verdict == Gamma2Verdict::ParityViolation);
  }

  TEST_CASE("poisson approximant basics") {
    // bandlimited profile: finite series, error -> 0 as r -> 1
    std::vector<double> c(6, 0.0);
    c[1] = 0.3;
    c[3] = 0.1;
    RidgeProfile prof = RidgeProfile::from_coeffs(c, -1);
    double prev_err = 1e300;
    for (double r : {0.9, 0.99, 0.999}) {
      auto res = poisson_approximant(prof, 2, 0, r, 50, 2000);
      CHECK(res.sup_error <= prev_err + 1e-15);
      prev_err = res.sup_error;
    }
    CHECK(prev_err <= 1e-2);

    // gamma2 nondecreasing in r
    double prev_g = 0;
    for (double r : {0.3, 0.5, 0.7, 0.9}) {
      auto res = poisson_approximant(RidgeProfile::absolute(), 2, 1, r, 400, 2000);
      CHECK(res.gamma2 >= prev_g - 1e-12);
      prev_g = res.gamma2;
    }

    CHECK_THROWS_AS(poisson_approximant(RidgeProfile::linear(), 2, 1, 0.9, 100, 100),
                    std::invalid_argument);  // odd profile, alpha = 1 needs even
    CHECK_THROWS_AS(poisson_approximant(RidgeProfile::absolute(), 2, 1, 1.0, 100, 100),
                    std::invalid_argument);  // r must be < 1
  }

  TEST_CASE("poisson sup error scales like (1-r) log(1/(1-r)) for |t| at d=1") {
    std::vector<double> xs, ys;
    for (double r : {0.9, 0.95, 0.98, 0.99, 0.995, 0.999}) {
      auto res = poisson_approximant(RidgeProfile::absolute(), 1, 1, r, 4000, 20000);
      xs.push_back((1 - r) * std::log(1.0 / (1 - r)));
      ys.push_back(res.sup_error);
    }
    double slope = loglog_slope(xs, ys);
    CHECK(slope >= 0.8);
    CHECK(slope <= 1.2);
  }

  TEST_CASE("kernel series: truncation tails shrink") {
    for (int d : {2, 3}) {
      for (int alpha : {0, 1, 2}) {
        double s20 = kernel_series(d, alpha, 20, 0.3);
        double s40 = kernel_series(d, alpha, 40, 0.3);
        double s80 = kernel_series(d, alpha, 80, 0.3);
        CHECK(std::abs(s40 - s80) <= std::abs(s20 - s40) + 1e-12);
      }
    }
  }

  TEST_CASE("kernel series spot values on the sphere") {
    // alpha=1, d=3, u=1 with the on-sphere lift factor 2: 1/(d+1)
    double s = kernel_series(3, 1, 60, 1.0);
    CHECK(2.0 * s == doctest::Approx(1.0 / 4.0).epsilon(1e-5));
    // alpha=0, u=0: (pi - pi/2) / (2 pi) = 1/4
    for (int d : {2, 3, 4})
      CHECK(kernel_series(d, 0, 400, 0.0) == doctest::Approx(0.25).epsilon(1e-5));
  }
}
