#include <doctest.h>

#include <Eigen/Dense>
#include <cstdio>
#include <filesystem>

#include "convexnn/io.hpp"
#include "convexnn/rng.hpp"
#include "convexnn/synth.hpp"

using namespace convexnn;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) {
    path = (std::filesystem::temp_directory_path() / name).string();
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_SUITE("synth_io") {
  TEST_CASE("noise-free affine targets reproduce w.x + b") {
    SynthConfig cfg;
    cfg.target = TargetKind::Affine;
    cfg.n = 5;
    cfg.d = 3;
    cfg.noise = 0.0;
    SynthResult res = synth_dataset(cfg, 7);
    for (int i = 0; i < 5; ++i)
      CHECK(res.data.ys[i] == doctest::Approx(res.target(res.data.xs.row(i))).epsilon(1e-14));
  }

  TEST_CASE("synthesis is seed-deterministic") {
    SynthConfig cfg;
    cfg.target = TargetKind::SingleIndex;
    cfg.n = 20;
    cfg.d = 4;
    SynthResult a = synth_dataset(cfg, 99);
    SynthResult b = synth_dataset(cfg, 99);
    CHECK((a.data.xs - b.data.xs).lpNorm<Eigen::Infinity>() == 0.0);
    CHECK((a.data.ys - b.data.ys).lpNorm<Eigen::Infinity>() == 0.0);
    SynthResult c = synth_dataset(cfg, 100);
    CHECK((a.data.ys - c.data.ys).lpNorm<Eigen::Infinity>() > 0.0);
  }

  TEST_CASE("single-index targets are nonnegative") {
    SynthConfig cfg;
    cfg.target = TargetKind::SingleIndex;
    cfg.n = 50;
    cfg.d = 3;
    cfg.noise = 0.0;
    SynthResult res = synth_dataset(cfg, 3);
    for (int i = 0; i < 50; ++i) CHECK(res.data.ys[i] >= 0.0);
  }

  TEST_CASE("dataset CSV round trip") {
    Rng rng(5);
    Eigen::MatrixXd xs(7, 2);
    Eigen::VectorXd ys(7);
    for (int i = 0; i < 7; ++i) {
      xs.row(i) = rng.ball(2, 1.0);
      ys[i] = rng.gaussian();
    }
    Dataset data(xs, ys, 1.0, 2.0);
    TempFile f("convexnn_test_data.csv");
    write_dataset_csv(f.path, data);
    Dataset back = read_dataset_csv(f.path, 1.0, 2.0);
    CHECK((back.xs - data.xs).lpNorm<Eigen::Infinity>() == 0.0);
    CHECK((back.ys - data.ys).lpNorm<Eigen::Infinity>() == 0.0);
  }

  TEST_CASE("model JSON round trip is bit-faithful") {
    Rng rng(7);
    SignedMeasureModel m;
    m.alpha = 1;
    m.p = 2.0;
    m.R = 1.25;
    for (int j = 0; j < 6; ++j) m.units.push_back({rng.gaussian(), Unit(rng.sphere(3), 2.0)});
    SignedMeasureModel back = model_from_json(model_to_json(m));
    REQUIRE(back.units.size() == m.units.size());
    CHECK(back.R == m.R);
    for (size_t j = 0; j < m.units.size(); ++j) {
      CHECK(back.units[j].eta == m.units[j].eta);
      CHECK((back.units[j].unit.v - m.units[j].unit.v).lpNorm<Eigen::Infinity>() == 0.0);
    }
    Rng probe(11);
    for (int t = 0; t < 1000; ++t) {
      Eigen::VectorXd x = probe.ball(2, 1.0);
      CHECK(back.predict(x) == m.predict(x));
    }
  }

  TEST_CASE("model JSON rejects bad input") {
    CHECK_THROWS_AS(model_from_json("{ not json"), io_error);
    CHECK_THROWS_AS(model_from_json(R"({"alpha":1,"p":2.0,"R":1.0})"), io_error);
    CHECK_THROWS_AS(
        model_from_json(R"({"version":2,"alpha":1,"p":2.0,"R":1.0,"units":[]})"), io_error);
    // version-free files are treated as version 1
    SignedMeasureModel ok =
        model_from_json(R"({"alpha":1,"p":2.0,"R":1.0,"units":[]})");
    CHECK(ok.units.empty());
  }

  TEST_CASE("body JSON round trips") {
    Rng rng(13);
    Zonotope Z;
    Z.generators.resize(4, 2);
    for (int i = 0; i < 4; ++i) Z.generators.row(i) = rng.gaussian_vector(2);
    Zonotope zb = zonotope_from_json(zonotope_to_json(Z));
    CHECK((zb.generators - Z.generators).lpNorm<Eigen::Infinity>() == 0.0);

    Ellipsoid E{rng.gaussian_vector(2), Eigen::MatrixXd::Identity(2, 2) * 2.5};
    Ellipsoid eb = ellipsoid_from_json(ellipsoid_to_json(E));
    CHECK((eb.center - E.center).lpNorm<Eigen::Infinity>() == 0.0);
    CHECK((eb.shape - E.shape).lpNorm<Eigen::Infinity>() == 0.0);
    CHECK(json_is_ellipsoid(ellipsoid_to_json(E)));
    CHECK(!json_is_ellipsoid(zonotope_to_json(Z)));
  }

  TEST_CASE("adaptivity experiment rows are reproducible and CSV stable") {
    ExperimentConfig cfg;
    cfg.synth.target = TargetKind::SingleIndex;
    cfg.synth.d = 3;
    cfg.n_grid = {60};
    cfg.replicates = 3;
    cfg.test_size = 500;
    cfg.steps = 10;
    cfg.restarts = 4;
    cfg.restart_iters = 60;
    cfg.seed = 12;
    auto rows1 = run_adaptivity(cfg);
    auto rows2 = run_adaptivity(cfg);
    REQUIRE(rows1.size() == rows2.size());
    for (size_t i = 0; i < rows1.size(); ++i) {
      CHECK(rows1[i].mean_risk == rows2[i].mean_risk);
      CHECK(rows1[i].se == rows2[i].se);
    }
    std::string csv1 = experiment_csv(rows1, false);
    std::string csv2 = experiment_csv(rows2, false);
    CHECK(csv1 == csv2);
    CHECK(csv1.find("family,n,mean_risk,se") == 0);
  }

  TEST_CASE("l1 input weights win on sparse targets in high dimension") {
    // q-sparse single index with d >> n; the l1-sphere variant of the unit
    // class should beat the dense one on most replicates.
    ExperimentConfig cfg;
    cfg.synth.target = TargetKind::SparseSingleIndex;
    cfg.synth.d = 200;
    cfg.synth.q = std::numeric_limits<double>::infinity();
    cfg.synth.sparsity = 3;
    cfg.n_grid = {100};
    cfg.replicates = 6;
    cfg.test_size = 1500;
    cfg.seed = 99;
    cfg.steps = 20;
    cfg.restarts = 5;
    cfg.restart_iters = 100;
    cfg.run_f2_rf = false;
    cfg.delta_scale = 3.0;
    cfg.p = 1.0;
    auto sparse_rows = run_adaptivity(cfg);
    cfg.p = 2.0;
    auto dense_rows = run_adaptivity(cfg);
    int wins = 0;
    for (int r = 0; r < cfg.replicates; ++r)
      if (sparse_rows[0].replicate_risks[size_t(r)] <
          dense_rows[0].replicate_risks[size_t(r)])
        ++wins;
    CHECK(double(wins) >= 0.7 * cfg.replicates);
  }

  TEST_CASE("risk decreases with n for both families on an affine target") {
    ExperimentConfig cfg;
    cfg.synth.target = TargetKind::Affine;
    cfg.synth.d = 2;
    cfg.n_grid = {30, 300};
    cfg.replicates = 4;
    cfg.test_size = 800;
    cfg.steps = 12;
    cfg.restarts = 4;
    cfg.restart_iters = 80;
    cfg.seed = 5;
    auto rows = run_adaptivity(cfg);
    // rows: (f1, n=30), (f2rf, n=30), (f1, n=300), (f2rf, n=300)
    REQUIRE(rows.size() == 4);
    CHECK(rows[2].mean_risk < rows[0].mean_risk);
    CHECK(rows[3].mean_risk < rows[1].mean_risk);
  }
}
