#include "convexnn/synth.hpp"

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <sstream>

#include "convexnn/fw.hpp"
#include "convexnn/io.hpp"
#include "convexnn/kernels.hpp"
#include "convexnn/parallel.hpp"
#include "convexnn/rng.hpp"

namespace convexnn {

TargetKind parse_target(const std::string& name) {
  if (name == "affine") return TargetKind::Affine;
  if (name == "single-index") return TargetKind::SingleIndex;
  if (name == "sparse-single-index") return TargetKind::SparseSingleIndex;
  if (name == "pp" || name == "projection-pursuit") return TargetKind::ProjectionPursuit;
  if (name == "multi-index") return TargetKind::MultiIndex;
  throw std::invalid_argument("unknown target '" + name + "'");
}

namespace {

Eigen::VectorXd sample_point(Rng& rng, const SynthConfig& cfg) {
  if (std::isinf(cfg.q)) {
    Eigen::VectorXd x(cfg.d);
    for (int c = 0; c < cfg.d; ++c) x[c] = rng.uniform(-cfg.R, cfg.R);
    return x;
  }
  require(cfg.q == 2.0, "synth_dataset: q must be 2 or inf");
  return rng.ball(cfg.d, cfg.R);
}

std::function<double(const Eigen::VectorXd&)> make_target(Rng& rng,
                                                          const SynthConfig& cfg) {
  switch (cfg.target) {
    case TargetKind::Affine: {
      Eigen::VectorXd w = rng.sphere(cfg.d);
      double b = 0.3 * cfg.R;
      return [w, b](const Eigen::VectorXd& x) { return w.dot(x) + b; };
    }
    case TargetKind::SingleIndex: {
      Eigen::VectorXd w = rng.sphere(cfg.d);
      return [w](const Eigen::VectorXd& x) { return std::max(0.0, w.dot(x)); };
    }
    case TargetKind::SparseSingleIndex: {
      Eigen::VectorXd w = Eigen::VectorXd::Zero(cfg.d);
      int nz = std::min(cfg.sparsity, cfg.d);
      std::vector<int> idx(static_cast<size_t>(cfg.d));
      for (int i = 0; i < cfg.d; ++i) idx[size_t(i)] = i;
      for (int i = 0; i < nz; ++i) {  // Fisher-Yates prefix
        int j = i + int(rng.below(std::uint64_t(cfg.d - i)));
        std::swap(idx[size_t(i)], idx[size_t(j)]);
      }
      for (int i = 0; i < nz; ++i) w[idx[size_t(i)]] = rng.gaussian();
      w.normalize();
      return [w](const Eigen::VectorXd& x) { return std::max(0.0, w.dot(x)); };
    }
    case TargetKind::ProjectionPursuit: {
      std::vector<Eigen::VectorXd> ws;
      for (int j = 0; j < cfg.k; ++j) ws.push_back(rng.sphere(cfg.d));
      return [ws](const Eigen::VectorXd& x) {
        double s = 0;
        for (const auto& w : ws) s += std::max(0.0, w.dot(x));
        return s;
      };
    }
    case TargetKind::MultiIndex: {
      Eigen::MatrixXd G(cfg.d, cfg.s);
      for (int i = 0; i < cfg.d; ++i)
        for (int j = 0; j < cfg.s; ++j) G(i, j) = rng.gaussian();
      Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
      Eigen::MatrixXd W = Eigen::MatrixXd(qr.householderQ()).leftCols(cfg.s);
      return [W](const Eigen::VectorXd& x) { return (W.transpose() * x).norm(); };
    }
  }
  throw std::invalid_argument("synth: unknown target kind");
}

}  // namespace

SynthResult synth_dataset(const SynthConfig& cfg, std::uint64_t seed) {
  require(cfg.n >= 1 && cfg.d >= 1, "synth_dataset: bad sizes");
  Rng rng(seed);
  auto target = make_target(rng, cfg);
  Eigen::MatrixXd xs(cfg.n, cfg.d);
  Eigen::VectorXd clean(cfg.n);
  for (int i = 0; i < cfg.n; ++i) {
    Eigen::VectorXd x = sample_point(rng, cfg);
    xs.row(i) = x;
    clean[i] = target(x);
  }
  double sigma = cfg.noise;
  if (sigma < 0) {
    double mean = clean.mean();
    double var = (clean.array() - mean).square().sum() / std::max(1, cfg.n - 1);
    sigma = 0.1 * std::sqrt(var);
  }
  Eigen::VectorXd ys = clean;
  for (int i = 0; i < cfg.n; ++i) ys[i] += sigma * rng.gaussian();
  return {Dataset(std::move(xs), std::move(ys), cfg.R, cfg.q), target, sigma};
}

namespace {

double test_risk(const std::function<double(const Eigen::VectorXd&)>& predict,
                 const Eigen::MatrixXd& test_xs, const Eigen::VectorXd& test_f) {
  double s = 0;
  for (Eigen::Index i = 0; i < test_xs.rows(); ++i) {
    double r = predict(test_xs.row(i)) - test_f[i];
    s += r * r;
  }
  return s / double(test_xs.rows());
}

}  // namespace

std::vector<ExperimentRow> run_adaptivity(const ExperimentConfig& cfg) {
  std::vector<std::string> families;
  if (cfg.run_f1) families.push_back("f1-fw");
  if (cfg.run_f2_rf) families.push_back("f2-rf");
  if (cfg.run_f2_kernel) families.push_back("f2-kernel");

  std::vector<ExperimentRow> rows;
  for (int n : cfg.n_grid) {
    std::vector<std::vector<double>> risks(families.size(),
                                           std::vector<double>(static_cast<size_t>(cfg.replicates), 0.0));
    parallel_chunks(cfg.replicates, 1, [&](int, std::int64_t lo, std::int64_t hi) {
      for (std::int64_t rep = lo; rep < hi; ++rep) {
        std::uint64_t rep_seed =
            cfg.seed ^ (0x9e3779b97f4a7c15ULL * (std::uint64_t(rep) + 17)) ^
            (0xbf58476d1ce4e5b9ULL * std::uint64_t(n));
        SynthConfig scfg = cfg.synth;
        scfg.n = n;
        SynthResult train = synth_dataset(scfg, rep_seed);

        Rng test_rng(rep_seed ^ 0x5851f42d4c957f2dULL);
        Eigen::MatrixXd test_xs(cfg.test_size, scfg.d);
        Eigen::VectorXd test_f(cfg.test_size);
        for (int i = 0; i < cfg.test_size; ++i) {
          Eigen::VectorXd x = sample_point(test_rng, scfg);
          test_xs.row(i) = x;
          test_f[i] = train.target(x);
        }

        // Validation split (last 20%) for the ridge families.
        int n_val = std::max(1, n / 5);
        int n_tr = n - n_val;
        Dataset train_part(train.data.xs.topRows(n_tr), train.data.ys.head(n_tr),
                           scfg.R, scfg.q);
        Eigen::MatrixXd val_xs = train.data.xs.bottomRows(n_val);
        Eigen::VectorXd val_ys = train.data.ys.tail(n_val);

        for (size_t fi = 0; fi < families.size(); ++fi) {
          const std::string& fam = families[fi];
          if (fam == "f1-fw") {
            FWConfig fw;
            fw.delta = cfg.delta_scale * scfg.R;
            fw.steps = cfg.steps;
            fw.rule = StepRule::FullyCorrective;
            fw.alpha = cfg.alpha;
            fw.p = cfg.p;
            fw.oracle.method = OracleSpec::Method::Restarts;
            fw.oracle.restarts = cfg.restarts;
            fw.oracle.iterations = cfg.restart_iters;
            fw.oracle.seed = rep_seed ^ 0xa0761d6478bd642fULL;
            auto [model, trace] = fw_train(train.data, Loss::squared(), fw);
            risks[fi][size_t(rep)] = test_risk(
                [&](const Eigen::VectorXd& x) { return model.predict(x); }, test_xs,
                test_f);
          } else {
            F2Options opt;
            opt.method = fam == "f2-rf" ? F2Options::Method::RandomFeatures
                                        : F2Options::Method::Kernel;
            opt.alpha = cfg.alpha;
            opt.m = cfg.steps;  // unit-count budget matched to FW
            opt.seed = rep_seed ^ 0xd6e8feb86659fd93ULL;
            double best_val = std::numeric_limits<double>::infinity();
            F2Predictor best;
            for (double lam : cfg.lambda_grid) {
              opt.lambda = lam;
              F2Predictor pred = f2_estimate(train_part, opt);
              double v = 0;
              for (Eigen::Index i = 0; i < val_xs.rows(); ++i) {
                double r = pred(val_xs.row(i)) - val_ys[i];
                v += r * r;
              }
              if (v < best_val) {
                best_val = v;
                best = pred;
              }
            }
            risks[fi][size_t(rep)] = test_risk(
                [&](const Eigen::VectorXd& x) { return best(x); }, test_xs, test_f);
          }
        }
      }
    });
    for (size_t fi = 0; fi < families.size(); ++fi) {
      ExperimentRow row;
      row.family = families[fi];
      row.n = n;
      double mean = 0;
      for (double v : risks[fi]) mean += v;
      mean /= cfg.replicates;
      double var = 0;
      for (double v : risks[fi]) var += (v - mean) * (v - mean);
      var /= std::max(1, cfg.replicates - 1);
      row.mean_risk = mean;
      row.se = std::sqrt(var / cfg.replicates);
      row.replicate_risks = risks[fi];
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::string experiment_csv(const std::vector<ExperimentRow>& rows, bool with_timestamp) {
  std::ostringstream out;
  if (with_timestamp) {
    auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[64];
    std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&now));
    out << "# generated " << buf << "\n";
  }
  out << "family,n,mean_risk,se\n";
  for (const auto& r : rows)
    out << r.family << "," << r.n << "," << format_double(r.mean_risk) << ","
        << format_double(r.se) << "\n";
  return out.str();
}

}  // namespace convexnn
