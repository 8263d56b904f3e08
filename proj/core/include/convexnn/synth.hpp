#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "convexnn/model.hpp"

namespace convexnn {

enum class TargetKind { Affine, SingleIndex, SparseSingleIndex, ProjectionPursuit, MultiIndex };

TargetKind parse_target(const std::string& name);

struct SynthConfig {
  TargetKind target = TargetKind::SingleIndex;
  int n = 100;
  int d = 2;
  double R = 1.0;
  double q = 2.0;      // 2 or inf (box)
  double noise = -1.0;  // < 0: 0.1 * std(f*) on the sample
  int k = 2;            // projection-pursuit components
  int s = 2;            // multi-index subspace dimension
  int sparsity = 3;     // nonzeros of sparse targets
};

struct SynthResult {
  Dataset data;
  std::function<double(const Eigen::VectorXd&)> target;  // noise-free f*
  double noise_sigma = 0.0;
};

// x uniform on the lq ball (q = 2) or the l_inf box (q = inf); y = f*(x) +
// sigma * gaussian; the target parameters are drawn from the same seed, so a
// (config, seed) pair pins the dataset byte-for-byte.
SynthResult synth_dataset(const SynthConfig& config, std::uint64_t seed);

struct ExperimentConfig {
  SynthConfig synth;
  std::vector<int> n_grid{100};
  int replicates = 10;
  int test_size = 10000;
  std::uint64_t seed = 0;

  bool run_f1 = true;
  bool run_f2_rf = true;
  bool run_f2_kernel = false;

  int alpha = 1;
  double p = 2.0;
  double delta_scale = 2.0;  // gamma_1 budget = delta_scale * R
  int steps = 50;
  int restarts = 8;
  int restart_iters = 120;
  std::vector<double> lambda_grid{1e-7, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1};
};

struct ExperimentRow {
  std::string family;
  int n = 0;
  double mean_risk = 0.0;
  double se = 0.0;
  std::vector<double> replicate_risks;
};

// Trains each family at each n over seeded replicates and evaluates the mean
// squared error against the noise-free target on a held-out grid; replicates
// run in parallel with per-replicate seeds.
std::vector<ExperimentRow> run_adaptivity(const ExperimentConfig& config);

std::string experiment_csv(const std::vector<ExperimentRow>& rows, bool with_timestamp);

}  // namespace convexnn
