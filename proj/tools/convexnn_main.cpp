#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <iostream>
#include <string>
#include <vector>

#include "convexnn/bounds.hpp"
#include "convexnn/fw.hpp"
#include "convexnn/geometry.hpp"
#include "convexnn/harmonics.hpp"
#include "convexnn/io.hpp"
#include "convexnn/kernels.hpp"
#include "convexnn/oracles.hpp"
#include "convexnn/relaxations.hpp"
#include "convexnn/synth.hpp"

using json = nlohmann::json;
using namespace convexnn;

namespace {

double parse_q(const std::string& s) {
  if (s == "inf" || s == "Inf" || s == "INF") return std::numeric_limits<double>::infinity();
  return std::stod(s);
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-")
    std::cout << text;
  else
    write_file(out_path, text);
}

std::string status_name(OracleStatus s) {
  switch (s) {
    case OracleStatus::Exact: return "exact";
    case OracleStatus::Heuristic: return "heuristic";
    case OracleStatus::Surrogate: return "surrogate";
  }
  return "?";
}

json oracle_result_json(const OracleResult& res) {
  json j;
  j["value"] = res.value;
  j["v"] = std::vector<double>(res.unit.v.data(), res.unit.v.data() + res.unit.v.size());
  j["sign"] = res.sign;
  j["status"] = status_name(res.status);
  if (res.kappa) j["kappa"] = *res.kappa;
  j["converged"] = res.converged;
  return j;
}

RidgeProfile profile_from_json(const std::string& text, int d) {
  json j = json::parse(text);
  std::string kind = j.value("kind", "");
  if (kind == "linear") return RidgeProfile::linear();
  if (kind == "abs") return RidgeProfile::absolute();
  if (kind == "relu") return RidgeProfile::relu_pow(j.value("alpha", 1));
  if (kind == "legendre") return RidgeProfile::legendre(j.at("degree").get<int>(), d);
  if (kind == "coeffs")
    return RidgeProfile::from_coeffs(j.at("c").get<std::vector<double>>(),
                                     j.value("parity", 0));
  throw io_error("profile JSON: unknown kind '" + kind + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"convex single-hidden-layer networks: training, oracles, geometry, spectra"};
  app.require_subcommand(1);

  std::string data_path, g_path, out_path, model_out, trace_out, a_path, b_path;
  std::string rule = "linesearch", loss_name = "sq", method = "exact", kind = "d";
  std::string target = "single-index", profile_path, config_path, x_path, y_path;
  double R = 1.0, delta = 2.0, lambda = 1e-6, tol = 1e-6, noise = -1.0, p = 2.0;
  double G = 1.0, c0 = 1.0, eps = 1.0;
  std::string q_str = "2";
  int alpha = 1, steps = 100, restarts = 50, seed = 0, m = 100, d_arg = 2, kmax = 40;
  int trials = 200, n_arg = 100, K_arg = 100, k_pp = 2, s_sub = 2, sparsity = 3;
  int replicates = 10, test_size = 10000;
  std::int64_t mc = 0;
  bool no_timestamp = false;
  std::string n_grid_str = "16,32,64,128", spectrum_method = "quad";

  auto add_data_opts = [&](CLI::App* c) {
    c->add_option("--data", data_path, "dataset CSV (header x1,...,xd,y)")->required();
    c->add_option("--R", R, "lq radius bound");
    c->add_option("--q", q_str, "input norm q in [2, inf]");
  };

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic dataset CSV");
  synth->add_option("--target", target, "affine|single-index|sparse-single-index|pp|multi-index");
  synth->add_option("--n", n_arg);
  synth->add_option("--d", d_arg);
  synth->add_option("--R", R);
  synth->add_option("--q", q_str);
  synth->add_option("--noise", noise, "noise sigma; negative = 0.1 std(f*)");
  synth->add_option("--k", k_pp);
  synth->add_option("--s", s_sub);
  synth->add_option("--sparsity", sparsity);
  synth->add_option("--seed", seed);
  synth->add_option("--out", out_path);

  // train
  auto* train = app.add_subcommand("train", "conditional-gradient training");
  add_data_opts(train);
  train->add_option("--alpha", alpha);
  train->add_option("--p", p);
  train->add_option("--delta", delta);
  train->add_option("--steps", steps);
  train->add_option("--rule", rule, "harmonic|linesearch|fc");
  train->add_option("--loss", loss_name, "sq|logistic|hinge");
  train->add_option("--oracle", method, "exact|restarts|surrogate");
  train->add_option("--restarts", restarts);
  train->add_option("--seed", seed);
  train->add_option("--model-out", model_out);
  train->add_option("--trace-out", trace_out);
  train->add_flag("--no-timestamp", no_timestamp);

  // f2
  auto* f2 = app.add_subcommand("f2", "l2-penalized baseline (kernel or random features)");
  add_data_opts(f2);
  f2->add_option("--method", method, "kernel|rf");
  f2->add_option("--alpha", alpha);
  f2->add_option("--m", m);
  f2->add_option("--lambda", lambda);
  f2->add_option("--seed", seed);
  f2->add_option("--model-out", model_out, "JSON model (rf method only)");
  f2->add_option("--out", out_path, "JSON report");

  // oracle
  auto* orc = app.add_subcommand("oracle", "one incremental-unit step");
  add_data_opts(orc);
  orc->add_option("--g", g_path, "residual vector CSV")->required();
  orc->add_option("--alpha", alpha);
  orc->add_option("--p", p);
  orc->add_option("--method", method, "exact|restarts|surrogate");
  orc->add_option("--restarts", restarts);
  orc->add_option("--seed", seed);
  orc->add_option("--out", out_path);

  // hausdorff
  auto* hd = app.add_subcommand("hausdorff", "Hausdorff distance between convex bodies");
  hd->add_option("--kind", kind, "zonotope|ellipsoid")->required();
  hd->add_option("--a", a_path)->required();
  hd->add_option("--b", b_path)->required();
  hd->add_option("--q", q_str);
  hd->add_option("--out", out_path);

  // kernel
  auto* ker = app.add_subcommand("kernel", "closed-form kernel values (optionally MC)");
  ker->add_option("--alpha", alpha);
  ker->add_option("--d", d_arg);
  ker->add_option("--R", R);
  ker->add_option("--mc", mc, "Monte-Carlo sample count (0 = closed form only)");
  ker->add_option("--seed", seed);
  ker->add_option("x", x_path, "CSV of points (rows)")->required();
  ker->add_option("y", y_path, "CSV of points (rows)")->required();
  ker->add_option("--out", out_path);

  // spectrum
  auto* spec_cmd = app.add_subcommand("spectrum", "Funk-Hecke coefficients lambda_k");
  spec_cmd->add_option("--d", d_arg);
  spec_cmd->add_option("--alpha", alpha);
  spec_cmd->add_option("--kmax", kmax);
  spec_cmd->add_option("--method", spectrum_method, "quad|closed|fourier");
  spec_cmd->add_option("--out", out_path);

  // gamma2
  auto* g2 = app.add_subcommand("gamma2", "gamma_2 norm of a ridge profile");
  g2->add_option("--profile", profile_path)->required();
  g2->add_option("--d", d_arg);
  g2->add_option("--alpha", alpha);
  g2->add_option("--K", K_arg);
  g2->add_option("--out", out_path);

  // relax
  auto* rx = app.add_subcommand("relax", "convex lifting of the step problem");
  add_data_opts(rx);
  rx->add_option("--g", g_path)->required();
  rx->add_option("--kind", kind, "d|nd|sign");
  rx->add_option("--tol", tol);
  rx->add_option("--out", out_path);

  // relax-scaling
  auto* rs = app.add_subcommand("relax-scaling", "random-direction scaling diagnostic");
  rs->add_option("--kind", kind, "d|nd|sign|exact");
  rs->add_option("--n", n_grid_str, "comma-separated n grid");
  rs->add_option("--d", d_arg);
  rs->add_option("--trials", trials);
  rs->add_option("--seed", seed);
  rs->add_flag("--no-timestamp", no_timestamp);
  rs->add_option("--out", out_path);

  // radbound / radmc
  auto* rb = app.add_subcommand("radbound", "uniform-deviation bound");
  rb->add_option("--G", G);
  rb->add_option("--delta", delta);
  rb->add_option("--n", n_arg);
  rb->add_option("--p", p);
  rb->add_option("--d", d_arg);
  rb->add_option("--alpha", alpha);
  rb->add_option("--c0", c0);
  rb->add_option("--out", out_path);

  auto* rm = app.add_subcommand("radmc", "Monte-Carlo estimate of the sign complexity");
  add_data_opts(rm);
  rm->add_option("--alpha", alpha);
  rm->add_option("--p", p);
  rm->add_option("--trials", trials);
  rm->add_option("--seed", seed);
  rm->add_option("--c0", c0);
  rm->add_option("--out", out_path);

  // experiment
  auto* ex = app.add_subcommand("experiment", "adaptivity study (F1 vs F2)");
  ex->add_option("--config", config_path, "JSON config")->required();
  ex->add_flag("--no-timestamp", no_timestamp);
  ex->add_option("--out", out_path);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*synth) {
      SynthConfig cfg;
      cfg.target = parse_target(target);
      cfg.n = n_arg;
      cfg.d = d_arg;
      cfg.R = R;
      cfg.q = parse_q(q_str);
      cfg.noise = noise;
      cfg.k = k_pp;
      cfg.s = s_sub;
      cfg.sparsity = sparsity;
      SynthResult res = synth_dataset(cfg, std::uint64_t(seed));
      if (out_path.empty()) throw std::invalid_argument("synth: --out is required");
      write_dataset_csv(out_path, res.data);
    } else if (*train) {
      Dataset data = read_dataset_csv(data_path, R, parse_q(q_str));
      FWConfig cfg;
      cfg.delta = delta;
      cfg.steps = steps;
      cfg.rule = parse_step_rule(rule);
      cfg.alpha = alpha;
      cfg.p = p;
      cfg.oracle.method = parse_oracle_method(method);
      cfg.oracle.restarts = restarts;
      cfg.oracle.seed = std::uint64_t(seed);
      cfg.seed = std::uint64_t(seed);
      Loss loss = parse_loss(loss_name, eps);
      if (loss_name == "hinge") cfg.smoothing_c = 1.0;
      auto [model, trace] = fw_train(data, loss, cfg);
      if (!model_out.empty()) save_model(model_out, model);
      if (!trace_out.empty()) write_trace_csv(trace_out, trace, !no_timestamp);
      json j;
      j["final_risk"] = trace.final_risk;
      j["units"] = model.units.size();
      j["gamma1"] = model.variation_norm();
      j["aborted"] = trace.aborted;
      if (trace.aborted) j["abort_reason"] = trace.abort_reason;
      emit(out_path, j.dump(2) + "\n");
      if (trace.aborted) return 3;
    } else if (*f2) {
      Dataset data = read_dataset_csv(data_path, R, parse_q(q_str));
      F2Options opt;
      opt.method = method == "rf" ? F2Options::Method::RandomFeatures
                                  : F2Options::Method::Kernel;
      opt.alpha = alpha;
      opt.m = m;
      opt.lambda = lambda;
      opt.seed = std::uint64_t(seed);
      F2Predictor pred = f2_estimate(data, opt);
      double train_mse = 0;
      for (Eigen::Index i = 0; i < data.n(); ++i) {
        double r = pred(data.xs.row(i)) - data.ys[i];
        train_mse += r * r;
      }
      train_mse /= double(data.n());
      if (!model_out.empty() && pred.is_random_features())
        save_model(model_out, pred.as_model());
      json j;
      j["train_mse"] = train_mse;
      j["rkhs_norm"] = pred.rkhs_norm();
      j["lambda"] = pred.lambda_used();
      emit(out_path, j.dump(2) + "\n");
    } else if (*orc) {
      Dataset data = read_dataset_csv(data_path, R, parse_q(q_str));
      Eigen::VectorXd g = read_vector_csv(g_path);
      require(g.size() == data.n(), "oracle: |g| != n");
      OracleSpec spec;
      spec.method = parse_oracle_method(method);
      spec.restarts = restarts;
      spec.seed = std::uint64_t(seed);
      UnitOracle oracle = make_oracle(data.augmented(), data.R, alpha, p, spec);
      OracleResult res = oracle(g);
      emit(out_path, oracle_result_json(res).dump(2) + "\n");
      if (!res.converged) return 4;
    } else if (*hd) {
      double dist = 0;
      if (kind == "zonotope") {
        Zonotope A = zonotope_from_json(read_file(a_path));
        Zonotope B = zonotope_from_json(read_file(b_path));
        dist = zonotope_hausdorff(A, B, parse_q(q_str));
      } else if (kind == "ellipsoid") {
        Ellipsoid A = ellipsoid_from_json(read_file(a_path));
        Ellipsoid B = ellipsoid_from_json(read_file(b_path));
        dist = ellipsoid_hausdorff(A, B);
      } else {
        throw std::invalid_argument("hausdorff: kind must be zonotope or ellipsoid");
      }
      json j;
      j["distance"] = dist;
      emit(out_path, j.dump(2) + "\n");
    } else if (*ker) {
      KernelSpec spec{alpha, d_arg, R};
      auto read_points = [&](const std::string& path) {
        std::string text = read_file(path);
        std::vector<std::vector<double>> rows;
        std::stringstream ss(text);
        std::string line;
        while (std::getline(ss, line)) {
          if (line.empty()) continue;
          if (!line.empty() && line.back() == '\r') line.pop_back();
          std::vector<double> row;
          std::stringstream ls(line);
          std::string cell;
          bool numeric = true;
          while (std::getline(ls, cell, ',')) {
            try {
              size_t pos = 0;
              row.push_back(std::stod(cell, &pos));
              if (pos != cell.size()) numeric = false;
            } catch (...) {
              numeric = false;
            }
          }
          if (!numeric) continue;  // header line
          rows.push_back(std::move(row));
        }
        if (rows.empty()) throw io_error("no points in '" + path + "'");
        Eigen::MatrixXd M(Eigen::Index(rows.size()), Eigen::Index(rows[0].size()));
        for (size_t i = 0; i < rows.size(); ++i) {
          require(int(rows[i].size()) == d_arg, "kernel: point dimension != --d");
          for (size_t c = 0; c < rows[i].size(); ++c)
            M(Eigen::Index(i), Eigen::Index(c)) = rows[i][c];
        }
        return M;
      };
      Eigen::MatrixXd X = read_points(x_path);
      Eigen::MatrixXd Y = read_points(y_path);
      std::ostringstream out;
      out << (mc > 0 ? "i,j,k,mc,se\n" : "i,j,k\n");
      for (Eigen::Index i = 0; i < X.rows(); ++i) {
        for (Eigen::Index j = 0; j < Y.rows(); ++j) {
          double kv = kernel(spec, X.row(i), Y.row(j));
          out << i << "," << j << "," << format_double(kv);
          if (mc > 0) {
            auto [est, se] = kernel_mc(spec, X.row(i), Y.row(j), mc, std::uint64_t(seed));
            out << "," << format_double(est) << "," << format_double(se);
          }
          out << "\n";
        }
      }
      emit(out_path, out.str());
    } else if (*spec_cmd) {
      std::ostringstream out;
      out << "k,lambda,provenance\n";
      if (spectrum_method == "quad") {
        for (int k = 0; k <= kmax; ++k)
          out << k << "," << format_double(lambda_quadrature(d_arg, alpha, k))
              << ",quadrature\n";
      } else if (spectrum_method == "fourier") {
        require(d_arg == 1, "spectrum: fourier method requires d = 1");
        for (int k = 0; k <= kmax; ++k)
          out << k << "," << format_double(lambda_fourier(alpha, k)) << ",fourier\n";
      } else if (spectrum_method == "closed") {
        out.str("");
        out << "k,lambda,provenance,quadrature,agrees\n";
        for (int k = alpha + 1; k <= kmax; ++k) {
          ClosedLambda cl = lambda_closed(d_arg, alpha, k);
          out << k << "," << format_double(cl.value)
              << (cl.zero_by_parity ? ",closed-parity-zero," : ",closed,")
              << format_double(cl.quadrature) << ","
              << (cl.agrees_with_quadrature ? "yes" : "no") << "\n";
        }
      } else {
        throw std::invalid_argument("spectrum: method must be quad|closed|fourier");
      }
      emit(out_path, out.str());
    } else if (*g2) {
      RidgeProfile profile = profile_from_json(read_file(profile_path), d_arg);
      Gamma2Result res = gamma2_ridge(profile, d_arg, alpha, K_arg);
      json j;
      j["verdict"] = res.verdict == Gamma2Verdict::Converged    ? "converged"
                     : res.verdict == Gamma2Verdict::Diverging ? "diverging"
                                                               : "parity-violation";
      if (res.verdict == Gamma2Verdict::Converged) j["value"] = res.value;
      json ps = json::array();
      for (auto& [k, s] : res.partial_sums) ps.push_back({{"K", k}, {"S", s}});
      j["partial_sums"] = ps;
      emit(out_path, j.dump(2) + "\n");
    } else if (*rx) {
      Dataset data = read_dataset_csv(data_path, R, parse_q(q_str));
      Eigen::VectorXd g = read_vector_csv(g_path);
      require(g.size() == data.n(), "relax: |g| != n");
      RelaxOptions opts;
      opts.tol = tol;
      RelaxReport rep = solve_relaxation(parse_relax_kind(kind), data.augmented(),
                                         data.R, g, opts);
      json j;
      j["value"] = rep.value;
      j["max_residual"] = rep.max_residual;
      j["converged"] = rep.converged;
      j["iterations"] = rep.iterations;
      j["min_eigenvalue"] = rep.min_eigenvalue;
      j["trace_error"] = rep.trace_error;
      emit(out_path, j.dump(2) + "\n");
      if (!rep.converged) return 4;
    } else if (*rs) {
      std::vector<int> grid;
      {
        std::stringstream ss(n_grid_str);
        std::string tok;
        while (std::getline(ss, tok, ',')) grid.push_back(std::stoi(tok));
      }
      ScalingTable table =
          random_direction_scaling(kind, grid, d_arg, trials, std::uint64_t(seed));
      std::ostringstream out;
      if (!no_timestamp) out << "# slope fitted below\n";
      out << "n,mean,se\n";
      for (auto& row : table.rows)
        out << row.n << "," << format_double(row.mean) << ","
            << format_double(row.stderr_) << "\n";
      out << "# slope," << format_double(table.slope) << "\n";
      emit(out_path, out.str());
    } else if (*rb) {
      BoundSpec spec{G, delta, n_arg, p, d_arg, alpha, c0};
      json j;
      j["bound"] = rademacher_bound(spec);
      j["C"] = complexity_constant(spec);
      j["mc_reference_bound"] = rademacher_mc_bound(spec);
      emit(out_path, j.dump(2) + "\n");
    } else if (*rm) {
      Dataset data = read_dataset_csv(data_path, R, parse_q(q_str));
      auto [est, se] = rademacher_mc(data, alpha, p, trials, std::uint64_t(seed));
      BoundSpec spec{1.0, 1.0, int(data.n()), p, int(data.d()), alpha, c0};
      json j;
      j["estimate"] = est;
      j["se"] = se;
      j["bound"] = rademacher_mc_bound(spec);
      emit(out_path, j.dump(2) + "\n");
    } else if (*ex) {
      json cfg_json = json::parse(read_file(config_path));
      ExperimentConfig cfg;
      cfg.synth.target = parse_target(cfg_json.value("target", "single-index"));
      cfg.synth.d = cfg_json.value("d", 10);
      cfg.synth.R = cfg_json.value("R", 1.0);
      cfg.synth.q = cfg_json.value("q_inf", false)
                        ? std::numeric_limits<double>::infinity()
                        : 2.0;
      cfg.synth.noise = cfg_json.value("noise", -1.0);
      cfg.synth.k = cfg_json.value("k", 2);
      cfg.synth.s = cfg_json.value("s", 2);
      cfg.synth.sparsity = cfg_json.value("sparsity", 3);
      if (cfg_json.contains("n_grid"))
        cfg.n_grid = cfg_json["n_grid"].get<std::vector<int>>();
      cfg.replicates = cfg_json.value("replicates", 10);
      cfg.test_size = cfg_json.value("test_size", 10000);
      cfg.seed = cfg_json.value("seed", 0);
      cfg.run_f1 = cfg_json.value("run_f1", true);
      cfg.run_f2_rf = cfg_json.value("run_f2_rf", true);
      cfg.run_f2_kernel = cfg_json.value("run_f2_kernel", false);
      cfg.alpha = cfg_json.value("alpha", 1);
      cfg.p = cfg_json.value("p", 2.0);
      cfg.delta_scale = cfg_json.value("delta_scale", 2.0);
      cfg.steps = cfg_json.value("steps", 50);
      cfg.restarts = cfg_json.value("restarts", 8);
      auto rows = run_adaptivity(cfg);
      emit(out_path, experiment_csv(rows, !no_timestamp));
    }
  } catch (const budget_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const convergence_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
