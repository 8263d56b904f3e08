#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "convexnn/arrangement.hpp"
#include "convexnn/model.hpp"

namespace convexnn {

enum class OracleStatus { Exact, Heuristic, Surrogate };

// A candidate unit direction for the step max_v |(1/n) sum_i g_i
// (v^T z_i / R)_+^alpha|, its objective value, and which of the g / -g sides
// attained it.
struct OracleResult {
  Unit unit;
  double value = 0.0;
  int sign = 1;
  OracleStatus status = OracleStatus::Heuristic;
  std::optional<double> kappa;
  bool converged = true;  // surrogate inner solver diagnostic
};

// (1/n) sum_i g_i (v^T z_i / R)_+^alpha. For alpha = 0 the strict indicator is
// evaluated with a small symmetric margin so that directions produced by the
// enumeration (which sit on hyperplanes up to rounding) keep their face
// semantics.
double oracle_objective(const Eigen::MatrixXd& Z, double R, int alpha,
                        const Eigen::VectorXd& g, const Eigen::VectorXd& v,
                        double margin_tol = 1e-11);

// Exact maximizer over the unit lp-sphere, alpha in {0, 1}. p = 2 is the
// native case; alpha = 0 is norm-independent; alpha = 1 with p = 1 is solved
// by enumerating intersections of point hyperplanes with l1-ball facets.
// Construction enumerates the face lattice once so repeated solves against
// fresh g vectors are cheap.
class ExactOracle {
 public:
  struct Candidate {
    Eigen::VectorXd v;
    double value = 0.0;
    int sign = 1;
  };

  ExactOracle(Eigen::MatrixXd Z, double R, int alpha, double p = 2.0,
              double tol = 1e-9, std::int64_t budget = 4'000'000);

  OracleResult solve(const Eigen::VectorXd& g) const;

  // Every candidate visited for this g, unsorted; solve() returns the best of
  // these (lexicographically largest v among value ties).
  std::vector<Candidate> candidates(const Eigen::VectorXd& g) const;

  const std::vector<FacePattern>& faces() const { return faces_; }
  int alpha() const { return alpha_; }
  double p() const { return p_; }

 private:
  Eigen::MatrixXd Z_;
  double R_;
  int alpha_;
  double p_;
  double tol_;
  std::vector<FacePattern> faces_;      // p = 2 and alpha = 0 paths
  Eigen::MatrixXd l1_candidates_;       // rows: candidate v on the l1 sphere
};

struct RestartsOptions {
  int restarts = 50;
  std::uint64_t seed = 0;
  int iterations = 200;
};

// Best of `restarts` seeded projected-gradient ascents on the lp sphere (both
// g and -g sides), with a dual-maximizer polish. For alpha = 0 each restart is
// a random direction followed by hyperplane-crossing local search.
OracleResult oracle_restarts(const Eigen::MatrixXd& Z, double R,
                             const Eigen::VectorXd& g, int alpha, double p,
                             const RestartsOptions& opts);

struct SurrogateOptions {
  double regularization = 1e-8;
  int max_iter = 100;
  std::uint64_t seed = 0;
};

// Weighted logistic separator with weights |g_i| and labels sign(g_i),
// thresholded and re-evaluated on the true alpha = 0 objective.
OracleResult oracle_surrogate_alpha0(const Eigen::MatrixXd& Z, double R,
                                     const Eigen::VectorXd& g,
                                     const SurrogateOptions& opts);

using UnitOracle = std::function<OracleResult(const Eigen::VectorXd& g)>;

// Multiplicative kappa-approximate oracle built over an exact one: returns
// the worst visited candidate still within a 1/kappa factor of the maximum.
// kappa = 1 reproduces the exact oracle's choice.
UnitOracle kappa_wrap(std::shared_ptr<const ExactOracle> inner, double kappa);

struct OracleSpec {
  enum class Method { Exact, Restarts, Surrogate };
  Method method = Method::Exact;
  int restarts = 50;
  int iterations = 200;
  std::uint64_t seed = 0;
  double kappa = 1.0;  // > 1 wraps the exact oracle
};

UnitOracle make_oracle(const Eigen::MatrixXd& Z, double R, int alpha, double p,
                       const OracleSpec& spec);

OracleSpec::Method parse_oracle_method(const std::string& name);

}  // namespace convexnn
