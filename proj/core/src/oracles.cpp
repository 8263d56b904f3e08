#include "convexnn/oracles.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "convexnn/common.hpp"
#include "convexnn/rng.hpp"

namespace convexnn {

namespace {

bool lex_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (a[i] > b[i]) return false;
  }
  return false;
}

Eigen::VectorXd lp_normalize(const Eigen::VectorXd& v, double p) {
  double nrm = lq_norm(v, p);
  if (nrm <= 0) return v;
  return v / nrm;
}

// argmax_{||v||_p = 1} v^T c
Eigen::VectorXd lp_dual_maximizer(const Eigen::VectorXd& c, double p) {
  if (p == 1.0) {
    Eigen::Index j = 0;
    c.cwiseAbs().maxCoeff(&j);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(c.size());
    v[j] = c[j] >= 0 ? 1.0 : -1.0;
    return v;
  }
  if (p == 2.0) return c.normalized();
  double q = p / (p - 1.0);
  Eigen::VectorXd v(c.size());
  for (Eigen::Index i = 0; i < c.size(); ++i)
    v[i] = (c[i] >= 0 ? 1.0 : -1.0) * std::pow(std::abs(c[i]), q - 1.0);
  return lp_normalize(v, p);
}

double positive_part_pow(double u, int alpha) {
  if (alpha == 0) return u > 0 ? 1.0 : 0.0;
  if (u <= 0) return 0.0;
  if (alpha == 1) return u;
  return std::pow(u, alpha);
}

}  // namespace

double oracle_objective(const Eigen::MatrixXd& Z, double R, int alpha,
                        const Eigen::VectorXd& g, const Eigen::VectorXd& v,
                        double margin_tol) {
  const Eigen::Index n = Z.rows();
  double s = 0;
  if (alpha == 0) {
    const double scale = std::max(1e-300, Z.cwiseAbs().maxCoeff()) * v.norm();
    for (Eigen::Index i = 0; i < n; ++i)
      if (Z.row(i).dot(v) > margin_tol * scale) s += g[i];
  } else {
    for (Eigen::Index i = 0; i < n; ++i)
      s += g[i] * positive_part_pow(Z.row(i).dot(v) / R, alpha);
  }
  return s / double(n);
}

ExactOracle::ExactOracle(Eigen::MatrixXd Z, double R, int alpha, double p,
                         double tol, std::int64_t budget)
    : Z_(std::move(Z)), R_(R), alpha_(alpha), p_(p), tol_(tol) {
  require(alpha_ == 0 || alpha_ == 1, "ExactOracle: alpha must be 0 or 1");
  require(p_ >= 1.0 && p_ <= 2.0, "ExactOracle: p must be in [1, 2]");
  require(R_ > 0, "ExactOracle: R must be positive");
  const Eigen::Index n = Z_.rows();
  const Eigen::Index D = Z_.cols();
  if (alpha_ == 1 && p_ == 1.0) {
    // Plane pool: n point hyperplanes (v.z = 0) plus 2^D l1 facets
    // (sigma.v = 1). Maxima of the piecewise-linear objective over the l1
    // sphere sit where D pool planes meet.
    const Eigen::Index facets = Eigen::Index(1) << D;
    if (face_enumeration_work(n + facets, D + 1) > budget)
      throw budget_error("ExactOracle: l1 plane-pool budget exceeded");
    Eigen::MatrixXd pool(n + facets, D + 1);  // [normal | rhs]
    pool.block(0, 0, n, D) = Z_;
    pool.col(D).setZero();
    for (Eigen::Index f = 0; f < facets; ++f) {
      for (Eigen::Index j = 0; j < D; ++j)
        pool(n + f, j) = (f >> j) & 1 ? 1.0 : -1.0;
      pool(n + f, D) = 1.0;
    }
    std::vector<Eigen::VectorXd> cands;
    std::vector<Eigen::Index> idx(static_cast<size_t>(D));
    for (Eigen::Index i = 0; i < D; ++i) idx[size_t(i)] = i;
    const Eigen::Index m = pool.rows();
    while (true) {
      Eigen::MatrixXd A(D, D);
      Eigen::VectorXd b(D);
      bool any_facet = false;
      for (Eigen::Index r = 0; r < D; ++r) {
        A.row(r) = pool.block(idx[size_t(r)], 0, 1, D);
        b[r] = pool(idx[size_t(r)], D);
        any_facet = any_facet || b[r] != 0.0;
      }
      if (any_facet) {
        Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
        if (lu.isInvertible()) {
          Eigen::VectorXd v = lu.solve(b);
          double nrm = v.lpNorm<1>();
          if (std::abs(nrm - 1.0) <= 1e-6 && nrm > 0) cands.push_back(v / nrm);
        }
      }
      Eigen::Index pos = D - 1;
      while (pos >= 0 && idx[size_t(pos)] == m - D + pos) --pos;
      if (pos < 0) break;
      ++idx[size_t(pos)];
      for (Eigen::Index j = pos + 1; j < D; ++j) idx[size_t(j)] = idx[size_t(j - 1)] + 1;
    }
    l1_candidates_.resize(Eigen::Index(cands.size()), D);
    for (size_t i = 0; i < cands.size(); ++i) l1_candidates_.row(Eigen::Index(i)) = cands[i];
  } else {
    require(alpha_ == 0 || p_ == 2.0, "ExactOracle: alpha = 1 needs p in {1, 2}");
    faces_ = enumerate_faces(Z_, tol, budget);
  }
}

std::vector<ExactOracle::Candidate> ExactOracle::candidates(const Eigen::VectorXd& g) const {
  require(g.size() == Z_.rows(), "ExactOracle: |g| != n");
  const Eigen::Index n = Z_.rows();
  std::vector<Candidate> out;

  if (alpha_ == 1 && p_ == 1.0) {
    out.reserve(size_t(l1_candidates_.rows()));
    for (Eigen::Index r = 0; r < l1_candidates_.rows(); ++r) {
      Eigen::VectorXd v = l1_candidates_.row(r);
      double s = oracle_objective(Z_, R_, alpha_, g, v);
      out.push_back({v, std::abs(s), s >= 0 ? 1 : -1});
    }
    return out;
  }

  if (alpha_ == 0) {
    out.reserve(faces_.size());
    const double zscale = std::max(1e-300, Z_.cwiseAbs().maxCoeff());
    for (const auto& f : faces_) {
      double s = 0;
      Eigen::VectorXd rep = Eigen::VectorXd::Zero(Z_.cols());
      for (Eigen::Index i = 0; i < n; ++i) {
        if (f.sign[size_t(i)] > 0) s += g[i];
        rep += double(f.sign[size_t(i)]) * Z_.row(i).transpose();
      }
      s /= double(n);
      // Prefer the clean representative sum(sign_i z_i) when it realizes the
      // face; fall back to the enumeration witness.
      Eigen::VectorXd v = f.witness;
      if (rep.norm() > tol_ * zscale) {
        Eigen::VectorXd r2 = rep.normalized();
        bool ok = true;
        for (Eigen::Index i = 0; i < n && ok; ++i) {
          double t = Z_.row(i).dot(r2);
          int sgn = std::abs(t) <= tol_ * zscale ? 0 : (t > 0 ? 1 : -1);
          ok = sgn == int(f.sign[size_t(i)]);
        }
        if (ok) v = r2;
      }
      if (v.norm() == 0) continue;  // all-zero face carries value 0 anyway
      v = lp_normalize(v, p_);
      out.push_back({v, std::abs(s), s >= 0 ? 1 : -1});
    }
    // Value-0 fallback so ties and g = 0 have a canonical answer.
    Eigen::VectorXd e1 = Eigen::VectorXd::Zero(Z_.cols());
    e1[0] = 1.0;
    out.push_back({e1, std::abs(oracle_objective(Z_, R_, 0, g, e1)),
                   oracle_objective(Z_, R_, 0, g, e1) >= 0 ? 1 : -1});
    return out;
  }

  // alpha = 1, p = 2: for the face (T = zeros, A = plus set) the cell optimum
  // is the projection of c_A = sum_{i in A} g_i z_i onto null(Z_T).
  out.reserve(2 * faces_.size() + 1);
  for (const auto& f : faces_) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(Z_.cols());
    std::vector<Eigen::Index> zeros;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (f.sign[size_t(i)] > 0) c += g[i] * Z_.row(i).transpose();
      if (f.sign[size_t(i)] == 0) zeros.push_back(i);
    }
    if (!zeros.empty()) {
      Eigen::MatrixXd ZT(Z_.cols(), Eigen::Index(zeros.size()));
      for (size_t j = 0; j < zeros.size(); ++j) ZT.col(Eigen::Index(j)) = Z_.row(zeros[j]).transpose();
      Eigen::HouseholderQR<Eigen::MatrixXd> qr(ZT);
      Eigen::MatrixXd Q = Eigen::MatrixXd(qr.householderQ())
                              .leftCols(std::min<Eigen::Index>(ZT.cols(), Z_.cols()));
      c -= Q * (Q.transpose() * c);
    }
    double nrm = c.norm();
    if (nrm <= 1e-300) continue;
    for (int s : {+1, -1}) {
      Eigen::VectorXd v = (s / nrm) * c;
      double val = oracle_objective(Z_, R_, 1, g, v);
      out.push_back({v, std::abs(val), val >= 0 ? 1 : -1});
    }
  }
  Eigen::VectorXd e1 = Eigen::VectorXd::Zero(Z_.cols());
  e1[0] = 1.0;
  double v0 = oracle_objective(Z_, R_, 1, g, e1);
  out.push_back({e1, std::abs(v0), v0 >= 0 ? 1 : -1});
  return out;
}

OracleResult ExactOracle::solve(const Eigen::VectorXd& g) const {
  auto cands = candidates(g);
  require(!cands.empty(), "ExactOracle: no candidates");
  double best = 0.0;
  for (const auto& c : cands) best = std::max(best, c.value);
  const double tie = 1e-12 * std::max(1.0, best);
  const Candidate* pick = nullptr;
  for (const auto& c : cands) {
    if (c.value + tie < best) continue;
    if (!pick || lex_less(pick->v, c.v)) pick = &c;
  }
  OracleResult res;
  res.unit = Unit(lp_normalize(pick->v, p_), p_);
  res.value = pick->value;
  res.sign = pick->sign;
  res.status = OracleStatus::Exact;
  return res;
}

namespace {

// Hyperplane-crossing local search for the alpha = 0 objective.
void alpha0_local_search(const Eigen::MatrixXd& Z, double R, const Eigen::VectorXd& g,
                         Eigen::VectorXd& v, double& val) {
  const Eigen::Index n = Z.rows();
  bool improved = true;
  int guard = 0;
  while (improved && guard++ < 4 * n) {
    improved = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      Eigen::VectorXd zi = Z.row(i).transpose();
      double zn = zi.norm();
      if (zn <= 0) continue;
      Eigen::VectorXd zh = zi / zn;
      Eigen::VectorXd base = v - v.dot(zh) * zh;
      if (base.norm() < 1e-12) continue;
      for (double side : {+1.0, -1.0}) {
        Eigen::VectorXd cand = (base + side * 1e-7 * base.norm() * zh).normalized();
        double cv = std::abs(oracle_objective(Z, R, 0, g, cand));
        if (cv > val + 1e-15) {
          val = cv;
          v = cand;
          improved = true;
        }
      }
    }
  }
}

}  // namespace

OracleResult oracle_restarts(const Eigen::MatrixXd& Z, double R,
                             const Eigen::VectorXd& g, int alpha, double p,
                             const RestartsOptions& opts) {
  require(opts.restarts >= 1, "oracle_restarts: restarts must be >= 1");
  require(alpha >= 0, "oracle_restarts: alpha must be >= 0");
  const Eigen::Index D = Z.cols();
  Rng root(opts.seed);

  Eigen::VectorXd best_v = Eigen::VectorXd::Zero(D);
  best_v[0] = 1.0;
  double best_val = std::abs(oracle_objective(Z, R, alpha, g, best_v));
  int best_sign = oracle_objective(Z, R, alpha, g, best_v) >= 0 ? 1 : -1;

  auto consider = [&](const Eigen::VectorXd& v) {
    double s = oracle_objective(Z, R, alpha, g, v);
    double a = std::abs(s);
    if (a > best_val + 1e-15 ||
        (std::abs(a - best_val) <= 1e-15 && lex_less(best_v, v))) {
      best_val = a;
      best_v = v;
      best_sign = s >= 0 ? 1 : -1;
    }
  };

  for (int r = 0; r < opts.restarts; ++r) {
    Rng rng = root.fork(std::uint64_t(r));
    Eigen::VectorXd v = lp_normalize(rng.sphere(int(D)), p);
    if (alpha == 0) {
      double val = std::abs(oracle_objective(Z, R, 0, g, v));
      alpha0_local_search(Z, R, g, v, val);
      consider(v);
      continue;
    }
    for (double side : {+1.0, -1.0}) {
      Eigen::VectorXd h = side * g;
      Eigen::VectorXd w = v;
      double fw = oracle_objective(Z, R, alpha, h, w);
      double step = 0.5;
      for (int it = 0; it < opts.iterations && step > 1e-14; ++it) {
        Eigen::VectorXd grad = Eigen::VectorXd::Zero(D);
        for (Eigen::Index i = 0; i < Z.rows(); ++i) {
          double u = Z.row(i).dot(w) / R;
          if (u > 0) grad += h[i] * alpha * std::pow(u, alpha - 1) / R * Z.row(i).transpose();
        }
        double gn = grad.norm();
        if (gn <= 1e-16) break;
        Eigen::VectorXd cand = lp_normalize(w + step * grad / gn, p);
        double fc = oracle_objective(Z, R, alpha, h, cand);
        if (fc > fw) {
          w = cand;
          fw = fc;
          step *= 1.3;
        } else {
          step *= 0.5;
        }
      }
      // Dual-maximizer polish: jump to the lp-optimal direction for the
      // current active set while it keeps improving, then probe the
      // neighboring cells obtained by toggling one point's activity.
      auto active_candidate = [&](const Eigen::VectorXd& vv, Eigen::Index toggle) {
        Eigen::VectorXd c = Eigen::VectorXd::Zero(D);
        for (Eigen::Index i = 0; i < Z.rows(); ++i) {
          double u = Z.row(i).dot(vv);
          bool on = u > 0;
          if (i == toggle) on = !on;
          if (on) c += h[i] * std::pow(std::max(u, 1e-12) / R, alpha - 1) *
                       Z.row(i).transpose();
        }
        return c;
      };
      bool improved = true;
      for (int round = 0; round < 8 && improved; ++round) {
        improved = false;
        for (int it = 0; it < 30; ++it) {
          Eigen::VectorXd c = active_candidate(w, -1);
          if (c.norm() <= 1e-300) break;
          Eigen::VectorXd cand = lp_dual_maximizer(c, p);
          double fc = oracle_objective(Z, R, alpha, h, cand);
          if (fc > fw + 1e-16) {
            w = cand;
            fw = fc;
            improved = true;
          } else {
            break;
          }
        }
        // Toggle candidates come from the smallest-margin points only; far
        // points never flip at a nearby optimum.
        std::vector<Eigen::Index> order(static_cast<size_t>(Z.rows()));
        for (Eigen::Index i = 0; i < Z.rows(); ++i) order[size_t(i)] = i;
        std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
          return std::abs(Z.row(a).dot(w)) < std::abs(Z.row(b).dot(w));
        });
        const Eigen::Index probe = std::min<Eigen::Index>(Z.rows(), 24);
        for (Eigen::Index oi = 0; oi < probe; ++oi) {
          Eigen::Index i = order[size_t(oi)];
          Eigen::VectorXd c = active_candidate(w, i);
          if (c.norm() <= 1e-300) continue;
          Eigen::VectorXd cand = lp_dual_maximizer(c, p);
          double fc = oracle_objective(Z, R, alpha, h, cand);
          if (fc > fw + 1e-16) {
            w = cand;
            fw = fc;
            improved = true;
          }
        }
        // Face polish: a maximizer may sit on hyperplanes; project the
        // active-set direction out of the smallest-margin points' span.
        if (improved) {
          std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
            return std::abs(Z.row(a).dot(w)) < std::abs(Z.row(b).dot(w));
          });
        }
        for (Eigen::Index tsize = 1; tsize < D && tsize <= Z.rows(); ++tsize) {
          Eigen::MatrixXd ZT(D, tsize);
          for (Eigen::Index j = 0; j < tsize; ++j) ZT.col(j) = Z.row(order[size_t(j)]).transpose();
          Eigen::VectorXd c = Eigen::VectorXd::Zero(D);
          for (Eigen::Index i = 0; i < Z.rows(); ++i) {
            bool in_T = false;
            for (Eigen::Index j = 0; j < tsize; ++j) in_T = in_T || order[size_t(j)] == i;
            if (in_T) continue;
            double u = Z.row(i).dot(w);
            if (u > 0) c += h[i] * std::pow(u / R, alpha - 1) * Z.row(i).transpose();
          }
          // Project c out of span(ZT) via the small normal equations.
          Eigen::MatrixXd Gram = ZT.transpose() * ZT;
          Gram.diagonal().array() += 1e-12 * Gram.trace();
          c -= ZT * Gram.ldlt().solve(ZT.transpose() * c);
          if (c.norm() <= 1e-300) continue;
          Eigen::VectorXd cand = lp_normalize(c, p);
          double fc = oracle_objective(Z, R, alpha, h, cand);
          if (fc > fw + 1e-16) {
            w = cand;
            fw = fc;
            improved = true;
          }
        }
      }
      consider(w);
    }
  }

  OracleResult res;
  res.unit = Unit(lp_normalize(best_v, p), p);
  res.value = best_val;
  res.sign = best_sign;
  res.status = OracleStatus::Heuristic;
  return res;
}

OracleResult oracle_surrogate_alpha0(const Eigen::MatrixXd& Z, double R,
                                     const Eigen::VectorXd& g,
                                     const SurrogateOptions& opts) {
  const Eigen::Index n = Z.rows();
  const Eigen::Index D = Z.cols();
  Eigen::VectorXd v = Eigen::VectorXd::Zero(D);
  bool converged = false;
  const double lam = std::max(opts.regularization, 1e-12);

  // Newton on the weighted logistic objective with labels sign(g).
  for (int it = 0; it < opts.max_iter; ++it) {
    Eigen::VectorXd grad = 2 * lam * v;
    Eigen::MatrixXd H = 2 * lam * Eigen::MatrixXd::Identity(D, D);
    for (Eigen::Index i = 0; i < n; ++i) {
      double w = std::abs(g[i]);
      if (w == 0) continue;
      double s = g[i] >= 0 ? 1.0 : -1.0;
      double m = s * Z.row(i).dot(v);
      double sig = 1.0 / (1.0 + std::exp(m));
      grad -= w * s * sig * Z.row(i).transpose();
      H += w * sig * (1.0 - sig) * Z.row(i).transpose() * Z.row(i);
    }
    if (grad.norm() <= 1e-10 * std::max(1.0, double(n))) {
      converged = true;
      break;
    }
    Eigen::VectorXd dir = H.ldlt().solve(-grad);
    v += dir;
  }
  if (v.norm() <= 1e-300) {
    v = Eigen::VectorXd::Zero(D);
    v[0] = 1.0;
  }
  v.normalize();

  double s_plus = oracle_objective(Z, R, 0, g, v);
  double s_minus = oracle_objective(Z, R, 0, g, Eigen::VectorXd(-v));
  OracleResult res;
  if (std::abs(s_minus) > std::abs(s_plus)) {
    res.unit = Unit(-v, 2.0);
    res.value = std::abs(s_minus);
    res.sign = s_minus >= 0 ? 1 : -1;
  } else {
    res.unit = Unit(v, 2.0);
    res.value = std::abs(s_plus);
    res.sign = s_plus >= 0 ? 1 : -1;
  }
  res.status = OracleStatus::Surrogate;
  res.converged = converged;
  return res;
}

UnitOracle kappa_wrap(std::shared_ptr<const ExactOracle> inner, double kappa) {
  require(kappa >= 1.0, "kappa_wrap: kappa must be >= 1");
  if (kappa == 1.0) {
    return [inner](const Eigen::VectorXd& g) -> OracleResult {
      OracleResult res = inner->solve(g);
      res.kappa = 1.0;
      return res;
    };
  }
  return [inner, kappa](const Eigen::VectorXd& g) -> OracleResult {
    auto cands = inner->candidates(g);
    double best = 0.0;
    for (const auto& c : cands) best = std::max(best, c.value);
    const double floor = best / kappa;
    const ExactOracle::Candidate* pick = nullptr;
    for (const auto& c : cands) {
      if (c.value + 1e-15 * std::max(1.0, best) < floor) continue;
      if (!pick || c.value < pick->value ||
          (c.value == pick->value && lex_less(pick->v, c.v)))
        pick = &c;
    }
    OracleResult res;
    res.unit = Unit(pick->v.normalized(), inner->p());
    res.value = pick->value;
    res.sign = pick->sign;
    res.status = OracleStatus::Exact;
    res.kappa = kappa;
    return res;
  };
}

UnitOracle make_oracle(const Eigen::MatrixXd& Z, double R, int alpha, double p,
                       const OracleSpec& spec) {
  switch (spec.method) {
    case OracleSpec::Method::Exact: {
      auto inner = std::make_shared<ExactOracle>(Z, R, alpha, p);
      if (spec.kappa > 1.0) return kappa_wrap(inner, spec.kappa);
      return [inner](const Eigen::VectorXd& g) { return inner->solve(g); };
    }
    case OracleSpec::Method::Restarts: {
      RestartsOptions opts{spec.restarts, spec.seed, spec.iterations};
      Eigen::MatrixXd Zc = Z;
      return [Zc, R, alpha, p, opts](const Eigen::VectorXd& g) {
        return oracle_restarts(Zc, R, g, alpha, p, opts);
      };
    }
    case OracleSpec::Method::Surrogate: {
      require(alpha == 0, "surrogate oracle requires alpha = 0");
      SurrogateOptions opts;
      opts.seed = spec.seed;
      Eigen::MatrixXd Zc = Z;
      return [Zc, R, opts](const Eigen::VectorXd& g) {
        return oracle_surrogate_alpha0(Zc, R, g, opts);
      };
    }
  }
  throw std::invalid_argument("make_oracle: unknown method");
}

OracleSpec::Method parse_oracle_method(const std::string& name) {
  if (name == "exact") return OracleSpec::Method::Exact;
  if (name == "restarts") return OracleSpec::Method::Restarts;
  if (name == "surrogate") return OracleSpec::Method::Surrogate;
  throw std::invalid_argument("unknown oracle method '" + name + "'");
}

}  // namespace convexnn
