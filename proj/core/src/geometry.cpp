#include "convexnn/geometry.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "convexnn/model.hpp"
#include "convexnn/rng.hpp"

namespace convexnn {

double support(const Zonotope& Z, const Eigen::VectorXd& w) {
  require(Z.dim() == w.size(), "support: dimension mismatch");
  double s = 0;
  for (Eigen::Index i = 0; i < Z.size(); ++i) s += std::max(0.0, Z.generators.row(i).dot(w));
  return s;
}

double support(const Ellipsoid& E, const Eigen::VectorXd& w) {
  require(E.center.size() == w.size(), "support: dimension mismatch");
  return E.center.dot(w) + std::sqrt(std::max(0.0, w.dot(E.shape * w)));
}

std::pair<double, Eigen::VectorXd> box_least_squares(const Eigen::MatrixXd& G,
                                                     const Eigen::VectorXd& c,
                                                     double tol, int max_iter) {
  const Eigen::Index r = G.rows();
  if (r == 0) return {c.norm(), Eigen::VectorXd(0)};
  Eigen::MatrixXd H = G * G.transpose();  // r x r
  Eigen::VectorXd q = G * c;
  double L = std::max(1e-300, Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(H)
                                  .eigenvalues()
                                  .maxCoeff());
  auto clip = [](Eigen::VectorXd b) {
    return b.cwiseMax(0.0).cwiseMin(1.0);
  };
  auto value = [&](const Eigen::VectorXd& b) {
    return (G.transpose() * b - c).norm();
  };

  Eigen::VectorXd b = clip(Eigen::VectorXd::Constant(r, 0.5));
  Eigen::VectorXd y = b;
  double t = 1.0;
  double prev = value(b);
  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXd g = H * y - q;
    Eigen::VectorXd bn = clip(y - g / L);
    double t2 = 0.5 * (1 + std::sqrt(1 + 4 * t * t));
    Eigen::VectorXd yn = bn + ((t - 1) / t2) * (bn - b);
    double val = value(bn);
    if (val > prev) {
      yn = bn;
      t2 = 1.0;
    }
    bool settled = std::abs(prev - val) <= 1e-14 * std::max(1.0, prev);
    b = bn;
    y = yn;
    t = t2;
    prev = val;
    if (settled && it > 64) break;
  }

  // Active-set polish: solve the free block exactly, then check KKT.
  for (int round = 0; round < 2 * int(r) + 4; ++round) {
    std::vector<Eigen::Index> free_idx;
    const double edge = 1e-9;
    for (Eigen::Index i = 0; i < r; ++i)
      if (b[i] > edge && b[i] < 1 - edge) free_idx.push_back(i);
    Eigen::VectorXd rhs = q;
    for (Eigen::Index i = 0; i < r; ++i)
      if (b[i] >= 1 - edge) rhs -= H.col(i);
    if (!free_idx.empty()) {
      Eigen::MatrixXd Hf(Eigen::Index(free_idx.size()), Eigen::Index(free_idx.size()));
      Eigen::VectorXd qf(Eigen::Index(free_idx.size()));
      for (size_t a = 0; a < free_idx.size(); ++a) {
        qf[Eigen::Index(a)] = rhs[free_idx[a]];
        for (size_t bb = 0; bb < free_idx.size(); ++bb)
          Hf(Eigen::Index(a), Eigen::Index(bb)) = H(free_idx[a], free_idx[bb]);
      }
      Eigen::VectorXd bf = Hf.ldlt().solve(qf);
      Eigen::VectorXd cand = b;
      for (size_t a = 0; a < free_idx.size(); ++a) cand[free_idx[a]] = bf[Eigen::Index(a)];
      cand = clip(cand);
      for (Eigen::Index i = 0; i < r; ++i)
        cand[i] = cand[i] >= 1 - edge ? 1.0 : (cand[i] <= edge ? 0.0 : cand[i]);
      if (value(cand) <= value(b) + 1e-15) b = cand;
    } else {
      for (Eigen::Index i = 0; i < r; ++i) b[i] = b[i] >= 0.5 ? 1.0 : 0.0;
    }
    Eigen::VectorXd g = H * b - q;
    bool kkt = true;
    Eigen::Index worst = -1;
    double worst_violation = tol * std::max(1.0, q.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < r; ++i) {
      double viol = 0;
      if (b[i] <= edge)
        viol = std::max(0.0, -g[i]);
      else if (b[i] >= 1 - edge)
        viol = std::max(0.0, g[i]);
      else
        viol = std::abs(g[i]);
      if (viol > worst_violation) {
        worst_violation = viol;
        worst = i;
        kkt = false;
      }
    }
    if (kkt) break;
    // Release the worst-violating coordinate and re-polish.
    b[worst] = std::min(1.0 - 2 * edge, std::max(2 * edge, b[worst] - g[worst] / L));
  }
  return {value(b), b};
}

namespace {

double dual_q(double q) {
  if (std::isinf(q)) return 1.0;
  if (q == 1.0) return std::numeric_limits<double>::infinity();
  return q / (q - 1.0);
}

// One side of the exact q = 2 Hausdorff: max over vertices of A of the
// distance to B (convex projection).
double one_sided_vertex_max(const Zonotope& A, const Zonotope& B) {
  const Eigen::Index rA = A.size();
  double best = 0;
  const std::uint64_t total = std::uint64_t(1) << rA;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    Eigen::VectorXd pt = Eigen::VectorXd::Zero(A.dim());
    for (Eigen::Index i = 0; i < rA; ++i)
      if ((mask >> i) & 1) pt += A.generators.row(i).transpose();
    best = std::max(best, box_least_squares(B.generators, pt).first);
  }
  return best;
}

}  // namespace

double zonotope_hausdorff(const Zonotope& A, const Zonotope& B, double q,
                          std::int64_t vertex_budget) {
  require(A.dim() == B.dim(), "zonotope_hausdorff: dimension mismatch");
  if (q == 2.0) {
    const std::int64_t work =
        (A.size() < 62 ? (std::int64_t(1) << A.size()) : std::numeric_limits<std::int64_t>::max() / 2) +
        (B.size() < 62 ? (std::int64_t(1) << B.size()) : std::numeric_limits<std::int64_t>::max() / 2);
    if (work > vertex_budget) {
      if (A.dim() <= 3) return hausdorff_by_sampling(A, B, q);
      throw budget_error("zonotope_hausdorff: vertex budget exceeded");
    }
    return std::max(one_sided_vertex_max(A, B), one_sided_vertex_max(B, A));
  }
  if (A.dim() > 3)
    throw budget_error("zonotope_hausdorff: q != 2 needs dim <= 3 (sampling oracle)");
  return hausdorff_by_sampling(A, B, q);
}

double fw_step_as_hausdorff(const Eigen::MatrixXd& Z, const Eigen::VectorXd& y,
                            double q) {
  require(Z.rows() == y.size(), "fw_step_as_hausdorff: |y| != n");
  std::vector<Eigen::Index> plus, minus;
  for (Eigen::Index i = 0; i < y.size(); ++i) (y[i] >= 0 ? plus : minus).push_back(i);
  Zonotope P, M;
  P.generators.resize(Eigen::Index(plus.size()), Z.cols());
  M.generators.resize(Eigen::Index(minus.size()), Z.cols());
  for (size_t i = 0; i < plus.size(); ++i)
    P.generators.row(Eigen::Index(i)) = std::abs(y[plus[i]]) * Z.row(plus[i]);
  for (size_t i = 0; i < minus.size(); ++i)
    M.generators.row(Eigen::Index(i)) = std::abs(y[minus[i]]) * Z.row(minus[i]);
  return zonotope_hausdorff(P, M, q);
}

namespace {

Eigen::VectorXd unit_dual_direction(const Eigen::VectorXd& w, double qdual) {
  double nrm = lq_norm(w, qdual);
  return nrm > 0 ? Eigen::VectorXd(w / nrm) : w;
}

template <typename Body>
double sampled_sup(const Body& A, const Body& B, double qdual, int grid, int dim) {
  auto f = [&](const Eigen::VectorXd& w) { return std::abs(support(A, w) - support(B, w)); };
  double best = 0;
  Eigen::VectorXd best_w;
  if (dim == 1) {
    for (double s : {1.0, -1.0}) {
      Eigen::VectorXd w(1);
      w << s;
      w = unit_dual_direction(w, qdual);
      if (f(w) > best) best = f(w);
    }
    return best;
  }
  if (dim == 2) {
    for (int i = 0; i < grid; ++i) {
      double th = 2 * M_PI * i / grid;
      Eigen::VectorXd w(2);
      w << std::cos(th), std::sin(th);
      w = unit_dual_direction(w, qdual);
      double v = f(w);
      if (v > best) {
        best = v;
        best_w = w;
      }
    }
    // Golden-section refinement around the best grid angle.
    double th0 = std::atan2(best_w[1], best_w[0]);
    double lo = th0 - 2 * M_PI / grid, hi = th0 + 2 * M_PI / grid;
    const double gr = (std::sqrt(5.0) - 1) / 2;
    auto fa = [&](double th) {
      Eigen::VectorXd w(2);
      w << std::cos(th), std::sin(th);
      return f(unit_dual_direction(w, qdual));
    };
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = fa(x1), f2 = fa(x2);
    for (int it = 0; it < 80; ++it) {
      if (f1 < f2) {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + gr * (hi - lo);
        f2 = fa(x2);
      } else {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - gr * (hi - lo);
        f1 = fa(x1);
      }
    }
    return std::max(best, std::max(f1, f2));
  }
  // dim == 3: Fibonacci sphere + shrinking local search.
  Rng rng(12345);
  std::vector<std::pair<double, Eigen::VectorXd>> top;
  const double golden = M_PI * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < grid; ++i) {
    double z = 1.0 - 2.0 * (i + 0.5) / grid;
    double rad = std::sqrt(std::max(0.0, 1 - z * z));
    double th = golden * i;
    Eigen::VectorXd w(3);
    w << rad * std::cos(th), rad * std::sin(th), z;
    w = unit_dual_direction(w, qdual);
    double v = f(w);
    top.push_back({v, w});
    if (v > best) best = v;
  }
  std::sort(top.begin(), top.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  const int keep = std::min<size_t>(12, top.size());
  for (int k = 0; k < keep; ++k) {
    Eigen::VectorXd w = top[size_t(k)].second;
    double val = top[size_t(k)].first;
    double radius = 4.0 / std::sqrt(double(grid));
    while (radius > 1e-10) {
      bool improved = false;
      for (int s = 0; s < 24; ++s) {
        Eigen::VectorXd cand = unit_dual_direction(
            Eigen::VectorXd(w + radius * rng.gaussian_vector(3)), qdual);
        double v = f(cand);
        if (v > val) {
          val = v;
          w = cand;
          improved = true;
        }
      }
      if (!improved) radius *= 0.5;
    }
    best = std::max(best, val);
  }
  return best;
}

}  // namespace

double hausdorff_by_sampling(const Zonotope& A, const Zonotope& B, double q, int grid) {
  require(A.dim() == B.dim() && A.dim() >= 1 && A.dim() <= 3,
          "hausdorff_by_sampling: dim must be in [1, 3]");
  return sampled_sup(A, B, dual_q(q), grid, int(A.dim()));
}

double hausdorff_by_sampling(const Ellipsoid& A, const Ellipsoid& B, int grid) {
  require(A.center.size() == B.center.size() && A.center.size() >= 1 &&
              A.center.size() <= 3,
          "hausdorff_by_sampling: dim must be in [1, 3]");
  return sampled_sup(A, B, 2.0, grid, int(A.center.size()));
}

SaddleResult alpha2_saddle(const Eigen::MatrixXd& Z, const Eigen::VectorXd& y,
                           int alpha, double q, const SaddleOptions& opts) {
  require(alpha >= 2, "alpha2_saddle: alpha must be >= 2");
  require(Z.rows() == y.size(), "alpha2_saddle: |y| != n");
  require(Z.rows() <= 12, "alpha2_saddle: n <= 12 (desk budget)");
  require(q == 2.0, "alpha2_saddle: only q = 2 implemented");
  const double beta = double(alpha) / double(alpha - 1);

  std::vector<Eigen::Index> plus, minus;
  for (Eigen::Index i = 0; i < y.size(); ++i) (y[i] >= 0 ? plus : minus).push_back(i);
  Eigen::MatrixXd Tp(Eigen::Index(plus.size()), Z.cols());
  Eigen::MatrixXd Tm(Eigen::Index(minus.size()), Z.cols());
  for (size_t i = 0; i < plus.size(); ++i)
    Tp.row(Eigen::Index(i)) = std::pow(std::abs(y[plus[i]]), 1.0 / alpha) * Z.row(plus[i]);
  for (size_t i = 0; i < minus.size(); ++i)
    Tm.row(Eigen::Index(i)) = std::pow(std::abs(y[minus[i]]), 1.0 / alpha) * Z.row(minus[i]);

  auto beta_term = [&](const Eigen::VectorXd& b) {
    double s = 0;
    for (Eigen::Index i = 0; i < b.size(); ++i) s += std::pow(std::max(0.0, b[i]), beta);
    return s / beta;
  };

  // Inner convex minimization over b- >= 0 for a fixed difference target.
  auto inner_min = [&](const Eigen::VectorXd& cp, Eigen::VectorXd& bm) {
    if (Tm.rows() == 0) {
      bm.resize(0);
      return cp.norm();
    }
    if (bm.size() != Tm.rows()) bm = Eigen::VectorXd::Zero(Tm.rows());
    double step = 1.0 / std::max(1e-12, Tm.squaredNorm());
    auto val = [&](const Eigen::VectorXd& b) {
      return (cp - Tm.transpose() * b).norm() + beta_term(b);
    };
    double cur = val(bm);
    for (int it = 0; it < opts.inner_iters; ++it) {
      Eigen::VectorXd diff = cp - Tm.transpose() * bm;
      double nd = std::max(diff.norm(), 1e-14);
      Eigen::VectorXd grad = -Tm * diff / nd;
      for (Eigen::Index i = 0; i < bm.size(); ++i)
        grad[i] += std::pow(std::max(0.0, bm[i]), beta - 1.0);
      Eigen::VectorXd cand = (bm - step * grad).cwiseMax(0.0);
      double cv = val(cand);
      if (cv < cur) {
        bm = cand;
        cur = cv;
        step *= 1.25;
      } else {
        step *= 0.5;
        if (step < 1e-16) break;
      }
    }
    return cur;
  };

  auto phi = [&](const Eigen::VectorXd& bp, Eigen::VectorXd& bm_ws) {
    Eigen::VectorXd cp = Tp.rows() ? Eigen::VectorXd(Tp.transpose() * bp)
                                   : Eigen::VectorXd(Eigen::VectorXd::Zero(Z.cols()));
    return inner_min(cp, bm_ws) - beta_term(bp);
  };

  Rng rng(opts.seed);
  double best = 0.0;  // bp = 0, bm = 0 is feasible with value 0
  bool converged = true;
  if (Tp.rows() == 0) return {0.0, true};

  for (int s = 0; s < opts.outer_starts; ++s) {
    Eigen::VectorXd bp(Tp.rows());
    for (Eigen::Index i = 0; i < bp.size(); ++i)
      bp[i] = s == 0 ? 1.0 : rng.uniform(0.0, 2.0);
    Eigen::VectorXd bm_ws;
    double cur = phi(bp, bm_ws);
    double step = 0.5;
    int it = 0;
    for (; it < opts.outer_iters && step > 1e-12; ++it) {
      // Danskin gradient at the inner minimizer.
      Eigen::VectorXd diff = Tp.transpose() * bp;
      if (Tm.rows()) diff -= Tm.transpose() * bm_ws;
      double nd = std::max(diff.norm(), 1e-14);
      Eigen::VectorXd grad = Tp * diff / nd;
      for (Eigen::Index i = 0; i < bp.size(); ++i)
        grad[i] -= std::pow(std::max(0.0, bp[i]), beta - 1.0);
      Eigen::VectorXd cand = (bp + step * grad).cwiseMax(0.0);
      Eigen::VectorXd bm_cand = bm_ws;
      double cv = phi(cand, bm_cand);
      if (cv > cur) {
        bp = cand;
        bm_ws = bm_cand;
        cur = cv;
        step *= 1.25;
      } else {
        step *= 0.5;
      }
    }
    if (it == opts.outer_iters) converged = false;
    best = std::max(best, cur);
  }
  return {best, converged};
}

Ellipsoid mvee(const Eigen::MatrixXd& points, double tol, int max_iter) {
  const Eigen::Index m = points.rows();
  const Eigen::Index d = points.cols();
  require(m >= d + 1, "mvee: need at least d+1 points");
  {
    Eigen::MatrixXd centered = points.rowwise() - points.colwise().mean();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered);
    double smax = svd.singularValues()[0];
    if (svd.singularValues()[d - 1] <= 1e-10 * std::max(1.0, smax))
      throw std::invalid_argument("mvee: points do not affinely span (rank deficient)");
  }

  Eigen::MatrixXd Q(m, d + 1);
  Q.leftCols(d) = points;
  Q.col(d).setOnes();
  Eigen::VectorXd u = Eigen::VectorXd::Constant(m, 1.0 / double(m));
  // Frank-Wolfe with away steps on the log-det problem (Todd-Yildirim);
  // the away direction is what makes tight tolerances reachable.
  for (int it = 0; it < max_iter; ++it) {
    Eigen::MatrixXd M = Q.transpose() * u.asDiagonal() * Q;
    Eigen::MatrixXd Minv = M.ldlt().solve(Eigen::MatrixXd::Identity(d + 1, d + 1));
    Eigen::Index j_add = 0, j_away = -1;
    double k_max = 0, k_min = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < m; ++i) {
      double k = Q.row(i) * Minv * Q.row(i).transpose();
      if (k > k_max) {
        k_max = k;
        j_add = i;
      }
      if (u[i] > 0 && k < k_min) {
        k_min = k;
        j_away = i;
      }
    }
    double eps_add = k_max / (d + 1) - 1.0;
    double eps_away = j_away >= 0 ? 1.0 - k_min / (d + 1) : 0.0;
    if (eps_add <= tol && eps_away <= tol) {
      Eigen::VectorXd c = points.transpose() * u;
      Eigen::MatrixXd S = points.transpose() * u.asDiagonal() * points - c * c.transpose();
      return {c, double(d) * S};
    }
    if (eps_add >= eps_away) {
      double step = (k_max - (d + 1)) / ((d + 1) * (k_max - 1.0));
      u *= (1.0 - step);
      u[j_add] += step;
    } else {
      double step = (k_min - (d + 1)) / ((d + 1) * (k_min - 1.0));  // negative
      step = std::max(step, -u[j_away] / (1.0 - u[j_away] + 1e-300));
      u *= (1.0 - step);
      u[j_away] += step;
      u = u.cwiseMax(0.0);
    }
  }
  throw convergence_error("mvee: did not reach tolerance");
}

namespace {

// max over ||u|| <= 1 of 0.5 u^T Q u + q^T u for PSD Q (attained on the
// sphere); secular-equation bisection on the multiplier with explicit
// hard-case handling when q is orthogonal to the top eigenspace.
double max_convex_quadratic_ball(const Eigen::MatrixXd& Q, const Eigen::VectorXd& q,
                                 Eigen::VectorXd* arg = nullptr) {
  const Eigen::Index d = Q.rows();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Q);
  const Eigen::VectorXd lam = eig.eigenvalues();  // ascending
  const Eigen::MatrixXd V = eig.eigenvectors();
  const double lmax = lam[d - 1];
  const Eigen::VectorXd qt = V.transpose() * q;
  const double qn = q.norm();
  const double top_tol = 1e-12 * std::max(1.0, std::abs(lmax));

  Eigen::VectorXd ut = Eigen::VectorXd::Zero(d);
  bool solved = false;

  double top_mass = 0.0;
  for (Eigen::Index i = 0; i < d; ++i)
    if (lmax - lam[i] <= top_tol) top_mass += qt[i] * qt[i];

  if (std::sqrt(top_mass) <= 1e-13 * std::max(1.0, qn)) {
    double n2 = 0;
    for (Eigen::Index i = 0; i < d; ++i) {
      if (lmax - lam[i] > top_tol) {
        ut[i] = qt[i] / (lmax - lam[i]);
        n2 += ut[i] * ut[i];
      }
    }
    if (n2 <= 1.0) {  // hard case: pad with the top eigenvector
      ut[d - 1] += std::sqrt(std::max(0.0, 1.0 - n2));
      solved = true;
    }
  }
  if (!solved) {
    auto norm2_at = [&](double nu) {
      double s = 0;
      for (Eigen::Index i = 0; i < d; ++i) {
        double den = std::max(nu - lam[i], 1e-300);
        s += (qt[i] / den) * (qt[i] / den);
      }
      return s;
    };
    double lo = lmax, hi = lmax + qn + 1e-12;
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      (norm2_at(mid) >= 1.0 ? lo : hi) = mid;
    }
    double nu = 0.5 * (lo + hi);
    for (Eigen::Index i = 0; i < d; ++i)
      ut[i] = qt[i] / std::max(nu - lam[i], 1e-300);
    double nrm = ut.norm();
    if (nrm > 0) ut /= nrm;
  }
  Eigen::VectorXd u = V * ut;
  if (arg) *arg = u;
  return 0.5 * u.dot(Q * u) + q.dot(u);
}

// sup_{x in E_A} dist(x, E_B): the multiplier form
// max_{lambda >= 0} -lambda/2 + (lambda/2) max_{||u||<=1}
//   (c0 + A^{1/2} u)^T (B + lambda I)^{-1} (c0 + A^{1/2} u).
double ellipsoid_one_sided(const Ellipsoid& A, const Ellipsoid& B, int grid) {
  const Eigen::Index d = A.center.size();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ea(A.shape), eb(B.shape);
  require(ea.eigenvalues().minCoeff() > 0 && eb.eigenvalues().minCoeff() > 0,
          "ellipsoid_hausdorff: shapes must be positive definite");
  Eigen::MatrixXd Asqrt = ea.eigenvectors() *
                          ea.eigenvalues().cwiseSqrt().asDiagonal() *
                          ea.eigenvectors().transpose();
  const Eigen::MatrixXd& UB = eb.eigenvectors();
  const Eigen::VectorXd db = eb.eigenvalues();
  const Eigen::VectorXd c0 = A.center - B.center;

  auto psi = [&](double lambda) {
    if (lambda <= 0) return 0.0;
    Eigen::VectorXd inv = (db.array() + lambda).inverse();
    Eigen::MatrixXd S = UB * inv.asDiagonal() * UB.transpose();
    Eigen::MatrixXd Qm = lambda * (Asqrt * S * Asqrt);
    Eigen::VectorXd qv = lambda * (Asqrt * (S * c0));
    double cst = 0.5 * lambda * c0.dot(S * c0);
    return -0.5 * lambda + cst + max_convex_quadratic_ball(Qm, qv);
  };

  double span = c0.norm() + std::sqrt(ea.eigenvalues().maxCoeff());
  double lam_hi = std::max(1e-9, (-db.minCoeff() + span * span) * 1.5 + 1e-9);
  double lam_lo = lam_hi * 1e-10;
  double best = 0.0;
  int best_i = -1;
  std::vector<double> lambdas(static_cast<size_t>(grid));
  for (int i = 0; i < grid; ++i) {
    lambdas[size_t(i)] = lam_lo * std::pow(lam_hi / lam_lo, double(i) / (grid - 1));
    double v = psi(lambdas[size_t(i)]);
    if (v > best) {
      best = v;
      best_i = i;
    }
  }
  if (best_i >= 0) {  // golden-section refinement on the bracketing interval
    double lo = lambdas[size_t(std::max(0, best_i - 1))];
    double hi = lambdas[size_t(std::min(grid - 1, best_i + 1))];
    const double gr = (std::sqrt(5.0) - 1) / 2;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = psi(x1), f2 = psi(x2);
    for (int it = 0; it < 120; ++it) {
      if (f1 < f2) {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + gr * (hi - lo);
        f2 = psi(x2);
      } else {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - gr * (hi - lo);
        f1 = psi(x1);
      }
    }
    best = std::max(best, std::max(f1, f2));
  }
  (void)d;
  return std::sqrt(2.0 * std::max(0.0, best));
}

}  // namespace

double ellipsoid_hausdorff(const Ellipsoid& A, const Ellipsoid& B, int lambda_grid) {
  require(A.center.size() == B.center.size(), "ellipsoid_hausdorff: dimension mismatch");
  return std::max(ellipsoid_one_sided(A, B, lambda_grid),
                  ellipsoid_one_sided(B, A, lambda_grid));
}

Eigen::MatrixXd zonotope_vertices(const Zonotope& Z) {
  require(Z.size() <= 20, "zonotope_vertices: too many generators");
  const std::uint64_t total = std::uint64_t(1) << Z.size();
  Eigen::MatrixXd V(Eigen::Index(total), Z.dim());
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    Eigen::VectorXd pt = Eigen::VectorXd::Zero(Z.dim());
    for (Eigen::Index i = 0; i < Z.size(); ++i)
      if ((mask >> i) & 1) pt += Z.generators.row(i).transpose();
    V.row(Eigen::Index(mask)) = pt;
  }
  return V;
}

double distance_to_hull(const Eigen::MatrixXd& P, const Eigen::VectorXd& x, int max_iter) {
  const Eigen::Index m = P.rows();
  require(m >= 1, "distance_to_hull: empty point set");
  Eigen::MatrixXd H = P * P.transpose();
  Eigen::VectorXd q = P * x;
  double L = std::max(1e-300, Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(H)
                                  .eigenvalues()
                                  .maxCoeff());
  auto project_simplex = [](Eigen::VectorXd w) {
    std::vector<double> a(static_cast<size_t>(w.size()));
    for (Eigen::Index i = 0; i < w.size(); ++i) a[size_t(i)] = w[i];
    std::sort(a.begin(), a.end(), std::greater<double>());
    double cum = 0, theta = 0;
    for (size_t k = 0; k < a.size(); ++k) {
      cum += a[k];
      double cand = (cum - 1.0) / double(k + 1);
      if (k + 1 == a.size() || cand >= a[k + 1]) {
        theta = cand;
        break;
      }
    }
    for (Eigen::Index i = 0; i < w.size(); ++i) w[i] = std::max(0.0, w[i] - theta);
    return w;
  };
  Eigen::VectorXd w = Eigen::VectorXd::Constant(m, 1.0 / double(m));
  Eigen::VectorXd y = w;
  double t = 1.0, prev = (P.transpose() * w - x).norm();
  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXd g = H * y - q;
    Eigen::VectorXd wn = project_simplex(y - g / L);
    double t2 = 0.5 * (1 + std::sqrt(1 + 4 * t * t));
    Eigen::VectorXd yn = wn + ((t - 1) / t2) * (wn - w);
    double val = (P.transpose() * wn - x).norm();
    if (val > prev) {
      yn = wn;
      t2 = 1.0;
    }
    bool settled = std::abs(prev - val) <= 1e-15 * std::max(1.0, prev);
    w = wn;
    y = yn;
    t = t2;
    prev = val;
    if (settled && it > 64) break;
  }
  return prev;
}

}  // namespace convexnn
