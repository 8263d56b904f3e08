#include "convexnn/relaxations.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "convexnn/oracles.hpp"
#include "convexnn/parallel.hpp"
#include "convexnn/rng.hpp"

namespace convexnn {

RelaxKind parse_relax_kind(const std::string& name) {
  if (name == "d" || name == "dim-d") return RelaxKind::DimD;
  if (name == "nd" || name == "dim-nd") return RelaxKind::DimND;
  if (name == "sign") return RelaxKind::Sign;
  throw std::invalid_argument("unknown relaxation kind '" + name + "'");
}

double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  require(xs.size() == ys.size() && xs.size() >= 2, "loglog_slope: need >= 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    double lx = std::log(xs[i]), ly = std::log(std::max(ys[i], 1e-300));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  double n = double(xs.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

namespace {

enum class ConeType { Eq, NonNeg, SOC, ParabBelow, ParabAbove, PSD };

struct ConeBlock {
  ConeType type = ConeType::Eq;
  int offset = 0;
  int size = 0;
  int matdim = 0;              // PSD only
  Eigen::VectorXd rhs;         // Eq only
};

// maximize c^T x subject to (K x)_block in S_block for every block.
struct ConicProblem {
  Eigen::MatrixXd K;
  Eigen::VectorXd c;
  std::vector<ConeBlock> blocks;
};

// Roots of 2 s^3 + (1 - 2 mu) s - sigma = 0 (stationarity of the squared
// distance to the parabola m = s^2), real roots via Cardano.
void parabola_stationary(double sigma, double mu, std::vector<double>& roots) {
  roots.clear();
  const double p = (1.0 - 2.0 * mu) / 2.0;
  const double q = -sigma / 2.0;
  const double disc = q * q / 4.0 + p * p * p / 27.0;
  if (disc >= 0) {
    double sq = std::sqrt(disc);
    double u = std::cbrt(-q / 2.0 + sq);
    double v = std::cbrt(-q / 2.0 - sq);
    roots.push_back(u + v);
  } else {
    double r = std::sqrt(-p * p * p / 27.0);
    double phi = std::acos(std::clamp(-q / (2.0 * r), -1.0, 1.0));
    double m = 2.0 * std::sqrt(-p / 3.0);
    for (int k = 0; k < 3; ++k) roots.push_back(m * std::cos((phi + 2 * M_PI * k) / 3.0));
  }
}

// Projection onto {(s, m): m >= max(s, 0)^2}.
void project_parab_below(double& s, double& m) {
  if (m >= (s > 0 ? s * s : 0.0)) return;
  double bs = std::min(s, 0.0), bm = 0.0;  // flat boundary {s <= 0, m = 0}
  double bd = (bs - s) * (bs - s) + (bm - m) * (bm - m);
  std::vector<double> roots;
  parabola_stationary(s, m, roots);
  roots.push_back(0.0);
  for (double r : roots) {
    if (r < 0) continue;
    double d = (r - s) * (r - s) + (r * r - m) * (r * r - m);
    if (d < bd) {
      bd = d;
      bs = r;
      bm = r * r;
    }
  }
  s = bs;
  m = bm;
}

// Projection onto {(c, m): c >= 0, m <= c^2} (pointwise nearest; the set is
// the outside of a parabola, so this block is not convex -- see the sign
// lifting notes in the README).
void project_parab_above(double& c, double& m) {
  if (c >= 0 && m <= c * c) return;
  double bc = std::max(c, 0.0), bm = std::min(m, 0.0);  // face {c = 0, m <= 0} / corner
  double bd = (bc - c) * (bc - c) + (bm - m) * (bm - m);
  std::vector<double> roots;
  parabola_stationary(c, m, roots);
  roots.push_back(0.0);
  for (double r : roots) {
    if (r < 0) continue;
    double d = (r - c) * (r - c) + (r * r - m) * (r * r - m);
    if (d < bd) {
      bd = d;
      bc = r;
      bm = r * r;
    }
  }
  c = bc;
  m = bm;
}

void project_psd_scaled_svec(Eigen::Ref<Eigen::VectorXd> seg, int dim) {
  Eigen::MatrixXd M(dim, dim);
  int k = 0;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < dim; ++i) {
    for (int j = i; j < dim; ++j) {
      double val = i == j ? seg[k] : seg[k] * inv_sqrt2;
      M(i, j) = M(j, i) = val;
      ++k;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(M);
  Eigen::VectorXd lam = eig.eigenvalues().cwiseMax(0.0);
  M = eig.eigenvectors() * lam.asDiagonal() * eig.eigenvectors().transpose();
  k = 0;
  for (int i = 0; i < dim; ++i) {
    for (int j = i; j < dim; ++j) {
      seg[k] = i == j ? M(i, j) : M(i, j) * std::sqrt(2.0);
      ++k;
    }
  }
}

void project_block(const ConeBlock& b, Eigen::Ref<Eigen::VectorXd> seg) {
  switch (b.type) {
    case ConeType::Eq:
      seg = b.rhs;
      return;
    case ConeType::NonNeg:
      seg = seg.cwiseMax(0.0);
      return;
    case ConeType::SOC: {
      double s = seg[0];
      double wn = seg.tail(seg.size() - 1).norm();
      if (wn <= s) return;
      if (wn <= -s) {
        seg.setZero();
        return;
      }
      double t = 0.5 * (1.0 + s / wn);
      seg[0] = t * wn;
      seg.tail(seg.size() - 1) *= t;
      return;
    }
    case ConeType::ParabBelow:
      project_parab_below(seg[0], seg[1]);
      return;
    case ConeType::ParabAbove:
      project_parab_above(seg[0], seg[1]);
      return;
    case ConeType::PSD:
      project_psd_scaled_svec(seg, b.matdim);
      return;
  }
}

double block_violation(const ConeBlock& b, const Eigen::VectorXd& seg) {
  Eigen::VectorXd proj = seg;
  project_block(b, proj);
  return (proj - seg).lpNorm<Eigen::Infinity>();
}

struct PdhgResult {
  Eigen::VectorXd x;
  double max_residual = 0.0;
  bool converged = false;
  int iterations = 0;
};

PdhgResult pdhg_solve_once(const ConicProblem& prob, const RelaxOptions& opts,
                           bool adapt_steps) {
  const Eigen::Index nvar = prob.K.cols();
  const Eigen::Index nrow = prob.K.rows();

  // ||K||_2 by power iteration on K^T K.
  Eigen::VectorXd pv = Eigen::VectorXd::Ones(nvar).normalized();
  double knorm = 1.0;
  for (int it = 0; it < 80; ++it) {
    Eigen::VectorXd w = prob.K.transpose() * (prob.K * pv);
    knorm = std::sqrt(std::max(w.norm(), 1e-30));
    pv = w.normalized();
  }
  const double base_step = 0.95 / std::max(knorm, 1e-12);
  double balance = 1.0;  // adapted to even out primal/dual residuals
  double tau = base_step, sigma = base_step;

  Eigen::VectorXd x = Eigen::VectorXd::Zero(nvar);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(nrow);
  Eigen::VectorXd xavg = x;

  auto residual = [&](const Eigen::VectorXd& xx) {
    Eigen::VectorXd kx = prob.K * xx;
    double worst = 0.0;
    for (const auto& b : prob.blocks)
      worst = std::max(worst, block_violation(b, kx.segment(b.offset, b.size)));
    return worst;
  };

  // Optimality needs both primal feasibility and dual stationarity: the
  // objective is linear, so at a saddle K^T y = c exactly.
  const double cscale = 1.0 + prob.c.lpNorm<Eigen::Infinity>();
  auto dual_residual = [&](const Eigen::VectorXd& yy) {
    return (prob.K.transpose() * yy - prob.c).lpNorm<Eigen::Infinity>() / cscale;
  };

  PdhgResult res;
  double avg_count = 0;
  for (int it = 1; it <= opts.max_iter; ++it) {
    Eigen::VectorXd xn = x + tau * (prob.c - prob.K.transpose() * y);
    Eigen::VectorXd xbar = 2.0 * xn - x;
    Eigen::VectorXd t = y + sigma * (prob.K * xbar);
    Eigen::VectorXd p = t / sigma;
    for (const auto& b : prob.blocks) {
      Eigen::VectorXd seg = p.segment(b.offset, b.size);
      project_block(b, seg);
      t.segment(b.offset, b.size) -= sigma * seg;
    }
    y = t;
    x = xn;
    xavg = (xavg * avg_count + x) / (avg_count + 1.0);
    avg_count += 1.0;
    if (it % opts.check_every == 0 || it == opts.max_iter) {
      double r_last = residual(x);
      double d_last = dual_residual(y);
      if (r_last <= opts.tol && d_last <= opts.tol) {
        res.x = x;
        res.max_residual = r_last;
        res.converged = true;
        res.iterations = it;
        return res;
      }
      // Residual balancing at constant tau*sigma: push the step budget
      // toward whichever side lags (gently; aggressive swings destabilize
      // the lifted variants).
      if (adapt_steps) {
        if (r_last > 10.0 * d_last && balance < 30.0) {
          balance *= 1.2;
        } else if (d_last > 10.0 * r_last && balance > 1.0 / 30.0) {
          balance /= 1.2;
        }
        sigma = base_step * balance;
        tau = base_step / balance;
      }
    }
  }
  double r_last = residual(x), r_avg = residual(xavg);
  res.x = r_avg < r_last ? xavg : x;
  res.max_residual = std::min(r_last, r_avg);
  res.converged = res.max_residual <= opts.tol && dual_residual(y) <= opts.tol;
  res.iterations = opts.max_iter;
  return res;
}

// Adaptive steps first; a non-converged solve gets one plain-step retry and
// the run with the smaller residual (preferring convergence) wins.
PdhgResult pdhg_solve(const ConicProblem& prob, const RelaxOptions& opts) {
  PdhgResult first = pdhg_solve_once(prob, opts, true);
  if (first.converged) return first;
  PdhgResult second = pdhg_solve_once(prob, opts, false);
  if (second.converged) return second;
  double v1 = prob.c.dot(first.x), v2 = prob.c.dot(second.x);
  bool ok1 = first.max_residual <= 10 * opts.tol;
  bool ok2 = second.max_residual <= 10 * opts.tol;
  if (ok1 && ok2) return v1 >= v2 ? first : second;
  return first.max_residual <= second.max_residual ? first : second;
}

// Upper-triangle (i <= j) indexing for a dim x dim symmetric matrix.
struct SymIndex {
  int dim = 0;
  int count() const { return dim * (dim + 1) / 2; }
  int operator()(int i, int j) const {
    if (i > j) std::swap(i, j);
    return i * dim - i * (i - 1) / 2 + (j - i);
  }
};

// Adds coefficient c on the symmetric-matrix entry (i, j) (counting both
// off-diagonal mirror entries once each) to a constraint row.
void add_sym_coeff(Eigen::MatrixXd& K, int row, const SymIndex& S, int i, int j,
                   double c, int base = 0) {
  K(row, base + S(i, j)) += c;  // entry stores X_ij = X_ji once
}

struct Built {
  ConicProblem prob;
  SymIndex S;
  int matdim = 0;
};

// Shared per-point second-order rows on (u_i, v, V):
//   ||V z_i|| <= 2 u_i - v^T z_i <= sqrt(z_i^T V z_i).
// `u_entry(row, coef)` writes the u_i part; v and V live in the matrix block
// at the given offsets.
void append_point_rows(Eigen::MatrixXd& K, std::vector<ConeBlock>& blocks, int& row,
                       const SymIndex& S, int v_row0, int v_col0,
                       const std::function<void(int, int, double)>& u_entry,
                       const Eigen::MatrixXd& Z, int Dz) {
  const int n = int(Z.rows());
  for (int i = 0; i < n; ++i) {
    // SOC block: [s_i; V z_i]
    ConeBlock soc{ConeType::SOC, row, 1 + Dz, 0, {}};
    // s_i = 2 u_i - v^T z_i
    u_entry(row, i, 2.0);
    for (int c = 0; c < Dz; ++c)
      add_sym_coeff(K, row, S, v_row0, v_col0 + c, -Z(i, c));
    ++row;
    for (int r = 0; r < Dz; ++r) {
      for (int c = 0; c < Dz; ++c)
        add_sym_coeff(K, row, S, v_col0 + r, v_col0 + c, Z(i, c));
      ++row;
    }
    blocks.push_back(soc);

    // Parabola block: [s_i; z_i^T V z_i]
    ConeBlock par{ConeType::ParabBelow, row, 2, 0, {}};
    u_entry(row, i, 2.0);
    for (int c = 0; c < Dz; ++c)
      add_sym_coeff(K, row, S, v_row0, v_col0 + c, -Z(i, c));
    ++row;
    for (int r = 0; r < Dz; ++r)
      for (int c = 0; c < Dz; ++c)
        add_sym_coeff(K, row, S, v_col0 + r, v_col0 + c, Z(i, r) * Z(i, c));
    ++row;
    blocks.push_back(par);
  }
}

Built build_dim_d(const Eigen::MatrixXd& Z, const Eigen::VectorXd& y,
                  const RelaxOptions&) {
  const int n = int(Z.rows());
  const int Dz = int(Z.cols());
  const int m = 1 + Dz;  // [[1, v^T], [v, V]]
  SymIndex S{m};
  const int nvar = S.count() + n;  // matrix entries + u

  const int rows_psd = S.count();
  const int rows_affine = 2;
  const int rows_points = n * (1 + Dz) + n * 2;
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(rows_psd + rows_affine + rows_points, nvar);
  std::vector<ConeBlock> blocks;
  int row = 0;

  // PSD block: scaled svec of the matrix.
  {
    ConeBlock b{ConeType::PSD, row, S.count(), m, {}};
    int k = 0;
    for (int i = 0; i < m; ++i) {
      for (int j = i; j < m; ++j) {
        K(row + k, S(i, j)) = i == j ? 1.0 : std::sqrt(2.0);
        ++k;
      }
    }
    row += S.count();
    blocks.push_back(b);
  }
  // Affine: X00 = 1, tr V = 1.
  {
    ConeBlock b{ConeType::Eq, row, 2, 0, Eigen::VectorXd::Ones(2)};
    K(row, S(0, 0)) = 1.0;
    for (int r = 1; r < m; ++r) K(row + 1, S(r, r)) = 1.0;
    row += 2;
    blocks.push_back(b);
  }
  auto u_entry = [&](int r, int i, double coef) { K(r, S.count() + i) += coef; };
  append_point_rows(K, blocks, row, S, 0, 1, u_entry, Z, Dz);

  Eigen::VectorXd c = Eigen::VectorXd::Zero(nvar);
  for (int i = 0; i < n; ++i) c[S.count() + i] = y[i] / double(n);
  return {ConicProblem{std::move(K), std::move(c), std::move(blocks)}, S, m};
}

Built build_dim_nd(const Eigen::MatrixXd& Z, const Eigen::VectorXd& y,
                   const RelaxOptions&) {
  const int n = int(Z.rows());
  const int Dz = int(Z.cols());
  const int m = 1 + n + Dz;  // [[1, u^T, v^T], [u, U, J], [v, J^T, V]]
  SymIndex S{m};
  const int u0 = 1, v0 = 1 + n;

  const int rows_psd = S.count();
  const int rows_affine = 2 + n;
  const int rows_pairs = n * (n - 1);  // two halfspaces per unordered pair
  const int rows_points = n * (1 + Dz) + n * 2;
  Eigen::MatrixXd K =
      Eigen::MatrixXd::Zero(rows_psd + rows_affine + rows_pairs + rows_points, S.count());
  std::vector<ConeBlock> blocks;
  int row = 0;

  {
    ConeBlock b{ConeType::PSD, row, S.count(), m, {}};
    int k = 0;
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j) {
        K(row + k, S(i, j)) = i == j ? 1.0 : std::sqrt(2.0);
        ++k;
      }
    row += S.count();
    blocks.push_back(b);
  }
  {
    // X00 = 1; tr V = 1; U_ii = (J z_i)_i.
    ConeBlock b{ConeType::Eq, row, 2 + n, 0, Eigen::VectorXd::Zero(2 + n)};
    b.rhs[0] = 1.0;
    b.rhs[1] = 1.0;
    K(row, S(0, 0)) = 1.0;
    for (int r = v0; r < m; ++r) K(row + 1, S(r, r)) = 1.0;
    for (int i = 0; i < n; ++i) {
      K(row + 2 + i, S(u0 + i, u0 + i)) += 1.0;
      for (int c = 0; c < Dz; ++c)
        add_sym_coeff(K, row + 2 + i, S, u0 + i, v0 + c, -Z(i, c));
    }
    row += 2 + n;
    blocks.push_back(b);
  }
  {
    // a_ij >= |z_j^T V z_i| as two nonnegative rows per pair.
    int cnt = 0;
    int start = row;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        for (double sgn : {+1.0, -1.0}) {
          // a_ij = 4 U_ij + z_j^T V z_i - 2 (J z_j)_i - 2 (J z_i)_j
          add_sym_coeff(K, row, S, u0 + i, u0 + j, 4.0);
          for (int r = 0; r < Dz; ++r)
            for (int c = 0; c < Dz; ++c)
              add_sym_coeff(K, row, S, v0 + r, v0 + c, Z(j, r) * Z(i, c));
          for (int c = 0; c < Dz; ++c) {
            add_sym_coeff(K, row, S, u0 + i, v0 + c, -2.0 * Z(j, c));
            add_sym_coeff(K, row, S, u0 + j, v0 + c, -2.0 * Z(i, c));
          }
          // -+ b_ij with b_ij = z_j^T V z_i
          for (int r = 0; r < Dz; ++r)
            for (int c = 0; c < Dz; ++c)
              add_sym_coeff(K, row, S, v0 + r, v0 + c, -sgn * Z(j, r) * Z(i, c));
          ++row;
          ++cnt;
        }
      }
    }
    blocks.push_back(ConeBlock{ConeType::NonNeg, start, cnt, 0, {}});
  }
  auto u_entry = [&](int r, int i, double coef) { add_sym_coeff(K, r, S, 0, u0 + i, coef); };
  append_point_rows(K, blocks, row, S, 0, v0, u_entry, Z, Dz);

  Eigen::VectorXd c = Eigen::VectorXd::Zero(S.count());
  for (int i = 0; i < n; ++i) c[S(0, u0 + i)] += y[i] / double(n);
  return {ConicProblem{std::move(K), std::move(c), std::move(blocks)}, S, m};
}

Built build_sign(const Eigen::MatrixXd& Z, const Eigen::VectorXd& y,
                 const RelaxOptions& opts) {
  const int n = int(Z.rows());
  const int Dz = int(Z.cols());
  const int m = 1 + n + Dz;  // [[1, s^T, v^T], [s, S, J], [v, J^T, V]]
  SymIndex S{m};
  const int s0 = 1, v0 = 1 + n;

  const int rows_psd = S.count();
  const int rows_affine = 2 + n;
  const int rows_sign = 2 * n * (n - 1);
  const int rows_par = 2 * n;
  Eigen::MatrixXd K =
      Eigen::MatrixXd::Zero(rows_psd + rows_affine + rows_sign + rows_par, S.count());
  std::vector<ConeBlock> blocks;
  int row = 0;

  {
    ConeBlock b{ConeType::PSD, row, S.count(), m, {}};
    int k = 0;
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j) {
        K(row + k, S(i, j)) = i == j ? 1.0 : std::sqrt(2.0);
        ++k;
      }
    row += S.count();
    blocks.push_back(b);
  }
  {
    // X00 = 1; tr V = 1; diag(S) = 1.
    ConeBlock b{ConeType::Eq, row, 2 + n, 0, Eigen::VectorXd::Ones(2 + n)};
    K(row, S(0, 0)) = 1.0;
    for (int r = v0; r < m; ++r) K(row + 1, S(r, r)) = 1.0;
    for (int i = 0; i < n; ++i) K(row + 2 + i, S(s0 + i, s0 + i)) = 1.0;
    row += 2 + n;
    blocks.push_back(b);
  }
  {
    // (J z_i)_i >= |(J z_i)_j| for all j != i.
    int start = row, cnt = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        for (double sgn : {+1.0, -1.0}) {
          for (int c = 0; c < Dz; ++c) {
            add_sym_coeff(K, row, S, s0 + i, v0 + c, Z(i, c));
            add_sym_coeff(K, row, S, s0 + j, v0 + c, -sgn * Z(i, c));
          }
          ++row;
          ++cnt;
        }
      }
    }
    blocks.push_back(ConeBlock{ConeType::NonNeg, start, cnt, 0, {}});
  }
  if (opts.sign_tightening) {
    // sqrt(z_i^T V z_i) <= (J z_i)_i, as [(J z_i)_i ; z_i^T V z_i] in the
    // above-parabola set. Not convex in the lift; diagnostics only.
    for (int i = 0; i < n; ++i) {
      ConeBlock b{ConeType::ParabAbove, row, 2, 0, {}};
      for (int c = 0; c < Dz; ++c) add_sym_coeff(K, row, S, s0 + i, v0 + c, Z(i, c));
      ++row;
      for (int r = 0; r < Dz; ++r)
        for (int c = 0; c < Dz; ++c)
          add_sym_coeff(K, row, S, v0 + r, v0 + c, Z(i, r) * Z(i, c));
      ++row;
      blocks.push_back(b);
    }
  }

  Eigen::VectorXd c = Eigen::VectorXd::Zero(S.count());
  for (int i = 0; i < n; ++i) {
    for (int cc = 0; cc < Dz; ++cc) {
      c[S(s0 + i, v0 + cc)] += y[i] * Z(i, cc) / (2.0 * n);  // (1/2n) y_i (J z_i)_i
      c[S(0, v0 + cc)] += y[i] * Z(i, cc) / (2.0 * n);       // (1/2n) y_i v^T z_i
    }
  }
  return {ConicProblem{std::move(K), std::move(c), std::move(blocks)}, S, m};
}

}  // namespace

RelaxReport solve_relaxation(RelaxKind kind, const Eigen::MatrixXd& Z, double R,
                             const Eigen::VectorXd& y, const RelaxOptions& opts) {
  require(Z.rows() == y.size(), "solve_relaxation: |y| != n");
  require(R > 0, "solve_relaxation: R must be positive");
  const int n = int(Z.rows());
  const int Dz = int(Z.cols());
  if (kind == RelaxKind::DimD)
    require(n <= 512, "solve_relaxation: dim-d kind needs n <= 512");
  else
    require(n + Dz <= 40, "solve_relaxation: lifted kinds need n + d <= 40");

  RelaxReport rep;
  rep.converged = true;
  rep.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (int side = 0; side < 2; ++side) {
    Eigen::VectorXd ys = side == 0 ? y : Eigen::VectorXd(-y);
    Built built = kind == RelaxKind::DimD    ? build_dim_d(Z, ys, opts)
                  : kind == RelaxKind::DimND ? build_dim_nd(Z, ys, opts)
                                             : build_sign(Z, ys, opts);
    PdhgResult sol = pdhg_solve(built.prob, opts);
    double value = built.prob.c.dot(sol.x) / R;
    (side == 0 ? rep.value_plus : rep.value_minus) = value;
    rep.max_residual = std::max(rep.max_residual, sol.max_residual);
    rep.converged = rep.converged && sol.converged;
    rep.iterations = std::max(rep.iterations, sol.iterations);

    Eigen::MatrixXd M(built.matdim, built.matdim);
    for (int i = 0; i < built.matdim; ++i)
      for (int j = i; j < built.matdim; ++j)
        M(i, j) = M(j, i) = sol.x[built.S(i, j)];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(M);
    rep.min_eigenvalue = std::min(rep.min_eigenvalue, eig.eigenvalues().minCoeff());
    double trace_v = 0.0;
    int v0 = built.matdim - Dz;
    for (int r = v0; r < built.matdim; ++r) trace_v += M(r, r);
    rep.trace_error = std::max(rep.trace_error, std::abs(trace_v - 1.0));
  }
  rep.value = std::max(rep.value_plus, rep.value_minus);
  return rep;
}

ScalingTable random_direction_scaling(const std::string& kind,
                                      const std::vector<int>& n_grid, int d,
                                      int trials, std::uint64_t seed,
                                      const RelaxOptions& opts) {
  require(trials >= 2, "random_direction_scaling: trials must be >= 2");
  ScalingTable table;
  std::vector<double> ns, means;
  for (size_t gi = 0; gi < n_grid.size(); ++gi) {
    const int n = n_grid[gi];
    Rng rng(seed ^ (0x9e3779b97f4a7c15ULL * (gi + 1)));
    Eigen::MatrixXd X(n, d);
    for (int i = 0; i < n; ++i) X.row(i) = rng.ball(d, 1.0).transpose();
    Eigen::MatrixXd Z(n, d + 1);
    Z.leftCols(d) = X;
    Z.col(d).setOnes();

    std::vector<double> vals(static_cast<size_t>(trials), 0.0);
    std::shared_ptr<ExactOracle> oracle;
    if (kind == "exact") oracle = std::make_shared<ExactOracle>(Z, 1.0, 1, 2.0);
    std::vector<Eigen::VectorXd> ys(static_cast<size_t>(trials));
    for (int t = 0; t < trials; ++t) ys[size_t(t)] = rng.gaussian_vector(n);
    parallel_chunks(trials, 1, [&](int, std::int64_t lo, std::int64_t hi) {
      for (std::int64_t t = lo; t < hi; ++t) {
        if (oracle) {
          vals[size_t(t)] = oracle->solve(ys[size_t(t)]).value;
        } else {
          vals[size_t(t)] =
              solve_relaxation(parse_relax_kind(kind), Z, 1.0, ys[size_t(t)], opts).value;
        }
      }
    });
    double mean = 0;
    for (double v : vals) mean += v;
    mean /= trials;
    double var = 0;
    for (double v : vals) var += (v - mean) * (v - mean);
    var /= std::max(1, trials - 1);
    table.rows.push_back({n, mean, std::sqrt(var / trials)});
    ns.push_back(double(n));
    means.push_back(mean);
  }
  table.slope = loglog_slope(ns, means);
  return table;
}

}  // namespace convexnn
