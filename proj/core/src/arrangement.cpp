#include "convexnn/arrangement.hpp"

#include <Eigen/Dense>
#include <limits>
#include <string>
#include <unordered_map>

#include "convexnn/common.hpp"

namespace convexnn {

namespace {

struct LocalFace {
  std::vector<std::int8_t> sign;
  Eigen::VectorXd w;  // local coordinates; zero vector for the all-zero face
};

std::string key_of(const std::vector<std::int8_t>& sign) {
  std::string k(sign.size(), '0');
  for (size_t i = 0; i < sign.size(); ++i) k[i] = char('1' + sign[i]);
  return k;
}

void add_face(std::unordered_map<std::string, LocalFace>& out, LocalFace f) {
  std::string k = key_of(f.sign);
  out.emplace(std::move(k), std::move(f));
}

void enum_rec(const Eigen::MatrixXd& P, double tol,
              std::unordered_map<std::string, LocalFace>& out);

// Attach a sub-face of the projected boundary arrangement to the vertex
// direction v0; epsilon is chosen so the strict signs of non-boundary points
// survive the perturbation.
void compose(const Eigen::MatrixXd& P, const Eigen::VectorXd& v0,
             const std::vector<Eigen::Index>& boundary,
             const std::vector<std::int8_t>& base_sign,
             const Eigen::MatrixXd& Q, const LocalFace& sub, double tol,
             std::unordered_map<std::string, LocalFace>& out) {
  LocalFace f;
  f.sign = base_sign;
  for (size_t b = 0; b < boundary.size(); ++b) f.sign[size_t(boundary[b])] = sub.sign[b];
  if (sub.w.squaredNorm() == 0.0) {
    f.w = v0;
  } else {
    Eigen::VectorXd dir = Q * sub.w;
    double min_margin = std::numeric_limits<double>::infinity();
    double max_cross = 0.0;
    for (Eigen::Index i = 0; i < P.rows(); ++i) {
      if (base_sign[size_t(i)] == 0) continue;  // boundary point
      min_margin = std::min(min_margin, std::abs(P.row(i).dot(v0)));
      max_cross = std::max(max_cross, std::abs(P.row(i).dot(dir)));
    }
    double eps = 1.0;
    if (std::isfinite(min_margin) && max_cross > 0)
      eps = std::min(1.0, 0.25 * min_margin / max_cross);
    if (eps <= 0) eps = tol;
    f.w = (v0 + eps * dir).normalized();
  }
  add_face(out, std::move(f));
}

void enum_rec(const Eigen::MatrixXd& P, double tol,
              std::unordered_map<std::string, LocalFace>& out) {
  const Eigen::Index n = P.rows();
  const Eigen::Index m = P.cols();

  {
    LocalFace zero;
    zero.sign.assign(static_cast<size_t>(n), 0);
    zero.w = Eigen::VectorXd::Zero(m);
    add_face(out, std::move(zero));
  }
  if (m == 0 || n == 0) return;

  const double scale = std::max(1e-300, P.cwiseAbs().maxCoeff());
  const double zero_tol = tol * scale;

  // Reduce to the row span so the remaining arrangement is essential.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(P, Eigen::ComputeThinV);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] > tol * svd.singularValues()[0]) ++rank;
  if (rank == 0) return;
  if (rank < m) {
    Eigen::MatrixXd B = svd.matrixV().leftCols(rank);
    std::unordered_map<std::string, LocalFace> sub;
    enum_rec(P * B, tol, sub);
    for (auto& [k, f] : sub) {
      LocalFace lifted;
      lifted.sign = f.sign;
      lifted.w = f.w.squaredNorm() == 0 ? Eigen::VectorXd(Eigen::VectorXd::Zero(m))
                                        : Eigen::VectorXd(B * f.w);
      add_face(out, std::move(lifted));
    }
    return;
  }

  if (m == 1) {
    for (int s : {+1, -1}) {
      LocalFace f;
      f.sign.resize(static_cast<size_t>(n));
      for (Eigen::Index i = 0; i < n; ++i) {
        double t = s * P(i, 0);
        f.sign[size_t(i)] = std::abs(t) <= zero_tol ? std::int8_t(0)
                                                    : std::int8_t(t > 0 ? 1 : -1);
      }
      f.w = Eigen::VectorXd::Constant(1, double(s));
      add_face(out, std::move(f));
    }
    return;
  }

  // Vertices: unit null directions of independent (m-1)-subsets of rows.
  std::vector<Eigen::Index> idx(static_cast<size_t>(m - 1));
  for (Eigen::Index i = 0; i < m - 1; ++i) idx[size_t(i)] = i;
  while (true) {
    Eigen::MatrixXd S(m - 1, m);
    for (Eigen::Index r = 0; r < m - 1; ++r) S.row(r) = P.row(idx[size_t(r)]);
    Eigen::JacobiSVD<Eigen::MatrixXd> ssvd(S, Eigen::ComputeFullV);
    const auto& sv = ssvd.singularValues();
    bool independent = sv[sv.size() - 1] > tol * std::max(scale, sv[0]);
    if (independent) {
      Eigen::VectorXd u = ssvd.matrixV().col(m - 1);
      std::vector<Eigen::Index> boundary;
      for (Eigen::Index i = 0; i < n; ++i)
        if (std::abs(P.row(i).dot(u)) <= zero_tol) boundary.push_back(i);

      // v0-perp basis and the projected boundary arrangement are shared by
      // the +-u passes.
      Eigen::MatrixXd M = Eigen::MatrixXd::Zero(m, m);
      M.col(0) = u;
      Eigen::HouseholderQR<Eigen::MatrixXd> qr(M);
      Eigen::MatrixXd Q = Eigen::MatrixXd(qr.householderQ()).rightCols(m - 1);
      Eigen::MatrixXd PB(Eigen::Index(boundary.size()), m - 1);
      for (size_t b = 0; b < boundary.size(); ++b)
        PB.row(Eigen::Index(b)) = P.row(boundary[b]) * Q;
      std::unordered_map<std::string, LocalFace> sub;
      enum_rec(PB, tol, sub);

      for (int s : {+1, -1}) {
        Eigen::VectorXd v0 = s * u;
        std::vector<std::int8_t> base(static_cast<size_t>(n), 0);
        for (Eigen::Index i = 0; i < n; ++i) {
          double t = P.row(i).dot(v0);
          if (std::abs(t) > zero_tol) base[size_t(i)] = t > 0 ? 1 : -1;
        }
        for (auto& [k, fsub] : sub) compose(P, v0, boundary, base, Q, fsub, tol, out);
      }
    }
    Eigen::Index pos = m - 2;
    while (pos >= 0 && idx[size_t(pos)] == n - (m - 1) + pos) --pos;
    if (pos < 0) break;
    ++idx[size_t(pos)];
    for (Eigen::Index j = pos + 1; j < m - 1; ++j) idx[size_t(j)] = idx[size_t(j - 1)] + 1;
  }
}

}  // namespace

std::int64_t face_enumeration_work(Eigen::Index n, Eigen::Index dim) {
  std::int64_t k = std::max<Eigen::Index>(dim - 1, 0);
  long double c = 1.0L;
  for (std::int64_t i = 0; i < k; ++i) c = c * (long double)(n - i) / (long double)(i + 1);
  if (c > 4e18L) return std::numeric_limits<std::int64_t>::max();
  return (std::int64_t)c;
}

std::vector<FacePattern> enumerate_faces(const Eigen::MatrixXd& Z, double tol,
                                         std::int64_t max_subsets) {
  if (face_enumeration_work(Z.rows(), Z.cols()) > max_subsets)
    throw budget_error("enumerate_faces: subset budget exceeded");
  std::unordered_map<std::string, LocalFace> faces;
  enum_rec(Z, tol, faces);
  std::vector<FacePattern> out;
  out.reserve(faces.size());
  for (auto& [k, f] : faces) out.push_back({std::move(f.sign), std::move(f.w)});
  return out;
}

}  // namespace convexnn
