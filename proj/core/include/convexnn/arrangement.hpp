#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace convexnn {

// One face of the central hyperplane arrangement {v : v^T z_i = 0}: the sign
// each point takes on it, plus a unit witness direction realizing those signs
// (strictly for the nonzero ones).
struct FacePattern {
  std::vector<std::int8_t> sign;  // +1 / -1 / 0 per point
  Eigen::VectorXd witness;
};

// Enumerates every achievable sign pattern (cells and lower-dimensional
// faces, plus the all-zero pattern) of the arrangement induced by the rows of
// Z. Exact at desk scale: candidate vertices are null directions of
// (rank-1)-subsets of rows, and the patterns reachable around each vertex are
// enumerated recursively through the projected sub-arrangement. Throws
// budget_error when the subset count exceeds max_subsets.
std::vector<FacePattern> enumerate_faces(const Eigen::MatrixXd& Z, double tol = 1e-9,
                                         std::int64_t max_subsets = 4'000'000);

// Work estimate used for the budget gate: (rank-1)-subsets of n rows.
std::int64_t face_enumeration_work(Eigen::Index n, Eigen::Index dim);

}  // namespace convexnn
