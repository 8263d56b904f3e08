#pragma once

#include "convexnn/model.hpp"

namespace convexnn {

struct ReduceResult {
  SignedMeasureModel model;
  bool reduced = true;        // false when numerics forced a bail-out
  std::string diagnostic;     // set when reduced == false
};

// Support reduction: returns a model with at most n+1 units whose predictions
// at the n given points match the input model, with gamma_1 not increased.
// Works in a >= 0 weight coordinates (eta_j = sign_j a_j) so the l1 row is the
// linear functional sum(a); repeatedly slides a along a null vector of the
// stacked (responses; ones) matrix until a weight hits zero.
ReduceResult caratheodory_reduce(const SignedMeasureModel& model,
                                 const Eigen::MatrixXd& xs,
                                 double null_tol = 1e-8);

}  // namespace convexnn
