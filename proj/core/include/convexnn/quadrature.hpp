#pragma once

#include <functional>
#include <vector>

namespace convexnn {

struct GaussRule {
  std::vector<double> nodes;    // on (-1, 1)
  std::vector<double> weights;  // sum to 2
};

// Gauss-Legendre rule of order n (cached).
const GaussRule& gauss_legendre(int n);

// Composite Gauss-Legendre with panel doubling until two refinements agree
// to abs_tol. `breakpoints` (if any) become fixed panel boundaries so kinks
// of the integrand never sit inside a panel. Throws convergence_error when
// the tolerance is not met within the subdivision cap.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, const std::vector<double>& breakpoints = {},
                 int initial_panels = 8, int max_doublings = 14);

}  // namespace convexnn
