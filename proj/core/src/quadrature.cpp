#include "convexnn/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

#include "convexnn/common.hpp"

namespace convexnn {

static GaussRule make_gauss_legendre(int n) {
  GaussRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Newton iteration on P_n from the cosine initial guess.
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      double dz = -p1 / pp;
      z += dz;
      if (std::abs(dz) < 1e-16) break;
    }
    r.nodes[i] = -z;
    r.nodes[n - 1 - i] = z;
    r.weights[i] = r.weights[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
  return r;
}

const GaussRule& gauss_legendre(int n) {
  static std::map<int, GaussRule> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_gauss_legendre(n)).first;
  return it->second;
}

static double panels_sum(const std::function<double(double)>& f,
                         const std::vector<double>& edges, int per_panel,
                         const GaussRule& rule) {
  double total = 0.0;
  for (size_t s = 0; s + 1 < edges.size(); ++s) {
    const double lo = edges[s], hi = edges[s + 1];
    const double w = (hi - lo) / per_panel;
    for (int p = 0; p < per_panel; ++p) {
      const double a = lo + p * w, c = a + 0.5 * w, h = 0.5 * w;
      double acc = 0.0;
      for (size_t q = 0; q < rule.nodes.size(); ++q)
        acc += rule.weights[q] * f(c + h * rule.nodes[q]);
      total += acc * h;
    }
  }
  return total;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, const std::vector<double>& breakpoints,
                 int initial_panels, int max_doublings) {
  if (a == b) return 0.0;
  std::vector<double> edges{a};
  for (double t : breakpoints)
    if (t > a && t < b) edges.push_back(t);
  edges.push_back(b);
  std::sort(edges.begin(), edges.end());

  const GaussRule& rule = gauss_legendre(16);
  int per_panel = std::max(1, initial_panels);
  double prev = panels_sum(f, edges, per_panel, rule);
  for (int d = 0; d < max_doublings; ++d) {
    per_panel *= 2;
    double cur = panels_sum(f, edges, per_panel, rule);
    if (std::abs(cur - prev) <= abs_tol) return cur;
    prev = cur;
  }
  throw convergence_error("integrate: tolerance not met");
}

}  // namespace convexnn
