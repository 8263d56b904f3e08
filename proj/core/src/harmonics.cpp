#include "convexnn/harmonics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "convexnn/quadrature.hpp"

namespace convexnn {

double legendre_P(int k, int d, double t) {
  require(k >= 0, "legendre_P: k must be >= 0");
  require(d >= 1, "legendre_P: d must be >= 1");
  if (k == 0) return 1.0;
  if (k == 1) return t;
  double pm1 = 1.0, p = t;
  for (int j = 1; j < k; ++j) {
    double pn = ((2.0 * j + d - 1.0) * t * p - j * pm1) / (j + d - 1.0);
    pm1 = p;
    p = pn;
  }
  return p;
}

std::int64_t harmonic_dim(int d, int k) {
  require(d >= 1 && k >= 0, "harmonic_dim: need d >= 1, k >= 0");
  if (k == 0) return 1;
  // (2k+d-1)/k * C(k+d-2, d-1), exact integer arithmetic
  __int128 binom = 1;
  for (int j = 1; j <= d - 1; ++j) {
    binom = binom * (k + d - 2 - (d - 1) + j);  // (k-1+j)
    binom /= j;
    if (binom > (__int128(1) << 100))
      throw std::overflow_error("harmonic_dim: value exceeds 64-bit range");
  }
  __int128 t = binom * (2 * k + d - 1);
  t /= k;
  if (t > std::numeric_limits<std::int64_t>::max())
    throw std::overflow_error("harmonic_dim: value exceeds 64-bit range");
  return std::int64_t(t);
}

double omega_ratio(int d) {
  require(d >= 1, "omega_ratio: d must be >= 1");
  return std::exp(std::lgamma((d + 1) / 2.0) - std::lgamma(d / 2.0)) / std::sqrt(M_PI);
}

double lambda_quadrature(int d, int alpha, int k, double tol) {
  require(d >= 1 && alpha >= 0 && k >= 0, "lambda_quadrature: bad arguments");
  // t = cos(theta): integrand (cos theta)_+^alpha P_k(cos theta) sin^{d-1},
  // supported on [0, pi/2]; smooth there for every alpha >= 0.
  auto f = [&](double th) {
    double c = std::cos(th);
    if (c <= 0) return 0.0;
    double s = std::sin(th);
    double w = d == 1 ? 1.0 : std::pow(s, d - 1);
    double sig = alpha == 0 ? 1.0 : std::pow(c, alpha);
    return sig * legendre_P(k, d, c) * w;
  };
  int panels = std::max(8, k / 2 + 2);
  return omega_ratio(d) * integrate(f, 0.0, M_PI / 2.0, tol, {}, panels);
}

double lambda_fourier(int alpha, int k) {
  require(alpha >= 0 && k >= 0, "lambda_fourier: bad arguments");
  auto sin_half = [](int m) {  // sin(m pi / 2)
    switch (((m % 4) + 4) % 4) {
      case 1: return 1.0;
      case 3: return -1.0;
      default: return 0.0;
    }
  };
  auto cos_half = [](int m) {  // cos(m pi / 2)
    switch (((m % 4) + 4) % 4) {
      case 0: return 1.0;
      case 2: return -1.0;
      default: return 0.0;
    }
  };
  if (alpha == 0) {
    if (k == 0) return 0.5;
    return sin_half(k) / (M_PI * k);
  }
  if (alpha == 1) {
    if (k == 1) return 0.25;
    return -cos_half(k) / (M_PI * (double(k) * k - 1.0));
  }
  if (alpha == 2) {
    if (k == 0) return 0.25;
    if (k == 2) return 0.125;
    return -2.0 * sin_half(k) / (M_PI * k * (double(k) * k - 4.0));
  }
  // alpha >= 3: numeric Fourier coefficient
  auto f = [&](double th) {
    double c = std::cos(th);
    return c > 0 ? std::pow(c, alpha) * std::cos(k * th) : 0.0;
  };
  return integrate(f, 0.0, M_PI / 2.0, 1e-13, {}, std::max(8, k / 2 + 2)) / M_PI;
}

ClosedLambda lambda_closed(int d, int alpha, int k) {
  require(k >= alpha + 1, "lambda_closed: requires k >= alpha + 1");
  ClosedLambda out;
  out.quadrature = lambda_quadrature(d, alpha, k);
  if ((k - alpha) % 2 == 0) {
    out.zero_by_parity = true;
    out.value = 0.0;
    out.agrees_with_quadrature = std::abs(out.quadrature) <= 1e-10;
    return out;
  }
  double lfact = std::lgamma(alpha + 1.0);
  double logmag = lfact - k * std::log(2.0) + std::lgamma(d / 2.0) +
                  std::lgamma(double(k - alpha)) -
                  std::lgamma((k - alpha + 1) / 2.0) -
                  std::lgamma((k + d + alpha + 1) / 2.0);
  double sgn = ((k - alpha - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
  out.value = (d - 1) / (2.0 * M_PI) * sgn * std::exp(logmag);
  out.agrees_with_quadrature =
      std::abs(out.value - out.quadrature) <=
      1e-6 * std::max(std::abs(out.quadrature), 1e-12);
  return out;
}

namespace {

// Shared panel grid on [0, pi] (split at pi/2) fine enough for P_kmax; all
// degrees are accumulated in a single sweep of the three-term recurrence.
std::vector<double> batch_coeffs(const std::function<double(double)>& phi_of_t,
                                 const std::vector<double>& t_breaks, int d,
                                 int kmax) {
  const GaussRule& rule = gauss_legendre(16);
  int panels = std::max(64, kmax / 2 + 8);
  std::vector<double> edges{0.0, M_PI / 2.0, M_PI};
  for (double tb : t_breaks) {
    if (tb > -1.0 && tb < 1.0) edges.push_back(std::acos(tb));
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::vector<double> nodes, base;  // base = phi(cos th) sin^{d-1} * weight
  for (size_t s = 0; s + 1 < edges.size(); ++s) {
    double lo = edges[s], hi = edges[s + 1];
    int np = std::max(1, int(std::lround(panels * (hi - lo) / M_PI)));
    double w = (hi - lo) / np;
    for (int p = 0; p < np; ++p) {
      double a = lo + p * w, c = a + 0.5 * w, h = 0.5 * w;
      for (size_t q = 0; q < rule.nodes.size(); ++q) {
        double th = c + h * rule.nodes[q];
        double t = std::cos(th);
        double sw = d == 1 ? 1.0 : std::pow(std::sin(th), d - 1);
        nodes.push_back(t);
        base.push_back(phi_of_t(t) * sw * rule.weights[q] * h);
      }
    }
  }

  const size_t M = nodes.size();
  std::vector<double> pm1(M, 1.0), pc(M), out(static_cast<size_t>(kmax) + 1, 0.0);
  for (size_t i = 0; i < M; ++i) pc[i] = nodes[i];
  double om = omega_ratio(d);
  for (size_t i = 0; i < M; ++i) out[0] += base[i];
  if (kmax >= 1)
    for (size_t i = 0; i < M; ++i) out[1] += base[i] * pc[i];
  for (int k = 2; k <= kmax; ++k) {
    int j = k - 1;
    for (size_t i = 0; i < M; ++i) {
      double pn = ((2.0 * j + d - 1.0) * nodes[i] * pc[i] - j * pm1[i]) / (j + d - 1.0);
      pm1[i] = pc[i];
      pc[i] = pn;
      out[size_t(k)] += base[i] * pn;
    }
  }
  for (double& v : out) v *= om;
  return out;
}

bool lambda_is_zero_degree(int alpha, int k) {
  return k > alpha && (k - alpha) % 2 == 0;
}

}  // namespace

std::vector<double> lambda_table(int d, int alpha, int kmax) {
  static std::map<std::tuple<int, int>, std::vector<double>> cache;
  static std::mutex mu;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({d, alpha});
    if (it != cache.end() && int(it->second.size()) > kmax) {
      return {it->second.begin(), it->second.begin() + kmax + 1};
    }
  }
  auto sigma = [alpha](double t) {
    if (t <= 0) return 0.0;
    return alpha == 0 ? 1.0 : std::pow(t, alpha);
  };
  std::vector<double> lam = batch_coeffs(sigma, {0.0}, d, kmax);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{d, alpha}];
    if (slot.size() < lam.size()) slot = lam;
  }
  return lam;
}

RidgeProfile RidgeProfile::linear() {
  RidgeProfile p;
  p.phi = [](double t) { return t; };
  p.parity = -1;
  return p;
}

RidgeProfile RidgeProfile::absolute() {
  RidgeProfile p;
  p.phi = [](double t) { return std::abs(t); };
  p.breakpoints = {0.0};
  p.parity = +1;
  return p;
}

RidgeProfile RidgeProfile::relu_pow(int alpha) {
  RidgeProfile p;
  p.phi = [alpha](double t) {
    if (t <= 0) return 0.0;
    return alpha == 0 ? 1.0 : std::pow(t, alpha);
  };
  p.breakpoints = {0.0};
  p.parity = 0;
  return p;
}

RidgeProfile RidgeProfile::legendre(int j, int d) {
  RidgeProfile p;
  p.phi = [j, d](double t) { return legendre_P(j, d, t); };
  p.parity = j % 2 == 0 ? +1 : -1;
  return p;
}

RidgeProfile RidgeProfile::from_coeffs(std::vector<double> c, int parity) {
  RidgeProfile p;
  p.coeffs = std::move(c);
  p.parity = parity;
  return p;
}

std::vector<double> ridge_coeffs(const RidgeProfile& profile, int d, int kmax) {
  if (!profile.coeffs.empty()) {
    std::vector<double> c = profile.coeffs;
    c.resize(static_cast<size_t>(kmax) + 1, 0.0);
    return c;
  }
  require(bool(profile.phi), "ridge_coeffs: profile has neither phi nor coeffs");
  return batch_coeffs(profile.phi, profile.breakpoints, d, kmax);
}

Gamma2Result gamma2_ridge(const RidgeProfile& profile, int d, int alpha, int K) {
  require(K >= 2, "gamma2_ridge: K must be >= 2");
  std::vector<double> c = ridge_coeffs(profile, d, K);
  std::vector<double> lam = lambda_table(d, alpha, K);

  Gamma2Result res;
  double total_mass = 0.0;
  for (int k = 0; k <= K; ++k)
    total_mass += c[size_t(k)] * c[size_t(k)] * double(harmonic_dim(d, k));

  std::vector<double> term(static_cast<size_t>(K) + 1, 0.0);
  double S = 0.0;
  for (int k = 0; k <= K; ++k) {
    double mass = c[size_t(k)] * c[size_t(k)] * double(harmonic_dim(d, k));
    if (lambda_is_zero_degree(alpha, k)) {
      if (mass > 1e-12 * std::max(total_mass, 1e-300)) {
        res.verdict = Gamma2Verdict::ParityViolation;
        return res;
      }
      continue;
    }
    term[size_t(k)] = mass / (lam[size_t(k)] * lam[size_t(k)]);
    S += term[size_t(k)];
    if (k == K / 4 || k == K / 2 || k == 3 * K / 4 || k == K)
      res.partial_sums.push_back({k, S});
  }
  res.value = std::sqrt(S);

  // Ratio test on the tail: average term ratio across the last same-parity
  // degrees; >= 1 up to slack means the series keeps growing. Terms at the
  // numerical-noise floor are not evidence either way.
  double max_term = 0.0;
  for (int k = 0; k <= K; ++k) max_term = std::max(max_term, term[size_t(k)]);
  const double noise_floor = 1e-12 * max_term;
  double ratio_acc = 0.0;
  int ratio_cnt = 0;
  for (int k = K; k > K / 2 && ratio_cnt < 10; k -= 1) {
    if (term[size_t(k)] > noise_floor && k - 2 >= 0 && term[size_t(k - 2)] > noise_floor) {
      ratio_acc += term[size_t(k)] / term[size_t(k - 2)];
      ++ratio_cnt;
    }
  }
  if (ratio_cnt > 0 && ratio_acc / ratio_cnt >= 0.999)
    res.verdict = Gamma2Verdict::Diverging;
  else
    res.verdict = Gamma2Verdict::Converged;
  return res;
}

PoissonResult poisson_approximant(const RidgeProfile& profile, int d, int alpha,
                                  double r, int kmax, int grid) {
  require(r > 0 && r < 1, "poisson_approximant: r must be in (0, 1)");
  const int want_parity = alpha % 2 == 1 ? +1 : -1;
  if (profile.parity != 0 && profile.parity != want_parity)
    throw std::invalid_argument("poisson_approximant: profile has the wrong parity");

  // Parity-corrected profile (even part for odd alpha, odd part for even).
  RidgeProfile sym = profile;
  if (profile.coeffs.empty()) {
    auto phi = profile.phi;
    double sgn = want_parity;
    sym.phi = [phi, sgn](double t) { return 0.5 * (phi(t) + sgn * phi(-t)); };
    sym.breakpoints = profile.breakpoints;
    for (double b : profile.breakpoints) sym.breakpoints.push_back(-b);
    sym.parity = want_parity;
  }

  std::vector<double> c = ridge_coeffs(sym, d, kmax);
  // Exact parity zeros of the corrected profile.
  for (int k = 0; k <= kmax; ++k)
    if ((want_parity == +1 && k % 2 == 1) || (want_parity == -1 && k % 2 == 0))
      c[size_t(k)] = 0.0;

  std::vector<double> lam = lambda_table(d, alpha, kmax);
  std::vector<double> damped(static_cast<size_t>(kmax) + 1);
  double g2 = 0.0;
  double rk = 1.0;
  for (int k = 0; k <= kmax; ++k) {
    damped[size_t(k)] = rk * c[size_t(k)];
    if (!lambda_is_zero_degree(alpha, k) && c[size_t(k)] != 0.0) {
      double mass = damped[size_t(k)] * damped[size_t(k)] * double(harmonic_dim(d, k));
      g2 += mass / (lam[size_t(k)] * lam[size_t(k)]);
    }
    rk *= r;
  }

  // Sup distance between the damped series and the corrected profile.
  double sup_err = 0.0;
  for (int i = 0; i < grid; ++i) {
    double t = -1.0 + 2.0 * double(i) / (grid - 1);
    double pm1 = 1.0, pc = t, acc = damped[0];
    if (kmax >= 1) acc += damped[1] * double(harmonic_dim(d, 1)) * pc;
    for (int k = 2; k <= kmax; ++k) {
      int j = k - 1;
      double pn = ((2.0 * j + d - 1.0) * t * pc - j * pm1) / (j + d - 1.0);
      pm1 = pc;
      pc = pn;
      if (damped[size_t(k)] != 0.0)
        acc += damped[size_t(k)] * double(harmonic_dim(d, k)) * pn;
    }
    double target;
    if (!sym.coeffs.empty()) {
      // coefficient-backed profile: target is the undamped series
      double qm1 = 1.0, qc = t;
      target = c[0];
      if (kmax >= 1) target += c[1] * double(harmonic_dim(d, 1)) * qc;
      for (int k = 2; k <= kmax; ++k) {
        int j = k - 1;
        double qn = ((2.0 * j + d - 1.0) * t * qc - j * qm1) / (j + d - 1.0);
        qm1 = qc;
        qc = qn;
        if (c[size_t(k)] != 0.0) target += c[size_t(k)] * double(harmonic_dim(d, k)) * qn;
      }
    } else {
      target = sym.phi(t);
    }
    sup_err = std::max(sup_err, std::abs(acc - target));
  }

  PoissonResult out;
  out.damped = RidgeProfile::from_coeffs(std::move(damped), want_parity);
  out.gamma2 = std::sqrt(g2);
  out.sup_error = sup_err;
  out.r = r;
  return out;
}

double kernel_series(int d, int alpha, int K, double u) {
  require(u >= -1.0 - 1e-12 && u <= 1.0 + 1e-12, "kernel_series: u must be in [-1, 1]");
  u = std::clamp(u, -1.0, 1.0);
  std::vector<double> lam = lambda_table(d, alpha, K);
  double s = 0.0;
  double pm1 = 1.0, pc = u;
  s += lam[0] * lam[0];
  if (K >= 1) s += double(harmonic_dim(d, 1)) * lam[1] * lam[1] * pc;
  for (int k = 2; k <= K; ++k) {
    int j = k - 1;
    double pn = ((2.0 * j + d - 1.0) * u * pc - j * pm1) / (j + d - 1.0);
    pm1 = pc;
    pc = pn;
    s += double(harmonic_dim(d, k)) * lam[size_t(k)] * lam[size_t(k)] * pn;
  }
  return s;
}

}  // namespace convexnn
