#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "ldpc/channel.hpp"
#include "ldpc/schedule.hpp"
#include "ldpc/tanner.hpp"

// Gaussian-approximation mean evolution for flooding BP, group-shuffled BP
// and its non-disjoint variant. Message densities are modeled as consistent
// Gaussians (variance = 2 * mean), so the recursion tracks means only. The
// scalar transfer function is
//   Phi(mu) = 1 - E[tanh(tau/2)],  tau ~ N(mu, 2*mu).
namespace ldpc::ga {

namespace detail {

// 20-point Gauss-Legendre rule on [-1, 1], computed once by Newton iteration
// on the Legendre recurrence.
struct GaussLegendre20 {
  std::array<double, 20> nodes{};
  std::array<double, 20> weights{};
  GaussLegendre20() {
    constexpr int n = 20;
    for (int i = 0; i < (n + 1) / 2; ++i) {
      double x = std::cos(3.14159265358979323846 * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-15) break;
      }
      nodes[i] = -x;
      nodes[n - 1 - i] = x;
      const double w = 2.0 / ((1.0 - x * x) * dp * dp);
      weights[i] = w;
      weights[n - 1 - i] = w;
    }
  }
};

inline const GaussLegendre20& gl20() {
  static const GaussLegendre20 rule;
  return rule;
}

// Integrand of Phi in the standardized variable u = (tau - mu) / (2*sqrt(mu)):
//   (2/sqrt(pi)) * exp(-u^2) * sigmoid(-(mu + 2*sqrt(mu)*u)).
// Written with 1 - tanh = 2*sigmoid so no cancellation occurs for large mu,
// where Phi ~ exp(-mu/4) sits near the integrand's saddle at u = -sqrt(mu)/2.
inline double phi_integrand(double mu, double root_mu, double u) {
  const double gauss = std::exp(-u * u);
  if (gauss == 0.0) return 0.0;
  const double x = mu + 2.0 * root_mu * u;
  const double sig = x > 0.0 ? std::exp(-x) / (1.0 + std::exp(-x)) : 1.0 / (1.0 + std::exp(x));
  return 1.1283791670955125738961589031215 * gauss * sig;  // 2/sqrt(pi)
}

inline double phi_panels(double mu, double panel_width) {
  const double root_mu = std::sqrt(mu);
  const double lo = -0.5 * root_mu - 46.0;
  const double hi = 12.0;
  const int panels = static_cast<int>(std::ceil((hi - lo) / panel_width));
  const auto& rule = gl20();
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double a = lo + (hi - lo) * p / panels;
    const double b = lo + (hi - lo) * (p + 1) / panels;
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double acc = 0.0;
    for (int k = 0; k < 20; ++k) acc += rule.weights[k] * phi_integrand(mu, root_mu, mid + half * rule.nodes[k]);
    total += half * acc;
  }
  return total;
}

}  // namespace detail

// Phi by quadrature, refined until two panelizations agree to ~1e-11
// relative. This is the reference-grade evaluation; the recursion itself uses
// the tabulated version below.
inline double phi(double mu) {
  if (!(mu >= 0.0)) throw std::domain_error("phi requires mu >= 0");
  if (mu == 0.0) return 1.0;
  double prev = detail::phi_panels(mu, 1.0);
  for (double width : {0.5, 0.25, 0.125}) {
    const double cur = detail::phi_panels(mu, width);
    if (std::abs(cur - prev) <= 1e-11 * std::abs(cur)) return cur;
    prev = cur;
  }
  return prev;
}

// Tabulated Phi on a log-spaced grid with monotone cubic Hermite
// interpolation of ln(Phi) against ln(mu), plus the matching inverse. Below
// the grid Phi(mu) = 1 - mu/2 to O(mu^2); above it the table saturates (the
// recursion clamps its means below that point).
class PhiTable {
 public:
  static constexpr double kMuMin = 1e-8;
  static constexpr double kMuMax = 2500.0;
  static constexpr int kKnots = 10000;

  static const PhiTable& instance() {
    static const PhiTable table;
    return table;
  }

  double value(double mu) const {
    if (!(mu >= 0.0)) throw std::domain_error("phi requires mu >= 0");
    if (mu == 0.0) return 1.0;
    if (mu <= kMuMin) return 1.0 - 0.5 * mu;
    if (mu >= kMuMax) mu = kMuMax;
    const double x = std::log(mu);
    int i = static_cast<int>((x - lx0_) / h_);
    i = std::clamp(i, 0, kKnots - 2);
    const double t = (x - (lx0_ + i * h_)) / h_;
    return std::exp(hermite(i, t));
  }

  double inverse(double y) const {
    if (!(y > 0.0) || y > 1.0) throw std::invalid_argument("phi_inverse requires y in (0, 1]");
    if (y == 1.0) return 0.0;
    if (y >= head_value_) return 2.0 * (1.0 - y);
    const double target = std::log(y);
    if (target <= ly_[kKnots - 1]) return kMuMax;
    // ly_ is strictly decreasing; locate the bracketing interval.
    int lo = 0, hi = kKnots - 1;
    while (hi - lo > 1) {
      const int mid = (lo + hi) / 2;
      (ly_[mid] > target ? lo : hi) = mid;
    }
    // Safeguarded Newton on the cubic within [0, 1].
    double t = 0.5, tl = 0.0, th = 1.0;
    for (int it = 0; it < 80; ++it) {
      const double f = hermite(lo, t) - target;
      (f > 0.0 ? tl : th) = t;
      const double d = hermite_deriv(lo, t);
      double step = d != 0.0 ? t - f / d : -1.0;
      t = (step > tl && step < th) ? step : 0.5 * (tl + th);
      if (th - tl < 1e-15) break;
    }
    return std::exp(lx0_ + (lo + t) * h_);
  }

 private:
  PhiTable() : ly_(kKnots), slope_(kKnots) {
    lx0_ = std::log(kMuMin);
    h_ = (std::log(kMuMax) - lx0_) / (kKnots - 1);
    for (int i = 0; i < kKnots; ++i) ly_[i] = std::log(detail::phi_panels(std::exp(lx0_ + i * h_), 0.5));
    // Quadrature noise must not break strict monotonicity at the flat end.
    for (int i = 1; i < kKnots; ++i) ly_[i] = std::min(ly_[i], ly_[i - 1] - 1e-14);

    // Fourth-order finite-difference slopes with a Fritsch-Carlson clamp so
    // the interpolant is monotone on every interval.
    const auto fd = [&](int i) {
      if (i >= 2 && i + 2 < kKnots)
        return (-ly_[i + 2] + 8.0 * ly_[i + 1] - 8.0 * ly_[i - 1] + ly_[i - 2]) / (12.0 * h_);
      if (i == 0) return (ly_[1] - ly_[0]) / h_;
      if (i == kKnots - 1) return (ly_[kKnots - 1] - ly_[kKnots - 2]) / h_;
      return (ly_[i + 1] - ly_[i - 1]) / (2.0 * h_);
    };
    for (int i = 0; i < kKnots; ++i) {
      const double left = i > 0 ? (ly_[i] - ly_[i - 1]) / h_ : 0.0;
      const double right = i + 1 < kKnots ? (ly_[i + 1] - ly_[i]) / h_ : 0.0;
      double floor_slope = 3.0 * std::min(i > 0 ? left : right, i + 1 < kKnots ? right : left);
      slope_[i] = std::clamp(fd(i), floor_slope, 0.0);
    }
    head_value_ = std::exp(ly_[0]);
  }

  double hermite(int i, double t) const {
    const double y0 = ly_[i], y1 = ly_[i + 1];
    const double m0 = slope_[i] * h_, m1 = slope_[i + 1] * h_;
    const double t2 = t * t, t3 = t2 * t;
    return y0 * (2 * t3 - 3 * t2 + 1) + m0 * (t3 - 2 * t2 + t) + y1 * (-2 * t3 + 3 * t2) + m1 * (t3 - t2);
  }

  double hermite_deriv(int i, double t) const {
    const double y0 = ly_[i], y1 = ly_[i + 1];
    const double m0 = slope_[i] * h_, m1 = slope_[i + 1] * h_;
    const double t2 = t * t;
    return y0 * (6 * t2 - 6 * t) + m0 * (3 * t2 - 4 * t + 1) + y1 * (-6 * t2 + 6 * t) + m1 * (3 * t2 - 2 * t);
  }

  double lx0_ = 0.0, h_ = 0.0, head_value_ = 1.0;
  std::vector<double> ly_, slope_;
};

inline double phi_inverse(double y) { return PhiTable::instance().inverse(y); }

// Class means saturate here, safely below the table ceiling; any mean this
// large ends the iteration at the convergence cap anyway.
constexpr double kMuSaturation = 2200.0;

// Convergence cap standing in for "mean grows without bound". 512 is the
// smallest power of two for which every tracked iteration count moves by at
// most one when the cap doubles (see the stability check in the test suite).
constexpr double kDefaultMuCap = 512.0;

struct GaConfig {
  DegreeDistribution dd;
  ScheduleKind kind = ScheduleKind::flooding;
  int n_groups = 1;
  double overlap_ratio = 0.0;
  double mu0 = 0.0;        // mean of the channel LLR, 2/sigma^2
  double mu_cap = kDefaultMuCap;
  int max_iterations = 5000;
};

// Per-sub-iteration class means. CN classes, seen from the g-th
// sub-iteration: a = not yet updated this iteration (mean mu_c_prev_iter),
// b = shared with the previous group, c = fresh in the current group,
// d = updated CNs outside the current overlap (running mean mu_c_d).
// Vectors are 1-indexed by sub-iteration; slot 0 is unused.
struct GaState {
  double mu_c_prev_iter = 0.0;
  double mu_c_d = 0.0;
  std::vector<double> mu_c_b;
  std::vector<double> mu_c_c;
  std::map<int, double> mu_v;          // per VN degree, feeding Class-c CNs
  std::map<int, double> mu_v_overlap;  // conditional version feeding Class-b CNs
};

namespace detail {

inline double binom(int n, int k) {
  double c = 1.0;
  for (int j = 1; j <= k; ++j) c *= static_cast<double>(n - k + j) / j;
  return c;
}

}  // namespace detail

// Probability that a degree-i VN has p Class-d and q Class-b neighbors among
// its i-1 non-recipient edges. Binomial in the Class-d fraction x for the
// first sub-iteration, multinomial in (y, z) afterwards:
//   x = 1/(G-(G-1)r),  y = g(1-r)/(G-(G-1)r),  z = r/(G-(G-1)r).
inline double omega(int i, int p, int q, int g, const GaConfig& cfg) {
  if (i < 1 || p < 0 || q < 0 || p + q > i - 1) throw std::invalid_argument("omega requires p, q >= 0, p+q <= i-1");
  const int G = cfg.n_groups;
  const double r = cfg.overlap_ratio;
  if (g < 1 || g > G || !(r >= 0.0) || r >= 1.0) throw std::invalid_argument("omega: invalid (G, r, g)");
  const double denom = G - (G - 1) * r;
  if (g == 1) {
    if (q != 0) return 0.0;
    const double x = 1.0 / denom;
    return detail::binom(i - 1, p) * std::pow(x, p) * std::pow(1.0 - x, i - 1 - p);
  }
  const double y = g * (1.0 - r) / denom;
  const double z = r / denom;
  const double rest = std::max(1.0 - y - z, 0.0);
  return detail::binom(i - 1, p) * detail::binom(i - 1 - p, q) * std::pow(y, p) * std::pow(z, q) *
         std::pow(rest, i - 1 - p - q);
}

// Mean of the message a degree-i VN sends when p of its other neighbors are
// Class-d, q are Class-b and the rest are Class-a:
//   mu0 + p*mu_c_d + q*mu_c_b[g] + (i-1-p-q)*mu_c_prev.
inline double vn_mean(int i, int p, int q, const GaState& st, const GaConfig& cfg, int g) {
  if (i < 1 || p < 0 || q < 0 || p + q > i - 1) throw std::invalid_argument("vn_mean requires p, q >= 0, p+q <= i-1");
  return cfg.mu0 + p * st.mu_c_d + q * st.mu_c_b.at(g) + (i - 1 - p - q) * st.mu_c_prev_iter;
}

// omega-weighted average over all feasible (p, q).
inline double vn_mean_avg(int i, const GaState& st, const GaConfig& cfg, int g) {
  double acc = 0.0;
  for (int p = 0; p <= i - 1; ++p)
    for (int q = 0; q <= i - 1 - p; ++q) acc += omega(i, p, q, g, cfg) * vn_mean(i, p, q, st, cfg, g);
  return acc;
}

// Conditional version given at least one Class-d neighbor; this is the mean
// of messages coming from VNs that bridge the previous group into the
// current one, and it feeds the Class-b CN update.
inline double vn_mean_overlap(int i, const GaState& st, const GaConfig& cfg, int g) {
  if (g <= 1) throw std::invalid_argument("vn_mean_overlap is defined for sub-iterations g > 1");
  if (i - 1 == 0) throw std::invalid_argument("vn_mean_overlap: degree-1 VN has no conditioning mass");
  double num = 0.0, den = 0.0;
  for (int p = 1; p <= i - 1; ++p) {
    for (int q = 0; q <= i - 1 - p; ++q) {
      const double w = omega(i, p, q, g, cfg);
      num += w * vn_mean(i, p, q, st, cfg, g);
      den += w;
    }
  }
  if (den <= 0.0) throw std::invalid_argument("vn_mean_overlap: zero conditioning mass");
  return num / den;
}

namespace detail {

// Degree-averaged CN output mean from per-degree VN input means:
//   mu_c = sum_j rho_j * Phi^-1(1 - (1 - sum_i lambda_i Phi(mu_v_i))^(j-1)).
inline double cn_mean_from(const std::map<int, double>& vn_means, const DegreeDistribution& dd) {
  const PhiTable& table = PhiTable::instance();
  double s = 0.0;
  for (const auto& [i, frac] : dd.lambda) s += frac * table.value(vn_means.at(i));
  s = std::clamp(s, 0.0, 1.0);
  double acc = 0.0;
  for (const auto& [j, frac] : dd.rho) {
    const double arg = s >= 1.0 ? 1.0 : -std::expm1((j - 1) * std::log1p(-s));
    acc += frac * table.inverse(std::clamp(arg, 1e-300, 1.0));
  }
  return acc;
}

}  // namespace detail

inline double cn_mean_class_c(const GaState& st, const GaConfig& cfg, int /*g*/) {
  return detail::cn_mean_from(st.mu_v, cfg.dd);
}

inline double cn_mean_class_b(const GaState& st, const GaConfig& cfg, int g) {
  if (g <= 1) throw std::invalid_argument("Class-b CNs exist only for sub-iterations g > 1");
  return detail::cn_mean_from(st.mu_v_overlap, cfg.dd);
}

// Running mean over the CNs already updated this iteration (current overlap
// excluded). For g = 1 it is the first group's fresh mean; otherwise the
// g-term average mixing each intermediate group's Class-b and Class-c parts
// with weights r/(1-r) and (1-2r)/(1-r) (all Class-b for r >= 0.5).
inline double cn_mean_class_d(const GaState& st, const GaConfig& cfg, int g) {
  const double r = cfg.overlap_ratio;
  if (g < 1) throw std::invalid_argument("cn_mean_class_d requires g >= 1");
  if (r >= 1.0) throw std::invalid_argument("cn_mean_class_d requires r < 1");
  if (g == 1) return st.mu_c_c.at(1);
  double acc = st.mu_c_c.at(1) + st.mu_c_c.at(g);
  if (r < 0.5) {
    const double w_b = r / (1.0 - r);
    const double w_c = (1.0 - 2.0 * r) / (1.0 - r);
    for (int gp = 2; gp <= g - 1; ++gp) acc += w_b * st.mu_c_b.at(gp) + w_c * st.mu_c_c.at(gp);
  } else {
    for (int gp = 2; gp <= g - 1; ++gp) acc += st.mu_c_b.at(gp);
  }
  return acc / g;
}

// End-of-iteration CN mean, a normalized mix of the last sub-iteration's
// Class-b and Class-c means; reduces to the Class-c mean when r = 0.
inline double iteration_final_mean(const GaState& st, const GaConfig& cfg) {
  const int G = cfg.n_groups;
  const double r = cfg.overlap_ratio;
  const double denom = G - (G - 1) * r;
  return (r * st.mu_c_b.at(G) + (G - G * r) * st.mu_c_c.at(G)) / denom;
}

struct GaRunResult {
  bool converged = false;
  int iterations = 0;
  std::vector<double> mu_trace;  // iteration-final CN means
};

// Runs the per-sub-iteration mean recursion until the iteration-final mean
// reaches mu_cap ("error free") or growth stalls. Flooding and GSBP are the
// G = 1 and r = 0 specializations of the same engine.
//
// Within sub-iteration g the VN means use the freshest values available when
// the group's CNs fire: the running Class-d mean through g-1 (last
// iteration's mean when nothing has fired yet) and, for the Class-b slots,
// the previous group's fresh-CN mean, since the shared CNs last spoke as
// Class-c members of group g-1.
inline GaRunResult iterations_to_convergence(const GaConfig& cfg) {
  if (!(cfg.mu0 > 0.0)) throw std::invalid_argument("mu0 must be positive");
  if (!(cfg.mu_cap > cfg.mu0)) throw std::invalid_argument("mu_cap must exceed mu0");
  if (cfg.n_groups < 1) throw std::invalid_argument("need at least one group");
  for (const auto& [i, frac] : cfg.dd.lambda)
    if (i < 2 && frac > 0.0) throw std::invalid_argument("the analysis needs VN degrees >= 2");

  GaConfig eff = cfg;
  eff.n_groups = cfg.kind == ScheduleKind::flooding ? 1 : cfg.n_groups;
  // A single group has nothing to overlap with.
  eff.overlap_ratio = (cfg.kind == ScheduleKind::nondisjoint && eff.n_groups > 1) ? cfg.overlap_ratio : 0.0;
  const int G = eff.n_groups;
  const double r = eff.overlap_ratio;

  GaState st;
  st.mu_c_b.assign(G + 1, 0.0);
  st.mu_c_c.assign(G + 1, 0.0);

  GaRunResult res;
  double mu_prev = 0.0;
  for (int l = 1; l <= cfg.max_iterations; ++l) {
    st.mu_c_prev_iter = mu_prev;
    double mu_d_running = mu_prev;
    for (int g = 1; g <= G; ++g) {
      st.mu_c_d = mu_d_running;
      st.mu_c_b[g] = g > 1 ? st.mu_c_c[g - 1] : 0.0;
      for (const auto& [i, frac] : eff.dd.lambda) st.mu_v[i] = vn_mean_avg(i, st, eff, g);
      if (g > 1 && r > 0.0)
        for (const auto& [i, frac] : eff.dd.lambda) st.mu_v_overlap[i] = vn_mean_overlap(i, st, eff, g);
      const double cc = std::min(cn_mean_class_c(st, eff, g), kMuSaturation);
      const double cb = (g > 1 && r > 0.0) ? std::min(cn_mean_class_b(st, eff, g), kMuSaturation) : 0.0;
      st.mu_c_c[g] = cc;
      st.mu_c_b[g] = cb;
      mu_d_running = std::min(cn_mean_class_d(st, eff, g), kMuSaturation);
    }
    const double mu_final = iteration_final_mean(st, eff);
    res.mu_trace.push_back(mu_final);
    res.iterations = l;
    if (mu_final >= cfg.mu_cap) {
      res.converged = true;
      return res;
    }
    constexpr int kWindow = 10;
    if (l > kWindow && mu_final - res.mu_trace[l - 1 - kWindow] < 1e-12 * std::max(1.0, mu_final)) return res;
    mu_prev = mu_final;
  }
  return res;
}

struct ThresholdOptions {
  double lo_db = 0.0;
  double hi_db = 6.0;
  double resolution_db = 0.001;
  double mu_cap = kDefaultMuCap;
  int max_iterations = 20000;
};

// Smallest Eb/N0 (at the stated resolution) for which the recursion reaches
// the cap. Bisection over a bracket that must straddle the threshold.
inline double threshold_search(const DegreeDistribution& dd, ScheduleKind kind, int n_groups, double overlap,
                               ThresholdOptions opt = {}) {
  const double rate = design_rate(dd);
  const auto converges = [&](double ebn0_db) {
    GaConfig cfg;
    cfg.dd = dd;
    cfg.kind = kind;
    cfg.n_groups = n_groups;
    cfg.overlap_ratio = overlap;
    cfg.mu0 = 2.0 / sigma2_from_ebn0(ebn0_db, rate);
    cfg.mu_cap = opt.mu_cap;
    cfg.max_iterations = opt.max_iterations;
    return iterations_to_convergence(cfg).converged;
  };
  if (converges(opt.lo_db)) throw std::invalid_argument("bracket failure: lower bound already converges");
  if (!converges(opt.hi_db)) throw std::invalid_argument("bracket failure: upper bound does not converge");
  double lo = opt.lo_db, hi = opt.hi_db;
  while (hi - lo > opt.resolution_db) {
    const double mid = 0.5 * (lo + hi);
    (converges(mid) ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace ldpc::ga
