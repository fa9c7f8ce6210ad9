#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "darboux/flow.hpp"

// Finite-difference stencils along recorded trajectories.
namespace darboux::detail {

inline constexpr int kHalf = 3;
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// Minimum |sin(alpha) cos(alpha)| at an oracle centre on a cusped Darboux
// trajectory.
inline constexpr double kCuspGap = 0.05;

// Centres at which the oracles are evaluated. Stencils are taken in the
// integration parameter t, which stays smooth through cusps; only the
// centre must keep away from them since ds/dt vanishes there.
inline std::vector<bool> centre_mask(const Trajectory& tr) {
  const size_t n = tr.samples.size();
  std::vector<bool> ok(n, false);
  const bool cusped = tr.kind == "darboux";
  for (size_t i = kHalf; i + kHalf < n; ++i) {
    const double a = tr.samples[i].alpha_lift;
    ok[i] = !cusped || std::abs(std::sin(a) * std::cos(a)) >= kCuspGap;
  }
  return ok;
}

inline std::vector<double> stencil_nodes(const Trajectory& tr, size_t i) {
  std::vector<double> x;
  for (size_t j = i - kHalf; j <= i + kHalf; ++j) x.push_back(tr.samples[j].t);
  return x;
}

template <class F>
auto stencil_sum(const std::vector<double>& w, const Trajectory& tr, size_t i, F f) {
  using T = decltype(f(tr.samples[i]));
  T acc = w[0] * f(tr.samples[i - kHalf]);
  for (int k = 1; k <= 2 * kHalf; ++k) acc += w[k] * f(tr.samples[i - kHalf + k]);
  return acc;
}

inline void require_dense(const Trajectory& tr) {
  if (tr.samples.size() < 2 * kHalf + 3) throw SparseTrajectoryError("trajectory too short for the FD oracle");
  double max_gap = 0;
  for (size_t i = 1; i < tr.samples.size(); ++i)
    max_gap = std::max(max_gap, tr.samples[i].s - tr.samples[i - 1].s);
  if (max_gap > 0.25) throw SparseTrajectoryError("trajectory samples too sparse in arc length");
}

inline double nan_max(const std::vector<double>& v) {
  double m = kNaN;
  for (double x : v)
    if (std::isfinite(x) && !(x <= m)) m = x;
  return m;
}


// Chart data at every sample, with k_n along the recorded angle.
struct ChartSamples {
  std::vector<ChartPoint> cp;
  std::vector<double> kn;
  ChartSamples(const Surface& surf, const Trajectory& tr) : cp(tr.samples.size()), kn(tr.samples.size()) {
    for (size_t i = 0; i < cp.size(); ++i) {
      const Sample& sm = tr.samples[i];
      cp[i] = surf.evaluate(sm.state.u, sm.state.v);
      const double c = std::cos(sm.alpha_lift), s = std::sin(sm.alpha_lift);
      kn[i] = cp[i].k1.f * c * c + cp[i].k2.f * s * s;
    }
  }
};

struct CurveScalars {
  double st = 0;    // ds/dt
  double kn_s = 0;  // dk_n/ds
  double tau_g = 0, k_g = 0;
};

// Curve scalars at centre i from the chart: k_g = dalpha/ds + k_g1 cos + k_g2 sin
// along the direction of travel.
inline CurveScalars curve_scalars(const ChartSamples& cs, const Trajectory& tr, size_t i) {
  const auto w = fd_weights(tr.samples[i].t, stencil_nodes(tr, i), 1)[1];
  const double ut = stencil_sum(w, tr, i, [](const Sample& m) { return m.state.u; });
  const double vt = stencil_sum(w, tr, i, [](const Sample& m) { return m.state.v; });
  // Arc-length speed from the embedding; s itself has a kink at each cusp.
  const double st = stencil_sum(w, tr, i, [](const Sample& m) -> Vec3 { return m.position; }).norm();
  const double at = stencil_sum(w, tr, i, [](const Sample& m) { return m.alpha_lift; });
  double knt = 0;
  for (int k = 0; k <= 2 * kHalf; ++k) knt += w[k] * cs.kn[i - kHalf + k];

  const ChartPoint& p = cs.cp[i];
  const double sqE = std::sqrt(p.E.f), sqG = std::sqrt(p.G.f);
  // Direction of travel: alpha, or alpha + pi when the chart velocity
  // points against the principal frame direction of alpha.
  double b = tr.samples[i].alpha_lift;
  if (sqE * ut * std::cos(b) + sqG * vt * std::sin(b) < 0) b += std::numbers::pi;
  const double c = std::cos(b), s = std::sin(b);
  const double kg1 = -p.E.v / (2 * p.E.f * sqG), kg2 = p.G.u / (2 * p.G.f * sqE);
  CurveScalars out;
  out.st = st;
  out.kn_s = knt / st;
  out.k_g = at / st + kg1 * c + kg2 * s;
  out.tau_g = (p.k2.f - p.k1.f) * c * s;
  return out;
}

}  // namespace darboux::detail
