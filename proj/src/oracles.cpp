#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "darboux/flow.hpp"
#include "stencil.hpp"

namespace darboux {

using namespace detail;

std::vector<std::vector<double>> fd_weights(double x0, const std::vector<double>& x, int m) {
  const int n = static_cast<int>(x.size());
  std::vector<std::vector<double>> c(m + 1, std::vector<double>(n, 0.0));
  double c1 = 1.0, c4 = x[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (int k = mn; k >= 1; --k) c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

std::vector<double> darboux_residual_profile(const Surface& surf, const Trajectory& tr) {
  require_dense(tr);
  const size_t n = tr.samples.size();
  const std::vector<bool> ok = centre_mask(tr);
  const ChartSamples cs(surf, tr);
  std::vector<double> res(n, kNaN);
  for (size_t i = 0; i < n; ++i) {
    if (!ok[i]) continue;
    const CurveScalars c = curve_scalars(cs, tr, i);
    res[i] = std::abs(c.kn_s + c.tau_g * c.k_g);
  }
  return res;
}

double darboux_residual(const Surface& s, const Trajectory& tr) {
  const double m = nan_max(darboux_residual_profile(s, tr));
  if (!std::isfinite(m)) throw SparseTrajectoryError("no smooth stencil on the trajectory");
  return m;
}

std::vector<double> osculating_contact_profile(const Trajectory& tr) {
  require_dense(tr);
  const size_t n = tr.samples.size();
  const std::vector<bool> ok = centre_mask(tr);
  std::vector<double> res(n, kNaN);
  for (size_t i = 0; i < n; ++i) {
    if (!ok[i]) continue;
    const auto w = fd_weights(tr.samples[i].t, stencil_nodes(tr, i), 2);
    const auto pos = [](const Sample& m) -> Vec3 { return m.position; };
    const auto nor = [](const Sample& m) -> Vec3 { return m.normal; };
    const Vec3 c1 = stencil_sum(w[1], tr, i, pos), c2 = stencil_sum(w[2], tr, i, pos);
    const Vec3 n1 = stencil_sum(w[1], tr, i, nor), n2 = stencil_sum(w[2], tr, i, nor);
    const double st = c1.norm();
    // The contact expression picks up a factor (ds/dt)^5 under reparametrization.
    const double r = c1.dot(c1) * (2 * n1.dot(c2) + n2.dot(c1)) - 3 * c1.dot(n1) * c1.dot(c2);
    res[i] = std::abs(r / std::pow(st, 5));
  }
  return res;
}

double osculating_contact_residual(const Surface&, const Trajectory& tr) {
  const double m = nan_max(osculating_contact_profile(tr));
  if (!std::isfinite(m)) throw SparseTrajectoryError("no smooth stencil on the trajectory");
  return m;
}

}  // namespace darboux
