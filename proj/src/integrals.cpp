#include "darboux/integrals.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss.hpp>

namespace darboux {

double quadric_integral(const QuadricSurface& q, const DarbouxState& x) {
  const auto [U, V] = q.confocal(x.u, x.v);
  if (U == 0 || V == 0) throw DomainError("quadric integral: confocal coordinate at zero");
  const double c = std::cos(x.alpha), s = std::sin(x.alpha);
  return c * c / U + s * s / V;
}

double revolution_integral(const RevolutionSurface& r, const DarbouxState& x) {
  const ChartPoint p = r.evaluate(x.u, x.v);
  const double c = std::cos(x.alpha);
  return r.h(x.u) * (p.k1.f - p.k2.f) * c * c * c;
}

double cone_integral(const ConeSurface& cone, const DarbouxState& x) {
  if (!cone.contains(x.u, x.v)) throw DomainError("cone integral: outside domain or at the apex");
  const double c = std::cos(x.alpha);
  return cone.geodesic_curvature(x.u) * c * c * c;
}

double cylinder_integral(const CylinderSurface& cyl, const DarbouxState& x) {
  const double c = std::cos(x.alpha);
  return cyl.curvature(x.u) * c * c * c;
}

double clairaut_geodesic_integral(const RevolutionSurface& r, const DarbouxState& x) {
  return r.h(x.u) * std::sin(x.alpha);
}

namespace {

constexpr int kCells = 512;

}  // namespace

CanalIntegral::CanalIntegral(SurfacePtr s) : s_(std::move(s)) {
  const Domain d = s_->scan_domain();
  u_lo_ = d.u_min;
  u_hi_ = d.u_max;
  if (!std::isfinite(s_->domain().u_min) || !std::isfinite(s_->domain().u_max)) period_ = u_hi_ - u_lo_;
  u0_ = 0.5 * (u_lo_ + u_hi_);
  v_ref_ = std::isfinite(d.v_span()) ? d.v_min + 0.5 * d.v_span() : 0.0;

  // Canal gate: theta2 = 0 and theta1 independent of v.
  for (int i = 1; i <= 8; ++i) {
    const double u = u_lo_ + (u_hi_ - u_lo_) * i / 9.0;
    double th1_min = 1e300, th1_max = -1e300;
    for (int j = 1; j <= 8; ++j) {
      const double v = d.v_min + d.v_span() * j / 9.0;
      const FrameScalars f = frame_scalars(*s_, u, v, 0.0);
      gate_ = std::max(gate_, std::abs(f.theta2));
      th1_min = std::min(th1_min, f.theta1);
      th1_max = std::max(th1_max, f.theta1);
    }
    gate_ = std::max(gate_, th1_max - th1_min);
  }
  if (!(gate_ < 1e-6)) throw SpecError("canal integral: surface is not a canal (theta gate failed)");

  logA_.assign(kCells + 1, 0.0);
  dlogA_.assign(kCells + 1, 0.0);
  const double h = (u_hi_ - u_lo_) / kCells;
  for (int i = 0; i < kCells; ++i) {
    const double a = u_lo_ + i * h;
    logA_[i + 1] = logA_[i] + boost::math::quadrature::gauss<double, 10>::integrate(
                                  [this](double u) { return integrand(u); }, a, a + h);
  }
  d2logA_.assign(kCells + 1, 0.0);
  for (int i = 0; i <= kCells; ++i) {
    const double u = std::clamp(u_lo_ + i * h, u_lo_ + 1e-12 * h, u_hi_ - 1e-12 * h);
    const ChartPoint p = s_->evaluate(u, v_ref_);
    const double d = p.k1.f - p.k2.f;
    dlogA_[i] = p.k1.u / d;
    d2logA_[i] = p.k1.uu / d - p.k1.u * (p.k1.u - p.k2.u) / (d * d);
  }
  const double shift = log_A(u0_);
  for (double& x : logA_) x -= shift;
}

double CanalIntegral::integrand(double u) const {
  const ChartPoint p = s_->evaluate(u, v_ref_);
  return p.k1.u / (p.k1.f - p.k2.f);
}

double CanalIntegral::log_A(double u) const {
  if (period_ > 0) u = u_lo_ + std::fmod(std::fmod(u - u_lo_, period_) + period_, period_);
  if (u < u_lo_ || u > u_hi_) throw DomainError("canal integral: u outside the quadrature table");
  const double h = (u_hi_ - u_lo_) / kCells;
  const int i = std::clamp(static_cast<int>((u - u_lo_) / h), 0, kCells - 1);
  const double t = (u - (u_lo_ + i * h)) / h;
  // Quintic Hermite basis on [0, 1].
  const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
  const double h0 = 1 - 10 * t3 + 15 * t4 - 6 * t5, h1 = t - 6 * t3 + 8 * t4 - 3 * t5;
  const double h2 = 0.5 * (t2 - 3 * t3 + 3 * t4 - t5);
  const double g0 = 10 * t3 - 15 * t4 + 6 * t5, g1 = -4 * t3 + 7 * t4 - 3 * t5;
  const double g2 = 0.5 * (t3 - 2 * t4 + t5);
  return h0 * logA_[i] + h1 * h * dlogA_[i] + h2 * h * h * d2logA_[i] + g0 * logA_[i + 1] +
         g1 * h * dlogA_[i + 1] + g2 * h * h * d2logA_[i + 1];
}

double CanalIntegral::A(double u) const { return std::exp(log_A(u)); }

double CanalIntegral::operator()(const DarbouxState& x) const {
  const double c = std::cos(x.alpha);
  return A(x.u) * c * c * c;
}

std::vector<FirstIntegral> applicable_integrals(const Surface& s) {
  std::vector<FirstIntegral> out;
  if (const auto* q = dynamic_cast<const QuadricSurface*>(&s)) {
    out.push_back({"quadric_integral", "quadric", "darboux", "verified",
                   [q](const ChartPoint&, const DarbouxState& x) { return quadric_integral(*q, x); }});
  } else if (const auto* r = dynamic_cast<const RevolutionSurface*>(&s)) {
    out.push_back({"revolution_integral", "revolution", "darboux", "verified",
                   [r](const ChartPoint& p, const DarbouxState& x) {
                     const double c = std::cos(x.alpha);
                     return r->h(x.u) * (p.k1.f - p.k2.f) * c * c * c;
                   }});
    out.push_back({"clairaut", "revolution", "geodesic", "verified",
                   [r](const ChartPoint&, const DarbouxState& x) { return clairaut_geodesic_integral(*r, x); }});
  } else if (const auto* c = dynamic_cast<const ConeSurface*>(&s)) {
    out.push_back({"cone_integral", "cone", "darboux", "verified",
                   [c](const ChartPoint&, const DarbouxState& x) { return cone_integral(*c, x); }});
  } else if (const auto* y = dynamic_cast<const CylinderSurface*>(&s)) {
    out.push_back({"cylinder_integral", "cylinder", "darboux", "verified",
                   [y](const ChartPoint&, const DarbouxState& x) { return cylinder_integral(*y, x); }});
  }
  return out;
}

std::vector<FirstIntegral> applicable_integrals(const SurfacePtr& s) {
  std::vector<FirstIntegral> out = applicable_integrals(*s);
  if (s->family() == SurfaceFamily::Revolution || s->family() == SurfaceFamily::Cone ||
      s->family() == SurfaceFamily::Cylinder) {
    auto canal = std::make_shared<CanalIntegral>(s);
    out.push_back({"canal_integral", "canal", "darboux", "verified",
                   [canal](const ChartPoint&, const DarbouxState& x) { return (*canal)(x); }});
  }
  return out;
}

std::vector<Monitor> first_integral_monitors(const Surface& s) {
  std::vector<Monitor> out;
  for (auto& fi : applicable_integrals(s)) out.push_back({fi.name, fi.evaluate});
  return out;
}

std::vector<DriftReport> conservation_report(const Trajectory& tr, const std::vector<std::string>& integrals,
                                             const std::string& family) {
  if (tr.samples.empty()) throw SpecError("conservation report: empty trajectory");
  std::vector<DriftReport> out;
  for (const auto& name : integrals) {
    DriftReport r;
    r.integral = name;
    r.family = family;
    r.termination = to_string(tr.reason);
    r.partial = tr.reason != Termination::ArcLengthBudget;
    const int k = tr.monitor_index(name);
    if (k < 0) throw SpecError("conservation report: trajectory has no monitor '" + name + "'");
    const double v0 = tr.samples.front().monitors[k];
    const double scale = std::max(std::abs(v0), 1e-30);
    for (const auto& smp : tr.samples) {
      const double v = smp.monitors[k];
      r.s.push_back(smp.s);
      r.value.push_back(v);
      r.rel_drift.push_back(std::abs(v - v0) / scale);
      r.max_rel_drift = std::max(r.max_rel_drift, r.rel_drift.back());
    }
    out.push_back(std::move(r));
  }
  return out;
}

nlohmann::json to_json(const DriftReport& r, bool with_samples) {
  nlohmann::json j{{"integral", r.integral},     {"family", r.family},   {"max_rel_drift", r.max_rel_drift},
                   {"partial", r.partial},        {"termination", r.termination}};
  if (with_samples) {
    nlohmann::json arr = nlohmann::json::array();
    for (size_t i = 0; i < r.s.size(); ++i) arr.push_back({{"s", r.s[i]}, {"value", r.value[i]}});
    j["samples"] = std::move(arr);
  }
  return j;
}

}  // namespace darboux
