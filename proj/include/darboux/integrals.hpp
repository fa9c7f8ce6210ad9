#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "darboux/catalog.hpp"
#include "darboux/flow.hpp"
#include "json.hpp"

namespace darboux {

struct FirstIntegral {
  std::string name;
  std::string family;
  // Flow along which the quantity is conserved: "darboux" or "geodesic".
  std::string flow = "darboux";
  std::string status = "verified";
  std::function<double(const ChartPoint&, const DarbouxState&)> evaluate;
};

// cos^2(alpha)/U + sin^2(alpha)/V in confocal coordinates.
double quadric_integral(const QuadricSurface& q, const DarbouxState& x);
// h(u) (k1 - k2) cos^3(alpha).
double revolution_integral(const RevolutionSurface& r, const DarbouxState& x);
// k_g(u) cos^3(alpha).
double cone_integral(const ConeSurface& c, const DarbouxState& x);
// kappa(u) cos^3(alpha).
double cylinder_integral(const CylinderSurface& c, const DarbouxState& x);
// h(u) sin(alpha); conserved by geodesics, not by Darboux curves.
double clairaut_geodesic_integral(const RevolutionSurface& r, const DarbouxState& x);

// A(u) cos^3(alpha) with A(u) = exp of the integral of k1_u / (k1 - k2)
// from the anchor u0 (midpoint of the u-range). Built once per surface.
class CanalIntegral {
 public:
  // Throws SpecError when theta2 does not vanish or theta1 depends on v.
  explicit CanalIntegral(SurfacePtr s);

  double A(double u) const;
  double anchor() const { return u0_; }
  double operator()(const DarbouxState& x) const;
  double gate_residual() const { return gate_; }

 private:
  double log_A(double u) const;
  double integrand(double u) const;

  SurfacePtr s_;
  double u_lo_ = 0, u_hi_ = 0, u0_ = 0, v_ref_ = 0, period_ = 0, gate_ = 0;
  std::vector<double> logA_, dlogA_, d2logA_;
};

std::vector<FirstIntegral> applicable_integrals(const SurfacePtr& s);
std::vector<FirstIntegral> applicable_integrals(const Surface& s);
std::vector<Monitor> first_integral_monitors(const Surface& s);

struct DriftReport {
  std::string integral;
  std::string family;
  double max_rel_drift = 0;
  bool partial = false;
  std::string termination;
  std::vector<double> s, value, rel_drift;
};

// Drift relative to max(|value at s = 0|, 1e-30) for each named monitor.
std::vector<DriftReport> conservation_report(const Trajectory& tr, const std::vector<std::string>& integrals,
                                             const std::string& family = "");
nlohmann::json to_json(const DriftReport& r, bool with_samples = true);

}  // namespace darboux
