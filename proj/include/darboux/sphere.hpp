#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "darboux/flow.hpp"
#include "darboux/surface.hpp"

namespace darboux {

using LorentzVector = Eigen::Matrix<double, 5, 1>;

// L(u, v) = -u0 v0 + u1 v1 + ... + u4 v4.
double lorentz(const LorentzVector& a, const LorentzVector& b);
double lorentz_form(const LorentzVector& x);

enum class Causality { SpaceLike, TimeLike, LightLike };
std::string to_string(Causality c);
// Light-like when |L(x)| < 1e-12 |x|^2 (Euclidean norm of the components).
Causality classify(const LorentzVector& x);

LorentzVector lift_point(const Vec3& x);
// Throws SpecError unless |nu| = 1 to 1e-12.
LorentzVector lift_normal(const Vec3& x, const Vec3& nu);
// Lift of a tangent vector T at x, (<x,T>, T, <x,T>); the derivative of
// lift_point along a curve with velocity T.
LorentzVector lift_tangent(const Vec3& x, const Vec3& T);

struct SpherePoint {
  LorentzVector sigma = LorentzVector::Zero();
  // Present when built as k m + n from surface data.
  std::optional<double> k;
  LorentzVector m = LorentzVector::Zero(), n = LorentzVector::Zero();
};

// k_n(alpha) m + n at the chart point.
SpherePoint vm_map(const Surface& s, double u, double v, double alpha);

// Sphere (or plane) in R^3 encoded by sigma with L(sigma) = 1.
struct Sphere {
  bool plane = false;
  double curvature = 0;  // sigma0 - sigma4; the signed inverse radius
  Vec3 center = Vec3::Zero();
  double radius = 0;
  Vec3 normal = Vec3::Zero();  // plane: <y, normal> = offset
  double offset = 0;
};

Sphere extract_sphere(const LorentzVector& sigma);
// Lift of the sphere with given centre and signed radius (orientation).
LorentzVector sphere_lift(const Vec3& center, double signed_radius);
// Lift of the plane <y, normal> = offset; normal must be unit.
LorentzVector plane_lift(const Vec3& normal, double offset);
// L(lift_point(y), sigma): zero exactly on the sphere.
double sphere_membership(const LorentzVector& sigma, const Vec3& y);

// arccos L(s1, s2). Throws SpecError for tangent or nested spheres (|L| >= 1).
double sphere_angle(const LorentzVector& s1, const LorentzVector& s2);

struct JacobianRank {
  int rank = 0;
  std::vector<double> singular_values;
};
// Central-difference Jacobian of vm_map in (u, v, alpha); with boundary set,
// of the boundary map (u, v) -> sigma(u, v, alpha) at fixed alpha.
// Rank counts singular values above 1e-8 of the largest.
JacobianRank vm_jacobian_rank(const Surface& s, double u, double v, double alpha, bool boundary = false);

// Directions at (u, v) of the two branches of Sigma_k n M, for the sphere
// k m + n with k between k1 and k2, measured from P1 in (-pi/2, pi/2].
// Found from sign changes of the membership function on a small circle.
std::vector<double> sphere_section_angles(const Surface& s, double u, double v, double k, double radius = 1e-4);

struct CansecReport {
  std::vector<double> s;
  std::vector<LorentzVector> sigma;
  std::vector<double> lorentz_sigma;    // L(sigma) - 1
  std::vector<double> speed;            // |sigma'| in arc length of the curve
  std::vector<double> tau_g;
  std::vector<double> speed_residual;   // | |sigma'| - |tau_g| |
  std::vector<double> t_component;      // L(k_g vector, lifted T)
  std::vector<double> eq7_prediction;   // (k_n' + tau_g k_g) / tau_g^2 from chart data
  std::vector<double> lorentz_kg;       // L(k_g vector)
  std::vector<double> orth_m_dot;       // max(|L(sigma, m')|, |L(sigma', m')|)
  double max_speed_residual = 0;
  double max_t_component = 0;
  double max_orth = 0;
  double max_lorentz_sigma = 0;
};

// Canonical section along the trajectory. Samples where |tau_g| is small
// (near principal tangency, |sin a cos a| < 0.2) are gaps, reported as NaN.
CansecReport cansec_analyze(const Surface& s, const Trajectory& tr);

// Lorentz speed |sigma'| of the section k m + n with constant k, and the
// expected value sqrt(tau_g^2 + (k - k_n)^2), per sample.
struct SectionSpeed {
  std::vector<double> speed, expected, tau_g;
};
SectionSpeed section_speed(const Surface& s, const Trajectory& tr, double k);

// Columns s, sigma0..sigma4, lorentz_sigma, speed_residual, t_component.
std::string cansec_csv(const CansecReport& r);

}  // namespace darboux
