#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "darboux/jet.hpp"
#include "darboux/surface.hpp"

namespace darboux {

using J4 = Jet<4>;
using J6 = Jet<6>;

// ---------------------------------------------------------------- quadrics

enum class QuadricKind { Ellipsoid, OneSheet, TwoSheet };
enum class QuadricChart { Octant, Global };

struct QuadricSpec {
  QuadricKind kind = QuadricKind::Ellipsoid;
  double a = 3, b = 2, c = 1;
  QuadricChart chart = QuadricChart::Octant;
  // Signs of (x, y, z) on the octant chart.
  std::array<int, 3> signs{1, 1, 1};
  // Extent of the unbounded confocal range v < c: v > c - v_extent.
  double v_extent = 0;
};

// Confocal coordinates U in the first range, V in the second.
//   ellipsoid  U in (b, a), V in (c, b)
//   one-sheet  U in (b, a), V < c
//   two-sheet  U in (c, b), V < c
// On the octant chart (u, v) = (U, V). The global chart replaces a bounded
// range (p, q) by U = (p+q)/2 + (q-p)/2 cos(phi) and the half-line V < q by
// V = q - tau^2; both are immersions across the folds, so the chart sees
// all eight octants and the coordinate planes.
class QuadricSurface final : public Surface {
 public:
  explicit QuadricSurface(QuadricSpec spec);

  std::string name() const override;
  SurfaceFamily family() const override { return SurfaceFamily::Quadric; }
  Domain domain() const override;
  Domain scan_domain() const override;
  ChartPoint evaluate(double u, double v) const override;

  const QuadricSpec& spec() const { return spec_; }
  double a() const { return spec_.a; }
  double b() const { return spec_.b; }
  double c() const { return spec_.c; }
  bool global() const { return spec_.chart == QuadricChart::Global; }

  double H(double x) const { return (x - spec_.a) * (x - spec_.b) * (x - spec_.c); }
  std::pair<double, double> confocal(double u, double v) const;
  // Inverse of confocal() on the principal branch (phi in [0, pi], tau >= 0).
  std::pair<double, double> chart_from_confocal(double U, double V) const;
  std::pair<double, double> U_range() const { return {u_lo_, u_hi_}; }
  std::pair<double, double> V_range() const { return {v_lo_, v_hi_}; }
  bool V_unbounded() const { return spec_.kind != QuadricKind::Ellipsoid; }

  // Umbilic points (ellipsoid and two-sheet); empty for the one-sheet.
  std::vector<Vec3> umbilics() const;

 private:
  template <class T>
  void confocal_jets(const T& u, const T& v, T& U, T& V, T& JU, T& JV) const;

  QuadricSpec spec_;
  double u_lo_, u_hi_, v_lo_, v_hi_;
};

std::shared_ptr<const QuadricSurface> make_quadric(const QuadricSpec& spec);

// ------------------------------------------------------------- revolution

// Radius profile r(u) of the family of spheres centred at (0, 0, u).
class Profile {
 public:
  virtual ~Profile() = default;
  virtual std::string name() const = 0;
  virtual J6 eval(const J6& u) const = 0;
  // r, r', ..., r^(6) at u.
  std::array<double, 7> derivatives(double u) const;
};

using ProfilePtr = std::shared_ptr<const Profile>;

ProfilePtr constant_profile(double r0);
ProfilePtr sinusoid_profile(double r0, double amplitude, double omega, double phase);
// Outer half of the torus with tube radius R around a circle of radius rho.
ProfilePtr torus_profile(double R, double rho);

struct RevolutionSpec {
  ProfilePtr profile;
  double u_min = -3, u_max = 3;
};

class RevolutionSurface final : public Surface {
 public:
  explicit RevolutionSurface(RevolutionSpec spec);

  std::string name() const override { return "revolution:" + spec_.profile->name(); }
  SurfaceFamily family() const override { return SurfaceFamily::Revolution; }
  Domain domain() const override;
  Domain scan_domain() const override;
  ChartPoint evaluate(double u, double v) const override;

  const RevolutionSpec& spec() const { return spec_; }
  double h(double u) const;
  double ridge_function(double u) const;

 private:
  RevolutionSpec spec_;
};

std::shared_ptr<const RevolutionSurface> make_revolution(const RevolutionSpec& spec);

// ------------------------------------------------------- cones, cylinders

// Parametrized space curve evaluated on jets; period 0 means open.
class Curve {
 public:
  virtual ~Curve() = default;
  virtual std::string name() const = 0;
  virtual std::array<J4, 3> eval(const J4& t) const = 0;
  virtual double period() const { return 0.0; }
  Vec3 point(double t) const;
  Vec3 tangent(double t) const;
};

using CurvePtr = std::shared_ptr<const Curve>;

// Unit-speed circle on the unit sphere at polar angle beta.
CurvePtr spherical_circle(double beta);
// normalize(A cos t, B sin t, 1); not unit speed.
CurvePtr spherical_ellipse(double A, double B);
CurvePtr planar_circle(double r);
// (A cos t, B sin t, 0); not unit speed.
CurvePtr planar_ellipse(double A, double B);
// Arc-length reparametrization of a closed curve.
CurvePtr arc_length(CurvePtr base);

struct ConeSpec {
  CurvePtr directrix;  // unit speed, on the unit sphere
  double u_min = 0, u_max = 0;  // both 0: one full period
  double v_min = 0.5, v_max = 3.0;
};

struct CylinderSpec {
  CurvePtr directrix;  // unit speed, in the plane z = 0
  double u_min = 0, u_max = 0;
  double v_min = -3.0, v_max = 3.0;
};

// X(u, v) = v gamma(u). P1 = directrix family; k1 = k_g(u) / v, k2 = 0.
class ConeSurface final : public Surface {
 public:
  explicit ConeSurface(ConeSpec spec);
  std::string name() const override { return "cone:" + spec_.directrix->name(); }
  SurfaceFamily family() const override { return SurfaceFamily::Cone; }
  Domain domain() const override;
  Domain scan_domain() const override;
  ChartPoint evaluate(double u, double v) const override;
  // Geodesic curvature of the directrix on the unit sphere.
  double geodesic_curvature(double u) const;

 private:
  ConeSpec spec_;
};

// X(u, v) = c(u) + v e_z. P1 = directrix family; k1 = kappa(u), k2 = 0.
class CylinderSurface final : public Surface {
 public:
  explicit CylinderSurface(CylinderSpec spec);
  std::string name() const override { return "cylinder:" + spec_.directrix->name(); }
  SurfaceFamily family() const override { return SurfaceFamily::Cylinder; }
  Domain domain() const override;
  Domain scan_domain() const override;
  ChartPoint evaluate(double u, double v) const override;
  double curvature(double u) const;

 private:
  CylinderSpec spec_;
};

std::shared_ptr<const ConeSurface> make_cone(const ConeSpec& spec);
std::shared_ptr<const CylinderSurface> make_cylinder(const CylinderSpec& spec);

// ------------------------------------------------------------ user charts

struct UserChartSpec {
  std::string name = "user";
  Domain domain;
  std::function<double(double, double)> E, G, e, g;
  std::function<Vec3(double, double)> X;
};

// Partials by central differences with Richardson extrapolation.
class UserChartSurface final : public Surface {
 public:
  explicit UserChartSurface(UserChartSpec spec);
  std::string name() const override { return spec_.name; }
  SurfaceFamily family() const override { return SurfaceFamily::User; }
  Domain domain() const override { return spec_.domain; }
  bool analytic_partials() const override { return false; }
  ChartPoint evaluate(double u, double v) const override;

 private:
  UserChartSpec spec_;
};

// Rejects a user chart whose Codazzi residual exceeds the FD gate 1e-4.
SurfacePtr make_user_chart(const UserChartSpec& spec);

// ------------------------------------------------------------ JSON specs

// {type, parameters, ranges, branch}; see README for the schema.
SurfacePtr surface_from_json(const nlohmann::json& j);
std::vector<std::string> catalog_types();

}  // namespace darboux
