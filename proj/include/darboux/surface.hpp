#pragma once

#include <Eigen/Dense>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>

namespace darboux {

using Vec3 = Eigen::Vector3d;

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UmbilicError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SpecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A scalar field with its partials up to second order at one chart point.
struct Partials {
  double f = 0, u = 0, v = 0, uu = 0, uv = 0, vv = 0;
};

struct ChartPoint {
  double u = 0, v = 0;
  Vec3 X = Vec3::Zero(), Xu = Vec3::Zero(), Xv = Vec3::Zero(), N = Vec3::Zero();
  Partials E, G, e, g;
  Partials k1, k2;
};

struct Domain {
  double u_min = 0, u_max = 0, v_min = 0, v_max = 0;

  bool contains(double u, double v) const {
    return u > u_min && u < u_max && v > v_min && v < v_max;
  }
  double u_span() const { return u_max - u_min; }
  double v_span() const { return v_max - v_min; }
};

enum class SurfaceFamily { Quadric, Revolution, Cone, Cylinder, User, Scaled };

// A surface in a principal chart. The P1 foliation (curvature lines of k1)
// is always the family of u-curves, v = const.
class Surface {
 public:
  virtual ~Surface() = default;

  virtual std::string name() const = 0;
  virtual SurfaceFamily family() const = 0;
  virtual Domain domain() const = 0;
  // Finite window used for scans on charts whose domain is unbounded.
  virtual Domain scan_domain() const { return domain(); }
  virtual bool analytic_partials() const { return true; }

  // Throws DomainError outside the open domain or at chart-singular points.
  virtual ChartPoint evaluate(double u, double v) const = 0;

  bool contains(double u, double v) const { return domain().contains(u, v); }
};

using SurfacePtr = std::shared_ptr<const Surface>;

struct FrameScalars {
  double k1 = 0, k2 = 0;
  double k_n = 0, tau_g = 0;
  double kg1 = 0, kg2 = 0;
  double mu = 0;
  double theta1 = 0, theta2 = 0;
};

struct CodazziResiduals {
  double res1 = 0, res2 = 0;
  double max_abs() const;
};

double umbilic_threshold(double k1, double k2);
void require_non_umbilic(const ChartPoint& p);

std::pair<double, double> principal_curvatures(const Surface& s, double u, double v);

FrameScalars frame_scalars(const ChartPoint& p, double alpha);
FrameScalars frame_scalars(const Surface& s, double u, double v, double alpha);

CodazziResiduals codazzi_residuals(const ChartPoint& p);
CodazziResiduals codazzi_residuals(const Surface& s, double u, double v);

// Max over sampled interior grid points; used as a data-integrity gate.
double codazzi_gate(const Surface& s, int n_per_side = 10);

double conformal_fields_bracket_check(const Surface& s, double u, double v);

// Ambient dilation X -> factor * X of an existing chart.
SurfacePtr scaled(SurfacePtr base, double factor);

}  // namespace darboux
