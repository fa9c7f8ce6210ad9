#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "chart_builder.hpp"
#include "darboux/catalog.hpp"

namespace darboux {

Vec3 Curve::point(double t) const {
  const auto g = eval(J4::variable_u(t));
  return {g[0].value(), g[1].value(), g[2].value()};
}

Vec3 Curve::tangent(double t) const {
  const auto g = eval(J4::variable_u(t));
  return {g[0].d(1, 0), g[1].d(1, 0), g[2].d(1, 0)};
}

namespace {

constexpr double kPi = std::numbers::pi;

class SphericalCircle final : public Curve {
 public:
  explicit SphericalCircle(double beta) : sb_(std::sin(beta)), cb_(std::cos(beta)) {}
  std::string name() const override { return "circle"; }
  double period() const override { return 2 * kPi * sb_; }
  std::array<J4, 3> eval(const J4& t) const override {
    const J4 w = t / sb_;
    return {sb_ * cos(w), sb_ * sin(w), J4(cb_)};
  }

 private:
  double sb_, cb_;
};

class SphericalEllipse final : public Curve {
 public:
  SphericalEllipse(double A, double B) : A_(A), B_(B) {}
  std::string name() const override { return "spherical-ellipse"; }
  double period() const override { return 2 * kPi; }
  std::array<J4, 3> eval(const J4& t) const override {
    const J4 x = A_ * cos(t), y = B_ * sin(t);
    const J4 inv = pow(x * x + y * y + 1.0, -0.5);
    return {x * inv, y * inv, inv};
  }

 private:
  double A_, B_;
};

class PlanarCircle final : public Curve {
 public:
  explicit PlanarCircle(double r) : r_(r) {}
  std::string name() const override { return "circle"; }
  double period() const override { return 2 * kPi * r_; }
  std::array<J4, 3> eval(const J4& t) const override {
    const J4 w = t / r_;
    return {r_ * cos(w), r_ * sin(w), J4(0.0)};
  }

 private:
  double r_;
};

class PlanarEllipse final : public Curve {
 public:
  PlanarEllipse(double A, double B) : A_(A), B_(B) {}
  std::string name() const override { return "ellipse"; }
  double period() const override { return 2 * kPi; }
  std::array<J4, 3> eval(const J4& t) const override { return {A_ * cos(t), B_ * sin(t), J4(0.0)}; }

 private:
  double A_, B_;
};

class ArcLengthCurve final : public Curve {
 public:
  explicit ArcLengthCurve(CurvePtr base) : base_(std::move(base)) {
    T_ = base_->period();
    if (!(T_ > 0)) throw SpecError("arc-length reparametrization needs a closed curve");
    S_.resize(kCells + 1, 0.0);
    const double h = T_ / kCells;
    for (int i = 0; i < kCells; ++i) S_[i + 1] = S_[i] + length(i * h, (i + 1) * h);
    L_ = S_.back();
  }

  std::string name() const override { return base_->name(); }
  double period() const override { return L_; }

  std::array<J4, 3> eval(const J4& sj) const override {
    const double s0 = sj.value();
    const double t0 = invert(s0);
    const auto g = base_->eval(J4::variable_u(t0));
    std::array<J4, 3> gp;
    for (int i = 0; i < 3; ++i) gp[i] = g[i].du();
    const J4 winv = pow(gp[0] * gp[0] + gp[1] * gp[1] + gp[2] * gp[2], -0.5);
    std::array<double, 5> winv_d{};
    for (int n = 0; n < 4; ++n) winv_d[n] = winv.d(n, 0);
    // Picard iteration for t(s): t' = 1 / |gamma'(t)|, one order per sweep.
    J4 t(t0);
    for (int it = 0; it <= 4; ++it) {
      const J4 rate = compose(t, winv_d);
      J4 next(t0);
      for (int i = 0; i < 4; ++i) next.coeff(i + 1, 0) = rate.coeff(i, 0) / (i + 1);
      t = next;
    }
    std::array<double, 5> td{};
    for (int n = 0; n <= 4; ++n) td[n] = t.d(n, 0);
    const J4 tfull = compose(sj, td);
    std::array<J4, 3> out;
    for (int i = 0; i < 3; ++i) {
      std::array<double, 5> gd{};
      for (int n = 0; n <= 4; ++n) gd[n] = g[i].d(n, 0);
      out[i] = compose(tfull, gd);
    }
    return out;
  }

 private:
  static constexpr int kCells = 256;

  double speed(double t) const { return base_->tangent(t).norm(); }

  double length(double t0, double t1) const {
    return boost::math::quadrature::gauss<double, 20>::integrate([&](double t) { return speed(t); }, t0, t1);
  }

  // Base parameter t with arc length s measured from t = 0.
  double invert(double s) const {
    const double turns = std::floor(s / L_);
    const double sr = s - turns * L_;
    const auto it = std::upper_bound(S_.begin(), S_.end(), sr);
    const int cell = std::clamp(static_cast<int>(it - S_.begin()) - 1, 0, kCells - 1);
    const double h = T_ / kCells;
    const double ta = cell * h;
    double t = ta + h * (sr - S_[cell]) / (S_[cell + 1] - S_[cell]);
    for (int k = 0; k < 30; ++k) {
      const double f = S_[cell] + length(ta, t) - sr;
      const double dt = f / speed(t);
      t -= dt;
      if (std::abs(dt) < 1e-15 * (1 + std::abs(t))) break;
    }
    return t + turns * T_;
  }

  CurvePtr base_;
  double T_ = 0, L_ = 0;
  std::vector<double> S_;
};

}  // namespace

CurvePtr spherical_circle(double beta) {
  if (!(beta > 0 && beta < kPi / 2)) throw SpecError("cone half-angle must lie in (0, pi/2)");
  return std::make_shared<SphericalCircle>(beta);
}
CurvePtr spherical_ellipse(double A, double B) { return std::make_shared<SphericalEllipse>(A, B); }
CurvePtr planar_circle(double r) {
  if (!(r > 0)) throw SpecError("circle radius must be positive");
  return std::make_shared<PlanarCircle>(r);
}
CurvePtr planar_ellipse(double A, double B) { return std::make_shared<PlanarEllipse>(A, B); }
CurvePtr arc_length(CurvePtr base) { return std::make_shared<ArcLengthCurve>(std::move(base)); }

namespace {

void require_unit_speed(const Curve& c, bool spherical, bool planar) {
  const double T = c.period() > 0 ? c.period() : 1.0;
  for (int i = 0; i < 64; ++i) {
    const double t = T * i / 64.0;
    const Vec3 p = c.point(t), dp = c.tangent(t);
    if (std::abs(dp.norm() - 1) > 1e-8) throw SpecError("non-unit-speed directrix");
    if (spherical && std::abs(p.norm() - 1) > 1e-8) throw SpecError("cone directrix must lie on the unit sphere");
    if (planar && std::abs(p.z()) > 1e-8) throw SpecError("cylinder directrix must lie in the plane z = 0");
  }
}

Domain ruled_domain(const Curve& c, double u_min, double u_max, double v_min, double v_max) {
  if (u_min == 0 && u_max == 0) {
    const double inf = std::numeric_limits<double>::infinity();
    if (!(c.period() > 0)) throw SpecError("open directrix needs an explicit u-range");
    return {-inf, inf, v_min, v_max};
  }
  return {u_min, u_max, v_min, v_max};
}

Domain ruled_scan(const Curve& c, double u_min, double u_max, double v_min, double v_max) {
  if (u_min == 0 && u_max == 0) return {0.0, c.period(), v_min, v_max};
  return {u_min, u_max, v_min, v_max};
}

}  // namespace

ConeSurface::ConeSurface(ConeSpec spec) : spec_(std::move(spec)) {
  if (!spec_.directrix) throw SpecError("cone needs a directrix");
  if (!(spec_.v_min > 0 && spec_.v_max > spec_.v_min)) throw SpecError("cone v-range must avoid the apex");
  require_unit_speed(*spec_.directrix, true, false);
}

Domain ConeSurface::domain() const {
  return ruled_domain(*spec_.directrix, spec_.u_min, spec_.u_max, spec_.v_min, spec_.v_max);
}
Domain ConeSurface::scan_domain() const {
  return ruled_scan(*spec_.directrix, spec_.u_min, spec_.u_max, spec_.v_min, spec_.v_max);
}

double ConeSurface::geodesic_curvature(double u) const {
  const auto g = spec_.directrix->eval(J4::variable_u(u));
  Vec3 p, d1, d2;
  for (int i = 0; i < 3; ++i) {
    p[i] = g[i].d(0, 0);
    d1[i] = g[i].d(1, 0);
    d2[i] = g[i].d(2, 0);
  }
  return p.cross(d1).dot(d2) / std::pow(d1.norm(), 3);
}

ChartPoint ConeSurface::evaluate(double u, double v) const {
  if (!domain().contains(u, v)) throw DomainError("cone chart: point outside domain");
  if (v < 1e-8) throw DomainError("cone chart: apex proximity");
  const auto g = spec_.directrix->eval(J4::variable_u(u));
  const J4 jv = J4::variable_v(v);
  const std::array<J4, 3> X{jv * g[0], jv * g[1], jv * g[2]};
  const Vec3 hint = spec_.directrix->point(u).cross(spec_.directrix->tangent(u));
  const ChartPoint p = detail::chart_point(u, v, detail::embedding_jets(X, hint));
  if (!detail::finite(p)) throw DomainError("cone chart: singular point");
  return p;
}

CylinderSurface::CylinderSurface(CylinderSpec spec) : spec_(std::move(spec)) {
  if (!spec_.directrix) throw SpecError("cylinder needs a directrix");
  if (!(spec_.v_max > spec_.v_min)) throw SpecError("cylinder: empty v-range");
  require_unit_speed(*spec_.directrix, false, true);
}

Domain CylinderSurface::domain() const {
  return ruled_domain(*spec_.directrix, spec_.u_min, spec_.u_max, spec_.v_min, spec_.v_max);
}
Domain CylinderSurface::scan_domain() const {
  return ruled_scan(*spec_.directrix, spec_.u_min, spec_.u_max, spec_.v_min, spec_.v_max);
}

double CylinderSurface::curvature(double u) const {
  const auto g = spec_.directrix->eval(J4::variable_u(u));
  const double x1 = g[0].d(1, 0), y1 = g[1].d(1, 0), x2 = g[0].d(2, 0), y2 = g[1].d(2, 0);
  return (x1 * y2 - y1 * x2) / std::pow(x1 * x1 + y1 * y1, 1.5);
}

ChartPoint CylinderSurface::evaluate(double u, double v) const {
  if (!domain().contains(u, v)) throw DomainError("cylinder chart: point outside domain");
  const auto g = spec_.directrix->eval(J4::variable_u(u));
  const J4 jv = J4::variable_v(v);
  const std::array<J4, 3> X{g[0], g[1], g[2] + jv};
  const Vec3 hint = Vec3::UnitZ().cross(spec_.directrix->tangent(u));
  const ChartPoint p = detail::chart_point(u, v, detail::embedding_jets(X, hint));
  if (!detail::finite(p)) throw DomainError("cylinder chart: singular point");
  return p;
}

std::shared_ptr<const ConeSurface> make_cone(const ConeSpec& spec) { return std::make_shared<ConeSurface>(spec); }
std::shared_ptr<const CylinderSurface> make_cylinder(const CylinderSpec& spec) {
  return std::make_shared<CylinderSurface>(spec);
}

}  // namespace darboux
