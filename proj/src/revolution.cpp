#include <cmath>
#include <limits>
#include <numbers>

#include "chart_builder.hpp"
#include "darboux/catalog.hpp"

namespace darboux {

std::array<double, 7> Profile::derivatives(double u) const {
  const J6 r = eval(J6::variable_u(u));
  std::array<double, 7> d{};
  for (int n = 0; n <= 6; ++n) d[n] = r.d(n, 0);
  return d;
}

namespace {

class ConstantProfile final : public Profile {
 public:
  explicit ConstantProfile(double r0) : r0_(r0) {}
  std::string name() const override { return "constant"; }
  J6 eval(const J6&) const override { return J6(r0_); }

 private:
  double r0_;
};

class SinusoidProfile final : public Profile {
 public:
  SinusoidProfile(double r0, double A, double w, double ph) : r0_(r0), A_(A), w_(w), ph_(ph) {}
  std::string name() const override { return "sinusoid"; }
  J6 eval(const J6& u) const override { return r0_ + A_ * sin(w_ * u + ph_); }

 private:
  double r0_, A_, w_, ph_;
};

class TorusProfile final : public Profile {
 public:
  TorusProfile(double R, double rho) : R_(R), rho_(rho) {}
  std::string name() const override { return "torus"; }
  J6 eval(const J6& u) const override { return R_ + sqrt(rho_ * rho_ + u * u); }

 private:
  double R_, rho_;
};

}  // namespace

ProfilePtr constant_profile(double r0) {
  if (!(r0 > 0)) throw SpecError("profile radius must be positive");
  return std::make_shared<ConstantProfile>(r0);
}

ProfilePtr sinusoid_profile(double r0, double amplitude, double omega, double phase) {
  return std::make_shared<SinusoidProfile>(r0, amplitude, omega, phase);
}

ProfilePtr torus_profile(double R, double rho) {
  if (!(R > 0 && rho > 0)) throw SpecError("torus radii must be positive");
  return std::make_shared<TorusProfile>(R, rho);
}

RevolutionSurface::RevolutionSurface(RevolutionSpec spec) : spec_(std::move(spec)) {
  if (!spec_.profile) throw SpecError("revolution surface needs a profile");
  if (!(spec_.u_max > spec_.u_min)) throw SpecError("revolution surface: empty u-range");
  for (int i = 0; i <= 64; ++i) {
    const double u = spec_.u_min + (spec_.u_max - spec_.u_min) * i / 64.0;
    const auto d = spec_.profile->derivatives(u);
    if (!(d[0] > 0)) throw SpecError("revolution profile must stay positive");
    if (!(std::abs(d[1]) < 1)) throw SpecError("revolution profile needs |r'| < 1");
    if (std::abs(1 - d[1] * d[1] - d[0] * d[2]) < 1e-12)
      throw SpecError("revolution chart degenerates (1 - r'^2 - r r'' = 0)");
  }
}

Domain RevolutionSurface::domain() const {
  const double inf = std::numeric_limits<double>::infinity();
  return {spec_.u_min, spec_.u_max, -inf, inf};
}

Domain RevolutionSurface::scan_domain() const {
  return {spec_.u_min, spec_.u_max, -std::numbers::pi, std::numbers::pi};
}

double RevolutionSurface::h(double u) const {
  const auto d = spec_.profile->derivatives(u);
  return d[0] * std::sqrt(1 - d[1] * d[1]);
}

double RevolutionSurface::ridge_function(double u) const {
  const auto d = spec_.profile->derivatives(u);
  return d[3] * (1 - d[1] * d[1]) + 3 * d[1] * d[2] * d[2];
}

ChartPoint RevolutionSurface::evaluate(double u, double v) const {
  if (!domain().contains(u, v)) throw DomainError("revolution chart: point outside domain");
  const auto d = spec_.profile->derivatives(u);
  if (!(std::abs(d[1]) < 1)) throw DomainError("revolution chart: |r'| >= 1");
  const J4 ju = J4::variable_u(u), jv = J4::variable_v(v);
  const std::array<double, 5> d0{d[0], d[1], d[2], d[3], d[4]};
  const std::array<double, 5> d1{d[1], d[2], d[3], d[4], d[5]};
  const J4 r = compose(ju, d0);
  const J4 rp = compose(ju, d1);
  const J4 h = r * sqrt(1.0 - rp * rp);
  const std::array<J4, 3> X{h * cos(jv), h * sin(jv), ju - r * rp};
  const double cb = std::sqrt(1 - d[1] * d[1]);
  const Vec3 hint(-cb * std::cos(v), -cb * std::sin(v), d[1]);
  const ChartPoint p = detail::chart_point(u, v, detail::embedding_jets(X, hint));
  if (!detail::finite(p)) throw DomainError("revolution chart: singular point");
  return p;
}

std::shared_ptr<const RevolutionSurface> make_revolution(const RevolutionSpec& spec) {
  return std::make_shared<RevolutionSurface>(spec);
}

}  // namespace darboux
