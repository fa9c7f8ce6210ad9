#include <cmath>
#include <functional>

#include "darboux/catalog.hpp"

namespace darboux {

namespace {

using Field = std::function<double(double, double)>;

double d1(const Field& f, double u, double v, double hu, double hv) {
  auto central = [&](double h) {
    return hu != 0 ? (f(u + h, v) - f(u - h, v)) / (2 * h) : (f(u, v + h) - f(u, v - h)) / (2 * h);
  };
  const double h = hu != 0 ? hu : hv;
  return (4 * central(h / 2) - central(h)) / 3;
}

double d2(const Field& f, double u, double v, double hu, double hv) {
  const double f0 = f(u, v);
  auto second = [&](double s) {
    const double du = hu * s, dv = hv * s;
    const double h = du != 0 ? du : dv;
    return (f(u + du, v + dv) - 2 * f0 + f(u - du, v - dv)) / (h * h);
  };
  return (4 * second(0.5) - second(1.0)) / 3;
}

double d_uv(const Field& f, double u, double v, double hu, double hv) {
  auto mixed = [&](double s) {
    const double a = hu * s, b = hv * s;
    return (f(u + a, v + b) - f(u + a, v - b) - f(u - a, v + b) + f(u - a, v - b)) / (4 * a * b);
  };
  return (4 * mixed(0.5) - mixed(1.0)) / 3;
}

Partials fd_partials(const Field& f, double u, double v, const Domain& d) {
  const double h1u = 1e-5 * d.u_span(), h1v = 1e-5 * d.v_span();
  const double h2u = 1e-3 * d.u_span(), h2v = 1e-3 * d.v_span();
  Partials p;
  p.f = f(u, v);
  p.u = d1(f, u, v, h1u, 0);
  p.v = d1(f, u, v, 0, h1v);
  p.uu = d2(f, u, v, h2u, 0);
  p.vv = d2(f, u, v, 0, h2v);
  p.uv = d_uv(f, u, v, h2u, h2v);
  return p;
}

}  // namespace

UserChartSurface::UserChartSurface(UserChartSpec spec) : spec_(std::move(spec)) {
  if (!spec_.E || !spec_.G || !spec_.e || !spec_.g || !spec_.X)
    throw SpecError("user chart needs E, G, e, g and an embedding");
  if (!(spec_.domain.u_span() > 0 && spec_.domain.v_span() > 0) ||
      !std::isfinite(spec_.domain.u_span()) || !std::isfinite(spec_.domain.v_span()))
    throw SpecError("user chart needs a bounded, non-empty domain");
}

ChartPoint UserChartSurface::evaluate(double u, double v) const {
  const Domain& d = spec_.domain;
  if (!d.contains(u, v)) throw DomainError("user chart: point outside domain");
  ChartPoint p;
  p.u = u;
  p.v = v;
  p.X = spec_.X(u, v);
  const double hu = 1e-5 * d.u_span(), hv = 1e-5 * d.v_span();
  auto dX = [&](double a, double b, double h) {
    const Vec3 c1 = (spec_.X(u + a * h, v + b * h) - spec_.X(u - a * h, v - b * h)) / (2 * h);
    const Vec3 c2 = (spec_.X(u + a * h / 2, v + b * h / 2) - spec_.X(u - a * h / 2, v - b * h / 2)) / h;
    return Vec3((4 * c2 - c1) / 3);
  };
  p.Xu = dX(1, 0, hu);
  p.Xv = dX(0, 1, hv);
  p.N = p.Xu.cross(p.Xv).normalized();
  p.E = fd_partials(spec_.E, u, v, d);
  p.G = fd_partials(spec_.G, u, v, d);
  p.e = fd_partials(spec_.e, u, v, d);
  p.g = fd_partials(spec_.g, u, v, d);
  p.k1 = fd_partials([&](double a, double b) { return spec_.e(a, b) / spec_.E(a, b); }, u, v, d);
  p.k2 = fd_partials([&](double a, double b) { return spec_.g(a, b) / spec_.G(a, b); }, u, v, d);
  if (!(p.E.f > 0 && p.G.f > 0)) throw DomainError("user chart: metric not positive");
  return p;
}

SurfacePtr make_user_chart(const UserChartSpec& spec) {
  auto s = std::make_shared<UserChartSurface>(spec);
  // Sample strictly inside so the FD stencils stay in the domain.
  const double gate = codazzi_gate(*s, 8);
  if (!(gate < 1e-4))
    throw SpecError("user chart rejected by the Codazzi gate (residual " + std::to_string(gate) + ")");
  return s;
}

}  // namespace darboux
