#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "chart_builder.hpp"
#include "darboux/catalog.hpp"

namespace darboux {

namespace {

struct Range {
  bool half_line = false;
  double p = 0, q = 0, r = 0;  // interval (p, q) and third root r; half-line (-inf, q)
};

}  // namespace

QuadricSurface::QuadricSurface(QuadricSpec spec) : spec_(spec) {
  const double a = spec_.a, b = spec_.b, c = spec_.c;
  switch (spec_.kind) {
    case QuadricKind::Ellipsoid:
      if (!(a > b && b > c && c > 0)) throw SpecError("ellipsoid needs a > b > c > 0");
      u_lo_ = b, u_hi_ = a, v_lo_ = c, v_hi_ = b;
      break;
    case QuadricKind::OneSheet:
      if (!(a > b && b > 0 && 0 > c)) throw SpecError("one-sheet hyperboloid needs a > b > 0 > c");
      u_lo_ = b, u_hi_ = a, v_hi_ = c;
      break;
    case QuadricKind::TwoSheet:
      if (!(a > 0 && 0 > b && b > c)) throw SpecError("two-sheet hyperboloid needs a > 0 > b > c");
      u_lo_ = c, u_hi_ = b, v_hi_ = c;
      break;
  }
  if (spec_.kind != QuadricKind::Ellipsoid) {
    if (spec_.v_extent <= 0) spec_.v_extent = 2.0 * (a - c);
    v_lo_ = c - spec_.v_extent;
  }
  for (int s : spec_.signs)
    if (s != 1 && s != -1) throw SpecError("branch signs must be +1 or -1");
}

std::string QuadricSurface::name() const {
  switch (spec_.kind) {
    case QuadricKind::Ellipsoid: return "ellipsoid";
    case QuadricKind::OneSheet: return "hyperboloid1";
    case QuadricKind::TwoSheet: return "hyperboloid2";
  }
  return "quadric";
}

Domain QuadricSurface::domain() const {
  if (!global()) return {u_lo_, u_hi_, v_lo_, v_hi_};
  const double inf = std::numeric_limits<double>::infinity();
  if (V_unbounded()) {
    const double T = std::sqrt(spec_.v_extent);
    return {-inf, inf, -T, T};
  }
  return {-inf, inf, -inf, inf};
}

Domain QuadricSurface::scan_domain() const {
  if (!global()) return domain();
  const double lo = -0.5 * std::numbers::pi, hi = 1.5 * std::numbers::pi;
  if (V_unbounded()) {
    const double T = std::sqrt(spec_.v_extent);
    return {lo, hi, -T, T};
  }
  return {lo, hi, lo, hi};
}

namespace {

Range u_range(const QuadricSpec& s) {
  if (s.kind == QuadricKind::TwoSheet) return {false, s.c, s.b, s.a};
  return {false, s.b, s.a, s.c};
}

Range v_range(const QuadricSpec& s) {
  if (s.kind == QuadricKind::Ellipsoid) return {false, s.c, s.b, s.a};
  return {true, s.a, s.c, s.b};
}

using std::cos;
using std::sin;
using std::sqrt;

inline double val(double x) { return x; }
inline double val(const J4& x) { return x.value(); }

// Coordinate, (dX/dx)^2 / H(X), and signed square roots |X - root|^(1/2).
template <class T>
struct Coordinate {
  T X, J;
  std::array<T, 3> root_factor;
};

template <class T>
Coordinate<T> coordinate(const T& x, const Range& rg, bool global, const std::array<double, 3>& roots) {
  Coordinate<T> out;
  auto H = [&](const T& t) { return (t - roots[0]) * (t - roots[1]) * (t - roots[2]); };
  if (!global) {
    out.X = x;
    out.J = 1.0 / H(x);
    for (int i = 0; i < 3; ++i) {
      const double sg = val(out.X) < roots[i] ? -1.0 : 1.0;
      out.root_factor[i] = sqrt(sg * (out.X - roots[i]));
    }
    return out;
  }
  if (rg.half_line) {
    out.X = rg.q - x * x;
    out.J = -4.0 / ((out.X - rg.p) * (out.X - rg.r));
    for (int i = 0; i < 3; ++i) {
      if (roots[i] == rg.q) {
        out.root_factor[i] = x;
      } else {
        const double sg = val(out.X) < roots[i] ? -1.0 : 1.0;
        out.root_factor[i] = sqrt(sg * (out.X - roots[i]));
      }
    }
    return out;
  }
  const double m = 0.5 * (rg.p + rg.q), h = 0.5 * (rg.q - rg.p);
  out.X = m + h * cos(x);
  out.J = -1.0 / (out.X - rg.r);
  for (int i = 0; i < 3; ++i) {
    if (roots[i] == rg.p) {
      out.root_factor[i] = std::sqrt(2 * h) * cos(0.5 * x);
    } else if (roots[i] == rg.q) {
      out.root_factor[i] = std::sqrt(2 * h) * sin(0.5 * x);
    } else {
      const double sg = val(out.X) < roots[i] ? -1.0 : 1.0;
      out.root_factor[i] = sqrt(sg * (out.X - roots[i]));
    }
  }
  return out;
}

}  // namespace

std::pair<double, double> QuadricSurface::confocal(double u, double v) const {
  if (!global()) return {u, v};
  const Range ru = u_range(spec_), rv = v_range(spec_);
  const double U = 0.5 * (ru.p + ru.q) + 0.5 * (ru.q - ru.p) * std::cos(u);
  const double V = rv.half_line ? rv.q - v * v : 0.5 * (rv.p + rv.q) + 0.5 * (rv.q - rv.p) * std::cos(v);
  return {U, V};
}

std::pair<double, double> QuadricSurface::chart_from_confocal(double U, double V) const {
  if (!global()) return {U, V};
  const Range ru = u_range(spec_), rv = v_range(spec_);
  auto angle = [](const Range& r, double X) {
    const double t = (X - 0.5 * (r.p + r.q)) / (0.5 * (r.q - r.p));
    return std::acos(std::clamp(t, -1.0, 1.0));
  };
  const double phi = angle(ru, U);
  const double second = rv.half_line ? std::sqrt(std::max(0.0, rv.q - V)) : angle(rv, V);
  return {phi, second};
}

ChartPoint QuadricSurface::evaluate(double u, double v) const {
  if (!domain().contains(u, v)) throw DomainError("quadric chart: point outside domain");
  const std::array<double, 3> roots{spec_.a, spec_.b, spec_.c};
  const J4 ju = J4::variable_u(u), jv = J4::variable_v(v);
  const auto cu = coordinate(ju, u_range(spec_), global(), roots);
  const auto cv = coordinate(jv, v_range(spec_), global(), roots);
  const J4& U = cu.X;
  const J4& V = cv.X;

  const J4 E = (V - U) * U * 0.25 * cu.J;
  const J4 G = (U - V) * V * 0.25 * cv.J;
  const J4 K = sqrt(spec_.a * spec_.b * spec_.c / (U * V));
  const J4 k1 = K / U, k2 = K / V;

  std::array<J4, 3> X;
  for (int i = 0; i < 3; ++i) {
    double prod = 1.0;
    for (int j = 0; j < 3; ++j)
      if (j != i) prod *= roots[i] - roots[j];
    const double coef = std::sqrt(std::abs(roots[i] / prod));
    const double sign = global() ? 1.0 : spec_.signs[i];
    X[i] = sign * coef * cu.root_factor[i] * cv.root_factor[i];
  }
  auto emb = detail::embedding_jets(X, Vec3::UnitX());
  // Orient N so that the embedding's second fundamental form agrees with the closed form.
  const bool use_e = std::abs(k1.value()) >= std::abs(k2.value());
  const double closed = use_e ? k1.value() : k2.value();
  const double fromX = use_e ? emb.e.value() / emb.E.value() : emb.g.value() / emb.G.value();
  if (closed * fromX < 0)
    for (auto& n : emb.N) n = -n;

  ChartPoint p;
  p.u = u;
  p.v = v;
  p.X = detail::value(emb.X);
  p.Xu = detail::value(emb.Xu);
  p.Xv = detail::value(emb.Xv);
  p.N = detail::value(emb.N);
  p.E = detail::partials(E);
  p.G = detail::partials(G);
  p.e = detail::partials(k1 * E);
  p.g = detail::partials(k2 * G);
  p.k1 = detail::partials(k1);
  p.k2 = detail::partials(k2);
  if (!detail::finite(p)) throw DomainError("quadric chart: singular point");
  return p;
}

std::vector<Vec3> QuadricSurface::umbilics() const {
  if (spec_.kind == QuadricKind::OneSheet) return {};
  const std::array<double, 3> roots{spec_.a, spec_.b, spec_.c};
  const double w = spec_.kind == QuadricKind::Ellipsoid ? spec_.b : spec_.c;
  Vec3 base;
  for (int i = 0; i < 3; ++i) {
    double prod = 1.0;
    for (int j = 0; j < 3; ++j)
      if (j != i) prod *= roots[i] - roots[j];
    base[i] = std::sqrt(std::max(0.0, roots[i] * (w - roots[i]) * (w - roots[i]) / prod));
  }
  std::vector<Vec3> out;
  for (int sx : {1, -1})
    for (int sy : {1, -1})
      for (int sz : {1, -1}) {
        const Vec3 p(sx * base[0], sy * base[1], sz * base[2]);
        bool dup = false;
        for (const auto& q : out) dup = dup || (q - p).norm() == 0.0;
        if (!dup) out.push_back(p);
      }
  return out;
}

std::shared_ptr<const QuadricSurface> make_quadric(const QuadricSpec& spec) {
  return std::make_shared<QuadricSurface>(spec);
}

}  // namespace darboux
