#include "darboux/quadric_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "darboux/io.hpp"

namespace darboux {

namespace {

constexpr double kPi = std::numbers::pi;

void require_confocal(const QuadricSurface& q, double U, double V) {
  const auto [ulo, uhi] = q.U_range();
  const auto [vlo, vhi] = q.V_range();
  if (!(U > ulo && U < uhi && V > vlo && V < vhi)) throw DomainError("point outside the confocal ranges");
}

}  // namespace

std::optional<double> level_cos2(double U, double V, double lambda) {
  const double c2 = (1 / lambda - 1 / V) / (1 / U - 1 / V);
  if (!(c2 >= 0 && c2 <= 1)) return std::nullopt;
  return c2;
}

ImplicitDirections implicit_directions(const QuadricSurface& q, double U, double V, double lambda) {
  require_confocal(q, U, V);
  if (lambda == U || lambda == V) throw DomainError("implicit_directions: lambda equals a confocal coordinate");
  const double HU = q.H(U), HV = q.H(V);
  ImplicitDirections out;
  const double root = std::sqrt(q.a() * q.b() * q.c() / (U * V));
  out.kn_expected = root / lambda;
  const double m2 = (U - lambda) * HV / ((V - lambda) * HU);
  if (!(m2 >= 0)) return out;
  out.real = true;
  const double E = (V - U) * U / (4 * HU), G = (U - V) * V / (4 * HV);
  const double k1 = root / U, k2 = root / V;
  const double m = std::sqrt(m2);
  for (double sgn : {1.0, -1.0}) {
    const double dv = sgn * m;
    const double len = std::sqrt(E + G * dv * dv);
    ImplicitDirection d;
    d.dU = 1 / len;
    d.dV = dv / len;
    d.alpha = std::atan2(std::sqrt(G) * d.dV, std::sqrt(E) * d.dU);
    const double c = std::cos(d.alpha), s = std::sin(d.alpha);
    d.kn = k1 * c * c + k2 * s * s;
    out.directions.push_back(d);
  }
  return out;
}

LambdaRegime regime_classify(const QuadricSurface& q, double lambda) {
  const double a = q.a(), b = q.b(), c = q.c();
  const auto [ulo, uhi] = q.U_range();
  const auto [vlo, vhi] = q.V_range();
  LambdaRegime r;
  r.kind = q.spec().kind;
  r.lambda = lambda;
  r.boundary = lambda == a || lambda == b || lambda == c;
  auto band = [&](const char* coord, double lo, double hi, bool bounded) {
    r.real = true;
    r.band = coord;
    r.lo = lo;
    r.hi = hi;
    r.bounded = bounded;
  };
  switch (r.kind) {
    case QuadricKind::Ellipsoid:
      if (lambda < c || lambda > a) {
        r.label = "no real directions";
      } else if (lambda == c || lambda == a) {
        r.label = lambda == c ? "boundary lambda = c: band collapses to the ellipse z = 0"
                              : "boundary lambda = a: band collapses to the ellipse x = 0";
      } else if (lambda < b) {
        r.label = "c < lambda < b: bounded band c <= V <= lambda";
        band("V", c, lambda, true);
      } else if (lambda == b) {
        r.label = "lambda = b: circular sections";
        band("all", vlo, uhi, true);
      } else {
        r.label = "b < lambda < a: bounded band lambda <= U <= a";
        band("U", lambda, a, true);
      }
      break;
    case QuadricKind::TwoSheet:
      if (lambda < c) {
        r.label = "lambda < c: unbounded band V <= lambda";
        band("V", vlo, lambda, false);
      } else if (lambda == c) {
        r.label = "lambda = c: circular sections";
        band("all", vlo, uhi, false);
      } else if (lambda < b) {
        r.label = "c < lambda < b: unbounded band lambda <= U <= b";
        band("U", lambda, b, false);
      } else {
        r.label = lambda == b ? "boundary lambda = b: no real directions" : "no real directions";
      }
      break;
    case QuadricKind::OneSheet:
      if (lambda < c) {
        r.label = "lambda < c: bounded band lambda <= V <= c";
        band("V", lambda, c, true);
      } else if (lambda == c) {
        r.label = "boundary lambda = c: stated as straight lines; no real directions off V = c";
      } else if (lambda <= b) {
        r.label = lambda == b ? "lambda = b: no real directions" : "no real directions";
      } else if (lambda < a) {
        r.label = "b < lambda < a: unbounded band b <= U <= lambda";
        band("U", b, lambda, false);
      } else if (lambda == a) {
        r.label = "boundary lambda = a: stated as straight lines";
        band("all", ulo, uhi, false);
      } else {
        r.label = "lambda > a: helices, unbounded in both directions";
        band("all", vlo, uhi, false);
      }
      break;
  }
  return r;
}

Quadrature band_integral(const QuadricSurface& q, double lambda, double lo, double hi, int panels) {
  if (!(hi > lo)) throw SpecError("band_integral: empty range");
  const double roots[3] = {q.a(), q.b(), q.c()};
  // x = end + side * t^2; factors vanishing at the endpoint use t^2 directly.
  auto integrand = [&](double end, double side, double t) {
    const double d = t * t;
    const double x = end + side * d;
    auto factor = [&](double r) { return r == end ? d : std::abs(x - r); };
    const double num = factor(lambda);
    const double den = factor(roots[0]) * factor(roots[1]) * factor(roots[2]);
    return 2 * t * std::sqrt(num / den);
  };
  const double mid = 0.5 * (lo + hi), w = std::sqrt(mid - lo);
  Quadrature out;
  for (auto [end, side] : {std::pair{lo, 1.0}, std::pair{hi, -1.0}}) {
    auto f = [&, end = end, side = side](double t) { return integrand(end, side, t); };
    if (panels <= 0) {
      double err = 0;
      out.value += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, w, 12, 1e-12, &err);
      out.error += err;
    } else {
      const double h = w / panels;
      for (int i = 0; i < panels; ++i)
        out.value += boost::math::quadrature::gauss<double, 20>::integrate(f, i * h, (i + 1) * h);
    }
  }
  return out;
}

RotationData sigma_lengths(const QuadricSurface& q, double lambda) {
  const LambdaRegime r = regime_classify(q, lambda);
  if (q.spec().kind != QuadricKind::Ellipsoid || !r.bounded || (r.band != "U" && r.band != "V"))
    throw SpecError("sigma_lengths: lambda is not in a bounded band of the ellipsoid");
  const double a = q.a(), b = q.b(), c = q.c();
  RotationData d;
  Quadrature q1, q2;
  if (r.band == "V") {
    q1 = band_integral(q, lambda, b, a);
    q2 = band_integral(q, lambda, c, lambda);
  } else {
    q1 = band_integral(q, lambda, lambda, a);
    q2 = band_integral(q, lambda, c, b);
  }
  d.L1 = q1.value;
  d.L2 = q2.value;
  d.error1 = q1.error;
  d.error2 = q2.error;
  d.rho = d.L2 / d.L1;
  d.finite = std::isfinite(d.rho);
  return d;
}

RotationData falpha_rotation(const QuadricSurface& q, double alpha) {
  if (q.spec().kind != QuadricKind::Ellipsoid) throw SpecError("falpha_rotation: needs an ellipsoid");
  if (!(alpha > 0 && alpha < kPi / 2)) throw SpecError("falpha_rotation: alpha must lie in (0, pi/2)");
  // sqrt(x / |H(x)|) is the band integrand at lambda = 0.
  const Quadrature iu = band_integral(q, 0.0, q.b(), q.a());
  const Quadrature iv = band_integral(q, 0.0, q.c(), q.b());
  RotationData d;
  d.L1 = 2 * std::sin(alpha) * iu.value;
  d.L2 = 2 * std::cos(alpha) * iv.value;
  d.error1 = 2 * iu.error;
  d.error2 = 2 * iv.error;
  d.rho = d.L2 / d.L1;
  return d;
}

std::pair<double, double> sigma_coordinates(const QuadricSurface& q, double lambda, double U, double V) {
  const LambdaRegime r = regime_classify(q, lambda);
  if (q.spec().kind != QuadricKind::Ellipsoid || !r.bounded || (r.band != "U" && r.band != "V"))
    throw SpecError("sigma_coordinates: lambda is not in a bounded band of the ellipsoid");
  const double ulo = r.band == "U" ? lambda : q.b();
  const double vlo = q.c();
  if (U < ulo || V < vlo || U > q.a() || V > (r.band == "V" ? lambda : q.b()))
    throw DomainError("sigma_coordinates: point outside the band");
  const double s1 = U > ulo ? band_integral(q, lambda, ulo, U).value : 0.0;
  const double s2 = V > vlo ? band_integral(q, lambda, vlo, V).value : 0.0;
  return {s1, s2};
}

IntegratorParams poincare_integrator() {
  IntegratorParams p;
  p.rel_tol = 1e-11;
  p.abs_tol = 1e-13;
  p.max_arc_length = 50;
  p.max_ds = 1.0;
  p.max_dalpha = 0.5;
  p.record_residuals = false;
  return p;
}

namespace {

std::shared_ptr<const QuadricSurface> global_copy(const QuadricSurface& q) {
  QuadricSpec s = q.spec();
  s.chart = QuadricChart::Global;
  return make_quadric(s);
}

// Closed-form global ellipsoid chart carrying only what the Darboux and
// F_alpha fields read: E, G, k1, k2 with first partials, position and normal.
// Much cheaper than the jet evaluation used for ridge and oracle work.
class EllipsoidFlowChart final : public Surface {
 public:
  explicit EllipsoidFlowChart(const QuadricSurface& q) : a_(q.a()), b_(q.b()), c_(q.c()) {
    const double r[3] = {a_, b_, c_};
    for (int i = 0; i < 3; ++i) {
      double prod = 1.0;
      for (int j = 0; j < 3; ++j)
        if (j != i) prod *= r[i] - r[j];
      coef_[i] = std::sqrt(std::abs(r[i] / prod));
    }
  }
  std::string name() const override { return "ellipsoid-flow-chart"; }
  SurfaceFamily family() const override { return SurfaceFamily::Quadric; }
  Domain domain() const override {
    const double inf = std::numeric_limits<double>::infinity();
    return {-inf, inf, -inf, inf};
  }
  ChartPoint evaluate(double u, double v) const override {
    const double hu = 0.5 * (a_ - b_), hv = 0.5 * (b_ - c_);
    const double U = 0.5 * (a_ + b_) + hu * std::cos(u), Uu = -hu * std::sin(u);
    const double V = 0.5 * (b_ + c_) + hv * std::cos(v), Vv = -hv * std::sin(v);
    ChartPoint p;
    p.u = u;
    p.v = v;
    p.X = Vec3(coef_[0] * std::sqrt(2 * hu) * std::sin(0.5 * u) * std::sqrt(a_ - V),
               coef_[1] * std::sqrt(2 * hu) * std::cos(0.5 * u) * std::sqrt(2 * hv) * std::sin(0.5 * v),
               coef_[2] * std::sqrt(U - c_) * std::sqrt(2 * hv) * std::cos(0.5 * v));
    p.N = -Vec3(p.X.x() / a_, p.X.y() / b_, p.X.z() / c_).normalized();
    // E = (U - V) U / (4 (U - c)), G = (U - V) V / (4 (a - V)).
    const double E = (U - V) * U / (4 * (U - c_)), G = (U - V) * V / (4 * (a_ - V));
    const double E_U = ((2 * U - V) * (U - c_) - (U - V) * U) / (4 * (U - c_) * (U - c_)), E_V = -U / (4 * (U - c_));
    const double G_U = V / (4 * (a_ - V)), G_V = ((U - 2 * V) * (a_ - V) + (U - V) * V) / (4 * (a_ - V) * (a_ - V));
    const double K = std::sqrt(a_ * b_ * c_ / (U * V));
    const double k1 = K / U, k2 = K / V;
    p.E.f = E;
    p.E.u = E_U * Uu;
    p.E.v = E_V * Vv;
    p.G.f = G;
    p.G.u = G_U * Uu;
    p.G.v = G_V * Vv;
    p.k1.f = k1;
    p.k1.u = -1.5 * k1 / U * Uu;
    p.k1.v = -0.5 * k1 / V * Vv;
    p.k2.f = k2;
    p.k2.u = -0.5 * k2 / U * Uu;
    p.k2.v = -1.5 * k2 / V * Vv;
    p.e.f = k1 * E;
    p.g.f = k2 * G;
    return p;
  }

 private:
  double a_, b_, c_;
  double coef_[3];
};

// Chart angle of X in the bounded range (p, q) under X = (p+q)/2 + (q-p)/2 cos.
double chart_angle(double p, double q, double X) {
  return std::acos(std::clamp((2 * X - p - q) / (q - p), -1.0, 1.0));
}

double birkhoff_weight(double x) { return x <= 0 || x >= 1 ? 0.0 : std::exp(-1 / (x * (1 - x))); }

struct SectionSetup {
  std::string name;
  DarbouxState start;
  bool on_u = true;  // section is u = const (coordinate is v), else v = const
  double level = 0;  // chart value of the section
  double circuit = 4 * kPi;
  bool invert = false;  // rotation = 1 / advance
  // Transverse confinement check for the Darboux band.
  double band_lo = -1, band_hi = -1;
  bool band_on_U = true;
};

}  // namespace

SurfacePtr ellipsoid_flow_chart(const QuadricSurface& q) {
  if (q.spec().kind != QuadricKind::Ellipsoid) throw SpecError("ellipsoid_flow_chart: needs an ellipsoid");
  return std::make_shared<EllipsoidFlowChart>(q);
}

PoincareResult poincare_map(const QuadricSurface& q0, const PoincareParams& p) {
  if (q0.spec().kind != QuadricKind::Ellipsoid) throw SpecError("poincare_map: needs an ellipsoid");
  if (p.iterates < 2) throw SpecError("poincare_map: at least two iterates");
  const auto gq = global_copy(q0);
  const QuadricSurface& q = *gq;
  const EllipsoidFlowChart fc(q);
  const double a = q.a(), b = q.b(), c = q.c();

  SectionSetup st;
  if (p.flow == SectionFlow::FAlpha) {
    if (!(p.alpha > 0 && p.alpha < kPi / 2)) throw SpecError("poincare_map: alpha must lie in (0, pi/2)");
    st.name = "V = " + format_double(b);
    st.on_u = false;
    st.level = 0;
    st.circuit = 2 * kPi;
    st.start = {p.start, 0.5, p.alpha};
  } else {
    const LambdaRegime r = regime_classify(q, p.lambda);
    if (!r.bounded || (r.band != "U" && r.band != "V"))
      throw SpecError("poincare_map: lambda is not in a bounded band of the ellipsoid");
    double U, V;
    if (r.band == "U") {
      U = 0.5 * (p.lambda + a);
      st.name = "U = " + format_double(U);
      st.on_u = true;
      st.level = chart_angle(b, a, U);
      st.invert = true;
      V = q.confocal(0.0, p.start).second;
      st.start = {st.level, p.start, 0};
      st.band_on_U = true;
    } else {
      V = 0.5 * (c + p.lambda);
      st.name = "V = " + format_double(V);
      st.on_u = false;
      st.level = chart_angle(c, b, V);
      U = q.confocal(p.start, 0.0).first;
      st.start = {p.start, st.level, 0};
      st.band_on_U = false;
    }
    st.band_lo = r.lo;
    st.band_hi = r.hi;
    const auto c2 = level_cos2(U, V, p.lambda);
    if (!c2) throw DomainError("poincare_map: no real direction at the start");
    // Signs chosen so that the unreflected start advances in the positive
    // direction along the band; the reflected start reverses V' (U' for the
    // V-band), which reverses that advance.
    const double al = std::acos(std::sqrt(*c2));
    if (r.band == "U")
      st.start.alpha = p.reflected ? al : kPi - al;
    else
      st.start.alpha = p.reflected ? al : -al;
  }
  if (p.flow == SectionFlow::FAlpha && p.reflected) st.start.alpha = -st.start.alpha;

  const bool on_u = st.on_u;
  const double level = st.level;
  EventSpec section{"section",
                    [on_u, level](const ChartPoint&, const DarbouxState& x) {
                      return std::sin(0.5 * (on_u ? x.u - level : x.v - level));
                    },
                    0, false};
  // Darboux: one rising crossing per transverse period; F_alpha: every crossing.
  if (p.flow == SectionFlow::Darboux) {
    section.g = [on_u, level](const ChartPoint&, const DarbouxState& x) { return on_u ? x.u - level : x.v - level; };
    section.direction = 1;
  }

  PoincareResult res;
  res.section = st.name;
  IntegratorParams ip = p.integrator;
  DarbouxState x = st.start;
  double s0 = 0, t0 = 0;
  long steps = 0;
  while (static_cast<int>(res.crossings.size()) < p.iterates + 1) {
    Trajectory tr = p.flow == SectionFlow::FAlpha ? falpha_leaf(fc, x.u, x.v, std::abs(x.alpha), x.alpha < 0 ? -1 : 1, ip, {section})
                                                  : integrate(fc, x, ip, {}, {section});
    steps += tr.accepted + tr.rejected;
    for (const auto& e : tr.events) {
      if (e.name != "section" || e.s == 0) continue;
      Crossing cr;
      cr.iterate = static_cast<int>(res.crossings.size());
      cr.coordinate = on_u ? e.state.v : e.state.u;
      cr.s = s0 + e.s;
      cr.t = t0 + e.t;
      res.crossings.push_back(cr);
    }
    if (st.band_lo < st.band_hi) {
      const double tol = 1e-8 * (a - c);
      for (const auto& sm : tr.samples) {
        const auto [U, V] = q.confocal(sm.state.u, sm.state.v);
        const double X = st.band_on_U ? U : V;
        if (X < st.band_lo - tol || X > st.band_hi + tol) throw DomainError("poincare_map: orbit left the band");
      }
    }
    if (tr.reason != Termination::ArcLengthBudget) throw DomainError("poincare_map: integration stopped: " + to_string(tr.reason));
    if (steps > ip.max_steps) throw DomainError("poincare_map: step budget exhausted");
    const Sample& last = tr.samples.back();
    x = {last.state.u, last.state.v, p.flow == SectionFlow::FAlpha ? x.alpha : last.alpha_lift};
    s0 += last.s;
    t0 += last.t;
  }
  res.crossings.resize(p.iterates + 1);

  const int n = p.iterates;
  double num = 0, den = 0, plain = 0;
  for (int i = 0; i < n; ++i) {
    const double d = res.crossings[i + 1].coordinate - res.crossings[i].coordinate;
    const double w = birkhoff_weight((i + 1.0) / (n + 1.0));
    num += w * d;
    den += w;
    plain += d;
  }
  res.advance = num / den / st.circuit;
  const double plain_advance = plain / n / st.circuit;
  res.rotation = st.invert ? 1 / res.advance : res.advance;
  res.rotation_plain = st.invert ? 1 / plain_advance : plain_advance;
  for (int i = 1; i <= n; ++i) {
    const double d = std::remainder(res.crossings[i].coordinate - res.crossings[0].coordinate, st.circuit);
    if (std::abs(d) < 1e-6) {
      res.period = i;
      break;
    }
  }
  return res;
}

std::vector<PoincareResult> poincare_batch(const QuadricSurface& q, const std::vector<PoincareParams>& ps, int jobs) {
  if (jobs < 1) throw SpecError("parallelism width must be at least 1");
  std::vector<PoincareResult> out(ps.size());
  std::vector<std::string> errors(ps.size());
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
  for (long i = 0; i < static_cast<long>(ps.size()); ++i) {
    try {
      out[i] = poincare_map(q, ps[i]);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) throw DomainError(e);
  return out;
}

double lambda_for_rho(const QuadricSurface& q, double target, double lo, double hi) {
  auto f = [&](double l) { return sigma_lengths(q, l).rho - target; };
  double flo = f(lo), fhi = f(hi);
  if (flo * fhi > 0) throw SpecError("lambda_for_rho: target not bracketed");
  for (int i = 0; i < 200 && hi - lo > 1e-15 * std::abs(hi); ++i) {
    const double mid = 0.5 * (lo + hi), fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

CircleFit fit_circle(const std::vector<Vec3>& pts) {
  if (pts.size() < 3) throw SpecError("fit_circle: needs at least three points");
  CircleFit f;
  f.samples = pts.size();
  Vec3 centroid = Vec3::Zero();
  for (const auto& x : pts) centroid += x;
  centroid /= static_cast<double>(pts.size());
  Eigen::MatrixXd M(pts.size(), 3);
  for (size_t i = 0; i < pts.size(); ++i) M.row(i) = (pts[i] - centroid).transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinV);
  const Vec3 e1 = svd.matrixV().col(0), e2 = svd.matrixV().col(1);
  f.normal = svd.matrixV().col(2);
  // x^2 + y^2 + D x + E y + F = 0 in the plane basis.
  Eigen::MatrixXd A(pts.size(), 3);
  Eigen::VectorXd rhs(pts.size());
  for (size_t i = 0; i < pts.size(); ++i) {
    const Vec3 d = pts[i] - centroid;
    const double x = d.dot(e1), y = d.dot(e2);
    f.planarity = std::max(f.planarity, std::abs(d.dot(f.normal)));
    A.row(i) << x, y, 1.0;
    rhs[i] = -(x * x + y * y);
  }
  const Eigen::Vector3d sol = A.colPivHouseholderQr().solve(rhs);
  const double cx = -sol[0] / 2, cy = -sol[1] / 2;
  f.center = centroid + cx * e1 + cy * e2;
  f.radius = std::sqrt(std::max(0.0, cx * cx + cy * cy - sol[2]));
  for (const auto& x : pts) f.circularity = std::max(f.circularity, std::abs((x - f.center).norm() - f.radius));
  return f;
}

CircularSectionsReport circular_sections_check(const QuadricSurface& q0, int count, int jobs) {
  if (q0.spec().kind != QuadricKind::Ellipsoid) throw SpecError("circular_sections_check: needs an ellipsoid");
  if (count < 1) throw SpecError("circular_sections_check: count must be positive");
  if (jobs < 1) throw SpecError("parallelism width must be at least 1");
  const auto gq = global_copy(q0);
  const QuadricSurface& q = *gq;
  const EllipsoidFlowChart fc(q);
  const double lambda = q.b();
  const Vec3 umb = q.umbilics().front();
  const Vec3 nu1 = Vec3(umb.x() / q.a(), 0, umb.z() / q.c()).normalized();
  const Vec3 nu2 = Vec3(umb.x() / q.a(), 0, -umb.z() / q.c()).normalized();

  IntegratorParams ip;
  ip.max_arc_length = 100;
  ip.record_residuals = false;
  EventSpec stop{"principal",
                 [](const ChartPoint&, const DarbouxState& x) {
                   return std::abs(std::sin(x.alpha) * std::cos(x.alpha)) - 1e-4;
                 },
                 -1, true};

  CircularSectionsReport rep;
  rep.circles.resize(count);
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
  for (int i = 0; i < count; ++i) {
    // Starts with y > 0, away from the umbilics; alternate the two families.
    const double phi = 0.3 + 2.4 * (i + 0.5) / count;
    const double psi = 0.8 + 1.6 * (i + 0.5) / count;
    const auto [U, V] = q.confocal(phi, psi);
    const double al = std::acos(std::sqrt(*level_cos2(U, V, lambda)));
    const DarbouxState x0{phi, psi, i % 2 ? -al : al};
    std::vector<Vec3> pts;
    for (int dir : {1, -1}) {
      IntegratorParams pd = ip;
      pd.direction = dir;
      const Trajectory tr = integrate(fc, x0, pd, {}, {stop});
      for (const auto& sm : tr.samples) pts.push_back(sm.position);
    }
    CircleFit f = fit_circle(pts);
    f.umbilic_alignment = std::min(f.normal.cross(nu1).norm(), f.normal.cross(nu2).norm());
    rep.circles[i] = f;
  }
  for (const auto& f : rep.circles) {
    rep.max_planarity = std::max(rep.max_planarity, f.planarity);
    rep.max_circularity = std::max(rep.max_circularity, f.circularity);
    rep.max_alignment = std::max(rep.max_alignment, f.umbilic_alignment);
  }
  return rep;
}

nlohmann::json to_json(const LambdaRegime& r) {
  static const char* kinds[] = {"ellipsoid", "one-sheet", "two-sheet"};
  return {{"kind", kinds[static_cast<int>(r.kind)]},
          {"lambda", r.lambda},
          {"label", r.label},
          {"real", r.real},
          {"boundary", r.boundary},
          {"bounded", r.bounded},
          {"band", r.band},
          {"lo", r.lo},
          {"hi", r.hi}};
}

nlohmann::json to_json(const RotationData& r) {
  return {{"L1", r.L1}, {"L2", r.L2}, {"rho", r.rho}, {"error1", r.error1}, {"error2", r.error2}, {"finite", r.finite}};
}

nlohmann::json to_json(const PoincareResult& r, bool with_crossings) {
  nlohmann::json j{{"section", r.section},
                   {"iterates", r.crossings.empty() ? 0 : r.crossings.size() - 1},
                   {"advance", r.advance},
                   {"rotation", r.rotation},
                   {"rotation_plain", r.rotation_plain},
                   {"period", r.period}};
  if (with_crossings) {
    nlohmann::json c = nlohmann::json::array();
    for (const auto& x : r.crossings) c.push_back({x.iterate, x.coordinate, x.s, x.t});
    j["crossings"] = std::move(c);
  }
  return j;
}

std::string crossings_csv(const PoincareResult& r) {
  CsvWriter w({"iterate", "coordinate", "s", "t"});
  for (const auto& x : r.crossings) w.row({static_cast<double>(x.iterate), x.coordinate, x.s, x.t});
  return w.str();
}

}  // namespace darboux
