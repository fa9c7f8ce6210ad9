#include "darboux/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/tools/roots.hpp>

#include "darboux/io.hpp"
#include "stencil.hpp"

namespace darboux {

using namespace detail;

double lorentz(const LorentzVector& a, const LorentzVector& b) {
  return -a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3] + a[4] * b[4];
}

double lorentz_form(const LorentzVector& x) { return lorentz(x, x); }

std::string to_string(Causality c) {
  switch (c) {
    case Causality::SpaceLike: return "space-like";
    case Causality::TimeLike: return "time-like";
    case Causality::LightLike: return "light-like";
  }
  return "?";
}

Causality classify(const LorentzVector& x) {
  const double l = lorentz_form(x);
  if (std::abs(l) < 1e-12 * x.squaredNorm()) return Causality::LightLike;
  return l > 0 ? Causality::SpaceLike : Causality::TimeLike;
}

LorentzVector lift_point(const Vec3& x) {
  const double r2 = x.squaredNorm();
  LorentzVector m;
  m << (1 + r2) / 2, x.x(), x.y(), x.z(), (r2 - 1) / 2;
  return m;
}

LorentzVector lift_tangent(const Vec3& x, const Vec3& T) {
  const double p = x.dot(T);
  LorentzVector t;
  t << p, T.x(), T.y(), T.z(), p;
  return t;
}

LorentzVector lift_normal(const Vec3& x, const Vec3& nu) {
  if (!(std::abs(nu.norm() - 1) < 1e-12)) throw SpecError("lift_normal: normal is not a unit vector");
  return lift_tangent(x, nu);
}

SpherePoint vm_map(const Surface& s, double u, double v, double alpha) {
  const ChartPoint p = s.evaluate(u, v);
  const double c = std::cos(alpha), sn = std::sin(alpha);
  SpherePoint out;
  out.k = p.k1.f * c * c + p.k2.f * sn * sn;
  out.m = lift_point(p.X);
  out.n = lift_normal(p.X, p.N);
  out.sigma = *out.k * out.m + out.n;
  return out;
}

Sphere extract_sphere(const LorentzVector& sigma) {
  Sphere sp;
  sp.curvature = sigma[0] - sigma[4];
  const Vec3 spatial(sigma[1], sigma[2], sigma[3]);
  if (std::abs(sp.curvature) < 1e-14 * std::max(1.0, spatial.norm())) {
    sp.plane = true;
    const double len = spatial.norm();
    sp.normal = spatial / len;
    sp.offset = (sigma[0] + sigma[4]) / (2 * len);
    return sp;
  }
  sp.center = spatial / sp.curvature;
  sp.radius = 1 / std::abs(sp.curvature);
  return sp;
}

LorentzVector sphere_lift(const Vec3& center, double signed_radius) {
  if (signed_radius == 0) throw SpecError("sphere_lift: zero radius");
  const double r = signed_radius, c2 = center.squaredNorm();
  LorentzVector s;
  s << (1 + c2 - r * r) / (2 * r), center.x() / r, center.y() / r, center.z() / r, (c2 - r * r - 1) / (2 * r);
  return s;
}

LorentzVector plane_lift(const Vec3& normal, double offset) {
  if (!(std::abs(normal.norm() - 1) < 1e-12)) throw SpecError("plane_lift: normal is not a unit vector");
  LorentzVector s;
  s << offset, normal.x(), normal.y(), normal.z(), offset;
  return s;
}

double sphere_membership(const LorentzVector& sigma, const Vec3& y) { return lorentz(lift_point(y), sigma); }

double sphere_angle(const LorentzVector& s1, const LorentzVector& s2) {
  const double l = lorentz(s1, s2);
  if (!(std::abs(l) < 1 - 1e-12)) throw SpecError("sphere_angle: spheres are tangent or do not intersect");
  return std::acos(l);
}

JacobianRank vm_jacobian_rank(const Surface& s, double u, double v, double alpha, bool boundary) {
  const Domain d = s.scan_domain();
  const double hu = 1e-5 * d.u_span(), hv = 1e-5 * d.v_span(), ha = 1e-5;
  const auto col = [&](double du, double dv, double da, double h) -> LorentzVector {
    return (vm_map(s, u + du, v + dv, alpha + da).sigma - vm_map(s, u - du, v - dv, alpha - da).sigma) / (2 * h);
  };
  Eigen::Matrix<double, 5, Eigen::Dynamic> J(5, boundary ? 2 : 3);
  J.col(0) = col(hu, 0, 0, hu);
  J.col(1) = col(0, hv, 0, hv);
  if (!boundary) J.col(2) = col(0, 0, ha, ha);
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
  JacobianRank out;
  const auto sv = svd.singularValues();
  for (int i = 0; i < sv.size(); ++i) {
    out.singular_values.push_back(sv[i]);
    if (sv[i] > 1e-8 * sv[0]) ++out.rank;
  }
  return out;
}

std::vector<double> sphere_section_angles(const Surface& s, double u, double v, double k, double radius) {
  const ChartPoint p = s.evaluate(u, v);
  const LorentzVector sigma = k * lift_point(p.X) + lift_normal(p.X, p.N);
  const double sqE = std::sqrt(p.E.f), sqG = std::sqrt(p.G.f);
  const auto f = [&](double th) {
    const ChartPoint q = s.evaluate(u + radius * std::cos(th) / sqE, v + radius * std::sin(th) / sqG);
    return sphere_membership(sigma, q.X);
  };
  constexpr int kSteps = 720;
  std::vector<double> roots;
  double th0 = 0, f0 = f(0);
  for (int i = 1; i <= kSteps; ++i) {
    const double th1 = 2 * std::numbers::pi * i / kSteps, f1 = f(th1);
    if (f0 * f1 < 0) {
      std::uintmax_t iters = 100;
      const auto [a, b] = boost::math::tools::toms748_solve(
          f, th0, th1, f0, f1, [](double x, double y) { return std::abs(y - x) < 1e-13; }, iters);
      roots.push_back(0.5 * (a + b));
    }
    th0 = th1;
    f0 = f1;
  }
  // Each branch meets the circle twice, at opposite points.
  std::vector<double> dirs;
  for (double r : roots) {
    double a = std::remainder(r, std::numbers::pi);
    if (a <= -std::numbers::pi / 2) a += std::numbers::pi;
    const bool seen = std::any_of(dirs.begin(), dirs.end(), [&](double x) {
      return std::abs(std::remainder(x - a, std::numbers::pi)) < 1e-2;
    });
    if (!seen) dirs.push_back(a);
  }
  std::sort(dirs.begin(), dirs.end());
  return dirs;
}

namespace {

// The Lorentz arc length vanishes with tau_g, and the second derivatives of
// the section lose accuracy well before that.
constexpr double kSectionGap = 0.2;

std::vector<bool> tau_mask(const Trajectory& tr, double gap) {
  const size_t n = tr.samples.size();
  std::vector<bool> ok(n, false);
  for (size_t i = kHalf; i + kHalf < n; ++i) {
    const double a = tr.samples[i].alpha_lift;
    ok[i] = std::abs(std::sin(a) * std::cos(a)) >= gap;
  }
  return ok;
}

}  // namespace

CansecReport cansec_analyze(const Surface& surf, const Trajectory& tr) {
  require_dense(tr);
  const size_t n = tr.samples.size();
  const ChartSamples cs(surf, tr);
  const std::vector<bool> ok = tau_mask(tr, kSectionGap);
  std::vector<LorentzVector> sig(n);
  CansecReport r;
  for (size_t i = 0; i < n; ++i) {
    const Sample& sm = tr.samples[i];
    sig[i] = cs.kn[i] * lift_point(sm.position) + lift_normal(sm.position, sm.normal);
    r.s.push_back(sm.s);
    r.sigma.push_back(sig[i]);
    r.lorentz_sigma.push_back(lorentz_form(sig[i]) - 1);
    r.max_lorentz_sigma = std::max(r.max_lorentz_sigma, std::abs(r.lorentz_sigma.back()));
  }
  r.speed.assign(n, kNaN);
  r.tau_g.assign(n, kNaN);
  r.speed_residual.assign(n, kNaN);
  r.t_component.assign(n, kNaN);
  r.eq7_prediction.assign(n, kNaN);
  r.lorentz_kg.assign(n, kNaN);
  r.orth_m_dot.assign(n, kNaN);

  for (size_t i = 0; i < n; ++i) {
    if (!ok[i]) continue;
    const auto w = fd_weights(tr.samples[i].t, stencil_nodes(tr, i), 2);
    LorentzVector st1 = LorentzVector::Zero(), st2 = LorentzVector::Zero();
    Vec3 xt = Vec3::Zero();
    for (int k = 0; k <= 2 * kHalf; ++k) {
      const size_t j = i - kHalf + k;
      st1 += w[1][k] * sig[j];
      st2 += w[2][k] * sig[j];
      xt += w[1][k] * tr.samples[j].position;
    }
    const CurveScalars c = curve_scalars(cs, tr, i);
    const double ds = xt.norm();
    const Vec3 T = xt / ds;
    const LorentzVector TL = lift_tangent(tr.samples[i].position, T);
    const LorentzVector sp = st1 / ds;

    r.tau_g[i] = c.tau_g;
    r.speed[i] = std::sqrt(std::max(lorentz_form(sp), 0.0));
    r.speed_residual[i] = std::abs(r.speed[i] - std::abs(c.tau_g));
    r.orth_m_dot[i] = std::max(std::abs(lorentz(sig[i], TL)), std::abs(lorentz(sp, TL)));

    // Reparametrize by Lorentz arc length l: k_g vector = d2 sigma/dl2 + sigma.
    const double lt = std::sqrt(lorentz_form(st1));
    const LorentzVector sdot = st1 / lt;
    const double ltt = lorentz(st1, st2) / lt;
    const LorentzVector sddot = (st2 - sdot * ltt) / (lt * lt);
    const LorentzVector kg = sddot + sig[i];
    r.t_component[i] = lorentz(kg, TL);
    r.lorentz_kg[i] = lorentz_form(kg);
    r.eq7_prediction[i] = (c.kn_s + c.tau_g * c.k_g) / (c.tau_g * c.tau_g);

    r.max_speed_residual = std::max(r.max_speed_residual, r.speed_residual[i]);
    r.max_t_component = std::max(r.max_t_component, std::abs(r.t_component[i]));
    r.max_orth = std::max(r.max_orth, r.orth_m_dot[i]);
  }
  return r;
}

SectionSpeed section_speed(const Surface& surf, const Trajectory& tr, double k) {
  require_dense(tr);
  const size_t n = tr.samples.size();
  const ChartSamples cs(surf, tr);
  const std::vector<bool> ok = tau_mask(tr, kCuspGap);
  SectionSpeed out;
  out.speed.assign(n, kNaN);
  out.expected.assign(n, kNaN);
  out.tau_g.assign(n, kNaN);
  for (size_t i = 0; i < n; ++i) {
    if (!ok[i]) continue;
    const auto w = fd_weights(tr.samples[i].t, stencil_nodes(tr, i), 1)[1];
    LorentzVector st = LorentzVector::Zero();
    Vec3 xt = Vec3::Zero();
    for (int q = 0; q <= 2 * kHalf; ++q) {
      const Sample& sm = tr.samples[i - kHalf + q];
      st += w[q] * (k * lift_point(sm.position) + lift_normal(sm.position, sm.normal));
      xt += w[q] * sm.position;
    }
    const CurveScalars c = curve_scalars(cs, tr, i);
    out.speed[i] = std::sqrt(std::max(lorentz_form(st / xt.norm()), 0.0));
    out.tau_g[i] = c.tau_g;
    out.expected[i] = std::hypot(c.tau_g, k - cs.kn[i]);
  }
  return out;
}

std::string cansec_csv(const CansecReport& r) {
  CsvWriter w({"s", "sigma0", "sigma1", "sigma2", "sigma3", "sigma4", "lorentz_sigma", "speed_residual",
               "t_component"});
  for (size_t i = 0; i < r.s.size(); ++i) {
    const auto& g = r.sigma[i];
    w.row({r.s[i], g[0], g[1], g[2], g[3], g[4], r.lorentz_sigma[i], r.speed_residual[i], r.t_component[i]});
  }
  return w.str();
}

}  // namespace darboux
