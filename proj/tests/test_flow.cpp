#include <algorithm>
#include <cmath>
#include <numbers>

#include "darboux/flow.hpp"
#include "darboux/integrals.hpp"
#include "doctest.h"
#include "test_surfaces.hpp"

using namespace darboux;

namespace {

double segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 d = b - a;
  const double t = d.squaredNorm() > 0 ? std::clamp((p - a).dot(d) / d.squaredNorm(), 0.0, 1.0) : 0.0;
  return (p - a - t * d).norm();
}

// Largest distance from a sample of `a` to the polyline of `b`, skipping
// samples with |sin 2 alpha| below `gap`.
double one_sided_distance(const Trajectory& a, const Trajectory& b, double gap = 0) {
  double worst = 0;
  for (const auto& sa : a.samples) {
    if (std::abs(std::sin(2 * sa.alpha_lift)) < gap) continue;
    double best = 1e300;
    for (size_t k = 0; k + 1 < b.samples.size(); ++k)
      best = std::min(best, segment_distance(sa.position, b.samples[k].position, b.samples[k + 1].position));
    worst = std::max(worst, best);
  }
  return worst;
}

// Arc-length Darboux field written out from the unsingular form of the
// defining line field, for comparison with the library.
FieldValue reference_field(const ChartPoint& p, double a) {
  const double c = std::cos(a), s = std::sin(a), d = p.k1.f - p.k2.f;
  const double sE = std::sqrt(p.E.f), sG = std::sqrt(p.G.f);
  return {c / sE, s / sG, p.k1.u * c * c / (3 * sE * d * s) + p.k2.v * s * s / (3 * sG * d * c)};
}

}  // namespace

TEST_CASE("desingularized and arc-length fields span the same line") {
  for (const auto& [name, s] : test::catalog_surfaces()) {
    CAPTURE(name);
    const Domain d = s->scan_domain();
    const ChartPoint p = s->evaluate(d.u_min + 0.45 * d.u_span(), d.v_min + 0.35 * d.v_span());
    for (double a : {0.3, 1.0, 2.2, -0.7}) {
      const FieldValue f = darboux_field_desingularized(p, a), g = darboux_field_arclength(p, a);
      const FieldValue r = reference_field(p, a);
      CHECK(g.du == doctest::Approx(r.du).epsilon(1e-13));
      CHECK(g.dv == doctest::Approx(r.dv).epsilon(1e-13));
      CHECK(g.dalpha == doctest::Approx(r.dalpha).epsilon(1e-12));
      const double scale = 3 * (p.k1.f - p.k2.f) * std::sin(a) * std::cos(a);
      CHECK(f.du == doctest::Approx(scale * r.du).epsilon(1e-12));
      CHECK(f.dv == doctest::Approx(scale * r.dv).epsilon(1e-12));
      CHECK(f.dalpha == doctest::Approx(scale * r.dalpha).epsilon(1e-12));
    }
    CHECK_THROWS_AS(darboux_field_arclength(p, 0.0), SingularDirectionError);
  }
}

TEST_CASE("arc-length and desingularized trajectories coincide as point sets") {
  const auto q = test::ellipsoid();
  IntegratorParams p;
  p.max_arc_length = 1.5;
  p.max_ds = 0.0005;
  for (double a0 : {0.4, 0.9, 1.3}) {
    CAPTURE(a0);
    const Trajectory al = integrate_arclength(*q, {2.5, 1.5, a0}, p);
    REQUIRE(al.samples.size() > 10);
    IntegratorParams p2 = p;
    p2.max_arc_length = al.arc_length();
    // The desingularized field carries the factor 3 (k1 - k2) sin cos.
    const ChartPoint c0 = q->evaluate(2.5, 1.5);
    p2.direction = (c0.k1.f - c0.k2.f) * std::sin(2 * a0) > 0 ? 1 : -1;
    const Trajectory ds = integrate(*q, {2.5, 1.5, a0}, p2);
    CHECK(std::abs(ds.arc_length() - al.arc_length()) < 1e-6);
    // Away from the standoff, where the arc-length field is stiff.
    CHECK(one_sided_distance(al, ds, 0.05) < 1e-6);
    CHECK(one_sided_distance(ds, al, 0.05) < 1e-6);
  }
}

TEST_CASE("reversing the orientation retraces the same curve") {
  const SurfacePtr s = test::sinusoid_revolution();
  IntegratorParams p;
  p.max_arc_length = 2.0;
  const Trajectory fwd = integrate(*s, {0.3, 1.0, 0.7}, p);
  IntegratorParams back = p;
  back.direction = -1;
  const Trajectory rev = integrate(*s, {0.3, 1.0, 0.7 + std::numbers::pi}, back);
  CHECK(fwd.arc_length() == doctest::Approx(rev.arc_length()).epsilon(1e-9));
  CHECK(one_sided_distance(fwd, rev) < 1e-8);
  CHECK(one_sided_distance(rev, fwd) < 1e-8);
}

TEST_CASE("the reflection alpha -> -alpha carries trajectories to the pushed-forward field") {
  const auto q = test::ellipsoid();
  IntegratorParams p;
  p.max_arc_length = 1.0;
  p.max_ds = 0.0005;
  const Trajectory tr = integrate_arclength(*q, {2.4, 1.4, 0.8}, p);
  REQUIRE(tr.samples.size() > 20);
  // Reflected lift (u, v, -alpha) against D2 = phi_* D1 written out by hand.
  double worst = 0;
  for (size_t k = 2; k + 2 < tr.samples.size(); ++k) {
    const auto& a = tr.samples[k - 1];
    const auto& b = tr.samples[k + 1];
    const auto& m = tr.samples[k];
    if (b.s - m.s < 1e-5 || m.s - a.s < 1e-5 || std::abs(std::sin(2 * m.alpha_lift)) < 0.5) continue;
    const auto w = fd_weights(m.s, {a.s, m.s, b.s}, 1)[1];
    const double du = w[0] * a.state.u + w[1] * m.state.u + w[2] * b.state.u;
    const double dv = w[0] * a.state.v + w[1] * m.state.v + w[2] * b.state.v;
    const double dbeta = -(w[0] * a.alpha_lift + w[1] * m.alpha_lift + w[2] * b.alpha_lift);
    const ChartPoint cp = q->evaluate(m.state.u, m.state.v);
    const double be = -m.alpha_lift, c = std::cos(be), s = std::sin(be), d = cp.k1.f - cp.k2.f;
    const double sE = std::sqrt(cp.E.f), sG = std::sqrt(cp.G.f);
    const double D2u = c / sE, D2v = -s / sG;
    const double D2a = -(-cp.k1.u * c * c / (3 * sE * d * s) + cp.k2.v * s * s / (3 * sG * d * c));
    worst = std::max({worst, std::abs(du - D2u), std::abs(dv - D2v), std::abs(dbeta - D2a) / std::max(1.0, std::abs(D2a))});
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("Darboux oracles pass on trajectories and fail on controls") {
  for (const auto& [name, s] : test::catalog_surfaces()) {
    CAPTURE(name);
    const Domain d = s->scan_domain();
    IntegratorParams p;
    p.max_arc_length = 2.0;
    const DarbouxState x0{d.u_min + 0.5 * d.u_span(), d.v_min + 0.45 * d.v_span(), 0.6};
    const Trajectory tr = integrate(*s, x0, p);
    REQUIRE(tr.samples.size() > 5);
    CHECK(darboux_residual(*s, tr) < 1e-5);
    CHECK(osculating_contact_residual(*s, tr) < 1e-5);
    const Trajectory geo = trace_geodesic(*s, x0, p);
    const bool cylinder = s->family() == SurfaceFamily::Cylinder;
    // Helices on the circular cylinder are both geodesics and Darboux curves.
    if (!(cylinder && name == "cylinder circle")) {
      CHECK(darboux_residual(*s, geo) > 1e-2);
      CHECK(osculating_contact_residual(*s, geo) > 1e-2);
    }
  }
}

TEST_CASE("first integrals are conserved and converge with the tolerance") {
  const auto q = test::ellipsoid(true);
  IntegratorParams p;
  p.max_arc_length = 10.0;
  const Trajectory tr = integrate(*q, {1.0, 0.7, 0.5}, p);
  REQUIRE(tr.reason == Termination::ArcLengthBudget);
  const auto rep = conservation_report(tr, {"quadric_integral"});
  REQUIRE(rep.size() == 1);
  CHECK(rep[0].max_rel_drift < 1e-8);
  std::vector<double> drift;
  for (double tol : {1e-6, 1e-7, 1e-8}) {
    IntegratorParams pt = p;
    pt.rel_tol = tol;
    pt.abs_tol = tol * 1e-2;
    pt.max_ds = 1.0;
    pt.max_dalpha = 1.0;
    drift.push_back(conservation_report(integrate(*q, {1.0, 0.7, 0.5}, pt), {"quadric_integral"})[0].max_rel_drift);
  }
  CAPTURE(drift[0]);
  CAPTURE(drift[1]);
  CAPTURE(drift[2]);
  CHECK(drift[0] / drift[2] >= 4.0);
}

TEST_CASE("principal events sit on principal directions") {
  const auto q = test::ellipsoid(true);
  IntegratorParams p;
  p.max_arc_length = 6.0;
  const Trajectory tr = integrate(*q, {1.2, 0.9, 0.4}, p);
  int n = 0;
  for (const auto& e : tr.events)
    if (e.name == "principal") {
      ++n;
      CHECK(std::abs(std::sin(2 * e.state.alpha)) < 1e-10);
    }
  CHECK(n > 0);
}

TEST_CASE("constant-angle leaves keep their normal curvature") {
  for (const auto& [name, s] : test::catalog_surfaces()) {
    CAPTURE(name);
    const Domain d = s->scan_domain();
    IntegratorParams p;
    p.max_arc_length = 2.0;
    const double u = d.u_min + 0.5 * d.u_span(), v = d.v_min + 0.5 * d.v_span(), a0 = 0.7;
    const Trajectory tr = falpha_leaf(*s, u, v, a0, 1, p);
    REQUIRE(tr.samples.size() > 3);
    for (const auto& sm : tr.samples) {
      const ChartPoint cp = s->evaluate(sm.state.u, sm.state.v);
      const double expected = cp.k1.f * std::cos(a0) * std::cos(a0) + cp.k2.f * std::sin(a0) * std::sin(a0);
      CHECK(std::abs(sm.monitors[tr.monitor_index("k_n")] - expected) < 1e-10);
      CHECK(std::abs(sm.monitors[tr.monitor_index("k_n_forms")] - expected) < 1e-10);
    }
  }
}

TEST_CASE("plane-field integrability holds on canal surfaces only") {
  for (const auto& [name, s] : test::catalog_surfaces()) {
    CAPTURE(name);
    const Domain d = s->scan_domain();
    const auto r = plane_field_integrability(*s, d.u_min + 0.4 * d.u_span(), d.v_min + 0.3 * d.v_span());
    const SurfaceFamily f = s->family();
    if (f == SurfaceFamily::Revolution || f == SurfaceFamily::Cone || f == SurfaceFamily::Cylinder) {
      CHECK(std::abs(r.res1) < 1e-6);
      CHECK(std::abs(r.res2) < 1e-6);
    } else {
      CHECK(std::max(std::abs(r.res1), std::abs(r.res2)) > 1e-3);
    }
  }
}

TEST_CASE("geodesics on the circular cylinder are helices") {
  const SurfacePtr s = test::from_json(R"({"type":"cylinder","parameters":{"directrix":"circle","r":1.5}})");
  IntegratorParams p;
  p.max_arc_length = 3.0;
  const Trajectory tr = trace_geodesic(*s, {1.0, 0.0, 0.5}, p);
  for (const auto& sm : tr.samples) CHECK(std::abs(sm.alpha_lift - 0.5) < 1e-10);
}

TEST_CASE("batch integration matches the serial reference") {
  const auto q = test::ellipsoid(true);
  IntegratorParams p;
  p.max_arc_length = 2.0;
  const std::vector<DarbouxState> starts{{1.0, 0.7, 0.5}, {2.0, 1.9, -0.4}, {4.0, 2.5, 1.2}, {0.5, 0.4, 2.0}};
  const auto par = integrate_batch(*q, starts, p, 3);
  const auto ser = integrate_batch_serial(*q, starts, p);
  REQUIRE(par.size() == ser.size());
  for (size_t i = 0; i < par.size(); ++i) {
    REQUIRE(par[i].samples.size() == ser[i].samples.size());
    CHECK(par[i].samples.back().position == ser[i].samples.back().position);
  }
  CHECK_THROWS_AS(integrate_batch(*q, starts, p, 0), SpecError);
}

TEST_CASE("integrator parameters are validated") {
  const auto q = test::ellipsoid();
  IntegratorParams p;
  p.rel_tol = -1;
  CHECK_THROWS_AS(integrate(*q, {2.5, 1.5, 0.5}, p), SpecError);
  p = IntegratorParams{};
  p.direction = 0;
  CHECK_THROWS_AS(integrate(*q, {2.5, 1.5, 0.5}, p), SpecError);
  CHECK_THROWS_AS(integrate(*q, {3.5, 1.5, 0.5}, IntegratorParams{}), DomainError);
}

TEST_CASE("trajectories stop at the umbilic standoff") {
  const auto q = test::ellipsoid(true);
  IntegratorParams p;
  p.max_arc_length = 3.0;
  const Trajectory tr = integrate(*q, {3.1414, 0.0002, 0.3}, p);
  CHECK(tr.reason == Termination::UmbilicProximity);
}
