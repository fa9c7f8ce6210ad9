#include <cmath>
#include <numbers>

#include "darboux/catalog.hpp"
#include "doctest.h"
#include "test_surfaces.hpp"

using namespace darboux;

TEST_CASE("quadric chart curvatures follow the confocal closed forms") {
  struct Case {
    QuadricKind kind;
    double a, b, c;
  };
  for (const Case& k : {Case{QuadricKind::Ellipsoid, 3, 2, 1}, Case{QuadricKind::OneSheet, 3, 2, -1},
                        Case{QuadricKind::TwoSheet, 3, -1, -2}, Case{QuadricKind::Ellipsoid, 5, 2.5, 0.7}}) {
    const auto q = test::quadric(k.kind, k.a, k.b, k.c);
    const Domain d = q->scan_domain();
    for (double t : {0.15, 0.5, 0.85}) {
      const double U = d.u_min + t * d.u_span(), V = d.v_min + (1 - t) * d.v_span();
      const ChartPoint p = q->evaluate(U, V);
      const double root = std::sqrt(k.a * k.b * k.c / (U * V));
      CHECK(std::abs(p.k1.f) == doctest::Approx(root / std::abs(U)).epsilon(1e-10));
      CHECK(std::abs(p.k2.f) == doctest::Approx(root / std::abs(V)).epsilon(1e-10));
      const Vec3 X = p.X;
      CHECK(X.x() * X.x() / k.a + X.y() * X.y() / k.b + X.z() * X.z() / k.c == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(X.x() * X.x() / (k.a - U) + X.y() * X.y() / (k.b - U) + X.z() * X.z() / (k.c - U) ==
            doctest::Approx(1.0).epsilon(1e-10));
      CHECK(X.x() * X.x() / (k.a - V) + X.y() * X.y() / (k.b - V) + X.z() * X.z() / (k.c - V) ==
            doctest::Approx(1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("ellipsoid curvatures are positive with the inward normal") {
  const auto q = test::ellipsoid();
  const ChartPoint p = q->evaluate(2.5, 1.5);
  CHECK(p.k1.f > 0);
  CHECK(p.k2.f > 0);
  CHECK(p.N.dot(p.X) < 0);
}

TEST_CASE("global and octant quadric charts describe the same points") {
  const auto oct = test::ellipsoid(false), glob = test::ellipsoid(true);
  for (auto [U, V] : {std::pair{2.3, 1.2}, std::pair{2.9, 1.9}, std::pair{2.05, 1.5}}) {
    const auto [phi, psi] = glob->chart_from_confocal(U, V);
    const auto [U2, V2] = glob->confocal(phi, psi);
    CHECK(U2 == doctest::Approx(U).epsilon(1e-13));
    CHECK(V2 == doctest::Approx(V).epsilon(1e-13));
    const ChartPoint a = oct->evaluate(U, V), b = glob->evaluate(phi, psi);
    CHECK((a.X.cwiseAbs() - b.X.cwiseAbs()).norm() < 1e-12);
    CHECK(std::abs(a.k1.f - b.k1.f) < 1e-12);
    CHECK(std::abs(a.k2.f - b.k2.f) < 1e-12);
  }
}

TEST_CASE("global ellipsoid chart reaches the umbilics") {
  const auto q = test::ellipsoid(true);
  const auto um = q->umbilics();
  REQUIRE(um.size() == 4);
  const double x0 = std::sqrt(3.0 * (3 - 2) / (3 - 1)), z0 = std::sqrt(1.0 * (2 - 1) / (3 - 1));
  for (const Vec3& p : um) {
    CHECK(std::abs(p.x()) == doctest::Approx(x0).epsilon(1e-14));
    CHECK(p.y() == 0.0);
    CHECK(std::abs(p.z()) == doctest::Approx(z0).epsilon(1e-14));
  }
  CHECK_THROWS_AS(q->evaluate(std::numbers::pi, 0.0), DomainError);
  const ChartPoint near = q->evaluate(std::numbers::pi - 1e-4, 1e-4);
  CHECK(std::abs(near.k1.f - near.k2.f) < 1e-3);
  CHECK((near.X.cwiseAbs() - um[0].cwiseAbs()).norm() < 1e-3);
}

TEST_CASE("revolution normal matches the normalized cross product") {
  const auto r = test::sinusoid_revolution();
  for (double u : {-2.0, -0.4, 0.9, 2.2})
    for (double v : {0.3, 2.0, 4.5}) {
      const ChartPoint p = r->evaluate(u, v);
      const Vec3 n = p.Xu.cross(p.Xv).normalized();
      CHECK(std::min((p.N - n).norm(), (p.N + n).norm()) < 1e-8);
      CHECK(std::abs(p.N.norm() - 1) < 1e-14);
    }
}

TEST_CASE("canal surfaces have vanishing theta2 and theta1 constant on characteristic circles") {
  for (const auto& [name, s] : test::catalog_surfaces()) {
    const SurfaceFamily f = s->family();
    if (f != SurfaceFamily::Revolution && f != SurfaceFamily::Cone && f != SurfaceFamily::Cylinder) continue;
    CAPTURE(name);
    const Domain d = s->scan_domain();
    for (double tu : {0.2, 0.5, 0.8}) {
      const double u = d.u_min + tu * d.u_span();
      double lo = 1e300, hi = -1e300;
      for (double tv : {0.1, 0.35, 0.6, 0.9}) {
        const double v = d.v_min + tv * d.v_span();
        const ChartPoint p = s->evaluate(u, v);
        if (std::abs(p.k1.f - p.k2.f) < 1e-6) continue;
        const FrameScalars fs = frame_scalars(p, 0.0);
        CHECK(std::abs(fs.theta2) < 1e-6);
        lo = std::min(lo, fs.theta1);
        hi = std::max(hi, fs.theta1);
      }
      CHECK(hi - lo < 1e-6);
    }
  }
}

TEST_CASE("cone and cylinder curvatures scale from the embedding") {
  const SurfacePtr cone = test::from_json(R"({"type":"cone","parameters":{"directrix":"circle","beta":0.6}})");
  const ChartPoint a = cone->evaluate(0.4, 1.0), b = cone->evaluate(0.4, 2.0);
  CHECK(std::abs(a.k1.f) > 0);
  CHECK(b.k1.f == doctest::Approx(a.k1.f / 2).epsilon(1e-12));
  CHECK(std::abs(a.k2.f) < 1e-14);
  // Right circular cone with half-angle beta: k = cot(beta) / v.
  CHECK(std::abs(a.k1.f) == doctest::Approx(1 / std::tan(0.6)).epsilon(1e-12));
  const SurfacePtr cyl = test::from_json(R"({"type":"cylinder","parameters":{"directrix":"circle","r":1.5}})");
  CHECK(std::abs(cyl->evaluate(0.3, 0.7).k1.f) == doctest::Approx(1 / 1.5).epsilon(1e-12));
}

TEST_CASE("arc-length directrices are unit speed") {
  const CurvePtr c = arc_length(planar_ellipse(2, 1));
  for (double t : {0.0, 0.7, 2.1, 4.0}) CHECK(c->tangent(t).norm() == doctest::Approx(1.0).epsilon(1e-10));
  const CurvePtr s = arc_length(spherical_ellipse(0.8, 0.5));
  CHECK(s->point(1.3).norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s->tangent(1.3).norm() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("scaled surfaces dilate the embedding") {
  const SurfacePtr s = test::from_json(R"({"type":"ellipsoid","parameters":{"a":3,"b":2,"c":1},"scale":2})");
  const ChartPoint p = s->evaluate(2.5, 1.5), q = test::ellipsoid()->evaluate(2.5, 1.5);
  CHECK((p.X - 2 * q.X).norm() < 1e-13);
  CHECK(p.k1.f == doctest::Approx(q.k1.f / 2).epsilon(1e-13));
}

TEST_CASE("surface specs report the offending field") {
  auto message = [](const char* text) {
    try {
      test::from_json(text);
    } catch (const SpecError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message(R"({"parameters":{}})").find("type") != std::string::npos);
  CHECK(message(R"({"type":"ellipsoid","parameters":{"a":3,"b":2}})").find("'c'") != std::string::npos);
  CHECK(message(R"({"type":"ellipsoid","parameters":{"a":1,"b":2,"c":3}})") != "");
  CHECK(message(R"({"type":"paraboloid"})").find("paraboloid") != std::string::npos);
  CHECK(message(R"({"type":"cone","parameters":{"directrix":"square"}})").find("directrix") != std::string::npos);
  CHECK(message(R"({"type":"revolution","parameters":{"profile":"sinusoid","r0":0.5,"amplitude":1}})") != "");
}

TEST_CASE("every listed type builds from its name") {
  for (const auto& t : catalog_types()) CHECK_FALSE(t.empty());
  CHECK(catalog_types().size() == 7);
}
