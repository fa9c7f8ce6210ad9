#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "darboux/catalog.hpp"
#include "darboux/flow.hpp"
#include "json.hpp"

namespace darboux {

// Quantities below use confocal coordinates (U, V) and the level
// I = cos^2(alpha)/U + sin^2(alpha)/V = 1/lambda of the Darboux flow.

struct ImplicitDirection {
  double dU = 0, dV = 0;  // unit first-fundamental-form length
  double alpha = 0;       // angle from P1 in (-pi/2, pi/2]
  double kn = 0;          // k1 cos^2 + k2 sin^2
};

struct ImplicitDirections {
  bool real = false;
  std::vector<ImplicitDirection> directions;  // empty or the pair dV -> -dV
  double kn_expected = 0;                     // (1/lambda) sqrt(abc / (U V))
};

// Real solutions of (V - l) H(U) V'^2 - (U - l) H(V) U'^2 = 0 at (U, V).
// Throws DomainError when lambda equals U or V (principal direction) or the
// point lies outside the confocal ranges.
ImplicitDirections implicit_directions(const QuadricSurface& q, double U, double V, double lambda);

// cos^2(alpha) of the Darboux directions at level lambda; nullopt when not real.
std::optional<double> level_cos2(double U, double V, double lambda);

struct LambdaRegime {
  QuadricKind kind = QuadricKind::Ellipsoid;
  double lambda = 0;
  std::string label;
  bool real = false;      // some real Darboux direction exists
  bool boundary = false;  // lambda equals one of a, b, c
  bool bounded = false;   // the band is compact on the surface
  // Coordinate confined by the band ("U", "V", "all" or "none") and its range.
  std::string band = "none";
  double lo = 0, hi = 0;
};

LambdaRegime regime_classify(const QuadricSurface& q, double lambda);

struct Quadrature {
  double value = 0;
  double error = 0;
};

// Integral of sqrt(|x - lambda| / |H(x)|) over [lo, hi], with the endpoint
// substitutions x = lo + t^2 and x = hi - t^2. `panels` = 0 uses adaptive
// Gauss-Kronrod to 1e-10; otherwise a composite 20-point Gauss rule with that
// many panels per half.
Quadrature band_integral(const QuadricSurface& q, double lambda, double lo, double hi, int panels = 0);

struct RotationData {
  // Ellipsoid Darboux level: L1 over the U-range and L2 over the V-range of
  // the band. F_alpha: s1 (U side, sin alpha) and s2 (V side, cos alpha).
  double L1 = 0, L2 = 0;
  double rho = 0;  // L2 / L1
  double error1 = 0, error2 = 0;
  bool finite = true;
};

// Throws SpecError unless the regime is a bounded band on the ellipsoid
// (c < lambda < b or b < lambda < a).
RotationData sigma_lengths(const QuadricSurface& q, double lambda);

// s1 = 2 sin(alpha) int_b^a sqrt(U/-H(U)) dU, s2 = 2 cos(alpha) int_c^b sqrt(V/H(V)) dV.
// Throws SpecError for alpha outside (0, pi/2) or a non-ellipsoid.
RotationData falpha_rotation(const QuadricSurface& q, double alpha);

// Rectifying coordinates of the level-lambda band, measured from the lower
// end of the band's U- and V-ranges. Along Darboux curves |d sigma1| = |d sigma2|.
std::pair<double, double> sigma_coordinates(const QuadricSurface& q, double lambda, double U, double V);

// Closed-form global ellipsoid chart carrying E, G, k1, k2 with first
// partials, position and normal; the flow kernels below integrate on it.
SurfacePtr ellipsoid_flow_chart(const QuadricSurface& q);

enum class SectionFlow { Darboux, FAlpha };

// Coarse recording, no residual monitors, rel_tol 1e-11; crossings come from
// event location, not from the recorded samples.
IntegratorParams poincare_integrator();

struct PoincareParams {
  SectionFlow flow = SectionFlow::Darboux;
  double lambda = 2.5;      // Darboux level
  double alpha = 0.6;       // F_alpha angle
  int iterates = 400;
  double start = 0.3;       // chart coordinate along the section
  bool reflected = false;   // reverse the motion along the band
  IntegratorParams integrator = poincare_integrator();
};

struct Crossing {
  int iterate = 0;
  double coordinate = 0;  // lifted chart coordinate along the section
  double s = 0, t = 0;
};

struct PoincareResult {
  std::string section;  // e.g. "U = 2.75"
  std::vector<Crossing> crossings;
  // Surface rotation fraction per return (weighted Birkhoff average of the
  // lifted advance over the chart length of one circuit).
  double advance = 0;
  // Rotation number in the convention of RotationData::rho.
  double rotation = 0;
  // Same from the plain average; converges only like 1/n.
  double rotation_plain = 0;
  // First iterate returning to the start within 1e-6 (mod one circuit); 0 if none.
  int period = 0;
};

// Sections: V = (c + lambda)/2 for c < lambda < b, U = (lambda + a)/2 for
// b < lambda < a, and V = b (y = 0) for F_alpha.
PoincareResult poincare_map(const QuadricSurface& q, const PoincareParams& p);

// Several starts in parallel; `jobs` OpenMP threads.
std::vector<PoincareResult> poincare_batch(const QuadricSurface& q, const std::vector<PoincareParams>& ps, int jobs);

// lambda in (lo, hi) with sigma_lengths rho = target, by bisection.
double lambda_for_rho(const QuadricSurface& q, double target, double lo, double hi);

struct CircleFit {
  double planarity = 0;  // max distance to the least-squares plane
  double circularity = 0;  // max | |x - center| - radius |
  Vec3 normal = Vec3::Zero(), center = Vec3::Zero();
  double radius = 0;
  // |normal x n_umbilic| minimized over the two umbilic tangent-plane normals.
  double umbilic_alignment = 0;
  std::size_t samples = 0;
};

struct CircularSectionsReport {
  std::vector<CircleFit> circles;
  double max_planarity = 0, max_circularity = 0, max_alignment = 0;
};

// Integrates the lambda = b level from `count` starts on the ellipsoid and
// fits each solution by a plane and a circle.
CircularSectionsReport circular_sections_check(const QuadricSurface& q, int count = 6, int jobs = 1);

CircleFit fit_circle(const std::vector<Vec3>& points);

nlohmann::json to_json(const LambdaRegime& r);
nlohmann::json to_json(const RotationData& r);
nlohmann::json to_json(const PoincareResult& r, bool with_crossings = false);
// Columns iterate, coordinate, s, t.
std::string crossings_csv(const PoincareResult& r);

}  // namespace darboux
