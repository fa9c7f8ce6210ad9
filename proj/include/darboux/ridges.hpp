#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "darboux/catalog.hpp"
#include "darboux/flow.hpp"
#include "json.hpp"

namespace darboux {

enum class Foliation { P1, P2 };
enum class RidgeKind { Zigzag, BeakToBeak, Degenerate };

std::string to_string(Foliation f);
std::string to_string(RidgeKind k);

struct RidgeRecord {
  double u = 0, v = 0;
  Foliation foliation = Foliation::P1;
  double sigma = 0;
  RidgeKind kind = RidgeKind::Degenerate;
  // Nonzero eigenvalue pair +-sqrt(sigma / 3); real for beak-to-beak.
  std::complex<double> lambda2, lambda3;
  // dk1/du (P1) or dk2/dv (P2) at the refined root.
  double derivative = 0;
};

struct RidgeScanParams {
  int lines = 32;           // coordinate lines scanned
  int samples = 256;        // cells per line
  double root_tol = 1e-10;  // in the chart coordinate
  double degenerate_band = 1e-8;
  int jobs = 1;             // OpenMP threads
};

struct RidgeScan {
  // "ok", or "identically critical" when the derivative vanishes on every line.
  std::string status = "ok";
  std::vector<RidgeRecord> records;
};

// dk1/du for P1, dk2/dv for P2.
double ridge_derivative(const Surface& s, Foliation f, double u, double v);
// sigma_1 = X1 X1 k1 / (k1 - k2) with X1 the unit field along P1; at a ridge
// point this is k1_uu / (E (k1 - k2)). Analogously sigma_2.
double ridge_sigma(const Surface& s, Foliation f, double u, double v);

RidgeRecord classify_sigma(const Surface& s, Foliation f, double u, double v, double degenerate_band = 1e-8);

RidgeScan ridge_locus(const Surface& s, Foliation f, const RidgeScanParams& p = {});
RidgeScan ridge_locus_serial(const Surface& s, Foliation f, const RidgeScanParams& p = {});

// Quartic graph normal form
//   h = k1 u^2/2 + k2 v^2/2 + a u^3/6 + d u^2 v/2 + b u v^2/2 + c v^3/6
//     + A u^4/24 + B u^3 v/6 + C u^2 v^2/4 + D u v^3/6 + E v^4/24.
struct GraphJet {
  double k1 = 0, k2 = 0, a = 0, b = 0, c = 0, d = 0, A = 0, B = 0, C = 0, D = 0, E = 0;
};

struct JetClassification {
  bool ridge_p1 = false;
  double sigma1 = 0;
  bool ridge_p2 = false;
  double sigma2 = 0;
};

// Throws UmbilicError when k1 == k2.
JetClassification jet_classify(const GraphJet& j, double tol = 1e-12);

// Graph jet of x^2/a + y^2/b + z^2/c = 1 at the vertex on `axis` (0, 1, 2)
// with negative coordinate, over the remaining two axes in increasing order.
// Requires the axis coefficient to be positive.
GraphJet quadric_vertex_jet(double a, double b, double c, int axis);

// Product quantity of the graph-form argument, (A - 3 k1^3)(k2 - k1) for P1
// and (E - 3 k2^3)(k1 - k2) for P2, with the sign flipped so that it has the
// sign of sigma when d = 0 (resp. b = 0).
double product_criterion(const GraphJet& j, Foliation f);

// Surfaces of revolution: curvature of the envelope profile
// k(u) = -r''/(1 - r'^2 - r r''); its derivative is -R(u)/(1 - r'^2 - r r'')^2.
double profile_envelope_curvature(const RevolutionSurface& r, double u);
// R'(u) rule for meridian ridges (zigzag iff R' < 0). Only defined where
// k2 > k1; returns nullopt otherwise.
std::optional<RidgeKind> revolution_shortcut_kind(const RevolutionSurface& r, double u);

struct PortraitOrbit {
  Trajectory forward, backward;
  int cusps = 0;
  int ridge_crossings = 0;
  bool escaped = false;
  // |alpha| distance to the principal direction at each ridge crossing.
  std::vector<double> crossing_angles;
};

struct PhasePortrait {
  RidgeRecord record;
  std::vector<PortraitOrbit> orbits;
  // "zigzag" (all orbits confined with cusps), "beak-to-beak" (all orbits
  // leave the neighborhood), otherwise "inconclusive".
  std::string verdict;
  int confined = 0, escaped = 0, crossings = 0, cusps = 0;
  // Smallest principal-angle distance over all ridge crossings.
  double min_crossing_angle = 0;
};

// Throws DomainError when the neighborhood leaves the chart.
PhasePortrait ridge_phase_portrait(const Surface& s, const RidgeRecord& r, int n_orbits = 8, int jobs = 1);

nlohmann::json to_json(const RidgeRecord& r);
// Columns u, v, sigma, kind, lambda_sq.
std::string ridges_csv(const std::vector<RidgeRecord>& records);

}  // namespace darboux
