#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "darboux/surface.hpp"

namespace darboux {

// Point of the unit-tangent-bundle reduction; alpha is measured from P1.
struct DarbouxState {
  double u = 0, v = 0, alpha = 0;
};

// Reduction to (-pi, pi].
double reduce_angle(double alpha);

struct FieldValue {
  double du = 0, dv = 0, dalpha = 0;
};

struct SingularDirectionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SparseTrajectoryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Throws SingularDirectionError when |sin(alpha) cos(alpha)| < delta.
FieldValue darboux_field_arclength(const Surface& s, const DarbouxState& x, double delta = 1e-4);
FieldValue darboux_field_arclength(const ChartPoint& p, double alpha, double delta = 1e-4);
FieldValue darboux_field_desingularized(const Surface& s, const DarbouxState& x);
FieldValue darboux_field_desingularized(const ChartPoint& p, double alpha);

enum class Termination { ArcLengthBudget, DomainExit, SingularLocus, UmbilicProximity, StepBudget, Event };
std::string to_string(Termination t);

struct IntegratorParams {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_arc_length = 10.0;
  long max_steps = 1000000;
  double delta_alpha = 1e-4;
  // Largest arc-length increment between recorded samples.
  double max_ds = 0.02;
  // Largest angle increment between recorded samples.
  double max_dalpha = 0.01;
  // +1 forward, -1 backward in the integration parameter.
  int direction = 1;
  // Relative |k1 - k2| at which the flow is stopped near an umbilic.
  double umbilic_standoff = 1e-6;
  bool record_residuals = true;
};

struct Sample {
  double s = 0, t = 0;
  DarbouxState state;
  // Continuous angle along the trajectory (state.alpha is reduced).
  double alpha_lift = 0;
  Vec3 position = Vec3::Zero(), normal = Vec3::Zero();
  std::vector<double> monitors;
};

struct TrajectoryEvent {
  std::string name;
  double s = 0, t = 0;
  DarbouxState state;
};

struct Trajectory {
  std::string kind;  // darboux, darboux-arclength, falpha, geodesic
  std::vector<std::string> monitor_names;
  std::vector<Sample> samples;
  std::vector<TrajectoryEvent> events;
  IntegratorParams params;
  Termination reason = Termination::ArcLengthBudget;
  long accepted = 0, rejected = 0;

  int monitor_index(const std::string& name) const;
  std::vector<double> monitor(const std::string& name) const;
  double arc_length() const { return samples.empty() ? 0.0 : samples.back().s; }
};

struct Monitor {
  std::string name;
  std::function<double(const ChartPoint&, const DarbouxState&)> fn;
};

struct EventSpec {
  std::string name;
  std::function<double(const ChartPoint&, const DarbouxState&)> g;
  int direction = 0;  // +1 rising, -1 falling, 0 both
  bool terminal = false;
};

// First integrals that apply to the surface plus the umbilic gap |k1 - k2|.
std::vector<Monitor> default_monitors(const Surface& s);

// Desingularized Darboux flow. Events "principal" (sin 2 alpha = 0) are
// always recorded; the extra events and monitors are appended.
Trajectory integrate(const Surface& s, const DarbouxState& x0, const IntegratorParams& p);
Trajectory integrate(const Surface& s, const DarbouxState& x0, const IntegratorParams& p,
                     const std::vector<Monitor>& monitors, const std::vector<EventSpec>& events);

// Arc-length parametrized Darboux field; stops at the delta_alpha standoff.
Trajectory integrate_arclength(const Surface& s, const DarbouxState& x0, const IntegratorParams& p);

// Leaf of the constant-angle foliation F_alpha through (u, v).
Trajectory falpha_leaf(const Surface& s, double u, double v, double alpha0, int sign, const IntegratorParams& p,
                       const std::vector<EventSpec>& events = {});

// Geodesic with initial angle beta from P1 (the state's alpha stores beta).
Trajectory trace_geodesic(const Surface& s, const DarbouxState& x0, const IntegratorParams& p);

// Oracles evaluated on recorded samples by local finite differences in the
// integration parameter. Entries near cusps and at the ends are NaN.
std::vector<double> darboux_residual_profile(const Surface& s, const Trajectory& tr);
double darboux_residual(const Surface& s, const Trajectory& tr);
std::vector<double> osculating_contact_profile(const Trajectory& tr);
double osculating_contact_residual(const Surface& s, const Trajectory& tr);

struct IntegrabilityResiduals {
  double res1 = 0, res2 = 0;
};
IntegrabilityResiduals plane_field_integrability(const Surface& s, double u, double v);

// Independent trajectories; `jobs` OpenMP threads, results in input order.
std::vector<Trajectory> integrate_batch(const Surface& s, const std::vector<DarbouxState>& starts,
                                        const IntegratorParams& p, int jobs);
// Serial reference for integrate_batch.
std::vector<Trajectory> integrate_batch_serial(const Surface& s, const std::vector<DarbouxState>& starts,
                                               const IntegratorParams& p);

// Finite-difference weights (Fornberg) for derivatives 0..m at x0 on nodes x.
std::vector<std::vector<double>> fd_weights(double x0, const std::vector<double>& x, int m);

}  // namespace darboux
