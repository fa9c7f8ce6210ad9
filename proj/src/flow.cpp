#include "darboux/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "darboux/integrals.hpp"
#include "ode.hpp"

namespace darboux {

using detail::Y;

double reduce_angle(double alpha) {
  constexpr double pi = std::numbers::pi;
  double r = std::remainder(alpha, 2 * pi);
  if (r <= -pi) r += 2 * pi;
  return r;
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::ArcLengthBudget: return "arc-length budget";
    case Termination::DomainExit: return "domain exit";
    case Termination::SingularLocus: return "singular-locus hit";
    case Termination::UmbilicProximity: return "umbilic proximity";
    case Termination::StepBudget: return "step budget";
    case Termination::Event: return "event";
  }
  return "unknown";
}

int Trajectory::monitor_index(const std::string& name) const {
  for (size_t i = 0; i < monitor_names.size(); ++i)
    if (monitor_names[i] == name) return static_cast<int>(i);
  return -1;
}

std::vector<double> Trajectory::monitor(const std::string& name) const {
  const int k = monitor_index(name);
  if (k < 0) throw std::out_of_range("no monitor named " + name);
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.monitors[k]);
  return out;
}

FieldValue darboux_field_arclength(const ChartPoint& p, double alpha, double delta) {
  require_non_umbilic(p);
  const double c = std::cos(alpha), s = std::sin(alpha);
  if (std::abs(s * c) < delta) throw SingularDirectionError("Darboux field: principal direction");
  const double sqE = std::sqrt(p.E.f), sqG = std::sqrt(p.G.f);
  FieldValue f;
  f.du = c / sqE;
  f.dv = s / sqG;
  f.dalpha = (p.k1.u * c * c * c / sqE + p.k2.v * s * s * s / sqG) / (3 * (p.k1.f - p.k2.f) * s * c);
  return f;
}

FieldValue darboux_field_arclength(const Surface& s, const DarbouxState& x, double delta) {
  return darboux_field_arclength(s.evaluate(x.u, x.v), x.alpha, delta);
}

FieldValue darboux_field_desingularized(const ChartPoint& p, double alpha) {
  require_non_umbilic(p);
  const double c = std::cos(alpha), s = std::sin(alpha);
  const double sqE = std::sqrt(p.E.f), sqG = std::sqrt(p.G.f);
  const double d = 3 * (p.k1.f - p.k2.f);
  FieldValue f;
  f.du = d * s * c * c / sqE;
  f.dv = d * s * s * c / sqG;
  f.dalpha = p.k1.u * c * c * c / sqE + p.k2.v * s * s * s / sqG;
  return f;
}

FieldValue darboux_field_desingularized(const Surface& s, const DarbouxState& x) {
  return darboux_field_desingularized(s.evaluate(x.u, x.v), x.alpha);
}

std::vector<Monitor> default_monitors(const Surface& s) {
  std::vector<Monitor> m = first_integral_monitors(s);
  m.push_back({"umbilic_gap", [](const ChartPoint& p, const DarbouxState&) { return std::abs(p.k1.f - p.k2.f); }});
  return m;
}

namespace {

void check_standoff(const ChartPoint& p, double standoff) {
  const double scale = std::max({std::abs(p.k1.f), std::abs(p.k2.f), 1.0});
  if (std::abs(p.k1.f - p.k2.f) < standoff * scale) throw UmbilicError("umbilic standoff reached");
}

struct Run {
  std::string kind;
  detail::OdeProblem problem;
  std::vector<std::string> event_names;
  std::vector<Monitor> monitors;
};

Trajectory assemble(const Surface& surf, const Run& run, const detail::OdeResult& res, const IntegratorParams& p) {
  Trajectory tr;
  tr.kind = run.kind;
  tr.params = p;
  tr.accepted = res.accepted;
  tr.rejected = res.rejected;
  for (const auto& m : run.monitors) tr.monitor_names.push_back(m.name);
  tr.samples.reserve(res.y.size());
  for (size_t i = 0; i < res.y.size(); ++i) {
    const Y& y = res.y[i];
    Sample smp;
    smp.t = res.t[i];
    smp.s = y[3];
    smp.alpha_lift = y[2];
    smp.state = {y[0], y[1], reduce_angle(y[2])};
    const ChartPoint cp = surf.evaluate(y[0], y[1]);
    smp.position = cp.X;
    smp.normal = cp.N;
    const DarbouxState lifted{y[0], y[1], y[2]};
    for (const auto& m : run.monitors) smp.monitors.push_back(m.fn(cp, lifted));
    // Samples closer than round-off in s would break s-monotonicity.
    if (!tr.samples.empty() && !(smp.s > tr.samples.back().s)) continue;
    tr.samples.push_back(std::move(smp));
  }
  for (const auto& e : res.events)
    tr.events.push_back({run.event_names[e.index], e.y[3], e.t, {e.y[0], e.y[1], reduce_angle(e.y[2])}});
  tr.reason = res.reason;
  if (res.reason == Termination::Event) {
    const std::string& name = run.event_names[res.terminal_event];
    if (name == "arc_budget") tr.reason = Termination::ArcLengthBudget;
    else if (name == "standoff") tr.reason = Termination::SingularLocus;
    else if (name == "domain_edge") tr.reason = Termination::DomainExit;
  }
  return tr;
}

Trajectory run(const Surface& surf, Run r, const Y& y0, const IntegratorParams& p,
               const std::vector<EventSpec>& extra) {
  const double max_arc = p.max_arc_length;
  r.problem.events.push_back({[max_arc](const Y& y) { return y[3] - max_arc; }, 1, true});
  r.event_names.push_back("arc_budget");
  for (const auto& ev : extra) {
    auto g = ev.g;
    r.problem.events.push_back(
        {[&surf, g](const Y& y) { return g(surf.evaluate(y[0], y[1]), DarbouxState{y[0], y[1], y[2]}); },
         ev.direction, ev.terminal});
    r.event_names.push_back(ev.name);
  }
  // The octant quadric chart is not Lipschitz at its folds, where solutions
  // can slide along the edge; stop a small margin before any finite edge.
  const Domain d = surf.domain();
  const double mu = std::isfinite(d.u_span()) ? 1e-4 * d.u_span() : 0.0;
  const double mv = std::isfinite(d.v_span()) ? 1e-4 * d.v_span() : 0.0;
  r.problem.inside = [d](const Y& y) { return d.contains(y[0], y[1]); };
  if (mu > 0 || mv > 0) {
    r.problem.events.push_back({[d, mu, mv](const Y& y) {
                                  double g = std::numeric_limits<double>::infinity();
                                  if (mu > 0) g = std::min({g, y[0] - d.u_min - mu, d.u_max - mu - y[0]});
                                  if (mv > 0) g = std::min({g, y[1] - d.v_min - mv, d.v_max - mv - y[1]});
                                  return g;
                                },
                                -1, true});
    r.event_names.push_back("domain_edge");
  }
  const detail::DormandPrince dp(r.problem, p.rel_tol, p.abs_tol);
  const detail::OdeResult res = dp.solve(y0, p.max_steps);
  return assemble(surf, r, res, p);
}

void validate(const IntegratorParams& p) {
  if (!(p.rel_tol > 0 && p.abs_tol > 0)) throw SpecError("integrator tolerances must be positive");
  if (!(p.max_arc_length > 0 && p.max_steps > 0 && p.max_ds > 0 && p.max_dalpha > 0))
    throw SpecError("integrator budgets must be positive");
  if (p.direction != 1 && p.direction != -1) throw SpecError("direction must be +1 or -1");
}

}  // namespace

Trajectory integrate(const Surface& s, const DarbouxState& x0, const IntegratorParams& p) {
  return integrate(s, x0, p, default_monitors(s), {});
}

Trajectory integrate(const Surface& s, const DarbouxState& x0, const IntegratorParams& p,
                     const std::vector<Monitor>& monitors, const std::vector<EventSpec>& events) {
  validate(p);
  if (!s.contains(x0.u, x0.v)) throw DomainError("integrate: start outside domain");
  Run r;
  r.kind = "darboux";
  r.monitors = monitors;
  const double dir = p.direction, standoff = p.umbilic_standoff;
  r.problem.rhs = [&s, dir, standoff](const Y& y, Y& f) {
    const ChartPoint cp = s.evaluate(y[0], y[1]);
    check_standoff(cp, standoff);
    const FieldValue v = darboux_field_desingularized(cp, y[2]);
    f[0] = dir * v.du;
    f[1] = dir * v.dv;
    f[2] = dir * v.dalpha;
    f[3] = 3 * std::abs((cp.k1.f - cp.k2.f) * std::sin(y[2]) * std::cos(y[2]));
  };
  const double max_ds = p.max_ds, max_da = p.max_dalpha;
  r.problem.step_limit = [max_ds, max_da](const Y&, const Y& f) {
    return std::min(max_ds / std::max(f[3], 1e-300), max_da / std::max(std::abs(f[2]), 1e-300));
  };
  r.problem.events.push_back({[](const Y& y) { return std::sin(2 * y[2]); }, 0, false});
  r.event_names.push_back("principal");
  Trajectory tr = run(s, r, {x0.u, x0.v, x0.alpha, 0.0}, p, events);
  if (p.record_residuals) {
    std::vector<double> prof;
    try {
      prof = darboux_residual_profile(s, tr);
    } catch (const SparseTrajectoryError&) {
      prof.assign(tr.samples.size(), std::numeric_limits<double>::quiet_NaN());
    }
    tr.monitor_names.push_back("darboux_residual");
    for (size_t i = 0; i < tr.samples.size(); ++i) tr.samples[i].monitors.push_back(prof[i]);
  }
  return tr;
}

Trajectory integrate_arclength(const Surface& s, const DarbouxState& x0, const IntegratorParams& p) {
  validate(p);
  if (!s.contains(x0.u, x0.v)) throw DomainError("integrate_arclength: start outside domain");
  Run r;
  r.kind = "darboux-arclength";
  r.monitors = default_monitors(s);
  const double dir = p.direction, standoff = p.umbilic_standoff;
  r.problem.rhs = [&s, dir, standoff](const Y& y, Y& f) {
    const ChartPoint cp = s.evaluate(y[0], y[1]);
    check_standoff(cp, standoff);
    const FieldValue v = darboux_field_arclength(cp, y[2], 0.0);
    f[0] = dir * v.du;
    f[1] = dir * v.dv;
    f[2] = dir * v.dalpha;
    f[3] = 1.0;
  };
  const double max_ds = p.max_ds, max_da = p.max_dalpha;
  r.problem.step_limit = [max_ds, max_da](const Y&, const Y& f) {
    return std::min(max_ds, max_da / std::max(std::abs(f[2]), 1e-300));
  };
  const double delta = p.delta_alpha;
  r.problem.events.push_back(
      {[delta](const Y& y) { return std::abs(std::sin(y[2]) * std::cos(y[2])) - delta; }, -1, true});
  r.event_names.push_back("standoff");
  if (std::abs(std::sin(x0.alpha) * std::cos(x0.alpha)) < delta)
    throw SingularDirectionError("integrate_arclength: start on a principal direction");
  return run(s, r, {x0.u, x0.v, x0.alpha, 0.0}, p, {});
}

Trajectory falpha_leaf(const Surface& s, double u, double v, double alpha0, int sign, const IntegratorParams& p,
                       const std::vector<EventSpec>& events) {
  validate(p);
  if (sign != 1 && sign != -1) throw SpecError("falpha_leaf: sign must be +1 or -1");
  if (!s.contains(u, v)) throw DomainError("falpha_leaf: start outside domain");
  require_non_umbilic(s.evaluate(u, v));
  Run r;
  r.kind = "falpha";
  const double ca = std::cos(alpha0), sa = sign * std::sin(alpha0);
  r.monitors.push_back({"k_n", [ca, sa](const ChartPoint& cp, const DarbouxState&) {
                          return cp.k1.f * ca * ca + cp.k2.f * sa * sa;
                        }});
  // Quotient of the fundamental forms on the leaf tangent.
  r.monitors.push_back({"k_n_forms", [ca, sa](const ChartPoint& cp, const DarbouxState&) {
                          const double du = ca / std::sqrt(cp.E.f), dv = sa / std::sqrt(cp.G.f);
                          return (cp.e.f * du * du + cp.g.f * dv * dv) / (cp.E.f * du * du + cp.G.f * dv * dv);
                        }});
  r.monitors.push_back(
      {"umbilic_gap", [](const ChartPoint& cp, const DarbouxState&) { return std::abs(cp.k1.f - cp.k2.f); }});
  const double dir = p.direction, standoff = p.umbilic_standoff;
  r.problem.rhs = [&s, dir, ca, sa, standoff](const Y& y, Y& f) {
    const ChartPoint cp = s.evaluate(y[0], y[1]);
    check_standoff(cp, standoff);
    f[0] = dir * ca / std::sqrt(cp.E.f);
    f[1] = dir * sa / std::sqrt(cp.G.f);
    f[2] = 0.0;
    f[3] = 1.0;
  };
  const double max_ds = p.max_ds;
  r.problem.step_limit = [max_ds](const Y&, const Y&) { return max_ds; };
  return run(s, r, {u, v, sign * alpha0, 0.0}, p, events);
}

Trajectory trace_geodesic(const Surface& s, const DarbouxState& x0, const IntegratorParams& p) {
  validate(p);
  if (!s.contains(x0.u, x0.v)) throw DomainError("trace_geodesic: start outside domain");
  Run r;
  r.kind = "geodesic";
  r.monitors = default_monitors(s);
  const double dir = p.direction;
  r.problem.rhs = [&s, dir](const Y& y, Y& f) {
    const ChartPoint cp = s.evaluate(y[0], y[1]);
    const double c = std::cos(y[2]), sn = std::sin(y[2]);
    const double sqE = std::sqrt(cp.E.f), sqG = std::sqrt(cp.G.f);
    const double kg1 = -cp.E.v / (2 * cp.E.f * sqG), kg2 = cp.G.u / (2 * cp.G.f * sqE);
    f[0] = dir * c / sqE;
    f[1] = dir * sn / sqG;
    f[2] = -dir * (kg1 * c + kg2 * sn);
    f[3] = 1.0;
  };
  const double max_ds = p.max_ds;
  r.problem.step_limit = [max_ds](const Y&, const Y&) { return max_ds; };
  return run(s, r, {x0.u, x0.v, x0.alpha, 0.0}, p, {});
}

IntegrabilityResiduals plane_field_integrability(const Surface& s, double u, double v) {
  const ChartPoint p = s.evaluate(u, v);
  require_non_umbilic(p);
  const double sqE = std::sqrt(p.E.f), sqG = std::sqrt(p.G.f);
  const double mu = 0.5 * (p.k1.f - p.k2.f);
  const double mu_u = 0.5 * (p.k1.u - p.k2.u), mu_v = 0.5 * (p.k1.v - p.k2.v);
  const double th1 = p.k1.u / (sqE * mu * mu);
  const double th2 = p.k2.v / (sqG * mu * mu);
  const double th2_u = p.k2.uv / (sqG * mu * mu) - 0.5 * p.k2.v * p.G.u / (p.G.f * sqG * mu * mu) -
                       2 * p.k2.v * mu_u / (sqG * mu * mu * mu);
  const double th1_v = p.k1.uv / (sqE * mu * mu) - 0.5 * p.k1.u * p.E.v / (p.E.f * sqE * mu * mu) -
                       2 * p.k1.u * mu_v / (sqE * mu * mu * mu);
  IntegrabilityResiduals r;
  r.res1 = th2_u / (mu * sqE) + th1 * th2 / 6;
  r.res2 = th1_v / (mu * sqG) - th1 * th2 / 6;
  return r;
}

std::vector<Trajectory> integrate_batch_serial(const Surface& s, const std::vector<DarbouxState>& starts,
                                               const IntegratorParams& p) {
  std::vector<Trajectory> out;
  out.reserve(starts.size());
  for (const auto& x : starts) out.push_back(integrate(s, x, p));
  return out;
}

std::vector<Trajectory> integrate_batch(const Surface& s, const std::vector<DarbouxState>& starts,
                                        const IntegratorParams& p, int jobs) {
  if (jobs < 1) throw SpecError("parallelism width must be at least 1");
  std::vector<Trajectory> out(starts.size());
  std::vector<std::string> errors(starts.size());
  const long n = static_cast<long>(starts.size());
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
  for (long i = 0; i < n; ++i) {
    try {
      out[i] = integrate(s, starts[i], p);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (long i = 0; i < n; ++i)
    if (!errors[i].empty()) throw DomainError("batch start " + std::to_string(i) + ": " + errors[i]);
  return out;
}

}  // namespace darboux
