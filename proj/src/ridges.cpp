#include "darboux/ridges.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/tools/roots.hpp>

#include "darboux/io.hpp"

namespace darboux {

std::string to_string(Foliation f) { return f == Foliation::P1 ? "P1" : "P2"; }

std::string to_string(RidgeKind k) {
  switch (k) {
    case RidgeKind::Zigzag: return "zigzag";
    case RidgeKind::BeakToBeak: return "beak-to-beak";
    case RidgeKind::Degenerate: return "degenerate";
  }
  return "?";
}

double ridge_derivative(const Surface& s, Foliation f, double u, double v) {
  const ChartPoint p = s.evaluate(u, v);
  return f == Foliation::P1 ? p.k1.u : p.k2.v;
}

double ridge_sigma(const Surface& s, Foliation f, double u, double v) {
  const ChartPoint p = s.evaluate(u, v);
  require_non_umbilic(p);
  if (f == Foliation::P1) {
    const double xx = p.k1.uu / p.E.f - p.k1.u * p.E.u / (2 * p.E.f * p.E.f);
    return xx / (p.k1.f - p.k2.f);
  }
  const double yy = p.k2.vv / p.G.f - p.k2.v * p.G.v / (2 * p.G.f * p.G.f);
  return yy / (p.k2.f - p.k1.f);
}

RidgeRecord classify_sigma(const Surface& s, Foliation f, double u, double v, double degenerate_band) {
  RidgeRecord r;
  r.u = u;
  r.v = v;
  r.foliation = f;
  r.derivative = ridge_derivative(s, f, u, v);
  r.sigma = ridge_sigma(s, f, u, v);
  const double l = std::sqrt(std::abs(r.sigma) / 3);
  if (std::abs(r.sigma) < degenerate_band) {
    r.kind = RidgeKind::Degenerate;
  } else if (r.sigma > 0) {
    r.kind = RidgeKind::BeakToBeak;
  } else {
    r.kind = RidgeKind::Zigzag;
  }
  if (r.sigma >= 0) {
    r.lambda2 = {l, 0};
    r.lambda3 = {-l, 0};
  } else {
    r.lambda2 = {0, l};
    r.lambda3 = {0, -l};
  }
  return r;
}

namespace {

struct LineScan {
  std::vector<RidgeRecord> records;
  double max_abs = 0, max_k = 0;
};

// Roots of the ridge derivative along the line with fixed coordinate `w`.
LineScan scan_line(const Surface& s, Foliation f, double w, const RidgeScanParams& p) {
  const Domain d = s.scan_domain();
  const bool p1 = f == Foliation::P1;
  const double lo = p1 ? d.u_min : d.v_min, hi = p1 ? d.u_max : d.v_max;
  const double margin = 1e-9 * (hi - lo);
  const auto at = [&](double x) { return p1 ? ridge_derivative(s, f, x, w) : ridge_derivative(s, f, w, x); };
  LineScan out;
  const int n = p.samples;
  std::vector<double> xs(n + 1), fs(n + 1);
  for (int i = 0; i <= n; ++i) {
    xs[i] = std::clamp(lo + (hi - lo) * i / n, lo + margin, hi - margin);
    try {
      const ChartPoint cp = p1 ? s.evaluate(xs[i], w) : s.evaluate(w, xs[i]);
      fs[i] = p1 ? cp.k1.u : cp.k2.v;
      out.max_abs = std::max(out.max_abs, std::abs(fs[i]));
      out.max_k = std::max({out.max_k, std::abs(cp.k1.f), std::abs(cp.k2.f)});
    } catch (const DomainError&) {
      fs[i] = std::numeric_limits<double>::quiet_NaN();
    }
  }
  std::vector<double> roots;
  for (int i = 0; i < n; ++i) {
    const double fa = fs[i], fb = fs[i + 1];
    if (!std::isfinite(fa) || !std::isfinite(fb)) continue;
    if (fa == 0) {
      roots.push_back(xs[i]);
      continue;
    }
    if (!(fa * fb < 0)) continue;
    const double tol = p.root_tol;
    std::uintmax_t iters = 200;
    const auto [a, b] = boost::math::tools::toms748_solve(
        at, xs[i], xs[i + 1], fa, fb, [tol](double x, double y) { return std::abs(y - x) < tol; }, iters);
    roots.push_back(0.5 * (a + b));
  }
  if (std::isfinite(fs[n]) && fs[n] == 0) roots.push_back(xs[n]);
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(), [&](double x, double y) { return y - x < 10 * p.root_tol; }),
              roots.end());

  for (double x : roots) {
    try {
      out.records.push_back(p1 ? classify_sigma(s, f, x, w, p.degenerate_band)
                               : classify_sigma(s, f, w, x, p.degenerate_band));
    } catch (const UmbilicError&) {
    }
  }
  return out;
}

double line_coordinate(const Surface& s, Foliation f, int j, int lines) {
  const Domain d = s.scan_domain();
  const double lo = f == Foliation::P1 ? d.v_min : d.u_min;
  const double hi = f == Foliation::P1 ? d.v_max : d.u_max;
  return lo + (hi - lo) * (j + 0.5) / lines;
}

RidgeScan merge(std::vector<LineScan>& lines) {
  RidgeScan out;
  double max_abs = 0, max_k = 0;
  for (auto& l : lines) {
    max_abs = std::max(max_abs, l.max_abs);
    max_k = std::max(max_k, l.max_k);
    for (auto& r : l.records) out.records.push_back(r);
  }
  if (max_abs <= 1e-10 * std::max(1.0, max_k)) {
    out.status = "identically critical";
    out.records.clear();
  }
  return out;
}

void validate(const Surface& s, const RidgeScanParams& p) {
  if (p.lines < 1 || p.samples < 2) throw SpecError("ridge scan: need at least one line and two cells");
  if (p.jobs < 1) throw SpecError("parallelism width must be at least 1");
  if (!(p.root_tol > 0)) throw SpecError("ridge scan: root tolerance must be positive");
  const Domain d = s.scan_domain();
  if (!std::isfinite(d.u_span()) || !std::isfinite(d.v_span())) throw SpecError("ridge scan: unbounded scan window");
}

}  // namespace

RidgeScan ridge_locus_serial(const Surface& s, Foliation f, const RidgeScanParams& p) {
  validate(s, p);
  std::vector<LineScan> lines(p.lines);
  for (int j = 0; j < p.lines; ++j) lines[j] = scan_line(s, f, line_coordinate(s, f, j, p.lines), p);
  return merge(lines);
}

RidgeScan ridge_locus(const Surface& s, Foliation f, const RidgeScanParams& p) {
  validate(s, p);
  std::vector<LineScan> lines(p.lines);
#pragma omp parallel for schedule(dynamic) num_threads(p.jobs)
  for (int j = 0; j < p.lines; ++j) lines[j] = scan_line(s, f, line_coordinate(s, f, j, p.lines), p);
  return merge(lines);
}

JetClassification jet_classify(const GraphJet& j, double tol) {
  if (std::abs(j.k1 - j.k2) <= umbilic_threshold(j.k1, j.k2)) throw UmbilicError("jet_classify: umbilic jet");
  JetClassification r;
  const double d12 = j.k1 - j.k2;
  r.ridge_p1 = std::abs(j.a) <= tol;
  r.sigma1 = (j.A - 3 * j.k1 * j.k1 * j.k1) / d12 + 2 * j.d * j.d / (d12 * d12);
  r.ridge_p2 = std::abs(j.c) <= tol;
  r.sigma2 = (j.E - 3 * j.k2 * j.k2 * j.k2) / -d12 + 2 * j.b * j.b / (d12 * d12);
  return r;
}

GraphJet quadric_vertex_jet(double a, double b, double c, int axis) {
  const double coef[3] = {a, b, c};
  if (axis < 0 || axis > 2) throw SpecError("quadric_vertex_jet: axis must be 0, 1 or 2");
  if (!(coef[axis] > 0)) throw SpecError("quadric_vertex_jet: no real vertex on this axis");
  const double p = coef[axis == 0 ? 1 : 0], q = coef[axis == 2 ? 1 : 2];
  const double r = std::sqrt(coef[axis]);
  // x = -r sqrt(1 - w), w = y^2/p + z^2/q, expanded to fourth order.
  GraphJet j;
  j.k1 = r / p;
  j.k2 = r / q;
  j.A = 3 * r / (p * p);
  j.C = r / (p * q);
  j.E = 3 * r / (q * q);
  return j;
}

double product_criterion(const GraphJet& j, Foliation f) {
  if (f == Foliation::P1) return -(j.A - 3 * j.k1 * j.k1 * j.k1) * (j.k2 - j.k1);
  return -(j.E - 3 * j.k2 * j.k2 * j.k2) * (j.k1 - j.k2);
}

double profile_envelope_curvature(const RevolutionSurface& r, double u) {
  const auto d = r.spec().profile->derivatives(u);
  return -d[2] / (1 - d[1] * d[1] - d[0] * d[2]);
}

std::optional<RidgeKind> revolution_shortcut_kind(const RevolutionSurface& r, double u) {
  const Domain dom = r.scan_domain();
  const ChartPoint p = r.evaluate(u, dom.v_min + 0.5 * dom.v_span());
  if (!(p.k2.f > p.k1.f)) return std::nullopt;
  const auto d = r.spec().profile->derivatives(u);
  const double dR = d[4] * (1 - d[1] * d[1]) + 4 * d[1] * d[2] * d[3] + 3 * d[2] * d[2] * d[2];
  if (dR < 0) return RidgeKind::Zigzag;
  if (dR > 0) return RidgeKind::BeakToBeak;
  return RidgeKind::Degenerate;
}

namespace {

// Signed offset from the linearized ridge curve through the record.
struct RidgeFrame {
  bool p1;
  double u0, v0, slope, alpha_p;
  double offset(double u, double v) const { return p1 ? u - u0 - slope * (v - v0) : v - v0 - slope * (u - u0); }
};

PortraitOrbit run_orbit(const Surface& s, const RidgeFrame& fr, double half_width, const DarbouxState& x0,
                        const IntegratorParams& base) {
  const std::vector<EventSpec> events{
      {"box", [fr, half_width](const ChartPoint&, const DarbouxState& x) {
         return half_width - std::abs(fr.offset(x.u, x.v));
       }, -1, true},
      {"ridge", [fr](const ChartPoint&, const DarbouxState& x) { return fr.offset(x.u, x.v); }, 0, false}};
  PortraitOrbit o;
  IntegratorParams p = base;
  p.direction = 1;
  o.forward = integrate(s, x0, p, {}, events);
  p.direction = -1;
  o.backward = integrate(s, x0, p, {}, events);
  const double start_dist = std::abs(std::remainder(x0.alpha - fr.alpha_p, std::numbers::pi));
  if (start_dist < 1e-12) o.cusps = 1;
  // A start on the ridge counts as a crossing when the two halves end on
  // opposite sides.
  if (fr.offset(x0.u, x0.v) == 0 && !o.forward.samples.empty() && !o.backward.samples.empty()) {
    const auto& f = o.forward.samples.back().state;
    const auto& b = o.backward.samples.back().state;
    if (fr.offset(f.u, f.v) * fr.offset(b.u, b.v) < 0) {
      ++o.ridge_crossings;
      o.crossing_angles.push_back(start_dist);
    }
  }
  for (const Trajectory* t : {&o.forward, &o.backward}) {
    for (const auto& e : t->events) {
      const double dist = std::abs(std::remainder(e.state.alpha - fr.alpha_p, std::numbers::pi));
      if (e.name == "principal" && dist < 0.25) ++o.cusps;
      if (e.name == "ridge") {
        ++o.ridge_crossings;
        o.crossing_angles.push_back(dist);
      }
      if (e.name == "box") o.escaped = true;
    }
  }
  return o;
}

}  // namespace

PhasePortrait ridge_phase_portrait(const Surface& s, const RidgeRecord& r, int n_orbits, int jobs) {
  if (r.kind == RidgeKind::Degenerate) throw SpecError("phase portrait: degenerate ridge");
  if (n_orbits < 2) throw SpecError("phase portrait: need at least two orbits");
  if (jobs < 1) throw SpecError("parallelism width must be at least 1");
  const bool p1 = r.foliation == Foliation::P1;
  const ChartPoint cp = s.evaluate(r.u, r.v);
  const Domain d = s.scan_domain();
  const double span = p1 ? d.u_span() : d.v_span();
  const double half_width = 0.05 * span;
  const double lo = (p1 ? r.u : r.v) - 1.5 * half_width, hi = (p1 ? r.u : r.v) + 1.5 * half_width;
  const Domain dom = s.domain();
  if (!(p1 ? dom.contains(lo, r.v) && dom.contains(hi, r.v) : dom.contains(r.u, lo) && dom.contains(r.u, hi)))
    throw DomainError("phase portrait: ridge neighborhood leaves the chart");

  RidgeFrame fr{p1, r.u, r.v, 0, p1 ? 0.0 : std::numbers::pi / 2};
  // Tangent of the ridge curve from d/dw of the ridge equation.
  fr.slope = p1 ? -cp.k1.uv / cp.k1.uu : -cp.k2.uv / cp.k2.vv;
  const double metric = p1 ? cp.E.f : cp.G.f;

  IntegratorParams p;
  p.record_residuals = false;
  p.max_arc_length = 3 * half_width * std::sqrt(metric);
  p.max_ds = half_width * std::sqrt(metric) / 20;

  // Starts on the cusp line at distance delta and on the ridge at angle
  // eps, with eps / delta the aspect ratio of the linearized orbits.
  const int m = (n_orbits + 1) / 2;
  const double aspect = std::sqrt(std::abs(r.sigma) * metric / 3);
  std::vector<DarbouxState> starts;
  for (int i = 0; i < n_orbits; ++i) {
    const double delta = 0.3 * half_width * (i / 2 + 1) / m;
    if (i % 2 == 0) {
      starts.push_back({p1 ? r.u + delta : r.u, p1 ? r.v : r.v + delta, fr.alpha_p});
    } else {
      starts.push_back({r.u, r.v, fr.alpha_p + std::min(delta * aspect, 0.5)});
    }
  }
  PhasePortrait out;
  out.record = r;
  out.orbits.resize(starts.size());
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
  for (int i = 0; i < static_cast<int>(starts.size()); ++i) out.orbits[i] = run_orbit(s, fr, half_width, starts[i], p);

  out.min_crossing_angle = std::numeric_limits<double>::infinity();
  for (const auto& o : out.orbits) {
    if (o.escaped) {
      ++out.escaped;
    } else if (o.cusps >= 2) {
      ++out.confined;
    }
    out.crossings += o.ridge_crossings;
    out.cusps += o.cusps;
    for (double a : o.crossing_angles) out.min_crossing_angle = std::min(out.min_crossing_angle, a);
  }
  const int n = static_cast<int>(out.orbits.size());
  out.verdict = out.confined == n ? "zigzag" : out.escaped == n ? "beak-to-beak" : "inconclusive";
  return out;
}

nlohmann::json to_json(const RidgeRecord& r) {
  return {{"u", r.u},
          {"v", r.v},
          {"foliation", to_string(r.foliation)},
          {"sigma", r.sigma},
          {"kind", to_string(r.kind)},
          {"lambda2", {r.lambda2.real(), r.lambda2.imag()}},
          {"lambda3", {r.lambda3.real(), r.lambda3.imag()}},
          {"derivative", r.derivative}};
}

std::string ridges_csv(const std::vector<RidgeRecord>& records) {
  CsvWriter w({"u", "v", "sigma", "kind", "lambda_sq"});
  for (const auto& r : records)
    w.row({format_double(r.u), format_double(r.v), format_double(r.sigma), to_string(r.kind),
           format_double(r.sigma / 3)});
  return w.str();
}

}  // namespace darboux
