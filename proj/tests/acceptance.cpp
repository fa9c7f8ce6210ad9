#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <string>

#include "cli_runner.hpp"
#include "darboux/integrals.hpp"
#include "darboux/quadric_dynamics.hpp"
#include "darboux/ridges.hpp"
#include "darboux/sphere.hpp"
#include "test_surfaces.hpp"

using namespace darboux;
using nlohmann::json;

namespace {

// Pinned tolerances, one block per criterion.
namespace tol {
constexpr double c1_drift = 1e-8, c1_seconds = 10, c1_rel_tol = 1e-10, c1_arc = 10;
constexpr int c1_count = 20;
constexpr double c2_pass = 1e-5, c2_fail = 1e-2, c2_kn_constant = 1e-8;
constexpr double c3_alpha = 1e-10, c3_fail = 1e-2;
constexpr double c4_sigma1 = 0.75, c4_raw = -9.0 / 16, c4_exact = 1e-12, c4_seconds = 30;
constexpr double c5_identity = 1e-10;
constexpr double c6_drift = 1e-8, c6_roots = 1e-8, c6_clairaut = 1e-3;
constexpr double c7_rotation = 1e-4, c7_tan = 1e-9, c7_seconds = 60;
constexpr int c7_iterates = 400;
constexpr double c8_planar = 1e-8, c8_circular = 1e-8, c8_normal = 1e-6;
constexpr double c9_lift = 1e-12, c9_speed = 1e-6, c9_tcomp = 1e-5, c9_tcomp_control = 1e-2;
constexpr double c10_canal = 1e-6, c10_ellipsoid_min = 1e-3;
}  // namespace tol

struct Outcome {
  bool pass = true;
  std::string detail;
};

char buf[512];

template <class... A>
std::string fmt(const char* f, A... a) {
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int jobs() { return std::max(1, omp_get_max_threads()); }

double kn_spread(const Surface& s, const Trajectory& tr) {
  double lo = 1e300, hi = -1e300;
  for (const auto& sm : tr.samples) {
    const double k = frame_scalars(s, sm.state.u, sm.state.v, sm.alpha_lift).k_n;
    lo = std::min(lo, k);
    hi = std::max(hi, k);
  }
  return hi - lo;
}

double max_rel_drift(const std::vector<double>& v) {
  double worst = 0;
  for (double x : v) worst = std::max(worst, std::abs(x - v[0]) / std::max(std::abs(v[0]), 1e-300));
  return worst;
}

std::shared_ptr<const QuadricSurface> as_quadric(const SurfacePtr& s) {
  return std::dynamic_pointer_cast<const QuadricSurface>(s);
}

Outcome criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto q = test::ellipsoid(true);
  const Domain d = q->scan_domain();
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> U(0, 1);
  std::vector<DarbouxState> starts;
  for (int i = 0; i < tol::c1_count; ++i)
    starts.push_back({d.u_min + U(rng) * d.u_span(), d.v_min + U(rng) * d.v_span(), U(rng) * std::numbers::pi});
  IntegratorParams p;
  p.rel_tol = tol::c1_rel_tol;
  p.max_arc_length = tol::c1_arc;
  const auto trs = integrate_batch(*q, starts, p, jobs());
  double worst = 0;
  int full = 0;
  for (const auto& tr : trs) {
    worst = std::max(worst, max_rel_drift(tr.monitor("quadric_integral")));
    if (tr.reason == Termination::ArcLengthBudget) ++full;
  }
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = worst < tol::c1_drift && full == tol::c1_count && secs < tol::c1_seconds;
  o.detail = fmt("max drift %.2e (< %.0e), %d/%d reached arc length %.0f, %.2f s (< %.0f s)", worst, tol::c1_drift,
                 full, tol::c1_count, tol::c1_arc, secs, tol::c1_seconds);
  return o;
}

Outcome criterion2() {
  Outcome o;
  double worst_pass = 0, weakest_fail = 1e300;
  int controls = 0, exempt = 0;
  for (const auto& [name, s] : test::catalog_surfaces()) {
    const Domain d = s->scan_domain();
    IntegratorParams p;
    p.max_arc_length = 2.0;
    const DarbouxState x0{d.u_min + 0.5 * d.u_span(), d.v_min + 0.45 * d.v_span(), 0.6};
    const Trajectory tr = integrate(*s, x0, p);
    worst_pass = std::max({worst_pass, darboux_residual(*s, tr), osculating_contact_residual(*s, tr)});
    // Along a geodesic or a curvature line the Darboux condition reduces to
    // k_n' = 0, so a control with constant k_n is itself a Darboux curve.
    for (const Trajectory& c : {trace_geodesic(*s, x0, p), falpha_leaf(*s, x0.u, x0.v, 0.0, 1, p),
                                falpha_leaf(*s, x0.u, x0.v, std::numbers::pi / 2, 1, p)}) {
      const double r = std::min(darboux_residual(*s, c), osculating_contact_residual(*s, c));
      if (kn_spread(*s, c) < tol::c2_kn_constant) {
        ++exempt;
        worst_pass = std::max(worst_pass, std::max(darboux_residual(*s, c), osculating_contact_residual(*s, c)));
        continue;
      }
      ++controls;
      weakest_fail = std::min(weakest_fail, r);
    }
  }
  o.pass = worst_pass < tol::c2_pass && weakest_fail > tol::c2_fail;
  o.detail = fmt("max oracle on Darboux curves %.2e (< %.0e), min on %d controls %.2e (> %.0e), %d constant-k_n controls "
                 "treated as Darboux curves",
                 worst_pass, tol::c2_pass, controls, weakest_fail, tol::c2_fail, exempt);
  return o;
}

Outcome criterion3() {
  const SurfacePtr cyl = test::from_json(R"({"type":"cylinder","parameters":{"directrix":"circle","r":1.5}})");
  double alpha_var = 0;
  IntegratorParams p;
  p.max_arc_length = 5.0;
  for (double a : {0.3, 0.8, 1.2, 2.0}) {
    const Trajectory tr = integrate(*cyl, {0.5, 0.0, a}, p);
    for (const auto& sm : tr.samples) alpha_var = std::max(alpha_var, std::abs(sm.alpha_lift - a));
  }
  const auto q = test::ellipsoid(true);
  double weakest = 1e300;
  p.max_arc_length = 2.0;
  for (auto [u, v] : {std::pair{1.0, 0.7}, std::pair{2.0, 1.2}, std::pair{0.5, -0.8}})
    weakest = std::min(weakest, osculating_contact_residual(*q, falpha_leaf(*q, u, v, std::numbers::pi / 4, 1, p)));
  Outcome o;
  o.pass = alpha_var < tol::c3_alpha && weakest >= tol::c3_fail;
  o.detail = fmt("cylinder alpha variation %.2e (< %.0e), ellipsoid F_pi/4 contact residual min %.2e (>= %.0e)",
                 alpha_var, tol::c3_alpha, weakest, tol::c3_fail);
  return o;
}

Outcome criterion4() {
  const auto t0 = std::chrono::steady_clock::now();
  test::TempDir tmp;
  struct Case {
    const char* surface;
    std::map<std::string, std::string> expected;
  };
  const Case cases[] = {
      {R"({"type":"ellipsoid","parameters":{"a":3,"b":2,"c":1},"branch":{"chart":"global"}})",
       {{"x=0 P1", "zigzag"}, {"z=0 P2", "zigzag"}, {"y=0 P1", "beak-to-beak"}, {"y=0 P2", "beak-to-beak"}}},
      {R"({"type":"hyperboloid1","parameters":{"a":3,"b":2,"c":-1},"branch":{"chart":"global"},"ranges":{"v_extent":4}})",
       {{"x=0 P1", "beak-to-beak"}, {"y=0 P1", "zigzag"}, {"z=0 P2", "zigzag"}}},
      {R"({"type":"hyperboloid2","parameters":{"a":3,"b":-1,"c":-2},"branch":{"chart":"global"},"ranges":{"v_extent":4}})",
       {{"y=0 P1", "zigzag"}, {"z=0 P1", "beak-to-beak"}, {"z=0 P2", "beak-to-beak"}}}};
  int agree = 0, total = 0;
  bool ok = true;
  double sigma1 = NAN;
  for (size_t i = 0; i < std::size(cases); ++i) {
    const auto cfg = tmp / ("q" + std::to_string(i) + ".json");
    test::write_text(cfg, std::string(R"({"surface":)") + cases[i].surface + R"(,"ridges":{"lines":16,"samples":128}})");
    const auto out = tmp / ("out" + std::to_string(i));
    const auto r = test::run_cli("ridges --config '" + cfg.string() + "' --out '" + out.string() + "'", tmp.path());
    if (r.code != 0) {
      ok = false;
      continue;
    }
    const json j = json::parse(test::slurp(out / "ridges.json"));
    std::map<std::string, std::string> got;
    for (const auto& e : j["catalog"]) {
      if (e["kinds"].size() != 1) ok = false;  // every record on a ridge must carry the same label
      got[e["plane"].get<std::string>() + " " + e["foliation"].get<std::string>()] = e["kind"];
    }
    for (const auto& [key, kind] : cases[i].expected) {
      ++total;
      if (got.count(key) && got[key] == kind) ++agree;
    }
    if (got.size() != cases[i].expected.size()) ok = false;
    if (i == 0)
      for (const auto& v : j["vertices"])
        if (v["axis"] == "x") sigma1 = v["sigma1"];
  }
  const double a = 3, b = 2, c = 1;
  const double raw = -3 * a * (a - b) * (b - c) / (std::pow(b, 4) * c);
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = ok && agree == total && std::abs(sigma1 - tol::c4_sigma1) < tol::c4_exact &&
           std::abs(raw - tol::c4_raw) < tol::c4_exact && secs < tol::c4_seconds;
  o.detail = fmt("%d/%d labels agree, sigma1 at x-vertex %.15g (expect 3/4), raw product %.6g (expect -9/16), %.2f s (< %.0f s)",
                 agree, total, sigma1, raw, secs, tol::c4_seconds);
  return o;
}

Outcome criterion5() {
  const SurfacePtr surfaces[] = {test::ellipsoid(true), test::quadric(QuadricKind::OneSheet, 3, 2, -1, true, 4),
                                 test::quadric(QuadricKind::TwoSheet, 3, -1, -2, true, 4)};
  int portraits = 0, agree = 0, records = 0;
  double worst_identity = 0;
  for (const auto& s : surfaces) {
    std::set<std::pair<std::string, int>> seen;
    for (Foliation f : {Foliation::P1, Foliation::P2}) {
      RidgeScanParams rp;
      rp.lines = 12;
      rp.samples = 96;
      rp.jobs = jobs();
      for (const auto& r : ridge_locus(*s, f, rp).records) {
        ++records;
        const double scale = std::max(1.0, std::abs(r.sigma));
        worst_identity = std::max(worst_identity, std::abs(r.lambda2 * r.lambda3 + r.sigma / 3) / scale);
        const Vec3 X = s->evaluate(r.u, r.v).X;
        const int axis = std::abs(X.x()) < 1e-7 ? 0 : std::abs(X.y()) < 1e-7 ? 1 : 2;
        if (!seen.insert({to_string(r.kind), axis * 2 + static_cast<int>(f)}).second) continue;
        ++portraits;
        const PhasePortrait pp = ridge_phase_portrait(*s, r, 4);
        if (pp.verdict == to_string(r.kind)) ++agree;
      }
    }
  }
  Outcome o;
  o.pass = portraits > 0 && agree == portraits && worst_identity < tol::c5_identity;
  o.detail = fmt("%d/%d portrait verdicts agree with the sigma sign, lambda2 lambda3 + sigma/3 max %.2e (< %.0e) over %d ridge points",
                 agree, portraits, worst_identity, tol::c5_identity, records);
  return o;
}

Outcome criterion6() {
  const auto r = test::sinusoid_revolution();
  IntegratorParams p;
  p.max_arc_length = 5.0;
  double drift = 0, clairaut = 1e300;
  for (const DarbouxState& x0 : {DarbouxState{0.2, 1.0, 0.9}, DarbouxState{-1.0, 0.3, 0.4}, DarbouxState{1.5, 2.0, 1.1}}) {
    const Trajectory tr = integrate(*r, x0, p);
    drift = std::max(drift, max_rel_drift(tr.monitor("revolution_integral")));
    clairaut = std::min(clairaut, max_rel_drift(tr.monitor("clairaut")));
  }
  // Vertices of k(u) = -r''/(1 - r'^2 - r r'') by bisection on a central difference.
  auto k = [](double u) {
    const double r0 = 2 + 0.3 * std::sin(u), r1 = 0.3 * std::cos(u), r2 = -0.3 * std::sin(u);
    return -r2 / (1 - r1 * r1 - r0 * r2);
  };
  auto dk = [&](double u) { return (k(u + 1e-4) - k(u - 1e-4)) / 2e-4; };
  std::vector<double> roots;
  const Domain d = r->scan_domain();
  for (int i = 0; i < 400; ++i) {
    double lo = d.u_min + d.u_span() * i / 400, hi = d.u_min + d.u_span() * (i + 1) / 400;
    if (dk(lo) * dk(hi) > 0) continue;
    for (int it = 0; it < 80; ++it) {
      const double m = 0.5 * (lo + hi);
      (dk(lo) * dk(m) <= 0 ? hi : lo) = m;
    }
    roots.push_back(0.5 * (lo + hi));
  }
  RidgeScanParams rp;
  rp.lines = 4;
  rp.samples = 128;
  const auto scan = ridge_locus(*r, Foliation::P1, rp);
  double root_gap = 0;
  std::set<int> hit;
  for (const auto& rec : scan.records) {
    double best = 1e300;
    int which = -1;
    for (size_t i = 0; i < roots.size(); ++i)
      if (std::abs(roots[i] - rec.u) < best) best = std::abs(roots[i] - rec.u), which = static_cast<int>(i);
    root_gap = std::max(root_gap, best);
    hit.insert(which);
  }
  Outcome o;
  o.pass = drift < tol::c6_drift && !roots.empty() && hit.size() == roots.size() && root_gap < tol::c6_roots &&
           clairaut > tol::c6_clairaut;
  o.detail = fmt("integral drift %.2e (< %.0e), %zu/%zu vertices matched within %.2e (< %.0e), Clairaut drift min %.2e (> %.0e)",
                 drift, tol::c6_drift, hit.size(), roots.size(), root_gap, tol::c6_roots, clairaut, tol::c6_clairaut);
  return o;
}

Outcome criterion7() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto q = as_quadric(test::ellipsoid(true));
  std::vector<PoincareParams> ps;
  for (double l : {2.1, 2.3, 2.5, 2.7, 2.9}) {
    PoincareParams p;
    p.lambda = l;
    p.iterates = tol::c7_iterates;
    ps.push_back(p);
  }
  const auto res = poincare_batch(*q, ps, jobs());
  double worst = 0;
  for (size_t i = 0; i < ps.size(); ++i) worst = std::max(worst, std::abs(res[i].rotation - sigma_lengths(*q, ps[i].lambda).rho));
  const double ref = falpha_rotation(*q, std::numbers::pi / 4).rho;
  double tan_spread = 0;
  for (double a : {0.1, 0.3, 0.6, 0.9, 1.2, 1.5})
    tan_spread = std::max(tan_spread, std::abs(falpha_rotation(*q, a).rho * std::tan(a) - ref) / ref);
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = worst < tol::c7_rotation && tan_spread < tol::c7_tan && secs < tol::c7_seconds;
  o.detail = fmt("max |rotation - rho| %.2e over 5 lambda in (b,a) (< %.0e), rho tan(alpha) spread %.2e (< %.0e), %.2f s (< %.0f s)",
                 worst, tol::c7_rotation, tan_spread, tol::c7_tan, secs, tol::c7_seconds);
  return o;
}

Outcome criterion8() {
  const auto q = as_quadric(test::ellipsoid(true));
  const CircularSectionsReport rep = circular_sections_check(*q, 6, jobs());
  Outcome o;
  o.pass = !rep.circles.empty() && rep.max_planarity < tol::c8_planar && rep.max_circularity < tol::c8_circular &&
           rep.max_alignment < tol::c8_normal;
  o.detail = fmt("%zu solutions: planarity %.2e (< %.0e), circularity %.2e (< %.0e), umbilic-plane normal %.2e (< %.0e)",
                 rep.circles.size(), rep.max_planarity, tol::c8_planar, rep.max_circularity, tol::c8_circular,
                 rep.max_alignment, tol::c8_normal);
  return o;
}

Outcome criterion9() {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> U(-3, 3);
  double lift = 0;
  for (int i = 0; i < 200; ++i) {
    const Vec3 x(U(rng), U(rng), U(rng));
    const Vec3 nu = Vec3(U(rng), U(rng), U(rng)).normalized();
    const LorentzVector m = lift_point(x), n = lift_normal(x, nu);
    const double scale = std::max(1.0, m.squaredNorm());
    lift = std::max({lift, std::abs(lorentz_form(m)) / scale, std::abs(lorentz_form(n) - 1),
                     std::abs(lorentz(m, n)) / scale});
  }
  for (const auto& [name, s] : test::catalog_surfaces()) {
    const Domain d = s->scan_domain();
    const SpherePoint sp = vm_map(*s, d.u_min + 0.3 * d.u_span(), d.v_min + 0.6 * d.v_span(), 0.7);
    lift = std::max(lift, std::abs(lorentz_form(sp.sigma) - 1));
  }

  const auto q = test::ellipsoid(true);
  IntegratorParams p;
  p.max_arc_length = 3.0;
  const DarbouxState x0{1.0, 0.7, 0.5};
  const CansecReport dar = cansec_analyze(*q, integrate(*q, x0, p));
  const CansecReport geo = cansec_analyze(*q, trace_geodesic(*q, x0, p));
  const CansecReport leaf = cansec_analyze(*q, falpha_leaf(*q, x0.u, x0.v, 0.9, 1, p));
  const double speed = std::max({dar.max_speed_residual, geo.max_speed_residual, leaf.max_speed_residual});
  const double control = std::min(geo.max_t_component, leaf.max_t_component);

  // Boundary rank: 1 at every detected ridge point, 2 off the ridges.
  int on = 0, on_ok = 0, off = 0, off_ok = 0;
  for (Foliation f : {Foliation::P1, Foliation::P2}) {
    RidgeScanParams rp;
    rp.lines = 6;
    rp.samples = 64;
    const double a = f == Foliation::P1 ? 0.0 : std::numbers::pi / 2;
    for (const auto& r : ridge_locus(*q, f, rp).records) {
      ++on;
      if (vm_jacobian_rank(*q, r.u, r.v, a, true).rank == 1) ++on_ok;
      const double du = f == Foliation::P1 ? 0.3 : 0.0, dv = f == Foliation::P1 ? 0.0 : 0.3;
      ++off;
      if (vm_jacobian_rank(*q, r.u + du, r.v + dv, a, true).rank == 2) ++off_ok;
    }
  }
  Outcome o;
  o.pass = lift < tol::c9_lift && speed < tol::c9_speed && dar.max_t_component < tol::c9_tcomp &&
           control > tol::c9_tcomp_control && on > 0 && on_ok == on && off_ok == off;
  o.detail = fmt("lift identities %.2e (< %.0e), | |sigma'| - |tau_g| | %.2e (< %.0e), T-component %.2e on Darboux (< %.0e) "
                 "vs %.2e on controls (> %.0e), rank 1 at %d/%d ridge points, rank 2 at %d/%d off-ridge points",
                 lift, tol::c9_lift, speed, tol::c9_speed, dar.max_t_component, tol::c9_tcomp, control,
                 tol::c9_tcomp_control, on_ok, on, off_ok, off);
  return o;
}

Outcome criterion10() {
  double canal = 0, ellipsoid = 1e300;
  int canal_points = 0;
  for (const auto& [name, s] : test::catalog_surfaces()) {
    const SurfaceFamily f = s->family();
    const bool is_canal = f == SurfaceFamily::Revolution || f == SurfaceFamily::Cone || f == SurfaceFamily::Cylinder;
    const bool is_ellipsoid = name.rfind("ellipsoid", 0) == 0;
    if (!is_canal && !is_ellipsoid) continue;
    const Domain d = s->scan_domain();
    for (double tu : {0.2, 0.4, 0.6, 0.8})
      for (double tv : {0.15, 0.35, 0.65, 0.85}) {
        const auto r = plane_field_integrability(*s, d.u_min + tu * d.u_span(), d.v_min + tv * d.v_span());
        const double m = std::max(std::abs(r.res1), std::abs(r.res2));
        if (is_canal) {
          canal = std::max(canal, m);
          ++canal_points;
        } else {
          ellipsoid = std::min(ellipsoid, m);
        }
      }
  }
  Outcome o;
  o.pass = canal < tol::c10_canal && ellipsoid > tol::c10_ellipsoid_min;
  o.detail = fmt("max residual %.2e on %d canal points (< %.0e), ellipsoid residual min %.2e (recorded, > %.0e)", canal,
                 canal_points, tol::c10_canal, ellipsoid, tol::c10_ellipsoid_min);
  return o;
}

Outcome criterion11() {
  test::TempDir tmp;
  test::write_text(tmp / "e.json", R"({
    "surface": {"type": "ellipsoid", "parameters": {"a": 3, "b": 2, "c": 1}, "branch": {"chart": "global"}},
    "trace": {"starts": [[1.0, 0.7, 0.5]], "random": 3, "arc_length": 3},
    "ridges": {"lines": 8, "samples": 64, "portraits": true},
    "rotation": {"alphas": [0.6, 1.0], "lambdas": [1.5, 2.5], "iterates": 40},
    "regimes": {"trajectories": 3, "arc_length": 2},
    "cansec": {"start": [1.0, 0.7, 0.5], "arc_length": 2},
    "integrability": {"grid": 4}})");
  int stable = 0, total = 0;
  std::string failed;
  for (const char* cmd : {"trace", "ridges", "rotation", "regimes", "cansec", "integrability"}) {
    ++total;
    std::map<std::string, std::string> snaps[2];
    bool ok = true;
    for (int run = 0; run < 2; ++run) {
      const auto out = tmp / (std::string(cmd) + std::to_string(run));
      const auto r = test::run_cli(std::string(cmd) + " --config '" + (tmp / "e.json").string() + "' --out '" +
                                       out.string() + "' --seed 42",
                                   tmp.path());
      ok = ok && r.code == 0;
      snaps[run] = test::snapshot(out);
    }
    if (ok && !snaps[0].empty() && snaps[0] == snaps[1])
      ++stable;
    else
      failed += std::string(" ") + cmd;
  }
  const auto c1 = test::run_cli("catalog", tmp.path()), c2 = test::run_cli("catalog", tmp.path());
  ++total;
  if (c1.code == 0 && c1.stdout_text == c2.stdout_text)
    ++stable;
  else
    failed += " catalog";
  Outcome o;
  o.pass = stable == total;
  o.detail = fmt("%d/%d commands byte-stable across two runs%s%s", stable, total, failed.empty() ? "" : ", unstable:",
                 failed.c_str());
  return o;
}

}  // namespace

int main() {
  const std::function<Outcome()> criteria[] = {criterion1, criterion2, criterion3, criterion4,  criterion5, criterion6,
                                               criterion7, criterion8, criterion9, criterion10, criterion11};
  int failures = 0;
  for (size_t i = 0; i < std::size(criteria); ++i) {
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("threw: ") + e.what();
    }
    if (!o.pass) ++failures;
    std::printf("criterion %2zu: %s  %s\n", i + 1, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures, std::size(criteria));
  return failures == 0 ? 0 : 1;
}
