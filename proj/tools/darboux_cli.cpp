#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "darboux/catalog.hpp"
#include "darboux/flow.hpp"
#include "darboux/integrals.hpp"
#include "darboux/io.hpp"
#include "darboux/quadric_dynamics.hpp"
#include "darboux/ridges.hpp"
#include "darboux/sphere.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace darboux;

namespace {

constexpr double kPi = std::numbers::pi;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string config_path;
  std::string out_dir = ".";
  int jobs = 1;
  std::uint64_t seed = 0;
  std::optional<double> rel_tol, abs_tol;
};

struct Context {
  Options opt;
  json config;
  IntegratorParams params;
  std::string command;

  json metadata() const {
    json m = run_metadata(config, opt.seed, params.rel_tol, params.abs_tol);
    m["command"] = command;
    return m;
  }
  std::string path(const std::string& name) const { return (fs::path(opt.out_dir) / name).string(); }
  void write_json(const std::string& name, const json& j) const { write_file(path(name), j.dump(2) + "\n"); }
  const json& section(const char* key) const {
    static const json empty = json::object();
    if (!config.contains(key)) return empty;
    if (!config[key].is_object()) throw ConfigError(std::string("config: '") + key + "' must be an object");
    return config[key];
  }
};

// Uniform double in [0, 1) from the top 53 bits of a 64-bit Mersenne Twister draw.
double uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double number_or(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) throw ConfigError(std::string("config: '") + key + "' must be a number");
  return obj[key].get<double>();
}

int int_or(const json& obj, const char* key, int fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer()) throw ConfigError(std::string("config: '") + key + "' must be an integer");
  return obj[key].get<int>();
}

std::vector<double> numbers_or(const json& obj, const char* key, std::vector<double> fallback) {
  if (!obj.contains(key)) return fallback;
  const json& a = obj[key];
  if (!a.is_array()) throw ConfigError(std::string("config: '") + key + "' must be an array of numbers");
  std::vector<double> out;
  for (const auto& x : a) {
    if (!x.is_number()) throw ConfigError(std::string("config: '") + key + "' must be an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

SurfacePtr load_surface(const Context& ctx) {
  if (!ctx.config.contains("surface")) throw ConfigError("config: missing 'surface'");
  return surface_from_json(ctx.config["surface"]);
}

const QuadricSurface& require_quadric(const SurfacePtr& s, const std::string& what) {
  const auto* q = dynamic_cast<const QuadricSurface*>(s.get());
  if (!q) throw ConfigError(what + ": needs a quadric surface");
  return *q;
}

std::shared_ptr<const QuadricSurface> global_quadric(const QuadricSurface& q) {
  QuadricSpec s = q.spec();
  s.chart = QuadricChart::Global;
  if (q.V_unbounded() && s.v_extent <= 0) s.v_extent = 8.0;
  return make_quadric(s);
}

bool singular(Termination t) { return t == Termination::UmbilicProximity || t == Termination::SingularLocus; }

// ------------------------------------------------------------------ trace

int cmd_trace(const Context& ctx) {
  const SurfacePtr s = load_surface(ctx);
  const json& cfg = ctx.section("trace");
  IntegratorParams p = ctx.params;
  p.max_arc_length = number_or(cfg, "arc_length", p.max_arc_length);
  p.max_ds = number_or(cfg, "max_ds", p.max_ds);
  const std::string flow = cfg.value("flow", std::string("darboux"));
  if (flow != "darboux" && flow != "geodesic" && flow != "falpha")
    throw ConfigError("config: trace.flow must be 'darboux', 'geodesic' or 'falpha'");

  std::vector<DarbouxState> starts;
  if (cfg.contains("starts")) {
    for (const auto& x : cfg["starts"]) {
      if (!x.is_array() || x.size() != 3) throw ConfigError("config: trace.starts entries must be [u, v, alpha]");
      starts.push_back({x[0].get<double>(), x[1].get<double>(), x[2].get<double>()});
    }
  }
  const int random = int_or(cfg, "random", 0);
  if (random > 0) {
    std::mt19937_64 rng(ctx.opt.seed);
    const Domain d = s->scan_domain();
    for (int i = 0; i < random; ++i) {
      const double u = d.u_min + (0.1 + 0.8 * uniform(rng)) * d.u_span();
      const double v = d.v_min + (0.1 + 0.8 * uniform(rng)) * d.v_span();
      const double a = -kPi + 2 * kPi * uniform(rng);
      starts.push_back({u, v, a});
    }
  }
  if (starts.empty()) throw ConfigError("config: trace needs 'starts' or 'random'");

  std::vector<Trajectory> runs(starts.size());
  std::vector<std::string> errors(starts.size());
#pragma omp parallel for schedule(dynamic) num_threads(ctx.opt.jobs)
  for (long i = 0; i < static_cast<long>(starts.size()); ++i) {
    try {
      if (flow == "darboux") runs[i] = integrate(*s, starts[i], p);
      else if (flow == "geodesic") runs[i] = trace_geodesic(*s, starts[i], p);
      else runs[i] = falpha_leaf(*s, starts[i].u, starts[i].v, std::abs(starts[i].alpha), starts[i].alpha < 0 ? -1 : 1, p);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }

  int code = 0;
  json index = json::array();
  for (size_t i = 0; i < runs.size(); ++i) {
    const std::string stem = "trace_" + std::to_string(i);
    json j{{"metadata", ctx.metadata()}, {"start", {starts[i].u, starts[i].v, starts[i].alpha}}};
    if (!errors[i].empty()) {
      j["error"] = errors[i];
      j["partial"] = true;
      code = 2;
      ctx.write_json(stem + ".json", j);
      index.push_back({{"file", stem + ".json"}, {"error", errors[i]}});
      continue;
    }
    const Trajectory& tr = runs[i];
    j["summary"] = trajectory_summary(tr);
    j["partial"] = tr.reason != Termination::ArcLengthBudget;
    std::vector<std::string> names;
    for (const auto& fi : applicable_integrals(*s))
      if (fi.flow == (flow == "geodesic" ? "geodesic" : "darboux") && tr.monitor_index(fi.name) >= 0) names.push_back(fi.name);
    json drift = json::array();
    if (!tr.samples.empty())
      for (const auto& r : conservation_report(tr, names)) drift.push_back(to_json(r, false));
    j["drift"] = drift;
    if (singular(tr.reason)) code = 2;
    write_file(ctx.path(stem + ".csv"), trajectory_csv(tr));
    ctx.write_json(stem + ".json", j);
    index.push_back({{"file", stem + ".csv"}, {"termination", to_string(tr.reason)}});
  }
  ctx.write_json("trace.json", {{"metadata", ctx.metadata()}, {"flow", flow}, {"trajectories", index}});
  return code;
}

// ----------------------------------------------------------------- ridges

std::string coordinate_plane(const Vec3& X, double scale) {
  static const char* names[] = {"x=0", "y=0", "z=0"};
  for (int i = 0; i < 3; ++i)
    if (std::abs(X[i]) < 1e-7 * scale) return names[i];
  return "";
}

int cmd_ridges(const Context& ctx) {
  const SurfacePtr s = load_surface(ctx);
  const json& cfg = ctx.section("ridges");
  RidgeScanParams rp;
  rp.lines = int_or(cfg, "lines", rp.lines);
  rp.samples = int_or(cfg, "samples", rp.samples);
  rp.jobs = ctx.opt.jobs;
  const bool portraits = cfg.value("portraits", false);
  const int orbits = int_or(cfg, "orbits", 8);
  const auto* q = dynamic_cast<const QuadricSurface*>(s.get());
  const double scale = q ? std::sqrt(std::max({std::abs(q->a()), std::abs(q->b()), std::abs(q->c())})) : 1.0;

  json out{{"metadata", ctx.metadata()}, {"surface", s->name()}};
  json catalog = json::object();
  for (Foliation f : {Foliation::P1, Foliation::P2}) {
    const RidgeScan scan = ridge_locus(*s, f, rp);
    json recs = json::array();
    std::vector<const RidgeRecord*> representatives;
    std::set<std::string> seen;
    for (const auto& r : scan.records) {
      json jr = to_json(r);
      const Vec3 X = s->evaluate(r.u, r.v).X;
      jr["x"] = X.x();
      jr["y"] = X.y();
      jr["z"] = X.z();
      if (q) {
        const std::string plane = coordinate_plane(X, scale);
        jr["plane"] = plane;
        const std::string key = plane + " " + to_string(f);
        catalog[key]["plane"] = plane;
        catalog[key]["foliation"] = to_string(f);
        json& n = catalog[key]["kinds"][to_string(r.kind)];
        n = n.is_null() ? 1 : n.get<int>() + 1;
        if (seen.insert(key).second) representatives.push_back(&r);
      }
      recs.push_back(std::move(jr));
    }
    out["foliations"][to_string(f)] = {{"status", scan.status}, {"records", recs}};
    write_file(ctx.path("ridges_" + to_string(f) + ".csv"), ridges_csv(scan.records));
    if (portraits) {
      json pj = json::array();
      for (const RidgeRecord* r : representatives) {
        const PhasePortrait pp = ridge_phase_portrait(*s, *r, orbits, ctx.opt.jobs);
        pj.push_back({{"u", r->u},
                      {"v", r->v},
                      {"sigma_kind", to_string(r->kind)},
                      {"verdict", pp.verdict},
                      {"confined", pp.confined},
                      {"escaped", pp.escaped},
                      {"crossings", pp.crossings},
                      {"cusps", pp.cusps}});
      }
      out["portraits"][to_string(f)] = pj;
    }
  }
  if (q) {
    json cat = json::array();
    for (auto& [key, v] : catalog.items()) {
      json e = v;
      const json& k = v["kinds"];
      e["kind"] = k.size() == 1 ? k.begin().key() : std::string("mixed");
      cat.push_back(e);
    }
    out["catalog"] = cat;
    // Closed-form quartic jets at the axis vertices.
    json verts = json::array();
    static const char* axes[] = {"x", "y", "z"};
    const double coef[3] = {q->a(), q->b(), q->c()};
    for (int axis = 0; axis < 3; ++axis) {
      if (coef[axis] <= 0) continue;
      const GraphJet jet = quadric_vertex_jet(q->a(), q->b(), q->c(), axis);
      const JetClassification jc = jet_classify(jet);
      verts.push_back({{"axis", axes[axis]},
                       {"k1", jet.k1},
                       {"k2", jet.k2},
                       {"sigma1", jc.sigma1},
                       {"sigma2", jc.sigma2},
                       {"product1", product_criterion(jet, Foliation::P1)},
                       {"product2", product_criterion(jet, Foliation::P2)}});
    }
    out["vertices"] = verts;
  }
  ctx.write_json("ridges.json", out);
  return 0;
}

// --------------------------------------------------------------- rotation

int cmd_rotation(const Context& ctx) {
  const SurfacePtr s = load_surface(ctx);
  const QuadricSurface& q = require_quadric(s, "rotation");
  const json& cfg = ctx.section("rotation");
  const std::vector<double> alphas = numbers_or(cfg, "alphas", {0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.4});
  const std::vector<double> lambdas =
      numbers_or(cfg, "lambdas", {q.b() + 0.2 * (q.a() - q.b()), q.b() + 0.5 * (q.a() - q.b()), q.b() + 0.8 * (q.a() - q.b())});
  json out{{"metadata", ctx.metadata()}};
  json fa = json::array();
  for (double a : alphas) {
    const RotationData r = falpha_rotation(q, a);
    fa.push_back({{"alpha", a}, {"s1", r.L1}, {"s2", r.L2}, {"rho", r.rho}, {"rho_tan_alpha", r.rho * std::tan(a)}});
  }
  out["falpha"] = fa;

  std::vector<PoincareParams> ps;
  for (double l : lambdas) {
    PoincareParams p;
    p.lambda = l;
    p.iterates = int_or(cfg, "iterates", p.iterates);
    p.start = number_or(cfg, "start", p.start);
    p.integrator.rel_tol = ctx.opt.rel_tol.value_or(p.integrator.rel_tol);
    p.integrator.abs_tol = ctx.opt.abs_tol.value_or(p.integrator.abs_tol);
    ps.push_back(p);
  }
  const std::vector<PoincareResult> maps = poincare_batch(q, ps, ctx.opt.jobs);
  json dj = json::array();
  for (size_t i = 0; i < lambdas.size(); ++i) {
    const RotationData r = sigma_lengths(q, lambdas[i]);
    json e = to_json(r);
    e["lambda"] = lambdas[i];
    e["regime"] = regime_classify(q, lambdas[i]).label;
    e["poincare"] = to_json(maps[i]);
    e["crossings_file"] = "crossings_" + std::to_string(i) + ".csv";
    write_file(ctx.path(e["crossings_file"].get<std::string>()), crossings_csv(maps[i]));
    dj.push_back(std::move(e));
  }
  out["darboux"] = dj;
  ctx.write_json("rotation.json", out);
  return 0;
}

// ---------------------------------------------------------------- regimes

std::vector<double> default_levels(const QuadricSurface& q) {
  const double a = q.a(), b = q.b(), c = q.c();
  switch (q.spec().kind) {
    case QuadricKind::Ellipsoid: return {0.5 * (c + b), b, 0.5 * (b + a)};
    case QuadricKind::TwoSheet: return {c - 1, c, 0.5 * (c + b)};
    case QuadricKind::OneSheet: return {c - 1, b, 0.5 * (b + a), a, a + 2};
  }
  return {};
}

int cmd_regimes(const Context& ctx) {
  const SurfacePtr s = load_surface(ctx);
  const QuadricSurface& q0 = require_quadric(s, "regimes");
  const auto gq = global_quadric(q0);
  const QuadricSurface& q = *gq;
  const json& cfg = ctx.section("regimes");
  const std::vector<double> lambdas = numbers_or(cfg, "lambdas", default_levels(q));
  const int count = int_or(cfg, "trajectories", 4);
  IntegratorParams p = ctx.params;
  p.max_arc_length = number_or(cfg, "arc_length", 6.0);
  p.max_ds = number_or(cfg, "max_ds", 0.05);
  p.record_residuals = false;

  std::mt19937_64 rng(ctx.opt.seed);
  const auto [ulo, uhi] = q.U_range();
  const double vhi = q.V_range().second;
  const double vlo = q.V_unbounded() ? vhi - q.spec().v_extent : q.V_range().first;

  json out{{"metadata", ctx.metadata()}, {"surface", q0.name()}};
  json levels = json::array();
  for (size_t li = 0; li < lambdas.size(); ++li) {
    const double l = lambdas[li];
    const LambdaRegime reg = regime_classify(q, l);
    json e = to_json(reg);
    std::vector<DarbouxState> starts;
    if (reg.real) {
      for (int k = 0, tries = 0; k < count && tries < 1000 * count; ++tries) {
        double U = ulo + (uhi - ulo) * (0.02 + 0.96 * uniform(rng));
        double V = vlo + (vhi - vlo) * (0.02 + 0.96 * uniform(rng));
        const double side = uniform(rng);
        if (reg.band == "U") U = std::max(reg.lo, ulo) + (std::min(reg.hi, uhi) - std::max(reg.lo, ulo)) * (0.02 + 0.96 * side);
        if (reg.band == "V") V = std::max(reg.lo, vlo) + (std::min(reg.hi, vhi) - std::max(reg.lo, vlo)) * (0.02 + 0.96 * side);
        const auto c2 = level_cos2(U, V, l);
        if (!c2 || U == l || V == l) continue;
        const auto [u, v] = q.chart_from_confocal(U, V);
        const double al = std::acos(std::sqrt(*c2));
        starts.push_back({u, v, k % 2 ? -al : al});
        ++k;
      }
    }
    std::vector<Trajectory> runs(starts.size());
    std::vector<std::string> errors(starts.size());
#pragma omp parallel for schedule(dynamic) num_threads(ctx.opt.jobs)
    for (long i = 0; i < static_cast<long>(starts.size()); ++i) {
      try {
        runs[i] = integrate(q, starts[i], p);
      } catch (const std::exception& ex) {
        errors[i] = ex.what();
      }
    }
    CsvWriter w({"trajectory", "s", "u", "v", "x", "y", "z", "k_n"});
    json trs = json::array();
    double max_kn = 0;
    for (size_t i = 0; i < runs.size(); ++i) {
      if (!errors[i].empty()) {
        trs.push_back({{"error", errors[i]}});
        continue;
      }
      for (const auto& sm : runs[i].samples) {
        const ChartPoint cp = q.evaluate(sm.state.u, sm.state.v);
        const double c = std::cos(sm.alpha_lift), sn = std::sin(sm.alpha_lift);
        const double kn = cp.k1.f * c * c + cp.k2.f * sn * sn;
        max_kn = std::max(max_kn, std::abs(kn));
        w.row({static_cast<double>(i), sm.s, sm.state.u, sm.state.v, sm.position.x(), sm.position.y(), sm.position.z(), kn});
      }
      trs.push_back({{"termination", to_string(runs[i].reason)}, {"arc_length", runs[i].arc_length()}});
    }
    e["trajectories"] = trs;
    if (!runs.empty()) {
      e["max_abs_kn"] = max_kn;
      e["file"] = "regime_" + std::to_string(li) + ".csv";
      write_file(ctx.path(e["file"].get<std::string>()), w.str());
    }
    levels.push_back(std::move(e));
  }
  out["levels"] = levels;
  ctx.write_json("regimes.json", out);
  return 0;
}

// ----------------------------------------------------------------- cansec

int cmd_cansec(const Context& ctx) {
  const SurfacePtr s = load_surface(ctx);
  const json& cfg = ctx.section("cansec");
  const std::vector<double> x0 = numbers_or(cfg, "start", {});
  if (x0.size() != 3) throw ConfigError("config: cansec.start must be [u, v, alpha]");
  IntegratorParams p = ctx.params;
  p.max_arc_length = number_or(cfg, "arc_length", 5.0);
  p.record_residuals = false;
  const Trajectory tr = integrate(*s, {x0[0], x0[1], x0[2]}, p);
  const CansecReport r = cansec_analyze(*s, tr);
  write_file(ctx.path("cansec.csv"), cansec_csv(r));
  ctx.write_json("cansec.json", {{"metadata", ctx.metadata()},
                                 {"summary", trajectory_summary(tr)},
                                 {"max_speed_residual", r.max_speed_residual},
                                 {"max_t_component", r.max_t_component},
                                 {"max_orth", r.max_orth},
                                 {"max_lorentz_sigma", r.max_lorentz_sigma}});
  return singular(tr.reason) ? 2 : 0;
}

// ---------------------------------------------------------- integrability

int cmd_integrability(const Context& ctx) {
  const SurfacePtr s = load_surface(ctx);
  const json& cfg = ctx.section("integrability");
  const int n = int_or(cfg, "grid", 9);
  if (n < 1) throw ConfigError("config: integrability.grid must be positive");
  const Domain d = s->scan_domain();
  std::vector<IntegrabilityResiduals> res(static_cast<size_t>(n) * n);
  std::vector<std::string> errors(res.size());
#pragma omp parallel for schedule(dynamic) num_threads(ctx.opt.jobs)
  for (long k = 0; k < static_cast<long>(res.size()); ++k) {
    const double u = d.u_min + d.u_span() * (0.05 + 0.9 * (k / n + 0.5) / n);
    const double v = d.v_min + d.v_span() * (0.05 + 0.9 * (k % n + 0.5) / n);
    try {
      res[k] = plane_field_integrability(*s, u, v);
    } catch (const std::exception& e) {
      errors[k] = e.what();
    }
  }
  json pts = json::array();
  double m1 = 0, m2 = 0;
  int skipped = 0;
  for (size_t k = 0; k < res.size(); ++k) {
    const double u = d.u_min + d.u_span() * (0.05 + 0.9 * (k / n + 0.5) / n);
    const double v = d.v_min + d.v_span() * (0.05 + 0.9 * (k % n + 0.5) / n);
    if (!errors[k].empty()) {
      ++skipped;
      pts.push_back({{"u", u}, {"v", v}, {"error", errors[k]}});
      continue;
    }
    m1 = std::max(m1, std::abs(res[k].res1));
    m2 = std::max(m2, std::abs(res[k].res2));
    pts.push_back({{"u", u}, {"v", v}, {"res1", res[k].res1}, {"res2", res[k].res2}});
  }
  ctx.write_json("integrability.json", {{"metadata", ctx.metadata()},
                                        {"surface", s->name()},
                                        {"max_res1", m1},
                                        {"max_res2", m2},
                                        {"skipped", skipped},
                                        {"points", pts}});
  return 0;
}

// ---------------------------------------------------------------- catalog

int cmd_catalog() {
  const json examples{
      {"ellipsoid", {{"type", "ellipsoid"}, {"parameters", {{"a", 3}, {"b", 2}, {"c", 1}}}, {"branch", {{"chart", "global"}}}}},
      {"hyperboloid1",
       {{"type", "hyperboloid1"}, {"parameters", {{"a", 3}, {"b", 2}, {"c", -1}}}, {"ranges", {{"v_extent", 4}}}}},
      {"hyperboloid2",
       {{"type", "hyperboloid2"}, {"parameters", {{"a", 3}, {"b", -1}, {"c", -2}}}, {"ranges", {{"v_extent", 4}}}}},
      {"revolution", {{"type", "revolution"}, {"parameters", {{"profile", "sinusoid"}, {"r0", 2}, {"amplitude", 0.3}}}}},
      {"torus", {{"type", "torus"}, {"parameters", {{"R", 3}, {"rho", 1}}}}},
      {"cone", {{"type", "cone"}, {"parameters", {{"directrix", "circle"}, {"beta", 0.6}}}}},
      {"cylinder", {{"type", "cylinder"}, {"parameters", {{"directrix", "ellipse"}, {"A", 2}, {"B", 1}}}}}};
  json out = json::array();
  for (const auto& t : catalog_types()) out.push_back({{"type", t}, {"example", examples.value(t, json::object())}});
  std::cout << out.dump(2) << "\n";
  return 0;
}

json read_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config: cannot read '" + path + "'");
  try {
    return json::parse(f);
  } catch (const json::parse_error& e) {
    throw ConfigError("config: " + std::string(e.what()));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Darboux curves: tracing and analysis on surfaces in principal charts"};
  app.require_subcommand(1);
  Options opt;
  std::vector<std::pair<std::string, CLI::App*>> subs;
  const std::pair<const char*, const char*> commands[] = {
      {"trace", "Integrate Darboux curves, geodesics or F_alpha leaves and monitor first integrals"},
      {"ridges", "Scan ridge loci and classify zigzag and beak-to-beak points"},
      {"rotation", "Quadrature and Poincare rotation numbers on the ellipsoid"},
      {"regimes", "Trajectory families for each lambda case of a quadric"},
      {"cansec", "Canonical sphere section along a Darboux curve"},
      {"integrability", "Integrability residual over a chart grid"},
      {"catalog", "List built-in surface types with example specs"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    if (std::string(name) != "catalog") {
      sub->add_option("--config", opt.config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
      sub->add_option("--out", opt.out_dir, "Output directory");
      sub->add_option("--jobs", opt.jobs, "Worker threads")->check(CLI::PositiveNumber);
      sub->add_option("--seed", opt.seed, "Seed for randomized sampling");
      sub->add_option("--rel-tol", opt.rel_tol, "Relative integration tolerance")->check(CLI::PositiveNumber);
      sub->add_option("--abs-tol", opt.abs_tol, "Absolute integration tolerance")->check(CLI::PositiveNumber);
    }
    subs.emplace_back(name, sub);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  std::string command;
  for (auto& [name, sub] : subs)
    if (sub->parsed()) command = name;
  if (command == "catalog") return cmd_catalog();

  Context ctx;
  ctx.opt = opt;
  ctx.command = command;
  try {
    ctx.config = read_config(opt.config_path);
    if (!ctx.config.is_object()) throw ConfigError("config: top level must be an object");
    const json& tol = ctx.config.contains("tolerances") ? ctx.config["tolerances"] : json::object();
    ctx.params.rel_tol = opt.rel_tol.value_or(number_or(tol, "rel_tol", ctx.params.rel_tol));
    ctx.params.abs_tol = opt.abs_tol.value_or(number_or(tol, "abs_tol", ctx.params.abs_tol));
    ctx.opt.rel_tol = ctx.params.rel_tol;
    ctx.opt.abs_tol = ctx.params.abs_tol;
    fs::create_directories(opt.out_dir);
    if (command == "trace") return cmd_trace(ctx);
    if (command == "ridges") return cmd_ridges(ctx);
    if (command == "rotation") return cmd_rotation(ctx);
    if (command == "regimes") return cmd_regimes(ctx);
    if (command == "cansec") return cmd_cansec(ctx);
    if (command == "integrability") return cmd_integrability(ctx);
  } catch (const ConfigError& e) {
    std::cerr << "darboux " << command << ": " << e.what() << "\n";
    return 1;
  } catch (const SpecError& e) {
    std::cerr << "darboux " << command << ": " << e.what() << "\n";
    return 1;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "darboux " << command << ": config: " << e.what() << "\n";
    return 1;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "darboux " << command << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "darboux " << command << ": " << e.what() << "\n";
    return 2;
  }
  return 1;
}
