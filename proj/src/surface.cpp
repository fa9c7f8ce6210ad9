#include "darboux/surface.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace darboux {

double CodazziResiduals::max_abs() const { return std::max(std::abs(res1), std::abs(res2)); }

double umbilic_threshold(double k1, double k2) {
  return 1e-12 * std::max({std::abs(k1), std::abs(k2), 1.0});
}

void require_non_umbilic(const ChartPoint& p) {
  if (std::abs(p.k1.f - p.k2.f) < umbilic_threshold(p.k1.f, p.k2.f))
    throw UmbilicError("umbilic proximity at (" + std::to_string(p.u) + ", " +
                       std::to_string(p.v) + ")");
}

std::pair<double, double> principal_curvatures(const Surface& s, double u, double v) {
  const ChartPoint p = s.evaluate(u, v);
  require_non_umbilic(p);
  return {p.k1.f, p.k2.f};
}

FrameScalars frame_scalars(const ChartPoint& p, double alpha) {
  require_non_umbilic(p);
  FrameScalars fs;
  const double c = std::cos(alpha), s = std::sin(alpha);
  const double sqE = std::sqrt(p.E.f), sqG = std::sqrt(p.G.f);
  fs.k1 = p.k1.f;
  fs.k2 = p.k2.f;
  fs.k_n = fs.k1 * c * c + fs.k2 * s * s;
  fs.tau_g = (fs.k2 - fs.k1) * c * s;
  fs.kg1 = -p.E.v / (2.0 * p.E.f * sqG);
  fs.kg2 = p.G.u / (2.0 * p.G.f * sqE);
  fs.mu = 0.5 * (fs.k1 - fs.k2);
  fs.theta1 = p.k1.u / sqE / (fs.mu * fs.mu);
  fs.theta2 = p.k2.v / sqG / (fs.mu * fs.mu);
  return fs;
}

FrameScalars frame_scalars(const Surface& s, double u, double v, double alpha) {
  return frame_scalars(s.evaluate(u, v), alpha);
}

CodazziResiduals codazzi_residuals(const ChartPoint& p) {
  CodazziResiduals r;
  r.res1 = p.k1.v - p.E.v / (2.0 * p.E.f) * (p.k2.f - p.k1.f);
  r.res2 = p.k2.u - p.G.u / (2.0 * p.G.f) * (p.k1.f - p.k2.f);
  return r;
}

CodazziResiduals codazzi_residuals(const Surface& s, double u, double v) {
  return codazzi_residuals(s.evaluate(u, v));
}

double codazzi_gate(const Surface& s, int n) {
  const Domain d = s.scan_domain();
  double worst = 0.0;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      const double u = d.u_min + d.u_span() * i / (n + 1.0);
      const double v = d.v_min + d.v_span() * j / (n + 1.0);
      try {
        worst = std::max(worst, codazzi_residuals(s, u, v).max_abs());
      } catch (const DomainError&) {
      }
    }
  return worst;
}

namespace {

double richardson_central(const std::function<double(double)>& f, double x, double h) {
  const double d1 = (f(x + h) - f(x - h)) / (2 * h);
  const double d2 = (f(x + h / 2) - f(x - h / 2)) / h;
  return (4 * d2 - d1) / 3;
}

}  // namespace

double conformal_fields_bracket_check(const Surface& s, double u, double v) {
  const ChartPoint p = s.evaluate(u, v);
  const FrameScalars fs = frame_scalars(p, 0.0);
  auto coef1 = [&](double uu, double vv) {
    const ChartPoint q = s.evaluate(uu, vv);
    return 2.0 / (std::sqrt(q.E.f) * (q.k1.f - q.k2.f));
  };
  auto coef2 = [&](double uu, double vv) {
    const ChartPoint q = s.evaluate(uu, vv);
    return 2.0 / (std::sqrt(q.G.f) * (q.k1.f - q.k2.f));
  };
  const Domain d = s.scan_domain();
  const double hu = 1e-3 * d.u_span(), hv = 1e-3 * d.v_span();
  const double f = coef1(u, v), g = coef2(u, v);
  const double f_v = richardson_central([&](double t) { return coef1(u, t); }, v, hv);
  const double g_u = richardson_central([&](double t) { return coef2(t, v); }, u, hu);
  // [f d_u, g d_v] = f g_u d_v - g f_v d_u against -(theta2 f d_u + theta1 g d_v)/2.
  const double comp_u = -g * f_v + 0.5 * fs.theta2 * f;
  const double comp_v = f * g_u + 0.5 * fs.theta1 * g;
  return std::max(std::abs(comp_u), std::abs(comp_v));
}

namespace {

class ScaledSurface final : public Surface {
 public:
  ScaledSurface(SurfacePtr base, double factor) : base_(std::move(base)), s_(factor) {}

  std::string name() const override { return base_->name(); }
  SurfaceFamily family() const override { return SurfaceFamily::Scaled; }
  Domain domain() const override { return base_->domain(); }
  Domain scan_domain() const override { return base_->scan_domain(); }
  bool analytic_partials() const override { return base_->analytic_partials(); }

  ChartPoint evaluate(double u, double v) const override {
    ChartPoint p = base_->evaluate(u, v);
    auto scale = [](Partials& q, double k) {
      q.f *= k; q.u *= k; q.v *= k; q.uu *= k; q.uv *= k; q.vv *= k;
    };
    p.X *= s_;
    p.Xu *= s_;
    p.Xv *= s_;
    scale(p.E, s_ * s_);
    scale(p.G, s_ * s_);
    scale(p.e, s_);
    scale(p.g, s_);
    scale(p.k1, 1.0 / s_);
    scale(p.k2, 1.0 / s_);
    return p;
  }

 private:
  SurfacePtr base_;
  double s_;
};

}  // namespace

SurfacePtr scaled(SurfacePtr base, double factor) {
  if (!(factor > 0)) throw SpecError("dilation factor must be positive");
  return std::make_shared<ScaledSurface>(std::move(base), factor);
}

}  // namespace darboux
