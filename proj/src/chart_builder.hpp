#pragma once

#include <array>
#include <cmath>

#include "darboux/catalog.hpp"

namespace darboux::detail {

inline Partials partials(const J4& j) {
  return {j.d(0, 0), j.d(1, 0), j.d(0, 1), j.d(2, 0), j.d(1, 1), j.d(0, 2)};
}

inline Vec3 value(const std::array<J4, 3>& x) {
  return {x[0].value(), x[1].value(), x[2].value()};
}

inline std::array<J4, 3> cross(const std::array<J4, 3>& a, const std::array<J4, 3>& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline J4 dot(const std::array<J4, 3>& a, const std::array<J4, 3>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

struct EmbeddingJets {
  std::array<J4, 3> X, Xu, Xv, N;
  J4 E, G, e, g;
};

// Fundamental forms of a fourth-order embedding jet; the normal is flipped
// to have a non-negative inner product with `hint`.
inline EmbeddingJets embedding_jets(const std::array<J4, 3>& X, const Vec3& hint) {
  EmbeddingJets r;
  r.X = X;
  for (int i = 0; i < 3; ++i) {
    r.Xu[i] = X[i].du();
    r.Xv[i] = X[i].dv();
  }
  const auto n = cross(r.Xu, r.Xv);
  const J4 inv_len = pow(dot(n, n), -0.5);
  double sign = 1.0;
  const Vec3 n0 = value(n);
  if (n0.dot(hint) < 0) sign = -1.0;
  for (int i = 0; i < 3; ++i) r.N[i] = sign * n[i] * inv_len;
  std::array<J4, 3> Xuu, Xvv;
  for (int i = 0; i < 3; ++i) {
    Xuu[i] = r.Xu[i].du();
    Xvv[i] = r.Xv[i].dv();
  }
  r.E = dot(r.Xu, r.Xu);
  r.G = dot(r.Xv, r.Xv);
  r.e = dot(Xuu, r.N);
  r.g = dot(Xvv, r.N);
  return r;
}

inline ChartPoint chart_point(double u, double v, const EmbeddingJets& j) {
  ChartPoint p;
  p.u = u;
  p.v = v;
  p.X = value(j.X);
  p.Xu = value(j.Xu);
  p.Xv = value(j.Xv);
  p.N = value(j.N);
  p.E = partials(j.E);
  p.G = partials(j.G);
  p.e = partials(j.e);
  p.g = partials(j.g);
  p.k1 = partials(j.e / j.E);
  p.k2 = partials(j.g / j.G);
  return p;
}

inline bool finite(const ChartPoint& p) {
  const double vals[] = {p.E.f, p.G.f, p.E.uu, p.G.vv, p.k1.uu, p.k1.vv, p.k2.uu, p.k2.vv};
  for (double x : vals)
    if (!std::isfinite(x)) return false;
  return p.E.f > 0 && p.G.f > 0 && p.X.allFinite();
}

}  // namespace darboux::detail
