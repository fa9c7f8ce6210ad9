#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace darboux {

// Truncated bivariate Taylor polynomial in (du, dv) up to total order K.
// Coefficient (i, j) multiplies du^i dv^j, so the partial derivative
// d^{i+j} f / du^i dv^j equals coeff(i, j) * i! * j!.
template <int K>
class Jet {
 public:
  static constexpr int kOrder = K;
  static constexpr int kSize = (K + 1) * (K + 2) / 2;

  static constexpr int index(int i, int j) {
    const int n = i + j;
    return n * (n + 1) / 2 + j;
  }

  Jet() { c_.fill(0.0); }
  Jet(double value) {  // NOLINT(google-explicit-constructor)
    c_.fill(0.0);
    c_[0] = value;
  }

  static Jet variable_u(double u0) {
    Jet r(u0);
    if constexpr (K >= 1) r.c_[index(1, 0)] = 1.0;
    return r;
  }
  static Jet variable_v(double v0) {
    Jet r(v0);
    if constexpr (K >= 1) r.c_[index(0, 1)] = 1.0;
    return r;
  }

  double value() const { return c_[0]; }
  double coeff(int i, int j) const { return c_[index(i, j)]; }
  double& coeff(int i, int j) { return c_[index(i, j)]; }

  double d(int i, int j) const {
    if (i + j > K) return 0.0;
    return c_[index(i, j)] * factorial(i) * factorial(j);
  }

  // Partial derivative as a jet; the top order is lost.
  Jet du() const {
    Jet r;
    for (int n = 0; n < K; ++n)
      for (int j = 0; j <= n; ++j) {
        const int i = n - j;
        r.c_[index(i, j)] = (i + 1) * c_[index(i + 1, j)];
      }
    return r;
  }
  Jet dv() const {
    Jet r;
    for (int n = 0; n < K; ++n)
      for (int j = 0; j <= n; ++j) {
        const int i = n - j;
        r.c_[index(i, j)] = (j + 1) * c_[index(i, j + 1)];
      }
    return r;
  }

  Jet operator-() const {
    Jet r;
    for (int k = 0; k < kSize; ++k) r.c_[k] = -c_[k];
    return r;
  }
  Jet& operator+=(const Jet& o) {
    for (int k = 0; k < kSize; ++k) c_[k] += o.c_[k];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (int k = 0; k < kSize; ++k) c_[k] -= o.c_[k];
    return *this;
  }
  Jet& operator*=(const Jet& o) {
    *this = *this * o;
    return *this;
  }
  Jet& operator/=(const Jet& o) {
    *this = *this / o;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (int n1 = 0; n1 <= K; ++n1)
      for (int j1 = 0; j1 <= n1; ++j1) {
        const double x = a.c_[index(n1 - j1, j1)];
        if (x == 0.0) continue;
        for (int n2 = 0; n1 + n2 <= K; ++n2)
          for (int j2 = 0; j2 <= n2; ++j2)
            r.c_[index(n1 - j1 + n2 - j2, j1 + j2)] += x * b.c_[index(n2 - j2, j2)];
      }
    return r;
  }
  friend Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

  // f(x) for a scalar function given its derivatives f^(n)(x0), n = 0..K.
  template <class Derivs>
  friend Jet compose(const Jet& x, const Derivs& f) {
    Jet delta = x;
    delta.c_[0] = 0.0;
    Jet r(f[K] / factorial(K));
    for (int n = K - 1; n >= 0; --n) {
      r = r * delta;
      r.c_[0] += f[n] / factorial(n);
    }
    return r;
  }

  friend Jet reciprocal(const Jet& x) {
    std::array<double, K + 1> f{};
    const double x0 = x.value();
    double p = 1.0 / x0;
    for (int n = 0; n <= K; ++n) {
      f[n] = p;
      p *= -(n + 1) / x0;
    }
    return compose(x, f);
  }
  friend Jet pow(const Jet& x, double e) {
    std::array<double, K + 1> f{};
    const double x0 = x.value();
    double coef = 1.0;
    for (int n = 0; n <= K; ++n) {
      f[n] = coef * std::pow(x0, e - n);
      coef *= (e - n);
    }
    return compose(x, f);
  }
  friend Jet sqrt(const Jet& x) { return pow(x, 0.5); }
  friend Jet sin(const Jet& x) {
    std::array<double, K + 1> f{};
    const double s = std::sin(x.value()), c = std::cos(x.value());
    const double cyc[4] = {s, c, -s, -c};
    for (int n = 0; n <= K; ++n) f[n] = cyc[n % 4];
    return compose(x, f);
  }
  friend Jet cos(const Jet& x) {
    std::array<double, K + 1> f{};
    const double s = std::sin(x.value()), c = std::cos(x.value());
    const double cyc[4] = {c, -s, -c, s};
    for (int n = 0; n <= K; ++n) f[n] = cyc[n % 4];
    return compose(x, f);
  }
  friend Jet exp(const Jet& x) {
    std::array<double, K + 1> f{};
    f.fill(std::exp(x.value()));
    return compose(x, f);
  }
  friend Jet log(const Jet& x) {
    std::array<double, K + 1> f{};
    const double x0 = x.value();
    f[0] = std::log(x0);
    double p = 1.0 / x0;
    for (int n = 1; n <= K; ++n) {
      f[n] = p;
      p *= -n / x0;
    }
    return compose(x, f);
  }

  static constexpr double factorial(int n) {
    double r = 1.0;
    for (int k = 2; k <= n; ++k) r *= k;
    return r;
  }

 private:
  std::array<double, kSize> c_;
};

template <int K>
Jet<K> operator+(double a, const Jet<K>& b) { return Jet<K>(a) + b; }
template <int K>
Jet<K> operator+(const Jet<K>& a, double b) { return a + Jet<K>(b); }
template <int K>
Jet<K> operator-(double a, const Jet<K>& b) { return Jet<K>(a) - b; }
template <int K>
Jet<K> operator-(const Jet<K>& a, double b) { return a - Jet<K>(b); }
template <int K>
Jet<K> operator*(double a, const Jet<K>& b) { return Jet<K>(a) * b; }
template <int K>
Jet<K> operator*(const Jet<K>& a, double b) { return a * Jet<K>(b); }
template <int K>
Jet<K> operator/(double a, const Jet<K>& b) { return Jet<K>(a) / b; }
template <int K>
Jet<K> operator/(const Jet<K>& a, double b) { return a * Jet<K>(1.0 / b); }

// Scalar overloads so catalog formulas can be instantiated with double.
inline double reciprocal(double x) { return 1.0 / x; }

}  // namespace darboux
