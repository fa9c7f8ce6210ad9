#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "darboux/flow.hpp"

namespace darboux::detail {

using Y = std::array<double, 4>;

struct OdeEventSpec {
  std::function<double(const Y&)> g;
  int direction = 0;
  bool terminal = false;
};

struct OdeProblem {
  // May throw DomainError or UmbilicError; the step is then retried smaller.
  std::function<void(const Y&, Y&)> rhs;
  std::function<bool(const Y&)> inside;
  // Largest admissible |h| at y with derivative f.
  std::function<double(const Y&, const Y&)> step_limit;
  std::vector<OdeEventSpec> events;
};

struct OdeEvent {
  int index = 0;
  double t = 0;
  Y y{};
};

struct OdeResult {
  std::vector<double> t;
  std::vector<Y> y;
  std::vector<OdeEvent> events;
  Termination reason = Termination::StepBudget;
  int terminal_event = -1;
  long accepted = 0, rejected = 0;
};

struct StepFailure {
  Termination reason;
};

// Dormand-Prince 5(4) with step-size control and event location.
class DormandPrince {
 public:
  DormandPrince(const OdeProblem& pb, double rtol, double atol) : pb_(pb), rtol_(rtol), atol_(atol) {}

  OdeResult solve(const Y& y0, long max_steps) const {
    OdeResult res;
    Y y = y0, f{};
    double t = 0;
    try {
      pb_.rhs(y, f);
    } catch (const UmbilicError&) {
      res.reason = Termination::UmbilicProximity;
      res.t.push_back(t);
      res.y.push_back(y);
      return res;
    }
    res.t.push_back(t);
    res.y.push_back(y);
    std::vector<double> g_old(pb_.events.size());
    for (size_t i = 0; i < pb_.events.size(); ++i) g_old[i] = pb_.events[i].g(y);

    double fmax = 0;
    for (double x : f) fmax = std::max(fmax, std::abs(x));
    double h = std::min(1e-3 / std::max(fmax, 1e-300), pb_.step_limit(y, f));
    Termination last_failure = Termination::SingularLocus;

    while (res.accepted < max_steps) {
      const double hmin = 1e-14 * std::max(1.0, std::abs(t));
      h = std::min(h, pb_.step_limit(y, f));
      if (h < hmin) {
        res.reason = last_failure;
        return res;
      }
      Y ynew{}, fnew{};
      double err = 0;
      bool ok = true;
      try {
        err = step(y, f, h, ynew, fnew);
        if (!pb_.inside(ynew)) throw DomainError("left domain");
      } catch (const DomainError&) {
        ok = false;
        last_failure = Termination::DomainExit;
      } catch (const UmbilicError&) {
        ok = false;
        last_failure = Termination::UmbilicProximity;
      }
      if (!ok || !std::isfinite(err)) {
        ++res.rejected;
        h *= 0.25;
        continue;
      }
      if (err > 1.0) {
        ++res.rejected;
        last_failure = Termination::SingularLocus;
        h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
        continue;
      }
      ++res.accepted;
      last_failure = Termination::SingularLocus;

      // Events within the accepted step.
      std::vector<std::pair<double, int>> hits;
      std::vector<double> g_new(pb_.events.size());
      for (size_t i = 0; i < pb_.events.size(); ++i) {
        g_new[i] = pb_.events[i].g(ynew);
        const double a = g_old[i], b = g_new[i];
        if (a == 0 || !(a * b <= 0) || b == a) continue;
        const int dir = b > a ? 1 : -1;
        if (pb_.events[i].direction != 0 && pb_.events[i].direction != dir) continue;
        hits.emplace_back(locate(pb_.events[i], y, f, h, a, b), static_cast<int>(i));
      }
      std::sort(hits.begin(), hits.end());
      bool stop = false;
      for (const auto& [theta, idx] : hits) {
        Y ye{}, fe{};
        step(y, f, theta * h, ye, fe);
        res.events.push_back({idx, t + theta * h, ye});
        if (pb_.events[idx].terminal) {
          t += theta * h;
          y = ye;
          res.t.push_back(t);
          res.y.push_back(y);
          res.reason = Termination::Event;
          res.terminal_event = idx;
          stop = true;
          break;
        }
      }
      if (stop) return res;

      t += h;
      y = ynew;
      f = fnew;
      g_old = g_new;
      res.t.push_back(t);
      res.y.push_back(y);
      h *= std::min(5.0, 0.9 * std::pow(std::max(err, 1e-10), -0.2));
    }
    res.reason = Termination::StepBudget;
    return res;
  }

 private:
  double step(const Y& y, const Y& k1, double h, Y& out, Y& k7) const {
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                            b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;
    Y k2{}, k3{}, k4{}, k5{}, k6{}, tmp{};
    for (int i = 0; i < 4; ++i) tmp[i] = y[i] + h * a21 * k1[i];
    pb_.rhs(tmp, k2);
    for (int i = 0; i < 4; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    pb_.rhs(tmp, k3);
    for (int i = 0; i < 4; ++i) tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    pb_.rhs(tmp, k4);
    for (int i = 0; i < 4; ++i) tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    pb_.rhs(tmp, k5);
    for (int i = 0; i < 4; ++i)
      tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    pb_.rhs(tmp, k6);
    for (int i = 0; i < 4; ++i)
      out[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    pb_.rhs(out, k7);
    double acc = 0;
    for (int i = 0; i < 4; ++i) {
      const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double sc = atol_ + rtol_ * std::max(std::abs(y[i]), std::abs(out[i]));
      acc += (e / sc) * (e / sc);
    }
    return std::sqrt(acc / 4);
  }

  // Illinois iteration on the step fraction; each probe is a fresh step.
  double locate(const OdeEventSpec& ev, const Y& y, const Y& f, double h, double ga, double gb) const {
    double a = 0, b = 1;
    int side = 0;
    for (int it = 0; it < 200 && (b - a) * std::abs(h) > 1e-13; ++it) {
      double m = (a * gb - b * ga) / (gb - ga);
      if (!(m > a && m < b)) m = 0.5 * (a + b);
      Y ym{}, fm{};
      step(y, f, m * h, ym, fm);
      const double gm = ev.g(ym);
      if (gm == 0) return m;
      if ((gm > 0) == (ga > 0)) {
        a = m;
        ga = gm;
        if (side == -1) gb *= 0.5;
        side = -1;
      } else {
        b = m;
        gb = gm;
        if (side == 1) ga *= 0.5;
        side = 1;
      }
    }
    return 0.5 * (a + b);
  }

  const OdeProblem& pb_;
  double rtol_, atol_;
};

}  // namespace darboux::detail
