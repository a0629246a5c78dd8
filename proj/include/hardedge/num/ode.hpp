#pragma once

// Adaptive Dormand-Prince 5(4) integration with cubic Hermite dense output.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hardedge/errors.hpp"

namespace hardedge::num {

using State = std::vector<double>;

struct Tolerances {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  std::size_t max_steps = 1'000'000;
  double fd_step = 1e-5;

  void validate() const {
    if (!(abs_tol >= 0.0) || !(rel_tol >= 0.0) || abs_tol + rel_tol <= 0.0) {
      throw DomainError("tolerances must be non-negative with a positive sum");
    }
    if (max_steps < 1) throw DomainError("max_steps must be at least 1");
    if (!(fd_step > 0.0)) throw DomainError("fd_step must be positive");
  }

  [[nodiscard]] Tolerances tightened(double factor) const {
    Tolerances t = *this;
    t.abs_tol /= factor;
    t.rel_tol /= factor;
    return t;
  }
};

struct TrajectoryNode {
  double s;
  State state;
  State deriv;
};

// Ordered record of an ODE solution. Nodes are strictly monotone in s, in
// the direction of integration.
class Trajectory {
 public:
  Trajectory() = default;

  explicit Trajectory(std::vector<TrajectoryNode> nodes) : nodes_(std::move(nodes)) {
    check();
  }

  void push_back(TrajectoryNode node) {
    nodes_.push_back(std::move(node));
    if (nodes_.size() >= 2) {
      const auto& a = nodes_[nodes_.size() - 2];
      const auto& b = nodes_.back();
      const bool inc = b.s > a.s;
      if (nodes_.size() == 2) increasing_ = inc;
      if (inc != increasing_ || a.s == b.s) {
        throw DomainError("trajectory nodes must be strictly monotone");
      }
      if (a.state.size() != b.state.size() || a.deriv.size() != b.deriv.size()) {
        throw DomainError("trajectory dimension changed between nodes");
      }
    }
  }

  [[nodiscard]] std::size_t size() const { return nodes_.size(); }
  [[nodiscard]] bool empty() const { return nodes_.empty(); }
  [[nodiscard]] std::size_t dim() const { return nodes_.empty() ? 0 : nodes_.front().state.size(); }
  [[nodiscard]] bool increasing() const { return increasing_; }
  [[nodiscard]] const TrajectoryNode& operator[](std::size_t i) const { return nodes_[i]; }
  [[nodiscard]] const TrajectoryNode& front() const { return nodes_.front(); }
  [[nodiscard]] const TrajectoryNode& back() const { return nodes_.back(); }
  [[nodiscard]] const std::vector<TrajectoryNode>& nodes() const { return nodes_; }
  [[nodiscard]] auto begin() const { return nodes_.begin(); }
  [[nodiscard]] auto end() const { return nodes_.end(); }

  [[nodiscard]] double s_min() const { return increasing_ ? nodes_.front().s : nodes_.back().s; }
  [[nodiscard]] double s_max() const { return increasing_ ? nodes_.back().s : nodes_.front().s; }
  [[nodiscard]] bool covers(double s) const {
    return !nodes_.empty() && s >= s_min() && s <= s_max();
  }

  // Cubic Hermite interpolation of state and its derivative on the accepted
  // step containing s.
  [[nodiscard]] std::pair<State, State> eval(double s) const {
    if (!covers(s)) {
      throw RangeError("s = " + std::to_string(s) + " outside trajectory range [" +
                       std::to_string(s_min()) + ", " + std::to_string(s_max()) + "]");
    }
    if (nodes_.size() == 1) return {nodes_[0].state, nodes_[0].deriv};
    const std::size_t i = interval(s);
    const auto& a = nodes_[i];
    const auto& b = nodes_[i + 1];
    const double h = b.s - a.s;
    const double u = (s - a.s) / h;
    const double h00 = (1 + 2 * u) * (1 - u) * (1 - u);
    const double h10 = u * (1 - u) * (1 - u);
    const double h01 = u * u * (3 - 2 * u);
    const double h11 = u * u * (u - 1);
    const double d00 = 6 * u * (u - 1) / h;
    const double d10 = (1 - u) * (1 - 3 * u);
    const double d01 = -d00;
    const double d11 = u * (3 * u - 2);
    State y(a.state.size()), dy(a.state.size());
    for (std::size_t k = 0; k < y.size(); ++k) {
      y[k] = h00 * a.state[k] + h10 * h * a.deriv[k] + h01 * b.state[k] + h11 * h * b.deriv[k];
      dy[k] = d00 * a.state[k] + d10 * a.deriv[k] + d01 * b.state[k] + d11 * b.deriv[k];
    }
    return {std::move(y), std::move(dy)};
  }

  [[nodiscard]] State state_at(double s) const { return eval(s).first; }

  // Index of the node whose s equals the argument exactly, or npos.
  [[nodiscard]] std::size_t find_node(double s) const {
    auto it = std::find_if(nodes_.begin(), nodes_.end(),
                           [s](const TrajectoryNode& n) { return n.s == s; });
    return it == nodes_.end() ? npos : static_cast<std::size_t>(it - nodes_.begin());
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  void check() {
    std::vector<TrajectoryNode> tmp;
    tmp.swap(nodes_);
    for (auto& n : tmp) push_back(std::move(n));
  }

  [[nodiscard]] std::size_t interval(double s) const {
    std::size_t lo = 0;
    std::size_t hi = nodes_.size() - 1;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      const bool right = increasing_ ? nodes_[mid].s <= s : nodes_[mid].s >= s;
      (right ? lo : hi) = mid;
    }
    return lo;
  }

  std::vector<TrajectoryNode> nodes_;
  bool increasing_ = true;
};

struct IvpOptions {
  // Points the integrator must land on exactly; they always appear as nodes.
  std::vector<double> stops;
  // When false only s0, the stops and s1 are recorded.
  bool record_all = true;
  double max_step = std::numeric_limits<double>::infinity();
  double initial_step = 0.0;
  // Returning true ends integration after the accepted node is recorded.
  std::function<bool(double, const State&)> terminate;
};

namespace detail {

inline bool all_finite(const State& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

// Dormand-Prince 5(4) tableau.
struct DP54 {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
};

}  // namespace detail

// Integrates state' = rhs(s, state) from s0 to s1. rhs is any callable
// `State(double, const State&)`.
template <typename Rhs>
Trajectory integrate_ivp(Rhs&& rhs, double s0, State state0, double s1, const Tolerances& tol,
                         const IvpOptions& opts = {}) {
  tol.validate();
  if (s0 == s1) throw DomainError("integration interval is empty (s0 == s1)");
  const double dir = s1 > s0 ? 1.0 : -1.0;
  const std::size_t n = state0.size();

  std::vector<double> stops;
  for (double st : opts.stops) {
    if ((st - s0) * dir > 0 && (s1 - st) * dir > 0) stops.push_back(st);
  }
  std::sort(stops.begin(), stops.end(), [dir](double a, double b) { return a * dir < b * dir; });
  stops.erase(std::unique(stops.begin(), stops.end()), stops.end());
  stops.push_back(s1);
  std::size_t next_stop = 0;

  auto eval = [&](double s, const State& y) {
    State f = rhs(s, y);
    if (f.size() != n) throw DomainError("rhs returned a vector of the wrong dimension");
    return f;
  };

  Trajectory traj;
  double s = s0;
  State y = std::move(state0);
  State f = eval(s, y);
  if (!detail::all_finite(y) || !detail::all_finite(f)) {
    throw NonFiniteState("non-finite initial state or derivative at s = " + std::to_string(s));
  }
  traj.push_back({s, y, f});
  if (opts.terminate && opts.terminate(s, y)) return traj;

  auto err_norm_scale = [&](const State& a, const State& b, std::size_t k) {
    return tol.abs_tol + tol.rel_tol * std::max(std::abs(a[k]), std::abs(b[k]));
  };

  // Initial step (Hairer, Norsett & Wanner, II.4).
  double h = opts.initial_step;
  if (!(h > 0)) {
    double d0 = 0, d1 = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const double sc = tol.abs_tol + tol.rel_tol * std::abs(y[k]);
      d0 += (y[k] / sc) * (y[k] / sc);
      d1 += (f[k] / sc) * (f[k] / sc);
    }
    d0 = std::sqrt(d0 / std::max<std::size_t>(n, 1));
    d1 = std::sqrt(d1 / std::max<std::size_t>(n, 1));
    h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h = std::min(h, std::abs(s1 - s0));
    State y1(n);
    for (std::size_t k = 0; k < n; ++k) y1[k] = y[k] + dir * h * f[k];
    State f1 = rhs(s + dir * h, y1);
    double d2 = 0;
    if (f1.size() == n && detail::all_finite(f1)) {
      for (std::size_t k = 0; k < n; ++k) {
        const double sc = tol.abs_tol + tol.rel_tol * std::abs(y[k]);
        d2 += ((f1[k] - f[k]) / sc) * ((f1[k] - f[k]) / sc);
      }
      d2 = std::sqrt(d2 / std::max<std::size_t>(n, 1)) / h;
      const double dm = std::max(d1, d2);
      const double h1 = dm <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / dm, 0.2);
      h = std::min(100 * h, h1);
    } else {
      h *= 1e-3;
    }
  }
  h = std::min({h, opts.max_step, std::abs(s1 - s0)});

  using T = detail::DP54;
  State k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), yt(n), ynew(n);
  std::size_t steps = 0;
  bool last_rejected = false;

  while (true) {
    if (++steps > tol.max_steps) {
      throw StepLimitExceeded("exceeded " + std::to_string(tol.max_steps) + " steps near s = " +
                              std::to_string(s));
    }
    const double target = stops[next_stop];
    const double h_planned = h;
    bool hit_stop = false;
    if (h >= std::abs(target - s)) {
      h = std::abs(target - s);
      hit_stop = true;
    }
    const double min_h = 16 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(s));
    if (h < min_h && !hit_stop) {
      throw StepLimitExceeded("step size underflow near s = " + std::to_string(s));
    }
    const double hs = dir * h;

    auto stage = [&](State& out, double c, auto&&... terms) {
      for (std::size_t k = 0; k < n; ++k) {
        double acc = 0;
        ((acc += terms.first * (*terms.second)[k]), ...);
        yt[k] = y[k] + hs * acc;
      }
      out = rhs(s + c * hs, yt);
      if (out.size() != n) throw DomainError("rhs returned a vector of the wrong dimension");
    };
    using P = std::pair<double, const State*>;
    stage(k2, T::c2, P{T::a21, &f});
    stage(k3, T::c3, P{T::a31, &f}, P{T::a32, &k2});
    stage(k4, T::c4, P{T::a41, &f}, P{T::a42, &k2}, P{T::a43, &k3});
    stage(k5, T::c5, P{T::a51, &f}, P{T::a52, &k2}, P{T::a53, &k3}, P{T::a54, &k4});
    stage(k6, 1.0, P{T::a61, &f}, P{T::a62, &k2}, P{T::a63, &k3}, P{T::a64, &k4},
          P{T::a65, &k5});
    for (std::size_t k = 0; k < n; ++k) {
      ynew[k] = y[k] + hs * (T::b1 * f[k] + T::b3 * k3[k] + T::b4 * k4[k] + T::b5 * k5[k] +
                             T::b6 * k6[k]);
    }
    const double snew = hit_stop ? target : s + hs;
    k7 = rhs(snew, ynew);
    if (k7.size() != n) throw DomainError("rhs returned a vector of the wrong dimension");

    double err = 0;
    bool finite = detail::all_finite(ynew) && detail::all_finite(k7);
    if (finite) {
      for (std::size_t k = 0; k < n; ++k) {
        const double e = hs * (T::e1 * f[k] + T::e3 * k3[k] + T::e4 * k4[k] + T::e5 * k5[k] +
                               T::e6 * k6[k] + T::e7 * k7[k]);
        const double r = e / err_norm_scale(y, ynew, k);
        err += r * r;
      }
      err = std::sqrt(err / std::max<std::size_t>(n, 1));
      finite = std::isfinite(err);
    }
    if (!finite) {
      if (h <= min_h * 4) {
        throw NonFiniteState("rhs produced non-finite values near s = " + std::to_string(s));
      }
      h *= 0.25;
      last_rejected = true;
      continue;
    }

    if (err <= 1.0) {
      s = snew;
      y.swap(ynew);
      f.swap(k7);
      const bool at_stop = hit_stop;
      if (at_stop) ++next_stop;
      const bool done = at_stop && next_stop == stops.size();
      if (opts.record_all || at_stop) traj.push_back({s, y, f});
      if (done) break;
      if (opts.terminate && opts.terminate(s, y)) {
        if (!(opts.record_all || at_stop)) traj.push_back({s, y, f});
        break;
      }
      double fac = err == 0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      if (last_rejected) fac = std::min(fac, 1.0);
      // A step clipped to a stop says nothing about the natural size.
      h = at_stop ? std::max(h_planned, h * fac) : h * fac;
      h = std::min(h, opts.max_step);
      last_rejected = false;
    } else {
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
      last_rejected = true;
    }
  }
  return traj;
}

// Uniform grid of count points covering [a, b] inclusive.
inline std::vector<double> linspace(double a, double b, std::size_t count) {
  std::vector<double> g(count);
  if (count == 1) {
    g[0] = a;
    return g;
  }
  for (std::size_t i = 0; i < count; ++i) {
    g[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  g.back() = b;
  return g;
}

// Geometric grid of count points covering [a, b] inclusive (a, b > 0).
inline std::vector<double> geomspace(double a, double b, std::size_t count) {
  std::vector<double> g(count);
  const double la = std::log(a), lb = std::log(b);
  for (std::size_t i = 0; i < count; ++i) {
    g[i] = std::exp(la + (lb - la) * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  g.front() = a;
  g.back() = b;
  return g;
}

}  // namespace hardedge::num
