#pragma once

// Hard-edge Fokker-Planck equation
//   kappa t F_t + x^2 F_xx + (a x - x^2 - 1/t) F_x = 0
// solved by the method of lines on a log-spaced x-grid, marching in
// decreasing t (forward diffusion in tau = -ln t). Also the closed-form
// solution on the special line kappa = 2 - a and its auxiliary identities.

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "hardedge/errors.hpp"
#include "hardedge/num/ode.hpp"

namespace hardedge::fp {

struct FPGrid {
  std::vector<double> x_nodes;  // strictly increasing, positive
  std::vector<double> t_nodes;  // strictly decreasing, positive

  static constexpr std::size_t kMinNodes = 16;

  void validate() const {
    if (x_nodes.size() < kMinNodes || t_nodes.size() < kMinNodes) {
      throw DomainError("FP grid needs at least 16 nodes in each direction");
    }
    if (!(x_nodes.front() > 0)) throw DomainError("x_min must be positive");
    if (!(t_nodes.back() > 0)) throw DomainError("t_end must be positive");
    for (std::size_t i = 1; i < x_nodes.size(); ++i) {
      if (!(x_nodes[i] > x_nodes[i - 1])) throw DomainError("x nodes must increase strictly");
    }
    for (std::size_t i = 1; i < t_nodes.size(); ++i) {
      if (!(t_nodes[i] < t_nodes[i - 1])) throw DomainError("t nodes must decrease strictly");
    }
  }

  // Geometric grids in both directions: x in [x_min, x_max], t from t_start
  // down to t_end.
  static FPGrid geometric(std::size_t nx, std::size_t nt, double x_min = 0.05, double x_max = 8.0,
                          double t_start = 50.0, double t_end = 0.1) {
    FPGrid g{num::geomspace(x_min, x_max, nx), num::geomspace(t_start, t_end, nt)};
    g.validate();
    return g;
  }
};

enum class DriftScheme { Upwind1, Upwind2, Central };
enum class RightBoundary { Neumann, QuadraticExtrapolation };

struct FPOptions {
  DriftScheme drift = DriftScheme::Central;
  RightBoundary right = RightBoundary::QuadraticExtrapolation;
  // F = 1 is imposed at t_far >= t_start and integrated through to the
  // first output slice; t_far = t_start imposes it on the first slice.
  double t_far = 1e7;
  // Rerun with halved tolerances and compare.
  bool check_refinement = false;
};

struct FPSolution {
  FPGrid grid;
  std::vector<std::vector<double>> F;  // F[t_index][x_index]
  double kappa = 1.0;
  double a = 1.0;
  FPOptions options;
  std::size_t rhs_evaluations = 0;

  [[nodiscard]] double at(std::size_t it, std::size_t ix) const { return F[it][ix]; }
  [[nodiscard]] std::string left_boundary() const { return "absorbing-extrapolated"; }
  [[nodiscard]] std::string right_boundary() const {
    return options.right == RightBoundary::Neumann ? "neumann" : "quadratic-extrapolation";
  }
};

inline double gumbel_eval(double kappa, double t, double x) {
  if (!(t > 0)) throw DomainError("t must be positive");
  if (!(x > 0)) throw DomainError("x must be positive");
  if (!(kappa > 0)) throw DomainError("kappa must be positive");
  return std::exp(-(x + kappa) / (kappa * t * x));
}

inline double gumbel_partner(double kappa, double t, double x, double r, double phi) {
  if (phi == 0.0) throw SingularInput("phi vanishes");
  return (1.0 - r) * gumbel_eval(kappa, t, x) / (2.0 * phi);
}

struct GumbelDerivs {
  double F, Fx, Ft, Fxx;
};

inline GumbelDerivs gumbel_derivs(double kappa, double t, double x) {
  const double F = gumbel_eval(kappa, t, x);
  return {F, F / (t * x * x), F * (x + kappa) / (kappa * t * t * x),
          F * (1.0 / (t * t * x * x * x * x) - 2.0 / (t * x * x * x))};
}

struct GumbelResiduals {
  double fp;              // full equation
  double transport;       // kappa t F_t - x (x + kappa) F_x
  double second;          // (d_x + 2/x - 1/(t x^2)) F_x
  double proportionality; // kappa t F_t / (x (x + kappa) F_x) - 1
};

// a defaults to the special line a = 2 - kappa.
inline GumbelResiduals gumbel_aux_residuals(double kappa, double t, double x,
                                            double a = std::numeric_limits<double>::quiet_NaN()) {
  if (std::isnan(a)) a = 2.0 - kappa;
  const auto d = gumbel_derivs(kappa, t, x);
  GumbelResiduals r{};
  r.fp = kappa * t * d.Ft + x * x * d.Fxx + (a * x - x * x - 1.0 / t) * d.Fx;
  r.transport = kappa * t * d.Ft - x * (x + kappa) * d.Fx;
  r.second = d.Fxx + (2.0 / x - 1.0 / (t * x * x)) * d.Fx;
  r.proportionality = kappa * t * d.Ft / (x * (x + kappa) * d.Fx) - 1.0;
  return r;
}

namespace detail {

// Spatial operator on the full node vector; boundary values are closures
// of the interior ones.
class Operator {
 public:
  Operator(const std::vector<double>& x, double kappa, double a, const FPOptions& opt)
      : x_(x), kappa_(kappa), a_(a), opt_(opt), n_(x.size()) {
    hm_.resize(n_);
    hp_.resize(n_);
    for (std::size_t i = 1; i + 1 < n_; ++i) {
      hm_[i] = x_[i] - x_[i - 1];
      hp_[i] = x_[i + 1] - x_[i];
    }
    full_.resize(n_);
  }

  // Interior state -> full vector with boundary closures at time t.
  void close(double t, const num::State& u, std::vector<double>& f) const {
    for (std::size_t i = 1; i + 1 < n_; ++i) f[i] = u[i - 1];
    f[0] = left_value(t, f);
    f[n_ - 1] = right_value(f);
  }

  // F at x_0 from the drift-dominated wall layer: H = F exp(1/(t x)) is
  // extrapolated linearly from the first two interior nodes.
  double left_value(double t, const std::vector<double>& f) const {
    const double x0 = x_[0], x1 = x_[1], x2 = x_[2];
    const double w1 = (x2 - x0) / (x2 - x1);
    const double w2 = (x0 - x1) / (x2 - x1);
    const double e1 = std::exp(1.0 / (t * x1) - 1.0 / (t * x0));
    const double e2 = std::exp(1.0 / (t * x2) - 1.0 / (t * x0));
    return w1 * f[1] * e1 + w2 * f[2] * e2;
  }

  double right_value(const std::vector<double>& f) const {
    const std::size_t m = n_ - 1;
    if (opt_.right == RightBoundary::Neumann) return f[m - 1];
    // Quadratic through the last three interior nodes in ln x.
    const double u0 = std::log(x_[m - 3]), u1 = std::log(x_[m - 2]), u2 = std::log(x_[m - 1]);
    const double u = std::log(x_[m]);
    const double l0 = (u - u1) * (u - u2) / ((u0 - u1) * (u0 - u2));
    const double l1 = (u - u0) * (u - u2) / ((u1 - u0) * (u1 - u2));
    const double l2 = (u - u0) * (u - u1) / ((u2 - u0) * (u2 - u1));
    return l0 * f[m - 3] + l1 * f[m - 2] + l2 * f[m - 1];
  }

  // dF/dtau at interior nodes, tau = -ln t.
  num::State rhs(double tau, const num::State& u) {
    const double t = std::exp(-tau);
    close(t, u, full_);
    const auto& f = full_;
    num::State out(n_ - 2);
    for (std::size_t i = 1; i + 1 < n_; ++i) {
      const double hm = hm_[i], hp = hp_[i], xi = x_[i];
      const double fxx = 2.0 * (hm * f[i + 1] - (hm + hp) * f[i] + hp * f[i - 1]) / (hm * hp * (hm + hp));
      const double v = a_ * xi - xi * xi - 1.0 / t;
      out[i - 1] = (xi * xi * fxx + v * first_derivative(f, i, v)) / kappa_;
    }
    return out;
  }

 private:
  double first_derivative(const std::vector<double>& f, std::size_t i, double v) const {
    const double hm = hm_[i], hp = hp_[i];
    switch (opt_.drift) {
      case DriftScheme::Upwind1:
        return v > 0 ? (f[i + 1] - f[i]) / hp : (f[i] - f[i - 1]) / hm;
      case DriftScheme::Upwind2:
        if (v > 0 && i + 2 < n_) {
          const double h1 = hp, h2 = x_[i + 2] - x_[i + 1];
          return -(2 * h1 + h2) / (h1 * (h1 + h2)) * f[i] + (h1 + h2) / (h1 * h2) * f[i + 1] -
                 h1 / (h2 * (h1 + h2)) * f[i + 2];
        }
        if (v <= 0 && i >= 2) {
          const double h1 = hm, h2 = x_[i - 1] - x_[i - 2];
          return (2 * h1 + h2) / (h1 * (h1 + h2)) * f[i] - (h1 + h2) / (h1 * h2) * f[i - 1] +
                 h1 / (h2 * (h1 + h2)) * f[i - 2];
        }
        [[fallthrough]];
      case DriftScheme::Central:
        return (hm * hm * f[i + 1] - hp * hp * f[i - 1] + (hp * hp - hm * hm) * f[i]) /
               (hm * hp * (hm + hp));
    }
    return 0.0;
  }

  const std::vector<double>& x_;
  double kappa_, a_;
  FPOptions opt_;
  std::size_t n_;
  std::vector<double> hm_, hp_;
  std::vector<double> full_;
};

inline FPSolution march(double kappa, double a, const FPGrid& grid, const num::Tolerances& tol,
                        const FPOptions& opt) {
  const auto& x = grid.x_nodes;
  const auto& ts = grid.t_nodes;
  const std::size_t n = x.size();
  Operator op(x, kappa, a, opt);
  std::size_t evals = 0;
  auto rhs = [&](double tau, const num::State& u) {
    ++evals;
    return op.rhs(tau, u);
  };

  FPSolution sol;
  sol.grid = grid;
  sol.kappa = kappa;
  sol.a = a;
  sol.options = opt;
  sol.F.reserve(ts.size());

  num::State u(n - 2, 1.0);
  std::vector<double> full(n);
  auto record = [&](double t) {
    op.close(t, u, full);
    for (double v : full) {
      if (!(v >= -0.01 && v <= 1.01)) {
        throw InstabilityDetected("F = " + std::to_string(v) + " left [-0.01, 1.01] at t = " +
                                  std::to_string(t));
      }
    }
    sol.F.push_back(full);
  };

  double tau = -std::log(opt.t_far);
  const double tau_first = -std::log(ts.front());
  if (opt.t_far > ts.front()) {
    u = num::integrate_ivp(rhs, tau, u, tau_first, tol, {.stops = {}, .record_all = false,
                                                         .max_step = 0.5, .initial_step = 0.0,
                                                         .terminate = {}})
            .back()
            .state;
  } else {
    // F = 1 exactly on the first slice, boundaries included.
    sol.F.push_back(std::vector<double>(n, 1.0));
  }
  if (sol.F.empty()) record(ts.front());
  tau = tau_first;

  std::vector<double> stops;
  for (std::size_t k = 1; k + 1 < ts.size(); ++k) stops.push_back(-std::log(ts[k]));
  num::IvpOptions ivp;
  ivp.stops = stops;
  ivp.record_all = false;
  ivp.max_step = 0.5;
  const auto traj = num::integrate_ivp(rhs, tau, u, -std::log(ts.back()), tol, ivp);
  if (traj.size() != ts.size()) throw Error("FP march lost output slices");
  for (std::size_t k = 1; k < ts.size(); ++k) {
    u = traj[k].state;
    record(ts[k]);
  }
  sol.rhs_evaluations = evals;
  return sol;
}

}  // namespace detail

inline FPSolution solve_fp(double kappa, double a, const FPGrid& grid,
                           const num::Tolerances& tol = {1e-9, 1e-9, 50'000'000, 1e-5},
                           const FPOptions& opt = {}) {
  if (!(kappa > 0)) throw DomainError("kappa must be positive");
  grid.validate();
  if (opt.t_far < grid.t_nodes.front()) throw DomainError("t_far must be at least t_start");
  FPSolution sol = detail::march(kappa, a, grid, tol, opt);
  if (opt.check_refinement) {
    const FPSolution fine = detail::march(kappa, a, grid, tol.tightened(2.0), opt);
    double diff = 0;
    for (std::size_t k = 0; k < sol.F.size(); ++k) {
      for (std::size_t i = 0; i < sol.F[k].size(); ++i) {
        diff = std::max(diff, std::abs(sol.F[k][i] - fine.F[k][i]));
      }
    }
    if (diff > 10 * (tol.abs_tol + tol.rel_tol)) {
      throw GridTooCoarse("halving the tolerances moved F by " + std::to_string(diff));
    }
  }
  return sol;
}

struct FieldDistance {
  double sup = 0.0;
  double l2 = 0.0;  // root-mean-square over interior nodes
  double scale = 1.0;
};

// Distances over interior nodes (first and last t slice and x column
// excluded). With normalize, the reference is multiplied by the constant
// that best fits the first (largest-t) interior slice in least squares.
inline FieldDistance compare_fields(const FPSolution& sol,
                                    const std::function<double(double, double)>& reference,
                                    bool normalize = false) {
  const auto& g = sol.grid;
  const std::size_t nt = g.t_nodes.size(), nx = g.x_nodes.size();
  FieldDistance d;
  if (normalize) {
    double num = 0, den = 0;
    for (std::size_t i = 1; i + 1 < nx; ++i) {
      const double r = reference(g.t_nodes[1], g.x_nodes[i]);
      num += r * sol.F[1][i];
      den += r * r;
    }
    d.scale = den > 0 ? num / den : 1.0;
  }
  double sum = 0;
  std::size_t count = 0;
  for (std::size_t k = 1; k + 1 < nt; ++k) {
    for (std::size_t i = 1; i + 1 < nx; ++i) {
      const double r = d.scale * reference(g.t_nodes[k], g.x_nodes[i]);
      if (!std::isfinite(r)) throw NonFiniteValue("reference is not finite on the grid");
      const double e = std::abs(sol.F[k][i] - r);
      d.sup = std::max(d.sup, e);
      sum += e * e;
      ++count;
    }
  }
  d.l2 = count ? std::sqrt(sum / static_cast<double>(count)) : 0.0;
  return d;
}

// Largest drop of F along x within one slice (0 for monotone slices).
inline double monotonicity_defect(const FPSolution& sol) {
  double worst = 0;
  for (const auto& row : sol.F) {
    for (std::size_t i = 1; i < row.size(); ++i) worst = std::max(worst, row[i - 1] - row[i]);
  }
  return worst;
}

// Header t,x,F; rows in t-major order; 17 significant digits.
inline void write_csv(std::ostream& os, const FPSolution& sol) {
  os << "t,x,F\n" << std::setprecision(17);
  for (std::size_t k = 0; k < sol.grid.t_nodes.size(); ++k) {
    for (std::size_t i = 0; i < sol.grid.x_nodes.size(); ++i) {
      os << sol.grid.t_nodes[k] << ',' << sol.grid.x_nodes[i] << ',' << sol.F[k][i] << '\n';
    }
  }
}

}  // namespace hardedge::fp
