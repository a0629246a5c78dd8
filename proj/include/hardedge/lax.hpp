#pragma once

// Explicit Lax pairs for the hard edge (beta = 2, 4 and the two-function
// family on the special parameter line) and their soft-edge limits, with the
// zero-curvature and Fokker-Planck compatibility residuals.

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "hardedge/errors.hpp"
#include "hardedge/matrix2.hpp"
#include "hardedge/num/ode.hpp"
#include "hardedge/painleve2.hpp"
#include "hardedge/painleve3.hpp"

namespace hardedge::lax {

using DMat = Mat2<Dual>;

// Laurent coefficients in x: index k + 2 holds the x^k coefficient,
// k = -2..2. L uses x^-2, x^-1, x^0 on the hard edge; the soft pairs use
// x^0..x^2. B uses x^-1..x^1.
inline constexpr int kMinPower = -2;
inline constexpr int kMaxPower = 2;
inline constexpr std::size_t kTerms = kMaxPower - kMinPower + 1;

struct PoleStructure {
  std::array<Matrix2, kTerms> L{};
  std::array<Matrix2, kTerms> dLdt{};
  std::array<Matrix2, kTerms> B{};

  [[nodiscard]] const Matrix2& L_at(int k) const { return L[static_cast<std::size_t>(k - kMinPower)]; }
  [[nodiscard]] const Matrix2& B_at(int k) const { return B[static_cast<std::size_t>(k - kMinPower)]; }
};

namespace detail {

inline Matrix2 laurent(const std::array<Matrix2, kTerms>& c, double x) {
  Matrix2 out{};
  for (int k = kMinPower; k <= kMaxPower; ++k) {
    const auto& m = c[static_cast<std::size_t>(k - kMinPower)];
    if (norm_max(m) == 0.0) continue;
    out += m * std::pow(x, k);
  }
  return out;
}

inline Matrix2 laurent_dx(const std::array<Matrix2, kTerms>& c, double x) {
  Matrix2 out{};
  for (int k = kMinPower; k <= kMaxPower; ++k) {
    if (k == 0) continue;
    const auto& m = c[static_cast<std::size_t>(k - kMinPower)];
    if (norm_max(m) == 0.0) continue;
    out += m * (k * std::pow(x, k - 1));
  }
  return out;
}

struct DualTerms {
  std::array<DMat, kTerms> L{};
  std::array<DMat, kTerms> B{};

  DMat& l(int k) { return L[static_cast<std::size_t>(k - kMinPower)]; }
  DMat& b(int k) { return B[static_cast<std::size_t>(k - kMinPower)]; }

  [[nodiscard]] PoleStructure split() const {
    PoleStructure p;
    for (std::size_t i = 0; i < kTerms; ++i) {
      p.L[i] = values(L[i]);
      p.dLdt[i] = derivs(L[i]);
      p.B[i] = values(B[i]);
    }
    return p;
  }
};

inline DMat dmat(Dual a11, Dual a12, Dual a21, Dual a22) { return {a11, a12, a21, a22}; }
inline DMat scaled(const DMat& m, const Dual& s) { return m * s; }

}  // namespace detail

// A pair L(t, x), B(t, x) given through the t-dependent Laurent coefficients.
// dLdt is exact along the data source: derivatives are carried by dual
// numbers seeded from the governing ODE right-hand sides.
struct LaxAssembly {
  std::string name;
  std::function<PoleStructure(double t)> coeffs;
  // Optional regularity guard for (t, x); throws SingularInput.
  std::function<void(double t, double x)> guard;
  // Hard-edge pairs have a pole at x = 0; the soft pairs are polynomial.
  bool pole_at_zero = true;

  [[nodiscard]] PoleStructure pole_structure(double t) const { return coeffs(t); }

  [[nodiscard]] Matrix2 L(double t, double x) const { return detail::laurent(at(t, x).L, x); }
  [[nodiscard]] Matrix2 dLdx(double t, double x) const { return detail::laurent_dx(at(t, x).L, x); }
  [[nodiscard]] Matrix2 dLdt(double t, double x) const { return detail::laurent(at(t, x).dLdt, x); }
  [[nodiscard]] Matrix2 B(double t, double x) const { return detail::laurent(at(t, x).B, x); }
  [[nodiscard]] Matrix2 dBdx(double t, double x) const { return detail::laurent_dx(at(t, x).B, x); }

  struct Snapshot {
    Matrix2 L, dLdx, dLdt, B, dBdx;
  };

  // Everything at one point from a single coefficient evaluation.
  [[nodiscard]] Snapshot snapshot(double t, double x) const {
    const PoleStructure p = at(t, x);
    return {detail::laurent(p.L, x), detail::laurent_dx(p.L, x), detail::laurent(p.dLdt, x),
            detail::laurent(p.B, x), detail::laurent_dx(p.B, x)};
  }

 private:
  [[nodiscard]] PoleStructure at(double t, double x) const {
    if (guard) guard(t, x);
    if (pole_at_zero && x == 0.0) throw SingularInput("x = 0 is a pole of the pair");
    return coeffs(t);
  }
};

// Field sources: value and t-derivative of each function at t.

struct Thm1Fields {
  Dual q, y, phi;
};

struct Thm2Fields {
  Dual q, qp, s_plus, s_minus;
};

// r and phi with their derivatives (value, derivative).
struct Thm3Fields {
  Dual r, phi;
};

struct SoftFields {
  Dual q, qp, u;
  Dual s_plus{1.0}, s_minus{1.0};
};

using Thm1Source = std::function<Thm1Fields(double)>;
using Thm2Source = std::function<Thm2Fields(double)>;
using Thm3Source = std::function<Thm3Fields(double)>;
using SoftSource = std::function<SoftFields(double)>;

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw SingularInput(what);
}

inline void check_thm1(const Thm1Fields& f, double t) {
  require(t >= piii::kSingularGuard, "t must be positive");
  require(std::abs(f.y.v) >= piii::kSingularGuard, "y vanishes");
  // phi only enters through ratios, so its scale is arbitrary.
  require(f.phi.v != 0.0 && std::isfinite(f.phi.v), "phi vanishes");
}

}  // namespace detail

// Coefficients of the first beta = 2 pair (x^-2 pole in both diagonal
// entries). h_shift perturbs h; it exists for detector checks.
inline PoleStructure thm1a_coeffs(double a, double t_val, const Thm1Fields& f, double h_shift = 0.0) {
  detail::check_thm1(f, t_val);
  const Dual t = Dual::variable(t_val);
  const Dual q2 = f.q * f.q;
  const Dual y = f.y, phi = f.phi;
  const Dual h = (q2 - 1.0) / (t * t * y) - (a - 1.0) + h_shift;
  const Dual c21 = q2 * (q2 - 1.0) / (t * t * t * y * phi);
  detail::DualTerms d;
  d.l(-2) = detail::dmat(q2 / t, t * y * phi, -c21, (1.0 - q2) / t);
  d.l(-1) = detail::dmat(0.0, phi, q2 * h / (t * t * y * phi), 1.0 - a);
  d.l(0) = detail::dmat(0.0, 0.0, 0.0, 1.0);
  const Dual s = q2 / (t * t) - q2 * h / (t * t * t * y);
  d.b(0) = detail::dmat(s, 0.0, 0.0, s);
  d.b(-1) = detail::dmat(q2 / (t * t), y * phi, -c21 / t, (1.0 - q2) / (t * t));
  return d.split();
}

// Second beta = 2 pair (constant L11).
inline PoleStructure thm1b_coeffs(double a, double t_val, const Thm1Fields& f, double h_shift = 0.0) {
  detail::check_thm1(f, t_val);
  const Dual t = Dual::variable(t_val);
  const Dual q2 = f.q * f.q;
  const Dual y = f.y, phi = f.phi;
  const Dual h = (q2 - 1.0) / (t * t * y) + a + h_shift;
  detail::DualTerms d;
  d.l(0) = detail::dmat(q2, -t * t * y * phi, q2 * (q2 - 1.0) / (t * t * y * phi), 1.0 - q2);
  d.l(-1) = detail::dmat(0.0, phi, q2 * h / (t * t * y * phi), -a);
  d.l(-2) = detail::dmat(0.0, 0.0, 0.0, 1.0 / t);
  const Dual s = q2 / (t * t) - q2 * h / (t * t * t * y);
  d.b(0) = detail::dmat(s, phi / t, q2 * h / (t * t * t * y * phi), s - a / t);
  d.b(-1) = detail::dmat(0.0, 0.0, 0.0, 1.0 / (t * t));
  return d.split();
}

// The x^0 off-diagonal entries of B carry 1/(4t(q^2-1)), half of the x^-1
// coefficient of L divided by t; with that factor the pair is compatible.
enum class Thm2Form { Compatible, AsDisplayed };

inline PoleStructure thm2_coeffs(double a, double t_val, const Thm2Fields& f,
                                 Thm2Form form = Thm2Form::Compatible, double h_shift = 0.0) {
  detail::require(t_val >= piii::kSingularGuard, "t must be positive");
  detail::require(std::abs(f.q.v * f.q.v - 1.0) >= piii::kSingularGuard, "q^2 = 1");
  const Dual t = Dual::variable(t_val);
  const Dual q = f.q, qp = f.qp, sp = f.s_plus, sm = f.s_minus;
  const Dual d = q * q - 1.0;
  const Dual tq = 2.0 * t * qp;
  const Dual h0 =
      (-(tq * tq - a * a) / (4.0 * d) + q * q / t + a * (a - 2.0) / 4.0) / (2.0 * t) + h_shift;
  const Dual up = (tq + a) * sp / (2.0 * d);
  const Dual lo = -(tq - a) * sm / (2.0 * d);
  detail::DualTerms m;
  m.l(-2) = detail::dmat((1.0 + q) / (2.0 * t), sp / (2.0 * t), sm / (2.0 * t), (1.0 - q) / (2.0 * t));
  m.l(-1) = detail::dmat(-a / 2.0, up, lo, -a / 2.0);
  m.l(0) = detail::dmat((1.0 - q) / 2.0, sp / 2.0, sm / 2.0, (1.0 + q) / 2.0);
  const Dual factor = form == Thm2Form::Compatible ? 1.0 / (2.0 * t) : 1.0 / t;
  m.b(0) = detail::dmat(h0, up * factor, lo * factor, h0);
  const Dual t2 = t * t;
  m.b(-1) = detail::dmat((1.0 + q) / (2.0 * t2), sp / (2.0 * t2), sm / (2.0 * t2), (1.0 - q) / (2.0 * t2));
  return m.split();
}

// Two-function family; r' and phi' enter B.
inline PoleStructure thm3_coeffs(double kappa, double t_val, const Thm3Fields& f) {
  detail::require(t_val >= piii::kSingularGuard, "t must be positive");
  detail::require(std::abs(f.phi.v) >= piii::kSingularGuard, "phi vanishes");
  if (!(kappa > 0)) throw DomainError("kappa must be positive");
  const Dual t = Dual::variable(t_val);
  const Dual r = f.r, phi = f.phi;
  const DMat core = detail::dmat((1.0 + r) / 2.0, phi, -(r * r - 1.0) / (4.0 * phi), (1.0 - r) / 2.0);
  detail::DualTerms d;
  d.l(-2) = detail::scaled(core, 1.0 / t);
  d.b(-1) = detail::scaled(core, 1.0 / (t * t));
  d.b(0) = detail::scaled(core, 1.0 / (kappa * t * t)) +
           detail::dmat(0.0, 0.0, Dual(-f.r.d / (2.0 * phi.v)), Dual(-f.phi.d / phi.v));
  return d.split();
}

inline PoleStructure soft_thm4_coeffs(double t_val, const SoftFields& f) {
  (void)t_val;
  const Dual q = f.q, qp = f.qp, u = f.u;
  const Dual t = Dual::variable(t_val);
  detail::DualTerms d;
  d.l(0) = detail::dmat(q * q, -qp, qp, -t - q * q);
  d.l(1) = detail::dmat(0.0, -q, -q, 0.0);
  d.l(2) = detail::dmat(0.0, 0.0, 0.0, 1.0);
  d.b(0) = detail::dmat(u, q, q, u);
  d.b(1) = detail::dmat(0.0, 0.0, 0.0, -1.0);
  return d.split();
}

inline PoleStructure soft_thm5_coeffs(double t_val, const SoftFields& f) {
  const Dual q = f.q, qp = f.qp, u = f.u, sp = f.s_plus, sm = f.s_minus;
  const Dual t = Dual::variable(t_val);
  detail::DualTerms d;
  d.l(2) = detail::dmat(0.5, sp / 2.0, sm / 2.0, 0.5);
  d.l(1) = detail::dmat(-q, 0.0, 0.0, q);
  d.l(0) = detail::dmat(-t / 2.0, (-t / 2.0 - qp - q * q) * sp, (-t / 2.0 + qp - q * q) * sm, -t / 2.0);
  d.b(1) = detail::dmat(-0.5, -sp / 2.0, -sm / 2.0, -0.5);
  d.b(0) = detail::dmat((u + q) / 2.0, 0.0, 0.0, (u - q) / 2.0);
  return d.split();
}

// Scale exponents of the soft thm5 limit: L ~ alpha^{-2/3}, B ~ alpha^{8/3}.
inline constexpr double kThm5LExponent = -2.0 / 3.0;
inline constexpr double kThm5BExponent = 8.0 / 3.0;

inline LaxAssembly assemble_thm1a(double a, Thm1Source src, double h_shift = 0.0) {
  return {"thm1a", [a, src = std::move(src), h_shift](double t) {
            return thm1a_coeffs(a, t, src(t), h_shift);
          }, {}};
}

inline LaxAssembly assemble_thm1b(double a, Thm1Source src, double h_shift = 0.0) {
  return {"thm1b", [a, src = std::move(src), h_shift](double t) {
            return thm1b_coeffs(a, t, src(t), h_shift);
          }, {}};
}

inline LaxAssembly assemble_thm2(double a, Thm2Source src, Thm2Form form = Thm2Form::Compatible,
                                 double h_shift = 0.0) {
  return {"thm2", [a, src = std::move(src), form, h_shift](double t) {
            return thm2_coeffs(a, t, src(t), form, h_shift);
          }, {}};
}

inline LaxAssembly assemble_thm3(double kappa, Thm3Source src) {
  return {"thm3", [kappa, src = std::move(src)](double t) { return thm3_coeffs(kappa, t, src(t)); },
          {}};
}

inline LaxAssembly assemble_soft_thm4(SoftSource src) {
  return {"thm4", [src = std::move(src)](double t) { return soft_thm4_coeffs(t, src(t)); }, {}, false};
}

inline LaxAssembly assemble_soft_thm5(SoftSource src, double product_tol = 1e-10) {
  return {"thm5", [src = std::move(src), product_tol](double t) {
            const SoftFields f = src(t);
            if (!(std::abs(f.s_plus.v * f.s_minus.v - 1.0) <= product_tol)) {
              throw ConstraintViolated("S+ S- = " + std::to_string(f.s_plus.v * f.s_minus.v) +
                                       " differs from 1");
            }
            return soft_thm5_coeffs(t, f);
          }, {}, false};
}

// Sources built from integrated trajectories. Values come from dense output;
// derivatives from the governing right-hand sides at those values.

// Trajectory state (q, y, phi) of the coupled system.
inline Thm1Source thm1_source(const piii::Params& p, num::Trajectory traj) {
  return [p, traj = std::move(traj)](double t) {
    const num::State s = traj.state_at(t);
    auto [qp, yp] = piii::coupled_rhs(p, {t, s[0], s[1]});
    return Thm1Fields{{s[0], qp}, {s[1], yp}, {s[2], s[1] * s[2]}};
  };
}

// Trajectory state (q, q', S+, S-) of the Tracy-Widom-type system.
inline Thm2Source thm2_source(double a, num::Trajectory traj) {
  return [a, traj = std::move(traj)](double t) {
    const num::State s = traj.state_at(t);
    const double qpp = piii::tw_rhs(a, t, s[0], s[1]);
    auto [sp, sm] = piii::spm_rhs(a, t, s[0], s[1], {t, s[2], s[3]});
    return Thm2Fields{{s[0], s[1]}, {s[1], qpp}, {s[2], sp}, {s[3], sm}};
  };
}

// Soft data at (q, q') with q'' = t q + 2 q^3, u' = -q^2, S+' = -q S+, S- = 1/S+.
inline SoftFields soft_fields(double t, double q, double qp, double s_plus = 1.0) {
  const double u = pii::u_of(t, q, qp);
  return {{q, qp}, {qp, pii::pii_rhs(t, q)}, {u, -q * q}, {s_plus, -q * s_plus},
          {1.0 / s_plus, q / s_plus}};
}

inline SoftSource soft_source(const pii::HMSolution& hm) {
  return [hm](double t) {
    const pii::HMPoint p = hm.at(t);
    return soft_fields(t, p.q, p.qp);
  };
}

// S+ from S+' = -q S+ tabulated alongside the HM table, normalized S+(t0) = s0.
// S- is taken as 1/S+ so the product constraint holds exactly.
inline num::Trajectory spm_soft_table(const pii::HMSolution& hm, double t0, double s0,
                                      const num::Tolerances& tol = {1e-12, 1e-12, 1'000'000, 1e-5}) {
  auto rhs = [&hm](double t, const num::State& s) { return num::State{-hm.at(t).q * s[0]}; };
  num::Trajectory up = num::integrate_ivp(rhs, t0, num::State{s0}, hm.t_max(), tol);
  num::Trajectory down = num::integrate_ivp(rhs, t0, num::State{s0}, hm.t_min(), tol);
  std::vector<num::TrajectoryNode> nodes(down.nodes().rbegin(), down.nodes().rend());
  nodes.insert(nodes.end(), up.nodes().begin() + 1, up.nodes().end());
  return num::Trajectory(std::move(nodes));
}

inline SoftSource soft_source(const pii::HMSolution& hm, num::Trajectory spm) {
  return [hm, spm = std::move(spm)](double t) {
    const pii::HMPoint p = hm.at(t);
    return soft_fields(t, p.q, p.qp, spm.state_at(t)[0]);
  };
}

// dL/dt - dB/dx - [B, L].
inline Matrix2 zero_curvature_residual(const LaxAssembly& asm_, double t, double x) {
  const auto s = asm_.snapshot(t, x);
  return s.dLdt - s.dBdx - commutator(s.B, s.L);
}

// kappa t B + x^2 (L_x + L^2) + (a x - x^2 - 1/t) L; the first row vanishes
// when the first eigenvector component solves the hard-edge equation.
inline Matrix2 fp_compat_matrix(const LaxAssembly& asm_, double kappa, double a, double t, double x) {
  const auto s = asm_.snapshot(t, x);
  return (kappa * t) * s.B + (x * x) * (s.dLdx + s.L * s.L) + (a * x - x * x - 1.0 / t) * s.L;
}

// kappa B + L_x + L^2 + (t - x^2) L for the soft-edge operator
// kappa d_t + d_xx + (t - x^2) d_x.
inline Matrix2 soft_compat_matrix(const LaxAssembly& asm_, double kappa, double t, double x) {
  const auto s = asm_.snapshot(t, x);
  return kappa * s.B + s.dLdx + s.L * s.L + (t - x * x) * s.L;
}

struct EigvecState {
  double F = 0.0;
  double G = 0.0;
};

struct PathPoint {
  double t;
  double x;
};

// Transports (F, G) along consecutive axis-aligned legs: d_x = L on x-legs,
// d_t = B on t-legs.
inline EigvecState propagate_eigvec(const LaxAssembly& asm_, const std::vector<PathPoint>& path,
                                    EigvecState state0,
                                    const num::Tolerances& tol = {1e-12, 1e-12, 1'000'000, 1e-5}) {
  EigvecState st = state0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    const PathPoint p0 = path[i - 1], p1 = path[i];
    const bool x_leg = p0.t == p1.t;
    const bool t_leg = p0.x == p1.x;
    if (x_leg && t_leg) continue;
    if (!x_leg && !t_leg) throw DomainError("path legs must be axis-aligned");
    num::IvpOptions opts;
    opts.record_all = false;
    num::Trajectory tr;
    if (x_leg) {
      auto rhs = [&](double x, const num::State& v) {
        const Matrix2 L = asm_.L(p0.t, x);
        return num::State{L.a11 * v[0] + L.a12 * v[1], L.a21 * v[0] + L.a22 * v[1]};
      };
      tr = num::integrate_ivp(rhs, p0.x, num::State{st.F, st.G}, p1.x, tol, opts);
    } else {
      auto rhs = [&](double t, const num::State& v) {
        const Matrix2 B = asm_.B(t, p0.x);
        return num::State{B.a11 * v[0] + B.a12 * v[1], B.a21 * v[0] + B.a22 * v[1]};
      };
      tr = num::integrate_ivp(rhs, p0.t, num::State{st.F, st.G}, p1.t, tol, opts);
    }
    st = {tr.back().state[0], tr.back().state[1]};
  }
  return st;
}

// Two staircases between (t0, x0) and (t1, x1): x first then t, and t first
// then x. Returns the larger of the component discrepancies relative to the
// size of the transported vector.
inline double path_discrepancy(const LaxAssembly& asm_, PathPoint from, PathPoint to,
                               EigvecState state0,
                               const num::Tolerances& tol = {1e-12, 1e-12, 1'000'000, 1e-5}) {
  const auto a = propagate_eigvec(asm_, {from, {from.t, to.x}, to}, state0, tol);
  const auto b = propagate_eigvec(asm_, {from, {to.t, from.x}, to}, state0, tol);
  const double scale = std::max({1.0, std::abs(a.F), std::abs(a.G)});
  return std::max(std::abs(a.F - b.F), std::abs(a.G - b.G)) / scale;
}

// {P, Q}^2 - [P, Q]^2 - 4 P^2 Q^2 for antidiagonal P = (0 p+; p- 0),
// Q = (0 q+; q- 0).
inline double antidiag_identity_residual(double p_plus, double p_minus, double q_plus,
                                         double q_minus) {
  const Matrix2 P{0.0, p_plus, p_minus, 0.0};
  const Matrix2 Q{0.0, q_plus, q_minus, 0.0};
  const Matrix2 ac = anticommutator(P, Q);
  const Matrix2 c = commutator(P, Q);
  return norm_max(ac * ac - c * c - 4.0 * (P * P) * (Q * Q));
}

}  // namespace hardedge::lax
