#pragma once

// The acceptance suite: eleven property checks with pinned tolerances, shared
// by the acceptance test binary and `hardedge verify-all`.

#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hardedge/fp.hpp"
#include "hardedge/lax.hpp"
#include "hardedge/limits.hpp"
#include "hardedge/mc.hpp"
#include "hardedge/mc_dense.hpp"
#include "hardedge/num/airy.hpp"
#include "hardedge/num/diff.hpp"
#include "hardedge/painleve2.hpp"
#include "hardedge/painleve3.hpp"

namespace hardedge::acceptance {

using Json = nlohmann::ordered_json;

struct Result {
  int id = 0;
  std::string title;
  bool pass = false;
  Json metrics = Json::object();

  [[nodiscard]] std::string line() const {
    std::ostringstream os;
    os << (pass ? "PASS" : "FAIL") << "  [" << id << "] " << title << "  " << metrics.dump();
    return os.str();
  }
};

namespace tol {
inline constexpr double kThm3ZeroCurvature = 1e-10;
inline constexpr double kThm3Compat = 1e-9;
inline constexpr double kThm3Detector = 1e-3;
inline constexpr double kFpSup = 1e-3;
inline constexpr double kFpRatio = 1.8;
inline constexpr double kGumbel = 1e-12;
inline constexpr double kBeta2 = 1e-6;
inline constexpr double kProduct = 1e-8;
inline constexpr double kBeta4 = 1e-6;
inline constexpr double kHmValue = 1e-4;
inline constexpr double kHmAiry = 1e-4;
inline constexpr double kHm = 1e-6;
inline constexpr double kSoft = 1e-6;
inline constexpr double kLimitFixture = 1e-6;
inline constexpr double kPath = 1e-5;
inline constexpr double kKs = 0.03;
inline constexpr double kAntidiag = 1e-10;
}  // namespace tol

inline constexpr double kHmValueAtZero = 0.36706;

namespace detail {

inline const num::Tolerances kTight{1e-12, 1e-12, 2'000'000, 1e-5};

inline std::vector<double> grid(double a, double b, int n) { return num::linspace(a, b, static_cast<std::size_t>(n)); }

inline double sup_zero_curvature(const lax::LaxAssembly& A, const std::vector<double>& ts,
                                 const std::vector<double>& xs) {
  double w = 0;
  for (double t : ts) {
    for (double x : xs) w = std::max(w, norm_max(lax::zero_curvature_residual(A, t, x)));
  }
  return w;
}

inline double sup_fp_top(const lax::LaxAssembly& A, double kappa, double a,
                         const std::vector<double>& ts, const std::vector<double>& xs) {
  double w = 0;
  for (double t : ts) {
    for (double x : xs) w = std::max(w, top_row_norm(lax::fp_compat_matrix(A, kappa, a, t, x)));
  }
  return w;
}

inline double sup_soft_top(const lax::LaxAssembly& A, double kappa, const std::vector<double>& ts,
                           const std::vector<double>& xs) {
  double w = 0;
  for (double t : ts) {
    for (double x : xs) w = std::max(w, top_row_norm(lax::soft_compat_matrix(A, kappa, t, x)));
  }
  return w;
}

// Smooth random (r, phi) with analytic derivatives; phi never vanishes.
struct SmoothPair {
  double c0, c1, w, p, d0, d1;

  [[nodiscard]] lax::Thm3Fields operator()(double t) const {
    const double r = c0 + c1 * std::sin(w * t + p), rp = c1 * w * std::cos(w * t + p);
    const double e = d0 * t + d1 * std::cos(t);
    const double phi = std::exp(e), phip = (d0 - d1 * std::sin(t)) * phi;
    return {{r, rp}, {phi, phip}};
  }
};

// Assemblies reused by the path-independence check.
struct Registry {
  std::vector<std::pair<std::string, lax::LaxAssembly>> hard;  // (t, x) window [0.5, 2]^2
  std::vector<std::pair<std::string, lax::LaxAssembly>> soft;  // window [-2, 2]^2
};

inline Registry& registry() {
  static Registry r;
  return r;
}

inline const pii::HMSolution& hm() {
  static const pii::HMSolution h = pii::solve_hastings_mcleod(-8.0, 8.0);
  return h;
}

}  // namespace detail

inline Result criterion_thm3() {
  Result res{1, "two-function pair: zero curvature and compatibility on kappa = 2 - a"};
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const auto ts = detail::grid(0.5, 2.0, 20), xs = detail::grid(0.5, 2.0, 20);
  double zc = 0, on = 0, off = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 10; ++k) {
    const detail::SmoothPair f{U(rng), U(rng), 1.0 + U(rng), 3 * U(rng), U(rng), U(rng)};
    const double kappa = 1.0 + 0.8 * U(rng), a = 2.0 - kappa;
    const auto A = lax::assemble_thm3(kappa, f);
    zc = std::max(zc, detail::sup_zero_curvature(A, ts, xs));
    on = std::max(on, detail::sup_fp_top(A, kappa, a, ts, xs));
    const auto Aoff = lax::assemble_thm3(kappa + 0.1, f);
    off = std::min(off, detail::sup_fp_top(Aoff, kappa + 0.1, a, ts, xs));
    if (k < 2) detail::registry().hard.emplace_back("thm3#" + std::to_string(k), A);
  }
  res.metrics = {{"zero_curvature", zc}, {"compat_on_line", on}, {"compat_off_line_min", off}};
  res.pass = zc <= tol::kThm3ZeroCurvature && on <= tol::kThm3Compat && off >= tol::kThm3Detector;
  return res;
}

inline Result criterion_fp() {
  Result res{2, "FP solver against the closed form at (kappa, a) = (1, 1)"};
  auto closed = [](double t, double x) { return fp::gumbel_eval(1.0, t, x); };
  const auto coarse = fp::solve_fp(1.0, 1.0, fp::FPGrid::geometric(200, 200));
  const auto fine = fp::solve_fp(1.0, 1.0, fp::FPGrid::geometric(400, 400));
  const double e1 = fp::compare_fields(coarse, closed).sup;
  const double e2 = fp::compare_fields(fine, closed).sup;
  res.metrics = {{"sup_200", e1}, {"sup_400", e2}, {"ratio", e1 / e2},
                 {"right_boundary", coarse.right_boundary()}};
  res.pass = e1 <= tol::kFpSup && e1 / e2 >= tol::kFpRatio;
  return res;
}

inline Result criterion_gumbel() {
  Result res{3, "closed-form auxiliary identities at 100 random points"};
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> T(0.2, 5.0), X(0.2, 5.0), K(0.3, 3.0);
  double w[4] = {0, 0, 0, 0};
  for (int i = 0; i < 100; ++i) {
    const auto r = fp::gumbel_aux_residuals(K(rng), T(rng), X(rng));
    const double v[4] = {r.fp, r.transport, r.second, r.proportionality};
    for (int k = 0; k < 4; ++k) w[k] = std::max(w[k], std::abs(v[k]));
  }
  res.metrics = {{"fp", w[0]}, {"transport", w[1]}, {"second", w[2]}, {"proportionality", w[3]}};
  res.pass = std::max({w[0], w[1], w[2], w[3]}) <= tol::kGumbel;
  return res;
}

inline Result criterion_beta2() {
  Result res{4, "beta = 2 pairs along PIII trajectories on t in [0.5, 2]"};
  const auto ts = detail::grid(0.55, 1.95, 15), xs = detail::grid(0.3, 3.0, 10);
  double piii_w = 0, zc = 0, compat = 0, cross = 0;
  // Seeds at t = 0.5 chosen so that the trajectory (and for family B its
  // partner) stays pole-free up to t = 2.
  struct Seed {
    double a;
    piii::Family fam;
    double q0, y0;
  };
  const Seed seeds[] = {{-0.5, piii::Family::A, 0.1, 2.0}, {-0.5, piii::Family::B, 0.3, -1.5},
                        {0.3, piii::Family::A, 0.1, 2.0},  {0.3, piii::Family::B, 0.5, -1.5},
                        {1.7, piii::Family::A, 0.1, 2.0},  {1.7, piii::Family::B, 0.3, 3.5}};
  for (const auto& [a, fam, q0, y0] : seeds) {
    {
      const piii::Params p{a, 1.0, {fam, -1}};
      // The difference stencil lands on integrator nodes, so no interpolation
      // error enters y''. Richardson on two central differences: O(h^4).
      const double h = 5e-4;
      num::IvpOptions opts;
      for (double t : ts) opts.stops.insert(opts.stops.end(), {t - 2 * h, t - h, t, t + h, t + 2 * h});
      const auto tr = num::integrate_ivp(piii::coupled_system(p), 0.5, num::State{q0, y0, 1.0}, 2.0,
                                         detail::kTight, opts);
      auto yprime = [&](double t) {
        const auto s = tr[tr.find_node(t)].state;
        return piii::coupled_rhs(p, {t, s[0], s[1]}).second;
      };
      for (double t : ts) {
        const auto s = tr[tr.find_node(t)].state;
        const double ypp = (4 * num::fd_partial(yprime, t, h) - num::fd_partial(yprime, t, 2 * h)) / 3;
        piii_w = std::max(piii_w, std::abs(ypp - piii::piii_rhs(p, t, s[1], yprime(t))));
      }
      const auto src = lax::thm1_source(p, tr);
      const auto A = fam == piii::Family::A ? lax::assemble_thm1a(a, src) : lax::assemble_thm1b(a, src);
      zc = std::max(zc, detail::sup_zero_curvature(A, ts, xs));
      compat = std::max(compat, detail::sup_fp_top(A, 1.0, a, ts, xs));
      if (a == 0.3) detail::registry().hard.emplace_back(A.name, A);
      if (fam == piii::Family::B) {
        // Partner at 1 - a integrated independently from mapped initial data.
        const auto s0 = tr.front().state;
        auto [q2p, yp0] = piii::cross_a_partner(0.5, a, s0[0], s0[1]);
        const piii::Params pp{1.0 - a, 1.0, {piii::Family::B, -1}};
        const auto partner = num::integrate_ivp(piii::coupled_system(pp), 0.5,
                                                num::State{std::sqrt(q2p), yp0, 1.0}, 2.0, detail::kTight);
        for (double t : ts) {
          const auto s = tr.state_at(t), w = partner.state_at(t);
          auto [r1, r2] = piii::cross_identity_residuals(t, s[0], s[1], w[0], w[1]);
          cross = std::max({cross, std::abs(r1), std::abs(r2)});
        }
      }
    }
  }
  res.metrics = {{"piii", piii_w}, {"zero_curvature", zc}, {"compat_kappa1", compat}, {"cross_parameter", cross}};
  res.pass = std::max({piii_w, zc, compat, cross}) <= tol::kBeta2;
  return res;
}

inline Result criterion_beta4() {
  Result res{5, "beta = 4 pair along Tracy-Widom-type trajectories"};
  const auto ts = detail::grid(0.55, 1.95, 15), xs = detail::grid(0.3, 3.0, 10);
  double prod = 0, zc = 0, compat = 0;
  for (double a : {0.0, 0.5, 1.7}) {
    const double q0 = 0.4, s = std::sqrt(1 - q0 * q0);
    const auto tr = num::integrate_ivp(piii::tw_system(a), 0.5, num::State{q0, 0.1, 1.3 * s, s / 1.3}, 2.0,
                                       detail::kTight);
    for (const auto& n : tr) {
      prod = std::max(prod, std::abs(n.state[2] * n.state[3] - (1 - n.state[0] * n.state[0])));
    }
    const auto A = lax::assemble_thm2(a, lax::thm2_source(a, tr));
    zc = std::max(zc, detail::sup_zero_curvature(A, ts, xs));
    compat = std::max(compat, detail::sup_fp_top(A, 2.0, a, ts, xs));
    if (a == 0.5) detail::registry().hard.emplace_back(A.name, A);
  }
  res.metrics = {{"product_drift", prod}, {"zero_curvature", zc}, {"compat_kappa2", compat}};
  res.pass = prod <= tol::kProduct && std::max(zc, compat) <= tol::kBeta4;
  return res;
}

inline Result criterion_hm() {
  Result res{6, "Hastings-McLeod table and its identities"};
  const auto& hm = detail::hm();
  const auto oracle = pii::solve_hastings_mcleod(-4.0, 10.0, {1e-14, 1e-14, 5'000'000, 1e-5});
  const double q0 = hm.at(0.0).q;
  const double airy_ratio = hm.at(6.0).q / num::airy_ai(6.0).value;
  const double u = pii::u_check(hm);
  double p34 = 0, gamb = 0;
  for (double t = -7.5; t <= 7.5; t += 0.25) {
    const auto p = hm.at(t);
    p34 = std::max(p34, std::abs(pii::p34_residual_from_q(t, p.q, p.qp)));
  }
  for (int eps : {1, -1}) {
    const auto w = pii::gambier_construct(hm, eps, -4.0, 4.0);
    for (double t = -3.9; t < 3.9; t += 0.1) gamb = std::max(gamb, std::abs(pii::gambier_residual(t, hm, w, eps)));
  }
  res.metrics = {{"q0", q0}, {"q0_oracle", oracle.at(0.0).q}, {"q6_over_ai6", airy_ratio},
                 {"u_check", u}, {"p34", p34}, {"gambier", gamb}};
  res.pass = std::abs(q0 - kHmValueAtZero) <= tol::kHmValue &&
             std::abs(oracle.at(0.0).q - kHmValueAtZero) <= tol::kHmValue &&
             std::abs(airy_ratio - 1.0) <= tol::kHmAiry && std::max({u, p34, gamb}) <= tol::kHm;
  return res;
}

inline Result criterion_soft() {
  Result res{7, "soft-edge pairs on t, x in [-2, 2]"};
  const auto& hm = detail::hm();
  const auto ts = detail::grid(-2.0, 2.0, 17), xs = detail::grid(-2.0, 2.0, 17);
  const auto A4 = lax::assemble_soft_thm4(lax::soft_source(hm));
  const auto A5 = lax::assemble_soft_thm5(lax::soft_source(hm, lax::spm_soft_table(hm, 0.0, 1.0)));
  const double z4 = detail::sup_zero_curvature(A4, ts, xs), z5 = detail::sup_zero_curvature(A5, ts, xs);
  const double c4 = detail::sup_soft_top(A4, 1.0, ts, xs), c5 = detail::sup_soft_top(A5, 2.0, ts, xs);
  detail::registry().soft.emplace_back(A4.name, A4);
  detail::registry().soft.emplace_back(A5.name, A5);
  res.metrics = {{"thm4_zero_curvature", z4}, {"thm4_compat_kappa1", c4},
                 {"thm5_zero_curvature", z5}, {"thm5_compat_kappa2", c5}};
  res.pass = std::max({z4, z5, c4, c5}) <= tol::kSoft;
  return res;
}

inline Result criterion_limits() {
  Result res{8, "hard-to-soft sweep over alpha in {1e2, 1e3, 1e4}"};
  const limits::Window w;
  const auto hm = limits::soft_reference(w);
  std::vector<limits::SweepRecord> recs;
  for (double a : {1e2, 1e3, 1e4}) recs.push_back(limits::sweep_point(a, hm, w));
  const double fixture_ode = limits::limit_ode_residual_soft(hm, w);
  double fixture_pair = 0;
  for (const auto& soft : {lax::assemble_soft_thm4(lax::soft_source(hm)),
                           lax::assemble_soft_thm5(lax::soft_source(hm, lax::spm_soft_table(hm, 0.0, 1.0)))}) {
    fixture_pair = std::max(fixture_pair,
                            limits::window_distance([&](double t, double x) {
                              return std::pair{soft.L(t, x), soft.B(t, x)};
                            }, soft, w).max());
  }
  const Json j = limits::sweep_json(recs, w);
  res.metrics = {{"records", j["records"]}, {"decreasing", j["decreasing"]},
                 {"fixture_ode", fixture_ode}, {"fixture_pair", fixture_pair}};
  res.pass = j["decreasing"]["ode_residual"].get<bool>() && j["decreasing"]["thm4_distance"].get<bool>() &&
             j["decreasing"]["thm5_distance"].get<bool>() &&
             std::max(fixture_ode, fixture_pair) <= tol::kLimitFixture;
  return res;
}

// Needs criteria 1, 4, 5 and 7 to have registered their assemblies.
inline Result criterion_paths() {
  Result res{9, "two-path transport discrepancy for every assembly"};
  double worst = 0;
  Json per = Json::object();
  for (const auto& [name, A] : detail::registry().hard) {
    const double d = lax::path_discrepancy(A, {0.6, 0.6}, {1.9, 1.9}, {1.0, 0.5});
    per[name] = d;
    worst = std::max(worst, d);
  }
  for (const auto& [name, A] : detail::registry().soft) {
    const double d = lax::path_discrepancy(A, {-1.5, -1.0}, {1.5, 1.5}, {1.0, 0.5});
    per[name] = d;
    worst = std::max(worst, d);
  }
  res.metrics = {{"worst", worst}, {"assemblies", per}};
  res.pass = !per.empty() && worst <= tol::kPath;
  return res;
}

inline Result criterion_mc() {
  Result res{10, "tridiagonal sampler against the dense oracle (beta = 2, a = 0, n = 6)"};
  const mc::EnsembleSpec spec{6, 2.0, 0.0, 2024};
  const auto tri = mc::sample_smallest(spec, 10000);
  const auto dense = mc::sample_smallest_dense({6, 2.0, 0.0, 4048}, 10000);
  const double ks = mc::ks_distance(mc::empirical_cdf(tri), mc::empirical_cdf(dense));
  bool positive = true;
  for (double v : tri) positive = positive && v > 0;
  for (double v : dense) positive = positive && v > 0;
  const bool repro = mc::sample_smallest(spec, 10000) == tri;
  res.metrics = {{"ks", ks}, {"all_positive", positive}, {"reproducible", repro}};
  res.pass = ks <= tol::kKs && positive && repro;
  return res;
}

inline Result criterion_antidiag() {
  Result res{11, "anticommutator identity for antidiagonal pairs"};
  std::mt19937_64 rng(11);
  std::normal_distribution<double> N;
  double w = 0;
  for (int i = 0; i < 1000; ++i) {
    w = std::max(w, lax::antidiag_identity_residual(N(rng), N(rng), N(rng), N(rng)));
  }
  res.metrics = {{"worst", w}};
  res.pass = w <= tol::kAntidiag;
  return res;
}

// Runs every criterion in order; an exception counts as a failure.
inline std::vector<Result> run_all(const std::function<void(const Result&)>& on_result = {}) {
  detail::registry() = {};
  const std::vector<std::function<Result()>> all{
      criterion_thm3, criterion_fp,   criterion_gumbel, criterion_beta2, criterion_beta4, criterion_hm,
      criterion_soft, criterion_limits, criterion_paths, criterion_mc,  criterion_antidiag};
  std::vector<Result> out;
  int id = 1;
  for (const auto& c : all) {
    Result r;
    try {
      r = c();
    } catch (const std::exception& e) {
      r = {id, "criterion " + std::to_string(id), false, {{"error", e.what()}}};
    }
    if (on_result) on_result(r);
    out.push_back(std::move(r));
    ++id;
  }
  return out;
}

}  // namespace hardedge::acceptance
