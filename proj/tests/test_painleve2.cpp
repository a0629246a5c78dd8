#include <gtest/gtest.h>

#include <cmath>

#include "hardedge/num/airy.hpp"
#include "hardedge/num/diff.hpp"
#include "hardedge/painleve2.hpp"

using namespace hardedge;
using namespace hardedge::pii;

namespace {

const HMSolution& hm_table() {
  static const HMSolution hm = solve_hastings_mcleod(-8.0, 8.0);
  return hm;
}

}  // namespace

TEST(PiiRhs, Values) {
  EXPECT_EQ(pii_rhs(3.0, 0.0), 0.0);
  EXPECT_EQ(pii_rhs(-2.0, 1.0), 0.0);
  EXPECT_EQ(pii_rhs(1.0, 1.0), 3.0);
  EXPECT_EQ(pii_rhs(1.0, 1.0, -0.5), 2.5);
}

TEST(HastingsMcLeod, KnownValueAtZero) {
  const auto& hm = hm_table();
  EXPECT_NEAR(hm.at(0.0).q, 0.36706, 1e-4);
  // Independent run: tighter tolerance and a farther anchor.
  const auto ref = solve_hastings_mcleod(-4.0, 10.0, {1e-14, 1e-14, 5'000'000, 1e-5});
  EXPECT_NEAR(hm.at(0.0).q, ref.at(0.0).q, 1e-7);
  EXPECT_NEAR(hm.at(0.0).qp, ref.at(0.0).qp, 1e-7);
}

TEST(HastingsMcLeod, RightAsymptote) {
  const auto& hm = hm_table();
  EXPECT_NEAR(hm.at(6.0).q / num::airy_ai(6.0).value, 1.0, 1e-4);
}

TEST(HastingsMcLeod, LeftAsymptote) {
  const auto& hm = hm_table();
  EXPECT_NEAR(hm.at(-8.0).q, 2.0, 0.06);
}

TEST(HastingsMcLeod, AnchorStability) {
  const auto a8 = solve_hastings_mcleod(-6.0, 6.0, {1e-13, 1e-13, 1'000'000, 1e-5}, 8.0);
  const auto a10 = solve_hastings_mcleod(-6.0, 6.0, {1e-13, 1e-13, 1'000'000, 1e-5}, 10.0);
  EXPECT_NEAR(a8.at(0.0).q, a10.at(0.0).q, 1e-6);
}

TEST(HastingsMcLeod, TableInvariants) {
  const auto& hm = hm_table();
  EXPECT_LT(u_check(hm), 1e-6);
  double worst = 0;
  for (std::size_t i = 0; i < hm.grid.size(); ++i) {
    EXPECT_GT(hm.q[i], 0.0);
    if (i > 0) EXPECT_LE(hm.u[i], hm.u[i - 1] + 1e-12);
  }
  for (double t = -7.5; t < 7.5; t += 0.25) {
    const double qpp = num::fd_partial([&](double s) { return hm.at(s).qp; }, t, 1e-4);
    worst = std::max(worst, std::abs(qpp - pii_rhs(t, hm.at(t).q)));
  }
  EXPECT_LT(worst, 1e-6);
  EXPECT_THROW(hm.at(9.0), RangeError);
}

TEST(HastingsMcLeod, Errors) {
  EXPECT_THROW(solve_hastings_mcleod(1.0, 8.0), DomainError);
  EXPECT_THROW(solve_hastings_mcleod(-2.0, 4.0), DomainError);
}

TEST(UCheck, SyntheticTables) {
  HMSolution z;
  for (int i = 0; i <= 10; ++i) {
    z.grid.push_back(i * 0.1);
    z.q.push_back(0.0);
    z.qp.push_back(0.0);
    z.u.push_back(0.0);
  }
  EXPECT_EQ(u_check(z), 0.0);
  z.u[5] += 0.01;
  EXPECT_GE(u_check(z), 0.01 / (2 * 0.1) - 1e-12);
}

TEST(P34, Residual) {
  EXPECT_EQ(p34_residual(1.3, 0.0, 0.0, 0.0), 0.0);
  EXPECT_GT(std::abs(p34_residual(0.5, 1.0, 0.3, -0.2)), 1e-3);
  const auto& hm = hm_table();
  double worst = 0;
  for (double t = -7.0; t <= 7.0; t += 0.5) {
    const auto p = hm.at(t);
    worst = std::max(worst, std::abs(p34_residual_from_q(t, p.q, p.qp)));
  }
  EXPECT_LT(worst, 1e-6);
}

TEST(Gambier, ZeroSolutionRiccati) {
  // q0 = 0 collapses the relation to w' + eps w^2 + eps t/2 = 0.
  for (int eps : {1, -1}) {
    const auto phi = gambier_zero_phi(-3.0, 3.0, 1.0, 0.2);
    double worst = 0;
    for (double t = -2.9; t < 2.9; t += 0.1) {
      auto [s, d] = phi.eval(t);
      const double w = eps * s[1] / s[0];
      // w' = eps (phi''/phi - (phi'/phi)^2).
      const double wp = eps * (-0.5 * t - (s[1] / s[0]) * (s[1] / s[0]));
      worst = std::max(worst, std::abs(gambier_residual(t, {0.0, 0.0}, w, wp, eps)));
    }
    EXPECT_LT(worst, 1e-8);
  }
}

TEST(Gambier, ConstructThenVerify) {
  const auto& hm = hm_table();
  for (int eps : {1, -1}) {
    const auto w = gambier_construct(hm, eps, -4.0, 4.0);
    double worst_rel = 0, worst_pii = 0;
    for (double t = -3.9; t < 3.9; t += 0.1) {
      worst_rel = std::max(worst_rel, std::abs(gambier_residual(t, hm, w, eps)));
      const auto p = hm.at(gambier_arg(t));
      const double wv = w.state_at(t)[0];
      const double wpp = gambier_w_second(t, {p.q, p.qp}, wv, eps);
      worst_pii = std::max(worst_pii, std::abs(pii_nu_residual(t, wv, wpp, -0.5 * eps)));
    }
    EXPECT_LT(worst_rel, 1e-6) << "eps = " << eps;
    EXPECT_LT(worst_pii, 1e-6) << "eps = " << eps;
    // The parameter is -eps/2: the opposite sign leaves a residual of 1.
    const auto p = hm.at(gambier_arg(0.5));
    const double wv = w.state_at(0.5)[0];
    EXPECT_NEAR(std::abs(pii_nu_residual(0.5, wv, gambier_w_second(0.5, {p.q, p.qp}, wv, eps),
                                         0.5 * eps)),
                1.0, 1e-6);
  }
}

TEST(Gambier, WrongSeedDetected) {
  const auto& hm = hm_table();
  const auto p = hm.at(gambier_arg(0.0));
  const double w0 = -p.qp / (kCbrt2 * p.q) + 0.05;
  EXPECT_GT(std::abs(pii_nu_residual(0.0, w0, gambier_w_second(0.0, {p.q, p.qp}, w0, 1), -0.5)),
            1e-3);
  EXPECT_THROW(gambier_residual(0.0, {0.1, 0.0}, 0.0, 0.0, 2), DomainError);
  const auto w = gambier_construct(hm, 1, -1.0, 1.0);
  EXPECT_THROW(gambier_residual(3.0, hm, w, 1), RangeError);
}
