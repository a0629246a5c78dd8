#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hardedge/fp.hpp"
#include "hardedge/lax.hpp"

using namespace hardedge;
using namespace hardedge::lax;
using num::State;

namespace {

const num::Tolerances kTight{1e-12, 1e-12, 1'000'000, 1e-5};

num::Trajectory coupled(const piii::Params& p, double q0 = 0.4, double y0 = -0.8) {
  return num::integrate_ivp(piii::coupled_system(p), 1.0, State{q0, y0, 1.0}, 2.0, kTight);
}

num::Trajectory tw(double a, double q0 = 0.4, double qp0 = 0.1, double split = 1.3) {
  const double s = std::sqrt(1 - q0 * q0);
  return num::integrate_ivp(piii::tw_system(a), 1.0, State{q0, qp0, s * split, s / split}, 2.0, kTight);
}

const pii::HMSolution& hm() {
  static const pii::HMSolution h = pii::solve_hastings_mcleod(-3.0, 6.0);
  return h;
}

// Largest residual over a (t, x) patch.
template <class F>
double sweep(F f, double t0, double t1, double x0, double x1, int n = 6) {
  double worst = 0;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      const double t = t0 + (t1 - t0) * i / n, x = x0 + (x1 - x0) * j / n;
      worst = std::max(worst, f(t, x));
    }
  }
  return worst;
}

double zc(const LaxAssembly& A, double t0, double t1, double x0, double x1) {
  return sweep([&](double t, double x) { return norm_max(zero_curvature_residual(A, t, x)); },
               t0, t1, x0, x1);
}

double fp_top(const LaxAssembly& A, double kappa, double a, double t0, double t1) {
  return sweep([&](double t, double x) { return top_row_norm(fp_compat_matrix(A, kappa, a, t, x)); },
               t0, t1, 0.3, 3.0);
}

Thm1Fields fixed1(double q, double y, double phi) { return {{q, 0.0}, {y, 0.0}, {phi, 0.0}}; }

}  // namespace

TEST(Thm1a, SpotValues) {
  const auto p = thm1a_coeffs(0.0, 1.0, fixed1(1.0, -1.0, 1.0));
  EXPECT_DOUBLE_EQ(p.L_at(-2).a12, -1.0);
  EXPECT_DOUBLE_EQ(p.L_at(-2).trace(), 1.0);
  EXPECT_DOUBLE_EQ(p.L_at(-1).trace(), 1.0);
  // B has a scalar x^0 part.
  EXPECT_EQ(p.B_at(0).a12, 0.0);
  EXPECT_EQ(p.B_at(0).a11, p.B_at(0).a22);
  const auto p2 = thm1a_coeffs(0.3, 2.0, fixed1(0.5, 0.7, 1.1));
  EXPECT_NEAR(p2.L_at(-2).trace(), 0.5, 1e-15);
  // Rank one pole: det of the x^-2 coefficient vanishes.
  EXPECT_NEAR(p2.L_at(-2).det(), 0.0, 1e-15);
  EXPECT_THROW(thm1a_coeffs(0.0, 1.0, fixed1(1.0, 0.0, 1.0)), SingularInput);
  EXPECT_THROW(thm1a_coeffs(0.0, 0.0, fixed1(1.0, 1.0, 1.0)), SingularInput);
}

TEST(Thm1b, SpotValues) {
  const auto p = thm1b_coeffs(0.3, 2.0, fixed1(0.5, 0.7, 1.1));
  EXPECT_DOUBLE_EQ(p.L_at(0).trace(), 1.0);
  EXPECT_NEAR(p.L_at(0).det(), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(p.L_at(-2).a22, 0.5);
  EXPECT_EQ(p.L_at(-2).a11, 0.0);
}

TEST(Lax, SingularX) {
  const auto A = assemble_thm1a(0.2, [](double) { return fixed1(0.5, 0.7, 1.1); });
  EXPECT_THROW((void)A.L(1.0, 0.0), SingularInput);
}

class Thm1Trajectory : public ::testing::TestWithParam<double> {};

TEST_P(Thm1Trajectory, ZeroCurvatureAndCompat) {
  const double a = GetParam();
  const piii::Params pa{a, 1.0, {piii::Family::A, -1}};
  const piii::Params pb{a, 1.0, {piii::Family::B, -1}};
  const auto A = assemble_thm1a(a, thm1_source(pa, coupled(pa)));
  const auto B = assemble_thm1b(a, thm1_source(pb, coupled(pb)));
  EXPECT_LT(zc(A, 1.1, 1.9, 0.3, 3.0), 1e-10);
  EXPECT_LT(zc(B, 1.1, 1.9, 0.3, 3.0), 1e-10);
  EXPECT_LT(fp_top(A, 1.0, a, 1.1, 1.9), 1e-10);
  EXPECT_LT(fp_top(B, 1.0, a, 1.1, 1.9), 1e-10);
  // Perturbed h breaks compatibility.
  const auto A1 = assemble_thm1a(a, thm1_source(pa, coupled(pa)), 0.1);
  const auto B1 = assemble_thm1b(a, thm1_source(pb, coupled(pb)), 0.1);
  EXPECT_GT(zc(A1, 1.1, 1.9, 0.3, 3.0), 1e-3);
  EXPECT_GT(zc(B1, 1.1, 1.9, 0.3, 3.0), 1e-3);
}

INSTANTIATE_TEST_SUITE_P(Params, Thm1Trajectory, ::testing::Values(-0.8, 0.0, 0.5, 1.7));

TEST(Thm1, WrongFamilyDetected) {
  const double a = 1.7;
  const piii::Params pb{a, 1.0, {piii::Family::B, -1}};
  EXPECT_GT(zc(assemble_thm1a(a, thm1_source(pb, coupled(pb))), 1.1, 1.9, 0.3, 3.0), 1e-3);
}

TEST(Thm2, StructureAtPole) {
  const double q = 0.3, s = std::sqrt(1 - q * q);
  const Thm2Fields f{{q, 0.0}, {0.2, 0.0}, {s, 0.0}, {s, 0.0}};
  const auto p = thm2_coeffs(0.5, 1.5, f);
  EXPECT_NEAR(p.L_at(-2).det(), 0.0, 1e-15);
  EXPECT_NEAR(p.L_at(0).det(), 0.0, 1e-15);
  EXPECT_NEAR(p.L_at(-1).a12, (2 * 1.5 * 0.2 + 0.5) * s / (2 * (q * q - 1)), 1e-15);
  EXPECT_NEAR(p.L_at(-1).a21, -(2 * 1.5 * 0.2 - 0.5) * s / (2 * (q * q - 1)), 1e-15);
  // Equal S+ and S- make every coefficient of L symmetric up to the a-skew.
  EXPECT_EQ(p.L_at(-2).a12, p.L_at(-2).a21);
  EXPECT_EQ(p.B_at(0).a11, piii::h0_eval(0.5, 1.5, q, 0.2));
  // The h0 value at a = 2, q = q' = 0 is -1/(2t).
  EXPECT_NEAR(piii::h0_eval(2.0, 1.5, 0.0, 0.0), -1.0 / 3.0, 1e-15);
  EXPECT_THROW(thm2_coeffs(0.5, 1.5, {{1.0, 0.0}, {0.2, 0.0}, {0.0, 0.0}, {0.0, 0.0}}),
               SingularInput);
}

class Thm2Trajectory : public ::testing::TestWithParam<double> {};

TEST_P(Thm2Trajectory, CompatibleFormOnly) {
  const double a = GetParam();
  const auto tr = tw(a);
  const auto good = assemble_thm2(a, thm2_source(a, tr));
  const auto shown = assemble_thm2(a, thm2_source(a, tr), Thm2Form::AsDisplayed);
  EXPECT_LT(zc(good, 1.1, 1.9, 0.3, 3.0), 1e-8);
  EXPECT_LT(fp_top(good, 2.0, a, 1.1, 1.9), 1e-8);
  EXPECT_GT(zc(shown, 1.1, 1.9, 0.3, 3.0), 1e-2);
  // A shift of the scalar part of B is invisible to zero curvature but not
  // to the compatibility with the hard-edge operator.
  EXPECT_GT(fp_top(assemble_thm2(a, thm2_source(a, tr), Thm2Form::Compatible, 0.1), 2.0, a, 1.1, 1.9),
            1e-3);
}

INSTANTIATE_TEST_SUITE_P(Params, Thm2Trajectory, ::testing::Values(0.0, 0.5, 1.7));

TEST(Thm3, RandomFunctionsZeroCurvature) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    const double c0 = U(rng), c1 = U(rng), c2 = U(rng), kappa = 0.5 + std::abs(U(rng));
    auto src = [=](double t) {
      return Thm3Fields{{c0 + c1 * std::sin(t), c1 * std::cos(t)},
                        {std::exp(c2 * t) * 1.5, c2 * std::exp(c2 * t) * 1.5}};
    };
    const auto A = assemble_thm3(kappa, src);
    EXPECT_LT(zc(A, 0.5, 2.0, 0.3, 3.0), 1e-10);
    const double a = 2.0 - kappa;
    EXPECT_LT(fp_top(A, kappa, a, 0.5, 2.0), 1e-9);
    EXPECT_GT(fp_top(A, kappa, a + 0.1, 0.5, 2.0), 1e-3);
  }
  EXPECT_THROW((void)assemble_thm3(0.0, [](double) { return Thm3Fields{{1.0, 0.0}, {1.0, 0.0}}; })
                   .L(1.0, 1.0),
               DomainError);
}

TEST(Thm3, TransportReproducesClosedForm) {
  const double kappa = 1.2;
  auto src = [](double t) {
    return Thm3Fields{{2 + std::sin(t), std::cos(t)}, {std::exp(t), std::exp(t)}};
  };
  const auto A = assemble_thm3(kappa, src);
  auto start = [&](double t, double x) {
    const auto f = src(t);
    return EigvecState{fp::gumbel_eval(kappa, t, x), fp::gumbel_partner(kappa, t, x, f.r.v, f.phi.v)};
  };
  const auto end = propagate_eigvec(A, {{0.8, 1.0}, {0.8, 2.0}, {1.6, 2.0}, {1.6, 0.7}},
                                    start(0.8, 1.0));
  EXPECT_NEAR(end.F, fp::gumbel_eval(kappa, 1.6, 0.7), 1e-9);
  EXPECT_NEAR(end.G, start(1.6, 0.7).G, 1e-9);
  EXPECT_LT(path_discrepancy(A, {0.8, 1.0}, {1.6, 0.7}, {0.3, -0.4}), 1e-9);
  EXPECT_THROW(propagate_eigvec(A, {{0.8, 1.0}, {1.0, 1.2}}, {1.0, 0.0}), DomainError);
}

TEST(Thm1, PathIndependence) {
  const double a = 0.7;
  const piii::Params pa{a, 1.0, {piii::Family::A, -1}};
  const auto A = assemble_thm1a(a, thm1_source(pa, coupled(pa)));
  EXPECT_LT(path_discrepancy(A, {1.1, 0.5}, {1.8, 2.0}, {1.0, 0.5}), 1e-8);
  const auto A1 = assemble_thm1a(a, thm1_source(pa, coupled(pa)), 0.1);
  EXPECT_GT(path_discrepancy(A1, {1.1, 0.5}, {1.8, 2.0}, {1.0, 0.5}), 1e-4);
}

TEST(Soft, Thm4OnHastingsMcLeod) {
  const auto A = assemble_soft_thm4(soft_source(hm()));
  double z = 0, c = 0;
  for (double t = -2.0; t <= 2.0; t += 0.5) {
    for (double x = -2.0; x <= 2.0; x += 0.5) {
      z = std::max(z, norm_max(zero_curvature_residual(A, t, x)));
      c = std::max(c, top_row_norm(soft_compat_matrix(A, 1.0, t, x)));
    }
  }
  EXPECT_LT(z, 1e-6);
  EXPECT_LT(c, 1e-6);
}

TEST(Soft, Thm5OnHastingsMcLeod) {
  const auto A = assemble_soft_thm5(soft_source(hm(), spm_soft_table(hm(), 0.0, 1.7)));
  double z = 0, c = 0;
  for (double t = -2.0; t <= 2.0; t += 0.5) {
    for (double x = -2.0; x <= 2.0; x += 0.5) {
      const double xx = x;
      z = std::max(z, norm_max(zero_curvature_residual(A, t, xx)));
      c = std::max(c, top_row_norm(soft_compat_matrix(A, 2.0, t, xx)));
    }
  }
  EXPECT_LT(z, 1e-6);
  EXPECT_LT(c, 1e-6);
  EXPECT_GT(top_row_norm(soft_compat_matrix(A, 1.0, 0.5, 1.0)), 1e-3);
}

TEST(Soft, Thm5RejectsBrokenProduct) {
  auto src = [](double t) {
    SoftFields f = soft_fields(t, 0.3, -0.1, 2.0);
    f.s_minus = {0.7, 0.0};
    return f;
  };
  EXPECT_THROW((void)assemble_soft_thm5(src).L(0.0, 1.0), ConstraintViolated);
}

TEST(Soft, PerturbedDataDetected) {
  auto src = [](double t) {
    const auto p = hm().at(t);
    SoftFields f = soft_fields(t, p.q, p.qp);
    f.q.v += 0.05;
    return f;
  };
  EXPECT_GT(norm_max(zero_curvature_residual(assemble_soft_thm4(src), 0.5, 1.0)), 1e-3);
}

TEST(AntidiagIdentity, Holds) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> N;
  for (int i = 0; i < 50; ++i) {
    EXPECT_LT(antidiag_identity_residual(N(rng), N(rng), N(rng), N(rng)), 1e-12);
  }
  // Fails for generic (non-antidiagonal) matrices.
  const Matrix2 P{1.0, 2.0, 0.0, 1.0}, Q{0.0, 1.0, 1.0, 3.0};
  const Matrix2 ac = anticommutator(P, Q), c = commutator(P, Q);
  EXPECT_GT(norm_max(ac * ac - c * c - 4.0 * (P * P) * (Q * Q)), 1e-3);
}
