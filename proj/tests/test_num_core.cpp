#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "hardedge/matrix2.hpp"
#include "hardedge/num/airy.hpp"
#include "hardedge/num/diff.hpp"
#include "hardedge/num/ode.hpp"
#include "hardedge/num/roots.hpp"

using namespace hardedge;
using namespace hardedge::num;

TEST(Ivp, Exponential) {
  auto tr = integrate_ivp([](double, const State& y) { return y; }, 0.0, {1.0}, 1.0, {});
  EXPECT_NEAR(tr.back().state[0], std::numbers::e, 1e-9);
  EXPECT_EQ(tr.back().s, 1.0);
}

TEST(Ivp, Gaussian) {
  auto tr = integrate_ivp([](double s, const State& y) { return State{-2 * s * y[0]}; }, 0.0,
                          {1.0}, 1.0, {});
  EXPECT_NEAR(tr.back().state[0], std::exp(-1.0), 1e-9);
}

TEST(Ivp, HarmonicOscillatorEnergy) {
  Tolerances tol;
  auto tr = integrate_ivp([](double, const State& y) { return State{y[1], -y[0]}; }, 0.0,
                          {0.0, 1.0}, 20.0, tol);
  double drift = 0;
  for (const auto& n : tr) {
    drift = std::max(drift, std::abs(n.state[0] * n.state[0] + n.state[1] * n.state[1] - 1.0));
  }
  EXPECT_LT(drift, 10 * tol.rel_tol * 20.0);
  EXPECT_NEAR(tr.back().state[0], std::sin(20.0), 1e-8);
}

TEST(Ivp, StopsAreNodes) {
  IvpOptions opts;
  opts.stops = {0.25, 0.5, 0.75};
  opts.record_all = false;
  auto tr = integrate_ivp([](double, const State& y) { return y; }, 0.0, {1.0}, 1.0, {}, opts);
  ASSERT_EQ(tr.size(), 5u);
  EXPECT_EQ(tr[2].s, 0.5);
  EXPECT_NEAR(tr[2].state[0], std::exp(0.5), 1e-9);
}

TEST(Ivp, DenseOutputAccurate) {
  auto tr = integrate_ivp([](double, const State& y) { return State{y[1], -y[0]}; }, 0.0,
                          {0.0, 1.0}, 5.0, {});
  for (double s = 0.05; s < 5.0; s += 0.37) {
    EXPECT_NEAR(tr.state_at(s)[0], std::sin(s), 1e-6);
  }
  EXPECT_THROW(tr.state_at(6.0), RangeError);
}

TEST(Ivp, RoundTrip) {
  Tolerances tol;
  auto rhs = [](double s, const State& y) { return State{y[1], -s * y[0]}; };
  auto fwd = integrate_ivp(rhs, 0.0, {1.0, 0.5}, 3.0, tol);
  auto back = integrate_ivp(rhs, 3.0, fwd.back().state, 0.0, tol);
  EXPECT_NEAR(back.back().state[0], 1.0, 100 * tol.rel_tol * 10);
  EXPECT_NEAR(back.back().state[1], 0.5, 100 * tol.rel_tol * 10);
  EXPECT_FALSE(back.increasing());
}

TEST(Ivp, TighterToleranceNoWorse) {
  auto rhs = [](double s, const State& y) { return State{y[1], -s * s * y[0]}; };
  const Tolerances ref{1e-14, 1e-14, 1'000'000, 1e-5};
  const double exact = integrate_ivp(rhs, 0.0, {1.0, 0.0}, 4.0, ref).back().state[0];
  double prev = 1.0;
  for (double tol : {1e-6, 1e-8, 1e-10}) {
    const double v = integrate_ivp(rhs, 0.0, {1.0, 0.0}, 4.0, {tol, tol, 1'000'000, 1e-5})
                         .back()
                         .state[0];
    const double err = std::abs(v - exact);
    EXPECT_LE(err, prev * 1.01 + 1e-15);
    prev = err;
  }
}

TEST(Ivp, Errors) {
  auto rhs = [](double, const State& y) { return y; };
  EXPECT_THROW(integrate_ivp(rhs, 0.0, {1.0}, 0.0, {}), DomainError);
  EXPECT_THROW(integrate_ivp(rhs, 0.0, {1.0}, 100.0, {1e-10, 1e-10, 5, 1e-5}), StepLimitExceeded);
  auto bad = [](double s, const State&) { return State{s > 0.5 ? NAN : 1.0}; };
  EXPECT_THROW(integrate_ivp(bad, 0.0, {1.0}, 1.0, {}), NonFiniteState);
  auto blow = [](double, const State& y) { return State{y[0] * y[0]}; };
  EXPECT_THROW(integrate_ivp(blow, 0.0, {1.0}, 2.0, {}), Error);
}

TEST(Ivp, TerminatePredicate) {
  IvpOptions opts;
  opts.terminate = [](double, const State& y) { return y[0] > 2.0; };
  auto tr = integrate_ivp([](double, const State& y) { return y; }, 0.0, {1.0}, 5.0, {}, opts);
  EXPECT_GT(tr.back().state[0], 2.0);
  EXPECT_LT(tr.back().s, 5.0);
}

TEST(Tolerances, Validate) {
  EXPECT_THROW((Tolerances{0, 0, 10, 1e-5}.validate()), DomainError);
  EXPECT_THROW((Tolerances{1e-9, 1e-9, 0, 1e-5}.validate()), DomainError);
  EXPECT_THROW((Tolerances{1e-9, 1e-9, 10, 0}.validate()), DomainError);
}

TEST(Trajectory, RejectsNonMonotone) {
  Trajectory tr;
  tr.push_back({0.0, {1.0}, {0.0}});
  tr.push_back({1.0, {1.0}, {0.0}});
  EXPECT_THROW(tr.push_back({0.5, {1.0}, {0.0}}), DomainError);
  EXPECT_THROW(tr.push_back({2.0, {1.0, 2.0}, {0.0, 0.0}}), DomainError);
}

TEST(FdPartial, Cases) {
  EXPECT_NEAR(fd_partial([](double s) { return s * s; }, 3.0, 1e-5), 6.0, 1e-8);
  EXPECT_EQ(fd_partial([](double) { return 4.2; }, 1.0, 1e-5), 0.0);
  EXPECT_NEAR(fd_partial([](double s) { return std::exp(s); }, 0.0, 1e-4), 1.0, 1e-8);
  EXPECT_THROW(fd_partial([](double s) { return s; }, 0.0, 0.0), DomainError);
  EXPECT_THROW(fd_partial([](double s) { return 1.0 / s; }, 1e-6, 1e-6), NonFiniteValue);
}

TEST(FdPartial, CubicsExact) {
  for (double c : {-2.0, 0.3, 5.0}) {
    auto f = [c](double s) { return c * s * s * s - 2 * s * s + s - 7; };
    const double s = 1.7;
    const double exact = 3 * c * s * s - 4 * s + 1;
    // The O(h^2) term of a cubic is c h^2 exactly.
    EXPECT_NEAR(fd_partial(f, s, 1e-3) - c * 1e-6, exact, 1e-9);
  }
}

TEST(FdPartial, Matrix) {
  auto f = [](double s) { return Matrix2{s, s * s, 1.0, -s}; };
  const Matrix2 d = fd_partial(f, 2.0, 1e-4);
  EXPECT_NEAR(d.a11, 1.0, 1e-10);
  EXPECT_NEAR(d.a12, 4.0, 1e-8);
  EXPECT_NEAR(d.a21, 0.0, 1e-12);
}

TEST(Roots, BisectAndSecant) {
  auto f = [](double x) { return x * x - 2; };
  EXPECT_NEAR(bisect(f, 0.0, 2.0).root, std::sqrt(2.0), 1e-13);
  EXPECT_NEAR(secant(f, 1.0, 2.0).root, std::sqrt(2.0), 1e-12);
  EXPECT_THROW(bisect(f, 2.0, 3.0), ConvergenceFailed);
}

TEST(Airy, ValueAtZero) {
  // Ai(0) = 3^{-2/3} / Gamma(2/3), Ai'(0) = -3^{-1/3} / Gamma(1/3).
  const double ai0 = std::pow(3.0, -2.0 / 3.0) / std::tgamma(2.0 / 3.0);
  const double aip0 = -std::pow(3.0, -1.0 / 3.0) / std::tgamma(1.0 / 3.0);
  const auto v = airy_ai(0.0);
  EXPECT_NEAR(v.value, 0.3550280538, 1e-10);
  EXPECT_NEAR(v.value, ai0, 1e-11);
  EXPECT_NEAR(v.deriv, aip0, 1e-11);
}

TEST(Airy, PowerSeriesOracle) {
  // Maclaurin series of Ai from the two fundamental solutions.
  auto series = [](double s) {
    const double c1 = std::pow(3.0, -2.0 / 3.0) / std::tgamma(2.0 / 3.0);
    const double c2 = std::pow(3.0, -1.0 / 3.0) / std::tgamma(1.0 / 3.0);
    double f = 0, g = 0, tf = 1, tg = s;
    for (int k = 0; k < 200; ++k) {
      f += tf;
      g += tg;
      tf *= s * s * s / ((3 * k + 2) * (3 * k + 3));
      tg *= s * s * s / ((3 * k + 3) * (3 * k + 4));
    }
    return c1 * f - c2 * g;
  };
  for (double s : {-5.0, -2.0, -0.5, 1.0, 2.5}) {
    EXPECT_NEAR(airy_ai(s).value, series(s), 1e-9) << "s = " << s;
  }
}

TEST(Airy, AnchorRegion) {
  const auto v = airy_ai(10.0);
  const auto seed = airy_asymptotic(10.0);
  EXPECT_NEAR(v.value / seed.value, 1.0, 1e-8);
  EXPECT_NEAR(v.value, 1.104753255e-10, 1e-18);
}

TEST(Airy, Wronskian) {
  // Two independent solutions of w'' = s w integrated over [-10, 10].
  auto rhs = [](double s, const State& w) { return State{w[1], s * w[0], w[3], s * w[2]}; };
  auto tr = integrate_ivp(rhs, 0.0, {1.0, 0.0, 0.0, 1.0}, -10.0, {});
  for (const auto& n : tr) {
    const auto& w = n.state;
    EXPECT_NEAR(w[0] * w[3] - w[1] * w[2], 1.0, 1e-8);
  }
  const auto table = airy_table(-10.0);
  EXPECT_NEAR(table.back().state[0], 0.0402412385, 1e-9);
}

TEST(Dual, Arithmetic) {
  const Dual x = Dual::variable(2.0);
  const Dual f = x * x * x / (1.0 + x) - exp(x) + sqrt(x);
  const double expect_d =
      (3 * 4.0 * 3.0 - 8.0) / 9.0 - std::exp(2.0) + 0.5 / std::sqrt(2.0);
  EXPECT_NEAR(f.d, expect_d, 1e-12);
}
