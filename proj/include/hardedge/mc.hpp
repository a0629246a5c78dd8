#pragma once

// Smallest eigenvalue of the beta-Laguerre ensemble with weight
// l^{(a+1) beta/2 - 1} e^{-beta l/2}, sampled from the bidiagonal model
//
//   B = lower bidiagonal, B_ii ~ chi_{beta (n + a - i + 1)}, B_{i+1,i} ~ chi_{beta (n - i)},
//
// for i = 1..n. The eigenvalues of B B^T / beta follow the weight above.
// Samples are returned as n * lambda_min.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "hardedge/errors.hpp"

namespace hardedge::mc {

struct EnsembleSpec {
  int n = 6;
  double beta = 2.0;
  double a = 0.0;
  std::uint64_t seed = 1;

  void validate() const {
    if (n < 2) throw DomainError("n must be at least 2");
    if (!(beta > 0)) throw DomainError("beta must be positive");
    if (!(a > -1)) throw DomainError("a must exceed -1");
  }
};

// Independent stream per replica: the engine is seeded from (seed, replica).
inline std::mt19937_64 replica_engine(std::uint64_t seed, std::uint64_t replica) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(replica), static_cast<std::uint32_t>(replica >> 32)};
  return std::mt19937_64(seq);
}

inline double chi(std::mt19937_64& rng, double dof) {
  std::chi_squared_distribution<double> d(dof);
  return std::sqrt(d(rng));
}

// Symmetric tridiagonal matrix: diagonal d (size n), off-diagonal e (size n-1).
struct Tridiagonal {
  std::vector<double> d;
  std::vector<double> e;
};

// T = B B^T / beta for the lower bidiagonal B with diagonal alpha and
// subdiagonal gamma.
inline Tridiagonal gram(const std::vector<double>& alpha, const std::vector<double>& gamma,
                        double beta) {
  const std::size_t n = alpha.size();
  Tridiagonal t{std::vector<double>(n), std::vector<double>(n - 1)};
  for (std::size_t i = 0; i < n; ++i) {
    t.d[i] = (alpha[i] * alpha[i] + (i > 0 ? gamma[i - 1] * gamma[i - 1] : 0.0)) / beta;
    if (i + 1 < n) t.e[i] = alpha[i] * gamma[i] / beta;
  }
  return t;
}

inline Tridiagonal sample_tridiagonal(const EnsembleSpec& s, std::mt19937_64& rng) {
  const auto n = static_cast<std::size_t>(s.n);
  std::vector<double> alpha(n), gamma(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    alpha[i] = chi(rng, s.beta * (s.n + s.a - static_cast<double>(i)));
    if (i + 1 < n) gamma[i] = chi(rng, s.beta * (s.n - 1 - static_cast<double>(i)));
  }
  return gram(alpha, gamma, s.beta);
}

// Number of eigenvalues below x (Sturm sequence via LDL^T pivots).
inline std::size_t sturm_count(const Tridiagonal& t, double x) {
  std::size_t count = 0;
  double p = 1.0;
  for (std::size_t i = 0; i < t.d.size(); ++i) {
    const double off = i > 0 ? t.e[i - 1] * t.e[i - 1] : 0.0;
    p = t.d[i] - x - (i > 0 ? off / p : 0.0);
    if (p == 0.0) p = -1e-300;
    if (p < 0) ++count;
  }
  return count;
}

inline double smallest_eigenvalue(const Tridiagonal& t, double rel_tol = 4e-16) {
  double hi = 0.0;
  for (std::size_t i = 0; i < t.d.size(); ++i) {
    const double r = (i > 0 ? std::abs(t.e[i - 1]) : 0.0) + (i < t.e.size() ? std::abs(t.e[i]) : 0.0);
    hi = std::max(hi, t.d[i] + r);
  }
  double lo = 0.0;
  if (sturm_count(t, hi) == 0) throw ConvergenceFailed("Gershgorin bound does not enclose the spectrum");
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (sturm_count(t, mid) >= 1) {
      hi = mid;
    } else {
      lo = mid;
    }
    if (hi - lo <= rel_tol * hi) return 0.5 * (lo + hi);
  }
  throw ConvergenceFailed("bisection did not converge");
}

inline std::vector<double> sample_smallest(const EnsembleSpec& s, std::size_t replicas) {
  s.validate();
  if (replicas < 1) throw DomainError("replicas must be at least 1");
  std::vector<double> out(replicas);
  for (std::size_t r = 0; r < replicas; ++r) {
    auto rng = replica_engine(s.seed, r);
    out[r] = s.n * smallest_eigenvalue(sample_tridiagonal(s, rng));
  }
  return out;
}

// Right-continuous empirical distribution function.
class EmpiricalCDF {
 public:
  explicit EmpiricalCDF(std::vector<double> samples) : v_(std::move(samples)) {
    if (v_.empty()) throw EmptySample("empirical CDF needs at least one sample");
    for (double x : v_) {
      if (!std::isfinite(x) || x < 0) throw DomainError("samples must be finite and non-negative");
    }
    std::sort(v_.begin(), v_.end());
  }

  [[nodiscard]] double operator()(double x) const {
    return static_cast<double>(std::upper_bound(v_.begin(), v_.end(), x) - v_.begin()) /
           static_cast<double>(v_.size());
  }
  [[nodiscard]] const std::vector<double>& values() const { return v_; }
  [[nodiscard]] std::size_t size() const { return v_.size(); }

 private:
  std::vector<double> v_;
};

inline EmpiricalCDF empirical_cdf(std::vector<double> samples) { return EmpiricalCDF(std::move(samples)); }

// Two-sample sup distance, evaluated at every jump of either CDF.
inline double ks_distance(const EmpiricalCDF& c1, const EmpiricalCDF& c2) {
  const auto& a = c1.values();
  const auto& b = c2.values();
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() || j < b.size()) {
    const double x = j >= b.size() || (i < a.size() && a[i] <= b[j]) ? a[i] : b[j];
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  return d;
}

inline void write_samples_csv(std::ostream& os, const std::vector<double>& samples) {
  const auto old = os.precision(17);
  os << "replica,value\n";
  for (std::size_t i = 0; i < samples.size(); ++i) os << i << ',' << samples[i] << '\n';
  os.precision(old);
}

}  // namespace hardedge::mc
