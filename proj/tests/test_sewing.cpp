#include "afbm/sewing.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <vector>

namespace {

using afbm::Complex;
using afbm::Increment2;
using afbm::Increment3;

TEST(SewPair, CanonicalGermClosedForm) {
  // g_{ts} = s(t-s), h = delta g: Lambda h_{ts} = -(t-s)^2/2 and the sewn
  // integral (Id - Lambda delta) g = (t^2 - s^2)/2.
  const auto g = [](double t, double s) { return Complex(s * (t - s), 0.0); };
  const auto h = [&](double t, double u, double s) {
    return g(t, s) - g(t, u) - g(u, s);
  };
  for (auto [s, t] : {std::pair{0.0, 1.0}, {0.3, 1.7}, {-1.0, 0.5}}) {
    const afbm::SewingResult lam = afbm::sew_pair(h, s, t, 1e-13);
    EXPECT_NEAR(lam.value.real(), -0.5 * (t - s) * (t - s), 1e-12);
    EXPECT_NEAR(lam.value.imag(), 0.0, 1e-13);
    const Complex sewn = afbm::sewn_integral(g, s, t, 1e-13);
    EXPECT_NEAR(sewn.real(), 0.5 * (t * t - s * s), 1e-12);
  }
}

TEST(SewPair, DeltaOfLambdaRecoversGerm) {
  // delta(Lambda h)_{tus} = Lambda h_{ts} - Lambda h_{tu} - Lambda h_{us}
  // must reproduce h for closed h.
  const auto g = [](double t, double s) {
    return Complex(s * s * (t - s), std::sin(s) * (t - s));
  };
  const auto h = [&](double t, double u, double s) {
    return g(t, s) - g(t, u) - g(u, s);
  };
  const double s = 0.2, u = 0.9, t = 1.6;
  const Complex lam_ts = afbm::sew_pair(h, s, t, 1e-13).value;
  const Complex lam_tu = afbm::sew_pair(h, u, t, 1e-13).value;
  const Complex lam_us = afbm::sew_pair(h, s, u, 1e-13).value;
  EXPECT_NEAR(std::abs(lam_ts - lam_tu - lam_us - h(t, u, s)), 0.0, 1e-11);
}

TEST(SewPair, LinearityAndZero) {
  const auto h1 = [](double t, double u, double s) {
    return Complex((s - u) * (t - u), 0.0);
  };
  const auto h2 = [](double t, double u, double s) {
    return Complex(0.0, (s - u) * (t - u) * (s + t));
  };
  const auto combo = [&](double t, double u, double s) {
    return 2.0 * h1(t, u, s) + h2(t, u, s);
  };
  const double s = 0.0, t = 1.0;
  const Complex a = afbm::sew_pair(h1, s, t, 1e-13).value;
  const Complex b = afbm::sew_pair(h2, s, t, 1e-13).value;
  const Complex c = afbm::sew_pair(combo, s, t, 1e-13).value;
  EXPECT_NEAR(std::abs(c - 2.0 * a - b), 0.0, 1e-12);
  EXPECT_EQ(afbm::sew_pair(h1, 0.5, 0.5, 1e-13).value, Complex(0.0, 0.0));
}

TEST(SewnIntegral, ReproducesSmoothIntegrals) {
  // Riemann-sum germs f(s)(t-s) sew to int_s^t f(u) du.
  const auto g_quad = [](double t, double s) {
    return Complex(s * s * (t - s), 0.0);
  };
  EXPECT_NEAR(afbm::sewn_integral(g_quad, 0.0, 1.0, 1e-13).real(), 1.0 / 3.0,
              1e-11);
  const auto g_sin = [](double t, double s) {
    return Complex(std::sin(s) * (t - s), 0.0);
  };
  EXPECT_NEAR(afbm::sewn_integral(g_sin, 0.0, 2.0, 1e-13).real(),
              std::cos(0.0) - std::cos(2.0), 1e-10);
  // Trapezoid-type germ has a smaller defect and must sew to the same
  // value.
  const auto g_trap = [](double t, double s) {
    return Complex(0.5 * (s * s + t * t) * (t - s), 0.0);
  };
  EXPECT_NEAR(afbm::sewn_integral(g_trap, 0.0, 1.0, 1e-13).real(), 1.0 / 3.0,
              1e-11);
}

TEST(SewGrid, MatchesCallableOnDyadicPairs) {
  // Tabulate the canonical germ on a dyadic grid and sew down to grid
  // resolution; on dyadic-aligned pairs this telescopes exactly like the
  // continuum construction truncated at the grid scale.
  const int level = 6;
  const int n = (1 << level) + 1;
  std::vector<double> times(n);
  for (int i = 0; i < n; ++i) times[i] = double(i) / (n - 1);
  Increment2 g(times);
  for (int t = 0; t < n; ++t) {
    for (int s = 0; s < n; ++s) g.at(t, s) = times[s] * (times[t] - times[s]);
  }
  const Increment3 h = afbm::delta2(g);
  const Increment2 lam = afbm::sew_grid(h);
  // Full-interval pair: continuum value -(t-s)^2/2, resolution tail
  // ~ (t-s)^2/2 * 2^{-level}.
  const double resolution_tail = 0.5 / double(1 << level);
  EXPECT_NEAR(lam.at(n - 1, 0).real(), -0.5, 1.1 * resolution_tail);
  EXPECT_NE(lam.at(n - 1, 0).real(), -0.5);  // tail genuinely unresolved
  // delta(Lambda h) = h within the resolution tail on aligned triples.
  for (int t : {n - 1, n - 9}) {
    for (int u : {n - 17, 32, 8}) {
      for (int s : {0, 4}) {
        if (!(s < u && u < t)) continue;
        const Complex resid =
            lam.at(t, s) - lam.at(t, u) - lam.at(u, s) - h.at(t, u, s);
        EXPECT_NEAR(std::abs(resid), 0.0, 2.0 * resolution_tail);
      }
    }
  }
  // Antisymmetric extension for reversed pairs.
  EXPECT_EQ(lam.at(0, n - 1), -lam.at(n - 1, 0));
}

TEST(SewGrid, ResolutionTailShrinksWithRefinement) {
  double prev_err = 0.0;
  for (int level : {4, 5, 6, 7}) {
    const int n = (1 << level) + 1;
    std::vector<double> times(n);
    for (int i = 0; i < n; ++i) times[i] = double(i) / (n - 1);
    Increment2 g(times);
    for (int t = 0; t < n; ++t) {
      for (int s = 0; s < n; ++s) {
        g.at(t, s) = times[s] * (times[t] - times[s]);
      }
    }
    const Increment2 lam = afbm::sew_grid(afbm::delta2(g));
    const double err = std::abs(lam.at(n - 1, 0).real() + 0.5);
    if (prev_err > 0.0) {
      EXPECT_NEAR(prev_err / err, 2.0, 0.2);  // first-order resolution tail
    }
    prev_err = err;
  }
}

}  // namespace
