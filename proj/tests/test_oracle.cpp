#include "afbm/oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <sstream>
#include <vector>

namespace {

using afbm::Complex;
using afbm::Contour;

TEST(PathDoubleIntegral, MatchesClosedFormRectangle) {
  // For the mollified kernel F_c the double path integral between fixed
  // endpoints equals the four-corner antiderivative combination, and it is
  // invariant under deforming either path.
  const double alpha = 0.3, c = 0.4;
  const Complex a(0.1, 0.0), b(0.9, 0.0);
  const auto f = [&](Complex z, Complex wbar) {
    return afbm::detail::kernel_f(z, wbar, c, alpha);
  };
  const Complex closed =
      afbm::detail::kernel_antideriv(b, std::conj(b), c, alpha) -
      afbm::detail::kernel_antideriv(b, std::conj(a), c, alpha) -
      afbm::detail::kernel_antideriv(a, std::conj(b), c, alpha) +
      afbm::detail::kernel_antideriv(a, std::conj(a), c, alpha);
  const Complex straight = afbm::path_double_integral(
      f, Contour::straight(a, b), Contour::straight(a, b), 1e-11);
  const Complex deformed = afbm::path_double_integral(
      f, Contour::deformed(a, b), Contour::deformed(a, b), 1e-11);
  EXPECT_NEAR(std::abs(straight - closed), 0.0, 1e-9);
  EXPECT_NEAR(std::abs(deformed - closed), 0.0, 1e-9);
}

TEST(LevyVarianceV1, ContourInvariance) {
  const double alpha = 0.3, eps = 0.25;
  const double v_deformed =
      afbm::levy_variance_V1(Complex(0.0, 0.0), Complex(1.0, 0.0), eps, alpha);
  const double v_straight =
      afbm::levy_variance_V1_straight(0.0, 1.0, eps, alpha);
  EXPECT_NEAR(v_deformed / v_straight, 1.0, 1e-6);
}

TEST(LevyVarianceV1, ExtrapolatedLadderReachesSmallHeightLimit) {
  // The small-height expansion carries slow eps^{2 alpha} corrections, so a
  // power-basis fit over the ladder is needed to reach the limit at
  // percent-level accuracy.
  const double alpha = 0.3;
  const double limit = afbm::levy_area_variance_limit(alpha, 0.0, 1.0);
  std::vector<double> heights, ladder;
  for (int k = 4; k <= 9; ++k) {
    heights.push_back(std::pow(2.0, -k));
    ladder.push_back(afbm::levy_variance_V1(
        Complex(0, 0), Complex(1, 0), heights.back(), alpha, 1e-9));
  }
  const double fitted = afbm::fit_power_limit(
      heights, ladder, afbm::level2_correction_exponents(alpha));
  EXPECT_NEAR(fitted / limit, 1.0, 0.005);
  // The plain 3-point geometric fit sees a positive rate and moves toward
  // the limit relative to the raw finest value.
  const afbm::RichardsonFit geom = afbm::richardson_limit(ladder);
  EXPECT_GT(geom.rate, 0.0);
  EXPECT_LT(std::abs(geom.limit - limit), std::abs(ladder.back() - limit));
}

TEST(LevyVarianceV1, HomogeneityInTheInterval) {
  // V1 scales like |t - s|^{4 alpha} when heights scale along.
  const double alpha = 0.35, eps = 0.2;
  const double v1 =
      afbm::levy_variance_V1(Complex(0, 0), Complex(1, 0), eps, alpha);
  const double v2 =
      afbm::levy_variance_V1(Complex(0, 0), Complex(2, 0), 2.0 * eps, alpha);
  EXPECT_NEAR(v2 / v1, std::pow(2.0, 4.0 * alpha), 1e-5);
}

TEST(LevyVarianceV2, DivergesBelowQuarterWithTheRightSlope) {
  // V2 = bounded part + divergent part ~ eps^{-(1-4 alpha)}.  Differencing
  // the ladder removes the bounded part; the log-log regression of the
  // differences then shows the divergence exponent.
  const double alpha = 0.15;  // expected divergence exponent 1 - 4 alpha
  std::vector<int> levels;
  std::vector<double> vals;
  for (int k = 4; k <= 9; ++k) {
    levels.push_back(k);
    vals.push_back(afbm::levy_variance_V2(0.0, 1.0, std::pow(2.0, -k), alpha));
  }
  const double slope = afbm::ladder_log_slope(levels, vals, true);
  EXPECT_NEAR(slope, 1.0 - 4.0 * alpha, 0.05);
  // The undifferenced regression is biased upward by the bounded part.
  EXPECT_GT(afbm::ladder_log_slope(levels, vals, false),
            1.0 - 4.0 * alpha);
}

TEST(LevyVarianceV2, BoundedAboveQuarter) {
  const double alpha = 0.35;
  double lo = 1e300, hi = 0.0;
  for (int k = 7; k <= 9; ++k) {
    const double v =
        afbm::levy_variance_V2(0.0, 1.0, std::pow(2.0, -k), alpha);
    lo = std::min(lo, std::abs(v));
    hi = std::max(hi, std::abs(v));
  }
  EXPECT_LT(hi / lo, 1.5);
}

TEST(ThetaOperator, ConstantTestFunctionHasClosedForm) {
  const double alpha = 0.3, eps = 0.25, eta = 0.1;
  const Complex s(0.0, 0.0), t(1.0, 0.0);
  const Complex theta = afbm::theta_operator(
      [](Complex, Complex) { return Complex(1.0, 0.0); }, eps, eta, s, t,
      alpha, 1e-11);
  const Complex closed =
      afbm::detail::inner_rectangle(t, std::conj(t), s, 2.0 * eps, alpha) -
      afbm::detail::inner_rectangle(t, std::conj(t), s, eps + eta, alpha);
  EXPECT_NEAR(std::abs(theta - closed), 0.0, 1e-8);
}

TEST(ThetaOperator, ShrinksLinearlyInTheHeightGap) {
  // At fixed eps the smeared kernel difference is O(|eps - eta|) for an
  // analytic test function: halving the gap halves the value.
  const double alpha = 0.3, eps = 0.25;
  const Complex s(0.0, 0.0), t(1.0, 0.0);
  const auto phi = [](Complex z, Complex wbar) {
    return std::exp(afbm::kImagUnit * z) * (wbar + 2.0);
  };
  const double g1 = std::abs(
      afbm::theta_operator(phi, eps, eps - 0.08, s, t, alpha, 1e-11));
  const double g2 = std::abs(
      afbm::theta_operator(phi, eps, eps - 0.04, s, t, alpha, 1e-11));
  EXPECT_NEAR(g1 / g2, 2.0, 0.4);
}

TEST(IteratedVarianceOracle, TelescopedMatchesDirectDifferenceN2) {
  // Cross-check of the telescoped kernel decomposition against the direct
  // combination Q(2 eps) + Q(2 eta) - 2 Q(eps + eta) at well-separated
  // heights where the direct cancellation is benign.
  const double alpha = 0.3, eps = 0.25, eta = 0.125;
  const double s = 0.0, t = 1.0;
  const afbm::IteratedVarianceResult tele =
      afbm::iterated_variance_oracle(2, {0, 1}, eps, eta, s, t, alpha, 1e-8);
  const Contour g = Contour::deformed(Complex(s, 0), Complex(t, 0));
  const auto q = [&](double c) {
    const afbm::detail::ChainKernel k{c, 0.0, false};
    return afbm::detail::chain_integral_n2(g, k, k, alpha, 1e-11).real();
  };
  const double cc = afbm::kernel_constant(alpha);
  const double direct =
      cc * cc * (q(2.0 * eps) + q(2.0 * eta) - 2.0 * q(eps + eta));
  EXPECT_GT(tele.value, 0.0);
  EXPECT_NEAR(tele.value / direct, 1.0, 1e-5);
}

TEST(IteratedVarianceOracle, VanishesAtEqualHeights) {
  // The telescoped form carries one kernel difference per term, so equal
  // heights give exactly zero rather than a cancellation residue.
  const afbm::IteratedVarianceResult r2 =
      afbm::iterated_variance_oracle(2, {0, 1}, 0.2, 0.2, 0.0, 1.0, 0.3);
  EXPECT_EQ(r2.value, 0.0);
  const afbm::IteratedVarianceResult r3 =
      afbm::iterated_variance_oracle(3, {0, 1, 2}, 0.2, 0.2, 0.0, 1.0, 0.3);
  EXPECT_NEAR(r3.value, 0.0, 1e-15);
}

TEST(IteratedVarianceOracle, TelescopedMatchesDirectDifferenceN3) {
  const double alpha = 0.3, eps = 0.4, eta = 0.2;
  const double s = 0.0, t = 1.0;
  const afbm::IteratedVarianceResult tele =
      afbm::iterated_variance_oracle(3, {0, 1, 2}, eps, eta, s, t, alpha);
  const Contour g = Contour::deformed(Complex(s, 0), Complex(t, 0));
  const auto q3 = [&](double c) {
    const afbm::detail::ChainKernel k{c, 0.0, false};
    return afbm::detail::chain_integral_n3(g, k, k, k, alpha, 3, 8).real();
  };
  const double cc = afbm::kernel_constant(alpha);
  const double direct =
      cc * cc * cc * (q3(2.0 * eps) + q3(2.0 * eta) - 2.0 * q3(eps + eta));
  EXPECT_GT(tele.value, 0.0);
  EXPECT_NEAR(tele.value / direct, 1.0,
              std::max(1e-3, 5.0 * tele.est_error / tele.value));
}

TEST(IteratedVarianceOracle, RepeatedIndexAddsCrossedPairing) {
  const double alpha = 0.3, eps = 0.35, eta = 0.175;
  const afbm::IteratedVarianceResult distinct =
      afbm::iterated_variance_oracle(2, {0, 1}, eps, eta, 0.0, 1.0, alpha);
  const afbm::IteratedVarianceResult repeated =
      afbm::iterated_variance_oracle(2, {0, 0}, eps, eta, 0.0, 1.0, alpha);
  EXPECT_GT(repeated.value, 0.0);
  // The crossed pairing contributes a nonzero second Wick term.
  EXPECT_GT(std::abs(repeated.value - distinct.value),
            10.0 * (distinct.est_error + repeated.est_error));
  EXPECT_THROW(
      afbm::iterated_variance_oracle(3, {0, 0, 1}, eps, eta, 0.0, 1.0, alpha),
      std::invalid_argument);
}

TEST(OracleSweep, CsvHeaderAndRows) {
  std::vector<afbm::OracleSweepRow> rows;
  rows.push_back({0.25, 2, 0.25, 0.125, 1.0, 42.0, 0.0});
  std::ostringstream out;
  afbm::write_oracle_sweep_csv(rows, out);
  const std::string text = out.str();
  EXPECT_NE(text.find("alpha,n,eps,eta,dt,value,est_error"), std::string::npos);
  EXPECT_NE(text.find("0.25,2,0.25,0.125,1,42,0"), std::string::npos);
}

TEST(Richardson, ExactOnSyntheticGeometricLadder) {
  std::vector<double> ladder;
  for (int k = 0; k < 4; ++k) {
    ladder.push_back(1.7 - 0.3 * std::pow(2.0, -0.8 * k));
  }
  const afbm::RichardsonFit fit = afbm::richardson_limit(ladder);
  EXPECT_NEAR(fit.rate, 0.8, 1e-10);
  EXPECT_NEAR(fit.limit, 1.7, 1e-10);
}

}  // namespace
