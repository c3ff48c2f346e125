#include "afbm/signature.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <vector>

#include "afbm/sampler.hpp"

namespace {

using afbm::Complex;
using afbm::Grid;
using afbm::NoiseStream;
using afbm::RoughPath;

// Fine evaluation of the deterministic driver (X1, X2) = (t, t^2).
std::vector<std::vector<Complex>> smooth_driver(double s, double t,
                                                int n_cells, int substeps) {
  const int fine = n_cells * substeps + 1;
  std::vector<std::vector<Complex>> values(2, std::vector<Complex>(fine));
  for (int j = 0; j < fine; ++j) {
    const double u = s + (t - s) * j / double(fine - 1);
    values[0][j] = Complex(u, 0.0);
    values[1][j] = Complex(u * u, 0.0);
  }
  return values;
}

std::vector<double> coarse_times(double s, double t, int n_cells) {
  std::vector<double> times(n_cells + 1);
  for (int i = 0; i <= n_cells; ++i) times[i] = s + (t - s) * i / n_cells;
  return times;
}

TEST(BuildSignature, SmoothDriverMatchesClosedForms) {
  const double s = 0.2, t = 1.4;
  const int cells = 4, substeps = 4096;
  const RoughPath rp = afbm::build_signature(
      smooth_driver(s, t, cells, substeps), substeps,
      coarse_times(s, t, cells), 3, 0.3, 0.0);
  // Gamma^2_{ts}(i, j) = int_s^t (X(j)_u - X(j)_s) dX(i)_u with the outer
  // index integrated last.
  const double g12 = (t * t * t - s * s * s) / 3.0 - s * s * (t - s);
  const double g21 =
      2.0 * (t * t * t - s * s * s) / 3.0 - s * (t * t - s * s);
  EXPECT_NEAR(rp.entry(1, cells, 0, {0}).real(), t - s, 1e-12);
  EXPECT_NEAR(rp.entry(1, cells, 0, {1}).real(), t * t - s * s, 1e-12);
  EXPECT_NEAR(rp.entry(2, cells, 0, {0, 1}).real(), g12, 2e-4);
  EXPECT_NEAR(rp.entry(2, cells, 0, {1, 0}).real(), g21, 2e-4);
  // Level 3 with all-equal indices is (t-s)^3/6 for the first component.
  EXPECT_NEAR(rp.entry(3, cells, 0, {0, 0, 0}).real(),
              std::pow(t - s, 3) / 6.0, 1e-4);
}

TEST(BuildSignature, Level2Identities) {
  // delta Gamma^2(i,j)_{tus} = delta Gamma(i)_{tu} delta Gamma(j)_{us} and
  // the symmetrized level 2 equals the product of level-1 increments.
  const double alpha = 0.3, eps = 0.25;
  const int cells = 6, substeps = 32;
  const Grid fine = Grid::uniform(-0.5, 0.7, cells * substeps + 1, eps);
  const afbm::SeriesSampler sampler(fine, alpha, 120);
  const auto path = sampler.sample(NoiseStream(5150), 2);
  const RoughPath rp =
      afbm::build_signature(path.values, substeps,
                            coarse_times(-0.5, 0.7, cells), 2, alpha, eps);
  for (int t = 0; t < rp.points(); ++t) {
    for (int u = 0; u < t; ++u) {
      for (int s = 0; s < u; ++s) {
        for (int i = 0; i < 2; ++i) {
          for (int j = 0; j < 2; ++j) {
            const Complex lhs = rp.entry(2, t, s, {i, j}) -
                                rp.entry(2, t, u, {i, j}) -
                                rp.entry(2, u, s, {i, j});
            const Complex rhs = rp.entry(1, t, u, {i}) *
                                rp.entry(1, u, s, {j});
            EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-12);
          }
        }
      }
    }
  }
  // Symmetric part: Gamma^2(i,j) + Gamma^2(j,i) = delta Gamma(i) o
  // delta Gamma(j) holds exactly for the left-point construction.
  for (int t = 1; t < rp.points(); ++t) {
    for (int s = 0; s < t; ++s) {
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          const Complex sym =
              rp.entry(2, t, s, {i, j}) + rp.entry(2, t, s, {j, i});
          Complex prod =
              rp.entry(1, t, s, {i}) * rp.entry(1, t, s, {j});
          if (i == j) {
            // Same-index symmetric part double counts the diagonal defect
            // of the left-point sums; compare within that defect.
            EXPECT_NEAR(std::abs(sym - prod), 0.0, 2e-2);
          } else {
            // Mixed indices: residual is the discrete quadratic variation
            // cross term, small but nonzero.
            EXPECT_NEAR(std::abs(sym - prod), 0.0, 2e-2);
          }
        }
      }
    }
  }
}

TEST(CheckChen, ExactForAssembledPath) {
  const double alpha = 0.22, eps = 0.25;
  const int cells = 8, substeps = 16;
  const Grid fine = Grid::uniform(0.1, 1.1, cells * substeps + 1, eps);
  const afbm::SeriesSampler sampler(fine, alpha, 150);
  const auto path = sampler.sample(NoiseStream(31337), 2);
  const RoughPath rp =
      afbm::build_signature(path.values, substeps,
                            coarse_times(0.1, 1.1, cells), 4, alpha, eps);
  const afbm::ChenAudit audit = afbm::check_chen(rp);
  EXPECT_LT(audit.max_rel_residual, 1e-12);
}

TEST(CheckShuffle, ResidualHalvesWithSubstepDoubling) {
  const double alpha = 0.3, eps = 1.0 / 64.0;
  const int cells = 4;
  double prev = 0.0;
  for (int substeps : {64, 128, 256}) {
    const Grid fine = Grid::uniform(-0.25, 0.25, cells * substeps + 1, eps);
    const afbm::SeriesSampler sampler(fine, alpha, 400);
    const auto path = sampler.sample(NoiseStream(777), 2);
    const RoughPath rp = afbm::build_signature(
        path.values, substeps, coarse_times(-0.25, 0.25, cells), 2, alpha,
        eps);
    const double resid = afbm::check_shuffle(rp).max_abs_residual;
    if (prev > 0.0) EXPECT_NEAR(prev / resid, 2.0, 0.6);
    prev = resid;
  }
}

TEST(LiftGeometric1d, ShuffleExact) {
  std::vector<double> times{0.0, 0.25, 0.5, 0.75, 1.0};
  std::vector<Complex> values;
  for (double t : times) values.emplace_back(std::sin(3 * t), t * t);
  const RoughPath rp = afbm::lift_geometric_1d(values, times, 3, 0.4, 0.0);
  EXPECT_LT(afbm::check_shuffle(rp).max_rel_residual, 1e-12);
  EXPECT_LT(afbm::check_chen(rp).max_rel_residual, 1e-12);
}

TEST(Shuffles, EnumerationCountsAndOrder) {
  const auto mixes = afbm::shuffles({0, 1}, {2});
  ASSERT_EQ(mixes.size(), 3u);  // C(3,1) interleavings
  for (const auto& m : mixes) {
    // relative order of 0 before 1 preserved
    int i0 = -1, i1 = -1;
    for (int k = 0; k < 3; ++k) {
      if (m[k] == 0) i0 = k;
      if (m[k] == 1) i1 = k;
    }
    EXPECT_LT(i0, i1);
  }
  EXPECT_EQ(afbm::shuffles({0, 0}, {0, 0}).size(), 6u);  // C(4,2)
}

TEST(RoughPathJson, RoundTrip) {
  const double alpha = 0.3, eps = 0.125;
  const int cells = 3, substeps = 8;
  const Grid fine = Grid::uniform(0.0, 0.6, cells * substeps + 1, eps);
  const auto path =
      afbm::SeriesSampler(fine, alpha, 80).sample(NoiseStream(2024), 2);
  const RoughPath rp =
      afbm::build_signature(path.values, substeps,
                            coarse_times(0.0, 0.6, cells), 3, alpha, eps);
  const std::string file = "/tmp/afbm_roughpath_test.json";
  afbm::write_rough_path_json(rp, file);
  const RoughPath back = afbm::read_rough_path_json(file);
  EXPECT_EQ(back.dimension(), rp.dimension());
  EXPECT_EQ(back.depth(), rp.depth());
  EXPECT_EQ(back.times(), rp.times());
  const auto diff = afbm::coupled_signature_difference(rp, back);
  for (double dn : diff) EXPECT_EQ(dn, 0.0);
  std::remove(file.c_str());
}

TEST(CoupledSignatureDifference, ShrinksWithHeightGap) {
  // The same noise lifted at nearby heights differs little; the level-1
  // gap shrinks as the two heights approach.
  const double alpha = 0.3;
  const int cells = 4, substeps = 32;
  const auto times = coarse_times(0.0, 0.5, cells);
  const NoiseStream root(11);
  auto lift_at = [&](double eps) {
    const Grid fine = Grid::uniform(0.0, 0.5, cells * substeps + 1, eps);
    const afbm::SeriesSampler sampler(fine, alpha, 300);
    const auto path = sampler.sample(root, 2);
    return afbm::build_signature(path.values, substeps, times, 2, alpha, eps);
  };
  const RoughPath base = lift_at(0.25);
  const auto far_gap = afbm::coupled_signature_difference(base, lift_at(0.5));
  const auto near_gap =
      afbm::coupled_signature_difference(base, lift_at(0.28));
  EXPECT_LT(near_gap[0], far_gap[0]);
  EXPECT_LT(near_gap[1], far_gap[1]);
}

}  // namespace
