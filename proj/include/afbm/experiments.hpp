#ifndef AFBM_EXPERIMENTS_HPP
#define AFBM_EXPERIMENTS_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <string>
#include <vector>

#include "afbm/oracle.hpp"
#include "afbm/rde.hpp"
#include "afbm/report.hpp"
#include "afbm/sampler.hpp"
#include "afbm/signature.hpp"
#include "afbm/special_functions.hpp"

// The experiment commands behind the CLI.  Each takes an ExperimentConfig,
// runs a reproducible check with pinned thresholds, and returns an
// ExperimentReport.  Default budgets are sized for interactive use; the
// heavier settings used by the acceptance harness arrive through the same
// config keys.
namespace afbm {

namespace detail {

inline std::string fmt_alpha(double alpha) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", alpha);
  return buf;
}

// Accumulator for a mean with standard error.
struct MeanVar {
  double sum = 0.0;
  double sum_sq = 0.0;
  long n = 0;
  void add(double x) {
    sum += x;
    sum_sq += x * x;
    n += 1;
  }
  void merge(const MeanVar& o) {
    sum += o.sum;
    sum_sq += o.sum_sq;
    n += o.n;
  }
  double mean() const { return sum / double(n); }
  double std_error() const {
    const double m = mean();
    const double var = std::max(0.0, sum_sq / double(n) - m * m);
    return std::sqrt(var / double(n));
  }
};

}  // namespace detail

// ---- kernel-check --------------------------------------------------------
// Series-vs-kernel identity on an interior grid; optionally demonstrates
// the wrong-normalization failure mode (noise variance 2 instead of 1
// doubles the series sum).
inline ExperimentReport cmd_kernel_check(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.command = "kernel-check";
  rep.config = cfg;
  const std::vector<double> alphas =
      cfg.get_doubles("alphas", {0.1, 0.3, 0.45});
  const int K = int(cfg.get_int("truncation", 200));
  const double tol = cfg.get_double("tol", 1e-6);
  const bool wrong = cfg.get_int("wrong_normalization", 0) != 0;
  const int n_re = 10, n_im = 10;
  std::vector<Complex> pts;
  for (int a = 0; a < n_re; ++a) {
    for (int b = 0; b < n_im; ++b) {
      pts.emplace_back(-1.0 + 2.0 * a / (n_re - 1),
                       0.2 + 1.0 * b / (n_im - 1));
    }
  }
  for (double alpha : alphas) {
    std::vector<std::vector<Complex>> coeff(pts.size(),
                                            std::vector<Complex>(K));
    for (std::size_t p = 0; p < pts.size(); ++p) {
      for (int k = 0; k < K; ++k) {
        coeff[p][k] = series_coefficient(k, pts[p], alpha);
      }
    }
    double max_dev = 0.0, max_ratio = 0.0;
    for (std::size_t p = 0; p < pts.size(); ++p) {
      for (std::size_t q = 0; q < pts.size(); ++q) {
        Complex acc{0.0, 0.0};
        for (int k = 0; k < K; ++k) acc += coeff[p][k] * std::conj(coeff[q][k]);
        if (wrong) acc *= 2.0;
        const Complex ker = kernel(pts[p], pts[q], alpha);
        max_dev = std::max(max_dev, std::abs(acc - ker));
        max_ratio = std::max(max_ratio, std::abs(acc) / std::abs(ker));
      }
    }
    if (wrong) {
      rep.add_check("wrong_normalization_probe_alpha_" +
                        detail::fmt_alpha(alpha),
                    max_ratio, 0.0, tol, max_dev < tol);
    } else {
      rep.add_check("series_identity_alpha_" + detail::fmt_alpha(alpha),
                    max_dev, 0.0, tol, max_dev < tol);
    }
  }
  // K = 1 at z = w = i is exact: |f_0(i)|^2 = kernel(i, i).
  for (double alpha : alphas) {
    const double dev = std::abs(std::norm(series_coefficient(0, kImagUnit, alpha)) -
                                kernel(kImagUnit, kImagUnit, alpha));
    rep.add_check("first_term_anchor_alpha_" + detail::fmt_alpha(alpha), dev,
                  0.0, 1e-15, dev < 1e-15);
  }
  return rep;
}

// ---- cov-check -----------------------------------------------------------
// Empirical boundary covariance of the factorized sampler versus the
// closed forms: Hermitian part, vanishing pseudo-covariance, and the
// real/imaginary cross term; pass if every entry is within 3 SE.
inline ExperimentReport cmd_cov_check(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.command = "cov-check";
  rep.config = cfg;
  const double alpha = cfg.get_double("alpha", 0.3);
  const long replicas = cfg.get_int("replicas", 4000);
  const long seed = cfg.get_int("seed", 1);
  const int workers = int(cfg.get_int("workers", 1));
  const int n = int(cfg.get_int("grid_points", 16));
  const double t0 = 0.1, t1 = 1.6;
  const Grid grid = Grid::uniform(t0, t1, n, 0.0);
  const FactorizedSampler sampler(grid, alpha);
  const NoiseStream root{uint64_t(seed)};

  struct Acc {
    std::vector<Complex> herm_sum, pseudo_sum;
    std::vector<double> herm_sq, pseudo_sq, cross_sum, cross_sq;
    void init(int m) {
      herm_sum.assign(m * m, Complex(0, 0));
      pseudo_sum.assign(m * m, Complex(0, 0));
      herm_sq.assign(m * m, 0.0);
      pseudo_sq.assign(m * m, 0.0);
      cross_sum.assign(m * m, 0.0);
      cross_sq.assign(m * m, 0.0);
    }
  };
  std::vector<Acc> acc(std::max(1, workers));
  for (Acc& a : acc) a.init(n);
  parallel_for_replicas(replicas, workers, [&](long r) {
    const SamplePath path = sampler.sample(root.substream(r), 1);
    Acc& a = acc[workers <= 1 ? 0 : int(r % workers)];
    for (int s = 0; s < n; ++s) {
      for (int t = 0; t < n; ++t) {
        const Complex v = path.values[0][s] * std::conj(path.values[0][t]);
        const Complex w = path.values[0][s] * path.values[0][t];
        const double x =
            path.values[0][s].real() * path.values[0][t].imag();
        a.herm_sum[s * n + t] += v;
        a.herm_sq[s * n + t] += std::norm(v);
        a.pseudo_sum[s * n + t] += w;
        a.pseudo_sq[s * n + t] += std::norm(w);
        a.cross_sum[s * n + t] += x;
        a.cross_sq[s * n + t] += x * x;
      }
    }
  });
  for (std::size_t w = 1; w < acc.size(); ++w) {
    for (int i = 0; i < n * n; ++i) {
      acc[0].herm_sum[i] += acc[w].herm_sum[i];
      acc[0].herm_sq[i] += acc[w].herm_sq[i];
      acc[0].pseudo_sum[i] += acc[w].pseudo_sum[i];
      acc[0].pseudo_sq[i] += acc[w].pseudo_sq[i];
      acc[0].cross_sum[i] += acc[w].cross_sum[i];
      acc[0].cross_sq[i] += acc[w].cross_sq[i];
    }
  }
  const double R = double(replicas);
  double herm_dev = 0.0, pseudo_dev = 0.0, cross_dev = 0.0;
  for (int s = 0; s < n; ++s) {
    for (int t = 0; t < n; ++t) {
      const int i = s * n + t;
      const Complex hm = acc[0].herm_sum[i] / R;
      const double hse = std::sqrt(
          std::max(0.0, acc[0].herm_sq[i] / R - std::norm(hm)) / R);
      const Complex theory =
          boundary_covariance(grid.points[s].real(), grid.points[t].real(),
                              alpha);
      herm_dev = std::max(herm_dev, std::abs(hm - theory) / hse);
      const Complex pm = acc[0].pseudo_sum[i] / R;
      const double pse = std::sqrt(
          std::max(0.0, acc[0].pseudo_sq[i] / R - std::norm(pm)) / R);
      pseudo_dev = std::max(pseudo_dev, std::abs(pm) / pse);
      const double cm = acc[0].cross_sum[i] / R;
      const double cse = std::sqrt(
          std::max(0.0, acc[0].cross_sq[i] / R - cm * cm) / R);
      const double ctheory = re_im_cross_covariance(
          grid.points[s].real(), grid.points[t].real(), alpha);
      cross_dev = std::max(cross_dev, std::abs(cm - ctheory) / cse);
    }
  }
  rep.add_check("hermitian_covariance_max_dev_se", herm_dev, 0.0, 3.0,
                herm_dev <= 3.0);
  rep.add_check("pseudo_covariance_max_dev_se", pseudo_dev, 0.0, 3.0,
                pseudo_dev <= 3.0);
  rep.add_check("re_im_cross_max_dev_se", cross_dev, 0.0, 3.0,
                cross_dev <= 3.0);
  return rep;
}

// ---- rate ----------------------------------------------------------------
// Coupled height-difference variance: Monte Carlo versus the closed-form
// vertical-segment integral, and the |eps - eta|^{2 alpha} rate on a
// proportional ladder.
inline ExperimentReport cmd_rate(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.command = "rate";
  rep.config = cfg;
  const std::vector<double> alphas = cfg.get_doubles("alphas", {0.15, 0.3});
  const long replicas = cfg.get_int("replicas", 20000);
  const long seed = cfg.get_int("seed", 7151);
  const int workers = int(cfg.get_int("workers", 1));
  const int kmin = int(cfg.get_int("kmin", 3));
  const int kmax = int(cfg.get_int("kmax", 7));
  const double t = 1.0;
  for (double alpha : alphas) {
    const std::string tag = detail::fmt_alpha(alpha);
    SweepRows sweep;
    std::vector<int> levels;
    std::vector<double> mc_values;
    double max_dev = 0.0;
    for (int k = kmin; k <= kmax; ++k) {
      const double eps = std::pow(2.0, -k);
      const double eta = 0.5 * eps;
      Grid g;
      g.points = {Complex(t, eps), Complex(t, eta)};
      const FactorizedSampler sampler(g, alpha);
      const NoiseStream root(uint64_t(seed) + uint64_t(k));
      std::vector<detail::MeanVar> mv(std::max(1, workers));
      parallel_for_replicas(replicas, workers, [&](long r) {
        const SamplePath p = sampler.sample(root.substream(r), 1);
        const double d = std::norm(p.values[0][0] - p.values[0][1]);
        mv[workers <= 1 ? 0 : int(r % workers)].add(d);
      });
      for (std::size_t w = 1; w < mv.size(); ++w) mv[0].merge(mv[w]);
      const double mc = mv[0].mean(), se = mv[0].std_error();
      const double closed = coupled_height_variance(eps, eta, alpha);
      max_dev = std::max(max_dev, std::abs(mc - closed) / se);
      sweep.push_back({eps - eta, mc, se});
      levels.push_back(k + 1);  // |eps - eta| = 2^{-(k+1)}
      mc_values.push_back(mc);
    }
    rep.sweeps["rate_alpha_" + tag] = sweep;
    rep.add_check("coupled_variance_mc_max_dev_se_alpha_" + tag, max_dev,
                  0.0, 3.0, max_dev <= 3.0);
    const double slope = -ladder_log_slope(levels, mc_values, false);
    rep.add_check("rate_slope_alpha_" + tag, slope, 0.0, 0.1,
                  std::abs(slope - 2.0 * alpha) <= 0.1);
  }
  return rep;
}

// ---- levy-variance -------------------------------------------------------
// V1 height ladder extrapolated against the closed-form limit; optional
// Monte Carlo consistency of the level-2 iterated integral at fixed eps.
inline ExperimentReport cmd_levy_variance(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.command = "levy-variance";
  rep.config = cfg;
  const std::vector<double> alphas = cfg.get_doubles("alphas", {0.3});
  const int kmin = int(cfg.get_int("kmin", 4));
  const int kmax = int(cfg.get_int("kmax", 9));
  const double rel_threshold = cfg.get_double("rel_threshold", 0.005);
  for (double alpha : alphas) {
    const std::string tag = detail::fmt_alpha(alpha);
    std::vector<double> heights, ladder;
    SweepRows sweep;
    for (int k = kmin; k <= kmax; ++k) {
      heights.push_back(std::pow(2.0, -k));
      ladder.push_back(levy_variance_V1(Complex(0, 0), Complex(1, 0),
                                        heights.back(), alpha, 1e-9));
      sweep.push_back({heights.back(), ladder.back(), 0.0});
    }
    rep.sweeps["v1_ladder_alpha_" + tag] = sweep;
    const double fitted = fit_power_limit(heights, ladder,
                                          level2_correction_exponents(alpha));
    const double limit = levy_area_variance_limit(alpha, 0.0, 1.0);
    const double rel = std::abs(fitted / limit - 1.0);
    rep.add_check("v1_extrapolation_alpha_" + tag, rel, 0.0, rel_threshold,
                  rel <= rel_threshold);
  }
  const long replicas = cfg.get_int("replicas", 0);
  if (replicas > 0) {
    const double alpha = alphas.front();
    const double eps = cfg.get_double("mc_eps", std::pow(2.0, -8));
    const int substeps = int(cfg.get_int("substeps", 512));
    const long seed = cfg.get_int("seed", 31007);
    const int workers = int(cfg.get_int("workers", 1));
    const Grid grid = Grid::uniform(0.0, 1.0, substeps + 1, eps);
    const FactorizedSampler sampler(grid, alpha);
    const NoiseStream root{uint64_t(seed)};
    std::vector<detail::MeanVar> mv(std::max(1, workers));
    parallel_for_replicas(replicas, workers, [&](long r) {
      const SamplePath p = sampler.sample(root.substream(r), 2);
      // trapezoid-in-the-inner-factor second iterated integral (1, 2)
      Complex area{0.0, 0.0};
      const std::vector<Complex>& x = p.values[0];
      const std::vector<Complex>& y = p.values[1];
      for (int k = 0; k < substeps; ++k) {
        area += 0.5 * (y[k] + y[k + 1] - 2.0 * y[0]) * (x[k + 1] - x[k]);
      }
      mv[workers <= 1 ? 0 : int(r % workers)].add(2.0 * std::norm(area));
    });
    for (std::size_t w = 1; w < mv.size(); ++w) mv[0].merge(mv[w]);
    const double oracle =
        levy_variance_V1(Complex(0, 0), Complex(1, 0), eps, alpha, 1e-9);
    const double dev = std::abs(mv[0].mean() - oracle) / mv[0].std_error();
    rep.add_check("v1_mc_consistency", dev, mv[0].std_error(), 3.0,
                  dev <= 3.0);
  }
  return rep;
}

// ---- divergence ----------------------------------------------------------
// The mixed-conjugation component V2: divergence exponent below alpha=1/4
// (regression on ladder differences) and boundedness above; optional Monte
// Carlo check of E[A^2] = V1 + V2 for the real-part area.
inline ExperimentReport cmd_divergence(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.command = "divergence";
  rep.config = cfg;
  const double alpha_div = cfg.get_double("alpha_divergent", 0.15);
  const double alpha_bnd = cfg.get_double("alpha_bounded", 0.35);
  const int kmin = int(cfg.get_int("kmin", 4));
  const int kmax = int(cfg.get_int("kmax", 9));
  {
    std::vector<int> levels;
    std::vector<double> vals;
    SweepRows sweep;
    for (int k = kmin; k <= kmax; ++k) {
      levels.push_back(k);
      vals.push_back(levy_variance_V2(0.0, 1.0, std::pow(2.0, -k), alpha_div));
      sweep.push_back({std::pow(2.0, -k), vals.back(), 0.0});
    }
    rep.sweeps["v2_ladder_alpha_" + detail::fmt_alpha(alpha_div)] = sweep;
    const double slope = ladder_log_slope(levels, vals, true);
    const double target = 1.0 - 4.0 * alpha_div;
    rep.add_check("v2_divergence_slope_alpha_" + detail::fmt_alpha(alpha_div),
                  slope, 0.0, 0.05, std::abs(slope - target) <= 0.05);
  }
  {
    SweepRows sweep;
    double lo = 1e300, hi = 0.0;
    for (int k = kmax - 2; k <= kmax; ++k) {
      const double v = levy_variance_V2(0.0, 1.0, std::pow(2.0, -k), alpha_bnd);
      sweep.push_back({std::pow(2.0, -k), v, 0.0});
      lo = std::min(lo, std::abs(v));
      hi = std::max(hi, std::abs(v));
    }
    rep.sweeps["v2_ladder_alpha_" + detail::fmt_alpha(alpha_bnd)] = sweep;
    rep.add_check("v2_bounded_ratio_alpha_" + detail::fmt_alpha(alpha_bnd),
                  hi / lo, 0.0, 1.5, hi / lo < 1.5);
  }
  const long replicas = cfg.get_int("replicas", 0);
  if (replicas > 0) {
    // E[A^2] for the area of the real-part paths equals V1 + V2 once the
    // paths are scaled to E[X_t^2] = |t|^{2 alpha}; the sampled field
    // carries E|Gamma_t|^2 = |t|^{2 alpha} / 2, so the scale factor is 2.
    const double alpha = cfg.get_double("alpha", 0.3);
    const double eps = cfg.get_double("mc_eps", 0.125);
    const int substeps = int(cfg.get_int("substeps", 128));
    const long seed = cfg.get_int("seed", 60110);
    const int workers = int(cfg.get_int("workers", 1));
    const Grid grid = Grid::uniform(0.0, 1.0, substeps + 1, eps);
    const FactorizedSampler sampler(grid, alpha);
    const NoiseStream root{uint64_t(seed)};
    std::vector<detail::MeanVar> mv(std::max(1, workers));
    const double scale = 2.0;
    parallel_for_replicas(replicas, workers, [&](long r) {
      const SamplePath p = sampler.sample(root.substream(r), 2);
      double area = 0.0;
      for (int k = 0; k < substeps; ++k) {
        const double dx = scale * (p.values[0][k + 1].real() -
                                   p.values[0][k].real());
        const double ymid = scale * (0.5 * (p.values[1][k].real() +
                                            p.values[1][k + 1].real()) -
                                     p.values[1][0].real());
        area += ymid * dx;
      }
      mv[workers <= 1 ? 0 : int(r % workers)].add(area * area);
    });
    for (std::size_t w = 1; w < mv.size(); ++w) mv[0].merge(mv[w]);
    const double oracle =
        levy_variance_V1(Complex(0, 0), Complex(1, 0), eps, alpha, 1e-9) +
        levy_variance_V2(0.0, 1.0, eps, alpha);
    const double dev = std::abs(mv[0].mean() - oracle) / mv[0].std_error();
    rep.add_check("area_decomposition_mc", dev, mv[0].std_error(), 3.0,
                  dev <= 3.0);
  }
  return rep;
}

// ---- signature -----------------------------------------------------------
// Chen audit of the assembled rough path and the shuffle-residual halving
// law under substep doubling.
inline ExperimentReport cmd_signature(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.command = "signature";
  rep.config = cfg;
  const double alpha = cfg.get_double("alpha", 0.3);
  const long seed = cfg.get_int("seed", 5150);
  {
    const double eps = cfg.get_double("chen_eps", 0.0625);
    const int cells = int(cfg.get_int("cells", 6));
    const int substeps = int(cfg.get_int("chen_substeps", 32));
    const int depth = std::min(4, int(std::floor(1.0 / alpha)));
    const Grid fine = Grid::uniform(0.0, 1.0, cells * substeps + 1, eps);
    const int K = series_truncation_order(fine, alpha);
    const SamplePath path =
        SeriesSampler(fine, alpha, K).sample(NoiseStream(uint64_t(seed)), 2);
    std::vector<double> times;
    for (int c = 0; c <= cells; ++c) {
      times.push_back(fine.points[c * substeps].real());
    }
    const RoughPath rp =
        build_signature(path.values, substeps, times, depth, alpha, eps);
    const double resid = check_chen(rp).max_rel_residual;
    rep.add_check("chen_max_rel_residual", resid, 0.0, 1e-12, resid < 1e-12);
  }
  {
    const double eps = cfg.get_double("shuffle_eps", 1.0 / 64.0);
    const int cells = int(cfg.get_int("shuffle_cells", 4));
    const int m0 = int(cfg.get_int("shuffle_substeps", 128));
    double resid[2];
    for (int pass = 0; pass < 2; ++pass) {
      const int substeps = m0 << pass;
      const Grid fine =
          Grid::uniform(-0.25, 0.25, cells * substeps + 1, eps);
      const int K = series_truncation_order(fine, alpha);
      const SamplePath path = SeriesSampler(fine, alpha, K)
                                  .sample(NoiseStream(uint64_t(seed) + 1), 2);
      std::vector<double> times;
      for (int c = 0; c <= cells; ++c) {
        times.push_back(fine.points[c * substeps].real());
      }
      const RoughPath rp =
          build_signature(path.values, substeps, times, 2, alpha, eps);
      resid[pass] = check_shuffle(rp).max_abs_residual;
    }
    const double ratio = resid[0] / resid[1];
    rep.add_check("shuffle_halving_ratio", ratio, 0.0, 0.4,
                  std::abs(ratio - 2.0) <= 0.4);
  }
  return rep;
}

// ---- sew-check -----------------------------------------------------------
inline ExperimentReport cmd_sew_check(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.command = "sew-check";
  rep.config = cfg;
  // Lambda(delta germ) for the linear-path Euler germ s(t-s).
  double lam_dev = 0.0;
  for (auto [s, t] : {std::pair{0.0, 1.0}, {0.3, 1.7}, {-1.0, 0.5}}) {
    const auto h = [](double tt, double uu, double ss) {
      return Complex((ss - uu) * (tt - uu), 0.0);
    };
    const Complex lam = sew_pair(h, s, t, 1e-13).value;
    lam_dev = std::max(lam_dev,
                       std::abs(lam - Complex(-0.5 * (t - s) * (t - s), 0.0)));
  }
  rep.add_check("euler_germ_lambda", lam_dev, 0.0, 1e-10, lam_dev < 1e-10);
  // (Id - Lambda delta) reproduces int X dX for polynomial X, degree <= 3.
  double int_dev = 0.0;
  for (int degree = 1; degree <= 3; ++degree) {
    const auto X = [degree](double u) {
      return std::pow(u, degree) - 2.0 * u + 1.0;
    };
    const auto germ = [&](double tt, double ss) {
      return Complex(X(ss) * (X(tt) - X(ss)), 0.0);
    };
    const Complex got = sewn_integral(germ, 0.0, 1.0, 1e-13);
    const double expect = 0.5 * (X(1.0) * X(1.0) - X(0.0) * X(0.0));
    int_dev = std::max(int_dev, std::abs(got - Complex(expect, 0.0)));
  }
  rep.add_check("polynomial_x_dx", int_dev, 0.0, 1e-9, int_dev < 1e-9);
  return rep;
}

// ---- solve ---------------------------------------------------------------
inline ExperimentReport cmd_solve(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.command = "solve";
  rep.config = cfg;
  const VectorField exp_field{
      1, 1, std::numeric_limits<double>::infinity(),
      [](int, int, const std::vector<Complex>& y) { return y[0]; },
      [](int, int, int, const std::vector<Complex>&) {
        return Complex(1.0, 0.0);
      },
      nullptr};
  // smooth driver X_t = t: global order 2
  {
    SweepRows sweep;
    double prev_err = 0.0, worst_ratio_dev = 0.0;
    for (int n : {9, 17, 33}) {
      std::vector<double> times;
      std::vector<Complex> values;
      for (int i = 0; i < n; ++i) {
        times.push_back(double(i) / (n - 1));
        values.emplace_back(times.back(), 0.0);
      }
      const RoughPath rp =
          lift_geometric_1d(values, times, 2, 0.5 - 1e-9, 0.0);
      const SolveResult res = solve_rde({Complex(1.0, 0.0)}, exp_field, rp);
      const double err = std::abs(res.path.z.back()[0] - std::exp(1.0));
      sweep.push_back({double(n - 1), err, 0.0});
      if (prev_err > 0.0) {
        worst_ratio_dev = std::max(worst_ratio_dev,
                                   std::abs(prev_err / err - 4.0));
      }
      prev_err = err;
    }
    rep.sweeps["smooth_refinement"] = sweep;
    rep.add_check("smooth_order2_ratio_dev", worst_ratio_dev, 0.0, 0.5,
                  worst_ratio_dev <= 0.5);
  }
  // rough driver, d = 1, alpha = 0.4: exponential identity, monotone
  {
    const double alpha = cfg.get_double("alpha", 0.4);
    const double eps = cfg.get_double("eps", 0.25);
    const long seed = cfg.get_int("seed", 90210);
    const int finest = 32;
    const Grid fine = Grid::uniform(0.0, 1.0, finest + 1, eps);
    const int K = series_truncation_order(fine, alpha);
    const SamplePath path =
        SeriesSampler(fine, alpha, K).sample(NoiseStream(uint64_t(seed)), 1);
    SweepRows sweep;
    double prev_sup = 1e300;
    bool monotone = true;
    ControlledPath last_solution;
    for (int cells : {8, 16, 32}) {
      const int stride = finest / cells;
      std::vector<double> times;
      std::vector<Complex> values;
      for (int k = 0; k <= cells; ++k) {
        times.push_back(fine.points[k * stride].real());
        values.push_back(path.values[0][k * stride]);
      }
      const RoughPath rp = lift_geometric_1d(values, times, 2, alpha, eps);
      const SolveResult res = solve_rde({Complex(1.0, 0.0)}, exp_field, rp);
      double sup = 0.0;
      for (int k = 0; k <= cells; ++k) {
        sup = std::max(sup, std::abs(res.path.z[k][0] -
                                     std::exp(values[k] - values[0])));
      }
      sweep.push_back({double(cells), sup, 0.0});
      monotone = monotone && sup < prev_sup;
      prev_sup = sup;
      last_solution = res.path;
    }
    rep.sweeps["rough_refinement"] = sweep;
    rep.add_check("rough_exponential_monotone", monotone ? 1.0 : 0.0, 0.0,
                  1.0, monotone);
    // Picard agrees with the one-step march.
    {
      const int cells = 16;
      const int stride = finest / cells;
      std::vector<double> times;
      std::vector<Complex> values;
      for (int k = 0; k <= cells; ++k) {
        times.push_back(fine.points[k * stride].real());
        values.push_back(path.values[0][k * stride]);
      }
      const RoughPath rp = lift_geometric_1d(values, times, 2, alpha, eps);
      const SolveResult one = solve_rde({Complex(1.0, 0.0)}, exp_field, rp);
      const SolveResult pic =
          solve_rde({Complex(1.0, 0.0)}, exp_field, rp, true, 1e-12);
      double gap = 0.0;
      for (int k = 0; k <= cells; ++k) {
        gap = std::max(gap, std::abs(one.path.z[k][0] - pic.path.z[k][0]));
      }
      rep.add_check("picard_vs_one_step", gap, 0.0, 1e-8, gap < 1e-8);
    }
    const std::string out_dir = cfg.get_string("out", "");
    if (!out_dir.empty()) {
      write_solution_csv(last_solution, out_dir + "/solution.csv");
    }
  }
  return rep;
}

// ---- emit ----------------------------------------------------------------
// Re-emits the sweeps of a stored report as tidy CSV files; returns the
// list of files written.
inline std::vector<std::string> cmd_emit(const ExperimentConfig& cfg) {
  const std::string report_path = cfg.get_string("report", "");
  if (report_path.empty()) {
    throw std::runtime_error("emit: missing 'report' config key");
  }
  const std::string out_dir = cfg.get_string("out", ".");
  const ExperimentReport rep = ExperimentReport::read(report_path);
  std::vector<std::string> written;
  for (const auto& [name, rows] : rep.sweeps) {
    const std::string path = out_dir + "/" + rep.command + "_" + name + ".csv";
    write_sweep_csv(rows, path);
    written.push_back(path);
  }
  return written;
}

}  // namespace afbm

#endif  // AFBM_EXPERIMENTS_HPP
