#ifndef AFBM_SAMPLER_HPP
#define AFBM_SAMPLER_HPP

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "afbm/grid.hpp"
#include "afbm/noise.hpp"
#include "afbm/quadrature.hpp"
#include "afbm/special_functions.hpp"

// Two exact-in-law samplers for Gamma on a grid:
//  * SeriesSampler      - truncated orthonormal expansion of Gamma',
//                         integrated along the grid polyline (interior
//                         grids only; the expansion contrast ratio tends
//                         to 1 on the real axis).
//  * FactorizedSampler  - Cholesky factor of the exact joint covariance of
//                         (Re Gamma, Im Gamma), valid on the closed upper
//                         half-plane including the boundary.
// Both are driven by counter-based NoiseStream draws, so a fixed seed gives
// bit-identical paths.
namespace afbm {

struct SamplePath {
  double alpha = 0.0;
  std::uint64_t seed = 0;
  std::string method;  // "series" or "factorized"
  int truncation = 0;  // series truncation order K (0 for factorized)
  Grid grid;
  // values[c][i] = Gamma^{(c)} at grid.points[i]
  std::vector<std::vector<Complex>> values;

  int components() const { return int(values.size()); }
};

// Smallest K with the geometric tail bound
//   sum_{k >= K} |f_k(z)|^2 <= tol^2   uniformly over the grid,
// driven by the contrast ratio q = max_z |(z-i)/(z+i)| < 1.
inline int series_truncation_order(const Grid& grid, double alpha,
                                   double tol = 1e-8) {
  require_alpha(alpha);
  double q = 0.0;
  double scale = 0.0;
  for (Complex z : grid.points) {
    q = std::max(q, std::abs((z - kImagUnit) / (z + kImagUnit)));
    scale = std::max(
        scale, std::abs(cpow((z + kImagUnit) / (2.0 * kImagUnit),
                             2.0 * alpha - 2.0)));
  }
  if (q >= 1.0) {
    throw std::invalid_argument(
        "series_truncation_order: grid touches the real axis");
  }
  const double amp2 = std::pow(4.0, alpha - 1.0) * kernel_constant(alpha) *
                      scale * scale;
  // |f_k(z)|^2 <= amp2 * ((2-2a)_k / k!) q^{2k}; the Pochhammer ratio grows
  // polynomially, so scan k until the geometric tail estimate drops below
  // tol^2.
  const double target = tol * tol;
  double qk = 1.0;
  for (int k = 0; k < 2'000'000; ++k) {
    const double term =
        amp2 * pochhammer_over_factorial(2.0 - 2.0 * alpha, k) * qk;
    if (term / (1.0 - q * q) < target) return std::max(k, 1);
    qk *= q * q;
  }
  throw std::runtime_error("series_truncation_order: did not converge");
}

// Precomputes quadrature nodes along the grid polyline and the coefficient
// matrix f_k(node), so that each replica costs one (nodes x K) mat-vec per
// component.
class SeriesSampler {
 public:
  SeriesSampler(Grid grid, double alpha, int truncation)
      : grid_(std::move(grid)), alpha_(alpha), truncation_(truncation) {
    require_alpha(alpha_);
    if (truncation_ < 1) throw std::invalid_argument("SeriesSampler: K < 1");
    if (grid_.min_height() <= 0.0) {
      throw std::invalid_argument(
          "SeriesSampler: series sampling needs an interior grid; use the "
          "factorized sampler on the real axis");
    }
    anchor_ = grid_.index_closest_to_origin();
    build_segments();
  }

  SeriesSampler(const Grid& grid, double alpha)
      : SeriesSampler(grid, alpha, series_truncation_order(grid, alpha)) {}

  int truncation() const { return truncation_; }
  const Grid& grid() const { return grid_; }

  // One replica: draws xi_0..xi_{K-1} per component from
  // stream.substream(component) and integrates the truncated Gamma' from
  // the anchor point (the grid point closest to the origin, where the path
  // is pinned to 0).
  SamplePath sample(const NoiseStream& stream, int n_components = 1) const {
    SamplePath path;
    path.alpha = alpha_;
    path.seed = stream.seed();
    path.method = "series";
    path.truncation = truncation_;
    path.grid = grid_;
    path.values.resize(n_components);
    std::vector<Complex> xi(truncation_);
    for (int c = 0; c < n_components; ++c) {
      const NoiseStream sub = stream.substream(std::uint64_t(c));
      for (int k = 0; k < truncation_; ++k) xi[k] = sub.complex_gaussian(k);
      path.values[c] = integrate_path(xi);
    }
    return path;
  }

  // Gamma' at an arbitrary interior point for the given noise vector.
  Complex derivative_at(Complex z, const std::vector<Complex>& xi) const {
    Complex acc{0.0, 0.0};
    for (int k = 0; k < truncation_; ++k) {
      acc += series_coefficient(k, z, alpha_) * xi[k];
    }
    return acc;
  }

  std::vector<Complex> draw_noise(const NoiseStream& stream) const {
    std::vector<Complex> xi(truncation_);
    for (int k = 0; k < truncation_; ++k) xi[k] = stream.complex_gaussian(k);
    return xi;
  }

 private:
  // Panels no longer than half the local height put the nearest
  // singularity of Gamma' several panel widths away, so 16-point
  // Gauss-Legendre per panel is converged far below 1e-9 relative.
  void build_segments() {
    const GaussLegendreRule& rule = gauss_legendre(16);
    for (int i = 0; i + 1 < grid_.size(); ++i) {
      std::vector<std::pair<Complex, Complex>> panels;
      split_panel(grid_.points[i], grid_.points[i + 1], panels, 0);
      for (auto [a, b] : panels) {
        const Complex mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
          const Complex z = mid + rule.nodes[j] * half;
          node_weight_.push_back(half * rule.weights[j]);
          node_segment_.push_back(i);
          for (int k = 0; k < truncation_; ++k) {
            node_coeff_.push_back(series_coefficient(k, z, alpha_));
          }
        }
      }
    }
  }

  void split_panel(Complex a, Complex b,
                   std::vector<std::pair<Complex, Complex>>& out,
                   int depth) const {
    const double len = std::abs(b - a);
    const double height = std::min(a.imag(), b.imag());
    if (len <= 0.5 * height || depth >= 24) {
      out.emplace_back(a, b);
      return;
    }
    const Complex mid = 0.5 * (a + b);
    split_panel(a, mid, out, depth + 1);
    split_panel(mid, b, out, depth + 1);
  }

  std::vector<Complex> integrate_path(const std::vector<Complex>& xi) const {
    // Segment integrals of the truncated Gamma'.
    std::vector<Complex> seg(grid_.size() - 1, Complex{0.0, 0.0});
    const std::size_t n_nodes = node_weight_.size();
    for (std::size_t j = 0; j < n_nodes; ++j) {
      const Complex* row = &node_coeff_[j * std::size_t(truncation_)];
      Complex deriv{0.0, 0.0};
      for (int k = 0; k < truncation_; ++k) deriv += row[k] * xi[k];
      seg[node_segment_[j]] += node_weight_[j] * deriv;
    }
    // Cumulative values pinned to 0 at the anchor.
    std::vector<Complex> values(grid_.size());
    values[anchor_] = {0.0, 0.0};
    for (int i = anchor_ + 1; i < grid_.size(); ++i) {
      values[i] = values[i - 1] + seg[i - 1];
    }
    for (int i = anchor_ - 1; i >= 0; --i) {
      values[i] = values[i + 1] - seg[i];
    }
    return values;
  }

  Grid grid_;
  double alpha_;
  int truncation_;
  int anchor_ = 0;
  std::vector<Complex> node_weight_;    // GL weight times panel half-length
  std::vector<int> node_segment_;      // which grid segment a node feeds
  std::vector<Complex> node_coeff_;    // row-major nodes x K matrix of f_k
};

// Exact joint Gaussian sampler from the closed-form covariance
// E[Gamma_z conj(Gamma_w)] (pseudo-covariance is identically zero), via a
// Cholesky factor of the stacked real covariance of (Re Gamma, Im Gamma).
class FactorizedSampler {
 public:
  FactorizedSampler(Grid grid, double alpha)
      : grid_(std::move(grid)), alpha_(alpha) {
    require_alpha(alpha_);
    const int n = grid_.size();
    Eigen::MatrixXd cov(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const Complex h = covariance(grid_.points[i], grid_.points[j], alpha_);
        cov(i, j) = 0.5 * h.real();          // E[X_i X_j]
        cov(n + i, n + j) = 0.5 * h.real();  // E[Y_i Y_j]
        cov(i, n + j) = -0.5 * h.imag();     // E[X_i Y_j]
        cov(n + i, j) = 0.5 * h.imag();      // E[Y_i X_j]
      }
    }
    // Jitter ladder: the matrix is singular by construction whenever the
    // grid contains the origin (the path is pinned there), so escalate a
    // diagonal bump until the factorization succeeds.
    const double scale = std::max(cov.diagonal().maxCoeff(), 1.0);
    for (double jitter = 1e-14; jitter <= 1.0000001e-8; jitter *= 10.0) {
      Eigen::MatrixXd bumped = cov;
      bumped.diagonal().array() += jitter * scale;
      Eigen::LLT<Eigen::MatrixXd> llt(bumped);
      if (llt.info() == Eigen::Success) {
        factor_ = llt.matrixL();
        return;
      }
    }
    throw std::runtime_error(
        "FactorizedSampler: covariance not positive definite within the "
        "jitter ladder");
  }

  const Grid& grid() const { return grid_; }

  SamplePath sample(const NoiseStream& stream, int n_components = 1) const {
    SamplePath path;
    path.alpha = alpha_;
    path.seed = stream.seed();
    path.method = "factorized";
    path.grid = grid_;
    path.values.resize(n_components);
    const int n = grid_.size();
    Eigen::VectorXd g(2 * n);
    for (int c = 0; c < n_components; ++c) {
      const NoiseStream sub = stream.substream(std::uint64_t(c));
      for (int i = 0; i < 2 * n; ++i) g(i) = sub.gaussian(i);
      Eigen::VectorXd v = factor_ * g;
      path.values[c].resize(n);
      for (int i = 0; i < n; ++i) path.values[c][i] = Complex(v(i), v(n + i));
    }
    return path;
  }

 private:
  Grid grid_;
  double alpha_;
  Eigen::MatrixXd factor_;  // lower-triangular Cholesky factor (2n x 2n)
};

inline SamplePath sample_series(const Grid& grid, double alpha, int truncation,
                                const NoiseStream& stream,
                                int n_components = 1) {
  return SeriesSampler(grid, alpha, truncation).sample(stream, n_components);
}

inline SamplePath sample_factorized(const Grid& grid, double alpha,
                                    const NoiseStream& stream,
                                    int n_components = 1) {
  return FactorizedSampler(grid, alpha).sample(stream, n_components);
}

// ---- CSV round trip ------------------------------------------------------

inline void write_sample_path_csv(const SamplePath& path, std::ostream& out) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "# alpha=%.17g seed=%llu method=%s K=%d\n",
                path.alpha, static_cast<unsigned long long>(path.seed),
                path.method.c_str(), path.truncation);
  out << buf << "component,re_t,im_t,re_value,im_value\n";
  for (int c = 0; c < path.components(); ++c) {
    for (int i = 0; i < path.grid.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g\n", c,
                    path.grid.points[i].real(), path.grid.points[i].imag(),
                    path.values[c][i].real(), path.values[c][i].imag());
      out << buf;
    }
  }
}

inline void write_sample_path_csv(const SamplePath& path,
                                  const std::string& filename) {
  std::ofstream out(filename);
  if (!out) throw std::runtime_error("cannot open " + filename);
  write_sample_path_csv(path, out);
}

inline SamplePath read_sample_path_csv(std::istream& in) {
  SamplePath path;
  std::string line;
  if (!std::getline(in, line) || line.empty() || line[0] != '#') {
    throw std::runtime_error("sample path CSV: missing header");
  }
  {
    std::istringstream hs(line.substr(1));
    std::string tok;
    while (hs >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
      if (key == "alpha") path.alpha = std::stod(val);
      if (key == "seed") path.seed = std::stoull(val);
      if (key == "method") path.method = val;
      if (key == "K") path.truncation = std::stoi(val);
    }
  }
  std::getline(in, line);  // column header
  bool grid_done = false;
  int last_component = -1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    int c;
    double rt, it, rv, iv;
    if (std::sscanf(line.c_str(), "%d,%lg,%lg,%lg,%lg", &c, &rt, &it, &rv,
                    &iv) != 5) {
      throw std::runtime_error("sample path CSV: bad row: " + line);
    }
    if (c != last_component) {
      path.values.emplace_back();
      last_component = c;
      if (c > 0) grid_done = true;
    }
    if (!grid_done) path.grid.points.emplace_back(rt, it);
    path.values.back().emplace_back(rv, iv);
  }
  return path;
}

inline SamplePath read_sample_path_csv(const std::string& filename) {
  std::ifstream in(filename);
  if (!in) throw std::runtime_error("cannot open " + filename);
  return read_sample_path_csv(in);
}

}  // namespace afbm

#endif  // AFBM_SAMPLER_HPP
