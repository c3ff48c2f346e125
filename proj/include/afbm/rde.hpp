#ifndef AFBM_RDE_HPP
#define AFBM_RDE_HPP

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "afbm/increments.hpp"
#include "afbm/sewing.hpp"
#include "afbm/signature.hpp"

// Controlled paths of order 2 and the rough differential equation solver
// dy = sigma(y) dX via the corrected (second-order) Euler scheme, a Picard
// reference mode built on the grid sewing map, and the level-N one-cell
// Riemann step.
namespace afbm {

// A path together with its Gubinelli derivative on the driver's grid.
// The remainder is defined as the residual of the decomposition
//   (delta z)_{ts}(i) = (delta X)_{ts}(j) zeta_s(j, i) + r_{ts}(i),
// so it is recoverable from (z, zeta) and the driver; see
// controlled_remainder below.
struct ControlledPath {
  std::vector<double> times;
  int driver_dim = 0;
  int state_dim = 0;
  // z[k][i]: state component i at time index k
  std::vector<std::vector<Complex>> z;
  // zeta[k][j * state_dim + i]: derivative of component i along driver j
  std::vector<std::vector<Complex>> zeta;

  int points() const { return int(times.size()); }
  Complex deriv(int k, int j, int i) const {
    return zeta[k][j * state_dim + i];
  }
};

// The remainder increments r_{ts}(i), one dense 2-increment per state
// component, measured against the driver's level-1 data.
inline std::vector<Increment2> controlled_remainder(const ControlledPath& cp,
                                                    const RoughPath& rp) {
  if (rp.dimension() != cp.driver_dim || rp.points() != cp.points()) {
    throw std::invalid_argument("controlled_remainder: dimension mismatch");
  }
  std::vector<Increment2> out;
  for (int i = 0; i < cp.state_dim; ++i) {
    Increment2 r(cp.times);
    for (int t = 0; t < cp.points(); ++t) {
      for (int s = 0; s < cp.points(); ++s) {
        Complex acc = cp.z[t][i] - cp.z[s][i];
        for (int j = 0; j < cp.driver_dim; ++j) {
          acc -= rp.entry(1, t, s, {j}) * cp.deriv(s, j, i);
        }
        r.at(t, s) = acc;
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

// Analytic map phi : C^in -> C^out with gradient, used by compose_map.
struct AnalyticMap {
  int in_dim = 1;
  int out_dim = 1;
  double radius = std::numeric_limits<double>::infinity();
  std::function<Complex(int c, const std::vector<Complex>&)> value;
  std::function<Complex(int c, int c1, const std::vector<Complex>&)> grad;
};

// Vector field sigma(j, i)(y): the coefficient of state component i along
// driver component j, with first and (optionally) second derivatives.
struct VectorField {
  int driver_dim = 1;
  int state_dim = 1;
  double radius = std::numeric_limits<double>::infinity();
  std::function<Complex(int j, int i, const std::vector<Complex>&)> sigma;
  std::function<Complex(int j, int i, int c1, const std::vector<Complex>&)>
      dsigma;
  std::function<Complex(int j, int i, int c1, int c2,
                        const std::vector<Complex>&)>
      d2sigma;  // needed only for order-3 stepping
};

namespace detail {

inline double state_norm(const std::vector<Complex>& y) {
  double acc = 0.0;
  for (const Complex& v : y) acc += std::norm(v);
  return std::sqrt(acc);
}

inline void require_in_ball(const std::vector<Complex>& y, double radius,
                            const char* who) {
  if (state_norm(y) > radius) {
    throw std::runtime_error(std::string(who) +
                             ": state left the analyticity ball");
  }
}

}  // namespace detail

// Composition with an analytic map: z -> phi(z), zeta -> zeta * grad phi,
// with the remainder picking up the Taylor defect by definition.
inline ControlledPath compose_map(const ControlledPath& cp,
                                  const AnalyticMap& phi) {
  if (phi.in_dim != cp.state_dim) {
    throw std::invalid_argument("compose_map: dimension mismatch");
  }
  ControlledPath out;
  out.times = cp.times;
  out.driver_dim = cp.driver_dim;
  out.state_dim = phi.out_dim;
  out.z.assign(cp.points(), std::vector<Complex>(phi.out_dim));
  out.zeta.assign(cp.points(),
                  std::vector<Complex>(cp.driver_dim * phi.out_dim));
  for (int k = 0; k < cp.points(); ++k) {
    detail::require_in_ball(cp.z[k], phi.radius, "compose_map");
    for (int c = 0; c < phi.out_dim; ++c) {
      out.z[k][c] = phi.value(c, cp.z[k]);
      for (int j = 0; j < cp.driver_dim; ++j) {
        Complex acc{0.0, 0.0};
        for (int c1 = 0; c1 < cp.state_dim; ++c1) {
          acc += cp.deriv(k, j, c1) * phi.grad(c, c1, cp.z[k]);
        }
        out.zeta[k][j * phi.out_dim + c] = acc;
      }
    }
  }
  return out;
}

// Rough integral of a controlled integrand against the driver.  The
// integrand m is a controlled path whose state index is the flattened pair
// (j, i) = j * out_dim + i of (driver slot to contract, output component):
// the result component i has increments
//   delta zhat(i) = delta X(j) m(j,i) + Gamma^2(j, j2) mu(j2, (j,i))
//                   + Lambda(delta of the germ),
// computed with the grid sewing map.  zhat starts at 0.
inline ControlledPath rough_integral(const ControlledPath& integrand,
                                     const RoughPath& rp, int out_dim) {
  const int d = rp.dimension();
  if (integrand.driver_dim != d ||
      integrand.state_dim != d * out_dim ||
      integrand.points() != rp.points()) {
    throw std::invalid_argument("rough_integral: dimension mismatch");
  }
  const int npts = rp.points();
  ControlledPath out;
  out.times = integrand.times;
  out.driver_dim = d;
  out.state_dim = out_dim;
  out.z.assign(npts, std::vector<Complex>(out_dim, Complex(0.0, 0.0)));
  out.zeta.assign(npts, std::vector<Complex>(d * out_dim));
  for (int k = 0; k < npts; ++k) {
    for (int j = 0; j < d; ++j) {
      for (int i = 0; i < out_dim; ++i) {
        out.zeta[k][j * out_dim + i] = integrand.z[k][j * out_dim + i];
      }
    }
  }
  for (int i = 0; i < out_dim; ++i) {
    // Germ for component i on every grid pair, then (Id - Lambda delta).
    Increment2 germ(integrand.times);
    for (int t = 0; t < npts; ++t) {
      for (int s = 0; s < npts; ++s) {
        Complex acc{0.0, 0.0};
        for (int j = 0; j < d; ++j) {
          acc += rp.entry(1, t, s, {j}) * integrand.z[s][j * out_dim + i];
          for (int j2 = 0; j2 < d; ++j2) {
            acc += rp.entry(2, t, s, {j, j2}) *
                   integrand.deriv(s, j2, j * out_dim + i);
          }
        }
        germ.at(t, s) = acc;
      }
    }
    const Increment3 dgerm = delta2(germ);
    const Increment2 lam = sew_grid(dgerm);
    for (int k = 0; k < npts; ++k) {
      out.z[k][i] = germ.at(k, 0) - lam.at(k, 0);
    }
  }
  return out;
}

struct SolveReport {
  bool picard_mode = false;
  bool converged = true;
  int picard_iterations = 0;
  double final_change = 0.0;
  int tau_halvings = 0;
};

struct SolveResult {
  ControlledPath path;
  SolveReport report;
};

namespace detail {

// One corrected-Euler cell update (the N = 2 Riemann step).
inline std::vector<Complex> euler_step(const std::vector<Complex>& y,
                                       const VectorField& sigma,
                                       const RoughPath& rp, int t, int s) {
  const int d = rp.dimension();
  const int l = sigma.state_dim;
  std::vector<Complex> out = y;
  for (int i = 0; i < l; ++i) {
    for (int a = 0; a < d; ++a) {
      out[i] += rp.entry(1, t, s, {a}) * sigma.sigma(a, i, y);
      for (int b = 0; b < d; ++b) {
        Complex mu{0.0, 0.0};
        for (int c1 = 0; c1 < l; ++c1) {
          mu += sigma.dsigma(a, i, c1, y) * sigma.sigma(b, c1, y);
        }
        out[i] += rp.entry(2, t, s, {a, b}) * mu;
      }
    }
  }
  return out;
}

// Picard iteration on the index range [lo, hi] of the grid, writing the
// solution values into y_path[lo..hi]; y_path[lo] is the initial value.
inline bool picard_on_range(std::vector<std::vector<Complex>>& y_path,
                            const VectorField& sigma, const RoughPath& rp,
                            int lo, int hi, double rel_tol, int max_iter,
                            int& iterations, double& final_change) {
  const int d = rp.dimension();
  const int l = sigma.state_dim;
  const int n = hi - lo + 1;
  // Restrict the driver data to the subrange by working with global
  // indices; the integrand controlled path is built on the subrange grid.
  std::vector<double> sub_times(rp.times().begin() + lo,
                                rp.times().begin() + hi + 1);
  for (int it = 0; it < max_iter; ++it) {
    // integrand m(j, i) = sigma(j, i)(y), with Gubinelli derivative
    // mu(j2, (j,i)) = dsigma(j,i)/dy_c * sigma(j2, c)(y).
    ControlledPath m;
    m.times = sub_times;
    m.driver_dim = d;
    m.state_dim = d * l;
    m.z.assign(n, std::vector<Complex>(d * l));
    m.zeta.assign(n, std::vector<Complex>(d * d * l));
    for (int k = 0; k < n; ++k) {
      const std::vector<Complex>& y = y_path[lo + k];
      require_in_ball(y, sigma.radius, "solve_rde");
      for (int j = 0; j < d; ++j) {
        for (int i = 0; i < l; ++i) {
          m.z[k][j * l + i] = sigma.sigma(j, i, y);
          for (int j2 = 0; j2 < d; ++j2) {
            Complex acc{0.0, 0.0};
            for (int c1 = 0; c1 < l; ++c1) {
              acc += sigma.dsigma(j, i, c1, y) * sigma.sigma(j2, c1, y);
            }
            m.zeta[k][j2 * (d * l) + (j * l + i)] = acc;
          }
        }
      }
    }
    // integral against the driver restricted to [lo, hi]
    Increment2 germ(sub_times);
    double change = 0.0;
    for (int i = 0; i < l; ++i) {
      for (int t = 0; t < n; ++t) {
        for (int s = 0; s < n; ++s) {
          Complex acc{0.0, 0.0};
          for (int j = 0; j < d; ++j) {
            acc += rp.entry(1, lo + t, lo + s, {j}) * m.z[s][j * l + i];
            for (int j2 = 0; j2 < d; ++j2) {
              acc += rp.entry(2, lo + t, lo + s, {j, j2}) *
                     m.zeta[s][j2 * (d * l) + (j * l + i)];
            }
          }
          germ.at(t, s) = acc;
        }
      }
      const Increment2 lam = sew_grid(delta2(germ));
      for (int k = 1; k < n; ++k) {
        const Complex next =
            y_path[lo][i] + germ.at(k, 0) - lam.at(k, 0);
        change = std::max(change, std::abs(next - y_path[lo + k][i]));
        y_path[lo + k][i] = next;
      }
    }
    double scale = 0.0;
    for (int k = 0; k < n; ++k) scale = std::max(scale, state_norm(y_path[lo + k]));
    iterations += 1;
    final_change = change;
    if (change <= rel_tol * std::max(1.0, scale)) return true;
  }
  return false;
}

}  // namespace detail

// Solve dy = sigma(y) dX along the driver's grid.  One-step mode marches
// the corrected Euler cell update; Picard mode iterates
// rough_integral(compose(sigma, y)) to a fixed point (relative tolerance,
// max 50 iterations), halving the fixed-point window up to 8 times if the
// iteration fails to contract on the whole grid.
inline SolveResult solve_rde(const std::vector<Complex>& a,
                             const VectorField& sigma, const RoughPath& rp,
                             bool picard_mode = false, double rel_tol = 1e-10,
                             int max_iter = 50) {
  const int d = rp.dimension();
  const int l = sigma.state_dim;
  if (int(a.size()) != l || sigma.driver_dim != d) {
    throw std::invalid_argument("solve_rde: dimension mismatch");
  }
  const int npts = rp.points();
  SolveResult res;
  res.report.picard_mode = picard_mode;
  std::vector<std::vector<Complex>> y(npts, a);
  if (!picard_mode) {
    for (int k = 0; k + 1 < npts; ++k) {
      detail::require_in_ball(y[k], sigma.radius, "solve_rde");
      y[k + 1] = detail::euler_step(y[k], sigma, rp, k + 1, k);
    }
  } else {
    // one-step warm start, then Picard with window halving on failure
    for (int k = 0; k + 1 < npts; ++k) {
      y[k + 1] = detail::euler_step(y[k], sigma, rp, k + 1, k);
    }
    int halvings = 0;
    bool ok = false;
    while (halvings <= 8) {
      const int windows = 1 << halvings;
      ok = true;
      int iters = 0;
      double change = 0.0;
      int lo = 0;
      for (int w = 0; w < windows && ok; ++w) {
        int hi = (w + 1 == windows)
                     ? npts - 1
                     : std::min(npts - 1, (npts - 1) * (w + 1) / windows);
        if (hi <= lo) continue;
        ok = detail::picard_on_range(y, sigma, rp, lo, hi, rel_tol,
                                     max_iter, iters, change);
        lo = hi;
      }
      res.report.picard_iterations = iters;
      res.report.final_change = change;
      if (ok) break;
      halvings += 1;
    }
    res.report.tau_halvings = halvings;
    res.report.converged = ok;
    if (!ok) {
      throw std::runtime_error(
          "solve_rde: Picard iteration failed to contract after 8 window "
          "halvings");
    }
  }
  // package as a controlled path with zeta = sigma(y)
  ControlledPath cp;
  cp.times = rp.times();
  cp.driver_dim = d;
  cp.state_dim = l;
  cp.z = std::move(y);
  cp.zeta.assign(npts, std::vector<Complex>(d * l));
  for (int k = 0; k < npts; ++k) {
    for (int j = 0; j < d; ++j) {
      for (int i = 0; i < l; ++i) {
        cp.zeta[k][j * l + i] = sigma.sigma(j, i, cp.z[k]);
      }
    }
  }
  res.path = std::move(cp);
  return res;
}

// One cell update using driver levels 1..N (N <= 3):
//   N = 1: y + Gamma^1(a) sigma_a
//   N = 2: + Gamma^2(a,b) (dsigma_a . sigma_b)
//   N = 3: + Gamma^3(a,b,e) [ dsigma_a . (dsigma_b . sigma_e)
//                             + d2sigma_a(sigma_b, sigma_e) ].
// Level 4 would need third derivatives, which VectorField does not carry.
inline std::vector<Complex> rough_step_orderN(const std::vector<Complex>& y,
                                              const VectorField& sigma,
                                              const RoughPath& rp, int t,
                                              int s, int order) {
  const int d = rp.dimension();
  const int l = sigma.state_dim;
  if (int(y.size()) != l || sigma.driver_dim != d) {
    throw std::invalid_argument("rough_step_orderN: dimension mismatch");
  }
  if (order < 1 || order > 3) {
    throw std::invalid_argument("rough_step_orderN: order must be 1..3");
  }
  if (order > rp.depth()) {
    throw std::invalid_argument("rough_step_orderN: driver depth too small");
  }
  detail::require_in_ball(y, sigma.radius, "rough_step_orderN");
  std::vector<Complex> out = y;
  for (int i = 0; i < l; ++i) {
    for (int a = 0; a < d; ++a) {
      out[i] += rp.entry(1, t, s, {a}) * sigma.sigma(a, i, y);
    }
  }
  if (order >= 2) {
    for (int i = 0; i < l; ++i) {
      for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) {
          Complex mu{0.0, 0.0};
          for (int c1 = 0; c1 < l; ++c1) {
            mu += sigma.dsigma(a, i, c1, y) * sigma.sigma(b, c1, y);
          }
          out[i] += rp.entry(2, t, s, {a, b}) * mu;
        }
      }
    }
  }
  if (order >= 3) {
    if (!sigma.d2sigma) {
      throw std::invalid_argument(
          "rough_step_orderN: order 3 needs second derivatives");
    }
    for (int i = 0; i < l; ++i) {
      for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) {
          for (int e = 0; e < d; ++e) {
            Complex w{0.0, 0.0};
            for (int c1 = 0; c1 < l; ++c1) {
              Complex inner{0.0, 0.0};
              for (int c2 = 0; c2 < l; ++c2) {
                inner += sigma.dsigma(b, c1, c2, y) * sigma.sigma(e, c2, y);
              }
              w += sigma.dsigma(a, i, c1, y) * inner;
              for (int c2 = 0; c2 < l; ++c2) {
                w += sigma.d2sigma(a, i, c1, c2, y) *
                     sigma.sigma(b, c1, y) * sigma.sigma(e, c2, y);
              }
            }
            out[i] += rp.entry(3, t, s, {a, b, e}) * w;
          }
        }
      }
    }
  }
  return out;
}

// Solution CSV: one row per (time index, component).
inline void write_solution_csv(const ControlledPath& cp, std::ostream& out) {
  out << "t_index,component,re,im\n";
  char buf[128];
  for (int k = 0; k < cp.points(); ++k) {
    for (int i = 0; i < cp.state_dim; ++i) {
      std::snprintf(buf, sizeof(buf), "%d,%d,%.17g,%.17g\n", k, i,
                    cp.z[k][i].real(), cp.z[k][i].imag());
      out << buf;
    }
  }
}

inline void write_solution_csv(const ControlledPath& cp,
                               const std::string& filename) {
  std::ofstream out(filename);
  if (!out) throw std::runtime_error("cannot open " + filename);
  write_solution_csv(cp, out);
}

}  // namespace afbm

#endif  // AFBM_RDE_HPP
