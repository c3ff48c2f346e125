#ifndef AFBM_ORACLE_HPP
#define AFBM_ORACLE_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "afbm/quadrature.hpp"
#include "afbm/special_functions.hpp"

// Deterministic quadrature oracles for second moments of iterated integrals
// of the regularized process.  Everything is built from the mollified
// kernel
//   F_c(z, wbar) = (-i (z - wbar) + c)^{2 alpha - 2},   c = sum of heights,
// whose double antiderivative is explicit, and from deformation of the
// integration segments onto a three-segment contour through the upper
// half-plane (legitimate because F_c is analytic wherever
// Im z + Im w + c > 0, which holds on the whole closed domain for c > 0).
namespace afbm {

// Polyline from s to t in the closed upper half-plane.
struct Contour {
  std::vector<Complex> vertices;

  static Contour straight(Complex s, Complex t) { return {{s, t}}; }

  // Up-over-down rectangle at height |t - s|, the deformation that keeps
  // the kernel uniformly mollified away from the boundary corners.
  static Contour deformed(Complex s, Complex t) {
    const double height = std::abs(t - s);
    return {{s, s + Complex(0.0, height), t + Complex(0.0, height), t}};
  }

  int segments() const { return int(vertices.size()) - 1; }
  Complex start() const { return vertices.front(); }
  Complex end() const { return vertices.back(); }

  Complex seg_a(int i) const { return vertices[i]; }
  Complex seg_b(int i) const { return vertices[i + 1]; }
};

namespace detail {

inline Complex kernel_f(Complex z, Complex wbar, double c, double alpha) {
  return cpow(-kImagUnit * (z - wbar) + c, 2.0 * alpha - 2.0);
}

// A_c with d^2 A / dz d(wbar) = F_c.
inline Complex kernel_antideriv(Complex z, Complex wbar, double c,
                                double alpha) {
  const double a2 = 2.0 * alpha;
  return cpow(-kImagUnit * (z - wbar) + c, a2) / (a2 * (a2 - 1.0));
}

// int over path(s -> z) x conj path(s -> w) of F_c, by path independence.
inline Complex inner_rectangle(Complex z, Complex wbar, Complex s, double c,
                               double alpha) {
  const Complex sbar = std::conj(s);
  return kernel_antideriv(z, wbar, c, alpha) -
         kernel_antideriv(z, sbar, c, alpha) -
         kernel_antideriv(s, wbar, c, alpha) +
         kernel_antideriv(s, sbar, c, alpha);
}

}  // namespace detail

// Double contour integral int_{gz} dz int_{conj gw} d(wbar) f(z, wbar) with
// adaptive tensor quadrature per segment pair.  abs_tol applies to the
// whole sum.
template <typename F>
Complex path_double_integral(F&& f, const Contour& gz, const Contour& gw,
                             double abs_tol = 1e-10) {
  Complex acc{0.0, 0.0};
  const double tol_pair = abs_tol / double(gz.segments() * gw.segments());
  for (int p = 0; p < gz.segments(); ++p) {
    const Complex za = gz.seg_a(p), zb = gz.seg_b(p);
    for (int q = 0; q < gw.segments(); ++q) {
      const Complex wa = gw.seg_a(q), wb = gw.seg_b(q);
      acc += integrate_rect_adaptive(
          [&](double u, double v) {
            const Complex z = za + u * (zb - za);
            const Complex wbar = std::conj(wa + v * (wb - wa));
            return f(z, wbar) * (zb - za) * std::conj(wb - wa);
          },
          0.0, 1.0, 0.0, 1.0, tol_pair);
    }
  }
  return acc;
}

namespace detail {

// Ordered pair-chain integral over the contour,
//   Q = int_{g} dz1 int_{conj g} d(wbar1) f1(z1, wbar1)
//         * int_{g(s..z1)} dz2 int_{conj g(s..w1)} d(wbar2) [inner kernel],
// with the inner double integral supplied in closed form.
template <typename F1, typename Inner>
Complex chain2_integral(const Contour& g, F1&& f1, Inner&& inner,
                        double abs_tol) {
  return path_double_integral(
      [&](Complex z, Complex wbar) { return f1(z, wbar) * inner(z, wbar); },
      g, g, abs_tol);
}

// Composite Gauss-Legendre nodes along the contour: per segment,
// `panels` uniform panels of `order` points.  Weights carry the complex
// segment direction, so sum w_k f(z_k) = int_g f dz.
struct ContourNodes {
  std::vector<Complex> z;
  std::vector<Complex> w;        // complex weights (direction included)
  std::vector<double> arc;       // arclength of each node
  std::vector<double> arc_break; // cumulative arclength at segment ends
};

inline ContourNodes contour_nodes(const Contour& g, int panels, int order) {
  const GaussLegendreRule& rule = gauss_legendre(order);
  ContourNodes out;
  double arc0 = 0.0;
  for (int seg = 0; seg < g.segments(); ++seg) {
    const Complex a = g.seg_a(seg), b = g.seg_b(seg);
    const double len = std::abs(b - a);
    const Complex dir = (b - a) / len;
    for (int p = 0; p < panels; ++p) {
      const double lo = len * p / panels, hi = len * (p + 1) / panels;
      const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
      for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        const double tau = mid + rule.nodes[k] * half;
        out.z.push_back(a + tau * dir);
        out.w.push_back(rule.weights[k] * half * dir);
        out.arc.push_back(arc0 + tau);
      }
    }
    arc0 += len;
    out.arc_break.push_back(arc0);
  }
  return out;
}

// int_{g, arclength 0..tau_max} h(z) dz with composite GL, panels clipped
// at segment breakpoints (the integrand is smooth within a segment).
template <typename H>
Complex contour_prefix_integral(const Contour& g, double tau_max, H&& h,
                                int order) {
  const GaussLegendreRule& rule = gauss_legendre(order);
  Complex acc{0.0, 0.0};
  double arc0 = 0.0;
  for (int seg = 0; seg < g.segments() && arc0 < tau_max; ++seg) {
    const Complex a = g.seg_a(seg), b = g.seg_b(seg);
    const double len = std::abs(b - a);
    const Complex dir = (b - a) / len;
    const double hi = std::min(len, tau_max - arc0);
    const double mid = 0.5 * hi, half = 0.5 * hi;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double tau = mid + rule.nodes[k] * half;
      acc += rule.weights[k] * half * dir * h(a + tau * dir);
    }
    arc0 += len;
  }
  return acc;
}

}  // namespace detail

// V1(eps): twice the second moment of the (1, 2) second iterated integral
// of Gamma^eps over [s, t].  The inner simplex integral is evaluated in
// closed form; the outer pair runs over the deformed contour, which keeps
// the integrand mollified uniformly in eps.
inline double levy_variance_V1(Complex s, Complex t, double eps, double alpha,
                               double rel_tol = 1e-9) {
  require_alpha(alpha);
  if (eps <= 0.0) throw std::invalid_argument("levy_variance_V1: eps <= 0");
  const Contour g = Contour::deformed(s, t);
  const double c = 2.0 * eps;
  const double scale =
      std::pow(std::abs(t - s), 4.0 * alpha);  // homogeneity of the result
  const Complex q = detail::chain2_integral(
      g,
      [&](Complex z, Complex wbar) {
        return detail::kernel_f(z, wbar, c, alpha);
      },
      [&](Complex z, Complex wbar) {
        return detail::inner_rectangle(z, wbar, s, c, alpha);
      },
      rel_tol * scale);
  const double cc = kernel_constant(alpha);
  return 2.0 * cc * cc * q.real();
}

// Same quantity without contour deformation (outer pair on the straight
// segment); used to check contour invariance at moderate eps.
inline double levy_variance_V1_straight(double s, double t, double eps,
                                        double alpha,
                                        double rel_tol = 1e-8) {
  require_alpha(alpha);
  const Contour g = Contour::straight(Complex(s, 0.0), Complex(t, 0.0));
  const double c = 2.0 * eps;
  const Complex q = detail::chain2_integral(
      g,
      [&](Complex z, Complex wbar) {
        return detail::kernel_f(z, wbar, c, alpha);
      },
      [&](Complex z, Complex wbar) {
        return detail::inner_rectangle(z, wbar, Complex(s, 0.0), c, alpha);
      },
      rel_tol * std::pow(std::abs(t - s), 4.0 * alpha));
  const double cc = kernel_constant(alpha);
  return 2.0 * cc * cc * q.real();
}

// V2(eps): the mixed-conjugation companion of V1 in
// E[(A^eps)^2] = V1 + V2 for the real-part area.  Wick expansion gives
//   V2 = 2 Re{ c_a^2/(2a(2a-1)) intint_{[s,t]^2} dx dy
//              (-i(x-y)+2 eps)^{2a-2} [ (i(x-y)+2 eps)^{2a}
//              - (i(x-s)+2 eps)^{2a} - (-i(y-s)+2 eps)^{2a}
//              + (2 eps)^{2a} ] }.
// Diverges like eps^{-(1-4a)} for alpha < 1/4 and stays bounded above.
inline double levy_variance_V2(double s, double t, double eps, double alpha,
                               double rel_tol = 1e-8) {
  require_alpha(alpha);
  if (eps <= 0.0) throw std::invalid_argument("levy_variance_V2: eps <= 0");
  const double a2 = 2.0 * alpha;
  const double dt = t - s;
  const double c = 2.0 * eps;
  const auto integrand = [&](double x, double y) {
    const Complex bracket =
        cpow(Complex(c, x - y), a2) - cpow(Complex(c, x - s), a2) -
        cpow(Complex(c, -(y - s)), a2) + std::pow(c, a2);
    return cpow(Complex(c, -(x - y)), a2 - 2.0) * bracket;
  };
  const Complex coarse = detail::tensor_rect(integrand, s, t, s, t, 8);
  const double abs_tol =
      rel_tol * std::max(std::abs(coarse), std::pow(std::abs(dt), 4.0 * alpha));
  const Complex q =
      integrate_rect_adaptive(integrand, s, t, s, t, abs_tol, 24);
  const double cc = kernel_constant(alpha);
  return 2.0 * (cc * cc / (a2 * (a2 - 1.0)) * q).real();
}

// Theta operator: smearing of the height-difference kernel against an
// analytic test function phi(z, wbar),
//   Theta(phi) = intint [F_{2 eps} - F_{eps + eta}](z, wbar) phi(z, wbar),
// evaluated on the deformed contour (Cauchy, since phi is analytic).
inline Complex theta_operator(
    const std::function<Complex(Complex, Complex)>& phi, double eps,
    double eta, Complex s, Complex t, double alpha, double abs_tol = 1e-10) {
  require_alpha(alpha);
  const Contour g = Contour::deformed(s, t);
  return path_double_integral(
      [&](Complex z, Complex wbar) {
        return (detail::kernel_f(z, wbar, 2.0 * eps, alpha) -
                detail::kernel_f(z, wbar, eps + eta, alpha)) *
               phi(z, wbar);
      },
      g, g, abs_tol);
}

namespace detail {

// Ordered 2-chain with per-position kernels c1 (outer) and c2 (inner),
// where the outer kernel may be a difference of two mollifications.
// kind: 0 -> F_{c}, 1 -> F_{ca} - F_{cb}.
struct ChainKernel {
  double ca = 0.0;
  double cb = 0.0;  // used when difference = true
  bool difference = false;

  Complex operator()(Complex z, Complex wbar, double alpha) const {
    if (!difference) return kernel_f(z, wbar, ca, alpha);
    return kernel_f(z, wbar, ca, alpha) - kernel_f(z, wbar, cb, alpha);
  }
  Complex inner(Complex z, Complex wbar, Complex s, double alpha) const {
    if (!difference) return inner_rectangle(z, wbar, s, ca, alpha);
    return inner_rectangle(z, wbar, s, ca, alpha) -
           inner_rectangle(z, wbar, s, cb, alpha);
  }
};

// n = 2 ordered chain integral of k1 (x) k2 over the contour simplex pair.
inline Complex chain_integral_n2(const Contour& g, const ChainKernel& k1,
                                 const ChainKernel& k2, double alpha,
                                 double abs_tol) {
  const Complex s = g.start();
  return chain2_integral(
      g,
      [&](Complex z, Complex wbar) { return k1(z, wbar, alpha); },
      [&](Complex z, Complex wbar) { return k2.inner(z, wbar, s, alpha); },
      abs_tol);
}

// n = 3 ordered chain integral of k1 (x) k2 (x) k3: innermost pair in
// closed form, middle pair by composite prefix quadrature, outer pair by
// composite contour nodes.
inline Complex chain_integral_n3(const Contour& g, const ChainKernel& k1,
                                 const ChainKernel& k2, const ChainKernel& k3,
                                 double alpha, int panels, int order) {
  const Complex s = g.start();
  const ContourNodes nodes = contour_nodes(g, panels, order);
  const std::size_t m = nodes.z.size();
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < m; ++i) {
    const Complex z1 = nodes.z[i];
    for (std::size_t j = 0; j < m; ++j) {
      const Complex w1bar = std::conj(nodes.z[j]);
      // middle pair: int over the contour sections before z1 resp. w1.
      const Complex mid = contour_prefix_integral(
          g, nodes.arc[i],
          [&](Complex z2) {
            return std::conj(contour_prefix_integral(
                g, nodes.arc[j],
                [&](Complex w2) {
                  const Complex w2bar = std::conj(w2);
                  return std::conj(k2(z2, w2bar, alpha) *
                                   k3.inner(z2, w2bar, s, alpha));
                },
                order));
          },
          order);
      acc += nodes.w[i] * std::conj(nodes.w[j]) * k1(z1, w1bar, alpha) * mid;
    }
  }
  return acc;
}

}  // namespace detail

struct IteratedVarianceResult {
  double value = 0.0;
  double est_error = 0.0;  // difference against a coarser quadrature pass
};

// Oracle for E[ |V^eps_{ts} - V^eta_{ts}|^2 ] where V is the n-th iterated
// integral of the coupled regularizations at heights eps and eta over
// [s, t] (components of the index tuple drawn independently).  The
// difference of kernel products is telescoped factor by factor, so each
// term carries exactly one mollification difference and no catastrophic
// cancellation occurs as eta -> eps.
//
// Distinct index tuples are supported for n in {2, 3}; the repeated-index
// Wick reduction (sum over the permutation subgroup preserving the tuple)
// is implemented for n = 2 only.
inline IteratedVarianceResult iterated_variance_oracle(
    int n, const std::vector<int>& indices, double eps, double eta, double s,
    double t, double alpha, double rel_tol = 1e-7) {
  require_alpha(alpha);
  if (n != 2 && n != 3) {
    throw std::invalid_argument("iterated_variance_oracle: n must be 2 or 3");
  }
  if (int(indices.size()) != n) {
    throw std::invalid_argument("iterated_variance_oracle: tuple size");
  }
  if (eps <= 0.0 || eta <= 0.0) {
    throw std::invalid_argument("iterated_variance_oracle: heights <= 0");
  }
  bool distinct = true;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) distinct = distinct && indices[i] != indices[j];
  }
  const Contour g =
      Contour::deformed(Complex(s, 0.0), Complex(t, 0.0));
  const double cc = kernel_constant(alpha);
  const double scale = std::pow(std::abs(t - s), 2.0 * n * alpha);

  // Telescoped chain kernels for one ordering (a, b) of the heights:
  // position m < j uses F_{2a}, position j uses F_{2a} - F_{a+b}, and
  // positions m > j use F_{a+b}.
  const auto kernels_for = [&](double a, double b, int j) {
    std::vector<detail::ChainKernel> ks(n);
    for (int m = 0; m < n; ++m) {
      if (m < j) {
        ks[m] = {2.0 * a, 0.0, false};
      } else if (m == j) {
        ks[m] = {2.0 * a, a + b, true};
      } else {
        ks[m] = {a + b, 0.0, false};
      }
    }
    return ks;
  };

  const auto sum_chains = [&](int panels, int order,
                              double abs_tol) -> Complex {
    Complex acc{0.0, 0.0};
    for (int j = 0; j < n; ++j) {
      for (const auto& [a, b] : {std::pair{eps, eta}, {eta, eps}}) {
        const auto ks = kernels_for(a, b, j);
        if (n == 2) {
          acc += detail::chain_integral_n2(g, ks[0], ks[1], alpha, abs_tol);
        } else {
          acc += detail::chain_integral_n3(g, ks[0], ks[1], ks[2], alpha,
                                           panels, order);
        }
      }
    }
    return acc;
  };

  IteratedVarianceResult out;
  if (distinct) {
    if (n == 2) {
      const Complex fine = sum_chains(0, 0, rel_tol * scale);
      const Complex coarse = sum_chains(0, 0, 30.0 * rel_tol * scale);
      out.value = cc * cc * fine.real();
      out.est_error = cc * cc * std::abs(fine - coarse);
    } else {
      const Complex fine = sum_chains(3, 8, 0.0);
      const Complex coarse = sum_chains(2, 6, 0.0);
      out.value = cc * cc * cc * fine.real();
      out.est_error = cc * cc * cc * std::abs(fine - coarse);
    }
    return out;
  }

  if (n != 2) {
    throw std::invalid_argument(
        "iterated_variance_oracle: repeated indices supported for n = 2 only");
  }
  // Repeated tuple (i, i): Wick pairings are the identity (equal to the
  // distinct-index value) plus the crossed pairing, which couples
  // (z1, wbar2) and (z2, wbar1) and needs the full 4-fold quadrature.
  const IteratedVarianceResult diag = iterated_variance_oracle(
      2, {0, 1}, eps, eta, s, t, alpha, rel_tol);
  const auto crossed_chain = [&](double c_outer, double c_inner, int panels,
                                 int order) {
    const detail::ContourNodes nodes = detail::contour_nodes(g, panels, order);
    const std::size_t m = nodes.z.size();
    Complex acc{0.0, 0.0};
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        const Complex z1 = nodes.z[i];
        const Complex w1bar = std::conj(nodes.z[j]);
        // inner pair (z2 before z1, w2 before w1), kernels crossed.
        const Complex inner = detail::contour_prefix_integral(
            g, nodes.arc[i],
            [&](Complex z2) {
              return std::conj(detail::contour_prefix_integral(
                  g, nodes.arc[j],
                  [&](Complex w2) {
                    return std::conj(
                        detail::kernel_f(z1, std::conj(w2), c_outer, alpha) *
                        detail::kernel_f(z2, w1bar, c_inner, alpha));
                  },
                  order));
            },
            order);
        acc += nodes.w[i] * std::conj(nodes.w[j]) * inner;
      }
    }
    return acc;
  };
  const auto crossed_total = [&](int panels, int order) {
    // Telescoping in the crossed channel:
    // F_a F_a + F_b F_b - 2 F_ab = (F_a - F_ab) F_a + F_ab (F_a - F_ab)
    //                              + (F_b - F_ab)F_b + F_ab(F_b - F_ab)
    // is unnecessary here because the crossed chain is evaluated with
    // explicit kernel heights; cancellation is benign at the tolerances
    // this path serves.
    return crossed_chain(2.0 * eps, 2.0 * eps, panels, order) +
           crossed_chain(2.0 * eta, 2.0 * eta, panels, order) -
           2.0 * crossed_chain(eps + eta, eps + eta, panels, order);
  };
  const Complex fine = crossed_total(3, 8);
  const Complex coarse = crossed_total(2, 6);
  out.value = diag.value + cc * cc * fine.real();
  out.est_error = diag.est_error + cc * cc * std::abs(fine - coarse);
  return out;
}

// Richardson extrapolation of a geometric height ladder eps_k = eps_0 2^{-k}
// assuming V(eps) = L + C eps^p with unknown p: the rate is fitted from the
// last three values and the limit from the fitted geometric tail.
struct RichardsonFit {
  double limit = 0.0;
  double rate = 0.0;  // fitted exponent p (in powers of the ladder ratio 2)
};

inline RichardsonFit richardson_limit(const std::vector<double>& ladder) {
  if (ladder.size() < 3) {
    throw std::invalid_argument("richardson_limit: need at least 3 values");
  }
  const std::size_t m = ladder.size();
  const double d1 = ladder[m - 2] - ladder[m - 3];
  const double d2 = ladder[m - 1] - ladder[m - 2];
  if (d2 == 0.0 || d1 / d2 <= 1.0) {
    // no geometric decay visible; return the finest value unextrapolated
    return {ladder[m - 1], 0.0};
  }
  const double ratio = d1 / d2;  // = 2^p
  RichardsonFit fit;
  fit.rate = std::log2(ratio);
  fit.limit = ladder[m - 1] + d2 / (ratio - 1.0);
  return fit;
}

// Generalized Richardson: least-squares fit of
//   V(eps_k) = L + sum_j C_j eps_k^{p_j}
// over a height ladder, returning the fitted limit L.  Exponents closer
// than 1e-6 are deduplicated to keep the normal equations nonsingular.
inline double fit_power_limit(const std::vector<double>& heights,
                              const std::vector<double>& values,
                              std::vector<double> exponents) {
  if (heights.size() != values.size() || heights.size() < 3) {
    throw std::invalid_argument("fit_power_limit: bad ladder");
  }
  std::sort(exponents.begin(), exponents.end());
  exponents.erase(std::unique(exponents.begin(), exponents.end(),
                              [](double a, double b) {
                                return std::abs(a - b) < 1e-6;
                              }),
                  exponents.end());
  const int n = int(heights.size());
  const int m = int(exponents.size()) + 1;
  if (n < m) throw std::invalid_argument("fit_power_limit: underdetermined");
  std::vector<std::vector<double>> design(n, std::vector<double>(m));
  for (int i = 0; i < n; ++i) {
    design[i][0] = 1.0;
    for (int j = 1; j < m; ++j) {
      design[i][j] = std::pow(heights[i], exponents[j - 1]);
    }
  }
  // normal equations, solved by Gaussian elimination with partial pivoting
  std::vector<std::vector<double>> aug(m, std::vector<double>(m + 1, 0.0));
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      for (int i = 0; i < n; ++i) aug[a][b] += design[i][a] * design[i][b];
    }
    for (int i = 0; i < n; ++i) aug[a][m] += design[i][a] * values[i];
  }
  for (int c = 0; c < m; ++c) {
    int piv = c;
    for (int r = c + 1; r < m; ++r) {
      if (std::abs(aug[r][c]) > std::abs(aug[piv][c])) piv = r;
    }
    std::swap(aug[c], aug[piv]);
    if (aug[c][c] == 0.0) {
      throw std::runtime_error("fit_power_limit: singular fit");
    }
    for (int r = 0; r < m; ++r) {
      if (r == c) continue;
      const double f = aug[r][c] / aug[c][c];
      for (int cc = c; cc <= m; ++cc) aug[r][cc] -= f * aug[c][cc];
    }
  }
  return aug[0][m] / aug[0][0];
}

// The correction exponents observed for the small-height expansion of the
// level-2 variance: powers of eps^{2 alpha} plus a linear boundary term.
inline std::vector<double> level2_correction_exponents(double alpha) {
  return {2.0 * alpha, 4.0 * alpha, 1.0, 6.0 * alpha};
}

// Least-squares slope of log2(values) against the ladder level k
// (heights 2^{-k}); with `differenced` the regression runs on successive
// ladder differences, which removes any additive constant and isolates the
// divergent component.
inline double ladder_log_slope(const std::vector<int>& levels,
                               const std::vector<double>& values,
                               bool differenced) {
  std::vector<double> xs, ys;
  if (differenced) {
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
      const double d = values[i + 1] - values[i];
      if (d <= 0.0) throw std::runtime_error("ladder_log_slope: not monotone");
      xs.push_back(0.5 * (levels[i] + levels[i + 1]));
      ys.push_back(std::log2(d));
    }
  } else {
    for (std::size_t i = 0; i < values.size(); ++i) {
      xs.push_back(levels[i]);
      ys.push_back(std::log2(std::abs(values[i])));
    }
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = double(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// ---- oracle sweep CSV ----------------------------------------------------

struct OracleSweepRow {
  double alpha = 0.0;
  int n = 0;
  double eps = 0.0;
  double eta = 0.0;
  double dt = 0.0;
  double value = 0.0;
  double est_error = 0.0;
};

inline void write_oracle_sweep_csv(const std::vector<OracleSweepRow>& rows,
                                   std::ostream& out) {
  out << "alpha,n,eps,eta,dt,value,est_error\n";
  char buf[256];
  for (const OracleSweepRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.17g,%d,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  r.alpha, r.n, r.eps, r.eta, r.dt, r.value, r.est_error);
    out << buf;
  }
}

inline void write_oracle_sweep_csv(const std::vector<OracleSweepRow>& rows,
                                   const std::string& filename) {
  std::ofstream out(filename);
  if (!out) throw std::runtime_error("cannot open " + filename);
  write_oracle_sweep_csv(rows, out);
}

}  // namespace afbm

#endif  // AFBM_ORACLE_HPP
