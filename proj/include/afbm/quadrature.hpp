#ifndef AFBM_QUADRATURE_HPP
#define AFBM_QUADRATURE_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <vector>

#include "afbm/special_functions.hpp"

// Gauss-Legendre rules plus small adaptive drivers for integrals along
// straight segments in the complex plane and over parameter rectangles.
// These are the work horses behind the series sampler and the quadrature
// oracles.
namespace afbm {

struct GaussLegendreRule {
  std::vector<double> nodes;    // on (-1, 1)
  std::vector<double> weights;  // summing to 2
};

// Nodes/weights by Newton iteration on the Legendre polynomial, cached per
// order.  Accurate to machine precision for the orders used here (<= 64).
inline const GaussLegendreRule& gauss_legendre(int n) {
  static std::map<int, GaussLegendreRule> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  if (n < 1) throw std::invalid_argument("gauss_legendre: order < 1");
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Chebyshev-based initial guess for the i-th positive root.
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      // Evaluate P_n and P_n' by the three-term recurrence.
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = rule.weights[n - 1 - i] =
        2.0 / ((1.0 - x * x) * dp * dp);
  }
  return cache.emplace(n, std::move(rule)).first->second;
}

// Fixed-order integral of f along the straight segment [a, b] in C.
template <typename F>
Complex integrate_segment(F&& f, Complex a, Complex b, int order) {
  const GaussLegendreRule& rule = gauss_legendre(order);
  const Complex mid = 0.5 * (a + b);
  const Complex half = 0.5 * (b - a);
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    acc += rule.weights[i] * f(mid + rule.nodes[i] * half);
  }
  return half * acc;
}

namespace detail {

template <typename F>
Complex integrate_segment_rec(F& f, Complex a, Complex b, Complex whole,
                              double abs_tol, int depth) {
  const Complex mid = 0.5 * (a + b);
  const Complex left = integrate_segment(f, a, mid, 15);
  const Complex right = integrate_segment(f, mid, b, 15);
  const Complex err = left + right - whole;
  if (std::abs(err) <= abs_tol || depth <= 0) return left + right;
  return integrate_segment_rec(f, a, mid, left, 0.5 * abs_tol, depth - 1) +
         integrate_segment_rec(f, mid, b, right, 0.5 * abs_tol, depth - 1);
}

}  // namespace detail

// Adaptive bisection with an embedded GL15 error estimate.  rel_tol is
// interpreted against the magnitude of the first whole-segment estimate
// (with a small absolute floor so that near-zero integrals terminate).
template <typename F>
Complex integrate_segment_adaptive(F&& f, Complex a, Complex b,
                                   double rel_tol = 1e-9, int max_depth = 40) {
  const Complex whole = integrate_segment(f, a, b, 15);
  const double scale = std::max(std::abs(whole), 1e-30);
  return detail::integrate_segment_rec(f, a, b, whole, rel_tol * scale,
                                       max_depth);
}

namespace detail {

// Tensor Gauss-Legendre on [u0,u1] x [v0,v1] for g(u, v) -> Complex.
template <typename G>
Complex tensor_rect(G& g, double u0, double u1, double v0, double v1,
                    int order) {
  const GaussLegendreRule& rule = gauss_legendre(order);
  const double um = 0.5 * (u0 + u1), uh = 0.5 * (u1 - u0);
  const double vm = 0.5 * (v0 + v1), vh = 0.5 * (v1 - v0);
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double u = um + rule.nodes[i] * uh;
    Complex row{0.0, 0.0};
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      row += rule.weights[j] * g(u, vm + rule.nodes[j] * vh);
    }
    acc += rule.weights[i] * row;
  }
  return uh * vh * acc;
}

template <typename G>
Complex rect_rec(G& g, double u0, double u1, double v0, double v1,
                 Complex coarse, double abs_tol, int depth) {
  const double um = 0.5 * (u0 + u1), vm = 0.5 * (v0 + v1);
  const Complex q00 = tensor_rect(g, u0, um, v0, vm, 8);
  const Complex q01 = tensor_rect(g, u0, um, vm, v1, 8);
  const Complex q10 = tensor_rect(g, um, u1, v0, vm, 8);
  const Complex q11 = tensor_rect(g, um, u1, vm, v1, 8);
  const Complex fine = q00 + q01 + q10 + q11;
  if (std::abs(fine - coarse) <= abs_tol || depth <= 0) return fine;
  const double child_tol = 0.25 * abs_tol;
  return rect_rec(g, u0, um, v0, vm, q00, child_tol, depth - 1) +
         rect_rec(g, u0, um, vm, v1, q01, child_tol, depth - 1) +
         rect_rec(g, um, u1, v0, vm, q10, child_tol, depth - 1) +
         rect_rec(g, um, u1, vm, v1, q11, child_tol, depth - 1);
}

}  // namespace detail

// Adaptive quad-tree integration of g over a parameter rectangle.  The
// caller folds any Jacobian factors into g.  abs_tol is an absolute target
// for the whole rectangle.
template <typename G>
Complex integrate_rect_adaptive(G&& g, double u0, double u1, double v0,
                                double v1, double abs_tol,
                                int max_depth = 32) {
  const Complex coarse = detail::tensor_rect(g, u0, u1, v0, v1, 8);
  return detail::rect_rec(g, u0, u1, v0, v1, coarse, abs_tol, max_depth);
}

}  // namespace afbm

#endif  // AFBM_QUADRATURE_HPP
