#ifndef AFBM_SEWING_HPP
#define AFBM_SEWING_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "afbm/increments.hpp"
#include "afbm/special_functions.hpp"

// The sewing map Lambda: for a closed 3-increment h with better-than-1
// Hölder scaling, Lambda h is the unique 2-increment with
// delta(Lambda h) = h that is o(|t-s|).  It is computed by the dyadic
// telescoping identity: summing h over the midpoint triples of every dyadic
// refinement level of [s, t].  The sign convention is fixed by
// delta(Lambda h) = h, under which the canonical germ g_{ts} = s(t-s)
// satisfies (Lambda delta g)_{ts} = -(t-s)^2/2 and
// ((Id - Lambda delta) g)_{ts} = (t^2 - s^2)/2.
namespace afbm {

struct SewingResult {
  Complex value{0.0, 0.0};
  double tail_estimate = 0.0;  // magnitude of the extrapolated missing tail
  int levels = 0;              // dyadic levels actually summed
};

namespace detail {

// Tail of sum_{m > M} S_m assuming S_m ~ c1 2^{-m} + c2 4^{-m} + c3 8^{-m},
// the exact structure for germs that are polynomial (degree <= 3) in the
// triple and the leading asymptotics for smooth germs.  Fits the last three
// level sums by a Vandermonde solve in the ratios.
inline Complex extrapolate_tail(const std::vector<Complex>& sums) {
  const int m_last = int(sums.size()) - 1;
  if (m_last < 2) return {0.0, 0.0};
  const double r[3] = {0.5, 0.25, 0.125};
  // Solve sum_k c_k r_k^m = S_m for m = m_last-2 .. m_last (3x3 system).
  Complex rhs[3];
  double a[3][3];
  for (int row = 0; row < 3; ++row) {
    const int m = m_last - 2 + row;
    rhs[row] = sums[m];
    for (int k = 0; k < 3; ++k) a[row][k] = std::pow(r[k], m);
  }
  // Gaussian elimination on the tiny system.
  Complex c[3] = {rhs[0], rhs[1], rhs[2]};
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int row = col + 1; row < 3; ++row) {
      if (std::abs(a[row][col]) > std::abs(a[piv][col])) piv = row;
    }
    std::swap(a[col], a[piv]);
    std::swap(c[col], c[piv]);
    if (a[col][col] == 0.0) return {0.0, 0.0};
    for (int row = col + 1; row < 3; ++row) {
      const double f = a[row][col] / a[col][col];
      for (int k = col; k < 3; ++k) a[row][k] -= f * a[col][k];
      c[row] -= f * c[col];
    }
  }
  for (int col = 2; col >= 0; --col) {
    for (int k = col + 1; k < 3; ++k) c[col] -= a[col][k] * c[k];
    c[col] /= a[col][col];
  }
  Complex tail{0.0, 0.0};
  for (int k = 0; k < 3; ++k) {
    tail += c[k] * std::pow(r[k], m_last + 1) / (1.0 - r[k]);
  }
  return tail;
}

}  // namespace detail

// Lambda h over the pair (s, t) for a germ h(t, u, s) evaluable at
// arbitrary real times.  Levels are summed until the extrapolated tail is
// below tol (relative to the accumulated value) or max_levels is reached;
// the extrapolated tail is folded into the returned value.
template <typename H>
SewingResult sew_pair(H&& h, double s, double t, double tol = 1e-12,
                      int max_levels = 18) {
  SewingResult out;
  if (s == t) return out;
  std::vector<Complex> level_sums;
  const double scale_floor = 1e-300;
  for (int m = 0; m <= max_levels; ++m) {
    const std::int64_t pieces = std::int64_t(1) << m;
    const double step = (t - s) / double(2 * pieces);
    Complex sum{0.0, 0.0};
    for (std::int64_t j = 0; j < pieces; ++j) {
      const double lo = s + double(2 * j) * step;
      sum += h(lo + 2.0 * step, lo + step, lo);
    }
    level_sums.push_back(sum);
    out.value += sum;
    out.levels = m + 1;
    if (m >= 3) {
      const Complex tail = detail::extrapolate_tail(level_sums);
      const double ref =
          std::max({std::abs(out.value), std::abs(level_sums[0]), scale_floor});
      if (std::abs(tail) <= tol * ref || m == max_levels) {
        out.value += tail;
        // Residual after the 3-ratio fit: next omitted order ~ 16^{-m}.
        out.tail_estimate = std::abs(level_sums.back()) / 8.0;
        return out;
      }
    }
  }
  return out;
}

// Lambda h between grid indices a < b by recursive (possibly uneven)
// bisection down to single-cell resolution.  h is a callable on index
// triples.  Information below the grid scale is genuinely absent, so the
// recursion stops at adjacent indices; the corresponding resolution tail is
// reported by sew_grid below.
template <typename H>
Complex sew_grid_pair(H&& h, int a, int b) {
  if (b - a <= 1) return {0.0, 0.0};
  const int mid = a + (b - a) / 2;
  return h(b, mid, a) + sew_grid_pair(h, a, mid) + sew_grid_pair(h, mid, b);
}

// Lambda h over every grid pair, for a tabulated closed 3-increment.
// Returns the antisymmetric extension Lambda h_{ts} = -Lambda h_{st} for
// reversed pairs, matching the continuum convention.
inline Increment2 sew_grid(const Increment3& h) {
  Increment2 out(h.times);
  const int n = h.size();
  for (int b = 0; b < n; ++b) {
    for (int a = 0; a < b; ++a) {
      const Complex v = sew_grid_pair(
          [&h](int t, int u, int s) { return h.at(t, u, s); }, a, b);
      out.at(b, a) = v;
      out.at(a, b) = -v;
    }
  }
  return out;
}

// Convenience: (Id - Lambda delta) applied to a 2-increment germ given as a
// callable g(t, s), evaluated for one pair.  This is the sewing-map limit
// of the germ's Riemann sums over [s, t].
template <typename G>
Complex sewn_integral(G&& g, double s, double t, double tol = 1e-12,
                      int max_levels = 18) {
  const auto h = [&g](double t3, double u3, double s3) {
    return g(t3, s3) - g(t3, u3) - g(u3, s3);
  };
  return Complex(g(t, s)) - sew_pair(h, s, t, tol, max_levels).value;
}

}  // namespace afbm

#endif  // AFBM_SEWING_HPP
