#ifndef AFBM_GRID_HPP
#define AFBM_GRID_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "afbm/special_functions.hpp"

// Evaluation grids: ordered lists of points in the closed upper half-plane,
// typically a horizontal line segment at height eps >= 0.
namespace afbm {

struct Grid {
  std::vector<Complex> points;

  static Grid uniform(double s, double t, int n_points, double height = 0.0) {
    if (n_points < 2) throw std::invalid_argument("Grid: need >= 2 points");
    if (height < 0.0) throw std::invalid_argument("Grid: negative height");
    Grid g;
    g.points.reserve(n_points);
    for (int i = 0; i < n_points; ++i) {
      const double x = s + (t - s) * double(i) / double(n_points - 1);
      g.points.emplace_back(x, height);
    }
    return g;
  }

  // Dyadic grid with 2^level + 1 points, the natural habitat of the sewing
  // telescoping and of refinement ladders.
  static Grid dyadic(double s, double t, int level, double height = 0.0) {
    if (level < 0 || level > 24) throw std::invalid_argument("Grid: level");
    return uniform(s, t, (1 << level) + 1, height);
  }

  int size() const { return int(points.size()); }

  // Vertical shift z -> z + i eps (the regularization map on grids).
  Grid shifted(double eps) const {
    Grid g = *this;
    for (Complex& z : g.points) z += Complex(0.0, eps);
    return g;
  }

  bool on_real_axis() const {
    return std::all_of(points.begin(), points.end(),
                       [](Complex z) { return z.imag() == 0.0; });
  }

  double min_height() const {
    double h = points.empty() ? 0.0 : points.front().imag();
    for (Complex z : points) h = std::min(h, z.imag());
    return h;
  }

  int index_closest_to_origin() const {
    int best = 0;
    for (int i = 1; i < size(); ++i) {
      if (std::abs(points[i]) < std::abs(points[best])) best = i;
    }
    return best;
  }

  // Real parts, used as the time coordinates of increments and signatures.
  std::vector<double> times() const {
    std::vector<double> t(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) t[i] = points[i].real();
    return t;
  }
};

}  // namespace afbm

#endif  // AFBM_GRID_HPP
