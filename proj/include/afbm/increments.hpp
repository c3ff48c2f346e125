#ifndef AFBM_INCREMENTS_HPP
#define AFBM_INCREMENTS_HPP

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "afbm/special_functions.hpp"

// k-increments on a finite time grid: functions of 1, 2 or 3 ordered time
// arguments that vanish when two adjacent arguments coincide, together with
// the coboundary operator delta, the degree-combining product, and the
// Hölder / Garsia / multiparameter norms used to control them.
namespace afbm {

// g_t, one value per grid time.
struct Increment1 {
  std::vector<double> times;
  std::vector<Complex> values;

  int size() const { return int(times.size()); }
};

// h_{ts}, stored densely over all ordered pairs of grid indices.
struct Increment2 {
  std::vector<double> times;
  std::vector<Complex> values;  // flattened t_idx * n + s_idx

  explicit Increment2(std::vector<double> t = {})
      : times(std::move(t)), values(times.size() * times.size()) {}

  int size() const { return int(times.size()); }
  Complex& at(int t_idx, int s_idx) { return values[t_idx * size() + s_idx]; }
  Complex at(int t_idx, int s_idx) const {
    return values[t_idx * size() + s_idx];
  }
};

// h_{tus}: kept as a view (dense storage would be n^3) over either a
// closed-form rule or a captured Increment2.
struct Increment3 {
  std::vector<double> times;
  std::function<Complex(int, int, int)> eval;  // (t_idx, u_idx, s_idx)

  int size() const { return int(times.size()); }
  Complex at(int t_idx, int u_idx, int s_idx) const {
    return eval(t_idx, u_idx, s_idx);
  }
};

// (delta g)_{ts} = g_t - g_s.
inline Increment2 delta1(const Increment1& g) {
  Increment2 h(g.times);
  const int n = g.size();
  for (int t = 0; t < n; ++t) {
    for (int s = 0; s < n; ++s) h.at(t, s) = g.values[t] - g.values[s];
  }
  return h;
}

// (delta h)_{tus} = h_{ts} - h_{tu} - h_{us}.  The view shares storage with
// the argument, which must outlive it.
inline Increment3 delta2(const Increment2& h) {
  return Increment3{h.times, [&h](int t, int u, int s) {
                      return h.at(t, s) - h.at(t, u) - h.at(u, s);
                    }};
}

// Degree-combining products: the last argument of the left factor is
// identified with the first argument of the right factor.
inline Increment2 product(const Increment1& g, const Increment2& h) {
  Increment2 r(h.times);
  const int n = r.size();
  for (int t = 0; t < n; ++t) {
    for (int s = 0; s < n; ++s) r.at(t, s) = g.values[t] * h.at(t, s);
  }
  return r;
}

inline Increment2 product(const Increment2& h, const Increment1& g) {
  Increment2 r(h.times);
  const int n = r.size();
  for (int t = 0; t < n; ++t) {
    for (int s = 0; s < n; ++s) r.at(t, s) = h.at(t, s) * g.values[s];
  }
  return r;
}

inline Increment3 product(const Increment2& g, const Increment2& h) {
  return Increment3{g.times, [&g, &h](int t, int u, int s) {
                      return g.at(t, u) * h.at(u, s);
                    }};
}

// Same-degree pointwise product h1 o h2.
inline Increment2 pointwise(const Increment2& a, const Increment2& b) {
  Increment2 r(a.times);
  const int n = r.size();
  for (int t = 0; t < n; ++t) {
    for (int s = 0; s < n; ++s) r.at(t, s) = a.at(t, s) * b.at(t, s);
  }
  return r;
}

// sup |h_{ts}| / |t-s|^mu over distinct grid pairs.
inline double holder_norm(const Increment2& h, double mu) {
  double best = 0.0;
  const int n = h.size();
  for (int t = 0; t < n; ++t) {
    for (int s = 0; s < n; ++s) {
      const double dt = std::abs(h.times[t] - h.times[s]);
      if (dt == 0.0) continue;
      best = std::max(best, std::abs(h.at(t, s)) / std::pow(dt, mu));
    }
  }
  return best;
}

// Single-split surrogate of the C3 norm:
// sup |h_{tus}| / (|t-u|^gamma |u-s|^rho) over ordered triples s < u < t.
inline double holder_norm(const Increment3& h, double gamma, double rho) {
  double best = 0.0;
  const int n = h.size();
  for (int t = 0; t < n; ++t) {
    for (int u = 0; u < n; ++u) {
      for (int s = 0; s < n; ++s) {
        const double dtu = std::abs(h.times[t] - h.times[u]);
        const double dus = std::abs(h.times[u] - h.times[s]);
        if (dtu == 0.0 || dus == 0.0) continue;
        best = std::max(best, std::abs(h.at(t, u, s)) /
                                  (std::pow(dtu, gamma) * std::pow(dus, rho)));
      }
    }
  }
  return best;
}

// The mu-Hölder C3 norm evaluated with the balanced split (mu/2, mu/2).
inline double holder_norm(const Increment3& h, double mu) {
  return holder_norm(h, 0.5 * mu, 0.5 * mu);
}

// Garsia-type integral functional
//   U_{kappa,p}(R) = ( sum_{i != j} |R_{t_i t_j}|^{2p} / |t_i-t_j|^{2 kappa p + 4}
//                      dt_i dt_j )^{1/2p},
// discretized with cell weights dt_i (half the span of the two adjacent
// grid intervals) and the diagonal excluded.
inline double garsia_functional(const Increment2& R, double kappa, int p) {
  if (p < 1) throw std::invalid_argument("garsia_functional: p < 1");
  const int n = R.size();
  if (n < 2) return 0.0;
  std::vector<double> cell(n);
  for (int i = 0; i < n; ++i) {
    const double lo = (i == 0) ? R.times[0] : 0.5 * (R.times[i - 1] + R.times[i]);
    const double hi =
        (i == n - 1) ? R.times[n - 1] : 0.5 * (R.times[i] + R.times[i + 1]);
    cell[i] = hi - lo;
  }
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double dt = std::abs(R.times[i] - R.times[j]);
      acc += std::pow(std::abs(R.at(i, j)), 2.0 * p) /
             std::pow(dt, 2.0 * kappa * p + 4.0) * cell[i] * cell[j];
    }
  }
  return std::pow(acc, 1.0 / (2.0 * p));
}

// Multiparameter height norm: given the boundary increment h^0 and the same
// increment evaluated at regularization heights eps > 0,
//   sup_{eps, pairs} |h^eps_{ts} - h^0_{ts}| / eps^beta.
inline double multiparameter_norm(
    const Increment2& base,
    const std::vector<std::pair<double, Increment2>>& family, double beta) {
  double best = 0.0;
  const int n = base.size();
  for (const auto& [eps, h] : family) {
    if (eps <= 0.0) {
      throw std::invalid_argument("multiparameter_norm: eps must be > 0");
    }
    if (h.size() != n) {
      throw std::invalid_argument("multiparameter_norm: size mismatch");
    }
    const double scale = std::pow(eps, beta);
    for (int t = 0; t < n; ++t) {
      for (int s = 0; s < n; ++s) {
        best = std::max(best, std::abs(h.at(t, s) - base.at(t, s)) / scale);
      }
    }
  }
  return best;
}

}  // namespace afbm

#endif  // AFBM_INCREMENTS_HPP
