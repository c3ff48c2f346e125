#ifndef AFBM_SIGNATURE_HPP
#define AFBM_SIGNATURE_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "afbm/special_functions.hpp"

// Truncated rough path over a d-component complex driver on a time grid:
// dense level-n tensors (d^n entries, row-major with the outermost
// integration index slowest) for every ordered grid pair, built by
// left-point Riemann sums on refined cells and extended to all pairs by the
// Chen multiplication.  Includes the Chen and shuffle audits and a JSON
// round trip.
namespace afbm {

class RoughPath {
 public:
  RoughPath(double alpha, double epsilon, int d, int depth,
            std::vector<double> times)
      : alpha_(alpha), epsilon_(epsilon), d_(d), depth_(depth),
        times_(std::move(times)) {
    if (d_ < 1 || d_ > 3) throw std::invalid_argument("RoughPath: d must be 1..3");
    if (depth_ < 1 || depth_ > 4) {
      throw std::invalid_argument("RoughPath: level depth must be 1..4");
    }
    const std::size_t n_pairs = times_.size() * times_.size();
    levels_.resize(depth_);
    std::size_t width = 1;
    for (int n = 1; n <= depth_; ++n) {
      width *= d_;
      levels_[n - 1].assign(n_pairs * width, Complex{0.0, 0.0});
    }
  }

  double alpha() const { return alpha_; }
  double epsilon() const { return epsilon_; }
  int dimension() const { return d_; }
  int depth() const { return depth_; }
  int points() const { return int(times_.size()); }
  const std::vector<double>& times() const { return times_; }

  std::size_t width(int n) const {
    std::size_t w = 1;
    for (int k = 0; k < n; ++k) w *= d_;
    return w;
  }

  // Pointer to the d^n tensor of level n over the pair (t_idx, s_idx).
  Complex* level(int n, int t_idx, int s_idx) {
    return levels_[n - 1].data() +
           (std::size_t(t_idx) * times_.size() + s_idx) * width(n);
  }
  const Complex* level(int n, int t_idx, int s_idx) const {
    return levels_[n - 1].data() +
           (std::size_t(t_idx) * times_.size() + s_idx) * width(n);
  }

  // Entry by multi-index (i_1 ... i_n), i_1 the outermost integration index.
  Complex entry(int n, int t_idx, int s_idx,
                const std::vector<int>& idx) const {
    std::size_t flat = 0;
    for (int i : idx) {
      if (i < 0 || i >= d_) throw std::out_of_range("RoughPath::entry");
      flat = flat * d_ + i;
    }
    return level(n, t_idx, s_idx)[flat];
  }

  // Top-level "hypervolume" entry Gamma^N(1, 2, ..., N); requires d == N.
  Complex hypervolume(int t_idx, int s_idx) const {
    if (d_ != depth_) {
      throw std::logic_error("hypervolume needs d == level depth");
    }
    std::size_t flat = 0;
    for (int i = 0; i < depth_; ++i) flat = flat * d_ + i;
    return level(depth_, t_idx, s_idx)[flat];
  }

 private:
  double alpha_;
  double epsilon_;
  int d_;
  int depth_;
  std::vector<double> times_;
  std::vector<std::vector<Complex>> levels_;  // [n-1][pair * d^n + entry]
};

namespace detail {

// out = A (later piece) chen-composed with B (earlier piece) at level n:
// out(i_1..i_n) = sum_{j=0..n} A^j(i_1..i_j) B^{n-j}(i_{j+1}..i_n),
// where A^0 = B^0 = 1.  Entry pointers are per-level tensors of A and B.
inline void chen_level(int n, int d, const std::vector<const Complex*>& a,
                       const std::vector<const Complex*>& b, Complex* out) {
  std::vector<std::size_t> pow_d(n + 1, 1);
  for (int k = 1; k <= n; ++k) pow_d[k] = pow_d[k - 1] * d;
  for (std::size_t flat = 0; flat < pow_d[n]; ++flat) {
    Complex acc = a[n - 1][flat] + b[n - 1][flat];  // j = n and j = 0 terms
    for (int j = 1; j < n; ++j) {
      // Split the flat index: leading j indices for A, trailing n-j for B.
      const std::size_t head = flat / pow_d[n - j];
      const std::size_t tail = flat % pow_d[n - j];
      acc += a[j - 1][head] * b[n - j - 1][tail];
    }
    out[flat] = acc;
  }
}

}  // namespace detail

// Builds the truncated signature of the fine path
//   values[c][j], j = 0 .. (n_cells * substeps), c = 0 .. d-1,
// where fine point j corresponds to coarse cell j / substeps.  Level
// tensors over each coarse cell come from left-point Riemann sums over the
// substeps; all other pairs follow by Chen composition, so the Chen
// relation holds to rounding by construction.
inline RoughPath build_signature(
    const std::vector<std::vector<Complex>>& values, int substeps,
    const std::vector<double>& coarse_times, int depth, double alpha,
    double epsilon) {
  const int d = int(values.size());
  const int n_pts = int(coarse_times.size());
  if (n_pts < 2) throw std::invalid_argument("build_signature: need >= 2 times");
  if (substeps < 1) throw std::invalid_argument("build_signature: substeps < 1");
  const std::size_t fine_len = std::size_t(n_pts - 1) * substeps + 1;
  for (const auto& comp : values) {
    if (comp.size() != fine_len) {
      throw std::invalid_argument("build_signature: fine value length");
    }
  }
  RoughPath rp(alpha, epsilon, d, depth, coarse_times);

  // Per-cell accumulation: running[n] holds the level-(n+1) tensor of the
  // signature from the cell start to the current substep.
  std::vector<std::vector<Complex>> running(depth);
  for (int n = 1; n <= depth; ++n) running[n - 1].resize(rp.width(n));
  std::vector<Complex> dx(d);
  for (int cell = 0; cell + 1 < n_pts; ++cell) {
    for (auto& lvl : running) std::fill(lvl.begin(), lvl.end(), Complex{});
    const std::size_t base = std::size_t(cell) * substeps;
    for (int j = 0; j < substeps; ++j) {
      for (int c = 0; c < d; ++c) {
        dx[c] = values[c][base + j + 1] - values[c][base + j];
      }
      // Update top-down so that lower levels still hold left-point values.
      for (int n = depth; n >= 2; --n) {
        auto& top = running[n - 1];
        const auto& below = running[n - 2];
        const std::size_t w_below = rp.width(n - 1);
        for (int c = 0; c < d; ++c) {
          Complex* slab = top.data() + std::size_t(c) * w_below;
          for (std::size_t k = 0; k < w_below; ++k) slab[k] += dx[c] * below[k];
        }
      }
      for (int c = 0; c < d; ++c) running[0][c] += dx[c];
    }
    for (int n = 1; n <= depth; ++n) {
      std::copy(running[n - 1].begin(), running[n - 1].end(),
                rp.level(n, cell + 1, cell));
    }
  }

  // Chen extension over increasing spans: pair (s + L, s) from the last
  // cell composed with the already-assembled (s + L - 1, s).
  std::vector<const Complex*> a(depth), b(depth);
  for (int span = 2; span < n_pts; ++span) {
    for (int s = 0; s + span < n_pts; ++s) {
      const int t = s + span;
      for (int n = 1; n <= depth; ++n) {
        a[n - 1] = rp.level(n, t, t - 1);
        b[n - 1] = rp.level(n, t - 1, s);
      }
      for (int n = 1; n <= depth; ++n) {
        detail::chen_level(n, d, a, b, rp.level(n, t, s));
      }
    }
  }
  return rp;
}

// Exact geometric lift of a one-dimensional driver: level n is
// (delta X)^n / n!.  Used for drivers whose higher levels are determined by
// the shuffle identity (d = 1).
inline RoughPath lift_geometric_1d(const std::vector<Complex>& values,
                                   const std::vector<double>& times, int depth,
                                   double alpha, double epsilon) {
  if (values.size() != times.size()) {
    throw std::invalid_argument("lift_geometric_1d: size mismatch");
  }
  RoughPath rp(alpha, epsilon, 1, depth, times);
  const int n_pts = int(times.size());
  for (int t = 0; t < n_pts; ++t) {
    for (int s = 0; s < n_pts; ++s) {
      const Complex dx = values[t] - values[s];
      Complex power = dx;
      double factorial = 1.0;
      for (int n = 1; n <= depth; ++n) {
        *rp.level(n, t, s) = power / factorial;
        power *= dx;
        factorial *= double(n + 1);
      }
    }
  }
  return rp;
}

struct ChenAudit {
  double max_abs_residual = 0.0;
  double max_rel_residual = 0.0;  // against the largest same-level entry
};

// Residual of Gamma_{ts} = Gamma_{tu} (x) Gamma_{us} over all ordered
// triples; the assembly only used u = t - 1, so this genuinely exercises
// associativity of the construction.
inline ChenAudit check_chen(const RoughPath& rp) {
  ChenAudit audit;
  const int n_pts = rp.points();
  const int d = rp.dimension();
  std::vector<double> level_scale(rp.depth(), 0.0);
  for (int n = 1; n <= rp.depth(); ++n) {
    for (int t = 0; t < n_pts; ++t) {
      for (int s = 0; s < t; ++s) {
        const Complex* v = rp.level(n, t, s);
        for (std::size_t k = 0; k < rp.width(n); ++k) {
          level_scale[n - 1] = std::max(level_scale[n - 1], std::abs(v[k]));
        }
      }
    }
  }
  std::vector<const Complex*> a(rp.depth()), b(rp.depth());
  std::vector<Complex> composed;
  for (int t = 0; t < n_pts; ++t) {
    for (int u = 0; u < t; ++u) {
      for (int s = 0; s < u; ++s) {
        for (int n = 1; n <= rp.depth(); ++n) {
          a[n - 1] = rp.level(n, t, u);
          b[n - 1] = rp.level(n, u, s);
        }
        for (int n = 1; n <= rp.depth(); ++n) {
          composed.assign(rp.width(n), Complex{});
          detail::chen_level(n, d, a, b, composed.data());
          const Complex* direct = rp.level(n, t, s);
          for (std::size_t k = 0; k < rp.width(n); ++k) {
            const double abs_err = std::abs(composed[k] - direct[k]);
            audit.max_abs_residual = std::max(audit.max_abs_residual, abs_err);
            if (level_scale[n - 1] > 0.0) {
              audit.max_rel_residual = std::max(
                  audit.max_rel_residual, abs_err / level_scale[n - 1]);
            }
          }
        }
      }
    }
  }
  return audit;
}

// All order-preserving interleavings of two index tuples.
inline void shuffles(const std::vector<int>& a, const std::vector<int>& b,
                     std::vector<int>& prefix,
                     std::vector<std::vector<int>>& out) {
  if (prefix.empty()) prefix.reserve(a.size() + b.size());
  struct Rec {
    static void go(const std::vector<int>& a, std::size_t ia,
                   const std::vector<int>& b, std::size_t ib,
                   std::vector<int>& prefix,
                   std::vector<std::vector<int>>& out) {
      if (ia == a.size() && ib == b.size()) {
        out.push_back(prefix);
        return;
      }
      if (ia < a.size()) {
        prefix.push_back(a[ia]);
        go(a, ia + 1, b, ib, prefix, out);
        prefix.pop_back();
      }
      if (ib < b.size()) {
        prefix.push_back(b[ib]);
        go(a, ia, b, ib + 1, prefix, out);
        prefix.pop_back();
      }
    }
  };
  Rec::go(a, 0, b, 0, prefix, out);
}

inline std::vector<std::vector<int>> shuffles(const std::vector<int>& a,
                                              const std::vector<int>& b) {
  std::vector<std::vector<int>> out;
  std::vector<int> prefix;
  shuffles(a, b, prefix, out);
  return out;
}

struct ShuffleAudit {
  double max_abs_residual = 0.0;
  double max_rel_residual = 0.0;
};

// Residual of Gamma^n(i) Gamma^m(j) = sum_{shuffles} Gamma^{n+m} over all
// tuples with n + m <= depth and all grid pairs.  For the left-point
// Riemann construction this residual is O(1/substeps) rather than zero.
inline ShuffleAudit check_shuffle(const RoughPath& rp) {
  ShuffleAudit audit;
  const int d = rp.dimension();
  const int n_pts = rp.points();
  std::vector<int> tuple_a, tuple_b;
  for (int n = 1; n <= rp.depth(); ++n) {
    for (int m = n; n + m <= rp.depth(); ++m) {
      tuple_a.assign(n, 0);
      for (;;) {
        tuple_b.assign(m, 0);
        for (;;) {
          const auto mixes = shuffles(tuple_a, tuple_b);
          for (int t = 0; t < n_pts; ++t) {
            for (int s = 0; s < t; ++s) {
              Complex sum{0.0, 0.0};
              for (const auto& mix : mixes) {
                sum += rp.entry(n + m, t, s, mix);
              }
              const Complex prod = rp.entry(n, t, s, tuple_a) *
                                   rp.entry(m, t, s, tuple_b);
              const double abs_err = std::abs(prod - sum);
              audit.max_abs_residual = std::max(audit.max_abs_residual, abs_err);
              const double scale = std::max(std::abs(prod), std::abs(sum));
              if (scale > 1e-14) {
                audit.max_rel_residual =
                    std::max(audit.max_rel_residual, abs_err / scale);
              }
            }
          }
          // next tuple_b
          int k = m - 1;
          while (k >= 0 && ++tuple_b[k] == d) tuple_b[k--] = 0;
          if (k < 0) break;
        }
        int k = n - 1;
        while (k >= 0 && ++tuple_a[k] == d) tuple_a[k--] = 0;
        if (k < 0) break;
      }
    }
  }
  return audit;
}

// Levelwise maximum entry difference of two rough paths over the same grid,
// e.g. the same noise lifted at two regularization heights.
inline std::vector<double> coupled_signature_difference(const RoughPath& a,
                                                        const RoughPath& b) {
  if (a.depth() != b.depth() || a.dimension() != b.dimension() ||
      a.points() != b.points()) {
    throw std::invalid_argument("coupled_signature_difference: shape mismatch");
  }
  std::vector<double> diff(a.depth(), 0.0);
  for (int n = 1; n <= a.depth(); ++n) {
    for (int t = 0; t < a.points(); ++t) {
      for (int s = 0; s < a.points(); ++s) {
        const Complex* pa = a.level(n, t, s);
        const Complex* pb = b.level(n, t, s);
        for (std::size_t k = 0; k < a.width(n); ++k) {
          diff[n - 1] = std::max(diff[n - 1], std::abs(pa[k] - pb[k]));
        }
      }
    }
  }
  return diff;
}

// ---- JSON round trip -----------------------------------------------------

inline nlohmann::ordered_json rough_path_to_json(const RoughPath& rp) {
  nlohmann::ordered_json j;
  j["alpha"] = rp.alpha();
  j["epsilon"] = rp.epsilon();
  j["d"] = rp.dimension();
  j["N"] = rp.depth();
  j["grid"] = rp.times();
  nlohmann::ordered_json levels = nlohmann::ordered_json::array();
  for (int n = 1; n <= rp.depth(); ++n) {
    nlohmann::ordered_json entries = nlohmann::ordered_json::array();
    for (int t = 0; t < rp.points(); ++t) {
      for (int s = 0; s < t; ++s) {
        const Complex* v = rp.level(n, t, s);
        for (std::size_t k = 0; k < rp.width(n); ++k) {
          std::vector<int> tuple(n);
          std::size_t rem = k;
          for (int q = n - 1; q >= 0; --q) {
            tuple[q] = int(rem % rp.dimension());
            rem /= rp.dimension();
          }
          entries.push_back({t, s, tuple, v[k].real(), v[k].imag()});
        }
      }
    }
    levels.push_back({{"n", n}, {"entries", std::move(entries)}});
  }
  j["levels"] = std::move(levels);
  return j;
}

inline RoughPath rough_path_from_json(const nlohmann::json& j) {
  RoughPath rp(j.at("alpha").get<double>(), j.at("epsilon").get<double>(),
               j.at("d").get<int>(), j.at("N").get<int>(),
               j.at("grid").get<std::vector<double>>());
  for (const auto& lvl : j.at("levels")) {
    const int n = lvl.at("n").get<int>();
    for (const auto& e : lvl.at("entries")) {
      const int t = e.at(0).get<int>();
      const int s = e.at(1).get<int>();
      std::size_t flat = 0;
      for (const auto& i : e.at(2)) flat = flat * rp.dimension() + i.get<int>();
      rp.level(n, t, s)[flat] =
          Complex(e.at(3).get<double>(), e.at(4).get<double>());
    }
  }
  return rp;
}

inline void write_rough_path_json(const RoughPath& rp,
                                  const std::string& filename) {
  std::ofstream out(filename);
  if (!out) throw std::runtime_error("cannot open " + filename);
  out << rough_path_to_json(rp).dump(1) << "\n";
}

inline RoughPath read_rough_path_json(const std::string& filename) {
  std::ifstream in(filename);
  if (!in) throw std::runtime_error("cannot open " + filename);
  nlohmann::json j;
  in >> j;
  return rough_path_from_json(j);
}

}  // namespace afbm

#endif  // AFBM_SIGNATURE_HPP
