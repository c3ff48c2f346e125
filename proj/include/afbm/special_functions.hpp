#ifndef AFBM_SPECIAL_FUNCTIONS_HPP
#define AFBM_SPECIAL_FUNCTIONS_HPP

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

// Closed-form building blocks for the analytic fractional Brownian motion
// Gamma on the closed upper half-plane: the second-derivative kernel, the
// orthonormal series coefficients f_k, the boundary covariance and the
// closed form for the limiting variance of the (1,2) second iterated
// integral.  Everything here is deterministic scalar math; sampling and
// quadrature live in separate headers.
namespace afbm {

using Complex = std::complex<double>;

inline constexpr Complex kImagUnit{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

// The roughness parameter alpha plays the role of a Hurst exponent and must
// lie in (0, 1/2) for every formula in this library.
inline void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 0.5)) {
    throw std::invalid_argument("alpha must lie in (0, 1/2), got " +
                                std::to_string(alpha));
  }
}

inline double sgn(double x) { return (x > 0.0) - (x < 0.0); }

// Principal-branch complex power z^a (branch cut along the negative reals).
inline Complex cpow(Complex z, double a) {
  if (z == Complex(0.0, 0.0)) {
    if (a > 0.0) return {0.0, 0.0};
    throw std::domain_error("cpow: 0 raised to a non-positive power");
  }
  return std::exp(a * std::log(z));
}

// c_alpha = alpha(1-2 alpha) / (2 cos(pi alpha)), the constant in front of
// the kernel E[Gamma'(z) conj(Gamma'(w))].
inline double kernel_constant(double alpha) {
  require_alpha(alpha);
  return alpha * (1.0 - 2.0 * alpha) / (2.0 * std::cos(kPi * alpha));
}

// E[Gamma'(z) conj(Gamma'(w))] = c_alpha * (-i (z - conj w))^{2 alpha - 2}.
// The pseudo-covariance E[Gamma'(z) Gamma'(w)] vanishes identically, so this
// Hermitian kernel determines the whole Gaussian law of Gamma'.
inline Complex kernel(Complex z, Complex w, double alpha) {
  return kernel_constant(alpha) *
         cpow(-kImagUnit * (z - std::conj(w)), 2.0 * alpha - 2.0);
}

// (a)_k / k!  with (a)_k the rising factorial, via log-gamma for stability
// at large k.  Requires a > 0 (always the case here: a = 2 - 2 alpha > 1).
inline double pochhammer_over_factorial(double a, int k) {
  if (k < 0) throw std::invalid_argument("pochhammer_over_factorial: k < 0");
  if (k == 0) return 1.0;
  return std::exp(std::lgamma(a + k) - std::lgamma(a) - std::lgamma(k + 1.0));
}

// Coefficient functions of the orthonormal expansion of Gamma',
//   f_k(z) = 2^{alpha-1} sqrt( alpha (1-2 alpha) (2-2 alpha)_k /
//                              (2 cos(pi alpha) k!) )
//            * ((z+i)/(2i))^{2 alpha - 2} * ((z-i)/(z+i))^k ,
// satisfying sum_k f_k(z) conj(f_k(w)) = E[Gamma'(z) conj(Gamma'(w))] on the
// open upper half-plane.  (z+i)/(2i) has positive real part there, so the
// principal power is branch-safe; |(z-i)/(z+i)| < 1 gives geometric decay.
inline Complex series_coefficient(int k, Complex z, double alpha) {
  require_alpha(alpha);
  const double amplitude =
      std::pow(2.0, alpha - 1.0) *
      std::sqrt(kernel_constant(alpha) *
                pochhammer_over_factorial(2.0 - 2.0 * alpha, k));
  const Complex base = cpow((z + kImagUnit) / (2.0 * kImagUnit),
                            2.0 * alpha - 2.0);
  const Complex ratio = (z - kImagUnit) / (z + kImagUnit);
  if (k == 0) return amplitude * base;
  if (ratio == Complex(0.0, 0.0)) return {0.0, 0.0};
  // ratio^k for integer k: exp(k log) is exact across branches.
  return amplitude * base * std::exp(double(k) * std::log(ratio));
}

// E[Gamma_z conj(Gamma_w)] for z, w in the closed upper half-plane, obtained
// by integrating the kernel along paths from the origin and evaluating the
// double antiderivative in closed form:
//   H(z, w) = [ (-iz)^{2a} + (i conj w)^{2a} - (-i(z - conj w))^{2a} ]
//             / (4 cos(pi alpha)).
// All three power arguments have non-negative real part on the domain, so
// the principal branch applies throughout.  The pseudo-covariance
// E[Gamma_z Gamma_w] is identically zero.
inline Complex covariance(Complex z, Complex w, double alpha) {
  require_alpha(alpha);
  const double a2 = 2.0 * alpha;
  const Complex wb = std::conj(w);
  return (cpow(-kImagUnit * z, a2) + cpow(kImagUnit * wb, a2) -
          cpow(-kImagUnit * (z - wb), a2)) /
         (4.0 * std::cos(kPi * alpha));
}

// Restriction of the covariance to the real axis,
//   E[Gamma_s conj(Gamma_t)] = [ e^{-i pi a sgn s} |s|^{2a}
//                              + e^{ i pi a sgn t} |t|^{2a}
//                              - e^{ i pi a sgn(t-s)} |s-t|^{2a} ]
//                              / (4 cos(pi a)).
inline Complex boundary_covariance(double s, double t, double alpha) {
  require_alpha(alpha);
  const double a2 = 2.0 * alpha;
  const Complex rot_s = std::polar(1.0, -kPi * alpha * sgn(s));
  const Complex rot_t = std::polar(1.0, kPi * alpha * sgn(t));
  const Complex rot_ts = std::polar(1.0, kPi * alpha * sgn(t - s));
  return (rot_s * std::pow(std::abs(s), a2) +
          rot_t * std::pow(std::abs(t), a2) -
          rot_ts * std::pow(std::abs(t - s), a2)) /
         (4.0 * std::cos(kPi * alpha));
}

// Cross covariance of real and imaginary boundary parts,
//   E[Re Gamma_s Im Gamma_t] = -(tan(pi a)/8) * ( -sgn(s)|s|^{2a}
//                                + sgn(t)|t|^{2a} - sgn(t-s)|t-s|^{2a} ).
// Equals -Im(boundary_covariance)/2 because the pseudo-covariance vanishes.
inline double re_im_cross_covariance(double s, double t, double alpha) {
  require_alpha(alpha);
  const double a2 = 2.0 * alpha;
  return -(std::tan(kPi * alpha) / 8.0) *
         (-sgn(s) * std::pow(std::abs(s), a2) +
          sgn(t) * std::pow(std::abs(t), a2) -
          sgn(t - s) * std::pow(std::abs(t - s), a2));
}

// E[ |Gamma^eps_t - Gamma^eta_t|^2 ] for the coupled heights eps, eta > 0:
// the vertical-segment double integral of the kernel collapses to
//   c_alpha [ (2 eps)^{2a} - 2 (eps+eta)^{2a} + (2 eta)^{2a} ]
//   / (2a (2a - 1)),
// which is O(|eps - eta|^{2a}) and independent of t.
inline double coupled_height_variance(double eps, double eta, double alpha) {
  require_alpha(alpha);
  if (eps < 0.0 || eta < 0.0) {
    throw std::invalid_argument("coupled_height_variance: negative height");
  }
  if (eps == eta) return 0.0;
  const double a2 = 2.0 * alpha;
  return kernel_constant(alpha) *
         (std::pow(2.0 * eps, a2) - 2.0 * std::pow(eps + eta, a2) +
          std::pow(2.0 * eta, a2)) /
         (a2 * (a2 - 1.0));
}

// Closed form for lim_{eps -> 0} of twice the second moment of the (1, 2)
// second iterated integral of Gamma^eps over [s, t]:
//   alpha(2 alpha - 1)/(4 cos^2(pi alpha))
//   * [ 2 G(2a-1) G(2a+1)/G(4a+1) + cos(2 pi a)/((2a-1)(4a-1)) ]
//   * |t-s|^{4 alpha},
// with G the gamma function.  The bracket has removable-looking poles at
// alpha = 1/4 (and the overall formula degenerates as alpha -> 1/2), so
// evaluation is refused within 1e-4 of either point.
inline double levy_area_variance_limit(double alpha, double s, double t) {
  require_alpha(alpha);
  if (std::abs(alpha - 0.25) < 1e-4 || std::abs(alpha - 0.5) < 1e-4) {
    throw std::invalid_argument(
        "levy_area_variance_limit: alpha too close to 1/4 or 1/2");
  }
  const double a2 = 2.0 * alpha;
  const double cos_pa = std::cos(kPi * alpha);
  const double front = alpha * (a2 - 1.0) / (4.0 * cos_pa * cos_pa);
  const double bracket =
      2.0 * std::tgamma(a2 - 1.0) * std::tgamma(a2 + 1.0) /
          std::tgamma(2.0 * a2 + 1.0) +
      std::cos(2.0 * kPi * alpha) / ((a2 - 1.0) * (2.0 * a2 - 1.0));
  return front * bracket * std::pow(std::abs(t - s), 2.0 * a2);
}

}  // namespace afbm

#endif  // AFBM_SPECIAL_FUNCTIONS_HPP
