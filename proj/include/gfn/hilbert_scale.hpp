#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "gfn/distributions.hpp"
#include "gfn/pairing.hpp"

namespace gfn {

// Concrete desk-scale instance of an increasing sequence (H_n) of separable
// Hilbert spaces on the torus [0, 2pi): H_n carries the weighted spectral
// norm ||u||_n^2 = sum_k exp(2 a_n |k|) |c_k|^2 with a_n = a0 * 2^-n. The
// weights decrease, so the inclusions H_n -> H_{n+1} are norm-decreasing
// with summable singular values exp(-d_n |k|), d_n = a_n - a_{n+1};
// products and derivatives raise the level by one.

struct ScaleParams {
  double a0 = 1.0;
  int levels = 6;
  int truncation = 256;  // retained modes |k| <= truncation

  void validate() const;
  double weight(int n) const;  // a_n; requires 0 <= n < levels
  double gap(int n) const;     // d_n = a_n - a_{n+1}; requires n+1 < levels
};

/// Truncated Fourier-coefficient vector u(x) = sum c_k e^{ikx}, |k| <= K.
class SpectralElement {
 public:
  explicit SpectralElement(int K);
  static SpectralElement basis(int k, int K);

  int truncation() const { return K_; }
  std::complex<double> coeff(int k) const;
  void set_coeff(int k, std::complex<double> v);

  /// Conjugate symmetry c_{-k} == conj(c_k), meaning the function is real.
  bool is_real(double tol = 0.0) const;

  SpectralElement operator+(const SpectralElement& o) const;
  SpectralElement operator-(const SpectralElement& o) const;
  SpectralElement scaled(std::complex<double> c) const;

 private:
  int K_;
  Eigen::VectorXcd c_;
};

double scale_norm(const SpectralElement& u, int n, const ScaleParams& p);

/// Sum of the singular values exp(-d_n |k|) of the inclusion H_n -> H_{n+1},
/// over all k in Z, truncated once the analytic tail bound drops below
/// 1e-12. Equals coth(d_n / 2).
double nuclear_inclusion_sum(int n, const ScaleParams& p);
double nuclear_inclusion_closed_form(int n, const ScaleParams& p);

/// sqrt(coth(d_n)): the constant of ||uv||_{n+1} <= C ||u||_n ||v||_n from
/// the weighted Young inequality.
double product_bound_constant(int n, const ScaleParams& p);

struct ProductResult {
  SpectralElement value;
  double dropped_l2 = 0.0;  // plain l2 mass of the modes beyond truncation
};

SpectralElement product(const SpectralElement& u, const SpectralElement& v);
ProductResult product_with_tail(const SpectralElement& u, const SpectralElement& v);

SpectralElement derivative(const SpectralElement& u);

/// max over integer k of |k| exp(-d_n |k|): the constant of
/// ||u'||_{n+1} <= C ||u||_n, attained on the basis vector nearest 1/d_n.
double derivative_bound_constant(int n, const ScaleParams& p);
int derivative_bound_maximizer(int n, const ScaleParams& p);

/// Smallest m so that keeping modes |k| <= m approximates the inclusion
/// H_n -> H_{n+1} within delta in operator norm; certifies total boundedness
/// of the unit-ball image.
long compact_rank(int n, double delta, const ScaleParams& p);

/// Projection onto modes |k| <= m.
SpectralElement truncate_modes(const SpectralElement& u, long m);

/// Fixed-eps Gaussian-damped spectral embedding c_k = dhat(k) exp(-(eps k)^2/2)
/// of a 2pi-periodized model distribution (Dirac comb, square wave for
/// Heaviside/Sign, smooth functions). AbsX has no periodization here.
SpectralElement mollified_embed(const DistributionModel& d, double eps, const ScaleParams& p);

/// mollified_embed of sin(m x) with exact coefficients -+ (i/2) e^{-(eps m)^2/2}.
SpectralElement harmonic(int m, double eps, const ScaleParams& p);

/// Norms ||mollified sin(mx)||_n for m = 1..m_max: weakly null sequences of
/// growing frequency converge to 0 in the scale norm.
std::vector<std::pair<int, double>> weak_strong_demo(int m_max, int n, double eps,
                                                     const ScaleParams& p);

struct WeakProductRow {
  int m = 0;
  double lin = 0.0;  // <sin(mx), psi>
  double sq = 0.0;   // <sin^2(mx), psi>
};

/// Rows (m, <sin(mx), psi>, <sin^2(mx), psi>): the first column tends to 0,
/// the second to (1/2) * integral of psi — weak limits do not commute with
/// products.
std::vector<WeakProductRow> weak_product_counterexample(const std::vector<int>& ms,
                                                        const TestFunction& psi);

/// Integral of psi over its support.
double test_function_integral(const TestFunction& psi);

}  // namespace gfn
