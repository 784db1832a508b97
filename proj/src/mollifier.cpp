#include "gfn/mollifier.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "gfn/quadrature.hpp"

namespace gfn {

namespace {

constexpr double kGaussianCut = 13.0;  // exp(-84.5) ~ 2e-37, beyond every tolerance here

double raw_bump_moment(int k) {
  auto f = [k](double u) {
    if (u <= -1.0 || u >= 1.0) return 0.0;
    const double t = (1.0 - u) * (1.0 + u);
    double p = 1.0;
    for (int i = 0; i < k; ++i) p *= u;
    return p * std::exp(-1.0 / t);
  };
  QuadOptions opt;
  opt.abs_tol = 1e-14;
  opt.seeds = {-0.5, 0.0, 0.5};
  return integrate(f, -1.0, 1.0, opt).value;
}

ExprPtr bump_cdf_from_pdf(const ExprPtr& pdf) {
  AntiderivSpec spec;
  spec.support = {{-1.0, 1.0}};
  spec.fixed_seeds = {-1.0, -0.5, 0.0, 0.5, 1.0};
  return antideriv(var_to_bound(pdf), -1.0, var_x(), std::move(spec));
}

void verify_moments(const Mollifier& rho) {
  const double m0 = kernel_moment(rho, 0);
  if (std::fabs(m0 - 1.0) > 1e-10)
    throw std::runtime_error(rho.name + ": moment 0 = " + std::to_string(m0) +
                             ", normalization failed");
  for (int k = 1; k <= rho.moment_order; ++k) {
    const double mk = kernel_moment(rho, k);
    if (std::fabs(mk) > 1e-9)
      throw std::runtime_error(rho.name + ": moment " + std::to_string(k) + " = " +
                               std::to_string(mk) + ", expected 0");
  }
}

Mollifier make_gaussian(int q) {
  if (q > 1)
    throw std::invalid_argument("gaussian kernel has moment order 1; requested q=" +
                                std::to_string(q));
  Mollifier rho;
  rho.kind = KernelKind::Gaussian;
  rho.moment_order = 1;
  rho.support_radius = std::numeric_limits<double>::infinity();
  rho.name = "gaussian";
  const double c = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  rho.pdf = mul(constant(c), exp_of(mul(constant(-0.5), powi(var_x(), 2))));
  rho.cdf = mul(constant(0.5),
                add(constant(1.0), erf_of(mul(constant(std::numbers::sqrt2 / 2.0), var_x()))));
  return rho;
}

Mollifier make_bump() {
  Mollifier rho;
  rho.kind = KernelKind::Bump;
  rho.moment_order = 0;
  rho.support_radius = 1.0;
  rho.name = "bump";
  rho.pdf = bump_of(var_x(), {1.0 / raw_bump_moment(0)}, 0);
  rho.cdf = bump_cdf_from_pdf(rho.pdf);
  return rho;
}

Mollifier make_poly_moment(int q) {
  if (q < 0) throw std::invalid_argument("poly_moment: q must be >= 0");
  // Even polynomial ansatz (sum a_j u^(2j)) times the bump; odd moments
  // vanish by symmetry, so only the even constraints 0, 2, ..., 2E remain.
  const int E = q / 2;
  Eigen::MatrixXd A(E + 1, E + 1);
  for (int i = 0; i <= E; ++i)
    for (int j = 0; j <= E; ++j) A(i, j) = raw_bump_moment(2 * (i + j));
  Eigen::VectorXd b = Eigen::VectorXd::Zero(E + 1);
  b(0) = 1.0;
  Eigen::VectorXd a = A.completeOrthogonalDecomposition().solve(b);

  std::vector<double> poly(2 * E + 1, 0.0);
  for (int j = 0; j <= E; ++j) poly[2 * j] = a(j);

  Mollifier rho;
  rho.kind = KernelKind::PolyMoment;
  rho.moment_order = q;
  rho.support_radius = 1.0;
  rho.name = "poly" + std::to_string(q);
  rho.pdf = bump_of(var_x(), std::move(poly), 0);
  rho.cdf = bump_cdf_from_pdf(rho.pdf);
  return rho;
}

}  // namespace

double Mollifier::effective_radius() const {
  return compact() ? support_radius : kGaussianCut;
}

Mollifier make_mollifier(KernelKind kind, int q) {
  Mollifier rho;
  switch (kind) {
    case KernelKind::Gaussian:
      rho = make_gaussian(q);
      break;
    case KernelKind::Bump:
      if (q > 0)
        throw std::invalid_argument("bump kernel declares moment order 0; requested q=" +
                                    std::to_string(q));
      rho = make_bump();
      break;
    case KernelKind::PolyMoment:
      rho = make_poly_moment(q < 0 ? 2 : q);
      break;
  }
  verify_moments(rho);
  return rho;
}

double kernel_moment(const Mollifier& rho, int k) {
  const double R = rho.effective_radius();
  auto f = [&rho, k](double y) {
    double p = 1.0;
    for (int i = 0; i < k; ++i) p *= y;
    return p * pdf_at(rho, y);
  };
  QuadOptions opt;
  opt.abs_tol = 1e-12;
  opt.seeds = {-R / 2, 0.0, R / 2};
  opt.max_initial_width = R / 4;
  return integrate(f, -R, R, opt).value;
}

double pdf_at(const Mollifier& rho, double y) { return eval(rho.pdf, 1.0, y); }
double cdf_at(const Mollifier& rho, double y) { return eval(rho.cdf, 1.0, y); }

}  // namespace gfn
