#pragma once

#include <string>

#include "gfn/expr.hpp"

namespace gfn {

enum class KernelKind { Gaussian, Bump, PolyMoment };

/// Normalized smoothing kernel. `moment_order` q means the moments 1..q all
/// vanish; `pdf` and `cdf` are one-variable expressions in x with
/// cdf' == pdf as a tree identity.
struct Mollifier {
  KernelKind kind = KernelKind::Gaussian;
  int moment_order = 1;
  double support_radius = 0.0;  // +inf for the Gaussian
  ExprPtr pdf;
  ExprPtr cdf;
  std::string name;

  bool compact() const { return std::isfinite(support_radius); }
  /// Radius beyond which the kernel is numerically negligible (equals
  /// support_radius for compact kernels).
  double effective_radius() const;
};

/// Builds a kernel and verifies its moment invariants by quadrature:
/// integral of rho is 1 to 1e-10 and moments 1..q vanish to 1e-9. For
/// PolyMoment the polynomial coefficients come from the moment linear system
/// against the even bump basis on [-1, 1]. Throws std::invalid_argument for
/// inconsistent requests and std::runtime_error naming the first moment that
/// fails verification.
Mollifier make_mollifier(KernelKind kind, int q = -1);

/// k-th moment of the kernel, by adaptive quadrature.
double kernel_moment(const Mollifier& rho, int k);

double pdf_at(const Mollifier& rho, double y);
double cdf_at(const Mollifier& rho, double y);

}  // namespace gfn
