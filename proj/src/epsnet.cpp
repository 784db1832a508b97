#include "gfn/epsnet.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gfn {

EpsNet::EpsNet(ExprPtr e, std::string lbl, std::optional<int> order)
    : expr(std::move(e)), label(std::move(lbl)), claimed_order(order) {
  if (!expr) throw std::invalid_argument("EpsNet: null expression");
  if (contains_free_bound(expr))
    throw std::invalid_argument("EpsNet: expression has a free bound variable");
}

EpsNet zero_net() { return EpsNet(constant(0.0), "0"); }
EpsNet one_net() { return EpsNet(constant(1.0), "1"); }
EpsNet x_net() { return EpsNet(var_x(), "x"); }

EpsNet add(const EpsNet& u, const EpsNet& v) {
  return EpsNet(add(u.expr, v.expr), "(" + u.label + "+" + v.label + ")");
}

EpsNet sub(const EpsNet& u, const EpsNet& v) {
  return EpsNet(sub(u.expr, v.expr), "(" + u.label + "-" + v.label + ")");
}

EpsNet mul(const EpsNet& u, const EpsNet& v) {
  return EpsNet(mul(u.expr, v.expr), "(" + u.label + "*" + v.label + ")");
}

EpsNet scale(double c, const EpsNet& u) {
  return EpsNet(mul(constant(c), u.expr), u.label);
}

EpsNet derive(const EpsNet& u) { return EpsNet(derive(u.expr), u.label + "'"); }

double eval(const EpsNet& u, double eps, double x) {
  if (!(eps > 0.0) || eps > 1.0)
    throw std::domain_error("eval: eps must lie in (0, 1]");
  return eval(u.expr, eps, x);
}

double sup_on(const EpsNet& u, Interval K, double eps, int grid_n) {
  if (!(eps > 0.0) || eps > 1.0)
    throw std::domain_error("sup_on: eps must lie in (0, 1]");
  if (!(K.lo <= K.hi)) throw std::domain_error("sup_on: empty interval");
  if (grid_n < 2) throw std::domain_error("sup_on: grid_n must be >= 2");
  if (K.lo == K.hi) return std::fabs(eval(u.expr, eps, K.lo));

  // The scan must not step over eps-width features (delta spikes).
  long n = grid_n;
  const double fine = eps / 4.0;
  if (K.width() / static_cast<double>(n - 1) > fine) {
    n = std::min<long>(1L << 20, static_cast<long>(std::ceil(K.width() / fine)) + 1);
    n = std::max<long>(n, grid_n);
  }

  double best = 0.0, best_x = K.lo;
  const double step = K.width() / static_cast<double>(n - 1);
  for (long i = 0; i < n; ++i) {
    const double x = (i + 1 == n) ? K.hi : K.lo + step * static_cast<double>(i);
    const double v = std::fabs(eval(u.expr, eps, x));
    if (v > best) {
      best = v;
      best_x = x;
    }
  }

  // Golden-ish refinement: shrink a bracket around the maximizer until the
  // improvement stalls relative to the current best.
  double lo = std::max(K.lo, best_x - step);
  double hi = std::min(K.hi, best_x + step);
  for (int iter = 0; iter < 80; ++iter) {
    const int m = 17;
    const double h = (hi - lo) / (m - 1);
    if (h <= 0.0) break;
    double prev = best;
    double local_x = best_x;
    for (int i = 0; i < m; ++i) {
      const double x = lo + h * i;
      const double v = std::fabs(eval(u.expr, eps, x));
      if (v > best) {
        best = v;
        local_x = x;
      }
    }
    best_x = local_x;
    lo = std::max(K.lo, best_x - h);
    hi = std::min(K.hi, best_x + h);
    if (best - prev <= 1e-10 * std::max(best, 1e-300) && iter >= 2) break;
    if (hi - lo < 1e-14 * std::max(1.0, std::fabs(best_x))) break;
  }
  return best;
}

}  // namespace gfn
