#pragma once

#include <optional>
#include <string>

#include "gfn/expr.hpp"

namespace gfn {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
};

/// One representative of a generalized function: a smooth function of x
/// depending on the scale parameter eps, stored as an expression tree.
struct EpsNet {
  ExprPtr expr;
  std::string label;
  std::optional<int> claimed_order;  // growth exponent hint, if known

  EpsNet() : expr(constant(0.0)) {}
  EpsNet(ExprPtr e, std::string lbl = {}, std::optional<int> order = std::nullopt);
};

EpsNet zero_net();
EpsNet one_net();
EpsNet x_net();

EpsNet add(const EpsNet& u, const EpsNet& v);
EpsNet sub(const EpsNet& u, const EpsNet& v);
EpsNet mul(const EpsNet& u, const EpsNet& v);
EpsNet scale(double c, const EpsNet& u);
EpsNet derive(const EpsNet& u);

/// Pointwise evaluation of the representative at scale eps. eps must lie in
/// (0, 1]; anything else is a domain error.
double eval(const EpsNet& u, double eps, double x);

/// Max of |u_eps| over K. `grid_n` is the minimum scan resolution; the scan
/// additionally resolves features of width eps, then refines around the
/// maximizer until the value is stable to 1e-10 relative.
double sup_on(const EpsNet& u, Interval K, double eps, int grid_n);

}  // namespace gfn
