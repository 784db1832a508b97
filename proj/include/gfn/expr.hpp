#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace gfn {

// Smooth scalar expressions in one space variable x and one scale parameter
// eps. Trees are immutable after construction; evaluation is pure, so a tree
// may be evaluated from many threads at once. Differentiation in x is exact
// and closed: the derivative of every node kind is again a tree.
enum class NodeKind {
  Constant,
  Var,       // x
  Eps,       // eps
  BoundVar,  // integration variable inside integral-node integrands
  Sum,
  Product,
  Quotient,  // denominator declared nonvanishing by the caller
  IntPow,
  Exp,
  Sin,
  Cos,
  Erf,
  BumpAtom,      // exp(-1/(1-u^2)) * P(u) / (1-u^2)^m for |u|<1, else 0
  Antideriv,     // F(arg), F(t) = integral of p(s) ds from `lower` to t
  ParamIntegral  // integral of p(s; x, eps) ds over [lower, upper]
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct AntiderivCache;

struct Expr {
  NodeKind kind = NodeKind::Constant;
  double value = 0.0;  // Constant
  int exponent = 0;    // IntPow
  std::vector<ExprPtr> kids;

  // BumpAtom: numerator polynomial (ascending coefficients) and the power m
  // of (1-u^2) in the denominator. The exponential kills the poles at +-1,
  // so the atom is smooth on all of R with support [-1, 1]; the family is
  // closed under differentiation.
  std::vector<double> poly;
  int denom_pow = 0;

  // Antideriv / ParamIntegral
  ExprPtr integrand;  // in BoundVar (+eps); ParamIntegral may also use Var
  double lower = 0.0;
  double upper = 0.0;                                 // ParamIntegral only
  std::optional<std::pair<double, double>> support;   // integrand support hint
  std::vector<double> fixed_seeds;                    // panel seeds, s units
  std::vector<double> eps_seeds;                      // panel seeds, units of eps
  bool integrand_uses_eps = false;
  std::shared_ptr<AntiderivCache> cache;              // Antideriv only
};

// ---- constructors (with light constant folding; no rewriting beyond that)

ExprPtr constant(double v);
ExprPtr var_x();
ExprPtr eps_var();
ExprPtr bound_var();
ExprPtr add(ExprPtr a, ExprPtr b);
ExprPtr sub(ExprPtr a, ExprPtr b);
ExprPtr neg(ExprPtr a);
ExprPtr mul(ExprPtr a, ExprPtr b);
ExprPtr quotient(ExprPtr num, ExprPtr den);  // den nonvanishing by contract
ExprPtr powi(ExprPtr base, int n);
ExprPtr exp_of(ExprPtr a);
ExprPtr sin_of(ExprPtr a);
ExprPtr cos_of(ExprPtr a);
ExprPtr erf_of(ExprPtr a);

/// Compactly supported smooth atom exp(-1/(1-u^2)) * P(u)/(1-u^2)^m at
/// u = arg; zero for |u| >= 1.
ExprPtr bump_of(ExprPtr arg, std::vector<double> numer = {1.0}, int denom_pow = 0);

struct AntiderivSpec {
  std::optional<std::pair<double, double>> support;  // integrand vanishes outside
  std::vector<double> fixed_seeds;
  std::vector<double> eps_seeds;
};

/// F(arg) with F(t) = integral_{lower}^{t} p(s) ds, evaluated by cached
/// adaptive quadrature anchored at `lower`. p is an expression in the bound
/// variable (and possibly eps); it must not reference x.
ExprPtr antideriv(ExprPtr integrand, double lower, ExprPtr arg, AntiderivSpec spec = {});

/// integral_{lower}^{upper} p(s; x, eps) ds with fixed numeric limits;
/// differentiates under the integral sign.
ExprPtr param_integral(ExprPtr integrand, double lower, double upper,
                       std::vector<double> fixed_seeds = {},
                       std::vector<double> eps_seeds = {});

// ---- core operations

double eval(const ExprPtr& e, double eps, double x);

/// Exact symbolic derivative in x. BoundVar differentiates to zero.
ExprPtr derive(const ExprPtr& e);

/// Substitute `replacement` for every free occurrence of x. Does not descend
/// into Antideriv integrands (x is disallowed there); does descend into
/// ParamIntegral integrands, whose x is the outer x. `replacement` must not
/// contain a bound variable if `e` contains a ParamIntegral (capture).
ExprPtr subst_x(const ExprPtr& e, const ExprPtr& replacement);

/// Substitute for the bound variable at the current scope; integrand
/// subtrees keep their own bound variable untouched.
ExprPtr subst_bound(const ExprPtr& e, const ExprPtr& replacement);

/// Rewrite an expression in x as an integrand in the bound variable.
ExprPtr var_to_bound(const ExprPtr& e);

bool contains_var(const ExprPtr& e);
bool contains_eps(const ExprPtr& e);
bool contains_free_bound(const ExprPtr& e);

}  // namespace gfn
