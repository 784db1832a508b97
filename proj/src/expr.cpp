#include "gfn/expr.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gfn/quadrature.hpp"

namespace gfn {

namespace {

struct EvalCtx {
  double eps;
  double x;
  double s = std::numeric_limits<double>::quiet_NaN();
};

double eval_node(const Expr& e, const EvalCtx& ctx);

// ---- small dense polynomial helpers (ascending coefficients)

double poly_eval(const std::vector<double>& p, double u) {
  double acc = 0.0;
  for (size_t i = p.size(); i-- > 0;) acc = acc * u + p[i];
  return acc;
}

std::vector<double> poly_add(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(std::max(a.size(), b.size()), 0.0);
  for (size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return out;
}

std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

std::vector<double> poly_deriv(const std::vector<double>& p) {
  if (p.size() <= 1) return {0.0};
  std::vector<double> out(p.size() - 1);
  for (size_t i = 1; i < p.size(); ++i) out[i - 1] = p[i] * static_cast<double>(i);
  return out;
}

std::vector<double> poly_scale(std::vector<double> p, double c) {
  for (double& v : p) v *= c;
  return p;
}

ExprPtr make_node(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

bool is_const(const ExprPtr& e, double v) {
  return e->kind == NodeKind::Constant && e->value == v;
}

}  // namespace

// Incremental antiderivative cache. Anchor values F(lower + k*h) are built
// cumulatively on a fixed grid so the quadrature error per returned value is
// bounded by a constant number of increments, independent of how many points
// were ever queried. Exact repeat queries are memoized.
struct AntiderivCache {
  struct PerEps {
    std::map<long, double> anchors;  // k -> F(le + k*h)
    std::unordered_map<double, double> memo;
  };
  std::mutex mu;
  std::map<double, PerEps> by_eps;
};

namespace {

double antideriv_value(const Expr& node, double t, double eps) {
  double le = node.lower;
  double te = t;
  if (node.support) {
    const auto [lo, hi] = *node.support;
    le = std::clamp(le, lo, hi);
    te = std::clamp(te, lo, hi);
  }
  if (te == le) return 0.0;

  const double eps_key = node.integrand_uses_eps ? eps : 0.0;
  const double h = node.support ? (node.support->second - node.support->first) / 64.0 : 0.25;

  auto integrand = [&node, eps](double s) {
    EvalCtx c{eps, std::numeric_limits<double>::quiet_NaN(), s};
    return eval_node(*node.integrand, c);
  };
  QuadOptions opt;
  opt.abs_tol = 1e-13;
  opt.max_panels = 4096;
  opt.seeds = node.fixed_seeds;
  for (double m : node.eps_seeds) opt.seeds.push_back(m * eps);

  std::lock_guard<std::mutex> lock(node.cache->mu);
  auto& pe = node.cache->by_eps[eps_key];
  if (auto it = pe.memo.find(te); it != pe.memo.end()) return it->second;

  if (pe.anchors.empty()) pe.anchors[0] = 0.0;
  const long k = std::lround((te - le) / h);
  // Materialize the cumulative anchor chain toward k.
  long have = 0;
  if (k >= 0) {
    auto it = pe.anchors.upper_bound(k);
    --it;  // largest key <= k; key 0 always present
    have = it->first;
    if (have < 0) have = 0;
    for (long j = have + 1; j <= k; ++j) {
      double base = pe.anchors[j - 1];
      pe.anchors[j] = base + integrate(integrand, le + (j - 1) * h, le + j * h, opt).value;
    }
  } else {
    auto it = pe.anchors.lower_bound(k);  // smallest key >= k
    have = it->first;
    if (have > 0) have = 0;
    for (long j = have - 1; j >= k; --j) {
      double base = pe.anchors[j + 1];
      pe.anchors[j] = base + integrate(integrand, le + (j + 1) * h, le + j * h, opt).value;
    }
  }
  const double anchor_t = le + k * h;
  double value = pe.anchors[k];
  if (te != anchor_t) value += integrate(integrand, anchor_t, te, opt).value;
  pe.memo.emplace(te, value);
  return value;
}

double eval_node(const Expr& e, const EvalCtx& ctx) {
  switch (e.kind) {
    case NodeKind::Constant:
      return e.value;
    case NodeKind::Var:
      return ctx.x;
    case NodeKind::Eps:
      return ctx.eps;
    case NodeKind::BoundVar:
      return ctx.s;
    case NodeKind::Sum:
      return eval_node(*e.kids[0], ctx) + eval_node(*e.kids[1], ctx);
    case NodeKind::Product:
      return eval_node(*e.kids[0], ctx) * eval_node(*e.kids[1], ctx);
    case NodeKind::Quotient:
      return eval_node(*e.kids[0], ctx) / eval_node(*e.kids[1], ctx);
    case NodeKind::IntPow: {
      const double b = eval_node(*e.kids[0], ctx);
      int n = e.exponent;
      const bool invert = n < 0;
      if (invert) n = -n;
      double acc = 1.0, p = b;
      while (n > 0) {
        if (n & 1) acc *= p;
        p *= p;
        n >>= 1;
      }
      return invert ? 1.0 / acc : acc;
    }
    case NodeKind::Exp:
      return std::exp(eval_node(*e.kids[0], ctx));
    case NodeKind::Sin:
      return std::sin(eval_node(*e.kids[0], ctx));
    case NodeKind::Cos:
      return std::cos(eval_node(*e.kids[0], ctx));
    case NodeKind::Erf:
      return std::erf(eval_node(*e.kids[0], ctx));
    case NodeKind::BumpAtom: {
      const double u = eval_node(*e.kids[0], ctx);
      if (u <= -1.0 || u >= 1.0) return 0.0;
      const double t = (1.0 - u) * (1.0 + u);
      // Combined exponent keeps the pole of 1/(1-u^2)^m from overflowing
      // before the exponential underflows.
      const double ell = -1.0 / t - e.denom_pow * std::log(t);
      if (ell < -740.0) return 0.0;
      return poly_eval(e.poly, u) * std::exp(ell);
    }
    case NodeKind::Antideriv: {
      const double t = eval_node(*e.kids[0], ctx);
      return antideriv_value(e, t, ctx.eps);
    }
    case NodeKind::ParamIntegral: {
      auto f = [&e, &ctx](double s) {
        EvalCtx inner{ctx.eps, ctx.x, s};
        return eval_node(*e.integrand, inner);
      };
      QuadOptions opt;
      opt.abs_tol = 1e-12;
      opt.max_panels = 1 << 14;
      opt.seeds = e.fixed_seeds;
      for (double m : e.eps_seeds) opt.seeds.push_back(m * ctx.eps);
      opt.max_initial_width = (e.upper - e.lower) / 8.0;
      return integrate(f, e.lower, e.upper, opt).value;
    }
  }
  throw std::logic_error("eval: unknown node kind");
}

bool contains(const Expr& e, NodeKind kind, bool into_antideriv, bool into_paramint) {
  if (e.kind == kind) return true;
  for (const auto& k : e.kids)
    if (contains(*k, kind, into_antideriv, into_paramint)) return true;
  if (e.integrand) {
    const bool descend = e.kind == NodeKind::Antideriv ? into_antideriv : into_paramint;
    if (descend && contains(*e.integrand, kind, into_antideriv, into_paramint)) return true;
  }
  return false;
}

}  // namespace

ExprPtr constant(double v) {
  Expr e;
  e.kind = NodeKind::Constant;
  e.value = v;
  return make_node(std::move(e));
}

ExprPtr var_x() {
  Expr e;
  e.kind = NodeKind::Var;
  return make_node(std::move(e));
}

ExprPtr eps_var() {
  Expr e;
  e.kind = NodeKind::Eps;
  return make_node(std::move(e));
}

ExprPtr bound_var() {
  Expr e;
  e.kind = NodeKind::BoundVar;
  return make_node(std::move(e));
}

ExprPtr add(ExprPtr a, ExprPtr b) {
  if (a->kind == NodeKind::Constant && b->kind == NodeKind::Constant)
    return constant(a->value + b->value);
  if (is_const(a, 0.0)) return b;
  if (is_const(b, 0.0)) return a;
  Expr e;
  e.kind = NodeKind::Sum;
  e.kids = {std::move(a), std::move(b)};
  return make_node(std::move(e));
}

ExprPtr neg(ExprPtr a) { return mul(constant(-1.0), std::move(a)); }

ExprPtr sub(ExprPtr a, ExprPtr b) { return add(std::move(a), neg(std::move(b))); }

ExprPtr mul(ExprPtr a, ExprPtr b) {
  if (a->kind == NodeKind::Constant && b->kind == NodeKind::Constant)
    return constant(a->value * b->value);
  if (is_const(a, 0.0) || is_const(b, 0.0)) return constant(0.0);
  if (is_const(a, 1.0)) return b;
  if (is_const(b, 1.0)) return a;
  Expr e;
  e.kind = NodeKind::Product;
  e.kids = {std::move(a), std::move(b)};
  return make_node(std::move(e));
}

ExprPtr quotient(ExprPtr num, ExprPtr den) {
  if (den->kind == NodeKind::Constant) {
    if (den->value == 0.0) throw std::invalid_argument("quotient: zero constant denominator");
    return mul(std::move(num), constant(1.0 / den->value));
  }
  if (is_const(num, 0.0)) return constant(0.0);
  Expr e;
  e.kind = NodeKind::Quotient;
  e.kids = {std::move(num), std::move(den)};
  return make_node(std::move(e));
}

ExprPtr powi(ExprPtr base, int n) {
  if (n == 0) return constant(1.0);
  if (n == 1) return base;
  if (base->kind == NodeKind::Constant) {
    EvalCtx c{0, 0};
    Expr tmp;
    tmp.kind = NodeKind::IntPow;
    tmp.exponent = n;
    tmp.kids = {base};
    return constant(eval_node(tmp, c));
  }
  Expr e;
  e.kind = NodeKind::IntPow;
  e.exponent = n;
  e.kids = {std::move(base)};
  return make_node(std::move(e));
}

namespace {
ExprPtr unary(NodeKind k, ExprPtr a, double (*f)(double)) {
  if (a->kind == NodeKind::Constant) return constant(f(a->value));
  Expr e;
  e.kind = k;
  e.kids = {std::move(a)};
  return make_node(std::move(e));
}
}  // namespace

ExprPtr exp_of(ExprPtr a) { return unary(NodeKind::Exp, std::move(a), [](double v) { return std::exp(v); }); }
ExprPtr sin_of(ExprPtr a) { return unary(NodeKind::Sin, std::move(a), [](double v) { return std::sin(v); }); }
ExprPtr cos_of(ExprPtr a) { return unary(NodeKind::Cos, std::move(a), [](double v) { return std::cos(v); }); }
ExprPtr erf_of(ExprPtr a) { return unary(NodeKind::Erf, std::move(a), [](double v) { return std::erf(v); }); }

ExprPtr bump_of(ExprPtr arg, std::vector<double> numer, int denom_pow) {
  Expr e;
  e.kind = NodeKind::BumpAtom;
  e.kids = {std::move(arg)};
  e.poly = std::move(numer);
  e.denom_pow = denom_pow;
  return make_node(std::move(e));
}

ExprPtr antideriv(ExprPtr integrand, double lower, ExprPtr arg, AntiderivSpec spec) {
  if (contains_var(integrand))
    throw std::invalid_argument("antideriv: integrand must not reference x");
  Expr e;
  e.kind = NodeKind::Antideriv;
  e.kids = {std::move(arg)};
  e.integrand_uses_eps = contains_eps(integrand);
  e.integrand = std::move(integrand);
  e.lower = lower;
  e.support = spec.support;
  e.fixed_seeds = std::move(spec.fixed_seeds);
  e.eps_seeds = std::move(spec.eps_seeds);
  e.cache = std::make_shared<AntiderivCache>();
  return make_node(std::move(e));
}

ExprPtr param_integral(ExprPtr integrand, double lower, double upper,
                       std::vector<double> fixed_seeds, std::vector<double> eps_seeds) {
  Expr e;
  e.kind = NodeKind::ParamIntegral;
  e.integrand_uses_eps = contains_eps(integrand);
  e.integrand = std::move(integrand);
  e.lower = lower;
  e.upper = upper;
  e.fixed_seeds = std::move(fixed_seeds);
  e.eps_seeds = std::move(eps_seeds);
  return make_node(std::move(e));
}

double eval(const ExprPtr& e, double eps, double x) {
  EvalCtx c{eps, x};
  return eval_node(*e, c);
}

ExprPtr derive(const ExprPtr& e) {
  switch (e->kind) {
    case NodeKind::Constant:
    case NodeKind::Eps:
    case NodeKind::BoundVar:
      return constant(0.0);
    case NodeKind::Var:
      return constant(1.0);
    case NodeKind::Sum:
      return add(derive(e->kids[0]), derive(e->kids[1]));
    case NodeKind::Product:
      return add(mul(derive(e->kids[0]), e->kids[1]), mul(e->kids[0], derive(e->kids[1])));
    case NodeKind::Quotient: {
      const auto& u = e->kids[0];
      const auto& v = e->kids[1];
      return quotient(sub(mul(derive(u), v), mul(u, derive(v))), powi(v, 2));
    }
    case NodeKind::IntPow: {
      const auto& u = e->kids[0];
      return mul(mul(constant(e->exponent), powi(u, e->exponent - 1)), derive(u));
    }
    case NodeKind::Exp:
      return mul(ExprPtr(e), derive(e->kids[0]));
    case NodeKind::Sin:
      return mul(cos_of(e->kids[0]), derive(e->kids[0]));
    case NodeKind::Cos:
      return mul(neg(sin_of(e->kids[0])), derive(e->kids[0]));
    case NodeKind::Erf:
      return mul(mul(constant(2.0 / std::sqrt(std::numbers::pi)),
                     exp_of(neg(powi(e->kids[0], 2)))),
                 derive(e->kids[0]));
    case NodeKind::BumpAtom: {
      // d/du [E P T^-m] = E (P'T^2 + 2uP(mT - 1)) T^-(m+2), T = 1-u^2.
      const std::vector<double> T = {1.0, 0.0, -1.0};
      const std::vector<double> T2 = poly_mul(T, T);
      std::vector<double> inner = poly_scale(T, static_cast<double>(e->denom_pow));
      inner = poly_add(inner, {-1.0});
      std::vector<double> p_new =
          poly_add(poly_mul(poly_deriv(e->poly), T2),
                   poly_mul(poly_mul({0.0, 2.0}, e->poly), inner));
      return mul(bump_of(e->kids[0], std::move(p_new), e->denom_pow + 2), derive(e->kids[0]));
    }
    case NodeKind::Antideriv:
      return mul(subst_bound(e->integrand, e->kids[0]), derive(e->kids[0]));
    case NodeKind::ParamIntegral: {
      Expr out;
      out.kind = NodeKind::ParamIntegral;
      out.integrand = derive(e->integrand);
      out.integrand_uses_eps = e->integrand_uses_eps || contains_eps(out.integrand);
      out.lower = e->lower;
      out.upper = e->upper;
      out.fixed_seeds = e->fixed_seeds;
      out.eps_seeds = e->eps_seeds;
      return make_node(std::move(out));
    }
  }
  throw std::logic_error("derive: unknown node kind");
}

namespace {

ExprPtr substitute(const ExprPtr& e, NodeKind target, const ExprPtr& replacement) {
  if (e->kind == target) return replacement;
  switch (e->kind) {
    case NodeKind::Constant:
    case NodeKind::Var:
    case NodeKind::Eps:
    case NodeKind::BoundVar:
      return e;
    default:
      break;
  }
  if (e->kind == NodeKind::Antideriv) {
    ExprPtr new_arg = substitute(e->kids[0], target, replacement);
    if (new_arg == e->kids[0]) return e;
    Expr out = *e;  // shares integrand and cache
    out.kids = {std::move(new_arg)};
    return make_node(std::move(out));
  }
  if (e->kind == NodeKind::ParamIntegral) {
    // The integrand's x is the outer x; its bound variable is its own.
    if (target == NodeKind::BoundVar) return e;
    ExprPtr new_integrand = substitute(e->integrand, target, replacement);
    if (new_integrand == e->integrand) return e;
    Expr out = *e;
    out.integrand = std::move(new_integrand);
    out.integrand_uses_eps = contains_eps(out.integrand);
    return make_node(std::move(out));
  }
  bool changed = false;
  std::vector<ExprPtr> kids;
  kids.reserve(e->kids.size());
  for (const auto& k : e->kids) {
    ExprPtr nk = substitute(k, target, replacement);
    changed |= (nk != k);
    kids.push_back(std::move(nk));
  }
  if (!changed) return e;
  Expr out = *e;
  out.kids = std::move(kids);
  return make_node(std::move(out));
}

}  // namespace

ExprPtr subst_x(const ExprPtr& e, const ExprPtr& replacement) {
  return substitute(e, NodeKind::Var, replacement);
}

ExprPtr subst_bound(const ExprPtr& e, const ExprPtr& replacement) {
  return substitute(e, NodeKind::BoundVar, replacement);
}

ExprPtr var_to_bound(const ExprPtr& e) { return substitute(e, NodeKind::Var, bound_var()); }

bool contains_var(const ExprPtr& e) {
  return contains(*e, NodeKind::Var, /*into_antideriv=*/false, /*into_paramint=*/true);
}

bool contains_eps(const ExprPtr& e) {
  return contains(*e, NodeKind::Eps, /*into_antideriv=*/true, /*into_paramint=*/true);
}

bool contains_free_bound(const ExprPtr& e) {
  return contains(*e, NodeKind::BoundVar, /*into_antideriv=*/false, /*into_paramint=*/false);
}

}  // namespace gfn
