#include "gfn/pairing.hpp"

#include <cmath>
#include <stdexcept>

#include "gfn/quadrature.hpp"

namespace gfn {

namespace {

ExprPtr smoothstep_expr(const ExprPtr& cdf, double at, double w, bool rising) {
  // S((x - at)/w) mapped onto the bump cdf's [-1, 1] ramp.
  ExprPtr t = rising ? sub(var_x(), constant(at)) : sub(constant(at), var_x());
  ExprPtr arg = sub(mul(constant(2.0 / w), std::move(t)), constant(1.0));
  return subst_x(cdf, std::move(arg));
}

const Mollifier& window_kernel() {
  static const Mollifier rho = make_mollifier(KernelKind::Bump);
  return rho;
}

}  // namespace

TestFunction::TestFunction(ExprPtr e, Interval sup, std::string n)
    : expr(std::move(e)), support(sup), name(std::move(n)) {
  if (!(support.lo < support.hi)) throw std::invalid_argument("TestFunction: empty support");
  if (contains_eps(expr)) throw std::invalid_argument("TestFunction: must be eps-free");
  const double w = support.width();
  for (double x : {support.lo, support.hi, support.lo - 0.01 * w, support.hi + 0.01 * w,
                   support.lo - w, support.hi + w}) {
    if (std::fabs(eval(expr, 1.0, x)) > 1e-14)
      throw std::invalid_argument("TestFunction '" + name + "': nonzero outside support at x=" +
                                  std::to_string(x));
  }
}

TestFunction make_plateau(Interval support, double transition, std::string name) {
  if (!(transition > 0.0) || 2.0 * transition > support.width())
    throw std::invalid_argument("make_plateau: transition must fit inside the support");
  const ExprPtr& cdf = window_kernel().cdf;
  ExprPtr up = smoothstep_expr(cdf, support.lo, transition, /*rising=*/true);
  ExprPtr down = smoothstep_expr(cdf, support.hi, transition, /*rising=*/false);
  return TestFunction(mul(std::move(up), std::move(down)), support, std::move(name));
}

TestFunction make_tilted(Interval support, double transition, std::string name) {
  TestFunction base = make_plateau(support, transition, name);
  return TestFunction(mul(var_x(), base.expr), support, std::move(name));
}

std::vector<TestFunction> default_test_set() {
  std::vector<TestFunction> out;
  out.push_back(make_plateau({-1.0, 1.0}, 0.3, "plateau[-1,1]"));
  out.push_back(make_plateau({-0.5, 2.0}, 0.4, "plateau[-0.5,2]"));
  out.push_back(make_plateau({-3.0, 0.25}, 0.2, "plateau[-3,0.25]"));
  out.push_back(make_tilted({-1.0, 1.0}, 0.3, "tilted[-1,1]"));
  return out;
}

double pair(const EpsNet& u, const TestFunction& psi, double eps,
            const std::vector<double>& centers) {
  if (!(eps > 0.0) || eps > 1.0) throw std::domain_error("pair: eps must lie in (0, 1]");
  QuadOptions opt;
  opt.abs_tol = 1e-10;
  opt.max_panels = 1 << 16;
  opt.max_initial_width = psi.support.width() / 256.0;
  for (double c : centers)
    for (double m : {-16.0, -8.0, -4.0, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0})
      opt.seeds.push_back(c + m * eps);
  auto f = [&u, &psi, eps](double x) {
    return eval(u.expr, eps, x) * eval(psi.expr, eps, x);
  };
  return integrate_or_throw(f, psi.support.lo, psi.support.hi, opt,
                            "pair(" + u.label + ", " + psi.name + ")");
}

PairLimit pair_limit(const EpsNet& u, const TestFunction& psi, const EpsLadder& ladder,
                     const std::vector<double>& centers) {
  const std::vector<double> eps = ladder.values();
  std::vector<double> v(eps.size());
  for (size_t j = 0; j < eps.size(); ++j) v[j] = pair(u, psi, eps[j], centers);

  const size_t J = v.size() - 1;
  PairLimit out;
  out.indeterminate = std::fabs(v[J] - v[J - 1]) > 1e-3 * std::max(1.0, std::fabs(v[J]));

  // Successive differences share the decay exponent of the error, so the
  // rate can be fitted without knowing the limit.
  std::vector<std::pair<double, double>> diffs;
  bool any_diff = false;
  for (size_t j = 0; j + 1 < v.size(); ++j) {
    diffs.emplace_back(eps[j + 1], v[j + 1] - v[j]);
    any_diff |= std::fabs(v[j + 1] - v[j]) >= 1e-300;
  }

  double limit = v[J];
  if (any_diff) {
    const DecayReport diff_fit = estimate_order(diffs);
    const double p = diff_fit.slope;
    if (std::isfinite(p) && p > 0.05 && p < 40.0) {
      const double rp = std::pow(ladder.ratio, p);
      limit = v[J] + rp * (v[J] - v[J - 1]) / (1.0 - rp);
    }
  }
  out.limit = limit;

  std::vector<std::pair<double, double>> residuals;
  bool any_resid = false;
  for (size_t j = 0; j < v.size(); ++j) {
    residuals.emplace_back(eps[j], v[j] - limit);
    any_resid |= std::fabs(v[j] - limit) >= 1e-300;
  }
  if (!any_resid) {
    DecayReport r;
    r.all_zero = true;
    r.cls = DecayClass::NegligibleCandidate;
    r.fit_r2 = 1.0;
    r.samples = std::move(residuals);
    out.rate = std::move(r);
  } else {
    out.rate = estimate_order(residuals);
  }
  return out;
}

AssociationReport associated(const EpsNet& u, const EpsNet& v,
                             const std::vector<TestFunction>& tests, const EpsLadder& ladder) {
  if (tests.empty()) throw std::invalid_argument("associated: empty test set");
  AssociationReport out;
  out.associated = true;
  const EpsNet w = sub(u, v);
  for (const TestFunction& psi : tests) {
    PairLimit pl = pair_limit(w, psi, ladder);
    AssociationReport::Entry e;
    e.psi = psi.name;
    e.limit = pl.limit;
    e.rate = pl.rate;
    e.indeterminate = pl.indeterminate;
    out.associated = out.associated && !pl.indeterminate &&
                     std::fabs(pl.limit) <= kAssociationTol;
    out.entries.push_back(std::move(e));
  }
  return out;
}

double schwartz_core(const Mollifier& rho, double eps) {
  if (!(eps > 0.0) || eps > 1.0)
    throw std::domain_error("schwartz_core: eps must lie in (0, 1]");
  const EpsNet h = embed(DistributionModel::heaviside(), rho);
  const EpsNet integrand = mul(sub(mul(h, h), h), derive(h));
  const double R = rho.effective_radius() * eps;
  QuadOptions opt;
  opt.abs_tol = 1e-10;
  opt.max_panels = 1 << 16;
  opt.max_initial_width = R / 8.0;
  opt.seeds = {-R / 2, 0.0, R / 2};
  auto f = [&integrand, eps](double x) { return eval(integrand.expr, eps, x); };
  return integrate_or_throw(f, -R, R, opt, "schwartz_core(" + rho.name + ")");
}

}  // namespace gfn
