#include "gfn/distributions.hpp"

#include <stdexcept>

namespace gfn {

DistributionModel DistributionModel::dirac(int order, double center) {
  if (order < 0) throw std::invalid_argument("dirac: derivative order must be >= 0");
  return {DiracModel{order, center}};
}
DistributionModel DistributionModel::heaviside(double center) {
  return {HeavisideModel{center}};
}
DistributionModel DistributionModel::sign() { return {SignModel{}}; }
DistributionModel DistributionModel::abs_x() { return {AbsModel{}}; }
DistributionModel DistributionModel::smooth(ExprPtr f) {
  if (contains_eps(f)) throw std::invalid_argument("smooth model must be eps-free");
  return {SmoothModel{std::move(f)}};
}
DistributionModel DistributionModel::finite_sum(
    std::vector<std::pair<double, DistributionModel>> terms) {
  return {FiniteSumModel{std::move(terms)}};
}

namespace {

ExprPtr scaled_arg(double center) {
  ExprPtr shifted = center == 0.0 ? var_x() : sub(var_x(), constant(center));
  return quotient(std::move(shifted), eps_var());
}

EpsNet embed_heaviside(const HeavisideModel& h, const Mollifier& rho) {
  return EpsNet(subst_x(rho.cdf, scaled_arg(h.center)), "H", 0);
}

EpsNet embed_sign(const Mollifier& rho) {
  EpsNet h = embed_heaviside(HeavisideModel{0.0}, rho);
  return EpsNet(sub(mul(constant(2.0), h.expr), constant(1.0)), "sign", 0);
}

EpsNet embed_abs(const Mollifier& rho) {
  // |x|_eps = integral_0^x sign_eps(s) ds; exact derivative recovers the
  // embedded sign. The integrand depends on eps, so the cache keys on it.
  ExprPtr sgn = embed_sign(rho).expr;
  AntiderivSpec spec;
  spec.eps_seeds = {-rho.effective_radius(), 0.0, rho.effective_radius()};
  return EpsNet(antideriv(var_to_bound(sgn), 0.0, var_x(), std::move(spec)), "|x|", 0);
}

EpsNet embed_smooth(const SmoothModel& m, const Mollifier& rho) {
  // (f * rho_eps)(x) = integral f(x - eps*s) rho(s) ds over the kernel.
  const double R = rho.effective_radius();
  ExprPtr shifted = subst_x(m.f, sub(var_x(), mul(eps_var(), bound_var())));
  ExprPtr integrand = mul(std::move(shifted), var_to_bound(rho.pdf));
  std::vector<double> seeds;
  for (double c : {-0.5, 0.0, 0.5}) seeds.push_back(c * R);
  return EpsNet(param_integral(std::move(integrand), -R, R, std::move(seeds)), "smooth", 0);
}

}  // namespace

EpsNet delta_net(const Mollifier& rho, double x0) {
  ExprPtr kernel = subst_x(rho.pdf, scaled_arg(x0));
  return EpsNet(quotient(std::move(kernel), eps_var()), "delta", 1);
}

EpsNet embed(const DistributionModel& d, const Mollifier& rho) {
  return std::visit(
      [&rho](const auto& node) -> EpsNet {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, DiracModel>) {
          EpsNet u = delta_net(rho, node.center);
          for (int i = 0; i < node.order; ++i) u = derive(u);
          u.claimed_order = node.order + 1;
          return u;
        } else if constexpr (std::is_same_v<T, HeavisideModel>) {
          return embed_heaviside(node, rho);
        } else if constexpr (std::is_same_v<T, SignModel>) {
          return embed_sign(rho);
        } else if constexpr (std::is_same_v<T, AbsModel>) {
          return embed_abs(rho);
        } else if constexpr (std::is_same_v<T, SmoothModel>) {
          return embed_smooth(node, rho);
        } else {
          static_assert(std::is_same_v<T, FiniteSumModel>);
          EpsNet acc = zero_net();
          for (const auto& [c, term] : node.terms) acc = add(acc, scale(c, embed(term, rho)));
          return acc;
        }
      },
      d.node);
}

}  // namespace gfn
