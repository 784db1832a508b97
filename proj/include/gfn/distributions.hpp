#pragma once

#include <variant>
#include <vector>

#include "gfn/epsnet.hpp"
#include "gfn/mollifier.hpp"

namespace gfn {

// Model family of distributions that can be embedded into eps-nets. There is
// no canonical embedding; every embed() call takes the mollifier explicitly.

struct DiracModel {
  int order = 0;  // m-th distributional derivative of delta
  double center = 0.0;
};

struct HeavisideModel {
  double center = 0.0;
};

struct SignModel {};
struct AbsModel {};

struct SmoothModel {
  ExprPtr f;  // eps-free expression in x
};

struct DistributionModel;

struct FiniteSumModel {
  std::vector<std::pair<double, DistributionModel>> terms;
};

struct DistributionModel {
  std::variant<DiracModel, HeavisideModel, SignModel, AbsModel, SmoothModel, FiniteSumModel>
      node;

  static DistributionModel dirac(int order = 0, double center = 0.0);
  static DistributionModel heaviside(double center = 0.0);
  static DistributionModel sign();
  static DistributionModel abs_x();
  static DistributionModel smooth(ExprPtr f);
  static DistributionModel finite_sum(std::vector<std::pair<double, DistributionModel>> terms);
};

/// The net x -> rho((x - x0)/eps)/eps approximating the Dirac measure at x0.
EpsNet delta_net(const Mollifier& rho, double x0 = 0.0);

/// Mollifier embedding of the model distribution:
///   Heaviside -> cdf((x-c)/eps), Dirac^(m) -> m-th exact derivative of the
///   delta net, Sign = 2H - 1, |x| as the antiderivative of embedded Sign,
///   Smooth(f) -> the convolution f * rho_eps as an integral-backed tree.
EpsNet embed(const DistributionModel& d, const Mollifier& rho);

}  // namespace gfn
