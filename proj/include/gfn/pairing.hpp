#pragma once

#include <string>
#include <vector>

#include "gfn/asymptotics.hpp"
#include "gfn/distributions.hpp"
#include "gfn/epsnet.hpp"

namespace gfn {

/// Compactly supported smooth test function. The expression evaluates to
/// exactly 0 outside `support`; the constructor spot-checks this on boundary
/// samples.
struct TestFunction {
  ExprPtr expr;  // eps-free
  Interval support;
  std::string name;

  TestFunction(ExprPtr e, Interval sup, std::string n);
  double operator()(double x) const { return eval(expr, 1.0, x); }
};

/// Smooth window equal to 1 on [lo+transition, hi-transition] and 0 outside
/// [lo, hi], built from bump-integral smoothsteps.
TestFunction make_plateau(Interval support, double transition, std::string name = "plateau");

/// x times a plateau: vanishes at the origin, exercising the degenerate rate
/// structure of association tests.
TestFunction make_tilted(Interval support, double transition, std::string name = "tilted");

/// Three plateaus (supports [-1,1], [-0.5,2], [-3,0.25]) plus one function
/// with psi(0) = 0.
std::vector<TestFunction> default_test_set();

/// Integral of u_eps * psi over the support of psi, absolute tolerance 1e-10.
/// `centers` seeds the panel layout where the net concentrates mass (width
/// ~eps features). Throws QuadratureError if the panel budget is exhausted.
double pair(const EpsNet& u, const TestFunction& psi, double eps,
            const std::vector<double>& centers = {0.0});

struct PairLimit {
  double limit = 0.0;
  DecayReport rate;         // decay of |pair(eps) - limit|
  bool indeterminate = false;  // pairings did not stabilize down the ladder
};

/// eps -> 0 limit of the pairings, Richardson-extrapolated on the two
/// smallest rungs using the rate fitted from successive differences.
PairLimit pair_limit(const EpsNet& u, const TestFunction& psi, const EpsLadder& ladder,
                     const std::vector<double>& centers = {0.0});

inline constexpr double kAssociationTol = 1e-6;

struct AssociationReport {
  struct Entry {
    std::string psi;
    double limit = 0.0;
    DecayReport rate;
    bool indeterminate = false;
  };
  std::vector<Entry> entries;
  bool associated = false;  // verdict on the tested set only
  double tolerance = kAssociationTol;
};

/// Association test: u ~ v iff the pairing of u - v with every test function
/// tends to 0 (within kAssociationTol). A finite test set can refute but not
/// prove association.
AssociationReport associated(const EpsNet& u, const EpsNet& v,
                             const std::vector<TestFunction>& tests, const EpsLadder& ladder);

/// The jump-ambiguity integral: quadrature of (H_eps^2 - H_eps) * H_eps' over
/// the kernel's effective support. Equals -1/6 for every eps and kernel,
/// because the regularized cdf runs from 0 to 1.
double schwartz_core(const Mollifier& rho, double eps);

}  // namespace gfn
