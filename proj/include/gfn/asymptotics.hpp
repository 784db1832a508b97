#pragma once

#include <limits>
#include <string>
#include <vector>

#include "gfn/epsnet.hpp"
#include "gfn/mollifier.hpp"

namespace gfn {

/// Geometric ladder eps_j = eps0 * ratio^j, j = 0..count-1, discretizing
/// eps -> 0. All entries must lie in (0, 1].
struct EpsLadder {
  double eps0 = 0.25;
  double ratio = 0.5;
  int count = 12;

  std::vector<double> values() const;  // validates; decreasing order
};

// Polynomial-scale convention: moderate means O(eps^-N) for some N <= kNMax,
// negligible means faster-than-every-power decay. Numerically this is a
// semi-decision, hence "candidate".
inline constexpr int kNMax = 12;

enum class DecayClass { Moderate, NegligibleCandidate, Divergent, Indeterminate };

std::string to_string(DecayClass c);

struct DecayReport {
  double slope = std::numeric_limits<double>::quiet_NaN();
  double intercept = std::numeric_limits<double>::quiet_NaN();
  double fit_r2 = 0.0;
  DecayClass cls = DecayClass::Indeterminate;
  int order = 0;  // N for Moderate / Divergent
  bool all_zero = false;
  std::vector<std::pair<double, double>> samples;  // (eps, value)
};

/// Least-squares slope of log|value| against log(eps) over the smallest half
/// of the ladder (at least 4 points). Samples below 1e-300 in magnitude are
/// treated as exact zeros and excluded; fewer than 4 usable samples yields
/// Indeterminate, all-zero input yields NegligibleCandidate by convention.
DecayReport estimate_order(const std::vector<std::pair<double, double>>& samples);

/// Moderateness/negligibility classification of sup-norms over K down the
/// ladder.
DecayReport classify(const EpsNet& u, Interval K, const EpsLadder& ladder, int grid_n = 513);

/// Scalar net (x-free expression in eps) underlying a generalized number.
struct GenNumberNet {
  ExprPtr expr;
  explicit GenNumberNet(ExprPtr e);
};

GenNumberNet operator-(const GenNumberNet& a, const GenNumberNet& b);

/// Sharp-valuation estimate: the exponent b with |x_eps| ~ eps^b; +infinity
/// when every sample is zero.
double valuation(const GenNumberNet& x, const EpsLadder& ladder);

/// Ultrametric-style distance exp(-valuation(x - y)), 0 when the valuation
/// is +infinity.
double sharp_distance(const GenNumberNet& x, const GenNumberNet& y, const EpsLadder& ladder);

struct PointDecay {
  double x = 0.0;
  DecayReport report;
};

struct EquivalenceReport {
  std::vector<PointDecay> points;
  bool equivalent = false;
  std::string kernel;  // sampling net used for the point values
};

/// Tests the point-value equivalence relation: u ~ v iff |u_eps(x) - v_eps(x)|
/// decays faster than every power of eps at each probe point. A finite point
/// set makes this a sound falsifier, not a complete verifier.
EquivalenceReport r_equivalent(const EpsNet& u, const EpsNet& v,
                               const std::vector<double>& points, const Mollifier& rho,
                               const EpsLadder& ladder);

}  // namespace gfn
