#include "gfn/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gfn {

namespace {

constexpr double kZeroThreshold = 1e-300;
// Estimator tolerance band when rounding a fitted slope to the integer
// moderateness order; keeps sup-norms that are merely bounded from being
// bumped to order 1 by fit noise.
constexpr double kOrderSlack = 0.25;

DecayReport all_zero_report(std::vector<std::pair<double, double>> samples) {
  DecayReport r;
  r.all_zero = true;
  r.cls = DecayClass::NegligibleCandidate;
  r.fit_r2 = 1.0;
  r.samples = std::move(samples);
  return r;
}

void classify_from_slope(DecayReport& r) {
  if (r.slope > kNMax) {
    r.cls = DecayClass::NegligibleCandidate;
  } else if (r.slope <= -kNMax) {
    r.cls = DecayClass::Divergent;
    r.order = static_cast<int>(std::ceil(-r.slope - kOrderSlack));
  } else {
    r.cls = DecayClass::Moderate;
    r.order = std::max(0, static_cast<int>(std::ceil(-r.slope - kOrderSlack)));
  }
}

}  // namespace

std::vector<double> EpsLadder::values() const {
  if (!(eps0 > 0.0) || eps0 > 1.0) throw std::invalid_argument("ladder: eps0 must be in (0,1]");
  if (!(ratio > 0.0) || ratio >= 1.0)
    throw std::invalid_argument("ladder: ratio must be in (0,1)");
  if (count < 6) throw std::invalid_argument("ladder: need at least 6 rungs");
  std::vector<double> out(count);
  double e = eps0;
  for (int j = 0; j < count; ++j) {
    out[j] = e;
    e *= ratio;
  }
  return out;
}

std::string to_string(DecayClass c) {
  switch (c) {
    case DecayClass::Moderate: return "Moderate";
    case DecayClass::NegligibleCandidate: return "NegligibleCandidate";
    case DecayClass::Divergent: return "Divergent";
    case DecayClass::Indeterminate: return "Indeterminate";
  }
  return "?";
}

DecayReport estimate_order(const std::vector<std::pair<double, double>>& samples) {
  std::vector<std::pair<double, double>> nonzero;
  nonzero.reserve(samples.size());
  for (const auto& s : samples)
    if (std::fabs(s.second) >= kZeroThreshold) nonzero.push_back(s);

  if (nonzero.empty() && !samples.empty()) return all_zero_report(samples);

  DecayReport r;
  r.samples = samples;
  if (nonzero.size() < 4) return r;  // Indeterminate, slope undefined

  std::sort(nonzero.begin(), nonzero.end());  // ascending eps
  const size_t fit_n = std::max<size_t>(4, nonzero.size() / 2);

  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < fit_n; ++i) {
    const double X = std::log(nonzero[i].first);
    const double Y = std::log(std::fabs(nonzero[i].second));
    sx += X;
    sy += Y;
    sxx += X * X;
    sxy += X * Y;
    syy += Y * Y;
  }
  const double n = static_cast<double>(fit_n);
  const double ss_xx = sxx - sx * sx / n;
  const double ss_xy = sxy - sx * sy / n;
  const double ss_yy = syy - sy * sy / n;
  if (!(ss_xx > 1e-12)) return r;  // degenerate abscissae

  r.slope = ss_xy / ss_xx;
  r.intercept = (sy - r.slope * sx) / n;
  const double ss_res = std::max(0.0, ss_yy - r.slope * ss_xy);
  r.fit_r2 = ss_yy > 1e-18 ? std::clamp(1.0 - ss_res / ss_yy, 0.0, 1.0)
                           : (ss_res < 1e-18 ? 1.0 : 0.0);
  classify_from_slope(r);
  return r;
}

DecayReport classify(const EpsNet& u, Interval K, const EpsLadder& ladder, int grid_n) {
  std::vector<std::pair<double, double>> samples;
  bool any_nonzero = false;
  for (double e : ladder.values()) {
    const double v = sup_on(u, K, e, grid_n);
    any_nonzero |= std::fabs(v) >= kZeroThreshold;
    samples.emplace_back(e, v);
  }
  if (!any_nonzero) return all_zero_report(std::move(samples));
  return estimate_order(samples);
}

GenNumberNet::GenNumberNet(ExprPtr e) : expr(std::move(e)) {
  if (!expr) throw std::invalid_argument("GenNumberNet: null expression");
  if (contains_var(expr)) throw std::invalid_argument("GenNumberNet: expression must be x-free");
  if (contains_free_bound(expr))
    throw std::invalid_argument("GenNumberNet: free bound variable");
}

GenNumberNet operator-(const GenNumberNet& a, const GenNumberNet& b) {
  return GenNumberNet(sub(a.expr, b.expr));
}

double valuation(const GenNumberNet& x, const EpsLadder& ladder) {
  std::vector<std::pair<double, double>> samples;
  bool any_nonzero = false;
  for (double e : ladder.values()) {
    const double v = eval(x.expr, e, 0.0);
    any_nonzero |= std::fabs(v) >= kZeroThreshold;
    samples.emplace_back(e, v);
  }
  if (!any_nonzero) return std::numeric_limits<double>::infinity();
  return estimate_order(samples).slope;
}

double sharp_distance(const GenNumberNet& x, const GenNumberNet& y, const EpsLadder& ladder) {
  const double val = valuation(x - y, ladder);
  if (std::isinf(val) && val > 0) return 0.0;
  return std::exp(-val);
}

EquivalenceReport r_equivalent(const EpsNet& u, const EpsNet& v,
                               const std::vector<double>& points, const Mollifier& rho,
                               const EpsLadder& ladder) {
  if (points.empty()) throw std::invalid_argument("r_equivalent: empty point set");
  EquivalenceReport out;
  out.kernel = rho.name;
  out.equivalent = true;
  for (double x0 : points) {
    std::vector<std::pair<double, double>> samples;
    bool any_nonzero = false;
    for (double e : ladder.values()) {
      // The point value u_eps(x0) is the pairing of the representative with
      // the sampling net rho_{eps,x0}; the equivalence test compares those.
      const double d = eval(u, e, x0) - eval(v, e, x0);
      any_nonzero |= std::fabs(d) >= kZeroThreshold;
      samples.emplace_back(e, d);
    }
    PointDecay pd;
    pd.x = x0;
    pd.report = any_nonzero ? estimate_order(samples) : all_zero_report(std::move(samples));
    out.equivalent = out.equivalent && pd.report.cls == DecayClass::NegligibleCandidate;
    out.points.push_back(std::move(pd));
  }
  return out;
}

}  // namespace gfn
