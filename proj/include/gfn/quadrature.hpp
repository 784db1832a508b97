#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gfn {

/// Thrown when an adaptive integration cannot reach its tolerance within
/// the panel budget. Carries the best estimate so callers can report it.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double estimate, double error_estimate)
      : std::runtime_error(what), estimate_(estimate), error_estimate_(error_estimate) {}
  double estimate() const { return estimate_; }
  double error_estimate() const { return error_estimate_; }

 private:
  double estimate_;
  double error_estimate_;
};

struct QuadOptions {
  double abs_tol = 1e-10;
  int max_panels = 1 << 16;
  // Interior points where initial panel boundaries are forced. Integrands
  // concentrated on small subintervals (mollified jumps, delta spikes) must
  // be bracketed here or the error estimate can miss them entirely.
  std::vector<double> seeds;
  // Upper bound on initial panel width; 0 disables pre-splitting.
  double max_initial_width = 0.0;
};

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int panels = 0;
  bool converged = false;
};

/// Adaptive Gauss-Kronrod (G7,K15) integration of f over [a, b].
/// Splits the worst panel first; ties break on the left endpoint so the
/// subdivision sequence (and the result) is deterministic.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadOptions& opt = {});

/// Like integrate() but throws QuadratureError instead of returning a
/// non-converged result. `context` names the caller in the message.
double integrate_or_throw(const std::function<double(double)>& f, double a, double b,
                          const QuadOptions& opt, const std::string& context);

}  // namespace gfn
