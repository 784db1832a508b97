#include "gfn/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace gfn {

namespace {

// 15-point Kronrod abscissae with embedded 7-point Gauss rule (QUADPACK dqk15).
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct Panel {
  double a, b;
  double value;
  double err;
};

Panel eval_panel(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  double fc = f(center);
  double k15 = kWgk[7] * fc;
  double g7 = kWg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kXgk[i];
    const double fsum = f(center - dx) + f(center + dx);
    k15 += kWgk[i] * fsum;
    if (i % 2 == 1) g7 += kWg[i / 2] * fsum;
  }
  k15 *= half;
  g7 *= half;

  double err = std::fabs(k15 - g7);
  // QUADPACK-style sharpening; keeps the estimate conservative for smooth
  // integrands without collapsing to zero on hard ones.
  double scaled = std::pow(200.0 * err, 1.5);
  if (scaled < err) err = scaled;
  return Panel{a, b, k15, err};
}

struct PanelWorse {
  bool operator()(const Panel& p, const Panel& q) const {
    if (p.err != q.err) return p.err < q.err;
    return p.a > q.a;  // deterministic tie-break
  }
};

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadOptions& opt) {
  QuadResult out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  double sign = 1.0;
  if (a > b) {
    std::swap(a, b);
    sign = -1.0;
  }

  std::vector<double> cuts;
  cuts.push_back(a);
  for (double s : opt.seeds) {
    if (s > a && s < b) cuts.push_back(s);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::priority_queue<Panel, std::vector<Panel>, PanelWorse> heap;
  int panels = 0;
  double sum_value = 0.0, sum_err = 0.0;
  auto push_panel = [&](double pa, double pb) {
    Panel p = eval_panel(f, pa, pb);
    sum_value += p.value;
    sum_err += p.err;
    heap.push(p);
    ++panels;
  };
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    double lo = cuts[i], hi = cuts[i + 1];
    int pieces = 1;
    if (opt.max_initial_width > 0.0 && hi - lo > opt.max_initial_width) {
      pieces = static_cast<int>(std::ceil((hi - lo) / opt.max_initial_width));
      pieces = std::min(pieces, opt.max_panels);
    }
    const double w = (hi - lo) / pieces;
    for (int j = 0; j < pieces; ++j) {
      double pa = lo + j * w;
      double pb = (j + 1 == pieces) ? hi : lo + (j + 1) * w;
      push_panel(pa, pb);
    }
  }

  while (sum_err > opt.abs_tol && panels < opt.max_panels && !heap.empty()) {
    Panel worst = heap.top();
    heap.pop();
    sum_value -= worst.value;
    sum_err -= worst.err;
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      // Panel narrower than double spacing; accept as-is.
      sum_value += worst.value;
      sum_err += worst.err;
      break;
    }
    --panels;
    push_panel(worst.a, mid);
    push_panel(mid, worst.b);
  }

  out.value = sign * sum_value;
  out.error_estimate = sum_err;
  out.panels = panels;
  out.converged = sum_err <= opt.abs_tol;
  return out;
}

double integrate_or_throw(const std::function<double(double)>& f, double a, double b,
                          const QuadOptions& opt, const std::string& context) {
  QuadResult r = integrate(f, a, b, opt);
  if (!r.converged) {
    throw QuadratureError(context + ": quadrature did not converge (error estimate " +
                              std::to_string(r.error_estimate) + " after " +
                              std::to_string(r.panels) + " panels)",
                          r.value, r.error_estimate);
  }
  return r.value;
}

}  // namespace gfn
