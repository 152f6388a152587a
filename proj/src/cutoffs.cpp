#include "reslab/cutoffs.hpp"

#include <cmath>

namespace reslab {

namespace {

// e^{-1/x} mollifier seed, extended by 0 for x <= 0
double mollifier_seed(double x) {
  if (x <= 0.0) return 0.0;
  return std::exp(-1.0 / x);
}

// monotone C^inf step: 0 at t<=0, 1 at t>=1
double smooth_step(double t) {
  double s0 = mollifier_seed(t);
  double s1 = mollifier_seed(1.0 - t);
  if (s0 == 0.0) return 0.0;
  if (s1 == 0.0) return 1.0;
  return s0 / (s0 + s1);
}

}  // namespace

double smooth_bump(const CutoffSpec& spec, double lambda) {
  require(spec.kind == CutoffKind::SmoothBump, "invalid-config",
          "smooth_bump needs a smooth-bump cutoff spec");
  const double m = spec.margin;
  double rise = smooth_step((lambda - (spec.a - m)) / m);
  double fall = smooth_step(((spec.b + m) - lambda) / m);
  return rise * fall;
}

double analytic_window(double a, double b, double lambda) {
  require(a < b, "invalid-config", "analytic window needs a < b");
  if (lambda <= a || lambda >= b) return 0.0;
  return std::exp(-1.0 / (lambda - a)) * std::exp(1.0 / (lambda - b));
}

WindowGeometry make_window_geometry(double a, double b, double margin, double theta) {
  require(a > 0.0 && a < b, "invalid-config", "window needs 0 < a < b");
  require(theta > 0.0 && theta < 1.0, "invalid-config", "theta must lie in (0,1)");
  const double lo = theta * a;    // far-field starts below this
  const double hi = b / theta;    // and above this
  // transitions must fit in the gaps between Delta, the g_I hole and the
  // far-field edges
  require(margin > 0.0 && a - 2.0 * margin >= lo && b + 2.0 * margin <= hi,
          "invalid-config",
          "margin too large: cutoff transitions do not fit between Delta and the far field");
  WindowGeometry w;
  w.theta = theta;
  w.g_delta = CutoffSpec(a, b, margin);
  w.gI_hole = CutoffSpec(a - margin, b + margin, margin);
  w.pc_window = CutoffSpec(lo, hi, margin);
  return w;
}

}  // namespace reslab
