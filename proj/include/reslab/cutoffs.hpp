#pragma once

#include "reslab/types.hpp"

namespace reslab {

enum class CutoffKind { SmoothBump, AnalyticWindow };

// Smoothed characteristic function of a core interval [a,b]: identically 1
// on the core, identically 0 outside [a-m, b+m], C^inf transition built
// from e^{-1/x} sigmoid ratios.
struct CutoffSpec {
  double a = 0.0;
  double b = 0.0;
  double margin = 0.0;
  CutoffKind kind = CutoffKind::SmoothBump;

  CutoffSpec() = default;
  CutoffSpec(double a_, double b_, double m_, CutoffKind k = CutoffKind::SmoothBump)
      : a(a_), b(b_), margin(m_), kind(k) {
    require(a < b, "invalid-config", "cutoff core needs a < b");
    require(m_ > 0.0, "invalid-config", "cutoff margin must be positive");
  }
};

double smooth_bump(const CutoffSpec& spec, double lambda);

// E_Delta(lambda) = e^{-1/(lambda-a)} e^{1/(lambda-b)} on (a,b), 0 outside.
double analytic_window(double a, double b, double lambda);

// Energy-window geometry shared by the spectral machinery. All profiles
// derive from Delta = [a,b], the transition margin m and the far-field
// factor theta: far-field support is (-inf, theta*a] u [b/theta, inf).
struct WindowGeometry {
  CutoffSpec g_delta;    // 1 on [a,b]
  CutoffSpec pc_window;  // 1 on [theta a, b/theta]; P_c^sharp = this bump of the free block
  CutoffSpec gI_hole;    // g_I = 1 - bump of this spec
  double theta = 0.8;

  double g_delta_of(double lambda) const { return smooth_bump(g_delta, lambda); }
  double g_star_of(double lambda) const { return 1.0 - smooth_bump(pc_window, lambda); }
  double g_I_of(double lambda) const { return 1.0 - smooth_bump(gI_hole, lambda); }
  double pc_of(double lambda) const { return smooth_bump(pc_window, lambda); }
};

WindowGeometry make_window_geometry(double a, double b, double margin, double theta);

}  // namespace reslab
