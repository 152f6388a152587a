#pragma once

#include "reslab/spectral.hpp"

namespace reslab {

// Factored realization of B = (I - g_D(H) g_I(H0))^{-1} and
// g~_D(H) = I - B (I - g_D(H)). Since g_D(H) has rank K (the H modes inside
// the cutoff support), g~ collapses to the exact rank-K product
//   g~ = V_H * core * Q^T,  core = (I - D C^T V_H)^{-1} D,  Q = V_H - C,
// with C = g_I(H0) V_H and D = diag(g_D(mu_H)).
struct GtildeFactor {
  Mat v_h;      // 2N x K  (H window modes)
  Vec mu_h;     // K
  Vec gd_h;     // g_D(mu_H)
  Mat core;     // K x K
  Mat q;        // 2N x K
  Mat b_inner;  // K x 2N: B = I + V_H * b_inner
  double omega1 = 0.0;
  double gg_norm = 0.0;  // ||g_D(H) g_I(H0)||, must be <= 1/2
  double b_norm = 0.0;   // ||B||
  int n = 0;             // channel points

  int K() const { return static_cast<int>(mu_h.size()); }

  Vec apply(const Vec& v) const;    // g~ v
  CVec apply(const CVec& v) const;
  Vec apply_t(const Vec& v) const;  // g~^T v
  CVec apply_t(const CVec& v) const;

  Vec apply_gH(const Vec& v) const;  // g_D(H) v (diagnostics)
  Vec apply_B(const Vec& v) const;
  Vec apply_Bt(const Vec& v) const;
};

// Window eigenpairs of the coupled operator via banded LAPACK.
EigResult h_window_eig(const BlockOperator& h, double lo, double hi);

GtildeFactor build_B_gtilde(const TwoChannelModel& m, const SpectralModel& model);

}  // namespace reslab
