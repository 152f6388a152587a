#pragma once

#include <functional>

#include "reslab/block_op.hpp"
#include "reslab/cutoffs.hpp"

namespace reslab {

// Eigen data underlying the projector triple P0 + P1 + Pc# = I.
//
// All spectral cutoffs used by the lab are supported inside the free-channel
// energy window, so every matrix function of H0 reduces to (constant +
// window-rank) terms: f(T_free) = V_w f(mu_w) V_w^T for window-supported f.
// On the oscillator channel only the embedded level lies inside the window,
// hence Pc# vanishes there identically and P1 carries I - psi0 psi0^T.
struct SpectralModel {
  Grid grid;
  WindowGeometry window;
  int n_embed = 0;
  double lambda0 = 0.0;
  Vec psi0;          // embedded eigenfunction (channel-2 coordinates), unit norm
  Vec osc_low_vals;  // a few lowest oscillator eigenvalues (diagnostics)
  Mat osc_low_vecs;

  Vec mu_w;   // free-channel window eigenvalues
  Mat v_w;    // free-channel window eigenvectors (N x K)
  Vec pc_w;   // Pc# weights at mu_w
  double free_min = 0.0;
  double band_top = 0.0;

  int K() const { return static_cast<int>(mu_w.size()); }
  int n() const { return grid.points; }

  CVec embed_psi0() const;  // stacked two-channel copy of psi0

  CVec apply_P0(const CVec& v) const;
  CVec apply_Pc(const CVec& v) const;
  CVec apply_P1(const CVec& v) const;

  // channel-1 window application out = V f(mu) V^T in for given weights
  Vec window_fn_ch1(const Vec& weights, const Vec& in) const;
  CVec window_fn_ch1(const Vec& weights, const CVec& in) const;

  // local spacing of the discretized free-channel spectrum near lambda
  double level_spacing_near(double lambda) const;
};

SpectralModel build_spectral_model(const Grid& g, const SymTridiag& h_free,
                                   const SymTridiag& h_osc,
                                   const WindowGeometry& window, int n_embed);

// k lowest eigenpairs of a Hermitian channel block, with contract checks
// (orthonormal to 1e-10, residual <= 1e-8 * ||A||).
EigResult eigenpairs(const SymTridiag& a, int k);

// u solving (A - z) u = f with ||(A-z)u - f|| <= 1e-10 ||f||.
CVec resolvent_solve(const BlockOperator& a, Complex z, const CVec& f);

struct RegularityEstimate {
  double r_hat = 0.0;
  double eta_hat = 0.0;
  double t_lo = 0.0, t_hi = 0.0;
  double residual = 0.0;
  std::vector<double> times;
  std::vector<double> weighted_norms;
};

// Fit of the (H4) decay: || <x>^-sigma e^{-iH0 t} Pc# f || ~ C t^{-r}.
// Free propagation runs channel-wise with the Cayley stepper.
RegularityEstimate local_decay_fit(const SymTridiag& h_free, const SymTridiag& h_osc,
                                   const SpectralModel& model, double sigma,
                                   const CVec& f, double t_end, double dt,
                                   bool apply_projector = true);

struct TripleNorm {
  double term_weighted2 = 0.0;   // ||<x>^{2s} W g(H0)||
  double term_weighted11 = 0.0;  // ||<x>^s W g(H0) <x>^s||
  double term_resolvent = 0.0;   // ||<x>^s W (H0+c)^{-1} <x>^{-s}||
  double total = 0.0;
  double resolvent_plus = 0.0;   // ||<x>^s W (H0+c)^{-1} <x>^s||
};

TripleNorm triple_norm_W(const TwoChannelModel& m, const SpectralModel& model,
                         double sigma, double c_shift, double tol = 1e-6);

struct EtaEstimate {
  double eta = 0.0;
  bool saturated = false;  // hit the first-increment cap (smooth boundary)
  double cap = 1.0;
  double fit_residual = 0.0;
};

// Hoelder exponent of s -> F(is + 0+) from log-log increments around s_center.
EtaEstimate estimate_eta_boundary(const std::function<Complex(double)>& f_boundary,
                                  double s_center, double scale, int n_scales = 6);

}  // namespace reslab
