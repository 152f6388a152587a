#pragma once

#include <functional>

#include "reslab/fevaluator.hpp"

namespace reslab {

struct RootResult {
  double s0 = 0.0;
  double delta = 0.0;  // s0 = -omega + delta
  int iterations = 0;
  bool used_bisection = false;
  std::vector<double> roots;  // all bracketed roots when several exist
  double spread = 0.0;
};

// Root of s + omega + eps^2 Im F(is) = 0 by damped fixed point on
// delta = eps^2 G(delta), with bisection fallback.
RootResult solve_s0(const std::function<double(double)>& f2_boundary, double omega,
                    double epsilon, double tol_rel = 1e-10, double theta = 0.5,
                    int max_iter = 200);

struct OmegaStar {
  double gamma = 0.0;          // eps^2 Re F(i s0 + 0+)
  double gamma_err = 0.0;
  Complex omega_star;          // s0 - i Gamma  (journal convention of the root equation)
  Complex omega_star_osc;      // -s0 - i Gamma (oscillation convention: a ~ e^{-i w t})
  double regime_ratio = 0.0;   // Gamma / eps^{2/(1-eta)} when eta < 1
  bool regime_checked = false;
};

OmegaStar gamma_omega_star(const std::function<Complex(double, double*)>& f_boundary,
                           double s0, double epsilon, double eta_hat = 2.0);

struct PoleResult {
  Complex p_z;
  int winding = 0;
  double winding_residual = 0.0;
  int samples = 0;
  Complex g1_at_pz;
  int newton_iters = 0;
};

// Argument-principle count of zeros of g1 on the square |Re p - Re c| <=
// half_side, |Im p - Im c| <= half_side, then Newton refinement when the
// count is one.
PoleResult find_pole(const std::function<Complex(Complex)>& g1, Complex center,
                     double half_side, int min_samples = 256, double g1_scale = 1.0);

}  // namespace reslab
