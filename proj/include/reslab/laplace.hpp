#pragma once

#include <functional>

#include "reslab/types.hpp"

namespace reslab {

// Exponential continuation a(t) = amp e^{(-i s_hat - gamma_hat)(t - t_start)}
// for t >= t_start, integrated in closed form past the sampled range.
struct TailModel {
  Complex amp;
  double s_hat = 0.0;
  double gamma_hat = 0.0;
  double t_start = 0.0;
};

// hat a(p) = int_0^inf e^{-pt} a(t) dt, trapezoid over the samples plus the
// optional tail correction. Without a tail model, Re p * T >= 20 is required
// so the truncated remainder stays below round-off of the result.
Complex laplace_numeric(const std::vector<double>& times, const std::vector<Complex>& a,
                        Complex p, const TailModel* tail = nullptr);

struct DecayFit {
  double s_hat = 0.0;      // oscillation frequency: a ~ amp e^{-i s t - gamma t}
  double gamma_hat = 0.0;  // decay rate
  Complex amp;
  double t1 = 0.0, t2 = 0.0;
  double residual = 0.0;
  // post-exponential power-law window |a| ~ c t^{-q}
  bool tail_ok = false;
  double tail_exponent = 0.0;
  double tail_prefactor = 0.0;
  double tail_residual = 0.0;
  double tail_t1 = 0.0, tail_t2 = 0.0;

  TailModel tail_model(double t_start) const;
};

// Complex exponential fit on the window [0.5, 3]/gamma_guess by linear
// regression on log a (unwrapped phase), then a power-law fit on the
// post-exponential window t > tail_start_factor / gamma_hat.
DecayFit fit_decay(const std::vector<double>& times, const std::vector<Complex>& a,
                   double gamma_guess, double tail_start_factor = 5.0);

// (2 pi i)^{-1} int e^{pt} ghat(p) dp on Re p = nu, trapezoid with adaptive
// truncation and step refinement.
Complex bromwich_invert(const std::function<Complex(Complex)>& ghat, double t, double nu,
                        double tol = 1e-6, double omega_hint = 64.0);

}  // namespace reslab
