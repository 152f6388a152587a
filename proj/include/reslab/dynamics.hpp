#pragma once

#include <functional>

#include "reslab/fevaluator.hpp"

namespace reslab {

struct PropagateOptions {
  std::string scheme = "cayley";  // cayley | dense-oracle
  int store_every = 0;            // 0: no stored states
  int sample_every = 64;          // norm/energy/observer sampling
  double horizon_speed = 0.0;     // 0: skip the horizon check
  const CVec* track_vector = nullptr;  // per-step inner product <v, phi(t)>
  std::function<void(double, const CVec&)> observer;  // at sample times
};

struct Trajectory {
  double dt = 0.0;
  std::string scheme;
  std::vector<double> a_times;   // every step when track_vector is set
  std::vector<Complex> a;        // <v, phi(t)>
  std::vector<double> times;     // sample times
  std::vector<double> norm_log;
  std::vector<double> energy_log;
  std::vector<double> state_times;
  std::vector<CVec> states;
  bool horizon_warning = false;
  bool accuracy_warning = false;  // dt * ||H|| > 0.5
  double horizon_time = 0.0;
};

Trajectory propagate(const BlockOperator& h, const Grid& g, const CVec& phi0, double dt,
                     double t_end, const PropagateOptions& opts = {});

struct AmplitudeSeries {
  std::vector<double> times;
  std::vector<Complex> a;
  std::vector<double> phid_weighted;  // ||<x>^-sigma phi_d(t)||
  Complex a0;
};

// a(t) = <psi0, phi(t)>, phi_d = Pc#(phi - a psi0), from stored states.
AmplitudeSeries amplitude_series(const Trajectory& traj, const SpectralModel& model,
                                 double sigma);

// Sampled trajectory-valued function on a uniform mesh (desk scale).
struct SampledSeries {
  double dt = 0.0;
  std::vector<double> times;
  std::vector<CVec> values;
};

// (K f)(t) = int_0^t e^{-iH0(t-s)) Pc# eps W g~ f(s) ds, trapezoid in s with
// the free flow applied exactly in the window eigenbasis.
SampledSeries apply_K(const SampledSeries& f, const TwoChannelModel& m,
                      const SpectralModel& model, const GtildeFactor& gt);

double sup_weighted_norm(const SampledSeries& s, double beta, double sigma, const Grid& g);
double sup_norm(const SampledSeries& s, double beta);

struct VolterraOptions {
  double tol = 1e-9;       // sup-norm fixed-point tolerance per chunk
  int chunk_steps = 256;
  int max_sweeps = 60;
  std::string method = "picard";  // picard | expm (diagnostic oracle)
};

// a(t) on [0, t_end] from the integral form, independent of the PDE stepper.
// phi_d(0) = 0 (embedded eigenfunction as initial condition).
AmplitudeSeries solve_amplitude_volterra(Complex a0, const ReducedAmplitudeSystem& sys,
                                         double t_end, double dt,
                                         const VolterraOptions& opts = {});

// ||J a||_nu / ||a||_nu for the Volterra feedback operator J on [0, T].
double measure_J_nu_ratio(const ReducedAmplitudeSystem& sys, double nu, double t_end,
                          double dt);

// sup_t <t>^beta ||<x>^-sigma (K f)(t)|| / sup_t <t>^beta ||f(t)|| for a
// localized oscillating test input f(t) = e^{-i lambda0 t} f0.
double measure_K_ratio(const TwoChannelModel& m, const SpectralModel& model,
                       const GtildeFactor& gt, double beta, double sigma,
                       double t_end, double dt);

// ||A_W f|| / ||f|| in the same norms, A_W = (I-K)^{-1} K = sum K^n.
double measure_AW_ratio(const TwoChannelModel& m, const SpectralModel& model,
                        const GtildeFactor& gt, double beta, double sigma,
                        double t_end, double dt);

}  // namespace reslab
