#pragma once

#include "reslab/spectral.hpp"

namespace reslab {

// Geometric ladder gamma_k = top * 2^-k down to the floor, extrapolated to
// gamma = 0 by a Neville tableau. The floor is tied to the local level
// spacing of the truncated box: below it the discrete spectrum resolves.
struct LadderSpec {
  double top_factor = 5.0;    // gamma_0 = top_factor * spacing
  double floor_factor = 1.1;  // stop below floor_factor * spacing
  double ratio = 2.0;
};

struct LadderResult {
  Complex value;
  double error = 0.0;
  std::vector<double> gammas;
  std::vector<Complex> samples;
};

// lim_{gamma->0+} <u, (T - lambda - i gamma)^{-1} u> for a channel block.
LadderResult stone_boundary(const SymTridiag& t, const Vec& u, double lambda,
                            double spacing, const LadderSpec& spec = {});

struct FgrResult {
  double omega = 0.0;            // lambda0 + eps <psi0, W psi0>
  double gamma0 = 0.0;           // pi eps^2 (W psi0, delta(H0-lambda)(I-P0) W psi0)
  double gamma0_err = 0.0;
  double lambda_shift = 0.0;     // eps^2 (W psi0, P.V. (H0-lambda0)^{-1} W psi0)
  double lambda_shift_err = 0.0;
  double eval_point = 0.0;
  std::vector<double> ladder_gammas;
  std::vector<Complex> ladder_samples;
};

double omega_first(double epsilon, const SpectralModel& model, const BlockOperator& w);

// Stone-formula width at energy lambda (limiting absorption + Richardson).
LadderResult fgr_boundary(double lambda, const TwoChannelModel& m,
                          const SpectralModel& model, const LadderSpec& spec = {});

double gamma_fgr(double lambda, double epsilon, const TwoChannelModel& m,
                 const SpectralModel& model, double* err = nullptr,
                 const LadderSpec& spec = {});

double lambda_shift(double lambda0, double epsilon, const TwoChannelModel& m,
                    const SpectralModel& model, double* err = nullptr,
                    const LadderSpec& spec = {});

FgrResult compute_fgr(double epsilon, const TwoChannelModel& m, const SpectralModel& model,
                      const LadderSpec& spec = {});

}  // namespace reslab
