#include "reslab/fgr.hpp"

#include <cmath>

namespace reslab {

LadderResult stone_boundary(const SymTridiag& t, const Vec& u, double lambda,
                            double spacing, const LadderSpec& spec) {
  require(spacing > 0, "invalid-config", "nonpositive level spacing");
  LadderResult r;
  double gamma = spec.top_factor * spacing;
  const double floor = spec.floor_factor * spacing;
  CVec uc = u.cast<Complex>();
  while (gamma >= floor) {
    ShiftedTridiagLU lu(t, Complex(-lambda, -gamma), Complex(1.0, 0.0));
    CVec x = lu.solve(uc);
    r.gammas.push_back(gamma);
    r.samples.push_back(uc.dot(x));
    gamma /= spec.ratio;
  }
  require(r.gammas.size() >= 3, "resolution",
          "ladder between floor and top holds fewer than 3 rungs; enlarge the box");
  // alternating increments signal that the discrete comb is resolved
  int flips = 0;
  for (size_t i = 2; i < r.samples.size(); ++i) {
    double d1 = r.samples[i - 1].imag() - r.samples[i - 2].imag();
    double d2 = r.samples[i].imag() - r.samples[i - 1].imag();
    if (d1 * d2 < 0) ++flips;
  }
  r.value = neville_to_zero(r.gammas, r.samples, &r.error);
  require(flips + 1 < static_cast<int>(r.samples.size()) - 1 ||
              r.error < 0.05 * std::abs(r.value),
          "resolution", "non-monotone ladder: extrapolation unreliable, enlarge the box");
  return r;
}

double omega_first(double epsilon, const SpectralModel& model, const BlockOperator& w) {
  CVec psi = model.embed_psi0();
  Complex val = psi.dot(w.apply(psi));
  require(std::abs(val.imag()) <= 1e-12 * std::max(1.0, std::abs(val)), "solver",
          "first-order matrix element has a spurious imaginary part");
  return model.lambda0 + epsilon * val.real();
}

LadderResult fgr_boundary(double lambda, const TwoChannelModel& m,
                          const SpectralModel& model, const LadderSpec& spec) {
  double spacing = model.level_spacing_near(lambda);
  require(lambda >= 10.0 * spacing, "resolution",
          "energy too close to the free-channel threshold for the box spacing");
  // (I - P0) W psi0 = W psi0 here: the coupled vector lives in channel 1
  Vec u = m.w_tilde.cwiseProduct(model.psi0);
  return stone_boundary(m.h0.a11, u, lambda, spacing, spec);
}

double gamma_fgr(double lambda, double epsilon, const TwoChannelModel& m,
                 const SpectralModel& model, double* err, const LadderSpec& spec) {
  LadderResult r = fgr_boundary(lambda, m, model, spec);
  double gamma = epsilon * epsilon * r.value.imag();
  double e = epsilon * epsilon * r.error;
  if (err) *err = e;
  require(gamma >= -std::max(3.0 * e, 1e-12), "fgr-violation",
          "spectral-density quadratic form came out negative: " + std::to_string(gamma));
  return gamma;
}

double lambda_shift(double lambda0, double epsilon, const TwoChannelModel& m,
                    const SpectralModel& model, double* err, const LadderSpec& spec) {
  LadderResult r = fgr_boundary(lambda0, m, model, spec);
  if (err) *err = epsilon * epsilon * r.error;
  return epsilon * epsilon * r.value.real();
}

FgrResult compute_fgr(double epsilon, const TwoChannelModel& m, const SpectralModel& model,
                      const LadderSpec& spec) {
  FgrResult out;
  out.omega = omega_first(epsilon, model, m.w);
  out.eval_point = model.lambda0;
  LadderResult r = fgr_boundary(model.lambda0, m, model, spec);
  out.gamma0 = epsilon * epsilon * r.value.imag();
  out.gamma0_err = epsilon * epsilon * r.error;
  out.lambda_shift = epsilon * epsilon * r.value.real();
  out.lambda_shift_err = out.gamma0_err;
  out.ladder_gammas = r.gammas;
  out.ladder_samples = r.samples;
  require(out.gamma0 >= -std::max(3.0 * out.gamma0_err, 1e-12), "fgr-violation",
          "Fermi golden rule width came out negative");
  return out;
}

}  // namespace reslab
