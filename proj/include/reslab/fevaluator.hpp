#pragma once

#include "reslab/fgr.hpp"
#include "reslab/gtilde.hpp"

namespace reslab {

enum class SolveStrategy { Direct, DenseLU, Neumann };
enum class ContinuationKernel { Lattice, Continuum, Box };

// Closed system for (a, phi_d) in the free-channel window basis:
//   i a' = omega1 a + w_r . c,   i c' = (diag(mu) + Theta) c + beta a.
// Exact reduction: Pc# W g~ maps into the window span and the free flow is
// diagonal there.
struct ReducedAmplitudeSystem {
  Vec mu;      // K~ window energies
  Vec pc;      // Pc# weights
  Mat theta;   // K~ x K~
  Vec beta;    // K~
  Vec w_r;     // K~
  double omega = 0.0, omega1 = 0.0, epsilon = 0.0, lambda0 = 0.0;
};

ReducedAmplitudeSystem build_reduced_system(const TwoChannelModel& m,
                                            const SpectralModel& model,
                                            const GtildeFactor& gt);

// F(eps, p) from the Laplace transform of the reduced amplitude equation:
//   eps^2 F(p) = i (omega1 - omega) + i < psi0, eps W g~ (I - M)^{-1} M psi0 >,
//   M(p) = -(H0 - ip)^{-1} Pc# eps W g~(H).
// Pc# lives on the free channel only, and both the resolvent and the coupling
// leave the free-channel window span invariant, so the evaluation collapses
// to a K x K solve in that basis. The continued mode replaces the window
// resolvent by the outgoing free-channel kernel, continued across the cut.
class FEvaluator {
public:
  FEvaluator(const TwoChannelModel& m, const SpectralModel& model, const GtildeFactor& gt);

  double omega() const { return omega_; }
  double omega1() const { return omega1_; }
  double epsilon() const { return eps_; }
  double lambda0() const { return lambda0_; }
  const SpectralModel& model() const { return *model_; }

  // F(inf) along any ray: the constant carried by the omega1 - omega term.
  Complex tail_constant() const;

  // evaluation off the cut (any p with ip away from the discretized
  // free-channel spectrum)
  Complex eval(Complex p, SolveStrategy strat = SolveStrategy::Direct,
               int neumann_order = 16) const;

  // boundary value F(is + 0+) via the shared gamma ladder + Richardson
  Complex eval_boundary(double s, double* err = nullptr, const LadderSpec& spec = {}) const;

  // second-sheet evaluation near -i omega
  Complex eval_continued(Complex p, ContinuationKernel kern = ContinuationKernel::Lattice) const;

  // Cauchy-Riemann finite-difference residual (relative)
  double cr_residual(Complex p, double step,
                     SolveStrategy strat = SolveStrategy::Direct) const;

  double boundary_spacing(double s) const;

private:
  Complex value_from_term(Complex term) const;
  Complex eval_reduced(Complex z) const;
  Complex eval_dense(Complex z) const;
  Complex eval_neumann(Complex z, int order) const;
  CVec kernel_apply(Complex z, ContinuationKernel kern, const CVec& v) const;

  // reduced window data
  Vec mu_w_, pc_w_;
  Mat theta_;
  Vec beta_, w_r_;
  double const_im_ = 0.0;  // omega1 - omega

  // N-space data (continued / dense routes)
  Mat u1_;          // N x K_H
  Mat z1_;          // K_H x N
  Vec vwbeta_;      // N
  Vec readout_n_;   // N
  Mat v_w_;         // N x K~ (copy for kernel routes)
  SymTridiag t1_;

  double omega_ = 0.0, omega1_ = 0.0, eps_ = 0.0, lambda0_ = 0.0;
  double h_ = 0.0;
  int n_ = 0;
  const SpectralModel* model_ = nullptr;
};

}  // namespace reslab
