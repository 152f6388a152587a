#include "reslab/fevaluator.hpp"

#include <cmath>

namespace reslab {

ReducedAmplitudeSystem build_reduced_system(const TwoChannelModel& m,
                                            const SpectralModel& model,
                                            const GtildeFactor& gt) {
  const int n = model.n();
  const int K = gt.K();
  ReducedAmplitudeSystem sys;
  sys.mu = model.mu_w;
  sys.pc = model.pc_w;
  sys.epsilon = m.epsilon;
  sys.lambda0 = model.lambda0;
  sys.omega = omega_first(m.epsilon, model, m.w);
  sys.omega1 = gt.omega1;

  // E = V_w^T (W~ .* V_H,ch2), h1 = V_H,ch1^T (W~ .* psi0)
  Mat wv2(n, K);
  for (int j = 0; j < K; ++j)
    wv2.col(j) = m.w_tilde.cwiseProduct(gt.v_h.col(j).tail(n));
  Mat e = model.v_w.transpose() * wv2;
  Vec h1 = Vec::Zero(K);
  Vec wpsi = m.w_tilde.cwiseProduct(model.psi0);
  for (int j = 0; j < K; ++j) h1[j] = gt.v_h.col(j).head(n).dot(wpsi);

  Mat f2 = gt.q.topRows(n).transpose() * model.v_w;  // K x Kw
  Vec qpsi = gt.q.bottomRows(n).transpose() * model.psi0;

  Mat ecore = m.epsilon * (e * gt.core);               // Kw x K
  sys.theta = sys.pc.asDiagonal() * (ecore * f2);      // Kw x Kw
  sys.beta = sys.pc.asDiagonal() * (ecore * qpsi);
  sys.w_r = m.epsilon * f2.transpose() * (gt.core.transpose() * h1);
  return sys;
}

FEvaluator::FEvaluator(const TwoChannelModel& m, const SpectralModel& model,
                       const GtildeFactor& gt) {
  model_ = &model;
  eps_ = m.epsilon;
  lambda0_ = model.lambda0;
  n_ = model.n();
  h_ = model.grid.spacing;
  t1_ = m.h0.a11;
  v_w_ = model.v_w;

  ReducedAmplitudeSystem sys = build_reduced_system(m, model, gt);
  omega_ = sys.omega;
  omega1_ = sys.omega1;
  const_im_ = omega1_ - omega_;
  mu_w_ = sys.mu;
  pc_w_ = sys.pc;
  theta_ = sys.theta;
  beta_ = sys.beta;
  w_r_ = sys.w_r;

  // N-space factors for the dense and continued routes
  const int K = gt.K();
  Mat wv2(n_, K);
  for (int j = 0; j < K; ++j)
    wv2.col(j) = m.w_tilde.cwiseProduct(gt.v_h.col(j).tail(n_));
  Mat e = model.v_w.transpose() * wv2;
  Vec h1 = Vec::Zero(K);
  Vec wpsi = m.w_tilde.cwiseProduct(model.psi0);
  for (int j = 0; j < K; ++j) h1[j] = gt.v_h.col(j).head(n_).dot(wpsi);
  Mat ecore = eps_ * (e * gt.core);
  u1_ = model.v_w * (pc_w_.asDiagonal() * ecore);  // N x K
  z1_ = gt.q.topRows(n_).transpose();              // K x N
  vwbeta_ = model.v_w * beta_;
  readout_n_ = eps_ * gt.q.topRows(n_) * (gt.core.transpose() * h1);
}

Complex FEvaluator::tail_constant() const {
  if (eps_ == 0.0) return {0.0, 0.0};
  return I1 * const_im_ / (eps_ * eps_);
}

Complex FEvaluator::value_from_term(Complex term) const {
  // term = <psi0, eps W g~ (I-M)^{-1} M psi0>
  return (I1 * const_im_ + I1 * term) / (eps_ * eps_);
}

Complex FEvaluator::eval_reduced(Complex z) const {
  const int k = static_cast<int>(mu_w_.size());
  CMat a(k, k);
  a = (-theta_).cast<Complex>();
  for (int i = 0; i < k; ++i) a(i, i) += z - mu_w_[i];
  CVec x = a.partialPivLu().solve(beta_.cast<Complex>().eval());
  Complex term = w_r_.cast<Complex>().dot(x);  // real w_r: no conjugation effect
  return value_from_term(term);
}

Complex FEvaluator::eval_dense(Complex z) const {
  CMat a = CMat::Zero(n_, n_);
  for (int i = 0; i < n_; ++i) {
    a(i, i) = t1_.diag[i] - z;
    if (i + 1 < n_) a(i, i + 1) = a(i + 1, i) = t1_.off[i];
  }
  a += (u1_ * z1_).cast<Complex>();
  CVec x = a.partialPivLu().solve((-vwbeta_).cast<Complex>().eval());
  Complex term = readout_n_.cast<Complex>().dot(x);
  return value_from_term(term);
}

Complex FEvaluator::eval_neumann(Complex z, int order) const {
  const int k = static_cast<int>(mu_w_.size());
  CVec dc(k);
  for (int i = 0; i < k; ++i) dc[i] = 1.0 / (mu_w_[i] - z);
  CVec m0 = -(dc.array() * beta_.cast<Complex>().array()).matrix();
  CVec x = m0, pow = m0;
  for (int j = 1; j < order; ++j) {
    CVec tmp = theta_.cast<Complex>() * pow;
    pow = -(dc.array() * tmp.array()).matrix();
    x += pow;
  }
  Complex term = w_r_.cast<Complex>().dot(x);
  return value_from_term(term);
}

Complex FEvaluator::eval(Complex p, SolveStrategy strat, int neumann_order) const {
  if (eps_ == 0.0) return {0.0, 0.0};
  Complex z = I1 * p;
  switch (strat) {
    case SolveStrategy::Direct:
      return eval_reduced(z);
    case SolveStrategy::DenseLU:
      return eval_dense(z);
    case SolveStrategy::Neumann:
      return eval_neumann(z, neumann_order);
  }
  return {0.0, 0.0};
}

double FEvaluator::boundary_spacing(double s) const {
  return model_->level_spacing_near(-s);
}

Complex FEvaluator::eval_boundary(double s, double* err, const LadderSpec& spec) const {
  if (eps_ == 0.0) {
    if (err) *err = 0.0;
    return {0.0, 0.0};
  }
  double lambda = -s;
  require(lambda > model_->window.pc_window.a - model_->window.pc_window.margin &&
              lambda < model_->window.pc_window.b + model_->window.pc_window.margin,
          "near-cut", "boundary evaluation outside the spectral window");
  double spacing = model_->level_spacing_near(lambda);
  std::vector<double> gammas;
  std::vector<Complex> vals;
  double gamma = spec.top_factor * spacing;
  const double floor = spec.floor_factor * spacing;
  while (gamma >= floor) {
    gammas.push_back(gamma);
    vals.push_back(eval_reduced(Complex(lambda, gamma)));  // z = ip, p = gamma + is
    gamma /= spec.ratio;
  }
  require(gammas.size() >= 3, "resolution",
          "gamma ladder too short at this energy; enlarge the box");
  double e = 0.0;
  Complex v = neville_to_zero(gammas, vals, &e);
  if (err) *err = e;
  return v;
}

CVec FEvaluator::kernel_apply(Complex z, ContinuationKernel kern, const CVec& v) const {
  if (kern == ContinuationKernel::Box) {
    ShiftedTridiagLU lu(t1_, z);
    return lu.solve(v);
  }
  Complex rho, pref;
  if (kern == ContinuationKernel::Lattice) {
    Complex w = 0.5 * h_ * std::sqrt(z);
    require(std::abs(w) < 0.98, "branch-point",
            "energy too close to the lattice band edge for continuation");
    Complex kappa_h = 2.0 * std::asin(w);  // kappa * h
    rho = std::exp(I1 * kappa_h);
    pref = h_ / (1.0 / rho - rho);
  } else {
    Complex sq = std::sqrt(z);
    require(std::abs(sq) > 1e-8, "branch-point", "continuation at the threshold");
    rho = std::exp(I1 * sq * h_);
    pref = h_ * I1 / (2.0 * sq);
  }
  require(n_ * std::max(0.0, std::log(std::abs(rho))) < 40.0, "branch-point",
          "second-sheet growth overflows the window");
  CVec f(n_), b(n_);
  f[0] = v[0];
  for (int j = 1; j < n_; ++j) f[j] = rho * f[j - 1] + v[j];
  b[n_ - 1] = 0.0;
  for (int j = n_ - 2; j >= 0; --j) b[j] = rho * (b[j + 1] + v[j + 1]);
  return pref * (f + b);
}

Complex FEvaluator::eval_continued(Complex p, ContinuationKernel kern) const {
  if (eps_ == 0.0) return {0.0, 0.0};
  Complex z = I1 * p;
  const int K = static_cast<int>(z1_.rows());
  // x = (I + Gc U1 Z1)^{-1} rhs, rhs = -Gc V_w beta
  CVec rhs = -kernel_apply(z, kern, vwbeta_.cast<Complex>());
  CMat gcu(n_, K);
  for (int j = 0; j < K; ++j)
    gcu.col(j) = kernel_apply(z, kern, u1_.col(j).cast<Complex>());
  CMat corek = CMat::Identity(K, K) + z1_.cast<Complex>() * gcu;
  CVec zr = z1_.cast<Complex>() * rhs;
  CVec y = corek.partialPivLu().solve(zr);
  CVec x = rhs - gcu * y;
  Complex term = readout_n_.cast<Complex>().dot(x);
  return value_from_term(term);
}

double FEvaluator::cr_residual(Complex p, double step, SolveStrategy strat) const {
  Complex fx = (eval(p + step, strat) - eval(p - step, strat)) / (2.0 * step);
  Complex fy = (eval(p + I1 * step, strat) - eval(p - I1 * step, strat)) / (2.0 * step);
  double num = std::abs(fx + I1 * fy);
  double den = std::abs(fx) + std::abs(fy) + 1e-300;
  return num / den;
}

}  // namespace reslab
