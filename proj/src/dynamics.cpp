#include "reslab/dynamics.hpp"

#include <cmath>

namespace reslab {

namespace {
inline CVec rmul(const Mat& a, const CVec& x) {
  return (a * x.real()).cast<Complex>() + I1 * (a * x.imag()).cast<Complex>().eval();
}
inline CVec rmul_t(const Mat& a, const CVec& x) {
  return (a.transpose() * x.real()).cast<Complex>() +
         I1 * (a.transpose() * x.imag()).cast<Complex>().eval();
}
}  // namespace

Trajectory propagate(const BlockOperator& h, const Grid& g, const CVec& phi0, double dt,
                     double t_end, const PropagateOptions& opts) {
  require(dt > 0 && t_end > 0, "invalid-config", "bad propagation window");
  require(phi0.size() == h.total_points(), "invalid-config", "state size mismatch");
  Trajectory traj;
  traj.dt = dt;
  traj.scheme = opts.scheme;
  traj.accuracy_warning = dt * h.norm_bound() > 0.5;
  if (opts.horizon_speed > 0) {
    traj.horizon_time = g.reflection_time(opts.horizon_speed, 10.0);
    traj.horizon_warning = t_end > traj.horizon_time;
  }
  const int steps = static_cast<int>(std::llround(t_end / dt));
  const int n2 = h.total_points();

  auto record_sample = [&](double t, const CVec& phi) {
    traj.times.push_back(t);
    traj.norm_log.push_back(phi.norm());
    traj.energy_log.push_back(phi.dot(h.apply(phi)).real());
    if (opts.observer) opts.observer(t, phi);
  };
  auto record_state = [&](double t, const CVec& phi) {
    traj.state_times.push_back(t);
    traj.states.push_back(phi);
  };
  auto record_track = [&](double t, const CVec& phi) {
    if (opts.track_vector) {
      traj.a_times.push_back(t);
      traj.a.push_back(opts.track_vector->dot(phi));
    }
  };

  if (opts.scheme == "dense-oracle") {
    require(n2 <= 640, "invalid-config", "dense oracle limited to small matrices");
    Eigen::SelfAdjointEigenSolver<Mat> es(h.dense());
    require(es.info() == Eigen::Success, "solver", "dense eigensolve failed");
    const Mat& v = es.eigenvectors();
    const Vec& lam = es.eigenvalues();
    CVec c0 = rmul_t(v, phi0);
    CVec phase(n2), phi(n2);
    record_sample(0.0, phi0);
    record_track(0.0, phi0);
    if (opts.store_every > 0) record_state(0.0, phi0);
    for (int k = 1; k <= steps; ++k) {
      double t = k * dt;
      for (int i = 0; i < n2; ++i) phase[i] = std::exp(-I1 * lam[i] * t) * c0[i];
      phi = rmul(v, phase);
      record_track(t, phi);
      if (k % opts.sample_every == 0 || k == steps) record_sample(t, phi);
      if (opts.store_every > 0 && (k % opts.store_every == 0 || k == steps))
        record_state(t, phi);
    }
    return traj;
  }

  require(opts.scheme == "cayley", "invalid-config", "unknown scheme " + opts.scheme);
  BlockBandedLU lu(h, Complex(1.0, 0.0), I1 * (0.5 * dt));
  CVec phi = phi0;
  record_sample(0.0, phi);
  record_track(0.0, phi);
  if (opts.store_every > 0) record_state(0.0, phi);
  for (int k = 1; k <= steps; ++k) {
    CVec rhs = phi - I1 * (0.5 * dt) * h.apply(phi);
    lu.solve_inplace(rhs);
    phi.swap(rhs);
    double t = k * dt;
    record_track(t, phi);
    if (k % opts.sample_every == 0 || k == steps) record_sample(t, phi);
    if (opts.store_every > 0 && (k % opts.store_every == 0 || k == steps))
      record_state(t, phi);
  }
  return traj;
}

AmplitudeSeries amplitude_series(const Trajectory& traj, const SpectralModel& model,
                                 double sigma) {
  require(!traj.states.empty(), "invalid-config",
          "amplitude series needs stored states (set store_every)");
  const int n = model.n();
  AmplitudeSeries s;
  CVec psi = model.embed_psi0();
  Vec wminus = weight_vector(sigma, -1, model.grid);
  for (size_t k = 0; k < traj.states.size(); ++k) {
    const CVec& phi = traj.states[k];
    require(phi.size() == 2 * n, "invalid-config", "trajectory/model grid mismatch");
    Complex a = psi.dot(phi);
    // phi_d = Pc# (phi - a psi0) = Pc# phi, channel 1 only
    CVec pd = model.window_fn_ch1(model.pc_w, CVec(phi.head(n)));
    double wn = 0.0;
    for (int i = 0; i < n; ++i) wn += std::norm(wminus[i] * pd[i]);
    s.times.push_back(traj.state_times[k]);
    s.a.push_back(a);
    s.phid_weighted.push_back(std::sqrt(wn));
  }
  s.a0 = s.a.empty() ? Complex(0, 0) : s.a.front();
  return s;
}

SampledSeries apply_K(const SampledSeries& f, const TwoChannelModel& m,
                      const SpectralModel& model, const GtildeFactor& gt) {
  require(f.dt > 0 && f.values.size() == f.times.size() && f.values.size() >= 2,
          "mesh-mismatch", "K needs a uniform sampled input");
  const int n = model.n();
  const int kw = model.K();
  const double dt = f.dt;

  auto g_coeff = [&](const CVec& v) -> CVec {
    CVec gv = gt.apply(v);
    CVec w1 = CVec(n);
    for (int i = 0; i < n; ++i) w1[i] = m.epsilon * m.w_tilde[i] * gv[n + i];
    CVec c = rmul_t(model.v_w, w1);
    c.array() *= model.pc_w.array().cast<Complex>();
    return c;
  };

  CVec phase(kw);
  for (int i = 0; i < kw; ++i) phase[i] = std::exp(-I1 * model.mu_w[i] * dt);

  SampledSeries out;
  out.dt = dt;
  out.times = f.times;
  out.values.reserve(f.values.size());
  CVec acc = CVec::Zero(kw);
  CVec gprev = g_coeff(f.values[0]);
  CVec v0 = CVec::Zero(2 * n);
  out.values.push_back(v0);
  for (size_t k = 1; k < f.values.size(); ++k) {
    CVec gcur = g_coeff(f.values[k]);
    acc = phase.cwiseProduct(acc + (0.5 * dt) * gprev) + (0.5 * dt) * gcur;
    CVec full = CVec::Zero(2 * n);
    full.head(n) = rmul(model.v_w, acc);
    // plain convolution: the -i Duhamel factor stays in the amplitude equation
    out.values.push_back(full);
    gprev.swap(gcur);
  }
  return out;
}

double sup_weighted_norm(const SampledSeries& s, double beta, double sigma, const Grid& g) {
  Vec wm = weight_vector(sigma, -1, g);
  double best = 0.0;
  const int n = g.points;
  for (size_t k = 0; k < s.values.size(); ++k) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
      acc += std::norm(wm[i] * s.values[k][i]) + std::norm(wm[i] * s.values[k][n + i]);
    double t = s.times[k];
    best = std::max(best, std::pow(1.0 + t * t, 0.5 * beta) * std::sqrt(acc));
  }
  return best;
}

double sup_norm(const SampledSeries& s, double beta) {
  double best = 0.0;
  for (size_t k = 0; k < s.values.size(); ++k) {
    double t = s.times[k];
    best = std::max(best, std::pow(1.0 + t * t, 0.5 * beta) * s.values[k].norm());
  }
  return best;
}

namespace {

// one trapezoid sweep of the reduced system on a chunk, with the coupling
// terms taken from the previous iterate
void sweep_chunk(const ReducedAmplitudeSystem& sys, double dt, Complex a_in, const CVec& c_in,
                 const std::vector<Complex>& a_prev, const std::vector<CVec>& c_prev,
                 std::vector<Complex>& a_out, std::vector<CVec>& c_out) {
  const size_t len = a_prev.size();
  const int kw = static_cast<int>(sys.mu.size());
  Complex ph_a = std::exp(-I1 * sys.omega1 * dt);
  CVec ph_c(kw);
  for (int i = 0; i < kw; ++i) ph_c[i] = std::exp(-I1 * sys.mu[i] * dt);
  a_out.resize(len);
  c_out.resize(len);
  a_out[0] = a_in;
  c_out[0] = c_in;
  CMat thc = sys.theta.cast<Complex>();
  CVec beta_c = sys.beta.cast<Complex>();
  CVec w_r_c = sys.w_r.cast<Complex>();
  CVec rhs_prev = thc * c_prev[0] + beta_c * a_prev[0];
  for (size_t k = 1; k < len; ++k) {
    CVec rhs_cur = thc * c_prev[k] + beta_c * a_prev[k];
    Complex ja_prev = w_r_c.dot(c_prev[k - 1]);
    Complex ja_cur = w_r_c.dot(c_prev[k]);
    a_out[k] = ph_a * a_out[k - 1] -
               I1 * (0.5 * dt) * (ph_a * ja_prev + ja_cur);
    c_out[k] = ph_c.cwiseProduct(c_out[k - 1] + (I1 * (-0.5 * dt)) * rhs_prev) +
               (I1 * (-0.5 * dt)) * rhs_cur;
    rhs_prev.swap(rhs_cur);
  }
}

}  // namespace

AmplitudeSeries solve_amplitude_volterra(Complex a0, const ReducedAmplitudeSystem& sys,
                                         double t_end, double dt,
                                         const VolterraOptions& opts) {
  require(dt > 0 && t_end > dt, "invalid-config", "bad Volterra window");
  const int kw = static_cast<int>(sys.mu.size());
  const int steps = static_cast<int>(std::llround(t_end / dt));
  AmplitudeSeries out;
  out.a0 = a0;
  out.times.reserve(steps + 1);
  out.a.reserve(steps + 1);
  out.times.push_back(0.0);
  out.a.push_back(a0);

  if (opts.method == "expm") {
    Mat asys(kw + 1, kw + 1);
    asys(0, 0) = sys.omega1;
    asys.block(0, 1, 1, kw) = sys.w_r.transpose();
    asys.block(1, 0, kw, 1) = sys.beta;
    asys.block(1, 1, kw, kw) = sys.theta;
    for (int i = 0; i < kw; ++i) asys(1 + i, 1 + i) += sys.mu[i];
    Eigen::EigenSolver<Mat> es(asys);
    require(es.info() == Eigen::Success, "solver", "reduced eigensolve failed");
    CVec y0 = CVec::Zero(kw + 1);
    y0[0] = a0;
    CVec coef = es.eigenvectors().partialPivLu().solve(y0);
    CVec row = es.eigenvectors().row(0).transpose();
    for (int k = 1; k <= steps; ++k) {
      double t = k * dt;
      Complex a = 0.0;
      for (int i = 0; i <= kw; ++i)
        a += row[i] * std::exp(-I1 * es.eigenvalues()[i] * t) * coef[i];
      out.times.push_back(t);
      out.a.push_back(a);
    }
    return out;
  }

  require(opts.method == "picard", "invalid-config", "unknown Volterra method");
  Complex a_in = a0;
  CVec c_in = CVec::Zero(kw);
  int done = 0;
  while (done < steps) {
    int len = std::min(opts.chunk_steps, steps - done) + 1;
    std::vector<Complex> a_prev(len), a_next(len);
    std::vector<CVec> c_prev(len), c_next(len);
    // seed: free carriers from the chunk boundary
    Complex ph_a = std::exp(-I1 * sys.omega1 * dt);
    CVec ph_c(kw);
    for (int i = 0; i < kw; ++i) ph_c[i] = std::exp(-I1 * sys.mu[i] * dt);
    a_prev[0] = a_in;
    c_prev[0] = c_in;
    for (int k = 1; k < len; ++k) {
      a_prev[k] = ph_a * a_prev[k - 1];
      c_prev[k] = ph_c.cwiseProduct(c_prev[k - 1]);
    }
    double prev_diff = -1.0;
    bool converged = false;
    for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
      sweep_chunk(sys, dt, a_in, c_in, a_prev, c_prev, a_next, c_next);
      double diff = 0.0;
      for (int k = 0; k < len; ++k) diff = std::max(diff, std::abs(a_next[k] - a_prev[k]));
      a_prev.swap(a_next);
      c_prev.swap(c_next);
      if (diff <= opts.tol) {
        converged = true;
        break;
      }
      if (prev_diff > 0 && diff > prev_diff && sweep >= 3) {
        throw ReslabError("contraction-failure",
                          "Picard iteration diverges, Lipschitz estimate " +
                              std::to_string(diff / prev_diff));
      }
      prev_diff = diff;
    }
    require(converged, "contraction-failure", "Picard iteration did not converge in chunk");
    for (int k = 1; k < len; ++k) {
      out.times.push_back((done + k) * dt);
      out.a.push_back(a_prev[k]);
    }
    a_in = a_prev[len - 1];
    c_in = c_prev[len - 1];
    done += len - 1;
  }
  return out;
}

double measure_J_nu_ratio(const ReducedAmplitudeSystem& sys, double nu, double t_end,
                          double dt) {
  const int kw = static_cast<int>(sys.mu.size());
  const int steps = static_cast<int>(std::llround(t_end / dt));
  // test amplitude a(s) = e^{-i omega s}: ||a||_nu = 1
  std::vector<Complex> a(steps + 1);
  for (int k = 0; k <= steps; ++k) a[k] = std::exp(-I1 * sys.omega * (k * dt));
  // march c[a]
  CVec ph_c(kw);
  for (int i = 0; i < kw; ++i) ph_c[i] = std::exp(-I1 * sys.mu[i] * dt);
  CMat thc = sys.theta.cast<Complex>();
  CVec beta_c = sys.beta.cast<Complex>();
  CVec w_r_c = sys.w_r.cast<Complex>();
  CVec c = CVec::Zero(kw);
  CVec rhs_prev = beta_c * a[0];
  Complex ph_a = std::exp(-I1 * sys.omega * dt);
  Complex jint = 0.0;  // outer integral, e^{-i omega (t-s)} carrier
  double best = 0.0;
  Complex jprev = (sys.omega1 - sys.omega) * a[0] + w_r_c.dot(c);
  for (int k = 1; k <= steps; ++k) {
    CVec rhs_cur = thc * c + beta_c * a[k];  // uses c at previous step for trapezoid seed
    c = ph_c.cwiseProduct(c + (I1 * (-0.5 * dt)) * rhs_prev) + (I1 * (-0.5 * dt)) * rhs_cur;
    rhs_prev = thc * c + beta_c * a[k];
    Complex jcur = (sys.omega1 - sys.omega) * a[k] + w_r_c.dot(c);
    jint = ph_a * jint + (-I1) * (0.5 * dt) * (ph_a * jprev + jcur);
    jprev = jcur;
    double t = k * dt;
    best = std::max(best, std::exp(-nu * t) * std::abs(jint));
  }
  return best;
}

static SampledSeries make_test_series(const TwoChannelModel& m, const SpectralModel& model,
                                      double t_end, double dt) {
  const int n = model.n();
  CVec f0 = CVec::Zero(2 * n);
  for (int i = 0; i < n; ++i) {
    f0[i] = m.w_tilde.size() ? m.w_tilde[i] * model.psi0[i] : model.psi0[i];
    f0[n + i] = model.psi0[i];
  }
  f0.normalize();
  SampledSeries f;
  f.dt = dt;
  int steps = static_cast<int>(std::llround(t_end / dt));
  for (int k = 0; k <= steps; ++k) {
    double t = k * dt;
    f.times.push_back(t);
    f.values.push_back(std::exp(-I1 * model.lambda0 * t) * f0);
  }
  return f;
}

double measure_K_ratio(const TwoChannelModel& m, const SpectralModel& model,
                       const GtildeFactor& gt, double beta, double sigma,
                       double t_end, double dt) {
  SampledSeries f = make_test_series(m, model, t_end, dt);
  SampledSeries kf = apply_K(f, m, model, gt);
  return sup_weighted_norm(kf, beta, sigma, model.grid) / sup_norm(f, beta);
}

double measure_AW_ratio(const TwoChannelModel& m, const SpectralModel& model,
                        const GtildeFactor& gt, double beta, double sigma,
                        double t_end, double dt) {
  SampledSeries f = make_test_series(m, model, t_end, dt);
  double fnorm = sup_norm(f, beta);
  SampledSeries power = apply_K(f, m, model, gt);
  SampledSeries acc = power;
  for (int it = 0; it < 40; ++it) {
    double pn = sup_norm(power, beta);
    if (pn <= 1e-12 * fnorm) break;
    power = apply_K(power, m, model, gt);
    for (size_t k = 0; k < acc.values.size(); ++k) acc.values[k] += power.values[k];
  }
  return sup_weighted_norm(acc, beta, sigma, model.grid) / fnorm;
}

}  // namespace reslab
