#include "reslab/spectral.hpp"

#include <cmath>

namespace reslab {

CVec SpectralModel::embed_psi0() const {
  CVec v = CVec::Zero(2 * n());
  v.tail(n()) = psi0.cast<Complex>();
  return v;
}

CVec SpectralModel::apply_P0(const CVec& v) const {
  CVec out = CVec::Zero(v.size());
  Complex amp = psi0.cast<Complex>().dot(v.tail(n()));
  out.tail(n()) = amp * psi0.cast<Complex>();
  return out;
}

Vec SpectralModel::window_fn_ch1(const Vec& weights, const Vec& in) const {
  Vec coeff = v_w.transpose() * in;
  coeff.array() *= weights.array();
  return v_w * coeff;
}

CVec SpectralModel::window_fn_ch1(const Vec& weights, const CVec& in) const {
  CVec coeff = v_w.transpose() * in;
  coeff.array() *= weights.array().cast<Complex>();
  return v_w * coeff;
}

CVec SpectralModel::apply_Pc(const CVec& v) const {
  CVec out = CVec::Zero(v.size());
  out.head(n()) = window_fn_ch1(pc_w, CVec(v.head(n())));
  return out;
}

CVec SpectralModel::apply_P1(const CVec& v) const {
  // exact complement: P1 = I - P0 - Pc#
  return v - apply_P0(v) - apply_Pc(v);
}

double SpectralModel::level_spacing_near(double lambda) const {
  const int k = K();
  require(k >= 2, "invalid-config", "window holds fewer than two free modes");
  int j = 0;
  double best = std::abs(mu_w[0] - lambda);
  for (int i = 1; i < k; ++i) {
    double d = std::abs(mu_w[i] - lambda);
    if (d < best) {
      best = d;
      j = i;
    }
  }
  if (j == 0) return mu_w[1] - mu_w[0];
  if (j == k - 1) return mu_w[k - 1] - mu_w[k - 2];
  return 0.5 * (mu_w[j + 1] - mu_w[j - 1]);
}

SpectralModel build_spectral_model(const Grid& g, const SymTridiag& h_free,
                                   const SymTridiag& h_osc,
                                   const WindowGeometry& window, int n_embed) {
  SpectralModel m;
  m.grid = g;
  m.window = window;
  m.n_embed = n_embed;

  EigResult osc = eigenpairs(h_osc, n_embed + 2);
  m.osc_low_vals = osc.values;
  m.osc_low_vecs = osc.vectors;
  m.lambda0 = osc.values[n_embed];
  m.psi0 = osc.vectors.col(n_embed);
  if (m.psi0.sum() < 0) m.psi0 = -m.psi0;  // fix the sign for reproducibility

  const CutoffSpec& pcw = window.pc_window;
  require(m.lambda0 > window.g_delta.a && m.lambda0 < window.g_delta.b,
          "hypothesis-violation", "embedded level does not lie inside Delta");
  require(window.g_delta.a - window.g_delta.margin > 0.0, "hypothesis-violation",
          "Delta touches the free-channel threshold at 0");
  // (H3): no other oscillator level inside the Pc window support
  double lo = pcw.a - pcw.margin, hi = pcw.b + pcw.margin;
  for (int i = 0; i < m.osc_low_vals.size(); ++i) {
    if (i == n_embed) continue;
    require(m.osc_low_vals[i] < lo || m.osc_low_vals[i] > hi, "hypothesis-violation",
            "another oscillator level lies inside the spectral window");
  }

  EigResult fw = eig_range(h_free, lo, hi);
  require(fw.values.size() >= 2, "hypothesis-violation",
          "free channel resolves fewer than two modes inside the window");
  m.mu_w = fw.values;
  m.v_w = fw.vectors;
  m.pc_w.resize(m.mu_w.size());
  for (int i = 0; i < m.mu_w.size(); ++i) m.pc_w[i] = window.pc_of(m.mu_w[i]);

  m.free_min = eig_lowest(h_free, 1).values[0];
  m.band_top = 4.0 / (g.spacing * g.spacing);
  require(m.lambda0 > m.free_min && m.lambda0 < m.band_top, "hypothesis-violation",
          "embedded level is not interior to the free-channel band");
  return m;
}

EigResult eigenpairs(const SymTridiag& a, int k) {
  EigResult r = eig_lowest(a, k);
  // contract checks
  Mat gram = r.vectors.transpose() * r.vectors;
  double ortho = (gram - Mat::Identity(k, k)).cwiseAbs().maxCoeff();
  require(ortho <= 1e-10, "solver", "eigenpairs: orthonormality loss " + std::to_string(ortho));
  double norm_a = a.norm_bound();
  for (int j = 0; j < k; ++j) {
    Vec res = a.apply(Vec(r.vectors.col(j))) - r.values[j] * r.vectors.col(j);
    require(res.norm() <= 1e-8 * norm_a, "solver",
            "eigenpairs: residual " + std::to_string(res.norm()) + " exceeds contract");
  }
  return r;
}

CVec resolvent_solve(const BlockOperator& a, Complex z, const CVec& f) {
  BlockBandedLU lu(a, -z, Complex(1.0, 0.0));
  CVec u = f;
  lu.solve_inplace(u);
  CVec res = a.apply(u) - z * u - f;
  double fn = f.norm();
  if (fn == 0.0) return u;
  if (res.norm() > 1e-10 * fn) {
    // one step of iterative refinement
    CVec corr = -res;
    lu.solve_inplace(corr);
    u += corr;
    res = a.apply(u) - z * u - f;
  }
  if (res.norm() > 1e-10 * fn) {
    double cond_est = u.norm() * (a.norm_bound() + std::abs(z)) / fn;
    throw ReslabError("ill-conditioned",
                      "resolvent solve residual " + std::to_string(res.norm() / fn) +
                          ", condition estimate " + std::to_string(cond_est));
  }
  return u;
}

RegularityEstimate local_decay_fit(const SymTridiag& h_free, const SymTridiag& h_osc,
                                   const SpectralModel& model, double sigma,
                                   const CVec& f, double t_end, double dt,
                                   bool apply_projector) {
  const int n = model.n();
  require(f.size() == 2 * n, "invalid-config", "state size mismatch");
  CVec u = apply_projector ? model.apply_Pc(f) : f;
  require(u.norm() > 1e-12 * std::max(1.0, f.norm()), "degenerate-input",
          "projected initial state vanishes (Pc# annihilates it)");

  double v_max = 2.0 * std::sqrt(model.window.pc_window.b + model.window.pc_window.margin);
  double t_reflect = model.grid.reflection_time(v_max, 10.0);
  require(t_end <= t_reflect, "window-truncated",
          "requested window " + std::to_string(t_end) +
              " reaches the boundary-reflection time " + std::to_string(t_reflect));

  Vec wminus = weight_vector(sigma, -1, model.grid);
  auto weighted_norm = [&](const CVec& s) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      acc += std::norm(wminus[i] * s[i]) + std::norm(wminus[i] * s[n + i]);
    }
    return std::sqrt(acc);
  };

  // channel-wise Cayley steps for e^{-iH0 t}
  ShiftedTridiagLU lu1(h_free, Complex(1.0, 0.0), Complex(0.0, 0.5 * dt));
  ShiftedTridiagLU lu2(h_osc, Complex(1.0, 0.0), Complex(0.0, 0.5 * dt));
  const int steps = static_cast<int>(std::llround(t_end / dt));
  const int sample_every = std::max(1, steps / 800);

  RegularityEstimate est;
  est.times.push_back(0.0);
  est.weighted_norms.push_back(weighted_norm(u));
  CVec c1(n), c2(n);
  for (int k = 1; k <= steps; ++k) {
    c1 = u.head(n);
    c2 = u.tail(n);
    CVec t1 = c1 - Complex(0.0, 0.5 * dt) * h_free.apply(c1);
    CVec t2 = c2 - Complex(0.0, 0.5 * dt) * h_osc.apply(c2);
    lu1.solve_inplace(t1);
    lu2.solve_inplace(t2);
    u.head(n) = t1;
    u.tail(n) = t2;
    if (k % sample_every == 0 || k == steps) {
      est.times.push_back(k * dt);
      est.weighted_norms.push_back(weighted_norm(u));
    }
  }

  // log-log window: skip the initial plateau, stop at t_end
  est.t_lo = std::max(2.0, 16.0 * dt);
  est.t_hi = t_end;
  std::vector<double> lx, ly;
  for (size_t i = 0; i < est.times.size(); ++i) {
    double t = est.times[i], w = est.weighted_norms[i];
    if (t >= est.t_lo && t <= est.t_hi && w > 1e-14) {
      lx.push_back(std::log(t));
      ly.push_back(std::log(w));
    }
  }
  require(lx.size() >= 8, "degenerate-input", "decay fit window holds too few samples");
  auto [c0, c1fit] = linear_fit(lx, ly);
  est.r_hat = -c1fit;
  est.eta_hat = est.r_hat - 1.0;
  double ss = 0.0;
  for (size_t i = 0; i < lx.size(); ++i) {
    double p = c0 + c1fit * lx[i];
    ss += (ly[i] - p) * (ly[i] - p);
  }
  est.residual = std::sqrt(ss / lx.size());
  return est;
}

TripleNorm triple_norm_W(const TwoChannelModel& m, const SpectralModel& model,
                         double sigma, double c_shift, double tol) {
  const int n = model.n();
  // (W1): the shift must avoid both channel spectra
  double dist_free = std::abs(model.free_min + c_shift);
  for (double mu : model.mu_w) dist_free = std::min(dist_free, std::abs(mu + c_shift));
  double dist_osc = std::abs(model.osc_low_vals[0] + c_shift);
  require(-c_shift < model.free_min || dist_free > 1e-6, "invalid-shift",
          "c lies inside the free-channel spectrum");
  require(dist_osc > 1e-6, "invalid-shift", "c coincides with an oscillator level");

  Vec gdelta_w(model.K());
  for (int i = 0; i < model.K(); ++i) gdelta_w[i] = model.window.g_delta_of(model.mu_w[i]);

  Vec wplus = weight_vector(sigma, 1, model.grid);
  Vec wplus2 = weight_vector(2.0 * sigma, 1, model.grid);
  Vec wminus = weight_vector(sigma, -1, model.grid);

  // g_Delta(H0): window-rank on channel 1, rank-1 (psi0) on channel 2
  auto gdelta_h0 = [&](const Vec& x, Vec& y) {
    y.resize(2 * n);
    y.head(n) = model.window_fn_ch1(gdelta_w, Vec(x.head(n)));
    double amp = model.psi0.dot(x.tail(n)) * model.window.g_delta_of(model.lambda0);
    y.tail(n) = amp * model.psi0;
  };
  auto apply_w = [&](const Vec& x, Vec& y) {
    y.resize(2 * n);
    y.head(n) = m.w_tilde.cwiseProduct(x.tail(n));
    y.tail(n) = m.w_tilde.cwiseProduct(x.head(n));
  };
  auto diag_mul = [&](const Vec& d) {
    return [d, n](const Vec& x, Vec& y) {
      y.resize(2 * n);
      y.head(n) = d.cwiseProduct(x.head(n));
      y.tail(n) = d.cwiseProduct(x.tail(n));
    };
  };
  ShiftedTridiagLU rfree(m.h0.a11, Complex(c_shift, 0.0), Complex(1.0, 0.0));
  ShiftedTridiagLU rosc(m.h0.a22, Complex(c_shift, 0.0), Complex(1.0, 0.0));
  auto resolvent_h0 = [&](const Vec& x, Vec& y) {
    y.resize(2 * n);
    CVec t1 = x.head(n).cast<Complex>();
    CVec t2 = x.tail(n).cast<Complex>();
    rfree.solve_inplace(t1);
    rosc.solve_inplace(t2);
    y.head(n) = t1.real();
    y.tail(n) = t2.real();
  };

  auto compose = [&](std::vector<std::function<void(const Vec&, Vec&)>> fns) {
    return [fns](const Vec& x, Vec& y) {
      Vec cur = x, nxt;
      for (auto it = fns.rbegin(); it != fns.rend(); ++it) {
        (*it)(cur, nxt);
        cur = nxt;
      }
      y = cur;
    };
  };
  auto compose_t = [&](std::vector<std::function<void(const Vec&, Vec&)>> fns) {
    // every factor here is symmetric, so the transpose reverses the order
    return [fns](const Vec& x, Vec& y) {
      Vec cur = x, nxt;
      for (auto it = fns.begin(); it != fns.end(); ++it) {
        (*it)(cur, nxt);
        cur = nxt;
      }
      y = cur;
    };
  };

  TripleNorm out;
  {
    std::vector<std::function<void(const Vec&, Vec&)>> f = {diag_mul(wplus2), apply_w,
                                                            gdelta_h0};
    out.term_weighted2 = power_norm(2 * n, compose(f), compose_t(f), tol);
  }
  {
    std::vector<std::function<void(const Vec&, Vec&)>> f = {diag_mul(wplus), apply_w,
                                                            gdelta_h0, diag_mul(wplus)};
    out.term_weighted11 = power_norm(2 * n, compose(f), compose_t(f), tol);
  }
  {
    std::vector<std::function<void(const Vec&, Vec&)>> f = {diag_mul(wplus), apply_w,
                                                            resolvent_h0, diag_mul(wminus)};
    out.term_resolvent = power_norm(2 * n, compose(f), compose_t(f), tol);
  }
  {
    std::vector<std::function<void(const Vec&, Vec&)>> f = {diag_mul(wplus), apply_w,
                                                            resolvent_h0, diag_mul(wplus)};
    out.resolvent_plus = power_norm(2 * n, compose(f), compose_t(f), tol);
  }
  out.total = out.term_weighted2 + out.term_weighted11 + out.term_resolvent;
  return out;
}

EtaEstimate estimate_eta_boundary(const std::function<Complex(double)>& f_boundary,
                                  double s_center, double scale, int n_scales) {
  require(scale > 0 && n_scales >= 3, "invalid-config", "bad eta ladder");
  std::vector<double> lx, ly;
  Complex f0 = f_boundary(s_center);
  double fscale = std::max(std::abs(f0), 1e-30);
  for (int j = 0; j < n_scales; ++j) {
    double d = scale / std::pow(2.0, j);
    double inc = 0.5 * (std::abs(f_boundary(s_center + d) - f0) +
                        std::abs(f0 - f_boundary(s_center - d)));
    require(inc > 1e-12 * fscale, "insufficient-resolution",
            "boundary increments fell below the noise floor");
    lx.push_back(std::log(d));
    ly.push_back(std::log(inc));
  }
  auto [c0, slope] = linear_fit(lx, ly);
  (void)c0;
  EtaEstimate est;
  est.cap = 1.0;
  est.eta = slope;
  if (slope >= est.cap - 0.05) {
    est.saturated = true;
    est.eta = est.cap;
  }
  double ss = 0.0;
  for (size_t i = 0; i < lx.size(); ++i) {
    double p = c0 + slope * lx[i];
    ss += (ly[i] - p) * (ly[i] - p);
  }
  est.fit_residual = std::sqrt(ss / lx.size());
  return est;
}

}  // namespace reslab
