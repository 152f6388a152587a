#include "reslab/gtilde.hpp"

#include <lapacke.h>

#include <cmath>

namespace reslab {

namespace {

CVec mul(const Mat& a, const CVec& x) {
  return (a * x.real()).cast<Complex>() + I1 * (a * x.imag()).cast<Complex>();
}
CVec mul_t(const Mat& a, const CVec& x) {
  return (a.transpose() * x.real()).cast<Complex>() +
         I1 * (a.transpose() * x.imag()).cast<Complex>();
}

}  // namespace

Vec GtildeFactor::apply(const Vec& v) const { return v_h * (core * (q.transpose() * v)); }
CVec GtildeFactor::apply(const CVec& v) const {
  return mul(v_h, CVec(core * mul_t(q, v).eval()));
}
Vec GtildeFactor::apply_t(const Vec& v) const {
  return q * (core.transpose() * (v_h.transpose() * v));
}
CVec GtildeFactor::apply_t(const CVec& v) const {
  return mul(q, CVec(core.transpose() * mul_t(v_h, v).eval()));
}

Vec GtildeFactor::apply_gH(const Vec& v) const {
  Vec c = v_h.transpose() * v;
  c.array() *= gd_h.array();
  return v_h * c;
}

Vec GtildeFactor::apply_B(const Vec& v) const { return v + v_h * (b_inner * v); }
Vec GtildeFactor::apply_Bt(const Vec& v) const {
  return v + b_inner.transpose() * (v_h.transpose() * v);
}

EigResult h_window_eig(const BlockOperator& h, double lo, double hi) {
  const int n = h.channel_points;
  const int n2 = 2 * n;
  const int kd = 2;  // interleaved two-channel bandwidth
  Mat ab = Mat::Zero(kd + 1, n2);
  auto set = [&](int i, int j, double v) {
    if (i >= j) ab(i - j, j) = v;  // uplo = 'L': ab(i-j, j) = A(i,j)
  };
  for (int i = 0; i < n; ++i) {
    int r1 = 2 * i, r2 = 2 * i + 1;
    set(r1, r1, h.a11.diag[i]);
    set(r2, r2, h.a22.diag[i]);
    if (i + 1 < n) {
      set(r1 + 2, r1, h.a11.off[i]);
      set(r2 + 2, r2, h.a22.off[i]);
    }
    if (h.coupling.size() == n) set(r2, r1, h.coupling[i]);
  }
  lapack_int mfound = 0;
  Vec w(n2);
  Mat z(n2, n2);
  Mat qwork(n2, n2);
  std::vector<lapack_int> ifail(n2);
  lapack_int info = LAPACKE_dsbevx(
      LAPACK_COL_MAJOR, 'V', 'V', 'L', n2, kd, ab.data(), kd + 1, qwork.data(),
      n2, lo, hi, 0, 0, 2.0 * LAPACKE_dlamch('S'), &mfound, w.data(), z.data(),
      n2, ifail.data());
  require(info == 0, "solver", "dsbevx failed, info=" + std::to_string(info));
  EigResult r;
  r.values = w.head(mfound);
  Mat zc = z.leftCols(mfound);
  // de-interleave back to stacked channel layout
  r.vectors.resize(n2, mfound);
  for (int c = 0; c < mfound; ++c) {
    for (int i = 0; i < n; ++i) {
      r.vectors(i, c) = zc(2 * i, c);
      r.vectors(n + i, c) = zc(2 * i + 1, c);
    }
  }
  return r;
}

GtildeFactor build_B_gtilde(const TwoChannelModel& m, const SpectralModel& model) {
  const int n = model.n();
  const CutoffSpec& gd = model.window.g_delta;
  EigResult hw = h_window_eig(m.h, gd.a - gd.margin - 1e-9, gd.b + gd.margin + 1e-9);
  const int K = static_cast<int>(hw.values.size());
  require(K >= 2, "hypothesis-violation", "no spectrum of H inside the cutoff support");

  GtildeFactor g;
  g.n = n;
  g.mu_h = hw.values;
  g.v_h = hw.vectors;

  // C = g_I(H0) V_H, with g_I = 1 - hole bump; the hole is window-supported
  // on channel 1 and hits only the embedded level on channel 2.
  Vec hole_w(model.K());
  for (int i = 0; i < model.K(); ++i)
    hole_w[i] = 1.0 - model.window.g_I_of(model.mu_w[i]);
  double hole0 = 1.0 - model.window.g_I_of(model.lambda0);
  Mat c(2 * n, K);
  for (int j = 0; j < K; ++j) {
    Vec v1 = g.v_h.col(j).head(n);
    Vec v2 = g.v_h.col(j).tail(n);
    c.col(j).head(n) = v1 - model.window_fn_ch1(hole_w, v1);
    c.col(j).tail(n) = v2 - hole0 * model.psi0 * (model.psi0.dot(v2));
  }

  Vec d(K);
  for (int j = 0; j < K; ++j) d[j] = smooth_bump(gd, g.mu_h[j]);

  // ||g_D(H) g_I(H0)|| = sigma_max(D C^T); smallness guards the inverse
  Mat gram = c.transpose() * c;
  Mat dgd = d.asDiagonal() * gram * d.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Mat> es(dgd);
  g.gg_norm = std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
  require(g.gg_norm <= 0.5, "perturbation-too-large",
          "||g_D(H) g_I(H0)|| = " + std::to_string(g.gg_norm) +
              " exceeds 1/2; reduce epsilon or the coupling amplitude");

  Mat mcore = d.asDiagonal() * (c.transpose() * g.v_h);
  Mat lhs = Mat::Identity(K, K) - mcore;
  g.gd_h = d;
  g.core = lhs.partialPivLu().solve(Mat(d.asDiagonal()));
  g.q = g.v_h - c;

  // ||B|| with B = I + V_H (I-M)^{-1} D C^T
  g.b_inner = lhs.partialPivLu().solve(Mat(d.asDiagonal() * c.transpose()));
  auto apply_b = [&](const Vec& x, Vec& y) { y = g.apply_B(x); };
  auto apply_bt = [&](const Vec& x, Vec& y) { y = g.apply_Bt(x); };
  g.b_norm = power_norm(2 * n, apply_b, apply_bt, 1e-6);

  // omega1 = lambda0 + (psi0, eps W g~ psi0)
  Vec psi = Vec::Zero(2 * n);
  psi.tail(n) = model.psi0;
  Vec gpsi = g.apply(psi);
  Vec wg(2 * n);
  wg.head(n) = m.w_tilde.cwiseProduct(gpsi.tail(n));
  wg.tail(n) = m.w_tilde.cwiseProduct(gpsi.head(n));
  g.omega1 = model.lambda0 + m.epsilon * psi.dot(wg);
  return g;
}

}  // namespace reslab
