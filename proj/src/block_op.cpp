#include "reslab/block_op.hpp"

#include <lapacke.h>

#include <cmath>

namespace reslab {

CVec BlockOperator::apply(const CVec& x) const {
  const int n = channel_points;
  require(x.size() == 2 * n, "invalid-config", "state size does not match operator");
  CVec y(2 * n);
  a11.matvec(x.data(), y.data());
  a22.matvec(x.data() + n, y.data() + n);
  if (coupling.size() == n) {
    for (int i = 0; i < n; ++i) {
      y[i] += coupling[i] * x[n + i];
      y[n + i] += coupling[i] * x[i];
    }
  }
  return y;
}

Vec BlockOperator::apply(const Vec& x) const {
  CVec xc = x.cast<Complex>();
  return apply(xc).real();
}

double BlockOperator::norm_bound() const {
  double c = coupling.size() ? coupling.cwiseAbs().maxCoeff() : 0.0;
  return std::max(a11.norm_bound(), a22.norm_bound()) + c;
}

Mat BlockOperator::dense() const {
  const int n = channel_points;
  Mat m = Mat::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = a11.diag[i];
    m(n + i, n + i) = a22.diag[i];
    if (i + 1 < n) {
      m(i, i + 1) = m(i + 1, i) = a11.off[i];
      m(n + i, n + i + 1) = m(n + i + 1, n + i) = a22.off[i];
    }
    if (coupling.size() == n) m(i, n + i) = m(n + i, i) = coupling[i];
  }
  return m;
}

double BlockOperator::hermiticity_residual() const {
  Mat m = dense();
  return (m - m.transpose()).cwiseAbs().maxCoeff();
}

SymTridiag build_free_laplacian(const Grid& g) {
  require(g.points >= 8, "invalid-config", "grid too small");
  const double h2 = g.spacing * g.spacing;
  SymTridiag t;
  t.diag = Vec::Constant(g.points, 2.0 / h2);
  t.off = Vec::Constant(g.points - 1, -1.0 / h2);
  return t;
}

SymTridiag build_oscillator(const Grid& g, double truncation_tol) {
  double wall = std::exp(-0.5 * g.half_width * g.half_width);
  require(wall < truncation_tol, "truncation-warning",
          "box too small for the oscillator ground state: e^{-L^2/2} = " +
              std::to_string(wall));
  SymTridiag t = build_free_laplacian(g);
  for (int i = 0; i < g.points; ++i) t.diag[i] += g.nodes[i] * g.nodes[i];
  return t;
}

TwoChannelModel assemble_two_channel(const Grid& g, const SymTridiag& h_free,
                                     const SymTridiag& h_osc, const Vec& w_tilde,
                                     double epsilon, double locality_tol) {
  require(w_tilde.size() == g.points, "invalid-config", "coupling profile size mismatch");
  double peak = w_tilde.cwiseAbs().maxCoeff();
  if (peak > 0.0) {
    double edge = std::max(std::abs(w_tilde[0]), std::abs(w_tilde[g.points - 1]));
    require(edge < locality_tol * peak, "localization",
            "coupling profile has not decayed at the walls");
  }
  TwoChannelModel m;
  m.grid = g;
  m.epsilon = epsilon;
  m.w_tilde = w_tilde;
  m.h0.a11 = h_free;
  m.h0.a22 = h_osc;
  m.h0.coupling = Vec();
  m.h0.channel_points = g.points;

  SymTridiag zero;
  zero.diag = Vec::Zero(g.points);
  zero.off = Vec::Zero(g.points - 1);
  m.w.a11 = zero;
  m.w.a22 = zero;
  m.w.coupling = w_tilde;
  m.w.channel_points = g.points;

  m.h.a11 = h_free;
  m.h.a22 = h_osc;
  m.h.coupling = epsilon * w_tilde;
  m.h.channel_points = g.points;
  return m;
}

Vec weight_vector(double sigma, int sign, const Grid& g) {
  require(sigma >= 0.0, "invalid-config", "weight exponent must be nonnegative");
  require(sign == 1 || sign == -1, "invalid-config", "weight sign must be +-1");
  Vec w(g.points);
  for (int i = 0; i < g.points; ++i)
    w[i] = std::pow(1.0 + g.nodes[i] * g.nodes[i], 0.5 * sign * sigma);
  return w;
}

CVec weight_apply(double sigma, int sign, const Grid& g, const CVec& state) {
  require(state.size() == 2 * g.points, "invalid-config", "state size mismatch");
  Vec w = weight_vector(sigma, sign, g);
  CVec out(state.size());
  for (int i = 0; i < g.points; ++i) {
    out[i] = w[i] * state[i];
    out[g.points + i] = w[i] * state[g.points + i];
  }
  return out;
}

BlockBandedLU::BlockBandedLU(const BlockOperator& a, Complex alpha, Complex beta) {
  n_ = a.channel_points;
  const int n2 = 2 * n_;
  const int kl = 2, ku = 2;
  const int ldab = 2 * kl + ku + 1;
  ab_ = CMat::Zero(ldab, n2);
  ipiv_.resize(n2);
  // interleaved index: channel c, node i -> 2i + c
  auto set = [&](int i, int j, Complex v) { ab_(kl + ku + i - j, j) = v; };
  for (int i = 0; i < n_; ++i) {
    int r1 = 2 * i, r2 = 2 * i + 1;
    set(r1, r1, alpha + beta * a.a11.diag[i]);
    set(r2, r2, alpha + beta * a.a22.diag[i]);
    if (i + 1 < n_) {
      Complex v1 = beta * a.a11.off[i], v2 = beta * a.a22.off[i];
      set(r1, r1 + 2, v1);
      set(r1 + 2, r1, v1);
      set(r2, r2 + 2, v2);
      set(r2 + 2, r2, v2);
    }
    if (a.coupling.size() == n_) {
      Complex c = beta * a.coupling[i];
      set(r1, r2, c);
      set(r2, r1, c);
    }
  }
  lapack_int info = LAPACKE_zgbtrf(
      LAPACK_COL_MAJOR, n2, n2, kl, ku,
      reinterpret_cast<lapack_complex_double*>(ab_.data()), ldab, ipiv_.data());
  require(info == 0, "ill-conditioned", "banded factorization failed, info=" + std::to_string(info));
}

void BlockBandedLU::solve_inplace(CVec& stacked) const {
  const int n2 = 2 * n_;
  require(stacked.size() == n2, "invalid-config", "state size mismatch");
  // stacked -> interleaved
  CVec tmp(n2);
  for (int i = 0; i < n_; ++i) {
    tmp[2 * i] = stacked[i];
    tmp[2 * i + 1] = stacked[n_ + i];
  }
  const int kl = 2, ku = 2, ldab = 2 * kl + ku + 1;
  lapack_int info = LAPACKE_zgbtrs(
      LAPACK_COL_MAJOR, 'N', n2, kl, ku, 1,
      reinterpret_cast<const lapack_complex_double*>(ab_.data()), ldab,
      ipiv_.data(), reinterpret_cast<lapack_complex_double*>(tmp.data()), n2);
  require(info == 0, "solver", "zgbtrs failed");
  for (int i = 0; i < n_; ++i) {
    stacked[i] = tmp[2 * i];
    stacked[n_ + i] = tmp[2 * i + 1];
  }
}

}  // namespace reslab
