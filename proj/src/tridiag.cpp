#include "reslab/tridiag.hpp"

#include <lapacke.h>

#include <cmath>
#include <functional>
#include <random>

namespace reslab {

void SymTridiag::matvec(const Complex* x, Complex* y) const {
  const int m = n();
  for (int i = 0; i < m; ++i) {
    Complex v = diag[i] * x[i];
    if (i > 0) v += off[i - 1] * x[i - 1];
    if (i + 1 < m) v += off[i] * x[i + 1];
    y[i] = v;
  }
}

Vec SymTridiag::apply(const Vec& x) const {
  const int m = n();
  Vec y(m);
  for (int i = 0; i < m; ++i) {
    double v = diag[i] * x[i];
    if (i > 0) v += off[i - 1] * x[i - 1];
    if (i + 1 < m) v += off[i] * x[i + 1];
    y[i] = v;
  }
  return y;
}

CVec SymTridiag::apply(const CVec& x) const {
  CVec y(n());
  matvec(x.data(), y.data());
  return y;
}

double SymTridiag::norm_bound() const {
  const int m = n();
  double bound = 0.0;
  for (int i = 0; i < m; ++i) {
    double row = std::abs(diag[i]);
    if (i > 0) row += std::abs(off[i - 1]);
    if (i + 1 < m) row += std::abs(off[i]);
    bound = std::max(bound, row);
  }
  return bound;
}

EigResult eig_all(const SymTridiag& t) {
  const int n = t.n();
  EigResult r;
  r.values = t.diag;
  Vec e = t.off;
  r.vectors.resize(n, n);
  lapack_int info = LAPACKE_dstevd(LAPACK_COL_MAJOR, 'V', n, r.values.data(),
                                   e.data(), r.vectors.data(), n);
  require(info == 0, "solver", "dstevd failed, info=" + std::to_string(info));
  return r;
}

EigResult eig_range(const SymTridiag& t, double vl, double vu) {
  const int n = t.n();
  Vec d = t.diag, e(std::max(t.off.size(), Eigen::Index(1)));
  e.head(t.off.size()) = t.off;
  lapack_int mfound = 0;
  Vec w(n);
  Mat z(n, n > 0 ? n : 1);
  std::vector<lapack_int> isuppz(2 * std::max(1, n));
  lapack_int info =
      LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'V', n, d.data(), e.data(), vl, vu,
                     0, 0, 0.0, &mfound, w.data(), z.data(), n, isuppz.data());
  require(info == 0, "solver", "dstevr failed, info=" + std::to_string(info));
  EigResult r;
  r.values = w.head(mfound);
  r.vectors = z.leftCols(mfound);
  return r;
}

EigResult eig_lowest(const SymTridiag& t, int k) {
  const int n = t.n();
  require(k >= 1 && k <= n, "invalid-config", "eig_lowest: bad k");
  Vec d = t.diag, e(std::max(t.off.size(), Eigen::Index(1)));
  e.head(t.off.size()) = t.off;
  lapack_int mfound = 0;
  Vec w(n);
  Mat z(n, k);
  std::vector<lapack_int> isuppz(2 * std::max(1, k));
  lapack_int info =
      LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'I', n, d.data(), e.data(), 0, 0, 1,
                     k, 0.0, &mfound, w.data(), z.data(), n, isuppz.data());
  require(info == 0 && mfound == k, "solver", "dstevr (index range) failed");
  EigResult r;
  r.values = w.head(k);
  r.vectors = z;
  return r;
}

ShiftedTridiagLU::ShiftedTridiagLU(const SymTridiag& t, Complex z)
    : ShiftedTridiagLU(t, -z, Complex(1.0, 0.0)) {}

ShiftedTridiagLU::ShiftedTridiagLU(const SymTridiag& t, Complex alpha, Complex beta) {
  n_ = t.n();
  dl_.resize(std::max(n_ - 1, 0));
  du_.resize(std::max(n_ - 1, 0));
  du2_.resize(std::max(n_ - 2, 0));
  d_.resize(n_);
  ipiv_.resize(n_);
  for (int i = 0; i < n_; ++i) d_[i] = alpha + beta * t.diag[i];
  for (int i = 0; i + 1 < n_; ++i) dl_[i] = du_[i] = beta * t.off[i];
  lapack_int info = LAPACKE_zgttrf(
      n_, reinterpret_cast<lapack_complex_double*>(dl_.data()),
      reinterpret_cast<lapack_complex_double*>(d_.data()),
      reinterpret_cast<lapack_complex_double*>(du_.data()),
      reinterpret_cast<lapack_complex_double*>(du2_.data()), ipiv_.data());
  require(info == 0, "ill-conditioned",
          "tridiagonal factorization failed, info=" + std::to_string(info));
}

void ShiftedTridiagLU::solve_inplace(CVec& rhs) const {
  lapack_int info = LAPACKE_zgttrs(
      LAPACK_COL_MAJOR, 'N', n_, 1,
      reinterpret_cast<const lapack_complex_double*>(dl_.data()),
      reinterpret_cast<const lapack_complex_double*>(d_.data()),
      reinterpret_cast<const lapack_complex_double*>(du_.data()),
      reinterpret_cast<const lapack_complex_double*>(du2_.data()), ipiv_.data(),
      reinterpret_cast<lapack_complex_double*>(rhs.data()), n_);
  require(info == 0, "solver", "zgttrs failed");
}

CVec ShiftedTridiagLU::solve(const CVec& rhs) const {
  CVec x = rhs;
  solve_inplace(x);
  return x;
}

void ShiftedTridiagLU::solve_many(CMat& rhs) const {
  lapack_int info = LAPACKE_zgttrs(
      LAPACK_COL_MAJOR, 'N', n_, static_cast<lapack_int>(rhs.cols()),
      reinterpret_cast<const lapack_complex_double*>(dl_.data()),
      reinterpret_cast<const lapack_complex_double*>(d_.data()),
      reinterpret_cast<const lapack_complex_double*>(du_.data()),
      reinterpret_cast<const lapack_complex_double*>(du2_.data()), ipiv_.data(),
      reinterpret_cast<lapack_complex_double*>(rhs.data()), n_);
  require(info == 0, "solver", "zgttrs failed");
}

CVec dense_solve(const CMat& a, const CVec& b) {
  return a.partialPivLu().solve(b);
}

Complex neville_to_zero(const std::vector<double>& x, const std::vector<Complex>& f,
                        double* err_estimate) {
  require(x.size() == f.size() && !x.empty(), "invalid-config", "neville: bad input");
  std::vector<Complex> tab = f;
  const int n = static_cast<int>(x.size());
  Complex current = tab[0];
  double err = 0.0;
  for (int level = 1; level < n; ++level) {
    for (int i = 0; i + level < n; ++i) {
      tab[i] = (x[i + level] * tab[i] - x[i] * tab[i + 1]) / (x[i + level] - x[i]);
    }
    err = std::abs(tab[0] - current);
    current = tab[0];
  }
  if (err_estimate) *err_estimate = err;
  return current;
}

std::pair<double, double> linear_fit(const std::vector<double>& x,
                                     const std::vector<double>& y) {
  require(x.size() == y.size() && x.size() >= 2, "degenerate-input",
          "linear fit needs at least two points");
  const int n = static_cast<int>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  double det = n * sxx - sx * sx;
  require(std::abs(det) > 0, "degenerate-input", "linear fit: degenerate abscissae");
  double c1 = (n * sxy - sx * sy) / det;
  double c0 = (sy - c1 * sx) / n;
  return {c0, c1};
}

double power_norm(int n, const std::function<void(const Vec&, Vec&)>& apply,
                  const std::function<void(const Vec&, Vec&)>& apply_t,
                  double tol, int max_iter, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = gauss(rng);
  v.normalize();
  double sigma = 0.0, prev = -1.0;
  Vec tmp, atav;
  for (int it = 0; it < max_iter; ++it) {
    apply(v, tmp);
    apply_t(tmp, atav);
    double nrm = atav.norm();
    if (nrm == 0.0) return 0.0;
    sigma = std::sqrt(nrm);
    v = atav / nrm;
    if (prev >= 0 && std::abs(sigma - prev) <= tol * std::max(1.0, sigma)) break;
    prev = sigma;
  }
  return sigma;
}

}  // namespace reslab
