#pragma once

#include <functional>
#include <utility>

#include "reslab/types.hpp"

namespace reslab {

// Real symmetric tridiagonal operator (one channel of the model).
struct SymTridiag {
  Vec diag;  // n entries
  Vec off;   // n-1 entries

  int n() const { return static_cast<int>(diag.size()); }

  void matvec(const Complex* x, Complex* y) const;
  Vec apply(const Vec& x) const;
  CVec apply(const CVec& x) const;

  // Gershgorin bound on the spectral radius
  double norm_bound() const;
};

struct EigResult {
  Vec values;   // ascending
  Mat vectors;  // columns, orthonormal
};

// Full decomposition (desk scale; O(n^2) memory).
EigResult eig_all(const SymTridiag& t);

// Eigenpairs with values in (vl, vu].
EigResult eig_range(const SymTridiag& t, double vl, double vu);

// k lowest eigenpairs.
EigResult eig_lowest(const SymTridiag& t, int k);

// LU factorization of (T - z) for repeated complex shifted solves.
class ShiftedTridiagLU {
public:
  ShiftedTridiagLU(const SymTridiag& t, Complex z);
  // overload for a Cayley-style matrix alpha*I + beta*T
  ShiftedTridiagLU(const SymTridiag& t, Complex alpha, Complex beta);
  CVec solve(const CVec& rhs) const;
  void solve_inplace(CVec& rhs) const;
  void solve_many(CMat& rhs) const;

private:
  int n_;
  std::vector<Complex> dl_, d_, du_, du2_;
  std::vector<int> ipiv_;
};

// Dense complex LU wrapper used by small reduced systems.
CVec dense_solve(const CMat& a, const CVec& b);

// Polynomial extrapolation of samples (x_i, f_i) to x = 0 (Neville tableau).
// err_estimate gets the last diagonal correction.
Complex neville_to_zero(const std::vector<double>& x, const std::vector<Complex>& f,
                        double* err_estimate = nullptr);

// Weighted linear least squares for y ~ c0 + c1 x; returns {c0, c1}.
std::pair<double, double> linear_fit(const std::vector<double>& x,
                                     const std::vector<double>& y);

// Operator 2-norm by power iteration on A^T A given apply callbacks.
double power_norm(int n,
                  const std::function<void(const Vec&, Vec&)>& apply,
                  const std::function<void(const Vec&, Vec&)>& apply_t,
                  double tol = 1e-6, int max_iter = 500, unsigned seed = 7);

}  // namespace reslab
