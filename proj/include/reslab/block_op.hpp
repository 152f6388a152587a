#pragma once

#include "reslab/grid.hpp"
#include "reslab/tridiag.hpp"

namespace reslab {

// Two-channel Hermitian operator
//   [ A11  D ]
//   [ D    A22 ]
// with tridiagonal channel blocks and a diagonal (multiplication) coupling
// block. States are stacked vectors: channel 1 first, channel 2 second.
struct BlockOperator {
  SymTridiag a11, a22;
  Vec coupling;  // diagonal of the off-diagonal block (zero vector if decoupled)
  int channel_points = 0;

  int total_points() const { return 2 * channel_points; }

  CVec apply(const CVec& x) const;
  Vec apply(const Vec& x) const;
  double norm_bound() const;

  // Dense materialization for small-N oracles and Hermiticity checks.
  Mat dense() const;
  double hermiticity_residual() const;
};

inline auto ch1(CVec& v, int n) { return v.head(n); }
inline auto ch2(CVec& v, int n) { return v.tail(n); }
inline auto ch1(const CVec& v, int n) { return v.head(n); }
inline auto ch2(const CVec& v, int n) { return v.tail(n); }

// -d^2/dx^2 with Dirichlet ends: entries 2/h^2 and -1/h^2.
SymTridiag build_free_laplacian(const Grid& g);

// -d^2/dx^2 + x^2. Requires L large enough that the Gaussian ground state
// is negligible at the walls (e^{-L^2/2} < truncation_tol).
SymTridiag build_oscillator(const Grid& g, double truncation_tol = 1e-10);

struct TwoChannelModel {
  Grid grid;
  BlockOperator h0;  // block-diagonal
  BlockOperator w;   // purely off-diagonal, unit amplitude in epsilon
  BlockOperator h;   // h0 + epsilon * w
  double epsilon = 0.0;
  Vec w_tilde;  // coupling profile on the grid
};

// W~ must be decayed at the walls: |W~(+-L)| < locality_tol * max|W~|.
TwoChannelModel assemble_two_channel(const Grid& g, const SymTridiag& h_free,
                                     const SymTridiag& h_osc, const Vec& w_tilde,
                                     double epsilon, double locality_tol = 1e-8);

// Pointwise (1+x^2)^{sign*sigma/2} on both channels.
CVec weight_apply(double sigma, int sign, const Grid& g, const CVec& state);
Vec weight_vector(double sigma, int sign, const Grid& g);  // one channel

// Banded LU of alpha*I + beta*A on the interleaved two-channel ordering
// (bandwidth 2). Used by the Cayley propagator and block resolvent solves.
class BlockBandedLU {
public:
  BlockBandedLU(const BlockOperator& a, Complex alpha, Complex beta);
  void solve_inplace(CVec& stacked) const;  // stacked channel layout

private:
  int n_;  // channel points
  CMat ab_;
  std::vector<int> ipiv_;
};

}  // namespace reslab
