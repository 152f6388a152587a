#include "reslab/resonance.hpp"

#include <cmath>

namespace reslab {

namespace {

double bisect(const std::function<double(double)>& f, double lo, double hi, double tol) {
  double flo = f(lo);
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((flo < 0) == (fm < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

RootResult solve_s0(const std::function<double(double)>& f2_boundary, double omega,
                    double epsilon, double tol_rel, double theta, int max_iter) {
  RootResult r;
  const double e2 = epsilon * epsilon;
  const double tol = tol_rel * std::max(std::abs(omega), 1.0);
  auto g_of = [&](double delta) { return -f2_boundary(delta - omega); };
  auto resid = [&](double s) { return s + omega + e2 * f2_boundary(s); };

  if (epsilon == 0.0) {
    r.s0 = -omega;
    r.delta = 0.0;
    r.iterations = 1;
    r.roots = {r.s0};
    return r;
  }

  double delta = 0.0;
  bool converged = false;
  for (int it = 1; it <= max_iter; ++it) {
    double next = (1.0 - theta) * delta + theta * e2 * g_of(delta);
    r.iterations = it;
    if (std::abs(next - delta) <= tol) {
      delta = next;
      converged = true;
      break;
    }
    delta = next;
  }
  if (converged && std::abs(resid(-omega + delta)) <= 10.0 * tol) {
    r.delta = delta;
    r.s0 = -omega + delta;
    r.roots = {r.s0};
    return r;
  }

  // bisection fallback on s in [-omega - K eps^2, -omega + K eps^2]
  r.used_bisection = true;
  double gmax = 0.0;
  for (int i = 0; i <= 8; ++i) {
    double d = -1.0 + 0.25 * i;
    gmax = std::max(gmax, std::abs(g_of(d * e2 * 4.0)));
  }
  double k = 4.0 * std::max(gmax, 1.0);
  double lo = -omega - k * e2, hi = -omega + k * e2;
  const int scan = 64;
  std::vector<double> roots;
  double prev = resid(lo);
  for (int i = 1; i <= scan; ++i) {
    double s = lo + (hi - lo) * i / scan;
    double cur = resid(s);
    if (prev == 0.0 || (prev < 0) != (cur < 0)) {
      roots.push_back(bisect(resid, lo + (hi - lo) * (i - 1) / scan, s, tol * 1e-2));
    }
    prev = cur;
  }
  require(!roots.empty(), "no-root",
          "no sign change of the root equation inside the bracket");
  r.roots = roots;
  r.s0 = roots[0];
  for (double s : roots)
    if (std::abs(s + omega) < std::abs(r.s0 + omega)) r.s0 = s;
  r.delta = r.s0 + omega;
  r.spread = roots.back() - roots.front();
  return r;
}

OmegaStar gamma_omega_star(const std::function<Complex(double, double*)>& f_boundary,
                           double s0, double epsilon, double eta_hat) {
  require(epsilon != 0.0, "epsilon-zero",
          "no resonance at epsilon = 0: the width degenerates");
  OmegaStar out;
  double err = 0.0;
  Complex f = f_boundary(s0, &err);
  out.gamma = epsilon * epsilon * f.real();
  out.gamma_err = epsilon * epsilon * err;
  require(out.gamma > std::max(3.0 * out.gamma_err, 1e-14), "fgr-violation",
          "resonance condition failed: eps^2 Re F(i s0) = " + std::to_string(out.gamma));
  out.omega_star = Complex(s0, -out.gamma);
  out.omega_star_osc = Complex(-s0, -out.gamma);
  if (eta_hat < 1.0 && eta_hat > 0.0) {
    out.regime_checked = true;
    out.regime_ratio = out.gamma / std::pow(epsilon, 2.0 / (1.0 - eta_hat));
  }
  return out;
}

PoleResult find_pole(const std::function<Complex(Complex)>& g1, Complex center,
                     double half_side, int min_samples, double g1_scale) {
  require(half_side > 0, "invalid-config", "pole search square has no extent");
  PoleResult out;

  int per_side = std::max(min_samples / 4, 16);
  for (int attempt = 0; attempt < 4; ++attempt, per_side *= 2) {
    std::vector<Complex> pts;
    pts.reserve(4 * per_side);
    auto corner = [&](int k) -> Complex {
      static const Complex dirs[4] = {{1, -1}, {1, 1}, {-1, 1}, {-1, -1}};
      return center + half_side * dirs[k % 4];
    };
    for (int side = 0; side < 4; ++side) {
      Complex a = corner(side), b = corner(side + 1);
      for (int i = 0; i < per_side; ++i)
        pts.push_back(a + (b - a) * (double(i) / per_side));
    }
    double total = 0.0;
    bool fine = true;
    Complex prev = g1(pts[0]);
    require(std::abs(prev) > 0, "quadrature", "g1 vanishes on the contour");
    Complex first = prev;
    for (size_t i = 1; i <= pts.size(); ++i) {
      Complex cur = (i == pts.size()) ? first : g1(pts[i]);
      double darg = std::arg(cur / prev);
      if (std::abs(darg) > 0.5 * PI) {
        fine = false;
        break;
      }
      total += darg;
      prev = cur;
    }
    if (!fine) continue;
    double w = total / (2.0 * PI);
    out.samples = static_cast<int>(pts.size());
    out.winding = static_cast<int>(std::lround(w));
    out.winding_residual = std::abs(w - out.winding);
    if (out.winding_residual > 0.1) {
      if (attempt == 3)
        throw ReslabError("quadrature", "winding integral did not settle on an integer");
      continue;
    }
    break;
  }
  require(out.samples > 0, "quadrature", "contour sampling failed to resolve the phase");
  require(out.winding != 0, "no-pole", "no zero of g1 inside the search square");
  require(out.winding == 1, "multiplicity",
          "winding " + std::to_string(out.winding) + ": zero is not simple");

  // Newton from the center, damped to stay inside the square
  Complex p = center;
  double step_scale = 1e-3 * half_side;
  double tol = 1e-10 * std::max(1.0, g1_scale);
  for (int it = 0; it < 80; ++it) {
    Complex f = g1(p);
    out.newton_iters = it + 1;
    out.g1_at_pz = f;
    if (std::abs(f) <= tol) break;
    Complex d = (g1(p + step_scale) - g1(p - step_scale)) / (2.0 * step_scale);
    require(std::abs(d) > 0, "quadrature", "vanishing derivative in Newton refinement");
    Complex dp = -f / d;
    double lim = 0.9 * half_side;
    if (std::abs(dp) > lim) dp *= lim / std::abs(dp);
    Complex cand = p + dp;
    // reflect back into the square
    double rx = std::clamp(cand.real(), center.real() - half_side, center.real() + half_side);
    double ry = std::clamp(cand.imag(), center.imag() - half_side, center.imag() + half_side);
    p = Complex(rx, ry);
  }
  out.p_z = p;
  require(std::abs(out.g1_at_pz) <= 1e-8 * std::max(1.0, g1_scale), "solver",
          "Newton refinement did not converge to the pole");
  return out;
}

}  // namespace reslab
