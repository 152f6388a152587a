#include "reslab/laplace.hpp"

#include <cmath>

namespace reslab {

Complex laplace_numeric(const std::vector<double>& times, const std::vector<Complex>& a,
                        Complex p, const TailModel* tail) {
  require(times.size() == a.size() && times.size() >= 2, "invalid-config",
          "laplace transform needs a sampled series");
  const double T = times.back();
  if (!tail) {
    require(p.real() > 0 && p.real() * T >= 20.0, "truncation",
            "Re p * T = " + std::to_string(p.real() * T) +
                " too small without a tail model");
  }
  Complex acc = 0.0;
  for (size_t k = 1; k < times.size(); ++k) {
    double dt = times[k] - times[k - 1];
    Complex f0 = std::exp(-p * times[k - 1]) * a[k - 1];
    Complex f1 = std::exp(-p * times[k]) * a[k];
    acc += 0.5 * dt * (f0 + f1);
  }
  if (tail) {
    Complex denom = p + Complex(0.0, tail->s_hat) + tail->gamma_hat;
    require(std::abs(denom) > 1e-14, "truncation", "tail model pole hit");
    acc += tail->amp * std::exp(-p * tail->t_start) / denom;
  }
  return acc;
}

TailModel DecayFit::tail_model(double t_start) const {
  TailModel m;
  m.s_hat = s_hat;
  m.gamma_hat = gamma_hat;
  m.t_start = t_start;
  m.amp = amp * std::exp(Complex(-gamma_hat * t_start, -s_hat * t_start));
  return m;
}

DecayFit fit_decay(const std::vector<double>& times, const std::vector<Complex>& a,
                   double gamma_guess, double tail_start_factor) {
  require(times.size() == a.size() && times.size() >= 16, "invalid-config",
          "decay fit needs a sampled series");
  require(gamma_guess > 0, "invalid-config", "gamma guess must be positive");
  DecayFit fit;
  fit.t1 = 0.5 / gamma_guess;
  fit.t2 = 3.0 / gamma_guess;
  require(fit.t2 <= times.back() + 1e-12, "window-truncated",
          "fit window [0.5,3]/gamma exceeds the data range");

  std::vector<double> tw, lm, ph;
  double prev_phase = 0.0;
  bool have_prev = false;
  for (size_t k = 0; k < times.size(); ++k) {
    double t = times[k];
    if (t < fit.t1 || t > fit.t2) continue;
    double mag = std::abs(a[k]);
    require(mag > 1e-12, "phase-unwrap",
            "amplitude below 1e-12 inside the fit window");
    double theta = std::arg(a[k]);
    if (have_prev) {
      while (theta - prev_phase > PI) theta -= 2.0 * PI;
      while (theta - prev_phase < -PI) theta += 2.0 * PI;
      require(std::abs(theta - prev_phase) < PI, "phase-unwrap",
              "phase step exceeds pi between samples");
    }
    prev_phase = theta;
    have_prev = true;
    tw.push_back(t);
    lm.push_back(std::log(mag));
    ph.push_back(theta);
  }
  require(tw.size() >= 8, "window-truncated", "fit window holds too few samples");
  auto [m0, m1] = linear_fit(tw, lm);
  auto [p0, p1] = linear_fit(tw, ph);
  fit.gamma_hat = -m1;
  fit.s_hat = -p1;
  fit.amp = std::exp(Complex(m0, p0));
  double ss = 0.0;
  for (size_t i = 0; i < tw.size(); ++i) {
    double pred = m0 + m1 * tw[i];
    ss += (lm[i] - pred) * (lm[i] - pred);
  }
  fit.residual = std::sqrt(ss / tw.size());

  // post-exponential power-law tail
  if (fit.gamma_hat > 0) {
    double tstart = tail_start_factor / fit.gamma_hat;
    std::vector<double> lx, ly;
    for (size_t k = 0; k < times.size(); ++k) {
      if (times[k] <= tstart) continue;
      double mag = std::abs(a[k]);
      if (mag < 1e-13) continue;
      lx.push_back(std::log(times[k]));
      ly.push_back(std::log(mag));
    }
    if (lx.size() >= 10 && lx.back() - lx.front() > 0.5) {
      auto [c0, c1] = linear_fit(lx, ly);
      fit.tail_ok = true;
      fit.tail_exponent = -c1;
      fit.tail_prefactor = std::exp(c0);
      fit.tail_t1 = std::exp(lx.front());
      fit.tail_t2 = std::exp(lx.back());
      double ts = 0.0;
      for (size_t i = 0; i < lx.size(); ++i) {
        double pred = c0 + c1 * lx[i];
        ts += (ly[i] - pred) * (ly[i] - pred);
      }
      fit.tail_residual = std::sqrt(ts / lx.size());
    }
  }
  return fit;
}

Complex bromwich_invert(const std::function<Complex(Complex)>& ghat, double t, double nu,
                        double tol, double omega_hint) {
  require(nu > 0 && t >= 0, "invalid-config", "bromwich needs nu > 0, t >= 0");
  // truncation: oscillatory tail beyond Omega contributes ~ |ghat|/(pi t)
  double omega_max = std::max(omega_hint, 8.0);
  double tref = std::max(t, 0.25);
  for (int grow = 0; grow < 40; ++grow) {
    double mag = std::max(std::abs(ghat(Complex(nu, omega_max))),
                          std::abs(ghat(Complex(nu, -omega_max))));
    if (mag <= tol * PI * tref) break;
    omega_max *= 2.0;
    require(grow < 39, "contour", "transform decays too slowly on the contour");
  }
  auto quad = [&](int npts) {
    double dw = 2.0 * omega_max / npts;
    Complex acc = 0.5 * (std::exp(Complex(0, -omega_max * t)) * ghat(Complex(nu, -omega_max)) +
                         std::exp(Complex(0, omega_max * t)) * ghat(Complex(nu, omega_max)));
    for (int k = 1; k < npts; ++k) {
      double w = -omega_max + k * dw;
      acc += std::exp(Complex(0, w * t)) * ghat(Complex(nu, w));
    }
    return std::exp(nu * t) / (2.0 * PI) * acc * dw;
  };
  int npts = 512;
  Complex prev = quad(npts);
  for (int it = 0; it < 14; ++it) {
    npts *= 2;
    Complex cur = quad(npts);
    if (std::abs(cur - prev) <= tol) return cur;
    prev = cur;
  }
  throw ReslabError("contour", "bromwich refinement did not converge");
}

}  // namespace reslab
