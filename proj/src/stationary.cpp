#include "radialwave/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "radialwave/ode.hpp"

namespace radialwave {

namespace {

using DP = DormandPrince<2>;

double omega_local(double s, double x, int d, int p) {
  return std::sqrt(p * std::pow(std::abs(x), p - 1) * std::exp(-(p - 3) * s) + (d - 3)) + 0.5 * (d - 4);
}

DP::Options shoot_options(int d, int p, const ShootOptions& opt) {
  DP::Options o;
  o.rtol = opt.tol;
  o.atol = 1e-300;
  o.h_init = 1e-3;
  o.scale = [d, p, rtol = opt.tol](double s, const Eigen::Vector2d& v) {
    const double w = omega_local(s, v[0], d, p);
    return Eigen::Vector2d(rtol * (std::abs(v[0]) + std::abs(v[1]) / w), rtol * (std::abs(v[1]) + w * std::abs(v[0])));
  };
  o.max_step = [d, p, opt](double s, const Eigen::Vector2d& v) {
    return std::min(opt.max_step, opt.oscillation_resolution / omega_local(s, v[0], d, p));
  };
  return o;
}

// least-squares slope of ys against xs
double slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Regress log|r^{d-2} Z - ell| on log r over the contiguous stretch, scanned
// inwards from the largest radius, where the deviation is clearly above the
// far-field noise but still a small fraction of ell.
TailFit regress_tail(const StationaryProfile& prof, double ell) {
  TailFit fit;
  fit.ell = ell;
  const std::size_t n = prof.size();
  if (ell == 0.0) return fit;
  const double s_far = prof.s.back() - 1.0;
  double noise = std::abs(ell) * 1e-13;
  for (std::size_t i = 0; i < n; ++i)
    if (prof.s[i] >= s_far) noise = std::max(noise, std::abs(prof.tail_value(i) - ell));
  std::vector<double> xs, ys;
  for (std::size_t k = n; k-- > 0;) {
    const double dev = std::abs(prof.tail_value(k) - ell);
    if (dev >= 1e-2 * std::abs(ell)) break;
    if (dev > 1e3 * noise) {
      xs.push_back(prof.s[k]);
      ys.push_back(std::log(dev));
    }
  }
  if (xs.size() < 5) return fit;
  fit.rate = slope(xs, ys);
  fit.rate_defined = std::isfinite(fit.rate);
  fit.window_lo = std::exp(xs.back());
  fit.window_hi = std::exp(xs.front());
  fit.window_points = static_cast<int>(xs.size());
  return fit;
}

}  // namespace

Eigen::Vector2d ode_rhs(const OdeState& st, int d, int p) {
  const double nl = std::pow(std::abs(st.x), p - 1) * st.x * (p == 3 ? 1.0 : std::exp(-(p - 3) * st.s));
  return {st.y, -(d - 4) * st.y + (d - 3) * st.x - nl};
}

Eigen::Matrix2d ode_linearization(int d) {
  Eigen::Matrix2d j;
  j << 0.0, 1.0, double(d - 3), -double(d - 4);
  return j;
}

double StationaryProfile::r(std::size_t i) const { return std::exp(s[i]); }
double StationaryProfile::Z(std::size_t i) const { return phi[i] * std::exp(-s[i]); }
double StationaryProfile::dZ(std::size_t i) const { return std::exp(-2.0 * s[i]) * (dphi[i] - phi[i]); }
double StationaryProfile::tail_value(std::size_t i) const { return std::exp((d - 3) * s[i]) * phi[i]; }

StationaryProfile shoot_stable(double x0, int d, int p, const ShootOptions& opt) {
  make_params(d, p);
  require(d >= 5, ErrorKind::InvalidParams, "stationary profiles need d >= 5");
  require(opt.s_min < opt.s0, ErrorKind::InvalidParams, "need s_min < s0");
  require(opt.tol > 0.0 && opt.forward_length > 0.0, ErrorKind::InvalidParams, "bad shooting options");

  StationaryProfile prof;
  prof.d = d;
  prof.p = p;
  prof.x0 = x0;
  prof.lam = 1.0;
  prof.ell = x0;
  if (x0 == 0.0) {
    const int n = static_cast<int>(std::ceil((opt.s0 - opt.s_min) / opt.max_step));
    for (int i = 0; i <= n; ++i) {
      prof.s.push_back(opt.s_min + (opt.s0 - opt.s_min) * i / n);
      prof.phi.push_back(0.0);
      prof.dphi.push_back(0.0);
    }
    return prof;
  }

  const DP::Rhs f = [d, p](double s, const Eigen::Vector2d& v) { return ode_rhs({s, v[0], v[1]}, d, p); };
  const DP::Options o = shoot_options(d, p, opt);

  const double eps = x0 * std::exp(-(d - 3) * opt.s0);
  const Eigen::Vector2d stable(1.0, -(d - 3.0));
  const Eigen::Vector2d unstable(1.0, 1.0);
  const double s_end = opt.s0 + opt.forward_length;
  auto unstable_part = [d](const Eigen::Vector2d& v) { return ((d - 3) * v[0] + v[1]) / (d - 2.0); };
  auto forward = [&](double delta) {
    const auto res = DP::integrate(f, opt.s0, eps * stable + delta * unstable, s_end, o);
    require(res.status == DP::Status::Done, ErrorKind::ShootFailure, "forward check integration failed");
    return unstable_part(res.y);
  };

  // secant on the unstable-direction offset so the forward run stays on the manifold
  const double target = 1e-12 * std::abs(eps) * std::exp(-(d - 3) * opt.forward_length);
  double d0 = 0.0, c0 = forward(d0);
  double d1 = 1e-6 * eps, c1 = forward(d1);
  double delta = std::abs(c0) <= std::abs(c1) ? d0 : d1;
  for (int it = 0; it < 8 && std::min(std::abs(c0), std::abs(c1)) > target && c1 != c0; ++it) {
    const double d2 = d1 - c1 * (d1 - d0) / (c1 - c0);
    d0 = d1;
    c0 = c1;
    d1 = d2;
    c1 = forward(d1);
    delta = d1;
  }
  prof.seed_correction = delta;

  std::vector<double> fs, fl;
  DP::integrate(f, opt.s0, eps * stable + delta * unstable, s_end, o, [&](double s, const Eigen::Vector2d& v) {
    if (s >= opt.s0 + 0.5 && v[0] != 0.0) {
      fs.push_back(s);
      fl.push_back(std::log(std::abs(v[0])));
    }
    return true;
  });
  prof.forward_rate = fs.size() >= 2 ? slope(fs, fl) : 0.0;

  std::vector<double> ss, xs, ys;
  bool escaped = false;
  const auto res = DP::integrate(f, opt.s0, eps * stable + delta * unstable, opt.s_min, o,
                                 [&](double s, const Eigen::Vector2d& v) {
                                   if (!v.allFinite() || std::abs(v[0]) > 1e100) {
                                     escaped = true;
                                     return false;
                                   }
                                   ss.push_back(s);
                                   xs.push_back(v[0]);
                                   ys.push_back(v[1]);
                                   return true;
                                 });
  if (escaped || res.status != DP::Status::Done)
    raise(ErrorKind::ShootFailure, "backward integration escaped before s_min (seed too large?)");
  std::reverse(ss.begin(), ss.end());
  std::reverse(xs.begin(), xs.end());
  std::reverse(ys.begin(), ys.end());
  prof.s = std::move(ss);
  prof.phi = std::move(xs);
  prof.dphi = std::move(ys);

  const TailFit corr = regress_tail(prof, x0);
  prof.correction_slope = corr.rate_defined ? corr.rate - (d - 3) : std::numeric_limits<double>::quiet_NaN();
  return prof;
}

double elliptic_residual(const StationaryProfile& prof, double r_lo, double r_hi) {
  const std::size_t n = prof.size();
  const int d = prof.d, p = prof.p;
  double worst = 0.0;
  for (std::size_t i = 2; i + 2 < n; ++i) {
    const double ri = prof.r(i);
    if (ri < r_lo || ri > r_hi) continue;
    // derivative of dphi at s_i from the 5-point Lagrange interpolant
    const double si = prof.s[i];
    double dd = 0.0;
    for (std::size_t j = i - 2; j <= i + 2; ++j) {
      double wj = 0.0;
      for (std::size_t m = i - 2; m <= i + 2; ++m) {
        if (m == j) continue;
        double term = 1.0 / (prof.s[j] - prof.s[m]);
        for (std::size_t q = i - 2; q <= i + 2; ++q)
          if (q != j && q != m) term *= (si - prof.s[q]) / (prof.s[j] - prof.s[q]);
        wj += term;
      }
      dd += wj * prof.dphi[j];
    }
    const double x = prof.phi[i], y = prof.dphi[i];
    const double e3 = std::exp(-3.0 * si);
    const double zpp = e3 * (dd - 3.0 * y + 2.0 * x);
    const double zr = (d - 1) * e3 * (y - x);
    const double z = prof.Z(i);
    const double nl = std::pow(std::abs(z), p - 1) * z;
    const double num = std::abs(zpp + zr + nl);
    const double den = 1.0 + std::abs(zpp) + std::abs(zr) + std::abs(nl);
    worst = std::max(worst, num / den);
  }
  return worst;
}

TailFit fit_tail(const StationaryProfile& prof) {
  require(prof.size() >= 8 && prof.r(prof.size() - 1) >= 10.0, ErrorKind::RangeError,
          "profile must extend to r >= 10 for a tail fit");
  // the limit is read off where the correction has decayed below rounding
  const double s_far = prof.s.back() - 0.5;
  double acc = 0.0;
  int cnt = 0;
  for (std::size_t i = 0; i < prof.size(); ++i)
    if (prof.s[i] >= s_far) {
      acc += prof.tail_value(i);
      ++cnt;
    }
  const double ell = acc / cnt;
  return regress_tail(prof, ell);
}

SingularityReport singularity_diagnostic(const StationaryProfile& prof) {
  require(prof.size() >= 8 && prof.s.front() <= std::log(1e-4), ErrorKind::RangeError,
          "profile must reach r <= 1e-4 for the singularity diagnostic");
  const int d = prof.d, p = prof.p;
  SingularityReport rep;
  rep.a = (p - 3.0) / (p + 1.0);
  bool all_zero = true;
  for (double v : prof.phi)
    if (v != 0.0) all_zero = false;
  if (all_zero) {
    rep.trivial = true;
    return rep;
  }

  const double s_lo = prof.s.front();
  const double s_hi = s_lo + 2.0;
  const int windows = 8;
  std::vector<double> wmax(windows, 0.0);
  rep.energy_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < prof.size() && prof.s[i] <= s_hi; ++i) {
    const double s = prof.s[i];
    const double c = prof.phi[i] * std::exp(-rep.a * s);
    rep.s.push_back(s);
    rep.curve.push_back(c);
    const int w = std::min(windows - 1, static_cast<int>((s - s_lo) / (s_hi - s_lo) * windows));
    wmax[w] = std::max(wmax[w], std::abs(c));
    const double x = prof.phi[i], y = prof.dphi[i];
    const double q = 0.5 * y * y - 0.5 * (d - 3) * x * x +
                     std::pow(std::abs(x), p + 1) * std::exp(-(p - 3) * s) / (p + 1);
    rep.energy_min = std::min(rep.energy_min, q);
  }
  rep.envelope_floor = *std::min_element(wmax.begin(), wmax.end());
  rep.envelope_non_decaying = rep.envelope_floor > 0.0 && wmax.front() >= wmax.back();

  const double qp = d * (p - 1) / 2.0;
  rep.eps = {1e-1, 1e-2, 1e-3, 1e-4};
  for (double e : rep.eps) {
    const double a = std::log(e);
    double acc = 0.0;
    for (std::size_t i = 1; i < prof.size(); ++i) {
      const double s0 = prof.s[i - 1], s1 = prof.s[i];
      if (s1 <= a || s0 >= 0.0) continue;
      const double lo = std::max(s0, a), hi = std::min(s1, 0.0);
      auto g = [&](std::size_t k) { return std::pow(std::abs(prof.phi[k]), qp) * std::exp((d - qp) * prof.s[k]); };
      acc += 0.5 * (g(i - 1) + g(i)) * (hi - lo);
    }
    rep.lq_integrals.push_back(acc);
  }
  const auto& I = rep.lq_integrals;
  rep.lq_increasing = true;
  rep.lq_unsaturated = true;
  for (std::size_t k = 1; k < I.size(); ++k) {
    rep.lq_increasing = rep.lq_increasing && I[k - 1] < I[k];
    // each decade adds at least as much as the one before
    if (k >= 2) rep.lq_unsaturated = rep.lq_unsaturated && I[k] - I[k - 1] >= I[k - 1] - I[k - 2];
  }
  rep.lq_unsaturated = rep.lq_unsaturated && rep.lq_increasing;
  return rep;
}

StationaryProfile rescale(const StationaryProfile& prof, double lam) {
  require(lam > 0.0, ErrorKind::InvalidParams, "scaling parameter must be positive");
  StationaryProfile out = prof;
  if (lam == 1.0) return out;
  const double shift = std::log(lam);
  const double amp = std::pow(lam, 1.0 - 2.0 / (prof.p - 1));
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.s[i] += shift;
    out.phi[i] *= amp;
    out.dphi[i] *= amp;
  }
  out.lam = prof.lam * lam;
  out.ell = prof.x0 * std::pow(out.lam, (prof.d - 2) - 2.0 / (prof.p - 1));
  return out;
}

}  // namespace radialwave
