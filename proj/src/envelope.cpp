#include "radialwave/envelope.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include "radialwave/linear_wave.hpp"

namespace radialwave {

namespace {

double conjugate(double q) {
  if (q == 1.0) return std::numeric_limits<double>::infinity();
  if (std::isinf(q)) return 1.0;
  return q / (q - 1.0);
}

double inv(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

// smallest x in [lo, hi] (log-bisection) with pred(x) true; pred monotone false -> true
double bisect_log(double lo, double hi, const std::function<bool(double)>& pred) {
  double a = std::log(lo), b = std::log(hi);
  for (int it = 0; it < 200 && b - a > 1e-12; ++it) {
    const double m = 0.5 * (a + b);
    if (pred(std::exp(m)))
      b = m;
    else
      a = m;
  }
  return std::exp(b);
}

}  // namespace

ComplexField make_v(const State& s, const SpectralBasis& basis) {
  return {s.pos, fractional_derivative(s.vel, -1.0, basis)};
}

double complex_sobolev_norm(const ComplexField& v, double s, const SpectralBasis& basis) {
  return std::hypot(sobolev_norm(v.re, s, basis), sobolev_norm(v.im, s, basis));
}

EnvelopeReport envelope(const State& s, const ModelParams& params, const SpectralBasis& basis,
                        const LPProfile& profile) {
  EnvelopeReport rep;
  rep.band = resolved_band(basis);
  require(rep.band.count() > 0, ErrorKind::EmptyBlock, "no resolved dyadic band");
  const ModalState m = to_modal(s, basis);
  const Vec nu = lp_block_norms(m.a, basis, rep.band, profile);
  const Vec nv = lp_block_norms(m.b, basis, rep.band, profile);
  const double sp = params.s_p;
  for (int j = rep.band.j_min; j <= rep.band.j_max; ++j) {
    const int i = j - rep.band.j_min;
    rep.j.push_back(j);
    rep.a.push_back(std::exp2(sp * j) * nu[i] + std::exp2((sp - 1.0) * j) * nv[i]);
  }
  for (int k : rep.j) {
    double b = 1.0;
    if (k < 0) {
      b = 0.0;
      for (std::size_t i = 0; i < rep.j.size(); ++i) b += std::exp2(-std::abs(rep.j[i] - k)) * rep.a[i];
    }
    rep.beta.push_back(b);
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < rep.j.size(); ++i) acc += std::pow(std::exp2(-0.75 * rep.j[i]) * rep.beta[i], 2);
  rep.l2_weighted = std::sqrt(acc);
  for (std::size_t i = 0; i + 1 < rep.j.size(); ++i) {
    const bool ok = rep.beta[i] <= 2.0 * rep.beta[i + 1] && rep.beta[i + 1] <= 2.0 * rep.beta[i];
    if ((rep.j[i] < 0) == (rep.j[i + 1] < 0))
      rep.slow_variation = rep.slow_variation && ok;
    else
      rep.slow_variation_across_zero = ok;
  }
  return rep;
}

TailsReport tails_report(const State& s, const ModelParams& params, const SpectralBasis& basis, double eta) {
  require(eta > 0.0, ErrorKind::InvalidParams, "eta must be positive");
  const Grid& g = *s.grid();
  TailsReport rep;
  rep.eta = eta;
  const double e2 = eta * eta;
  const ModalState m = to_modal(s, basis);
  const Vec& lam = basis.eigenvalues();
  const Vec& xi = basis.frequencies();
  const Vec du = basis.synthesize(Vec(lam.array().pow(0.5 * params.s_p) * m.a.array()));
  const Vec dv = basis.synthesize(Vec(lam.array().pow(0.5 * (params.s_p - 1.0)) * m.b.array()));
  const Vec fu = (lam.array().pow(params.s_p) * m.a.array().square()).matrix();
  const Vec fv = (lam.array().pow(params.s_p - 1.0) * m.b.array().square()).matrix();
  const Vec du2 = du.cwiseAbs2(), dv2 = dv.cwiseAbs2();
  const double su = g.weights().dot(du2), sv = g.weights().dot(dv2);
  rep.total_pos = fu.sum();
  rep.total_vel = fv.sum();

  auto space_out = [&](const Vec& f2, double c) { return c >= g.r_max() ? 0.0 : g.weights(c).dot(f2); };
  auto freq_above = [&](const Vec& f, double c) {
    double acc = 0.0;
    for (Eigen::Index k = 0; k < f.size(); ++k)
      if (xi[k] >= c) acc += f[k];
    return acc;
  };
  auto high_ok = [&](double C) {
    return space_out(du2, C) + freq_above(fu, C) <= e2 && space_out(dv2, C) + freq_above(fv, C) <= e2;
  };
  auto low_ok = [&](double c) {
    const double su_in = su - space_out(du2, c), sv_in = sv - space_out(dv2, c);
    const double fu_in = rep.total_pos - freq_above(fu, c * (1.0 + 1e-15) + 1e-300);
    const double fv_in = rep.total_vel - freq_above(fv, c * (1.0 + 1e-15) + 1e-300);
    return su_in + fu_in <= e2 && sv_in + fv_in <= e2;
  };

  const double lo = 1e-8;
  const double hi = std::max(g.r_max(), xi.maxCoeff()) * 2.0;
  if (high_ok(lo) || !low_ok(lo)) rep.degenerate = high_ok(lo);
  rep.C_eta = high_ok(lo) ? 0.0 : bisect_log(lo, hi, high_ok);
  if (low_ok(hi)) {
    rep.c_eta = std::numeric_limits<double>::infinity();
    rep.degenerate = true;
  } else {
    rep.c_eta = bisect_log(lo, hi, [&](double c) { return !low_ok(c); });
  }
  return rep;
}

void validate_radial_sobolev(int d, double s, double beta, double p, double q) {
  auto bad = [](const std::string& why) { raise(ErrorKind::InvalidExponents, why); };
  if (!(p >= 1.0 && q >= 1.0)) bad("need 1 <= p, q <= inf");
  if (!(s > 0.0 && s < d)) bad("need 0 < s < d");
  const double qc = conjugate(q);
  const double pc = conjugate(p);
  if (!(beta > -d * inv(qc))) bad("need beta > -d/q'");
  const double sum = inv(p) + inv(q);
  if (!(sum >= 1.0 - 1e-12 && sum <= 1.0 + s + 1e-12)) bad("need 1 <= 1/p + 1/q <= 1 + s");
  if (std::abs((d - beta - s) - (d * inv(pc) + d * inv(qc))) > 1e-10) bad("scaling condition d - beta - s = d/p' + d/q' fails");
  int eq = 0;
  eq += p == 1.0;
  eq += std::isinf(p);
  eq += q == 1.0;
  eq += std::isinf(q);
  eq += std::abs(sum - (1.0 + s)) < 1e-12;
  if (eq > 1) bad("more than one endpoint equality holds");
}

double radial_sobolev_check(const Field& f, double s, double beta, double p, double q, const SpectralBasis& basis) {
  validate_radial_sobolev(f.grid->dim(), s, beta, p, q);
  const Field ds = fractional_derivative(f, s, basis);
  const double den = lq_norm(ds, p);
  require(den > 0.0, ErrorKind::IllConditioned, "D^s f vanishes");
  Vec w(f.size());
  const Vec& r = f.grid->nodes();
  for (Eigen::Index i = 0; i < f.size(); ++i) w[i] = r[i] == 0.0 ? (beta == 0.0 ? f.values[i] : 0.0) : std::pow(r[i], beta) * f.values[i];
  const double num = lq_norm(Field(f.grid, w), conjugate(q));
  return num / den;
}

}  // namespace radialwave
