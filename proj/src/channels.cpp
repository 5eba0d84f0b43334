#include "radialwave/channels.hpp"

#include <cmath>

#include "radialwave/linear_wave.hpp"

namespace radialwave {

namespace {

ExteriorMoments sample_moments(const State& s, double R, int k, int kt) {
  const Grid& g = *s.grid();
  const Vec w = g.plain_weights(R);
  const Vec ur = g.derivative(s.pos.values);
  const Vec& r = g.nodes();
  ExteriorMoments m{Vec::Zero(kt), Vec::Zero(k)};
  for (Eigen::Index n = 0; n < g.size(); ++n) {
    if (w[n] == 0.0) continue;
    for (int i = 1; i <= kt; ++i) m.pos[i - 1] += w[n] * ur[n] * std::pow(r[n], 2 * i - 2);
    for (int i = 1; i <= k; ++i) m.vel[i - 1] += w[n] * s.vel.values[n] * std::pow(r[n], 2 * i - 1);
  }
  return m;
}

double rel(double lhs, double rhs, double scale) {
  const double diff = std::abs(lhs - rhs);
  if (diff == 0.0) return 0.0;
  return diff / std::max(scale, 1e-300);
}

}  // namespace

PlaneSpec plane_spec(int d) {
  require(d >= 1 && d % 2 == 1, ErrorKind::InvalidParams, "plane spec needs odd d, got " + std::to_string(d));
  PlaneSpec p;
  p.d = d;
  p.k = d / 4;
  p.kt = (d + 2) / 4;
  for (int i = 1; i <= p.kt; ++i) p.pos_exponents.push_back(2 * i - d);
  for (int j = 1; j <= p.k; ++j) p.vel_exponents.push_back(2 * j - d);
  return p;
}

CauchyCoeffs cauchy_coeffs(int d) {
  const PlaneSpec ps = plane_spec(d);
  auto build = [](int dd, int kk) {
    Vec out(kk);
    for (int j = 1; j <= kk; ++j) {
      double num = 1.0, den = 1.0;
      for (int l = 1; l <= kk; ++l) {
        num *= dd - 2 * j - 2 * l;
        if (l != j) den *= 2 * l - 2 * j;
      }
      out[j - 1] = num / den;
    }
    return out;
  };
  return {build(d, ps.k), build(d + 2, ps.kt)};
}

ExteriorState ExteriorState::from_state(const State& s, double R) {
  const PlaneSpec ps = plane_spec(s.grid()->dim());
  return {R, s, Vec::Zero(ps.kt), Vec::Zero(ps.k)};
}

ExteriorMoments exterior_moments(const ExteriorState& s) {
  const int d = s.sample.grid()->dim();
  const PlaneSpec ps = plane_spec(d);
  const double R = s.R;
  ExteriorMoments m = sample_moments(s.sample, R, ps.k, ps.kt);
  for (int i = 1; i <= ps.kt; ++i)
    for (int j = 1; j <= ps.kt; ++j)
      m.pos[i - 1] += s.lambda[j - 1] * (2.0 * j - d) * std::pow(R, 2 * i + 2 * j - d - 2) / (d + 2 - 2 * i - 2 * j);
  for (int i = 1; i <= ps.k; ++i)
    for (int j = 1; j <= ps.k; ++j)
      m.vel[i - 1] += s.mu[j - 1] * std::pow(R, 2 * i + 2 * j - d) / (d - 2 * i - 2 * j);
  return m;
}

ChannelCoeffs coeffs_from_moments(int d, const ExteriorMoments& m, double R) {
  const PlaneSpec ps = plane_spec(d);
  const CauchyCoeffs cc = cauchy_coeffs(d);
  ChannelCoeffs out{Vec::Zero(ps.kt), Vec::Zero(ps.k), R};
  for (int j = 1; j <= ps.kt; ++j)
    for (int i = 1; i <= ps.kt; ++i)
      out.lambda[j - 1] += -std::pow(R, d + 2 - 2 * i - 2 * j) / ((d - 2.0 * j) * (d + 2.0 - 2 * i - 2 * j)) *
                           cc.dcoef[i - 1] * cc.dcoef[j - 1] * m.pos[i - 1];
  for (int j = 1; j <= ps.k; ++j)
    for (int i = 1; i <= ps.k; ++i)
      out.mu[j - 1] += std::pow(R, d - 2 * i - 2 * j) / (d - 2.0 * i - 2 * j) * cc.c[i - 1] * cc.c[j - 1] * m.vel[i - 1];
  return out;
}

ChannelCoeffs projection_coeffs(const State& s, double R) {
  const Grid& g = *s.grid();
  require(R > 0.0 && R < g.r_max(), ErrorKind::RegionError, "cutoff radius outside the grid");
  return projection_coeffs(ExteriorState::from_state(s, R));
}

ChannelCoeffs projection_coeffs(const ExteriorState& s) {
  const Grid& g = *s.sample.grid();
  require(s.R > 0.0 && s.R < g.r_max(), ErrorKind::RegionError, "cutoff radius outside the grid");
  return coeffs_from_moments(g.dim(), exterior_moments(s), s.R);
}

ExteriorState plane_element(const GridPtr<double>& grid, double R, int index) {
  const PlaneSpec ps = plane_spec(grid->dim());
  require(index >= 0 && index < ps.k + ps.kt, ErrorKind::RangeError, "plane element index out of range");
  ExteriorState e{R, State::zero(grid), Vec::Zero(ps.kt), Vec::Zero(ps.k)};
  if (index < ps.kt)
    e.lambda[index] = 1.0;
  else
    e.mu[index - ps.kt] = 1.0;
  return e;
}

Eigen::MatrixXd plane_gram(int d, double R) {
  const PlaneSpec ps = plane_spec(d);
  const int n = ps.kt + ps.k;
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i <= ps.kt; ++i)
    for (int j = 1; j <= ps.kt; ++j)
      G(i - 1, j - 1) = (2.0 * i - d) * (2.0 * j - d) * std::pow(R, 2 * i + 2 * j - d - 2) / (d + 2 - 2 * i - 2 * j);
  for (int i = 1; i <= ps.k; ++i)
    for (int j = 1; j <= ps.k; ++j)
      G(ps.kt + i - 1, ps.kt + j - 1) = std::pow(R, 2 * i + 2 * j - d) / (d - 2 * i - 2 * j);
  return G;
}

double exterior_inner(const ExteriorState& a, const ExteriorState& b) {
  check_same_grid(a.sample.pos, b.sample.pos);
  require(a.R == b.R, ErrorKind::RegionError, "exterior states with different cutoffs");
  const Grid& g = *a.sample.grid();
  const int d = g.dim();
  const PlaneSpec ps = plane_spec(d);
  const double R = a.R;

  const Vec w = g.weights(R);
  const Vec ua = g.derivative(a.sample.pos.values);
  const Vec ub = g.derivative(b.sample.pos.values);
  double out = w.dot(ua.cwiseProduct(ub)) + w.dot(a.sample.vel.values.cwiseProduct(b.sample.vel.values));

  auto cross = [&](const State& smp, const Vec& lam, const Vec& mu) {
    const ExteriorMoments m = sample_moments(smp, R, ps.k, ps.kt);
    double acc = 0.0;
    for (int i = 1; i <= ps.kt; ++i) acc += lam[i - 1] * (2.0 * i - d) * m.pos[i - 1];
    for (int j = 1; j <= ps.k; ++j) acc += mu[j - 1] * m.vel[j - 1];
    return acc;
  };
  out += cross(a.sample, b.lambda, b.mu) + cross(b.sample, a.lambda, a.mu);

  Vec ca(ps.kt + ps.k), cb(ps.kt + ps.k);
  ca << a.lambda, a.mu;
  cb << b.lambda, b.mu;
  out += ca.dot(plane_gram(d, R) * cb);
  return out;
}

double exterior_norm(const ExteriorState& a) { return std::sqrt(std::max(exterior_inner(a, a), 0.0)); }

Projection project(const State& s, double R) { return project(ExteriorState::from_state(s, R)); }

Projection project(const ExteriorState& s) {
  Projection p;
  p.coeffs = projection_coeffs(s);
  p.pi = {s.R, State::zero(s.sample.grid()), p.coeffs.lambda, p.coeffs.mu};
  p.pi_perp = {s.R, s.sample, s.lambda - p.coeffs.lambda, s.mu - p.coeffs.mu};
  return p;
}

MomentResiduals moment_identities_check(const State& s, double R) {
  const Grid& g = *s.grid();
  require(R > 0.0 && R < g.r_max(), ErrorKind::RegionError, "cutoff radius outside the grid");
  const int d = g.dim();
  const PlaneSpec ps = plane_spec(d);
  const CauchyCoeffs cc = cauchy_coeffs(d);
  const ExteriorMoments m = sample_moments(s, R, ps.k, ps.kt);
  const ChannelCoeffs cf = coeffs_from_moments(d, m, R);
  MomentResiduals res;

  for (int i = 1; i <= ps.kt; ++i) {
    double rhs = 0.0, scale = std::abs(m.pos[i - 1]);
    for (int j = 1; j <= ps.kt; ++j) {
      const double term = -std::pow(R, 2 * i + 2 * j - d - 2) * (d - 2.0 * j) / (d + 2 - 2 * i - 2 * j) * cf.lambda[j - 1];
      rhs += term;
      scale = std::max(scale, std::abs(term));
    }
    res.position_moments = std::max(res.position_moments, rel(m.pos[i - 1], rhs, scale));
  }
  for (int i = 1; i <= ps.k; ++i) {
    double rhs = 0.0, scale = std::abs(m.vel[i - 1]);
    for (int j = 1; j <= ps.k; ++j) {
      const double term = std::pow(R, 2 * i + 2 * j - d) / (d - 2 * i - 2 * j) * cf.mu[j - 1];
      rhs += term;
      scale = std::max(scale, std::abs(term));
    }
    res.velocity_moments = std::max(res.velocity_moments, rel(m.vel[i - 1], rhs, scale));
  }

  const Vec w = g.plain_weights(R);
  const Vec& r = g.nodes();
  Vec umom = Vec::Zero(std::max(ps.kt - 1, 0));
  for (int i = 1; i < ps.kt; ++i)
    umom[i - 1] = w.dot(s.pos.values.cwiseProduct(r.array().pow(2 * i - 1).matrix()));
  const double uR = g.interpolate(s.pos.values, R);
  for (int j = 1; j <= ps.kt; ++j) {
    const double pre = cc.dcoef[j - 1] / (d - 2.0 * j);
    double rhs = pre * uR * std::pow(R, d - 2 * j);
    double scale = std::max(std::abs(cf.lambda[j - 1]), std::abs(rhs));
    for (int i = 1; i < ps.kt; ++i) {
      const double term = pre * 2.0 * i * cc.dcoef[i] * std::pow(R, d - 2 * i - 2 * j) / (d - 2 * i - 2 * j) * umom[i - 1];
      rhs += term;
      scale = std::max(scale, std::abs(term));
    }
    res.lambda_by_parts = std::max(res.lambda_by_parts, rel(cf.lambda[j - 1], rhs, scale));
  }
  return res;
}

NormFormulas norm_formulas(const State& s, double R) {
  const Grid& g = *s.grid();
  require(R > 0.0 && R < g.r_max(), ErrorKind::RegionError, "cutoff radius outside the grid");
  const int d = g.dim();
  const PlaneSpec ps = plane_spec(d);
  const CauchyCoeffs cc = cauchy_coeffs(d);
  const Vec& r = g.nodes();
  const Eigen::Index n = g.size();
  const Vec ur = g.derivative(s.pos.values);
  const Vec& ut = s.vel.values;

  NormFormulas out;
  const Projection pr = project(s, R);
  for (int i = 1; i <= ps.kt; ++i) out.pi_proxy += std::pow(pr.coeffs.lambda[i - 1] * std::pow(R, 2 * i - 0.5 * (d + 2)), 2);
  for (int i = 1; i <= ps.k; ++i) out.pi_proxy += std::pow(pr.coeffs.mu[i - 1] * std::pow(R, 2 * i - 0.5 * d), 2);

  // cutoff-dependent moments M_i(r) = int_r u_r rho^{2i-2}, N_i(r) = int_r u_t rho^{2i-1}
  std::vector<Vec> M, Mp, N, Np;
  for (int i = 1; i <= ps.kt; ++i) {
    const Vec integrand = ur.cwiseProduct(r.array().pow(2 * i - 2).matrix());
    M.push_back(g.tail_integrals(integrand));
    Mp.push_back(-integrand);
  }
  for (int i = 1; i <= ps.k; ++i) {
    const Vec integrand = ut.cwiseProduct(r.array().pow(2 * i - 1).matrix());
    N.push_back(g.tail_integrals(integrand));
    Np.push_back(-integrand);
  }
  Vec density = Vec::Zero(n);
  for (Eigen::Index q = 1; q < n; ++q) {
    const double rq = r[q];
    double acc = 0.0;
    for (int j = 1; j <= ps.kt; ++j) {
      double dl = 0.0;
      for (int i = 1; i <= ps.kt; ++i) {
        const int e = d + 2 - 2 * i - 2 * j;
        const double a = -cc.dcoef[i - 1] * cc.dcoef[j - 1] / ((d - 2.0 * j) * e);
        dl += a * (e * std::pow(rq, e - 1) * M[i - 1][q] + std::pow(rq, e) * Mp[i - 1][q]);
      }
      acc += std::pow(dl * std::pow(rq, 2 * j - 0.5 * (d + 1)), 2);
    }
    for (int j = 1; j <= ps.k; ++j) {
      double dm = 0.0;
      for (int i = 1; i <= ps.k; ++i) {
        const int e = d - 2 * i - 2 * j;
        const double b = cc.c[i - 1] * cc.c[j - 1] / e;
        dm += b * (e * std::pow(rq, e - 1) * N[i - 1][q] + std::pow(rq, e) * Np[i - 1][q]);
      }
      acc += std::pow(dm * std::pow(rq, 2 * j - 0.5 * (d - 1)), 2);
    }
    density[q] = acc;
  }
  out.pi_perp_proxy = g.plain_weights(R).dot(density);
  out.pi_true = exterior_inner(pr.pi, pr.pi);
  out.pi_perp_true = exterior_inner(pr.pi_perp, pr.pi_perp);
  return out;
}

double support_radius(const State& s, double eps) {
  const Vec& r = s.grid()->nodes();
  const double su = s.pos.sup_norm(), sv = s.vel.sup_norm();
  for (Eigen::Index i = r.size() - 1; i >= 0; --i)
    if (std::abs(s.pos.values[i]) > eps * su || std::abs(s.vel.values[i]) > eps * sv) return r[i];
  return 0.0;
}

ChannelReport channel_verify(const State& data, double R, double T, const SpectralBasis& basis, double tol_factor,
                             int p) {
  const Grid& g = *data.grid();
  require(data.grid()->same_as(*basis.grid()), ErrorKind::GridMismatch, "data and basis grids differ");
  require(T > 0.0, ErrorKind::InvalidParams, "channel horizon must be positive");
  const double R1 = support_radius(data);
  require(T <= g.r_max() - R1, ErrorKind::CausalityError,
          "horizon exceeds the causality budget R_max - support radius");
  require(R + T < g.r_max(), ErrorKind::RegionError, "exterior region outside the grid");

  ChannelReport rep;
  rep.d = g.dim();
  rep.p = p;
  rep.R = R;
  rep.T = T;
  const ModalState m0 = to_modal(data, basis);
  auto ext_at = [&](double t) {
    ModalState m = m0;
    advance_modal(m, t, basis);
    return exterior_energy(from_modal(m, basis), R, t);
  };
  rep.exterior_plus = ext_at(T);
  rep.exterior_minus = ext_at(-T);
  rep.exterior_plus_half = ext_at(0.5 * T);
  rep.exterior_minus_half = ext_at(-0.5 * T);

  const Projection pr = project(data, R);
  rep.bound = 0.5 * exterior_inner(pr.pi_perp, pr.pi_perp);
  const double total = energy_pair_norm(data);
  rep.tol = tol_factor * total * total;
  rep.margin = rep.max_exterior() - rep.bound;
  rep.verdict = rep.margin >= -rep.tol;
  return rep;
}

}  // namespace radialwave
