#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>

#include "radialwave/errors.hpp"

namespace radialwave {

/// Dimension and exponent of the focusing problem, plus the exponents derived
/// from them. Only odd d >= 3 and odd p >= 3 are accepted.
struct ModelParams {
  int d = 7;
  int p = 3;
  double s_p = 0.0;   // critical regularity d/2 - 2/(p-1)
  double q_p = 0.0;   // critical Lebesgue exponent d(p-1)/2
  double beta = 0.0;  // channel exponent ((d-2)/2)(p - (d+2)/(d-2))
};

ModelParams make_params(int d, int p);

namespace detail {

// Integrals over [a, b] of the K Lagrange cardinal polynomials built on the
// local node positions xs (in units of the grid spacing).
template <std::size_t K>
std::array<double, K> cardinal_integrals(const std::array<double, K>& xs, double a, double b) {
  std::array<double, K> out{};
  for (std::size_t m = 0; m < K; ++m) {
    // coefficients of prod_{n != m} (x - xs[n]) / (xs[m] - xs[n]), low order first
    std::array<double, K> c{};
    c[0] = 1.0;
    double denom = 1.0;
    std::size_t deg = 0;
    for (std::size_t n = 0; n < K; ++n) {
      if (n == m) continue;
      denom *= xs[m] - xs[n];
      for (std::size_t k = deg + 1; k > 0; --k) c[k] = c[k - 1] - xs[n] * c[k];
      c[0] = -xs[n] * c[0];
      ++deg;
    }
    double ia = 0.0, ib = 0.0;
    for (std::size_t k = K; k-- > 0;) {
      ia = (ia + c[k] / double(k + 1)) * a;
      ib = (ib + c[k] / double(k + 1)) * b;
    }
    out[m] = (ib - ia) / denom;
  }
  return out;
}

template <std::size_t K>
std::array<double, K> cardinal_values(const std::array<double, K>& xs, double x) {
  std::array<double, K> out{};
  for (std::size_t m = 0; m < K; ++m) {
    double v = 1.0;
    for (std::size_t n = 0; n < K; ++n)
      if (n != m) v *= (x - xs[n]) / (xs[m] - xs[n]);
    out[m] = v;
  }
  return out;
}

// Derivatives at x of the cardinal polynomials.
template <std::size_t K>
std::array<double, K> cardinal_slopes(const std::array<double, K>& xs, double x) {
  std::array<double, K> out{};
  for (std::size_t m = 0; m < K; ++m) {
    double denom = 1.0;
    for (std::size_t n = 0; n < K; ++n)
      if (n != m) denom *= xs[m] - xs[n];
    double acc = 0.0;
    for (std::size_t skip = 0; skip < K; ++skip) {
      if (skip == m) continue;
      double prod = 1.0;
      for (std::size_t n = 0; n < K; ++n)
        if (n != m && n != skip) prod *= x - xs[n];
      acc += prod;
    }
    out[m] = acc / denom;
  }
  return out;
}

}  // namespace detail

/// Uniform radial grid on [0, R_max] with N nodes. Integrals use composite
/// quintic-interpolation cells (six-node stencils, exact for quintics) with the
/// r^{d-1} weight folded into the node weights. Immutable once built; share through shared_ptr.
template <typename Scalar>
class RadialGrid {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  RadialGrid(int d, Eigen::Index n, Scalar r_max) : d_(d), n_(n), r_max_(r_max) {
    require(d >= 1, ErrorKind::InvalidParams, "grid dimension must be positive");
    require(n >= 8, ErrorKind::InvalidParams, "grid needs at least 8 nodes");
    static_assert(kStencil == 6);
    require(r_max > 0, ErrorKind::InvalidParams, "R_max must be positive");
    h_ = r_max / Scalar(n - 1);
    r_ = Vector::LinSpaced(n, Scalar(0), r_max);
    r_[n - 1] = r_max;
    radial_weight_ = r_.array().pow(Scalar(d - 1));
    if (d == 1) radial_weight_.setOnes();
    weights_ = plain_weights(Scalar(0)).cwiseProduct(radial_weight_);
  }

  static std::shared_ptr<const RadialGrid> uniform(int d, Eigen::Index n, Scalar r_max) {
    return std::make_shared<const RadialGrid>(d, n, r_max);
  }

  int dim() const { return d_; }
  Eigen::Index size() const { return n_; }
  Scalar r_max() const { return r_max_; }
  Scalar spacing() const { return h_; }
  const Vector& nodes() const { return r_; }
  /// r_i^{d-1}
  const Vector& radial_weight() const { return radial_weight_; }
  /// Full-range weights: sum_i w_i f_i ~ int_0^{R_max} f r^{d-1} dr.
  const Vector& weights() const { return weights_; }

  bool same_as(const RadialGrid& o) const {
    return this == &o || (d_ == o.d_ && n_ == o.n_ && r_max_ == o.r_max_);
  }

  /// Weights for int_{r_min}^{R_max} g dr (no radial factor).
  Vector plain_weights(Scalar r_min) const {
    require(r_min >= 0 && r_min <= r_max_ * (1 + 1e-14), ErrorKind::RegionError, "r_min outside grid");
    Vector w = Vector::Zero(n_);
    const Eigen::Index last = n_ - 2;
    Eigen::Index c = static_cast<Eigen::Index>(std::floor(r_min / h_));
    c = std::clamp<Eigen::Index>(c, 0, last);
    const double theta = std::clamp(double(r_min / h_) - double(c), 0.0, 1.0);
    add_cell(w, c, theta);
    for (Eigen::Index k = c + 1; k <= last; ++k) add_cell(w, k, 0.0);
    return w;
  }

  /// Weights for int_{r_min}^{R_max} f r^{d-1} dr.
  Vector weights(Scalar r_min) const {
    if (r_min == Scalar(0)) return weights_;
    return plain_weights(r_min).cwiseProduct(radial_weight_);
  }

  /// tail[i] = int_{r_i}^{R_max} g dr for every node.
  Vector tail_integrals(const Vector& g) const {
    Vector tail = Vector::Zero(n_);
    for (Eigen::Index c = n_ - 2; c >= 0; --c) {
      const Stencil st = stencil(c);
      const auto wts = detail::cardinal_integrals(st.x, 0.0, 1.0);
      Scalar cell = 0;
      for (std::size_t m = 0; m < kStencil; ++m) cell += Scalar(wts[m]) * g[st.first + m];
      tail[c] = tail[c + 1] + cell * h_;
    }
    return tail;
  }

  /// Quintic interpolation of nodal values at radius r.
  Scalar interpolate(const Vector& f, Scalar r) const {
    require(r >= 0 && r <= r_max_ * (1 + 1e-14), ErrorKind::RegionError, "interpolation point outside grid");
    Eigen::Index c = std::clamp<Eigen::Index>(static_cast<Eigen::Index>(std::floor(r / h_)), 0, n_ - 2);
    const Stencil st = stencil(c);
    const auto vals = detail::cardinal_values(st.x, double(r / h_) - double(c));
    Scalar out = 0;
    for (std::size_t m = 0; m < kStencil; ++m) out += Scalar(vals[m]) * f[st.first + m];
    return out;
  }

  /// Sixth-order finite-difference radial derivative. Near r = 0 the parity
  /// of smooth radial functions (f(-r) = f(r)) supplies the missing nodes;
  /// the last three nodes use one-sided seven-point stencils.
  Vector derivative(const Vector& f) const {
    const Eigen::Index n = n_;
    Vector df(n);
    const Scalar c = Scalar(1) / (60 * h_);
    auto at = [&](Eigen::Index i) { return f[i < 0 ? -i : i]; };
    df[0] = 0;
    for (Eigen::Index i = 1; i <= n - 4; ++i)
      df[i] = (-at(i - 3) + 9 * at(i - 2) - 45 * at(i - 1) + 45 * f[i + 1] - 9 * f[i + 2] + f[i + 3]) * c;
    std::array<double, 7> xs{};
    for (int k = 0; k < 7; ++k) xs[k] = k - 6.0;
    for (Eigen::Index i = n - 3; i < n; ++i) {
      const auto w = detail::cardinal_slopes(xs, double(i - (n - 1)));
      Scalar acc = 0;
      for (int k = 0; k < 7; ++k) acc += Scalar(w[k]) * f[n - 7 + k];
      df[i] = acc / h_;
    }
    return df;
  }

 private:
  static constexpr std::size_t kStencil = 6;

  struct Stencil {
    Eigen::Index first;
    std::array<double, kStencil> x;  // node positions relative to the cell's left node
  };

  // Centred on cell [c, c+1] where possible, shifted inwards at both ends.
  Stencil stencil(Eigen::Index c) const {
    const Eigen::Index first = std::clamp<Eigen::Index>(c - 2, 0, n_ - Eigen::Index(kStencil));
    Stencil st{first, {}};
    for (std::size_t m = 0; m < kStencil; ++m) st.x[m] = double(first + Eigen::Index(m) - c);
    return st;
  }

  void add_cell(Vector& w, Eigen::Index c, double theta) const {
    const Stencil st = stencil(c);
    const auto wts = detail::cardinal_integrals(st.x, theta, 1.0);
    for (std::size_t m = 0; m < kStencil; ++m) w[st.first + m] += Scalar(wts[m]) * h_;
  }

  int d_;
  Eigen::Index n_;
  Scalar r_max_;
  Scalar h_{};
  Vector r_;
  Vector radial_weight_;
  Vector weights_;
};

template <typename Scalar>
using GridPtr = std::shared_ptr<const RadialGrid<Scalar>>;

/// Radial function sampled on a grid.
template <typename Scalar>
struct RadialField {
  using Vector = typename RadialGrid<Scalar>::Vector;

  GridPtr<Scalar> grid;
  Vector values;

  RadialField() = default;
  RadialField(GridPtr<Scalar> g, Vector v) : grid(std::move(g)), values(std::move(v)) {
    require(grid != nullptr, ErrorKind::GridMismatch, "field without grid");
    require(values.size() == grid->size(), ErrorKind::GridMismatch, "field length does not match grid");
  }

  static RadialField zero(GridPtr<Scalar> g) {
    const auto n = g->size();
    return RadialField(std::move(g), Vector::Zero(n));
  }

  static RadialField sample(GridPtr<Scalar> g, const std::function<Scalar(Scalar)>& fn) {
    Vector v(g->size());
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = fn(g->nodes()[i]);
    return RadialField(std::move(g), std::move(v));
  }

  Eigen::Index size() const { return values.size(); }
  bool is_finite() const { return values.allFinite(); }
  Scalar sup_norm() const { return values.size() ? values.cwiseAbs().maxCoeff() : Scalar(0); }
};

template <typename Scalar>
void check_same_grid(const RadialField<Scalar>& f, const RadialField<Scalar>& g) {
  require(f.grid && g.grid && f.grid->same_as(*g.grid), ErrorKind::GridMismatch, "fields live on different grids");
}

template <typename Scalar>
RadialField<Scalar> operator+(const RadialField<Scalar>& f, const RadialField<Scalar>& g) {
  check_same_grid(f, g);
  return {f.grid, f.values + g.values};
}

template <typename Scalar>
RadialField<Scalar> operator-(const RadialField<Scalar>& f, const RadialField<Scalar>& g) {
  check_same_grid(f, g);
  return {f.grid, f.values - g.values};
}

template <typename Scalar>
RadialField<Scalar> operator*(Scalar a, const RadialField<Scalar>& f) {
  return {f.grid, a * f.values};
}

/// (u, u_t) on a single grid.
template <typename Scalar>
struct StatePair {
  RadialField<Scalar> pos;
  RadialField<Scalar> vel;

  StatePair() = default;
  StatePair(RadialField<Scalar> u, RadialField<Scalar> ut) : pos(std::move(u)), vel(std::move(ut)) {
    check_same_grid(pos, vel);
  }

  static StatePair zero(GridPtr<Scalar> g) { return {RadialField<Scalar>::zero(g), RadialField<Scalar>::zero(g)}; }

  const GridPtr<Scalar>& grid() const { return pos.grid; }
  bool is_finite() const { return pos.is_finite() && vel.is_finite(); }
};

template <typename Scalar>
StatePair<Scalar> operator+(const StatePair<Scalar>& a, const StatePair<Scalar>& b) {
  return {a.pos + b.pos, a.vel + b.vel};
}

template <typename Scalar>
StatePair<Scalar> operator-(const StatePair<Scalar>& a, const StatePair<Scalar>& b) {
  return {a.pos - b.pos, a.vel - b.vel};
}

template <typename Scalar>
StatePair<Scalar> operator*(Scalar s, const StatePair<Scalar>& a) {
  return {s * a.pos, s * a.vel};
}

/// int_{r_min}^{R_max} f g r^{d-1} dr
template <typename Scalar>
Scalar weighted_l2(const RadialField<Scalar>& f, const RadialField<Scalar>& g, Scalar r_min = 0) {
  check_same_grid(f, g);
  return f.values.cwiseProduct(g.values).dot(f.grid->weights(r_min));
}

/// int_{r_min}^{R_max} (f_r)^2 r^{d-1} dr
template <typename Scalar>
Scalar h1_seminorm_sq(const RadialField<Scalar>& f, Scalar r_min = 0) {
  const auto df = f.grid->derivative(f.values);
  return df.cwiseAbs2().dot(f.grid->weights(r_min));
}

/// Norm of (u, u_t) in H^1 x L^2(r >= r_min, r^{d-1} dr).
template <typename Scalar>
Scalar energy_pair_norm(const StatePair<Scalar>& s, Scalar r_min = 0) {
  const Scalar sq = h1_seminorm_sq(s.pos, r_min) + weighted_l2(s.vel, s.vel, r_min);
  return std::sqrt(std::max(sq, Scalar(0)));
}

/// (int_{r_min} |f|^q r^{d-1} dr)^{1/q}; q = infinity gives the sup over r >= r_min.
template <typename Scalar>
Scalar lq_norm(const RadialField<Scalar>& f, Scalar q, Scalar r_min = 0) {
  if (std::isinf(q)) {
    Scalar m = 0;
    const auto& r = f.grid->nodes();
    for (Eigen::Index i = 0; i < f.size(); ++i)
      if (r[i] >= r_min) m = std::max(m, std::abs(f.values[i]));
    return m;
  }
  const Scalar s = f.values.cwiseAbs().array().pow(q).matrix().dot(f.grid->weights(r_min));
  return std::pow(std::max(s, Scalar(0)), Scalar(1) / q);
}

using Grid = RadialGrid<double>;
using Field = RadialField<double>;
using State = StatePair<double>;
using Vec = Eigen::VectorXd;

}  // namespace radialwave
