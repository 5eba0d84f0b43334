#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>

#include "radialwave/errors.hpp"

namespace radialwave {

/// Dormand-Prince 5(4) with an embedded error estimate (FSAL not exploited:
/// the stage count stays explicit and the stepper stays stateless).
template <int Dim>
struct DormandPrince {
  using V = Eigen::Matrix<double, Dim, 1>;
  using Rhs = std::function<V(double, const V&)>;

  struct Step {
    V y;    // fifth-order solution
    V err;  // difference to the embedded fourth-order solution
  };

  static Step step(const Rhs& f, double t, const V& y, double h) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = b1 - 5179.0 / 57600, e3 = b3 - 7571.0 / 16695, e4 = b4 - 393.0 / 640,
                            e5 = b5 + 92097.0 / 339200, e6 = b6 - 187.0 / 2100, e7 = -1.0 / 40;

    const V k1 = f(t, y);
    const V k2 = f(t + c2 * h, y + h * (a21 * k1));
    const V k3 = f(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
    const V k4 = f(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const V k5 = f(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const V k6 = f(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    Step out;
    out.y = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const V k7 = f(t + h, out.y);
    out.err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    return out;
  }

  struct Options {
    double rtol = 1e-10;
    double atol = 1e-14;
    double h_init = 1e-3;
    double h_min = 1e-14;
    long max_steps = 10'000'000;
    /// Per-component error scale; default atol + rtol * |y|.
    std::function<V(double, const V&)> scale;
    /// Largest admissible step at (t, y); default unbounded.
    std::function<double(double, const V&)> max_step;
  };

  enum class Status { Done, Stopped, StepUnderflow, NonFinite, TooManySteps };

  struct Result {
    Status status = Status::Done;
    double t = 0.0;
    V y;
    long accepted = 0;
    long rejected = 0;
  };

  /// Adaptive integration from t0 to t1 (either direction). `observe(t, y)` is
  /// called at the start and after every accepted step; returning false stops.
  static Result integrate(const Rhs& f, double t0, const V& y0, double t1, const Options& opt,
                          const std::function<bool(double, const V&)>& observe = {}) {
    Result res;
    res.t = t0;
    res.y = y0;
    if (observe && !observe(t0, y0)) {
      res.status = Status::Stopped;
      return res;
    }
    const double dir = t1 >= t0 ? 1.0 : -1.0;
    double h = std::abs(opt.h_init);
    while (dir * (t1 - res.t) > 0.0) {
      if (res.accepted + res.rejected >= opt.max_steps) {
        res.status = Status::TooManySteps;
        return res;
      }
      if (opt.max_step) h = std::min(h, opt.max_step(res.t, res.y));
      bool last = false;
      if (h >= std::abs(t1 - res.t)) {
        h = std::abs(t1 - res.t);
        last = true;
      }
      const Step st = step(f, res.t, res.y, dir * h);
      V sc = opt.scale ? opt.scale(res.t, res.y) : V((opt.atol + opt.rtol * res.y.array().abs()).matrix());
      if (opt.scale) sc = sc.cwiseMax(opt.atol);
      const double errn = st.err.cwiseQuotient(sc).cwiseAbs().maxCoeff();
      if (!std::isfinite(errn) || !st.y.allFinite()) {
        if (h <= opt.h_min) {
          res.status = Status::NonFinite;
          return res;
        }
        h *= 0.25;
        ++res.rejected;
        continue;
      }
      if (errn <= 1.0) {
        res.t = last ? t1 : res.t + dir * h;
        res.y = st.y;
        ++res.accepted;
        if (observe && !observe(res.t, res.y)) {
          res.status = Status::Stopped;
          return res;
        }
        const double fac = errn == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(errn, -0.2), 0.2, 5.0);
        h *= fac;
      } else {
        ++res.rejected;
        h *= std::clamp(0.9 * std::pow(errn, -0.25), 0.1, 0.9);
        if (h < opt.h_min) {
          res.status = Status::StepUnderflow;
          return res;
        }
      }
    }
    return res;
  }
};

}  // namespace radialwave
