#ifndef QUADRICS_RK45_HPP
#define QUADRICS_RK45_HPP

#include <cmath>
#include <functional>

#include <Eigen/Core>

namespace quadrics {

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double max_step = 0.05;
};

// One accepted step of the Dormand-Prince 5(4) pair, with the data needed for
// cubic Hermite dense output.
struct DenseStep {
  double s0 = 0.0, s1 = 0.0;
  Eigen::VectorXd y0, f0, y1, f1;

  Eigen::VectorXd eval(double s) const {
    const double h = s1 - s0;
    const double t = (s - s0) / h;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * f0 +
           (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * h * f1;
  }
};

enum class DriveStatus { ReachedEnd, Stopped, StepUnderflow, BadInit };

// field(s, y, dy) returns false when the right-hand side cannot be evaluated
// there (drives a step rejection). The callback sees every accepted step and
// may stop the drive.
using OdeField = std::function<bool(double, const Eigen::VectorXd&, Eigen::VectorXd&)>;
using StepCallback = std::function<bool(const DenseStep&)>;  // false => stop

inline DriveStatus drive_rk45(const OdeField& field, double s0, const Eigen::VectorXd& y0,
                              double s_end, const OdeOptions& opts,
                              const StepCallback& on_step) {
  // Dormand-Prince coefficients.
  static const double a21 = 1.0 / 5;
  static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                      a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                      a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                      b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static const double e1 = b1 - 5179.0 / 57600, e3 = b3 - 7571.0 / 16695,
                      e4 = b4 - 393.0 / 640, e5 = b5 + 92097.0 / 339200,
                      e6 = b6 - 187.0 / 2100, e7 = -1.0 / 40;
  static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;

  const double dir = (s_end >= s0) ? 1.0 : -1.0;
  if (s_end == s0) return DriveStatus::ReachedEnd;

  double s = s0;
  Eigen::VectorXd y = y0;
  Eigen::VectorXd f(y.size());
  if (!field(s, y, f) || !f.allFinite()) return DriveStatus::BadInit;

  double h = dir * std::min({opts.max_step, std::abs(s_end - s0), 1e-3});
  Eigen::VectorXd k2(y.size()), k3(y.size()), k4(y.size()), k5(y.size()),
      k6(y.size()), k7(y.size()), ynew(y.size());

  while (dir * (s_end - s) > 0.0) {
    if (std::abs(h) > std::abs(s_end - s)) h = s_end - s;
    if (std::abs(h) < 1e-14 * (1.0 + std::abs(s))) return DriveStatus::StepUnderflow;

    bool ok = field(s + c2 * h, y + h * (a21 * f), k2) && k2.allFinite();
    ok = ok && field(s + c3 * h, y + h * (a31 * f + a32 * k2), k3) && k3.allFinite();
    ok = ok && field(s + c4 * h, y + h * (a41 * f + a42 * k2 + a43 * k3), k4) && k4.allFinite();
    ok = ok && field(s + c5 * h, y + h * (a51 * f + a52 * k2 + a53 * k3 + a54 * k4), k5) &&
         k5.allFinite();
    ok = ok && field(s + h, y + h * (a61 * f + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5), k6) &&
         k6.allFinite();
    if (ok) {
      ynew = y + h * (b1 * f + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      ok = ynew.allFinite() && field(s + h, ynew, k7) && k7.allFinite();
    }
    if (!ok) {
      h *= 0.5;
      continue;
    }

    const Eigen::VectorXd err_vec =
        h * (e1 * f + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    double err = 0.0;
    for (int i = 0; i < y.size(); ++i) {
      const double sc = opts.atol + opts.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      const double r = err_vec[i] / sc;
      err += r * r;
    }
    err = std::sqrt(err / y.size());

    if (err <= 1.0) {
      DenseStep step;
      step.s0 = s;
      step.s1 = s + h;
      step.y0 = y;
      step.f0 = f;
      step.y1 = ynew;
      step.f1 = k7;
      s += h;
      y.swap(ynew);
      f.swap(k7);
      if (!on_step(step)) return DriveStatus::Stopped;
    }
    const double fac = (err > 0.0) ? 0.9 * std::pow(err, -0.2) : 5.0;
    h *= std::clamp(fac, 0.2, 5.0);
    if (std::abs(h) > opts.max_step) h = dir * opts.max_step;
  }
  return DriveStatus::ReachedEnd;
}

}  // namespace quadrics

#endif
