#include "quadrics/xi_quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "quadrics/errors.hpp"
#include "quadrics/quadrature.hpp"

namespace quadrics {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

XiQuadrature::XiQuadrature(double k1, double k2, Eigen::VectorXd offsets, double xi_start,
                           int branch_sign, const XiQuadratureOptions& opts)
    : k1_(k1),
      k2_(k2),
      offsets_(std::move(offsets)),
      xi_start_(xi_start),
      branch_(branch_sign),
      opts_(opts) {
  if (offsets_.size() < 1) throw std::invalid_argument("XiQuadrature: empty offsets");

  // Cauchy bound for the real roots of W.
  root_bound_ = 0.0;
  if (k2_ != 0.0) {
    const int n = static_cast<int>(offsets_.size());
    Eigen::VectorXd c = Eigen::VectorXd::Zero(n + 1);  // decreasing degree, monic
    c[0] = 1.0;
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k >= 1; --k) c[k] -= offsets_[j] * c[k - 1];
    c[n] += k1_ / k2_;
    root_bound_ = 1.0 + c.tail(n).cwiseAbs().maxCoeff();
  }

  const double scale = std::max(wscale_at(xi_start_), 1e-300);
  const double W0 = W(xi_start_);
  if (W0 < -1e-9 * scale)
    throw InvalidStartError("xi quadrature: (xi')^2 negative at the start");

  build(+1);
  build(-1);
}

double XiQuadrature::W(double xi) const {
  double prod = 1.0;
  for (int j = 0; j < offsets_.size(); ++j) prod *= xi - offsets_[j];
  return k1_ + k2_ * prod;
}

double XiQuadrature::Wprime(double xi) const {
  const int n = static_cast<int>(offsets_.size());
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    double prod = 1.0;
    for (int j = 0; j < n; ++j)
      if (j != i) prod *= xi - offsets_[j];
    sum += prod;
  }
  return k2_ * sum;
}

double XiQuadrature::wscale_at(double xi) const {
  double prod = 1.0;
  for (int j = 0; j < offsets_.size(); ++j) prod *= std::abs(xi) + std::abs(offsets_[j]) + 1.0;
  return std::abs(k1_) + std::abs(k2_) * prod;
}

std::vector<double> XiQuadrature::real_roots() const {
  std::vector<double> roots;
  if (k2_ == 0.0) return roots;  // W is constant
  const int n = static_cast<int>(offsets_.size());

  Eigen::VectorXd c = Eigen::VectorXd::Zero(n + 1);  // monic, decreasing degree
  c[0] = 1.0;
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k >= 1; --k) c[k] -= offsets_[j] * c[k - 1];
  c[n] += k1_ / k2_;

  if (n == 1) {
    roots.push_back(-c[1]);
    return roots;
  }

  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) companion(i, n - 1) = -c[n - i];
  const Eigen::EigenSolver<Eigen::MatrixXd> es(companion);

  for (int i = 0; i < n; ++i) {
    const std::complex<double> z = es.eigenvalues()[i];
    if (std::abs(z.imag()) > 1e-8 * (1.0 + std::abs(z.real()))) continue;
    // Newton polish on W
    double x = z.real();
    for (int it = 0; it < 8; ++it) {
      const double w = W(x), wp = Wprime(x);
      if (wp == 0.0) break;
      const double step = w / wp;
      x -= step;
      if (std::abs(step) < 1e-15 * (1.0 + std::abs(x))) break;
    }
    if (std::abs(W(x)) <= 1e-8 * std::max(wscale_at(x), 1e-300)) roots.push_back(x);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

double XiQuadrature::travel_time(double x0, bool sing0, double x1, bool sing1) const {
  double lo = x0, hi = x1;
  bool slo = sing0, shi = sing1;
  if (lo > hi) {
    std::swap(lo, hi);
    std::swap(slo, shi);
  }
  if (lo == hi) return 0.0;

  const auto inv_sqrt_W = [this](double x) {
    const double w = std::max(W(x), 1e-300);
    return 1.0 / std::sqrt(w);
  };
  const double mid = 0.5 * (lo + hi);
  double total = 0.0;

  if (slo) {
    // xi = lo + w^2 removes the sqrt singularity at the turning point
    const double wmax = std::sqrt(mid - lo);
    total += gauss_kronrod(
        [&](double w) {
          const double v = std::max(W(lo + w * w) / (w * w), 1e-300);
          return 2.0 / std::sqrt(v);
        },
        0.0, wmax, opts_.quad_abs_tol, opts_.quad_rel_tol);
  } else {
    total += gauss_kronrod(inv_sqrt_W, lo, mid, opts_.quad_abs_tol, opts_.quad_rel_tol);
  }

  if (shi) {
    const double wmax = std::sqrt(hi - mid);
    total += gauss_kronrod(
        [&](double w) {
          const double v = std::max(W(hi - w * w) / (w * w), 1e-300);
          return 2.0 / std::sqrt(v);
        },
        0.0, wmax, opts_.quad_abs_tol, opts_.quad_rel_tol);
  } else {
    total += gauss_kronrod(inv_sqrt_W, mid, hi, opts_.quad_abs_tol, opts_.quad_rel_tol);
  }
  return total;
}

double XiQuadrature::escape_time(double x0, bool sing0, int dir) const {
  const int degree = static_cast<int>(offsets_.size());
  if (k2_ == 0.0 || degree <= 2) return kInf;  // improper tail diverges

  const double T = std::max({std::abs(x0) * 2.0, root_bound_ + 1.0, std::abs(x0) + 1.0});
  const double Tsigned = dir > 0 ? T : -T;
  double total = travel_time(x0, sing0, Tsigned, false);

  // int_T^inf dxi / sqrt(W) with xi = T / v^2 (v from 1 down to 0); mirrored
  // for the downward escape.
  total += gauss_kronrod(
      [&](double v) {
        const double xi = Tsigned / (v * v);
        const double w = std::max(W(xi), 1e-300);
        return 2.0 * T / (v * v * v * std::sqrt(w));
      },
      0.0, 1.0, opts_.quad_abs_tol, opts_.quad_rel_tol);
  return total;
}

void XiQuadrature::build(int direction) {
  std::vector<Leg>& legs = direction >= 0 ? legs_fwd_ : legs_bwd_;
  legs.clear();

  const std::vector<double> roots = real_roots();
  const double scale = std::max(wscale_at(xi_start_), 1e-300);
  const bool start_turning = std::abs(W(xi_start_)) <= 1e-9 * scale;

  int d;
  if (start_turning) {
    const double wp = Wprime(xi_start_);
    if (std::abs(wp) <= 1e-8 * scale / (1.0 + std::abs(xi_start_)))
      throw BranchLossError("xi quadrature: start sits on a double zero of (xi')^2");
    d = wp > 0.0 ? +1 : -1;  // motion into W > 0, same for both time directions
  } else {
    d = (branch_ >= 0 ? +1 : -1) * (direction >= 0 ? +1 : -1);
  }

  double xi = xi_start_;
  double s = 0.0;
  bool sing = start_turning;

  for (int iter = 0; iter < opts_.max_legs; ++iter) {
    // nearest root strictly beyond xi in direction d
    const double margin = 1e-9 * (1.0 + std::abs(xi));
    double next = d > 0 ? kInf : -kInf;
    bool found = false;
    for (double r : roots) {
      if (d > 0 && r > xi + margin && r < next) {
        next = r;
        found = true;
      }
      if (d < 0 && r < xi - margin && r > next) {
        next = r;
        found = true;
      }
    }

    Leg leg;
    leg.dir = d;
    leg.xi0 = xi;
    leg.s0 = s;
    leg.turning_start = sing;
    if (found) {
      if (std::abs(Wprime(next)) <=
          1e-8 * std::max(wscale_at(next), 1e-300) / (1.0 + std::abs(next)))
        throw BranchLossError("xi quadrature: trajectory reaches a double zero of (xi')^2");
      leg.xi1 = next;
      leg.turning_end = true;
      const double dt = travel_time(xi, sing, next, true);
      leg.s1 = s + dt;
      legs.push_back(leg);
      s = leg.s1;
      xi = next;
      sing = true;
      d = -d;
    } else {
      leg.xi1 = d > 0 ? kInf : -kInf;
      leg.turning_end = false;
      const double dt = escape_time(xi, sing, d);
      leg.s1 = std::isfinite(dt) ? s + dt : kInf;
      legs.push_back(leg);
      return;
    }
  }
  // Trapped oscillation: the computed legs cover a finite window only.
}

double XiQuadrature::invert_leg(const Leg& leg, double duration) const {
  if (duration <= 0.0) return leg.xi0;
  const double total = leg.s1 - leg.s0;
  if (std::isfinite(total) && duration >= total && leg.turning_end) return leg.xi1;

  // bracket in xi
  double lo = leg.xi0;
  double hi;
  if (std::isfinite(leg.xi1)) {
    hi = leg.xi1;
  } else {
    double step = 1.0 + std::abs(leg.xi0);
    hi = leg.xi0 + leg.dir * step;
    while (travel_time(leg.xi0, leg.turning_start, hi, false) < duration) {
      step *= 2.0;
      hi = leg.xi0 + leg.dir * step;
      if (std::abs(hi) > 1e100) return hi;  // numerically escaped
    }
  }

  // bisection on the monotone duration map, then Newton polish
  double a = std::min(lo, hi), b = std::max(lo, hi);
  auto dur_at = [&](double x) {
    return travel_time(leg.xi0, leg.turning_start, x, false);
  };
  for (int it = 0; it < 40; ++it) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    const bool below = dur_at(mid) < duration;
    // duration grows away from xi0
    const bool mid_after = leg.dir > 0 ? below : !below;
    (mid_after ? a : b) = mid;
    if (it >= 20) {
      const double x = 0.5 * (a + b);
      const double w = W(x);
      if (w > 0.0) {
        const double newton = x + leg.dir * (duration - dur_at(x)) * std::sqrt(w);
        if (newton > a && newton < b) {
          const bool nb = dur_at(newton) < duration;
          ((leg.dir > 0 ? nb : !nb) ? a : b) = newton;
        }
      }
    }
  }
  return 0.5 * (a + b);
}

double XiQuadrature::xi1_at(double s) const {
  const std::vector<Leg>& legs = s >= 0.0 ? legs_fwd_ : legs_bwd_;
  const double u = std::abs(s);
  for (const Leg& leg : legs) {
    if (u <= leg.s1) return invert_leg(leg, u - leg.s0);
  }
  throw std::out_of_range("XiQuadrature::xi1_at: s beyond the computed motion");
}

double XiQuadrature::blowup_s(int direction) const {
  const std::vector<Leg>& legs = direction >= 0 ? legs_fwd_ : legs_bwd_;
  if (legs.empty()) return kInf;
  const Leg& last = legs.back();
  if (!last.turning_end && std::isfinite(last.s1)) return last.s1;
  return kInf;
}

double XiQuadrature::first_angle_crossing(double phi0, double offset, double rate,
                                          int direction) const {
  const std::vector<Leg>& legs = direction >= 0 ? legs_fwd_ : legs_bwd_;
  if (legs.empty()) return kInf;

  // xi - offset never changes sign along the motion, so phi is monotone.
  const double x0 = legs.front().xi0;
  const double comp_sign = (x0 - offset) > 0.0 ? 1.0 : -1.0;
  const double phi_dir = rate >= 0.0 ? comp_sign : -comp_sign;
  if (rate == 0.0) return kInf;

  // first odd multiple of pi/2 in the direction of motion
  const double half_pi = std::asin(1.0);
  double target;
  {
    const double m = std::floor((phi0 - half_pi) / (2.0 * half_pi));
    target = phi_dir > 0.0 ? half_pi + (m + 1.0) * 2.0 * half_pi
                           : half_pi + m * 2.0 * half_pi;
  }

  auto angle_piece = [&](const Leg& leg, double x_to) {
    // int rate / (xi - offset) / sqrt(W) |dxi| from leg.xi0 to x_to
    double lo = std::min(leg.xi0, x_to), hi = std::max(leg.xi0, x_to);
    bool slo = leg.dir > 0 ? leg.turning_start : false;
    bool shi = leg.dir > 0 ? false : leg.turning_start;
    if (x_to == leg.xi1) (leg.dir > 0 ? shi : slo) = leg.turning_end;
    if (lo == hi) return 0.0;
    const double mid = 0.5 * (lo + hi);
    auto plain = [&](double x) {
      const double w = std::max(W(x), 1e-300);
      return rate / ((x - offset) * std::sqrt(w));
    };
    double acc = 0.0;
    if (slo) {
      const double wmax = std::sqrt(mid - lo);
      acc += gauss_kronrod(
          [&](double w) {
            const double x = lo + w * w;
            const double v = std::max(W(x) / (w * w), 1e-300);
            return 2.0 * rate / ((x - offset) * std::sqrt(v));
          },
          0.0, wmax, opts_.quad_abs_tol, opts_.quad_rel_tol);
    } else {
      acc += gauss_kronrod(plain, lo, mid, opts_.quad_abs_tol, opts_.quad_rel_tol);
    }
    if (shi) {
      const double wmax = std::sqrt(hi - mid);
      acc += gauss_kronrod(
          [&](double w) {
            const double x = hi - w * w;
            const double v = std::max(W(x) / (w * w), 1e-300);
            return 2.0 * rate / ((x - offset) * std::sqrt(v));
          },
          0.0, wmax, opts_.quad_abs_tol, opts_.quad_rel_tol);
    } else {
      acc += gauss_kronrod(plain, mid, hi, opts_.quad_abs_tol, opts_.quad_rel_tol);
    }
    return acc;
  };

  auto angle_tail = [&](const Leg& leg) {
    // contribution of an unbounded leg beyond T; converges for every degree
    const double T = std::max({std::abs(leg.xi0) * 2.0, root_bound_ + 1.0,
                               std::abs(leg.xi0) + 1.0});
    const double Tsigned = leg.dir > 0 ? T : -T;
    double acc = angle_piece(leg, Tsigned);
    acc += gauss_kronrod(
        [&](double v) {
          const double xi = Tsigned / (v * v);
          const double w = std::max(W(xi), 1e-300);
          return 2.0 * T * rate / (v * v * v * (xi - offset) * std::sqrt(w));
        },
        0.0, 1.0, opts_.quad_abs_tol, opts_.quad_rel_tol);
    return acc;
  };

  double phi = phi0;
  for (const Leg& leg : legs) {
    const bool unbounded = !std::isfinite(leg.xi1);
    const double dphi = unbounded ? angle_tail(leg) : angle_piece(leg, leg.xi1);
    const double phi_end = phi + dphi;
    const bool crossed = phi_dir > 0.0 ? (phi_end >= target) : (phi_end <= target);
    if (crossed) {
      // locate xi* with phi(xi*) = target inside this leg
      double a = leg.xi0;
      double b;
      if (unbounded) {
        double step = 1.0 + std::abs(leg.xi0);
        b = leg.xi0 + leg.dir * step;
        while (true) {
          const double ph = phi + angle_piece(leg, b);
          if (phi_dir > 0.0 ? ph >= target : ph <= target) break;
          step *= 2.0;
          b = leg.xi0 + leg.dir * step;
          if (std::abs(b) > 1e150) break;
        }
      } else {
        b = leg.xi1;
      }
      double lo = std::min(a, b), hi = std::max(a, b);
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double ph = phi + angle_piece(leg, mid);
        // "before" means the target has not been reached yet at mid
        const bool before = phi_dir > 0.0 ? ph < target : ph > target;
        if (leg.dir > 0) {
          (before ? lo : hi) = mid;
        } else {
          (before ? hi : lo) = mid;
        }
      }
      const double xi_star = 0.5 * (lo + hi);
      return leg.s0 + travel_time(leg.xi0, leg.turning_start, xi_star, false);
    }
    phi = phi_end;
    if (unbounded) break;
  }
  return kInf;
}

XiQuadrature XiQuadrature::from_state(const RecursiveSpec& spec, const HessianCoefficients& h,
                                      const SystemState& st, const XiQuadratureOptions& opts) {
  const FirstIntegrals fi = first_integrals(spec, h, st);
  const auto [k1, k2] = xi_equation_constants(spec, fi.kappa);
  const XiRhsCheck chk = xi_rhs_check(spec, h, st);
  int branch = 0;
  const double prime_scale = std::sqrt(std::abs(chk.scale));
  if (std::abs(chk.xi_prime) > 1e-9 * prime_scale) branch = chk.xi_prime > 0.0 ? +1 : -1;
  return XiQuadrature(k1, k2, fi.xi->offsets, fi.xi->xi[0], branch, opts);
}

BlowupPrediction predict_blowup(const RecursiveSpec& spec, const HessianCoefficients& h,
                                const SystemState& init, int direction,
                                const XiQuadratureOptions& opts) {
  const double disc = spec.a1 * spec.a1 - 4.0 * spec.a0;
  if (disc >= 0.0)
    throw std::invalid_argument(
        "predict_blowup: requires a1^2 - 4 a0 < 0 (arctan-type angle tracking)");

  const XiQuadrature xq = XiQuadrature::from_state(spec, h, init, opts);
  const double rate = std::sqrt(-disc) / 2.0;

  BlowupPrediction out;
  out.s_star = xq.blowup_s(direction);
  out.kind = std::isfinite(out.s_star) ? BlowupPrediction::Kind::XiEscape
                                       : BlowupPrediction::Kind::None;

  const FirstIntegrals fi = first_integrals(spec, h, init);
  for (int j = 0; j < init.dim(); ++j) {
    const double phi0 = std::atan((2.0 * init.p[j] + spec.a1) / std::sqrt(-disc));
    // the angle runs backward in reversed time
    const double sj =
        xq.first_angle_crossing(phi0, fi.xi->offsets[j], rate * direction, direction);
    if (sj < out.s_star) {
      out.s_star = sj;
      out.kind = BlowupPrediction::Kind::ComponentPole;
      out.component = j;
    }
  }
  return out;
}

}  // namespace quadrics
