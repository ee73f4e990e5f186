#include "quadrics/dhym.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "quadrics/errors.hpp"

namespace quadrics {

FThetaValue f_theta(const ThetaSystem& ts, const Eigen::Ref<const Eigen::VectorXd>& p) {
  const int n = static_cast<int>(p.size());
  if (n != ts.n) throw std::invalid_argument("f_theta: dimension mismatch");

  std::complex<double> prod(1.0, 0.0);
  for (int j = 0; j < n; ++j) prod *= std::complex<double>(1.0, p[j]);

  const std::complex<double> rot = std::polar(1.0, -ts.theta);
  FThetaValue out;
  out.product = prod;
  out.f = (rot * prod).real();
  out.f_perp = (rot * prod).imag();
  out.grad.resize(n);
  for (int j = 0; j < n; ++j) {
    // d prod / dp_j = i * prod / (1 + i p_j); |1 + i p_j| >= 1
    const std::complex<double> reduced = prod / std::complex<double>(1.0, p[j]);
    out.grad[j] = (rot * std::complex<double>(0.0, 1.0) * reduced).real();
  }
  return out;
}

namespace {

// cos(theta - k pi/2) with the quarter turns applied exactly, so that
// vanishing coefficients come out as exact zeros
double quarter_cos(double theta, int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return std::cos(theta);
    case 1: return std::sin(theta);
    case 2: return -std::cos(theta);
    default: return -std::sin(theta);
  }
}

}  // namespace

HessianCoefficients theta_to_coefficients(const ThetaSystem& ts) {
  Eigen::VectorXd full(ts.n + 2);
  for (int k = -1; k <= ts.n; ++k) full[k + 1] = quarter_cos(ts.theta, k);
  return HessianCoefficients(ts.n, std::move(full));
}

RecursiveSpec theta_to_spec(const ThetaSystem& ts) {
  RecursiveSpec spec;
  spec.n = ts.n;
  spec.a0 = 1.0;
  spec.a1 = 0.0;
  spec.c_n = quarter_cos(ts.theta, ts.n);
  spec.c_nm1 = quarter_cos(ts.theta, ts.n - 1);
  spec.c_m1 = quarter_cos(ts.theta, -1);
  return spec;
}

AngleIdentityResiduals angle_identity_residuals(const ThetaSystem& ts,
                                                const Eigen::Ref<const Eigen::VectorXd>& p) {
  const FThetaValue base = f_theta(ts, p);
  const FThetaValue anti = f_theta({ts.n, ts.theta + M_PI}, p);

  AngleIdentityResiduals out;
  out.antipodal = base.f + anti.f;

  double prod = 1.0;
  for (int j = 0; j < ts.n; ++j) prod *= 1.0 + p[j] * p[j];
  out.pythagorean = base.f * base.f + base.f_perp * base.f_perp - prod;

  for (int j = 0; j < ts.n; ++j) {
    const double r =
        p[j] * base.f - (1.0 + p[j] * p[j]) * base.grad[j] - base.f_perp;
    out.gradient_shift = std::max(out.gradient_shift, std::abs(r));
  }
  return out;
}

double IsotropicFlow::phi_at(double s) const {
  if (samples.empty()) throw std::out_of_range("IsotropicFlow: no samples");
  if (s <= samples.front().s) return samples.front().phi;
  if (s >= samples.back().s) return samples.back().phi;
  size_t j = 1;
  while (j + 1 < samples.size() && samples[j].s < s) ++j;
  const Sample& A = samples[j - 1];
  const Sample& B = samples[j];
  const double h = B.s - A.s;
  const double t = (s - A.s) / h;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * A.phi + (t3 - 2 * t2 + t) * h * A.dphi +
         (-2 * t3 + 3 * t2) * B.phi + (t3 - t2) * h * B.dphi;
}

double IsotropicFlow::rpp_at(double s) const {
  return std::tan(theta - n * phi_at(s));
}

IsotropicFlow isotropic_flow(int n, double theta, double phi0, double kappa_prime,
                             double s_max, const OdeOptions& opts) {
  if (n < 1) throw std::invalid_argument("isotropic_flow: n must be >= 1");
  const double u0 = n * phi0 - theta;
  if (std::cos(u0) <= 0.0)
    throw InvalidStartError("isotropic_flow: cos(n phi - theta) must be positive");

  IsotropicFlow flow;
  flow.n = n;
  flow.theta = theta;
  flow.kappa_prime = kappa_prime;
  // u0 lies in a cos > 0 branch, so u0/pi rounds to an even integer
  flow.branch_k = static_cast<int>(std::lround(u0 / M_PI));

  // integrate u' = kappa' cos(u)^{2/n}; the flow is frozen for kappa' = 0
  auto field = [&](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) -> bool {
    const double c = std::cos(y[0]);
    if (c <= 0.0) return false;
    dy.resize(1);
    dy[0] = kappa_prime * std::pow(c, 2.0 / n);
    return true;
  };

  // Remaining time to the cos(u) = 0 boundary from u:
  // int_0^{|du|} dv / (|kappa'| sin(v)^{2/n}), finite exactly when n >= 3.
  auto tail_time = [&](double u) {
    const double target = std::round(u / M_PI - 0.5) * M_PI + M_PI_2;
    const double expo = 1.0 - 2.0 / n;
    return std::pow(std::abs(target - u), expo) / (std::abs(kappa_prime) * expo);
  };

  auto run = [&](double dir) {
    std::vector<IsotropicFlow::Sample> out;
    std::optional<double> hit;
    Eigen::VectorXd y0(1);
    y0[0] = u0;
    const double du0 = kappa_prime * std::pow(std::cos(u0), 2.0 / n);
    out.push_back({0.0, phi0, du0 / n});

    auto on_step = [&](const DenseStep& step) -> bool {
      const double u = step.y1[0];
      out.push_back({step.s1, (u + theta) / n, step.f1[0] / n});
      // boundary contact happens at finite s only when the exponent 2/n < 1
      if (n >= 3 && kappa_prime != 0.0 && std::cos(u) <= 1e-9) {
        hit = step.s1 + dir * tail_time(u);
        return false;
      }
      return true;
    };
    const DriveStatus st = drive_rk45(field, 0.0, y0, dir * s_max, opts, on_step);
    if (!hit && st == DriveStatus::StepUnderflow && n >= 3 && kappa_prime != 0.0) {
      hit = out.back().s + dir * tail_time(n * out.back().phi - theta);
    }
    return std::make_pair(out, hit);
  };

  auto [fwd, hit_f] = run(+1.0);
  auto [bwd, hit_b] = run(-1.0);
  flow.hit_forward = hit_f;
  flow.hit_backward = hit_b;

  std::reverse(bwd.begin(), bwd.end());
  bwd.pop_back();  // drop the duplicated s = 0 sample
  flow.samples = std::move(bwd);
  flow.samples.insert(flow.samples.end(), fwd.begin(), fwd.end());
  return flow;
}

double isotropic_n2_closed_form(double u0, double kappa_prime, double s) {
  // u' = kappa' cos u  =>  tan(u/2 + pi/4) = e^{kappa' s} tan(u0/2 + pi/4)
  const double t0 = std::tan(0.5 * u0 + M_PI_4);
  return 2.0 * std::atan(std::exp(kappa_prime * s) * t0) - M_PI_2;
}

}  // namespace quadrics
