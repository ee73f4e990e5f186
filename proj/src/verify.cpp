#include "quadrics/verify.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

#include "quadrics/arrowhead.hpp"
#include "quadrics/errors.hpp"

namespace quadrics {

GridSpec GridSpec::uniform(int n, double x_half, int x_count, double s_half, int s_count) {
  GridSpec g;
  g.x_axes.assign(n, AxisSpec{-x_half, x_half, x_count});
  g.s_axis = AxisSpec{-s_half, s_half, s_count};
  return g;
}

long GridSpec::total_points() const {
  long total = s_axis.count;
  for (const auto& ax : x_axes) total *= ax.count;
  return total;
}

namespace {

std::vector<double> axis_values(const AxisSpec& ax) {
  std::vector<double> v(ax.count);
  if (ax.count == 1) {
    v[0] = 0.5 * (ax.lo + ax.hi);
    return v;
  }
  for (int i = 0; i < ax.count; ++i)
    v[i] = ax.lo + (ax.hi - ax.lo) * i / (ax.count - 1);
  return v;
}

// Per-point data shared by all the report kinds.
struct PointEval {
  ArrowheadMatrix H;
  Eigen::VectorXd sig;  // sigma_0..sigma_{n+1} of H
};

PointEval eval_point(const AnsatzSample& samp, const Eigen::VectorXd& x) {
  PointEval pe;
  pe.H = assemble(samp.p, samp.pprime, samp.ppp, samp.qprime, samp.qpp, samp.rpp, x);
  pe.sig = sigma_all(pe.H);
  return pe;
}

struct Partial {
  double max_abs = 0.0;
  double scaled_max = -1.0;
  Eigen::VectorXd argmax;
  double min_re = std::numeric_limits<double>::infinity();
  double phase_min = std::numeric_limits<double>::infinity();
  double phase_max = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd at_phase_min, at_phase_max;
  double xi0_max = 0.0, xii_max = 0.0;
  double disagreement = 0.0;
  double last_slice_s = std::numeric_limits<double>::quiet_NaN();
  long points = 0;
  std::exception_ptr error;
};

// Visits every grid point; fn(point_index, sample, x, partial). The sweep is
// split over s-slices when several threads are requested. Beyond six axes the
// tensor grid is replaced by seeded Monte-Carlo draws from the same box.
template <typename Fn>
std::vector<Partial> sweep(const AnsatzSampler& sampler, const GridSpec& grid,
                           const VerifyOptions& opts, Fn&& fn) {
  const int n = sampler.dim();
  if (static_cast<int>(grid.x_axes.size()) != n)
    throw std::invalid_argument("grid has wrong number of x axes");

  const bool monte_carlo = n + 1 > 6;
  if (monte_carlo) {
    std::vector<Partial> parts(1);
    std::mt19937_64 rng(opts.seed);
    Eigen::VectorXd x(n);
    for (int pt = 0; pt < opts.mc_points; ++pt) {
      std::uniform_real_distribution<double> us(grid.s_axis.lo, grid.s_axis.hi);
      const double s = us(rng);
      for (int j = 0; j < n; ++j) {
        std::uniform_real_distribution<double> ux(grid.x_axes[j].lo, grid.x_axes[j].hi);
        x[j] = ux(rng);
      }
      const AnsatzSample samp = sampler.at(s);
      fn(static_cast<long>(pt), samp, x, parts[0]);
    }
    return parts;
  }

  const std::vector<double> s_values = axis_values(grid.s_axis);
  std::vector<std::vector<double>> xs(n);
  long x_total = 1;
  for (int j = 0; j < n; ++j) {
    xs[j] = axis_values(grid.x_axes[j]);
    x_total *= grid.x_axes[j].count;
  }

  const int nthreads =
      std::max(1, std::min(opts.threads, static_cast<int>(s_values.size())));
  std::vector<Partial> parts(nthreads);

  auto work = [&](int tid) {
    Partial& part = parts[tid];
    try {
      Eigen::VectorXd x(n);
      for (size_t is = tid; is < s_values.size(); is += nthreads) {
        const AnsatzSample samp = sampler.at(s_values[is]);
        for (long lin = 0; lin < x_total; ++lin) {
          long rest = lin;
          for (int j = n - 1; j >= 0; --j) {
            x[j] = xs[j][rest % grid.x_axes[j].count];
            rest /= grid.x_axes[j].count;
          }
          fn(static_cast<long>(is) * x_total + lin, samp, x, part);
        }
      }
    } catch (...) {
      part.error = std::current_exception();
    }
  };

  if (nthreads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  for (const auto& part : parts)
    if (part.error) std::rethrow_exception(part.error);
  return parts;
}

void note_residual(Partial& part, double resid, double scale, const AnsatzSample& samp,
                   const Eigen::VectorXd& x) {
  part.points++;
  part.max_abs = std::max(part.max_abs, std::abs(resid));
  const double scaled = std::abs(resid) / scale;
  if (scaled > part.scaled_max) {
    part.scaled_max = scaled;
    part.argmax.resize(x.size() + 1);
    part.argmax.head(x.size()) = x;
    part.argmax[x.size()] = samp.s;
  }
}

void note_phase(Partial& part, double ph, const AnsatzSample& samp, const Eigen::VectorXd& x) {
  if (ph < part.phase_min) {
    part.phase_min = ph;
    part.at_phase_min.resize(x.size() + 1);
    part.at_phase_min.head(x.size()) = x;
    part.at_phase_min[x.size()] = samp.s;
  }
  if (ph > part.phase_max) {
    part.phase_max = ph;
    part.at_phase_max.resize(x.size() + 1);
    part.at_phase_max.head(x.size()) = x;
    part.at_phase_max[x.size()] = samp.s;
  }
}

ResidualReport merge(const std::vector<Partial>& parts, int n) {
  ResidualReport rep;
  rep.n = n;
  rep.min_re = std::numeric_limits<double>::infinity();
  rep.phase_min = std::numeric_limits<double>::infinity();
  rep.phase_max = -std::numeric_limits<double>::infinity();
  double best = -1.0;
  for (const auto& part : parts) {
    rep.points += part.points;
    rep.max_abs_residual = std::max(rep.max_abs_residual, part.max_abs);
    if (part.scaled_max > best) {
      best = part.scaled_max;
      rep.argmax_point = part.argmax;
    }
    rep.min_re = std::min(rep.min_re, part.min_re);
    rep.phase_min = std::min(rep.phase_min, part.phase_min);
    rep.phase_max = std::max(rep.phase_max, part.phase_max);
    rep.xi0_max = std::max(rep.xi0_max, part.xi0_max);
    rep.xii_max = std::max(rep.xii_max, part.xii_max);
    rep.method_disagreement = std::max(rep.method_disagreement, part.disagreement);
  }
  rep.scaled_max = std::max(best, 0.0);
  if (!std::isfinite(rep.phase_min)) rep.phase_min = rep.phase_max = 0.0;
  return rep;
}

}  // namespace

ResidualReport hessian_residual(const HessianCoefficients& h, const AnsatzSampler& sampler,
                                const GridSpec& grid, const VerifyOptions& opts) {
  const int n = sampler.dim();
  if (h.n() != n) throw std::invalid_argument("hessian_residual: dimension mismatch");
  const Eigen::VectorXd fc = h.f_coeffs();

  std::vector<double> points;
  if (opts.keep_points) points.assign(grid.total_points(), 0.0);

  auto fn = [&](long idx, const AnsatzSample& samp, const Eigen::VectorXd& x, Partial& part) {
    const PointEval pe = eval_point(samp, x);
    double resid = h.c(-1);
    double scale = 1.0 + std::abs(h.c(-1));
    for (int k = 0; k <= n; ++k) {
      const double term = h.c(k) * pe.sig[k + 1];
      resid += term;
      scale += std::abs(term);
    }
    note_residual(part, resid, scale, samp, x);
    if (opts.keep_points) points[idx] = resid;

    if (opts.with_phase) note_phase(part, phase(pe.H), samp, x);

    // per-slice split: the s-only part and the coefficients of x_i and x_i^2
    // must vanish separately
    if (samp.s != part.last_slice_s) {
      part.last_slice_s = samp.s;
      const PolyValue F = h.F(samp.p);
      const PolyValue G = h.G(samp.p);
      double xi0 = G.value + F.value * samp.rpp;
      double xi0_scale = 1.0 + std::abs(G.value) + std::abs(F.value * samp.rpp);
      if (samp.has_linear()) {
        for (int j = 0; j < n; ++j) {
          const double t = samp.qprime[j] * samp.qprime[j] * F.gradient[j];
          xi0 -= t;
          xi0_scale += std::abs(t);
        }
      }
      part.xi0_max = std::max(part.xi0_max, std::abs(xi0) / xi0_scale);
      for (int i = 0; i < n; ++i) {
        const double xii = 0.5 * F.value * samp.ppp[i] -
                           F.gradient[i] * samp.pprime[i] * samp.pprime[i];
        const double xii_scale = 1.0 + 0.5 * std::abs(F.value * samp.ppp[i]) +
                                 std::abs(F.gradient[i]) * samp.pprime[i] * samp.pprime[i];
        part.xii_max = std::max(part.xii_max, std::abs(xii) / xii_scale);
        if (samp.has_linear()) {
          const double lin = F.value * samp.qpp[i] -
                             2.0 * samp.pprime[i] * samp.qprime[i] * F.gradient[i];
          const double lin_scale = 1.0 + std::abs(F.value * samp.qpp[i]) +
                                   2.0 * std::abs(samp.pprime[i] * samp.qprime[i] *
                                                  F.gradient[i]);
          part.xii_max = std::max(part.xii_max, std::abs(lin) / lin_scale);
        }
      }
    }
  };

  ResidualReport rep = merge(sweep(sampler, grid, opts, fn), n);
  rep.point_residuals = std::move(points);
  return rep;
}

ResidualReport lyz_residual(double theta, const AnsatzSampler& sampler, const GridSpec& grid,
                            const VerifyOptions& opts) {
  const int n = sampler.dim();
  const std::complex<double> rot = std::polar(1.0, -theta);
  const std::complex<double> iunit(0.0, 1.0);

  std::vector<double> points;
  if (opts.keep_points) points.assign(grid.total_points(), 0.0);

  auto fn = [&](long idx, const AnsatzSample& samp, const Eigen::VectorXd& x, Partial& part) {
    const PointEval pe = eval_point(samp, x);

    // closed-form route from the product and its reduced factors
    std::complex<double> prod(1.0, 0.0);
    for (int j = 0; j < n; ++j) prod *= std::complex<double>(1.0, samp.p[j]);
    std::complex<double> det_a = prod * (1.0 + iunit * pe.H.R);
    for (int j = 0; j < n; ++j) {
      const double Qj = pe.H.Q[j].real();
      det_a += Qj * Qj * prod / std::complex<double>(1.0, samp.p[j]);
    }

    // characteristic-polynomial route
    std::complex<double> det_b(0.0, 0.0);
    std::complex<double> ipow(1.0, 0.0);
    double sig_scale = 1.0;
    for (int k = 0; k <= n + 1; ++k) {
      det_b += ipow * pe.sig[k];
      sig_scale += std::abs(pe.sig[k]);
      ipow *= iunit;
    }

    const std::complex<double> za = rot * det_a;
    const std::complex<double> zb = rot * det_b;
    const double disagreement = std::abs(za - zb) / (1.0 + std::abs(za));
    part.disagreement = std::max(part.disagreement, disagreement);
    if (disagreement > opts.consistency_tol)
      throw InternalInconsistencyError("determinant routes disagree at a grid point");

    const double resid = std::max(std::abs(za.imag()), std::abs(zb.imag()));
    note_residual(part, resid, sig_scale, samp, x);
    if (opts.keep_points) points[idx] = zb.imag();

    part.min_re = std::min(part.min_re, za.real());
    if (opts.with_phase) note_phase(part, phase(pe.H), samp, x);
  };

  ResidualReport rep = merge(sweep(sampler, grid, opts, fn), n);
  rep.positivity_ok = rep.min_re > 0.0;
  rep.point_residuals = std::move(points);
  return rep;
}

PhaseScan phase_scan(const AnsatzSampler& sampler, const GridSpec& grid,
                     const VerifyOptions& opts) {
  auto fn = [&](long, const AnsatzSample& samp, const Eigen::VectorXd& x, Partial& part) {
    const PointEval pe = eval_point(samp, x);
    note_phase(part, phase(pe.H), samp, x);
    part.points++;
  };
  const std::vector<Partial> parts = sweep(sampler, grid, opts, fn);

  PhaseScan scan;
  scan.phase_min = std::numeric_limits<double>::infinity();
  scan.phase_max = -std::numeric_limits<double>::infinity();
  for (const auto& part : parts) {
    if (part.phase_min < scan.phase_min) {
      scan.phase_min = part.phase_min;
      scan.at_min = part.at_phase_min;
    }
    if (part.phase_max > scan.phase_max) {
      scan.phase_max = part.phase_max;
      scan.at_max = part.at_phase_max;
    }
  }
  return scan;
}

}  // namespace quadrics
