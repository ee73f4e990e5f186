#include "quadrics/nonrec3.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "quadrics/errors.hpp"

namespace quadrics {

std::vector<double> cubic_real_roots(double b, double c, double d) {
  // depressed form y^3 + p y + q, x = y - b/3
  const double p = c - b * b / 3.0;
  const double q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
  const double shift = -b / 3.0;
  std::vector<double> roots;

  const double disc = -4.0 * p * p * p - 27.0 * q * q;
  if (disc >= 0.0 && p < 0.0) {
    const double m = 2.0 * std::sqrt(-p / 3.0);
    double arg = 3.0 * q / (p * m);
    arg = std::clamp(arg, -1.0, 1.0);
    const double phi = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k)
      roots.push_back(shift + m * std::cos(phi - 2.0 * M_PI * k / 3.0));
  } else {
    // single real root via Cardano
    const double half_q = q / 2.0;
    const double inner = half_q * half_q + p * p * p / 27.0;
    const double sq = std::sqrt(std::max(inner, 0.0));
    const double u = std::cbrt(-half_q + sq);
    const double v = std::cbrt(-half_q - sq);
    roots.push_back(shift + u + v);
  }

  // Newton polish on the original cubic
  for (double& x : roots) {
    for (int it = 0; it < 4; ++it) {
      const double f = ((x + b) * x + c) * x + d;
      const double df = (3.0 * x + 2.0 * b) * x + c;
      if (df == 0.0) break;
      x -= f / df;
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

NonRec3Detection detect3(const HessianCoefficients& h) {
  if (h.n() != 3) throw std::invalid_argument("detect3: n must be 3");
  const double c1 = h.c(1), c2 = h.c(2), c3 = h.c(3);
  const double cmax = h.f_coeffs().cwiseAbs().maxCoeff();
  const double deg = c3 * c1 - c2 * c2;

  NonRec3Detection out;
  if (std::abs(deg) > 1e-9 * cmax * cmax) {
    out.recursive = true;
    out.recursion = detect_recursive(h);
    return out;
  }
  NonRec3Case cs{NonRec3Kind::CubicShift, 0.0, h};
  if (std::abs(c3) > 1e-12 * cmax) {
    cs.kind = NonRec3Kind::CubicShift;
    cs.a = c2 / c3;
  } else {
    cs.kind = NonRec3Kind::Linear;
  }
  out.degenerate = std::move(cs);
  return out;
}

double tracked_value(const NonRec3Case& cs, const SystemState& st) {
  if (cs.kind == NonRec3Kind::CubicShift) return (st.p[0] + cs.a) * st.R[0];
  return st.R[0];
}

std::pair<double, double> first_integrals3(const NonRec3Case& cs, const SystemState& st) {
  auto xi = [&](int j) {
    return cs.kind == NonRec3Kind::CubicShift ? (st.p[j] + cs.a) * st.R[j] : st.R[j];
  };
  return {xi(0) - xi(1), xi(0) - xi(2)};
}

NonRec3Constants nonrec3_constants(const NonRec3Case& cs, const SystemState& st) {
  const double F = cs.h.F(st.p).value;
  NonRec3Constants k;
  k.c = st.R[0] * st.R[1] * st.R[2] * F * F;
  const auto [i2, i3] = first_integrals3(cs, st);
  k.k2 = i2;
  k.k3 = i3;
  return k;
}

double track_root(const NonRec3Case& cs, const NonRec3Constants& constants,
                  const Eigen::Ref<const Eigen::VectorXd>& p, double s,
                  RootBranch& branch) {
  const double F = cs.h.F(p).value;
  if (F == 0.0) throw SingularFieldError(s, "track_root: F vanished");

  double rhs = constants.c / (F * F);
  if (cs.kind == NonRec3Kind::CubicShift)
    rhs *= (p[0] + cs.a) * (p[1] + cs.a) * (p[2] + cs.a);

  // eta (eta - k2)(eta - k3) = rhs
  const double b = -(constants.k2 + constants.k3);
  const double c = constants.k2 * constants.k3;
  const std::vector<double> roots = cubic_real_roots(b, c, -rhs);

  const double ds = s - branch.s;
  const double predicted = branch.value + branch.velocity * ds;
  double best = roots[0];
  double best_dist = std::abs(roots[0] - predicted);
  double second = std::numeric_limits<double>::infinity();
  for (size_t i = 1; i < roots.size(); ++i) {
    const double dist = std::abs(roots[i] - predicted);
    if (dist < best_dist) {
      second = best_dist;
      best = roots[i];
      best_dist = dist;
    } else {
      second = std::min(second, dist);
    }
  }
  // near a fold the prediction must separate the meeting pair decisively;
  // the integrator backs off its step until it does, and a tangential
  // collision (stalled prediction) stays ambiguous at every step size
  if (std::isfinite(second) && second < 3.0 * best_dist + 1e-12 * (1.0 + std::abs(best)))
    throw BranchLossError("track_root: ambiguous branch at a root collision");
  // a jump far beyond the prediction scale is a lost branch, not a step
  const double window =
      10.0 * std::abs(branch.velocity * ds) + 0.25 * (1.0 + std::abs(predicted));
  if (best_dist > window) throw BranchLossError("track_root: root jumped outside the window");

  if (ds != 0.0) branch.velocity = (best - branch.value) / ds;
  branch.value = best;
  branch.s = s;
  return best;
}

Trajectory integrate3(const NonRec3Case& cs, const SystemState& init, double s_end,
                      const IntegrateOptions& opts) {
  if (init.dim() != 3) throw std::invalid_argument("integrate3: state must have n = 3");
  const HessianCoefficients& h = cs.h;
  const NonRec3Constants constants = nonrec3_constants(cs, init);

  RootBranch branch{tracked_value(cs, init), 0.0, init.s};
  const double eta0 = track_root(cs, constants, init.p, init.s, branch);
  (void)eta0;

  auto offsets = [&](int j) { return j == 0 ? 0.0 : (j == 1 ? constants.k2 : constants.k3); };

  auto derive = [&](const Eigen::VectorXd& p, double eta, Eigen::Vector3d& dp) -> bool {
    for (int j = 0; j < 3; ++j) {
      const double denom = eta - offsets(j);
      if (denom == 0.0) return false;
      dp[j] = cs.kind == NonRec3Kind::CubicShift ? (p[j] + cs.a) / denom : 1.0 / denom;
    }
    return true;
  };

  Trajectory traj;
  auto record = [&](const SystemState& st, double eta) {
    TrajectoryPoint pt;
    pt.state = st;
    const PolyValue F = h.F(st.p);
    const PolyValue G = h.G(st.p);
    Eigen::Vector3d dp;
    derive(st.p, eta, dp);
    pt.dp = dp;
    pt.dR = -2.0 * F.gradient / F.value;
    pt.F = F.value;
    pt.G = G.value;
    pt.rpp = -G.value / F.value;
    traj.points.push_back(std::move(pt));
  };

  auto state_from = [&](double s, const Eigen::VectorXd& y, double eta) {
    SystemState st;
    st.s = s;
    st.p = y.head(3);
    st.R.resize(3);
    for (int j = 0; j < 3; ++j) {
      const double denom = cs.kind == NonRec3Kind::CubicShift ? st.p[j] + cs.a : 1.0;
      st.R[j] = (eta - offsets(j)) / denom;
    }
    st.r = y[3];
    st.rprime = y[4];
    return st;
  };

  record(init, branch.value);
  if (s_end == init.s) return traj;

  auto field = [&](double s, const Eigen::VectorXd& y, Eigen::VectorXd& dy) -> bool {
    double eta;
    try {
      RootBranch probe = branch;  // stages never move the witness
      eta = track_root(cs, constants, y.head(3), s, probe);
    } catch (const BranchLossError&) {
      return false;
    } catch (const SingularFieldError&) {
      return false;
    }
    Eigen::Vector3d dp;
    if (!derive(y.head(3), eta, dp)) return false;
    const PolyValue F = poly_eval(h.f_coeffs(), y.head(3));
    if (F.value == 0.0) return false;
    const PolyValue G = poly_eval(h.g_coeffs(), y.head(3));
    dy.resize(5);
    dy.head(3) = dp;
    dy[3] = y[4];
    dy[4] = -G.value / F.value;
    return dy.allFinite();
  };

  double F_prev = h.F(init.p).value;
  const double F_scale0 = std::abs(F_prev);

  auto on_step = [&](const DenseStep& step) -> bool {
    double eta;
    try {
      eta = track_root(cs, constants, step.y1.head(3), step.s1, branch);
    } catch (const BranchLossError& e) {
      traj.termination = Termination::BranchLoss;
      traj.diagnostic = e.what();
      traj.s_star = step.s0;
      return false;
    }
    const SystemState st = state_from(step.s1, step.y1, eta);
    const PolyValue F_val = h.F(st.p);
    const double F = F_val.value;
    if (std::signbit(F) != std::signbit(F_prev)) {
      traj.termination = Termination::FVanished;
      traj.s_star = step.s1;
      return false;
    }
    F_prev = F;
    record(st, eta);

    // finite-s contact with {F = 0}: both degenerate cases collapse like
    // F ~ (s* - s)^3 (dF/ds ~ F^{2/3} through the cubic constraint)
    const bool step_collapsed = std::abs(step.s1 - step.s0) < 0.01 * opts.max_step;
    if (std::abs(F) <= opts.f_vanish_rel * F_scale0 && step_collapsed) {
      const Eigen::Vector3d dp = Eigen::Map<const Eigen::Vector3d>(traj.points.back().dp.data());
      const double dFds = F_val.gradient.dot(dp);
      traj.termination = Termination::FVanished;
      traj.s_star = (dFds != 0.0) ? st.s - 3.0 * F / dFds : st.s;
      return false;
    }

    // p_j = -a makes xi_j vanish and the reduced chart degenerate; halt there
    if (cs.kind == NonRec3Kind::CubicShift && traj.points.size() >= 2) {
      const SystemState& prev = traj.points[traj.points.size() - 2].state;
      for (int j = 0; j < 3; ++j) {
        const double before = prev.p[j] + cs.a;
        const double after = st.p[j] + cs.a;
        if (before != 0.0 && after != 0.0 && std::signbit(before) != std::signbit(after)) {
          traj.termination = Termination::BranchLoss;
          traj.diagnostic = "p_j crossed -a: xi_j degenerates";
          traj.s_star = prev.s + (st.s - prev.s) * before / (before - after);
          return false;
        }
      }
    }

    if (st.p.cwiseAbs().maxCoeff() > opts.p_blowup) {
      traj.termination = Termination::BlowUp;
      traj.s_star = st.s;
      return false;
    }
    return true;
  };

  Eigen::VectorXd y0(5);
  y0.head(3) = init.p;
  y0[3] = init.r;
  y0[4] = init.rprime;

  OdeOptions oo{opts.rtol, opts.atol, opts.max_step};
  const DriveStatus status = drive_rk45(field, init.s, y0, s_end, oo, on_step);
  if (status == DriveStatus::ReachedEnd) {
    traj.termination = Termination::ReachedEnd;
  } else if (status == DriveStatus::StepUnderflow) {
    const TrajectoryPoint& last = traj.points.back();
    traj.s_star = last.state.s;
    bool degenerate = false;
    if (cs.kind == NonRec3Kind::CubicShift) {
      for (int j = 0; j < 3; ++j)
        if (std::abs(last.state.p[j] + cs.a) < 1e-6 * (1.0 + std::abs(last.state.p[j])))
          degenerate = true;
    }
    if (degenerate) {
      traj.termination = Termination::BranchLoss;
      traj.diagnostic = "p_j ran into -a: xi_j degenerates";
    } else if (last.state.p.cwiseAbs().maxCoeff() > 1e6) {
      traj.termination = Termination::BlowUp;
    } else if (std::abs(last.F) < 1e-6 * F_scale0) {
      traj.termination = Termination::FVanished;
    } else {
      traj.termination = Termination::StepUnderflow;
    }
  }
  return traj;
}

}  // namespace quadrics
