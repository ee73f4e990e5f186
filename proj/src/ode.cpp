#include "quadrics/ode.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "quadrics/errors.hpp"

namespace quadrics {

namespace {

Eigen::VectorXd pack(const SystemState& st) {
  const int n = st.dim();
  Eigen::VectorXd y(2 * n + 2);
  y.head(n) = st.p;
  y.segment(n, n) = st.R;
  y[2 * n] = st.r;
  y[2 * n + 1] = st.rprime;
  return y;
}

SystemState unpack(double s, const Eigen::VectorXd& y) {
  const int n = (static_cast<int>(y.size()) - 2) / 2;
  SystemState st;
  st.s = s;
  st.p = y.head(n);
  st.R = y.segment(n, n);
  st.r = y[2 * n];
  st.rprime = y[2 * n + 1];
  return st;
}

}  // namespace

FieldDerivative vector_field(const HessianCoefficients& h, const SystemState& st) {
  const int n = st.dim();
  if (h.n() != n) throw std::invalid_argument("vector_field: dimension mismatch");
  const PolyValue F = h.F(st.p);
  if (F.value == 0.0) throw SingularFieldError(st.s);
  const PolyValue G = h.G(st.p);

  FieldDerivative d;
  d.dp = st.R.cwiseInverse();
  d.dR = -2.0 * F.gradient / F.value;
  d.dr = st.rprime;
  d.rpp = -G.value / F.value;
  d.F = F.value;
  d.G = G.value;
  return d;
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::ReachedEnd: return "reached_end";
    case Termination::BlowUp: return "blow_up";
    case Termination::FVanished: return "f_vanished";
    case Termination::StepUnderflow: return "step_underflow";
    case Termination::BranchLoss: return "branch_loss";
  }
  return "unknown";
}

SystemState Trajectory::at(double s) const {
  if (points.empty()) throw std::out_of_range("Trajectory::at: empty trajectory");
  const bool fwd = s_back() >= s_front();
  const double lo = fwd ? s_front() : s_back();
  const double hi = fwd ? s_back() : s_front();
  if (s < lo - 1e-12 || s > hi + 1e-12)
    throw std::out_of_range("Trajectory::at: s outside stored range");
  if (points.size() == 1) return points.front().state;

  // locate the bracketing pair (samples are monotone in s)
  size_t j = 1;
  while (j + 1 < points.size() &&
         (fwd ? points[j].state.s < s : points[j].state.s > s))
    ++j;
  const TrajectoryPoint& A = points[j - 1];
  const TrajectoryPoint& B = points[j];

  const int n = A.state.dim();
  DenseStep step;
  step.s0 = A.state.s;
  step.s1 = B.state.s;
  step.y0 = pack(A.state);
  step.y1 = pack(B.state);
  step.f0.resize(2 * n + 2);
  step.f0.head(n) = A.dp;
  step.f0.segment(n, n) = A.dR;
  step.f0[2 * n] = A.state.rprime;
  step.f0[2 * n + 1] = A.rpp;
  step.f1.resize(2 * n + 2);
  step.f1.head(n) = B.dp;
  step.f1.segment(n, n) = B.dR;
  step.f1[2 * n] = B.state.rprime;
  step.f1[2 * n + 1] = B.rpp;
  return unpack(s, step.eval(s));
}

Trajectory integrate(const HessianCoefficients& h, const SystemState& init, double s_end,
                     const IntegrateOptions& opts) {
  const int n = init.dim();
  if (h.n() != n) throw std::invalid_argument("integrate: dimension mismatch");
  if (init.R.size() != n || (init.R.array() == 0.0).any())
    throw std::invalid_argument("integrate: R_i must be nonzero");
  // throws SingularFieldError if F vanishes at the seed
  const FieldDerivative d0 = vector_field(h, init);

  Trajectory traj;
  auto record = [&](const SystemState& st, const FieldDerivative& d) {
    traj.points.push_back({st, d.dp, d.dR, d.rpp, d.F, d.G});
  };
  record(init, d0);
  if (s_end == init.s) return traj;

  const double F_scale0 = std::abs(d0.F);

  auto field = [&](double /*s*/, const Eigen::VectorXd& y, Eigen::VectorXd& dy) -> bool {
    const int m = n;
    dy.resize(2 * m + 2);
    for (int i = 0; i < m; ++i) {
      if (y[m + i] == 0.0) return false;
      dy[i] = 1.0 / y[m + i];
    }
    const PolyValue F = poly_eval(h.f_coeffs(), y.head(m));
    if (F.value == 0.0) return false;
    const PolyValue G = poly_eval(h.g_coeffs(), y.head(m));
    dy.segment(m, m) = -2.0 * F.gradient / F.value;
    dy[2 * m] = y[2 * m + 1];
    dy[2 * m + 1] = -G.value / F.value;
    return dy.allFinite();
  };

  double F_prev = d0.F;
  auto on_step = [&](const DenseStep& step) -> bool {
    SystemState st = unpack(step.s1, step.y1);
    const PolyValue F = poly_eval(h.f_coeffs(), st.p);

    if (F_prev != 0.0 && F.value != 0.0 && std::signbit(F.value) != std::signbit(F_prev)) {
      // bracket the zero of F along the dense output to 1e-10 in s
      double lo = step.s0, hi = step.s1;
      while (std::abs(hi - lo) > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        const SystemState sm = unpack(mid, step.eval(mid));
        const double Fm = poly_eval(h.f_coeffs(), sm.p).value;
        if (Fm == 0.0 || std::signbit(Fm) == std::signbit(F_prev))
          lo = mid;
        else
          hi = mid;
      }
      const SystemState stop = unpack(lo, step.eval(lo));
      const PolyValue Fs = poly_eval(h.f_coeffs(), stop.p);
      FieldDerivative d;
      d.dp = stop.R.cwiseInverse();
      d.dR = (Fs.value != 0.0) ? Eigen::VectorXd(-2.0 * Fs.gradient / Fs.value)
                               : Eigen::VectorXd::Zero(n);
      d.rpp = 0.0;
      d.F = Fs.value;
      d.G = poly_eval(h.g_coeffs(), stop.p).value;
      record(stop, d);
      traj.termination = Termination::FVanished;
      traj.s_star = 0.5 * (lo + hi);
      return false;
    }
    F_prev = F.value;

    FieldDerivative d;
    d.dp = st.R.cwiseInverse();
    d.dR = -2.0 * F.gradient / F.value;
    d.G = poly_eval(h.g_coeffs(), st.p).value;
    d.rpp = -d.G / F.value;
    d.F = F.value;
    record(st, d);

    // F only collapses to zero at the boundary of the existence window; a
    // finite-s contact also forces the step size down (the field blows up
    // there), which separates it from harmless asymptotic decay of F.
    const bool step_collapsed = std::abs(step.s1 - step.s0) < 0.01 * opts.max_step;
    if (std::abs(F.value) <= opts.f_vanish_rel * F_scale0 && step_collapsed) {
      // F ~ (s* - s)^{n/(n-2)} near the contact; extrapolate s* accordingly
      const double dFds = F.gradient.dot(d.dp);
      double s_star = st.s;
      if (dFds != 0.0) {
        const double expo = (n > 2) ? static_cast<double>(n) / (n - 2) : 1.0;
        s_star = st.s - expo * F.value / dFds;
      }
      traj.termination = Termination::FVanished;
      traj.s_star = s_star;
      return false;
    }
    int jmax = 0;
    st.p.cwiseAbs().maxCoeff(&jmax);
    if (std::abs(st.p[jmax]) > opts.p_blowup) {
      traj.termination = Termination::BlowUp;
      // p_j has a simple pole: 1/p_j hits zero at s + p_j R_j
      traj.s_star = st.s + st.p[jmax] * st.R[jmax];
      return false;
    }
    return true;
  };

  OdeOptions oo{opts.rtol, opts.atol, opts.max_step};
  const DriveStatus status = drive_rk45(field, init.s, pack(init), s_end, oo, on_step);

  if (status == DriveStatus::ReachedEnd) {
    traj.termination = Termination::ReachedEnd;
  } else if (status == DriveStatus::StepUnderflow) {
    // classify the halt: p running off to infinity or F collapsing to zero
    const TrajectoryPoint& last = traj.points.back();
    traj.s_star = last.state.s;
    if (last.state.p.cwiseAbs().maxCoeff() > 0.5 * opts.p_blowup) {
      traj.termination = Termination::BlowUp;
    } else if (std::abs(last.F) < 1e-4 * F_scale0) {
      traj.termination = Termination::FVanished;
    } else {
      traj.termination = Termination::StepUnderflow;
    }
  }
  // DriveStatus::Stopped leaves the fields set by on_step.
  return traj;
}

FirstIntegrals first_integrals(const std::optional<RecursiveSpec>& spec,
                               const HessianCoefficients& h, const SystemState& st) {
  const int n = st.dim();
  const PolyValue F = h.F(st.p);
  if (F.value == 0.0) throw SingularFieldError(st.s);

  FirstIntegrals out;
  double prod_pprime = 1.0;
  double sum_logR = 0.0;
  for (int i = 0; i < n; ++i) {
    prod_pprime /= st.R[i];
    sum_logR += std::log(std::abs(st.R[i]));
  }
  out.kappa = prod_pprime / (F.value * F.value);
  out.hamiltonian = sum_logR + 2.0 * std::log(std::abs(F.value));

  if (spec) {
    XiVector xv;
    xv.xi.resize(n);
    for (int i = 0; i < n; ++i) {
      const double q = st.p[i] * st.p[i] + spec->a1 * st.p[i] + spec->a0;
      xv.xi[i] = q * st.R[i];
    }
    xv.kappa = out.kappa;
    xv.offsets = Eigen::VectorXd::Constant(n, xv.xi[0]) - xv.xi;
    out.xi = std::move(xv);
  }
  return out;
}

std::pair<double, double> xi_equation_constants(const RecursiveSpec& spec, double kappa) {
  const double k1 = spec.a1 * spec.a1 - 4.0 * spec.a0;
  const double top = spec.c_nm1 * spec.c_nm1 - spec.a1 * spec.c_nm1 * spec.c_n +
                     spec.a0 * spec.c_n * spec.c_n;
  return {k1, 4.0 * top * kappa};
}

XiRhsCheck xi_rhs_check(const RecursiveSpec& spec, const HessianCoefficients& h,
                        const SystemState& st) {
  const PolyValue F = h.F(st.p);
  if (F.value == 0.0) throw SingularFieldError(st.s);

  const FirstIntegrals fi = first_integrals(spec, h, st);
  const auto [k1, k2] = xi_equation_constants(spec, fi.kappa);

  const double q0 = st.p[0] * st.p[0] + spec.a1 * st.p[0] + spec.a0;
  const double qp0 = 2.0 * st.p[0] + spec.a1;
  const double xi_prime = (qp0 * F.value - 2.0 * q0 * F.gradient[0]) / F.value;

  double prod_xi = 1.0;
  for (int i = 0; i < st.dim(); ++i) prod_xi *= fi.xi->xi[i];

  XiRhsCheck out;
  out.xi_prime = xi_prime;
  out.k1 = k1;
  out.k2 = k2;
  out.residual = xi_prime * xi_prime - k1 - k2 * prod_xi;
  out.scale = xi_prime * xi_prime + std::abs(k1) + std::abs(k2 * prod_xi) + 1.0;
  return out;
}

InvariantDrift invariant_drift(const Trajectory& traj, const HessianCoefficients& h,
                               const std::optional<RecursiveSpec>& spec) {
  InvariantDrift out;
  if (traj.points.empty()) return out;
  const FirstIntegrals ref = first_integrals(spec, h, traj.points.front().state);
  const double xi_scale = spec ? 1.0 + std::abs(ref.xi->xi[0]) : 1.0;

  for (const auto& pt : traj.points) {
    const FirstIntegrals fi = first_integrals(spec, h, pt.state);
    out.kappa_rel = std::max(out.kappa_rel,
                             std::abs(fi.kappa / ref.kappa - 1.0));
    out.hamiltonian_abs =
        std::max(out.hamiltonian_abs, std::abs(fi.hamiltonian - ref.hamiltonian));
    if (spec) {
      const Eigen::VectorXd d = fi.xi->offsets - ref.xi->offsets;
      out.xi_offsets = std::max(out.xi_offsets, d.cwiseAbs().maxCoeff() / xi_scale);
      const XiRhsCheck chk = xi_rhs_check(*spec, h, pt.state);
      out.xi_rhs_residual =
          std::max(out.xi_rhs_residual, std::abs(chk.residual) / chk.scale);
    }
  }
  return out;
}

TrajectoryAnsatz::TrajectoryAnsatz(Trajectory traj, HessianCoefficients h)
    : traj_(std::move(traj)), h_(std::move(h)), n_(h_.n()) {
  if (traj_.points.empty()) throw std::invalid_argument("TrajectoryAnsatz: empty trajectory");
}

Interval TrajectoryAnsatz::domain() const {
  Interval iv;
  iv.lo = std::min(traj_.s_front(), traj_.s_back());
  iv.hi = std::max(traj_.s_front(), traj_.s_back());
  return iv;
}

AnsatzSample TrajectoryAnsatz::at(double s) const {
  const SystemState st = traj_.at(s);
  const FieldDerivative d = vector_field(h_, st);
  AnsatzSample a;
  a.s = s;
  a.p = st.p;
  a.pprime = d.dp;
  // p'' = 2 (p')^2 dF/dp_i / F along solutions
  const PolyValue F = h_.F(st.p);
  a.ppp.resize(n_);
  for (int i = 0; i < n_; ++i)
    a.ppp[i] = 2.0 * d.dp[i] * d.dp[i] * F.gradient[i] / F.value;
  a.r = st.r;
  a.rprime = st.rprime;
  a.rpp = d.rpp;
  return a;
}

}  // namespace quadrics
