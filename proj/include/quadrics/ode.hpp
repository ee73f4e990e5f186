#ifndef QUADRICS_ODE_HPP
#define QUADRICS_ODE_HPP

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "quadrics/ansatz.hpp"
#include "quadrics/equations.hpp"
#include "quadrics/rk45.hpp"

namespace quadrics {

// State of the first-order reduction
//   p_i' = 1 / R_i,   R_i' = -2 d(log F)/dp_i,   r'' = -G / F
// with R_i = 1 / p_i'.
struct SystemState {
  double s = 0.0;
  Eigen::VectorXd p, R;
  double r = 0.0, rprime = 0.0;

  int dim() const { return static_cast<int>(p.size()); }
};

struct FieldDerivative {
  Eigen::VectorXd dp, dR;
  double dr = 0.0;
  double rpp = 0.0;  // = -G/F, the r' derivative
  double F = 0.0, G = 0.0;
};

/// Throws SingularFieldError when F(p) = 0.
FieldDerivative vector_field(const HessianCoefficients& h, const SystemState& st);

enum class Termination { ReachedEnd, BlowUp, FVanished, StepUnderflow, BranchLoss };
const char* to_string(Termination t);

struct TrajectoryPoint {
  SystemState state;
  Eigen::VectorXd dp, dR;
  double rpp = 0.0, F = 0.0, G = 0.0;
};

struct Trajectory {
  std::vector<TrajectoryPoint> points;
  Termination termination = Termination::ReachedEnd;
  double s_star = std::numeric_limits<double>::quiet_NaN();
  std::string diagnostic;

  bool empty() const { return points.empty(); }
  double s_front() const { return points.front().state.s; }
  double s_back() const { return points.back().state.s; }
  /// Cubic Hermite interpolation between stored samples.
  SystemState at(double s) const;
};

struct IntegrateOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double max_step = 0.05;
  // |p| cutoff declaring a pole. First-integral evaluation loses eps * |p|^2
  // of relative accuracy to cancellation near a pole, so the cutoff stays low
  // and s_star is reported through the simple-pole extrapolation instead.
  double p_blowup = 1e6;
  // |F| <= f_vanish_rel * |F(init)| ends the trajectory: F only reaches zero
  // at the boundary of the maximal existence window, never transversally.
  // Below this level the first integrals are no longer evaluable in double
  // precision (the absolute rounding of F dominates).
  double f_vanish_rel = 1e-7;
};

/// Integrates from init.s toward s_end (either direction), terminating early
/// on blow-up, on a sign change of F (bisected to 1e-10 in s), or on step
/// underflow near a singularity.
Trajectory integrate(const HessianCoefficients& h, const SystemState& init, double s_end,
                     const IntegrateOptions& opts = {});

// First integrals of the recursive case: xi_i = (p_i^2 + a1 p_i + a0) / p_i',
// with offsets kappa_j = xi_1 - xi_j and kappa = prod p_i' / F^2.
struct XiVector {
  Eigen::VectorXd xi;
  double kappa = 0.0;
  Eigen::VectorXd offsets;  // offsets[0] = 0
};

struct FirstIntegrals {
  double kappa = 0.0;
  double hamiltonian = 0.0;  // sum log|R_i| + 2 log|F|
  std::optional<XiVector> xi;
};

FirstIntegrals first_integrals(const std::optional<RecursiveSpec>& spec,
                               const HessianCoefficients& h, const SystemState& st);

// Residual of (xi_1')^2 = k1 + k2 prod_j xi_j with k1 = a1^2 - 4 a0 and
// k2 = 4 (c_{n-1}^2 - a1 c_{n-1} c_n + a0 c_n^2) kappa, where xi_1' is
// evaluated through the vector field by the chain rule.
struct XiRhsCheck {
  double residual = 0.0;
  double scale = 1.0;
  double xi_prime = 0.0;
  double k1 = 0.0, k2 = 0.0;
};

XiRhsCheck xi_rhs_check(const RecursiveSpec& spec, const HessianCoefficients& h,
                        const SystemState& st);

/// k1, k2 of the scalar xi equation for a given spec and conserved kappa.
std::pair<double, double> xi_equation_constants(const RecursiveSpec& spec, double kappa);

// Largest drifts of the conserved quantities over a trajectory, relative to
// the first sample.
struct InvariantDrift {
  double kappa_rel = 0.0;
  double hamiltonian_abs = 0.0;
  double xi_offsets = 0.0;      // scaled by 1 + |xi_1(0)|
  double xi_rhs_residual = 0.0; // scaled
};

InvariantDrift invariant_drift(const Trajectory& traj, const HessianCoefficients& h,
                               const std::optional<RecursiveSpec>& spec);

// Adapter exposing an integrated trajectory as an ansatz sampler (no linear
// terms; p'' taken from the field).
class TrajectoryAnsatz final : public AnsatzSampler {
 public:
  TrajectoryAnsatz(Trajectory traj, HessianCoefficients h);
  int dim() const override { return n_; }
  double theta() const override { return std::numeric_limits<double>::quiet_NaN(); }
  Interval domain() const override;
  AnsatzSample at(double s) const override;

 private:
  Trajectory traj_;
  HessianCoefficients h_;
  int n_;
};

}  // namespace quadrics

#endif
