#ifndef QUADRICS_SLAG_HPP
#define QUADRICS_SLAG_HPP

#include <complex>
#include <vector>

#include <Eigen/Core>

#include "quadrics/ansatz.hpp"
#include "quadrics/rk45.hpp"
#include "quadrics/verify.hpp"

namespace quadrics {

/// Im(e^{-i theta} det(I + i Hess f)) of the real ansatz over a grid, through
/// the symmetric-function expansion of the arrowhead Hessian.
ResidualReport slag_residual(double theta, const AnsatzSampler& sampler, const GridSpec& grid,
                             const VerifyOptions& opts = {});

/// Gradient graph of f in C^{n+1}:
///   ( (1 + i p_1) x_1 + i q_1, ..., s + i (1/2 sum x_j^2 p_j' + sum q_j' x_j + r') ).
Eigen::VectorXcd graph_map(const AnsatzSample& a, const Eigen::Ref<const Eigen::VectorXd>& x);

// Evolving-quadric data. The parameter along the family is t = sqrt(kappa) s;
// the quadric coordinates (called zeta here) are zeta_j = sqrt(p_j') x_j.
struct JoyceState {
  double t = 0.0;
  Eigen::VectorXcd w;
  std::complex<double> beta;

  int n() const { return static_cast<int>(w.size()); }
};

/// The angle that the correspondence requires: e^{i theta} i^n = -i.
double joyce_required_theta(int n);

/// w_j = i (1 + i p_j) / sqrt(p_j'), beta = i (s + i r').
/// Throws NotApplicableError when kappa <= 0 or some p_j' <= 0, and
/// AngleMismatchError when e^{i theta} i^n != -i.
JoyceState joyce_map(const AnsatzSample& a, double kappa, double theta);

struct JoyceResidual {
  double w_residual = 0.0;     // max_j |dw_j/dt - conj(prod_{k!=j} w_k)|
  double beta_residual = 0.0;  // |dbeta/dt - conj(prod_k w_k)|
};

/// Derivatives are evaluated analytically from the sample (p'', r'') by the
/// chain rule through t = sqrt(kappa) s.
JoyceResidual joyce_residual_at(const AnsatzSample& a, double kappa, double theta);

/// Max of joyce_residual_at over uniformly spaced samples of [s_lo, s_hi].
JoyceResidual joyce_residual(const AnsatzSampler& sampler, double kappa, double theta,
                             double s_lo, double s_hi, int samples);

/// Point of the quadric: (w_1 zeta_1, ..., w_n zeta_n, -|zeta|^2/2 + beta).
/// With joyce_map inputs, graph_map + i * quadric_point = 0.
Eigen::VectorXcd quadric_point(const JoyceState& js,
                               const Eigen::Ref<const Eigen::VectorXd>& zeta);

// Direct integration of the quadric evolution
//   dw_j/dt = conj(prod_{k!=j} w_k),   dbeta/dt = conj(prod_k w_k),
// which continues the submanifold across points where the graphical chart
// blows up.
struct QuadricFlow {
  struct Node {
    double t;
    Eigen::VectorXcd w, dw;
    std::complex<double> beta, dbeta;
  };
  std::vector<Node> nodes;  // monotone in t
  bool reached_end = true;

  JoyceState at(double t) const;  // Hermite interpolation
  double min_abs_w() const;       // smallest |w_j| over the stored nodes
};

QuadricFlow evolve_quadrics(const JoyceState& init, double t_end, const OdeOptions& opts = {});

/// det of the tangent frame (d/d zeta_1, ..., d/d zeta_n, d/dt) of the quadric
/// at (state, zeta), with the t-derivatives taken from the evolution equation.
/// Vanishing imaginary part is the calibration (special Lagrangian) condition.
std::complex<double> frame_determinant(const JoyceState& js,
                                       const Eigen::Ref<const Eigen::VectorXd>& zeta);

}  // namespace quadrics

#endif
