#ifndef QUADRICS_VERIFY_HPP
#define QUADRICS_VERIFY_HPP

#include <vector>

#include <Eigen/Core>

#include "quadrics/ansatz.hpp"
#include "quadrics/equations.hpp"

namespace quadrics {

struct AxisSpec {
  double lo = -2.0, hi = 2.0;
  int count = 21;
};

// Tensor grid over (x_1..x_n, s). Beyond six axes the full sweep is replaced
// by seeded Monte-Carlo sampling of the same box.
struct GridSpec {
  std::vector<AxisSpec> x_axes;
  AxisSpec s_axis;

  static GridSpec uniform(int n, double x_half = 2.0, int x_count = 21,
                          double s_half = 2.0, int s_count = 21);
  long total_points() const;
};

struct VerifyOptions {
  int threads = 1;
  bool with_phase = true;
  int mc_points = 10000;
  unsigned seed = 0;
  double consistency_tol = 1e-9;  // two-route agreement in lyz_residual
  bool keep_points = false;
};

struct ResidualReport {
  int n = 0;
  long points = 0;
  double max_abs_residual = 0.0;
  double scaled_max = 0.0;
  Eigen::VectorXd argmax_point;  // (x..., s) attaining the scaled maximum

  // branch data (lyz residual)
  bool positivity_ok = true;
  double min_re = 0.0;

  double phase_min = 0.0, phase_max = 0.0;

  // split of the coefficient-form residual into its s-only and x^2 parts
  double xi0_max = 0.0, xii_max = 0.0;

  // largest scaled disagreement between the two determinant routes
  double method_disagreement = 0.0;

  // row-major per-point residuals when keep_points was requested
  std::vector<double> point_residuals;
};

/// Residual of sum_k c_k sigma_{k+1}(Hessian) + c_{-1} over the grid, plus
/// the separate vanishing of its s-only and per-direction parts.
ResidualReport hessian_residual(const HessianCoefficients& h, const AnsatzSampler& sampler,
                                const GridSpec& grid, const VerifyOptions& opts = {});

/// Im(e^{-i theta} det(I + i Hessian)) over the grid, computed through the
/// closed-form product route and through the characteristic polynomial, with
/// the positivity branch from the real part. Throws InternalInconsistencyError
/// when the two routes disagree beyond opts.consistency_tol (scaled).
ResidualReport lyz_residual(double theta, const AnsatzSampler& sampler, const GridSpec& grid,
                            const VerifyOptions& opts = {});

struct PhaseScan {
  double phase_min = 0.0, phase_max = 0.0;
  Eigen::VectorXd at_min, at_max;
};

PhaseScan phase_scan(const AnsatzSampler& sampler, const GridSpec& grid,
                     const VerifyOptions& opts = {});

}  // namespace quadrics

#endif
