#ifndef QUADRICS_NONREC3_HPP
#define QUADRICS_NONREC3_HPP

#include <optional>
#include <utility>

#include "quadrics/equations.hpp"
#include "quadrics/ode.hpp"

namespace quadrics {

// n = 3 equations with c_3 c_1 = c_2^2 are the ones that escape the
// coefficient recursion; they still carry a full set of first integrals.
enum class NonRec3Kind {
  CubicShift,  // c_3 != 0, a = c_2 / c_3:  F = c_3 prod(p_j + a) + (c_0 - c_3 a^3)
  Linear,      // c_3 = 0 (hence c_2 = 0):  F = c_1 sigma_1 + c_0
};

struct NonRec3Case {
  NonRec3Kind kind = NonRec3Kind::CubicShift;
  double a = 0.0;
  HessianCoefficients h;
};

struct NonRec3Detection {
  bool recursive = false;
  DetectionResult recursion;          // when recursive
  std::optional<NonRec3Case> degenerate;  // when c_3 c_1 = c_2^2
};

/// Routes an n = 3 equation: recursive when c_3 c_1 != c_2^2, otherwise the
/// matching degenerate case. Throws for n != 3 or F identically zero.
NonRec3Detection detect3(const HessianCoefficients& h);

// Conserved data fixed by the seed state: c = R_1 R_2 R_3 F^2 and the
// first-integral offsets k_2, k_3.
struct NonRec3Constants {
  double c = 0.0;
  double k2 = 0.0, k3 = 0.0;
};

NonRec3Constants nonrec3_constants(const NonRec3Case& cs, const SystemState& st);

/// The pair of first integrals at a state:
///   CubicShift: ((p_1+a) R_1 - (p_2+a) R_2, (p_1+a) R_1 - (p_3+a) R_3)
///   Linear:     (R_1 - R_2, R_1 - R_3)
std::pair<double, double> first_integrals3(const NonRec3Case& cs, const SystemState& st);

/// Value of the tracked quantity ((p_1+a) R_1 or R_1) straight from a state.
double tracked_value(const NonRec3Case& cs, const SystemState& st);

// Continuity witness: value and velocity of the tracked root, so that the
// branch can be followed through transversal fold points of the cubic
// (where two roots meet and the trajectory crosses to the sibling).
struct RootBranch {
  double value = 0.0;
  double velocity = 0.0;
  double s = 0.0;
};

/// Real root of eta (eta - k2)(eta - k3) = rhs(p) nearest the linear
/// prediction value + velocity (s - branch.s); the witness is updated.
/// Throws BranchLossError when the choice is ambiguous (tangential root
/// collision, or candidates at comparable distance from the prediction).
double track_root(const NonRec3Case& cs, const NonRec3Constants& constants,
                  const Eigen::Ref<const Eigen::VectorXd>& p, double s,
                  RootBranch& branch);

/// Integrates the reduced autonomous system
///   CubicShift: p_j' = (p_j + a) / (eta - k_j)   (k_1 = 0)
///   Linear:     p_j' = 1 / (eta - k_j)
/// with eta tracked through the cubic, carrying (r, r') along. Terminates
/// like integrate(); root-tracking failures end with Termination::BranchLoss.
Trajectory integrate3(const NonRec3Case& cs, const SystemState& init, double s_end,
                      const IntegrateOptions& opts = {});

/// All real roots of the depressed cubic x^3 + b x^2 + c x + d, ascending.
std::vector<double> cubic_real_roots(double b, double c, double d);

}  // namespace quadrics

#endif
