#ifndef QUADRICS_XI_QUADRATURE_HPP
#define QUADRICS_XI_QUADRATURE_HPP

#include <vector>

#include <Eigen/Core>

#include "quadrics/equations.hpp"
#include "quadrics/ode.hpp"

namespace quadrics {

// Quadrature solution of the scalar first-integral equation
//   (xi_1')^2 = W(xi_1),   W(xi) = k1 + k2 prod_j (xi - kappa_j),
// rebuilt from s(xi) = int dxi / sqrt(W). The motion is a chain of monotone
// legs separated by simple turning points (zeros of W); a leg reaching
// infinity in finite s is the blow-up of the reduced system.
struct XiQuadratureOptions {
  double quad_abs_tol = 1e-13;
  double quad_rel_tol = 1e-11;
  int max_legs = 64;
};

class XiQuadrature {
 public:

  struct Leg {
    double s0 = 0.0, s1 = 0.0;  // duration window, 0 <= s0 < s1
    double xi0 = 0.0, xi1 = 0.0;  // xi1 is +-infinity on an escape leg
    int dir = +1;                 // sign of dxi/ds
    bool turning_start = false, turning_end = false;
  };

  /// branch_sign selects the sign of xi_1' at the start; it is ignored when
  /// the start sits on a turning point. Throws InvalidStartError when
  /// W(xi_start) < 0, and BranchLossError on a double zero of W in the way.
  XiQuadrature(double k1, double k2, Eigen::VectorXd offsets, double xi_start,
               int branch_sign, const XiQuadratureOptions& opts = XiQuadratureOptions());

  /// Builds the quadrature matching a state of the full system.
  static XiQuadrature from_state(const RecursiveSpec& spec, const HessianCoefficients& h,
                                 const SystemState& st, const XiQuadratureOptions& opts = XiQuadratureOptions());

  double W(double xi) const;
  double Wprime(double xi) const;

  /// xi_1 at signed s (the backward motion flips the branch).
  double xi1_at(double s) const;

  /// Duration until xi escapes to +-infinity in the given time direction;
  /// +infinity when the improper tail diverges (n <= 2) or the motion stays
  /// bounded.
  double blowup_s(int direction = +1) const;

  /// First duration at which phi(s) = phi0 + int rate/(xi(sig) - offset) dsig
  /// crosses an odd multiple of pi/2; +infinity when it never does within the
  /// computed legs. Used to predict poles of p_j = tan-like components.
  double first_angle_crossing(double phi0, double offset, double rate,
                              int direction = +1) const;

  const std::vector<Leg>& legs(int direction) const {
    return direction >= 0 ? legs_fwd_ : legs_bwd_;
  }

 private:
  void build(int direction);
  double wscale_at(double xi) const;
  double travel_time(double x0, bool sing0, double x1, bool sing1) const;
  double escape_time(double x0, bool sing0, int dir) const;
  double invert_leg(const Leg& leg, double duration) const;
  std::vector<double> real_roots() const;

  double k1_, k2_;
  Eigen::VectorXd offsets_;
  double xi_start_;
  int branch_;
  XiQuadratureOptions opts_;
  double root_bound_;
  std::vector<Leg> legs_fwd_, legs_bwd_;
};

// Predicted end of the maximal existence interval in one time direction,
// combining the xi-escape time with the first pole of any p_j. Only valid for
// specs with a1^2 - 4 a0 < 0 (the factor quadratic has no real roots, so
// arctan-type angles track every p_j).
struct BlowupPrediction {
  enum class Kind { None, XiEscape, ComponentPole };
  Kind kind = Kind::None;
  double s_star = 0.0;  // duration from init.s (nonnegative)
  int component = -1;   // blowing-up p index for ComponentPole
};

BlowupPrediction predict_blowup(const RecursiveSpec& spec, const HessianCoefficients& h,
                                const SystemState& init, int direction,
                                const XiQuadratureOptions& opts = XiQuadratureOptions());

}  // namespace quadrics

#endif
