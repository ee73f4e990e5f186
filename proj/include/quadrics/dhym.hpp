#ifndef QUADRICS_DHYM_HPP
#define QUADRICS_DHYM_HPP

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "quadrics/equations.hpp"
#include "quadrics/rk45.hpp"

namespace quadrics {

// The angle family F_theta(p) = Re(e^{-i theta} prod_j (1 + i p_j)), the
// deformed Hermitian-Yang-Mills / special Lagrangian specialization of the
// general coefficient setup. theta and theta + pi give the same equation up
// to an overall sign.
struct ThetaSystem {
  int n = 2;
  double theta = 0.0;
};

struct FThetaValue {
  double f = 0.0;       // F_theta
  double f_perp = 0.0;  // F_{theta + pi/2}
  Eigen::VectorXd grad; // dF_theta / dp_j
  std::complex<double> product;  // prod_j (1 + i p_j)
};

/// One complex product, two real parts, gradient through the reduced products.
FThetaValue f_theta(const ThetaSystem& ts, const Eigen::Ref<const Eigen::VectorXd>& p);

/// Coefficients c_k = cos(theta - k pi/2), k = -1..n; recursive of type (1, 0).
HessianCoefficients theta_to_coefficients(const ThetaSystem& ts);

RecursiveSpec theta_to_spec(const ThetaSystem& ts);

// Residuals of the three algebraic identities of the angle family:
//   antipodal:      F_theta + F_{theta+pi}
//   pythagorean:    F_theta^2 + F_{theta+pi/2}^2 - prod (1 + p_j^2)
//   gradient_shift: max_j | p_j F_theta - (1 + p_j^2) dF/dp_j - F_{theta+pi/2} |
struct AngleIdentityResiduals {
  double antipodal = 0.0;
  double pythagorean = 0.0;
  double gradient_shift = 0.0;
};

AngleIdentityResiduals angle_identity_residuals(const ThetaSystem& ts,
                                                const Eigen::Ref<const Eigen::VectorXd>& p);

// Isotropic slice p_1 = ... = p_n = tan(phi): the reduced scalar flow
//   (n phi - theta)' = kappa' cos(n phi - theta)^{2/n}
// defined while cos(n phi - theta) > 0, with r'' = tan(theta - n phi).
struct IsotropicFlow {
  int n = 0;
  double theta = 0.0, kappa_prime = 0.0;
  int branch_k = 0;  // integer with |theta - n phi + k pi| < pi/2 along the run

  struct Sample {
    double s, phi, dphi;
  };
  std::vector<Sample> samples;                  // sorted by s
  std::optional<double> hit_forward, hit_backward;  // where cos(n phi - theta) = 0

  double phi_at(double s) const;   // Hermite interpolation
  double rpp_at(double s) const;   // tan(theta - n phi(s))
};

/// Integrates the isotropic flow on [-s_max, s_max] from phi(0) = phi0,
/// halting where the cosine reaches zero. Throws InvalidStartError when
/// cos(n phi0 - theta) <= 0.
IsotropicFlow isotropic_flow(int n, double theta, double phi0, double kappa_prime,
                             double s_max, const OdeOptions& opts = {});

/// Closed form of the n = 2 flow, used as an oracle: the separable solution
/// of u' = kappa' cos(u) through u(0) = u0.
double isotropic_n2_closed_form(double u0, double kappa_prime, double s);

}  // namespace quadrics

#endif
