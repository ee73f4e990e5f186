#ifndef QUADRICS_ARROWHEAD_HPP
#define QUADRICS_ARROWHEAD_HPP

#include <Eigen/Core>

namespace quadrics {

// Hermitian bordered-diagonal matrix
//   [ diag(P)  Q  ]
//   [ Q^*      R  ]
// which is the shape of every Hessian produced by the quadric ansatz.
struct ArrowheadMatrix {
  Eigen::VectorXd P;
  Eigen::VectorXcd Q;
  double R = 0.0;

  int n() const { return static_cast<int>(P.size()); }
  Eigen::MatrixXcd dense() const;
};

/// Monic characteristic polynomial det(lambda I - H); coeffs[j] multiplies
/// lambda^{n+1-j}, computed by expansion along the border:
///   prod_j (lambda - P_j) (lambda - R) - sum_i |Q_i|^2 prod_{j != i} (lambda - P_j).
Eigen::VectorXd char_poly(const ArrowheadMatrix& H);

/// sigma_0 .. sigma_{n+1} of the eigenvalues, read off the characteristic
/// polynomial as sigma_k = (-1)^k coeffs[k]; no eigenvalue solve involved.
Eigen::VectorXd sigma_all(const ArrowheadMatrix& H);
double sigma_of_hessian(const ArrowheadMatrix& H, int k);

/// All n+1 eigenvalues, ascending. Solved from the secular equation
/// lambda - R = sum_i |Q_i|^2 / (lambda - P_i) after deflating zero weights
/// and repeated diagonal entries.
Eigen::VectorXd eigenvalues(const ArrowheadMatrix& H);

/// sum_j arctan(lambda_j), in (-(n+1) pi/2, (n+1) pi/2).
double phase(const ArrowheadMatrix& H);

/// Hessian of the ansatz potential at one (x, s):
///   P_j = p_j,  Q_j = x_j p'_j + q'_j,  R = sum_j (x_j^2 p''_j / 2 + q''_j x_j) + r''.
/// qprime/qpp may be empty when the ansatz has no linear terms.
ArrowheadMatrix assemble(const Eigen::Ref<const Eigen::VectorXd>& p,
                         const Eigen::Ref<const Eigen::VectorXd>& pprime,
                         const Eigen::Ref<const Eigen::VectorXd>& ppp,
                         const Eigen::Ref<const Eigen::VectorXd>& qprime,
                         const Eigen::Ref<const Eigen::VectorXd>& qpp,
                         double rpp,
                         const Eigen::Ref<const Eigen::VectorXd>& x);

}  // namespace quadrics

#endif
