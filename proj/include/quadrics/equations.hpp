#ifndef QUADRICS_EQUATIONS_HPP
#define QUADRICS_EQUATIONS_HPP

#include <complex>

#include <Eigen/Core>

#include "quadrics/symfun.hpp"

namespace quadrics {

// Constant coefficients (c_{-1}, c_0, ..., c_n) of the Hessian equation
//   c_n sigma_{n+1}(H) + c_{n-1} sigma_n(H) + ... + c_0 sigma_1(H) + c_{-1} = 0
// on (n+1)-dimensional space, together with the induced symmetric polynomials
//   F(p) = sum_{k=0}^n c_k sigma_k(p),   G(p) = sum_{k=0}^n c_{k-1} sigma_k(p).
class HessianCoefficients {
 public:
  // storage holds (c_{-1}, c_0, ..., c_n), length n+2.
  HessianCoefficients(int n, Eigen::VectorXd storage);
  // f holds (c_0, ..., c_n).
  static HessianCoefficients from_f_coeffs(const Eigen::VectorXd& f, double c_m1 = 0.0);

  int n() const { return n_; }
  double c(int k) const { return c_[k + 1]; }
  double& c(int k) { return c_[k + 1]; }
  const Eigen::VectorXd& storage() const { return c_; }

  Eigen::VectorXd f_coeffs() const { return c_.tail(n_ + 1); }
  Eigen::VectorXd g_coeffs() const { return c_.head(n_ + 1); }

  PolyValue F(const Eigen::Ref<const Eigen::VectorXd>& p) const;
  PolyValue G(const Eigen::Ref<const Eigen::VectorXd>& p) const;

 private:
  int n_;
  Eigen::VectorXd c_;  // index k+1 <-> c_k
};

// Data of a recursive-type equation: c_{k-1} = a1 c_k - a0 c_{k+1} for
// k = 1..n-1, seeded by the top coefficients. c_m1 is a free datum of the
// equation, not generated by the recursion.
struct RecursiveSpec {
  int n = 2;
  double a0 = 0.0, a1 = 0.0;
  double c_nm1 = 0.0, c_n = 1.0;
  double c_m1 = 0.0;
};

/// Runs the recursion downward from (c_n, c_{n-1}).
HessianCoefficients build_recursive(const RecursiveSpec& spec);

enum class RecursiveDetection { Unique, Family, NotRecursive };

struct DetectionResult {
  RecursiveDetection kind = RecursiveDetection::NotRecursive;
  // Solution of the recursion constraints; for Family, the representative
  // minimizing a0^2 + a1^2.
  double a0 = 0.0, a1 = 0.0;
  double residual = 0.0;
  bool recursive() const { return kind != RecursiveDetection::NotRecursive; }
};

/// Least-squares fit of (a0, a1) to the coefficient recursion.
/// Throws std::invalid_argument for n < 2 (no constraint exists).
DetectionResult detect_recursive(const HessianCoefficients& h);

enum class RecursiveCase { DistinctRoots, RepeatedNonzeroRoot, RepeatedZeroRoot };

// Factored form of F for a recursive-type equation, keyed by the roots of
// r^2 - a1 r + a0 = 0:
//   DistinctRoots:      F = A prod(p_j + r1) + B prod(p_j + r2)
//   RepeatedNonzeroRoot F = Au prod(p_j + u) + Bu * u * d/du prod(p_j + u)
//   RepeatedZeroRoot    F = c_n sigma_n + c_{n-1} sigma_{n-1}
struct Factorization {
  RecursiveCase kind = RecursiveCase::DistinctRoots;
  std::complex<double> r1, r2;
  std::complex<double> A, B;  // DistinctRoots; conjugate roots give B = conj(A)
  double u = 0.0, Au = 0.0, Bu = 0.0;
};

Factorization classify(const RecursiveSpec& spec);

/// Expands a factored form back to (c_0, ..., c_n); the round trip against
/// build_recursive is the correctness oracle for classify.
Eigen::VectorXd expand_factorization(const RecursiveSpec& spec, const Factorization& fact);

/// Coefficient list (c_{-1}, ..., c_{n-1}) such that poly_eval on it computes G.
Eigen::VectorXd g_polynomial(const HessianCoefficients& h);

// Residuals of the quadratic structure identity
//   (q'(p_i) F - 2 q(p_i) dF/dp_i)^2
//     = (a1^2 - 4 a0) F^2 + 4 (c_{n-1}^2 - a1 c_{n-1} c_n + a0 c_n^2) prod_j q(p_j)
// with q(x) = x^2 + a1 x + a0, plus the intermediate linear identity
//   q'(p_i) F - 2 q(p_i) dF/dp_i = -a1 F + 2 sum_k c_{k-1} sigma_k
// where the k = 0 term uses the temporary constant a1 c_0 - a0 c_1.
struct QuadraticIdentity {
  double structure = 0.0;
  double structure_scale = 1.0;
  double intermediate = 0.0;
  double intermediate_scale = 1.0;
};

QuadraticIdentity quadratic_identity_residual(const RecursiveSpec& spec,
                                              const Eigen::Ref<const Eigen::VectorXd>& p,
                                              int i);

}  // namespace quadrics

#endif
