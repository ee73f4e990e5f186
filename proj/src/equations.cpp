#include "quadrics/equations.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace quadrics {

HessianCoefficients::HessianCoefficients(int n, Eigen::VectorXd storage)
    : n_(n), c_(std::move(storage)) {
  if (n_ < 1) throw std::invalid_argument("HessianCoefficients: n must be >= 1");
  if (c_.size() != n_ + 2)
    throw std::invalid_argument("HessianCoefficients: storage must have length n+2");
  if (c_.tail(n_ + 1).cwiseAbs().maxCoeff() == 0.0)
    throw std::invalid_argument("HessianCoefficients: F must not vanish identically");
}

HessianCoefficients HessianCoefficients::from_f_coeffs(const Eigen::VectorXd& f, double c_m1) {
  const int n = static_cast<int>(f.size()) - 1;
  Eigen::VectorXd full(n + 2);
  full[0] = c_m1;
  full.tail(n + 1) = f;
  return HessianCoefficients(n, std::move(full));
}

PolyValue HessianCoefficients::F(const Eigen::Ref<const Eigen::VectorXd>& p) const {
  return poly_eval(f_coeffs(), p);
}

PolyValue HessianCoefficients::G(const Eigen::Ref<const Eigen::VectorXd>& p) const {
  return poly_eval(g_coeffs(), p);
}

HessianCoefficients build_recursive(const RecursiveSpec& spec) {
  const int n = spec.n;
  if (n < 1) throw std::invalid_argument("build_recursive: n must be >= 1");
  Eigen::VectorXd f = Eigen::VectorXd::Zero(n + 1);
  f[n] = spec.c_n;
  if (n >= 1) f[n - 1] = spec.c_nm1;
  for (int k = n - 1; k >= 1; --k) f[k - 1] = spec.a1 * f[k] - spec.a0 * f[k + 1];
  return HessianCoefficients::from_f_coeffs(f, spec.c_m1);
}

DetectionResult detect_recursive(const HessianCoefficients& h) {
  const int n = h.n();
  if (n < 2)
    throw std::invalid_argument("detect_recursive: n = 1 leaves (a0, a1) unconstrained");

  // Rows k = 1..n-1 of c_{k-1} = a1 c_k - a0 c_{k+1}, unknowns (a0, a1).
  Eigen::MatrixXd M(n - 1, 2);
  Eigen::VectorXd rhs(n - 1);
  for (int k = 1; k <= n - 1; ++k) {
    M(k - 1, 0) = -h.c(k + 1);
    M(k - 1, 1) = h.c(k);
    rhs(k - 1) = h.c(k - 1);
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(1e-12);
  const Eigen::Vector2d x = svd.solve(rhs);  // minimum-norm least squares
  const double residual = (M * x - rhs).cwiseAbs().maxCoeff();
  const double tol = 1e-9 * h.f_coeffs().cwiseAbs().maxCoeff();

  DetectionResult out;
  out.a0 = x[0];
  out.a1 = x[1];
  out.residual = residual;
  if (residual >= tol) {
    out.kind = RecursiveDetection::NotRecursive;
  } else {
    out.kind = (svd.rank() == 2) ? RecursiveDetection::Unique : RecursiveDetection::Family;
  }
  return out;
}

Factorization classify(const RecursiveSpec& spec) {
  Factorization fact;
  const double a0 = spec.a0, a1 = spec.a1;
  const double disc = a1 * a1 - 4.0 * a0;
  const double disc_scale = a1 * a1 + 4.0 * std::abs(a0);

  if (std::abs(disc) <= 1e-12 * disc_scale) {
    const double u = a1 / 2.0;
    if (u == 0.0) {
      fact.kind = RecursiveCase::RepeatedZeroRoot;
      fact.r1 = fact.r2 = 0.0;
      return fact;
    }
    fact.kind = RecursiveCase::RepeatedNonzeroRoot;
    fact.r1 = fact.r2 = u;
    fact.u = u;
    fact.Au = spec.c_n;
    fact.Bu = spec.c_nm1 / u - spec.c_n;
    return fact;
  }

  fact.kind = RecursiveCase::DistinctRoots;
  const std::complex<double> sq = std::sqrt(std::complex<double>(disc, 0.0));
  fact.r1 = (a1 + sq) / 2.0;
  fact.r2 = (a1 - sq) / 2.0;
  const std::complex<double> denom = fact.r1 - fact.r2;
  fact.A = (spec.c_nm1 - spec.c_n * fact.r2) / denom;
  fact.B = -(spec.c_nm1 - spec.c_n * fact.r1) / denom;
  return fact;
}

Eigen::VectorXd expand_factorization(const RecursiveSpec& spec, const Factorization& fact) {
  const int n = spec.n;
  Eigen::VectorXd f = Eigen::VectorXd::Zero(n + 1);
  switch (fact.kind) {
    case RecursiveCase::DistinctRoots: {
      // c_k = A r1^{n-k} + B r2^{n-k}; real by construction (conjugate pair
      // or real data), so keep the real part only.
      std::complex<double> pow1 = 1.0, pow2 = 1.0;
      for (int k = n; k >= 0; --k) {
        f[k] = (fact.A * pow1 + fact.B * pow2).real();
        pow1 *= fact.r1;
        pow2 *= fact.r2;
      }
      break;
    }
    case RecursiveCase::RepeatedNonzeroRoot: {
      double pw = 1.0;
      for (int k = n; k >= 0; --k) {
        f[k] = (fact.Au + fact.Bu * (n - k)) * pw;
        pw *= fact.u;
      }
      break;
    }
    case RecursiveCase::RepeatedZeroRoot: {
      f[n] = spec.c_n;
      if (n >= 1) f[n - 1] = spec.c_nm1;
      break;
    }
  }
  return f;
}

Eigen::VectorXd g_polynomial(const HessianCoefficients& h) { return h.g_coeffs(); }

QuadraticIdentity quadratic_identity_residual(const RecursiveSpec& spec,
                                              const Eigen::Ref<const Eigen::VectorXd>& p,
                                              int i) {
  const int n = spec.n;
  if (static_cast<int>(p.size()) != n)
    throw std::invalid_argument("quadratic_identity_residual: p must have length n");
  if (i < 0 || i >= n)
    throw std::out_of_range("quadratic_identity_residual: index out of range");

  const HessianCoefficients h = build_recursive(spec);
  const PolyValue F = h.F(p);

  const double a0 = spec.a0, a1 = spec.a1;
  const auto q = [&](double x) { return x * x + a1 * x + a0; };
  const double qi = q(p[i]);
  const double qpi = 2.0 * p[i] + a1;

  const double lhs_lin = qpi * F.value - 2.0 * qi * F.gradient[i];

  // Intermediate linear identity with the temporary k = 0 coefficient.
  const Eigen::VectorXd fc = h.f_coeffs();
  const double c_m1_tmp = a1 * fc[0] - a0 * fc[1];
  const Eigen::VectorXd sig = elem_sym_all(p);
  double gsum = c_m1_tmp;  // k = 0 term, sigma_0 = 1
  for (int k = 1; k <= n; ++k) gsum += fc[k - 1] * sig[k];
  const double rhs_lin = -a1 * F.value + 2.0 * gsum;

  double prod_q = 1.0;
  for (int j = 0; j < n; ++j) prod_q *= q(p[j]);

  const double disc = a1 * a1 - 4.0 * a0;
  const double top = spec.c_nm1 * spec.c_nm1 - a1 * spec.c_nm1 * spec.c_n +
                     a0 * spec.c_n * spec.c_n;
  const double lhs_sq = lhs_lin * lhs_lin;
  const double term_f = disc * F.value * F.value;
  const double term_q = 4.0 * top * prod_q;

  QuadraticIdentity out;
  out.structure = lhs_sq - term_f - term_q;
  out.structure_scale = std::abs(lhs_sq) + std::abs(term_f) + std::abs(term_q) + 1.0;
  out.intermediate = lhs_lin - rhs_lin;
  out.intermediate_scale = std::abs(lhs_lin) + std::abs(rhs_lin) + 1.0;
  return out;
}

}  // namespace quadrics
