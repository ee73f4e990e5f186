#ifndef QUADRICS_ANSATZ_HPP
#define QUADRICS_ANSATZ_HPP

#include <cmath>
#include <limits>

#include <Eigen/Core>

namespace quadrics {

// Everything the quadric ansatz
//   f(x, s) = 1/2 sum_j p_j(s) x_j^2 + sum_j q_j(s) x_j + r(s)          (real)
//   u(z)    = 4 f(Re z_1, ..., Re z_{n+1})                              (complex)
// needs at a single value of s. q vectors are empty when the ansatz carries
// no linear terms.
struct AnsatzSample {
  double s = 0.0;
  Eigen::VectorXd p, pprime, ppp;
  Eigen::VectorXd q, qprime, qpp;
  double r = 0.0, rprime = 0.0, rpp = 0.0;
  // Filled by angle-parameterized samplers; NaN otherwise.
  double f_theta = std::numeric_limits<double>::quiet_NaN();
  double f_theta_perp = std::numeric_limits<double>::quiet_NaN();

  int dim() const { return static_cast<int>(p.size()); }
  bool has_linear() const { return q.size() > 0; }
};

// Maximal s-interval on which a solution family is defined.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool entire() const { return std::isinf(lo) && std::isinf(hi); }
  bool contains(double s) const { return s > lo && s < hi; }
};

class AnsatzSampler {
 public:
  virtual ~AnsatzSampler() = default;
  virtual int dim() const = 0;
  virtual double theta() const = 0;
  virtual Interval domain() const { return {}; }
  virtual AnsatzSample at(double s) const = 0;
};

/// f(x, s) of the real ansatz.
double real_potential(const AnsatzSample& a, const Eigen::Ref<const Eigen::VectorXd>& x);

/// u at a point with Re z = (x, s); equals 4 f.
double complex_potential(const AnsatzSample& a, const Eigen::Ref<const Eigen::VectorXd>& x);

}  // namespace quadrics

#endif
