#ifndef QUADRICS_SYMFUN_HPP
#define QUADRICS_SYMFUN_HPP

#include <Eigen/Core>

namespace quadrics {

// Elementary symmetric polynomials of an n-tuple p, with the conventions
// sigma_0 = 1 and sigma_k = 0 for k < 0 or k > n.

/// All of sigma_0 .. sigma_n in one O(n^2) sweep over prod_j (t + p_j).
Eigen::VectorXd elem_sym_all(const Eigen::Ref<const Eigen::VectorXd>& p);

/// sigma_k(p); total under the out-of-range convention above.
double elem_sym(const Eigen::Ref<const Eigen::VectorXd>& p, int k);

/// All of sigma_0 .. sigma_{n-1} of p with entry i (0-based) removed.
Eigen::VectorXd elem_sym_excl_all(const Eigen::Ref<const Eigen::VectorXd>& p, int i);

/// sigma_k(p | i): entry i removed; sigma_{-1}(p|i) = sigma_n(p|i) = 0.
/// Throws std::out_of_range for an invalid index.
double elem_sym_excl(const Eigen::Ref<const Eigen::VectorXd>& p, int k, int i);

struct PolyValue {
  double value = 0.0;
  Eigen::VectorXd gradient;
};

/// F(p) = sum_k c_k sigma_k(p) together with dF/dp_i = sum_k c_k sigma_{k-1}(p|i).
/// coeffs holds (c_0, ..., c_n) and must have length p.size() + 1.
PolyValue poly_eval(const Eigen::Ref<const Eigen::VectorXd>& coeffs,
                    const Eigen::Ref<const Eigen::VectorXd>& p);

}  // namespace quadrics

#endif
