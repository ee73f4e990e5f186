#include "quadrics/symfun.hpp"

#include <stdexcept>

namespace quadrics {

Eigen::VectorXd elem_sym_all(const Eigen::Ref<const Eigen::VectorXd>& p) {
  const int n = static_cast<int>(p.size());
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n + 1);
  e[0] = 1.0;
  // Horner-style sweep: after processing p_0..p_{j-1}, e holds their sigma_k.
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k >= 1; --k) e[k] += p[j] * e[k - 1];
  }
  return e;
}

double elem_sym(const Eigen::Ref<const Eigen::VectorXd>& p, int k) {
  const int n = static_cast<int>(p.size());
  if (k < 0 || k > n) return 0.0;
  if (k == 0) return 1.0;
  return elem_sym_all(p)[k];
}

Eigen::VectorXd elem_sym_excl_all(const Eigen::Ref<const Eigen::VectorXd>& p, int i) {
  const int n = static_cast<int>(p.size());
  if (i < 0 || i >= n) throw std::out_of_range("elem_sym_excl: index out of range");
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  e[0] = 1.0;
  int filled = 0;
  for (int j = 0; j < n; ++j) {
    if (j == i) continue;
    for (int k = filled + 1; k >= 1; --k) e[k] += p[j] * e[k - 1];
    ++filled;
  }
  return e;
}

double elem_sym_excl(const Eigen::Ref<const Eigen::VectorXd>& p, int k, int i) {
  const int n = static_cast<int>(p.size());
  if (i < 0 || i >= n) throw std::out_of_range("elem_sym_excl: index out of range");
  if (k < 0 || k > n - 1) return 0.0;
  return elem_sym_excl_all(p, i)[k];
}

PolyValue poly_eval(const Eigen::Ref<const Eigen::VectorXd>& coeffs,
                    const Eigen::Ref<const Eigen::VectorXd>& p) {
  const int n = static_cast<int>(p.size());
  if (coeffs.size() != n + 1)
    throw std::invalid_argument("poly_eval: coefficient list must have length n+1");

  PolyValue out;
  out.value = coeffs.dot(elem_sym_all(p));
  out.gradient.resize(n);
  for (int i = 0; i < n; ++i) {
    // dF/dp_i = sum_{k>=1} c_k sigma_{k-1}(p|i)
    const Eigen::VectorXd excl = elem_sym_excl_all(p, i);
    double g = 0.0;
    for (int k = 1; k <= n; ++k) g += coeffs[k] * excl[k - 1];
    out.gradient[i] = g;
  }
  return out;
}

}  // namespace quadrics
