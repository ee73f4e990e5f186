#ifndef QUADRICS_QUADRATURE_HPP
#define QUADRICS_QUADRATURE_HPP

#include <functional>

namespace quadrics {

/// Adaptive Gauss-Kronrod (G7, K15) integration of f over [a, b].
/// Splits the worst subinterval until the summed error estimate drops below
/// abs_tol + rel_tol * |integral|.
double gauss_kronrod(const std::function<double(double)>& f, double a, double b,
                     double abs_tol = 1e-12, double rel_tol = 1e-10,
                     int max_subdiv = 4000);

}  // namespace quadrics

#endif
