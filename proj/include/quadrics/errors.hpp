#ifndef QUADRICS_ERRORS_HPP
#define QUADRICS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace quadrics {

// F(p) vanished where the reduced system needs it nonzero.
struct SingularFieldError : std::runtime_error {
  double s;
  explicit SingularFieldError(double s_, const std::string& what = "F(p) = 0")
      : std::runtime_error(what), s(s_) {}
};

// Requested sample lies outside the maximal interval of a closed-form family.
struct DomainBoundaryError : std::runtime_error {
  double s;
  explicit DomainBoundaryError(double s_)
      : std::runtime_error("sample outside family domain"), s(s_) {}
};

// The quadric-evolution correspondence needs e^{i theta} i^n = -i.
struct AngleMismatchError : std::runtime_error {
  double required_theta;
  explicit AngleMismatchError(double req)
      : std::runtime_error("angle condition violated"), required_theta(req) {}
};

// Preconditions of the quadric correspondence (kappa > 0, p' > 0) not met.
struct NotApplicableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Root tracking lost its branch (collision or jump beyond the continuity window).
struct BranchLossError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Quadrature / flow started where the defining expression is not real.
struct InvalidStartError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Two independent evaluation routes disagreed beyond tolerance.
struct InternalInconsistencyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace quadrics

#endif
