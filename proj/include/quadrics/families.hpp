#ifndef QUADRICS_FAMILIES_HPP
#define QUADRICS_FAMILIES_HPP

#include <memory>
#include <string>
#include <vector>

#include "quadrics/ansatz.hpp"

namespace quadrics {

enum class FamilyVariant {
  N2Hyperbolic,       // kappa > 0 pair, entire under the angle bounds
  N2Trig,             // kappa < 0 pair, always a bounded interval
  HighDimLinear,      // hyperbolic pair plus linear terms gamma_k s x_k
  SubcriticalEntire,  // hyperbolic pair plus constant-slope directions
  BoxedExample,       // equal-angle special case, one parameter Theta
};

const char* to_string(FamilyVariant v);
FamilyVariant family_variant_from_string(const std::string& name);

struct FamilyConfig {
  FamilyVariant variant = FamilyVariant::N2Hyperbolic;
  int n = 2;
  double alpha = 1.0, beta = 1.0;
  std::vector<double> psi;    // two angles, or n of them for SubcriticalEntire
  std::vector<double> gamma;  // gamma_3..gamma_n (n-2 values)
  double theta = 0.0;         // BoxedExample phase
  double r_lin = 0.0, r_const = 0.0;  // affine freedom in r
};

struct Admissibility {
  bool ok = true;
  std::string violation;
};

/// Checks the entirety constraints of an entire-variant configuration
/// (alpha/beta >= |tan psi_1|, beta/alpha >= |tan psi_2| and the constant
/// angle ranges). Bounded variants are always admissible.
Admissibility check_admissible(const FamilyConfig& cfg);

/// Builds the sampler; validates shapes and positivity of alpha, beta but not
/// entirety (bounded members are constructible on their maximal interval).
std::unique_ptr<AnsatzSampler> make_family(const FamilyConfig& cfg);

Interval domain_of_validity(const FamilyConfig& cfg);

namespace detail {

// The two-variable hyperbolic solution pair and everything derived from it.
struct HyperbolicCore {
  double alpha = 1.0, beta = 1.0, psi1 = 0.0, psi2 = 0.0;

  struct Eval {
    double p1, p2, dp1, dp2, ddp1, ddp2;
    double F, Fperp;
    double sigma;  // F_perp / F = (alpha^2+beta^2)/(2 alpha beta) sinh(2 tau)
  };
  Eval at(double s) const;
  Interval domain() const;
  bool entire() const;
  double kappa() const { return 1.0 / (alpha * alpha * beta * beta); }
  // r normalization: the odd primitive with r(0) = 0
  double r_base(double s) const;
  double drr_base(double s) const;   // first derivative
  double ddr_base(double s) const;   // second derivative
};

struct TrigCore {
  double alpha = 1.0, beta = 1.0, psi1 = 0.0, psi2 = 0.0;

  struct Eval {
    double p1, p2, dp1, dp2, ddp1, ddp2;
    double F, Fperp;
  };
  Eval at(double s) const;
  Interval domain() const;
  double kappa() const { return -1.0 / (alpha * alpha * beta * beta); }
  double r_base(double s) const;
  double drr_base(double s) const;
  double ddr_base(double s) const;
};

}  // namespace detail

class N2HyperbolicFamily final : public AnsatzSampler {
 public:
  N2HyperbolicFamily(double alpha, double beta, double psi1, double psi2,
                     double r_lin = 0.0, double r_const = 0.0);
  int dim() const override { return 2; }
  double theta() const override { return core_.psi1 + core_.psi2; }
  Interval domain() const override { return core_.domain(); }
  AnsatzSample at(double s) const override;
  double kappa() const { return core_.kappa(); }

 private:
  detail::HyperbolicCore core_;
  double r_lin_, r_const_;
};

class N2TrigFamily final : public AnsatzSampler {
 public:
  N2TrigFamily(double alpha, double beta, double psi1, double psi2,
               double r_lin = 0.0, double r_const = 0.0);
  int dim() const override { return 2; }
  double theta() const override { return core_.psi1 + core_.psi2; }
  Interval domain() const override { return core_.domain(); }
  AnsatzSample at(double s) const override;
  double kappa() const { return core_.kappa(); }

 private:
  detail::TrigCore core_;
  double r_lin_, r_const_;
};

class HighDimLinearFamily final : public AnsatzSampler {
 public:
  HighDimLinearFamily(int n, double alpha, double beta, double psi1, double psi2,
                      std::vector<double> gamma, double r_lin = 0.0, double r_const = 0.0);
  int dim() const override { return n_; }
  double theta() const override { return core_.psi1 + core_.psi2; }
  Interval domain() const override { return core_.domain(); }
  AnsatzSample at(double s) const override;

 private:
  detail::HyperbolicCore core_;
  int n_;
  std::vector<double> gamma_;
  double gamma_sq_;  // 1 + sum gamma_k^2
  double r_lin_, r_const_;
};

class SubcriticalEntireFamily final : public AnsatzSampler {
 public:
  SubcriticalEntireFamily(double alpha, double beta, std::vector<double> psi,
                          std::vector<double> gamma, double r_lin = 0.0,
                          double r_const = 0.0);
  int dim() const override { return n_; }
  double theta() const override { return theta_; }
  Interval domain() const override { return core_.domain(); }
  AnsatzSample at(double s) const override;

 private:
  detail::HyperbolicCore core_;
  int n_;
  std::vector<double> psi_, gamma_;
  double theta_;
  double gamma_sq_;
  double sec_prod_;  // prod_{k>=3} sec(psi_k)
  double r_lin_, r_const_;
};

class BoxedExampleFamily final : public AnsatzSampler {
 public:
  BoxedExampleFamily(int n, double Theta);
  int dim() const override { return n_; }
  double theta() const override { return Theta_; }
  Interval domain() const override;
  AnsatzSample at(double s) const override;

  // The closed-form displays of this family, for cross-checking:
  // F = sec(psi)^{n-2} / D^2, F_perp = F sinh(2 s),
  // dF/dp_j = sec(psi)^{n-2} (sin psi cosh s - cos psi sinh s) / D,
  // with D = cos psi cosh s - sin psi sinh s and psi = Theta / n.
  struct Display {
    double F, Fperp, dF12;
  };
  Display display(double s) const;

 private:
  int n_;
  double Theta_, psi_;
  SubcriticalEntireFamily inner_;
};

}  // namespace quadrics

#endif
