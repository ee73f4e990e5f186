#include "quadrics/families.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "quadrics/errors.hpp"

namespace quadrics {

double real_potential(const AnsatzSample& a, const Eigen::Ref<const Eigen::VectorXd>& x) {
  double f = a.r;
  for (int j = 0; j < a.dim(); ++j) {
    f += 0.5 * a.p[j] * x[j] * x[j];
    if (a.has_linear()) f += a.q[j] * x[j];
  }
  return f;
}

double complex_potential(const AnsatzSample& a, const Eigen::Ref<const Eigen::VectorXd>& x) {
  return 4.0 * real_potential(a, x);
}

const char* to_string(FamilyVariant v) {
  switch (v) {
    case FamilyVariant::N2Hyperbolic: return "n2_hyperbolic";
    case FamilyVariant::N2Trig: return "n2_trig";
    case FamilyVariant::HighDimLinear: return "highdim_linear";
    case FamilyVariant::SubcriticalEntire: return "subcritical_entire";
    case FamilyVariant::BoxedExample: return "boxed_example";
  }
  return "unknown";
}

FamilyVariant family_variant_from_string(const std::string& name) {
  if (name == "n2_hyperbolic") return FamilyVariant::N2Hyperbolic;
  if (name == "n2_trig") return FamilyVariant::N2Trig;
  if (name == "highdim_linear") return FamilyVariant::HighDimLinear;
  if (name == "subcritical_entire") return FamilyVariant::SubcriticalEntire;
  if (name == "boxed_example") return FamilyVariant::BoxedExample;
  throw std::invalid_argument("unknown family variant: " + name);
}

namespace detail {

namespace {

void require_pair_angles(double psi1, double psi2) {
  if (std::abs(psi1) >= M_PI_2 || std::abs(psi2) >= M_PI_2)
    throw std::invalid_argument("pair angles must lie strictly inside (-pi/2, pi/2)");
}

}  // namespace

HyperbolicCore::Eval HyperbolicCore::at(double s) const {
  const double tau = s / (alpha * beta);
  const double ch = std::cosh(tau), sh = std::sinh(tau);

  const double D1 = alpha * std::cos(psi1) * ch - beta * std::sin(psi1) * sh;
  const double N1 = alpha * std::sin(psi1) * ch + beta * std::cos(psi1) * sh;
  const double D2 = beta * std::cos(psi2) * ch - alpha * std::sin(psi2) * sh;
  const double N2 = beta * std::sin(psi2) * ch + alpha * std::cos(psi2) * sh;
  if (D1 == 0.0 || D2 == 0.0) throw DomainBoundaryError(s);

  Eval e;
  e.p1 = N1 / D1;
  e.p2 = N2 / D2;
  e.dp1 = 1.0 / (D1 * D1);
  e.dp2 = 1.0 / (D2 * D2);
  const double dD1 = (alpha * std::cos(psi1) * sh - beta * std::sin(psi1) * ch) / (alpha * beta);
  const double dD2 = (beta * std::cos(psi2) * sh - alpha * std::sin(psi2) * ch) / (alpha * beta);
  e.ddp1 = -2.0 * dD1 / (D1 * D1 * D1);
  e.ddp2 = -2.0 * dD2 / (D2 * D2 * D2);
  e.F = alpha * beta / (D1 * D2);
  e.sigma = (alpha * alpha + beta * beta) / (2.0 * alpha * beta) * std::sinh(2.0 * tau);
  e.Fperp = e.sigma * e.F;
  return e;
}

Interval HyperbolicCore::domain() const {
  Interval iv;
  auto add_root = [&](double arg) {
    // tanh(tau) = arg has a solution only for |arg| < 1
    if (std::abs(arg) >= 1.0) return;
    const double s = alpha * beta * std::atanh(arg);
    if (s > 0.0) iv.hi = std::min(iv.hi, s);
    if (s < 0.0) iv.lo = std::max(iv.lo, s);
  };
  // D1 = 0 at tanh(tau) = (alpha/beta) cot(psi1); same pattern for D2
  if (psi1 != 0.0) add_root(alpha / beta * std::cos(psi1) / std::sin(psi1));
  if (psi2 != 0.0) add_root(beta / alpha * std::cos(psi2) / std::sin(psi2));
  return iv;
}

bool HyperbolicCore::entire() const {
  const double t1 = std::abs(std::tan(psi1)), t2 = std::abs(std::tan(psi2));
  const double tol = 1e-12;
  return alpha / beta >= t1 * (1.0 - tol) - tol && beta / alpha >= t2 * (1.0 - tol) - tol;
}

double HyperbolicCore::r_base(double s) const {
  const double ab = alpha * beta;
  return -ab * (alpha * alpha + beta * beta) / 8.0 * std::sinh(2.0 * s / ab);
}

double HyperbolicCore::drr_base(double s) const {
  return -(alpha * alpha + beta * beta) / 4.0 * std::cosh(2.0 * s / (alpha * beta));
}

double HyperbolicCore::ddr_base(double s) const {
  const double ab = alpha * beta;
  return -(alpha * alpha + beta * beta) / (2.0 * ab) * std::sinh(2.0 * s / ab);
}

TrigCore::Eval TrigCore::at(double s) const {
  const double tau = s / (alpha * beta);
  const double ct = std::cos(tau), st = std::sin(tau);

  const double D1 = alpha * std::cos(psi1) * ct - beta * std::sin(psi1) * st;
  const double N1 = alpha * std::sin(psi1) * ct + beta * std::cos(psi1) * st;
  const double D2 = beta * std::cos(psi2) * ct + alpha * std::sin(psi2) * st;
  const double N2 = beta * std::sin(psi2) * ct - alpha * std::cos(psi2) * st;
  if (D1 == 0.0 || D2 == 0.0) throw DomainBoundaryError(s);

  Eval e;
  e.p1 = N1 / D1;
  e.p2 = N2 / D2;
  e.dp1 = 1.0 / (D1 * D1);
  e.dp2 = -1.0 / (D2 * D2);
  const double dD1 = (-alpha * std::cos(psi1) * st - beta * std::sin(psi1) * ct) / (alpha * beta);
  const double dD2 = (-beta * std::cos(psi2) * st + alpha * std::sin(psi2) * ct) / (alpha * beta);
  e.ddp1 = -2.0 * dD1 / (D1 * D1 * D1);
  e.ddp2 = 2.0 * dD2 / (D2 * D2 * D2);
  e.F = alpha * beta / (D1 * D2);
  e.Fperp = -(alpha * alpha - beta * beta) / (2.0 * alpha * beta) * std::sin(2.0 * tau) * e.F;
  return e;
}

Interval TrigCore::domain() const {
  // D1 = 0 at tan(tau) = (alpha/beta) cot(psi1);
  // D2 = 0 at tan(tau) = -(beta/alpha) cot(psi2). Roots repeat mod pi.
  auto nearest = [&](double arg, double& pos, double& neg) {
    const double t = std::atan(arg);  // in (-pi/2, pi/2]; inf handled by atan
    pos = (t > 0.0) ? t : t + M_PI;
    neg = (t < 0.0) ? t : t - M_PI;
  };
  double pos1, neg1, pos2, neg2;
  const double cot1 = std::cos(psi1) / std::sin(psi1);  // +-inf at psi = 0
  const double cot2 = std::cos(psi2) / std::sin(psi2);
  nearest(alpha / beta * cot1, pos1, neg1);
  nearest(-beta / alpha * cot2, pos2, neg2);

  Interval iv;
  iv.hi = alpha * beta * std::min(pos1, pos2);
  iv.lo = alpha * beta * std::max(neg1, neg2);
  return iv;
}

double TrigCore::r_base(double s) const {
  const double ab = alpha * beta;
  return -ab * (alpha * alpha - beta * beta) / 8.0 * std::sin(2.0 * s / ab);
}

double TrigCore::drr_base(double s) const {
  return -(alpha * alpha - beta * beta) / 4.0 * std::cos(2.0 * s / (alpha * beta));
}

double TrigCore::ddr_base(double s) const {
  const double ab = alpha * beta;
  return (alpha * alpha - beta * beta) / (2.0 * ab) * std::sin(2.0 * s / ab);
}

}  // namespace detail

namespace {

void require_positive(double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0))
    throw std::invalid_argument("family: alpha and beta must be positive");
}

}  // namespace

N2HyperbolicFamily::N2HyperbolicFamily(double alpha, double beta, double psi1, double psi2,
                                       double r_lin, double r_const)
    : core_{alpha, beta, psi1, psi2}, r_lin_(r_lin), r_const_(r_const) {
  require_positive(alpha, beta);
  detail::require_pair_angles(psi1, psi2);
}

AnsatzSample N2HyperbolicFamily::at(double s) const {
  const auto e = core_.at(s);
  AnsatzSample a;
  a.s = s;
  a.p.resize(2);
  a.p << e.p1, e.p2;
  a.pprime.resize(2);
  a.pprime << e.dp1, e.dp2;
  a.ppp.resize(2);
  a.ppp << e.ddp1, e.ddp2;
  a.r = core_.r_base(s) + r_lin_ * s + r_const_;
  a.rprime = core_.drr_base(s) + r_lin_;
  a.rpp = core_.ddr_base(s);
  a.f_theta = e.F;
  a.f_theta_perp = e.Fperp;
  return a;
}

N2TrigFamily::N2TrigFamily(double alpha, double beta, double psi1, double psi2,
                           double r_lin, double r_const)
    : core_{alpha, beta, psi1, psi2}, r_lin_(r_lin), r_const_(r_const) {
  require_positive(alpha, beta);
  detail::require_pair_angles(psi1, psi2);
}

AnsatzSample N2TrigFamily::at(double s) const {
  if (!domain().contains(s)) throw DomainBoundaryError(s);
  const auto e = core_.at(s);
  AnsatzSample a;
  a.s = s;
  a.p.resize(2);
  a.p << e.p1, e.p2;
  a.pprime.resize(2);
  a.pprime << e.dp1, e.dp2;
  a.ppp.resize(2);
  a.ppp << e.ddp1, e.ddp2;
  a.r = core_.r_base(s) + r_lin_ * s + r_const_;
  a.rprime = core_.drr_base(s) + r_lin_;
  a.rpp = core_.ddr_base(s);
  a.f_theta = e.F;
  a.f_theta_perp = e.Fperp;
  return a;
}

HighDimLinearFamily::HighDimLinearFamily(int n, double alpha, double beta, double psi1,
                                         double psi2, std::vector<double> gamma,
                                         double r_lin, double r_const)
    : core_{alpha, beta, psi1, psi2},
      n_(n),
      gamma_(std::move(gamma)),
      r_lin_(r_lin),
      r_const_(r_const) {
  require_positive(alpha, beta);
  detail::require_pair_angles(psi1, psi2);
  if (n_ < 2) throw std::invalid_argument("highdim_linear: n must be >= 2");
  if (static_cast<int>(gamma_.size()) != n_ - 2)
    throw std::invalid_argument("highdim_linear: gamma must have n-2 entries");
  gamma_sq_ = 1.0;
  for (double g : gamma_) gamma_sq_ += g * g;
}

AnsatzSample HighDimLinearFamily::at(double s) const {
  const auto e = core_.at(s);
  AnsatzSample a;
  a.s = s;
  a.p = Eigen::VectorXd::Zero(n_);
  a.pprime = Eigen::VectorXd::Zero(n_);
  a.ppp = Eigen::VectorXd::Zero(n_);
  a.p[0] = e.p1;
  a.p[1] = e.p2;
  a.pprime[0] = e.dp1;
  a.pprime[1] = e.dp2;
  a.ppp[0] = e.ddp1;
  a.ppp[1] = e.ddp2;
  a.q = Eigen::VectorXd::Zero(n_);
  a.qprime = Eigen::VectorXd::Zero(n_);
  a.qpp = Eigen::VectorXd::Zero(n_);
  for (int k = 2; k < n_; ++k) {
    a.q[k] = gamma_[k - 2] * s;
    a.qprime[k] = gamma_[k - 2];
  }
  a.r = gamma_sq_ * core_.r_base(s) + r_lin_ * s + r_const_;
  a.rprime = gamma_sq_ * core_.drr_base(s) + r_lin_;
  a.rpp = gamma_sq_ * core_.ddr_base(s);
  // constant directions contribute no angle here: F of the full tuple equals
  // the pair value (extra factors are 1 + i * 0)
  a.f_theta = e.F;
  a.f_theta_perp = e.Fperp;
  return a;
}

SubcriticalEntireFamily::SubcriticalEntireFamily(double alpha, double beta,
                                                 std::vector<double> psi,
                                                 std::vector<double> gamma,
                                                 double r_lin, double r_const)
    : core_{alpha, beta, psi.size() > 0 ? psi[0] : 0.0, psi.size() > 1 ? psi[1] : 0.0},
      psi_(std::move(psi)),
      gamma_(std::move(gamma)),
      r_lin_(r_lin),
      r_const_(r_const) {
  require_positive(alpha, beta);
  n_ = static_cast<int>(psi_.size());
  if (n_ < 2) throw std::invalid_argument("subcritical_entire: need at least two angles");
  if (static_cast<int>(gamma_.size()) != n_ - 2)
    throw std::invalid_argument("subcritical_entire: gamma must have n-2 entries");
  detail::require_pair_angles(psi_[0], psi_[1]);
  for (int k = 2; k < n_; ++k)
    if (std::abs(psi_[k]) >= M_PI_2)
      throw std::invalid_argument("subcritical_entire: psi_k must lie in (-pi/2, pi/2)");

  theta_ = 0.0;
  for (double v : psi_) theta_ += v;
  gamma_sq_ = 1.0;
  sec_prod_ = 1.0;
  for (int k = 2; k < n_; ++k) {
    gamma_sq_ += gamma_[k - 2] * gamma_[k - 2];
    sec_prod_ /= std::cos(psi_[k]);
  }
}

AnsatzSample SubcriticalEntireFamily::at(double s) const {
  const auto e = core_.at(s);
  AnsatzSample a;
  a.s = s;
  a.p = Eigen::VectorXd::Zero(n_);
  a.pprime = Eigen::VectorXd::Zero(n_);
  a.ppp = Eigen::VectorXd::Zero(n_);
  a.q = Eigen::VectorXd::Zero(n_);
  a.qprime = Eigen::VectorXd::Zero(n_);
  a.qpp = Eigen::VectorXd::Zero(n_);
  a.p[0] = e.p1;
  a.p[1] = e.p2;
  a.pprime[0] = e.dp1;
  a.pprime[1] = e.dp2;
  a.ppp[0] = e.ddp1;
  a.ppp[1] = e.ddp2;

  double tan_gamma_sq = 0.0;  // sum tan(psi_k) gamma_k^2
  for (int k = 2; k < n_; ++k) {
    const double g = gamma_[k - 2];
    a.p[k] = std::tan(psi_[k]);
    a.q[k] = g * s / std::cos(psi_[k]);
    a.qprime[k] = g / std::cos(psi_[k]);
    tan_gamma_sq += std::tan(psi_[k]) * g * g;
  }

  a.r = gamma_sq_ * core_.r_base(s) + 0.5 * tan_gamma_sq * s * s + r_lin_ * s + r_const_;
  a.rprime = gamma_sq_ * core_.drr_base(s) + tan_gamma_sq * s + r_lin_;
  a.rpp = gamma_sq_ * core_.ddr_base(s) + tan_gamma_sq;
  a.f_theta = sec_prod_ * e.F;
  a.f_theta_perp = sec_prod_ * e.Fperp;
  return a;
}

namespace {

std::vector<double> boxed_angles(int n, double Theta) {
  if (n < 2) throw std::invalid_argument("boxed_example: n must be >= 2");
  if (std::abs(Theta) >= (n - 1) * M_PI_2)
    throw std::invalid_argument("boxed_example: |Theta| must be below (n-1) pi/2");
  return std::vector<double>(n, Theta / n);
}

}  // namespace

BoxedExampleFamily::BoxedExampleFamily(int n, double Theta)
    : n_(n),
      Theta_(Theta),
      psi_(Theta / n),
      inner_(1.0, 1.0, boxed_angles(n, Theta), std::vector<double>(n - 2, 0.0)) {}

Interval BoxedExampleFamily::domain() const { return inner_.domain(); }

AnsatzSample BoxedExampleFamily::at(double s) const { return inner_.at(s); }

BoxedExampleFamily::Display BoxedExampleFamily::display(double s) const {
  const double D = std::cos(psi_) * std::cosh(s) - std::sin(psi_) * std::sinh(s);
  const double secn = std::pow(1.0 / std::cos(psi_), n_ - 2);
  Display d;
  d.F = secn / (D * D);
  d.Fperp = secn * std::sinh(2.0 * s) / (D * D);
  d.dF12 = secn * (std::sin(psi_) * std::cosh(s) - std::cos(psi_) * std::sinh(s)) / D;
  return d;
}

Admissibility check_admissible(const FamilyConfig& cfg) {
  Admissibility adm;
  auto fail = [&](const std::string& msg) {
    adm.ok = false;
    adm.violation = msg;
    return adm;
  };
  if (!(cfg.alpha > 0.0) || !(cfg.beta > 0.0)) return fail("alpha, beta must be positive");

  const double tol = 1e-12;
  auto pair_ok = [&](double psi1, double psi2) {
    return cfg.alpha / cfg.beta + tol >= std::abs(std::tan(psi1)) &&
           cfg.beta / cfg.alpha + tol >= std::abs(std::tan(psi2));
  };

  switch (cfg.variant) {
    case FamilyVariant::N2Trig:
      break;  // bounded by construction, nothing to require
    case FamilyVariant::N2Hyperbolic:
    case FamilyVariant::HighDimLinear:
      if (cfg.psi.size() < 2) return fail("two pair angles required");
      if (!pair_ok(cfg.psi[0], cfg.psi[1]))
        return fail("entirety needs alpha/beta >= |tan psi1| and beta/alpha >= |tan psi2|");
      break;
    case FamilyVariant::SubcriticalEntire: {
      if (static_cast<int>(cfg.psi.size()) != cfg.n) return fail("need n angles");
      if (!pair_ok(cfg.psi[0], cfg.psi[1]))
        return fail("entirety needs alpha/beta >= |tan psi1| and beta/alpha >= |tan psi2|");
      double total = 0.0;
      for (int k = 0; k < cfg.n; ++k) {
        if (k >= 2 && std::abs(cfg.psi[k]) >= M_PI_2)
          return fail("constant angles must lie in (-pi/2, pi/2)");
        total += cfg.psi[k];
      }
      if (std::abs(total) >= (cfg.n - 1) * M_PI_2)
        return fail("total phase must be subcritical: |sum psi| < (n-1) pi/2");
      break;
    }
    case FamilyVariant::BoxedExample:
      if (std::abs(cfg.theta) >= (cfg.n - 1) * M_PI_2)
        return fail("|Theta| must be below (n-1) pi/2");
      if (std::abs(std::tan(cfg.theta / cfg.n)) > 1.0 + tol)
        return fail("equal-angle member is entire only for |Theta/n| <= pi/4");
      break;
  }
  return adm;
}

std::unique_ptr<AnsatzSampler> make_family(const FamilyConfig& cfg) {
  switch (cfg.variant) {
    case FamilyVariant::N2Hyperbolic:
      if (cfg.psi.size() != 2) throw std::invalid_argument("n2_hyperbolic: need two angles");
      return std::make_unique<N2HyperbolicFamily>(cfg.alpha, cfg.beta, cfg.psi[0], cfg.psi[1],
                                                  cfg.r_lin, cfg.r_const);
    case FamilyVariant::N2Trig:
      if (cfg.psi.size() != 2) throw std::invalid_argument("n2_trig: need two angles");
      return std::make_unique<N2TrigFamily>(cfg.alpha, cfg.beta, cfg.psi[0], cfg.psi[1],
                                            cfg.r_lin, cfg.r_const);
    case FamilyVariant::HighDimLinear:
      if (cfg.psi.size() != 2) throw std::invalid_argument("highdim_linear: need two angles");
      return std::make_unique<HighDimLinearFamily>(cfg.n, cfg.alpha, cfg.beta, cfg.psi[0],
                                                   cfg.psi[1], cfg.gamma, cfg.r_lin,
                                                   cfg.r_const);
    case FamilyVariant::SubcriticalEntire:
      return std::make_unique<SubcriticalEntireFamily>(cfg.alpha, cfg.beta, cfg.psi,
                                                       cfg.gamma, cfg.r_lin, cfg.r_const);
    case FamilyVariant::BoxedExample:
      return std::make_unique<BoxedExampleFamily>(cfg.n, cfg.theta);
  }
  throw std::invalid_argument("make_family: unknown variant");
}

Interval domain_of_validity(const FamilyConfig& cfg) { return make_family(cfg)->domain(); }

}  // namespace quadrics
