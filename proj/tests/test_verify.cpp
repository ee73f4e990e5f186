#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "quadrics/dhym.hpp"
#include "quadrics/errors.hpp"
#include "quadrics/families.hpp"
#include "quadrics/verify.hpp"

using namespace quadrics;

namespace {

// constant-coefficient quadratic solution: p fixed, r'' chosen so that the
// s-only part of the equation vanishes
class QuadraticSolution final : public AnsatzSampler {
 public:
  QuadraticSolution(Eigen::VectorXd p, double theta) : p_(std::move(p)), theta_(theta) {}
  int dim() const override { return static_cast<int>(p_.size()); }
  double theta() const override { return theta_; }
  AnsatzSample at(double s) const override {
    AnsatzSample a;
    a.s = s;
    a.p = p_;
    a.pprime = Eigen::VectorXd::Zero(dim());
    a.ppp = Eigen::VectorXd::Zero(dim());
    const FThetaValue v = f_theta({dim(), theta_}, p_);
    a.rpp = -v.f_perp / v.f;  // tan(theta - sum arctan p_j)
    a.rprime = a.rpp * s;
    a.r = 0.5 * a.rpp * s * s;
    a.f_theta = v.f;
    a.f_theta_perp = v.f_perp;
    return a;
  }

 private:
  Eigen::VectorXd p_;
  double theta_;
};

// wraps a sampler and shifts p_1 by a constant (a deliberate corruption)
class Corrupted final : public AnsatzSampler {
 public:
  Corrupted(const AnsatzSampler& base, double bump) : base_(base), bump_(bump) {}
  int dim() const override { return base_.dim(); }
  double theta() const override { return base_.theta(); }
  Interval domain() const override { return base_.domain(); }
  AnsatzSample at(double s) const override {
    AnsatzSample a = base_.at(s);
    a.p[0] += bump_;
    return a;
  }

 private:
  const AnsatzSampler& base_;
  double bump_;
};

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(v.size());
  int i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

}  // namespace

TEST_CASE("hessian_residual: exact quadratic solutions and the tanh family") {
  {
    const QuadraticSolution fam(vec({0.4, -0.7}), 0.3);
    const HessianCoefficients h = theta_to_coefficients({2, 0.3});
    const GridSpec grid = GridSpec::uniform(2, 2.0, 9, 2.0, 9);
    const ResidualReport rep = hessian_residual(h, fam, grid);
    CHECK(rep.scaled_max <= 1e-12);
    CHECK(rep.xi0_max <= 1e-12);
    CHECK(rep.xii_max <= 1e-12);
  }
  {
    const N2HyperbolicFamily fam(1.0, 1.0, 0.0, 0.0);
    const HessianCoefficients h = theta_to_coefficients({2, 0.0});
    const GridSpec grid = GridSpec::uniform(2, 2.0, 21, 2.0, 21);
    const ResidualReport rep = hessian_residual(h, fam, grid);
    CHECK(rep.points == 21 * 21 * 21);
    CHECK(rep.max_abs_residual <= 1e-10);
    CHECK(rep.xi0_max <= 1e-10);
    CHECK(rep.xii_max <= 1e-10);
    // phase of this family is identically zero
    CHECK(rep.phase_min == doctest::Approx(0.0).scale(1.0));
    CHECK(rep.phase_max == doctest::Approx(0.0).scale(1.0));
  }
  {
    // corrupted sampler must be detected
    const N2HyperbolicFamily fam(1.0, 1.0, 0.0, 0.0);
    const Corrupted bad(fam, 1e-3);
    const HessianCoefficients h = theta_to_coefficients({2, 0.0});
    const GridSpec grid = GridSpec::uniform(2, 2.0, 9, 2.0, 9);
    const ResidualReport rep = hessian_residual(h, bad, grid);
    CHECK(rep.max_abs_residual >= 1e-4);
  }
}

TEST_CASE("lyz_residual examples") {
  {
    const BoxedExampleFamily fam(3, 0.0);
    const GridSpec grid = GridSpec::uniform(3, 2.0, 9, 2.0, 9);
    const ResidualReport rep = lyz_residual(fam.theta(), fam, grid);
    CHECK(rep.scaled_max <= 1e-10);
    CHECK(rep.positivity_ok);
    CHECK(rep.method_disagreement <= 1e-11);
  }
  {
    const SubcriticalEntireFamily fam(1.0, 1.0, {M_PI_4, M_PI_4, 0.4 * M_PI}, {0.8});
    const GridSpec grid = GridSpec::uniform(3, 2.0, 9, 2.0, 9);
    const ResidualReport rep = lyz_residual(fam.theta(), fam, grid);
    CHECK(rep.scaled_max <= 1e-10);
    CHECK(rep.positivity_ok);
    CHECK(rep.phase_max - rep.phase_min <= 1e-8);
    CHECK(rep.phase_min == doctest::Approx(0.9 * M_PI).epsilon(1e-8));
  }
  {
    // the zero potential solves only theta = 0: residual is -sin(theta)
    const QuadraticSolution zero(vec({0.0, 0.0}), 0.0);
    for (double theta : {0.0, 0.4}) {
      AnsatzSample a = zero.at(0.3);
      a.rpp = 0.0;
      a.rprime = 0.0;
      a.r = 0.0;
      // evaluate by hand through a one-point grid on a frozen sampler
      class Frozen final : public AnsatzSampler {
       public:
        explicit Frozen(AnsatzSample a) : a_(std::move(a)) {}
        int dim() const override { return a_.dim(); }
        double theta() const override { return 0.0; }
        AnsatzSample at(double s) const override {
          AnsatzSample b = a_;
          b.s = s;
          return b;
        }
        AnsatzSample a_;
      } frozen(a);
      GridSpec grid = GridSpec::uniform(2, 0.0, 1, 0.0, 1);
      const ResidualReport rep = lyz_residual(theta, frozen, grid);
      CHECK(rep.max_abs_residual == doctest::Approx(std::abs(std::sin(theta))).scale(1.0));
    }
  }
}

TEST_CASE("coefficient form equals the determinant form") {
  // Im(e^{-i theta} det(I + iH)) computed through sigma sums equals the
  // coefficient-form residual with the angle coefficient list
  auto gen = oracles::rng(31);
  const int n = 3;
  const double theta = 0.55;
  const HessianCoefficients h = theta_to_coefficients({n, theta});
  const SubcriticalEntireFamily fam(1.0, 1.0, {0.2, -0.3, 0.25}, {0.4});
  const GridSpec grid = GridSpec::uniform(n, 1.5, 7, 1.5, 7);

  VerifyOptions opts;
  opts.keep_points = true;
  const ResidualReport a = hessian_residual(h, fam, grid, opts);
  const ResidualReport b = lyz_residual(theta, fam, grid, opts);
  REQUIRE(a.point_residuals.size() == b.point_residuals.size());
  for (size_t i = 0; i < a.point_residuals.size(); i += 13) {
    CHECK(std::abs(a.point_residuals[i] - b.point_residuals[i]) <=
          1e-11 * (1.0 + std::abs(a.point_residuals[i])));
  }
  (void)gen;
}

TEST_CASE("phase_scan examples") {
  {
    const N2HyperbolicFamily fam(1.0, 1.0, 0.0, 0.0);
    const GridSpec grid = GridSpec::uniform(2, 2.0, 9, 2.0, 9);
    const PhaseScan scan = phase_scan(fam, grid);
    CHECK(std::abs(scan.phase_min) <= 1e-9);
    CHECK(std::abs(scan.phase_max) <= 1e-9);
  }
  {
    const N2HyperbolicFamily fam(1.0, 1.0, M_PI_4, M_PI_4);
    const GridSpec grid = GridSpec::uniform(2, 2.0, 9, 2.0, 9);
    const PhaseScan scan = phase_scan(fam, grid);
    CHECK(scan.phase_min == doctest::Approx(M_PI_2).epsilon(1e-9));
    CHECK(scan.phase_max == doctest::Approx(M_PI_2).epsilon(1e-9));
  }
  {
    // eigenvalues (1, 1, 1) everywhere: phase 3 pi / 4
    const QuadraticSolution fam(vec({1.0, 1.0}), M_PI_2 + M_PI_4);
    GridSpec grid = GridSpec::uniform(2, 1.0, 3, 1.0, 3);
    // p = (1,1) and r'' = 1 gives the identity-like diagonal only at x = 0;
    // scan just the x = 0 slice
    grid.x_axes[0] = {0.0, 0.0, 1};
    grid.x_axes[1] = {0.0, 0.0, 1};
    const PhaseScan scan = phase_scan(fam, grid);
    CHECK(scan.phase_min == doctest::Approx(3.0 * M_PI_4));
    CHECK(scan.phase_max == doctest::Approx(3.0 * M_PI_4));
  }
}

TEST_CASE("grid refinement keeps the scaled residual stable") {
  const SubcriticalEntireFamily fam(1.0, 1.0, {M_PI_4, M_PI_4, 0.3}, {0.6});
  const HessianCoefficients h = theta_to_coefficients({3, fam.theta()});
  const ResidualReport coarse = hessian_residual(h, fam, GridSpec::uniform(3, 2.0, 6, 2.0, 6));
  const ResidualReport fine = hessian_residual(h, fam, GridSpec::uniform(3, 2.0, 12, 2.0, 12));
  CHECK(fine.scaled_max <= 10.0 * std::max(coarse.scaled_max, 1e-14));
}

TEST_CASE("threaded evaluation matches single-threaded") {
  const SubcriticalEntireFamily fam(1.0, 1.0, {0.2, -0.3, 0.25}, {0.4});
  const GridSpec grid = GridSpec::uniform(3, 1.5, 7, 1.5, 9);
  VerifyOptions serial, parallel;
  parallel.threads = 4;
  const ResidualReport a = lyz_residual(fam.theta(), fam, grid, serial);
  const ResidualReport b = lyz_residual(fam.theta(), fam, grid, parallel);
  CHECK(a.scaled_max == b.scaled_max);
  CHECK(a.max_abs_residual == b.max_abs_residual);
  CHECK(a.phase_min == b.phase_min);
  CHECK(a.phase_max == b.phase_max);
  CHECK(a.points == b.points);
}

TEST_CASE("monte-carlo fallback beyond six axes") {
  // n = 6 has seven axes: the sweep switches to seeded draws
  const SubcriticalEntireFamily fam(1.0, 1.0,
                                    {0.2, -0.3, 0.25, 0.1, -0.15, 0.05},
                                    {0.4, 0.2, -0.3, 0.1});
  GridSpec grid = GridSpec::uniform(6, 1.5, 5, 1.5, 5);
  VerifyOptions opts;
  opts.mc_points = 2000;
  const ResidualReport rep = lyz_residual(fam.theta(), fam, grid, opts);
  CHECK(rep.points == 2000);
  CHECK(rep.scaled_max <= 1e-10);
  // deterministic under the same seed
  const ResidualReport rep2 = lyz_residual(fam.theta(), fam, grid, opts);
  CHECK(rep.scaled_max == rep2.scaled_max);
}
