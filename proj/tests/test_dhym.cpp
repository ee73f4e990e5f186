#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "quadrics/dhym.hpp"
#include "quadrics/errors.hpp"
#include "quadrics/ode.hpp"

using namespace quadrics;

namespace {
Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(v.size());
  int i = 0;
  for (double x : v) out[i++] = x;
  return out;
}
}  // namespace

TEST_CASE("f_theta examples") {
  {
    const FThetaValue v = f_theta({3, 0.0}, vec({0.0, 0.0, 0.0}));
    CHECK(v.f == doctest::Approx(1.0));
    CHECK(v.f_perp == doctest::Approx(0.0).scale(1.0));
  }
  {
    // (1+i)^2 = 2i
    const FThetaValue v = f_theta({2, 0.0}, vec({1.0, 1.0}));
    CHECK(v.f == doctest::Approx(0.0).scale(1.0));
    CHECK(v.f_perp == doctest::Approx(2.0));
  }
  {
    // (1+i)(1+2i) = -1 + 3i
    const FThetaValue v = f_theta({2, 0.0}, vec({1.0, 2.0}));
    CHECK(v.f == doctest::Approx(-1.0));
    CHECK(v.f_perp == doctest::Approx(3.0));
  }
}

TEST_CASE("theta_to_coefficients") {
  {
    const HessianCoefficients h = theta_to_coefficients({2, 0.0});
    CHECK(h.c(-1) == 0.0);  // exact quarter turns
    CHECK(h.c(0) == 1.0);
    CHECK(h.c(1) == 0.0);
    CHECK(h.c(2) == -1.0);
  }
  {
    const HessianCoefficients h = theta_to_coefficients({1, M_PI_2});
    CHECK(h.c(1) == doctest::Approx(1.0));
    CHECK(h.c(0) == doctest::Approx(0.0).scale(1.0));
  }
  {
    // theta and theta + pi give the negated coefficient list
    const HessianCoefficients a = theta_to_coefficients({4, 0.7});
    const HessianCoefficients b = theta_to_coefficients({4, 0.7 + M_PI});
    CHECK((a.storage() + b.storage()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("coefficient form matches the product form of F_theta") {
  auto gen = oracles::rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(oracles::uniform(gen, 0.0, 7.99));
    const double theta = oracles::uniform(gen, -M_PI, M_PI);
    const HessianCoefficients h = theta_to_coefficients({n, theta});
    const Eigen::VectorXd p = oracles::uniform_vec(gen, n, -3.0, 3.0);
    const FThetaValue v = f_theta({n, theta}, p);
    const PolyValue F = h.F(p);
    const PolyValue G = h.G(p);
    double prod = 1.0;
    for (int j = 0; j < n; ++j) prod *= 1.0 + p[j] * p[j];
    const double scale = 1.0 + std::sqrt(prod);
    CHECK(std::abs(F.value - v.f) < 1e-12 * scale);
    CHECK(std::abs(G.value - v.f_perp) < 1e-12 * scale);
    CHECK((F.gradient - v.grad).cwiseAbs().maxCoeff() < 1e-12 * scale);
  }
}

TEST_CASE("detect_recursive recovers (1, 0) from angle coefficients") {
  auto gen = oracles::rng(43);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + static_cast<int>(oracles::uniform(gen, 0.0, 4.99));
    const double theta = oracles::uniform(gen, -M_PI, M_PI);
    const HessianCoefficients h = theta_to_coefficients({n, theta});
    const DetectionResult det = detect_recursive(h);
    REQUIRE(det.recursive());
    if (det.kind == RecursiveDetection::Unique) {
      CHECK(det.a0 == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(det.a1 == doctest::Approx(0.0).scale(1.0));
    } else {
      // the n = 2 family contains (1, 0)
      CHECK(h.c(0) == doctest::Approx(-h.c(2)).epsilon(1e-9).scale(1.0));
    }
  }
}

TEST_CASE("angle identity residuals") {
  {
    const AngleIdentityResiduals r = angle_identity_residuals({2, 0.0}, vec({1.0, 1.0}));
    CHECK(std::abs(r.pythagorean) < 1e-12);  // 0^2 + 2^2 = 2 * 2
  }
  auto gen = oracles::rng(44);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + static_cast<int>(oracles::uniform(gen, 0.0, 7.99));
    const double theta = oracles::uniform(gen, -M_PI, M_PI);
    const Eigen::VectorXd p = oracles::uniform_vec(gen, n, -2.5, 2.5);
    const AngleIdentityResiduals r = angle_identity_residuals({n, theta}, p);
    double prod = 1.0;
    for (int j = 0; j < n; ++j) prod *= 1.0 + p[j] * p[j];
    CHECK(std::abs(r.antipodal) < 1e-12 * (1.0 + prod));
    CHECK(std::abs(r.pythagorean) < 1e-12 * (1.0 + prod));
    CHECK(std::abs(r.gradient_shift) < 1e-12 * (1.0 + prod));
  }
}

TEST_CASE("vector field from coefficients equals the direct angle field") {
  auto gen = oracles::rng(45);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(oracles::uniform(gen, 0.0, 4.99));
    const double theta = oracles::uniform(gen, -M_PI, M_PI);
    const HessianCoefficients h = theta_to_coefficients({n, theta});
    SystemState st;
    st.p = oracles::uniform_vec(gen, n, -1.5, 1.5);
    st.R = oracles::uniform_vec(gen, n, 0.4, 2.0);
    const FThetaValue v = f_theta({n, theta}, st.p);
    if (std::abs(v.f) < 0.05) continue;

    const FieldDerivative d = vector_field(h, st);
    for (int i = 0; i < n; ++i) {
      const double direct = -2.0 * v.grad[i] / v.f;
      CHECK(std::abs(d.dR[i] - direct) <= 1e-12 * (1.0 + std::abs(direct)));
    }
    CHECK(std::abs(d.rpp - (-v.f_perp / v.f)) <= 1e-12 * (1.0 + std::abs(d.rpp)));
  }
}

TEST_CASE("xi derivative equals 2 F_perp / F on angle systems") {
  auto gen = oracles::rng(46);
  const int n = 3;
  const double theta = 0.35;
  const HessianCoefficients h = theta_to_coefficients({n, theta});
  const RecursiveSpec sp = theta_to_spec({n, theta});
  for (int trial = 0; trial < 50; ++trial) {
    SystemState st;
    st.p = oracles::uniform_vec(gen, n, -1.0, 1.0);
    st.R = oracles::uniform_vec(gen, n, 0.5, 2.0);
    const FThetaValue v = f_theta({n, theta}, st.p);
    if (std::abs(v.f) < 0.1) continue;
    const XiRhsCheck chk = xi_rhs_check(sp, h, st);
    const double expected = 2.0 * v.f_perp / v.f;
    CHECK(chk.xi_prime == doctest::Approx(expected).epsilon(1e-10));
    // (xi')^2 / 4 = kappa prod(xi) - 1 at the same state
    const FirstIntegrals fi = first_integrals(sp, h, st);
    double prod = 1.0;
    for (int i = 0; i < n; ++i) prod *= fi.xi->xi[i];
    const double lhs = chk.xi_prime * chk.xi_prime / 4.0;
    const double rhs = fi.kappa * prod - 1.0;
    CHECK(std::abs(lhs - rhs) <= 1e-8 * (1.0 + std::abs(lhs) + std::abs(rhs)));
  }
}

TEST_CASE("isotropic flow: frozen and separable cases") {
  {
    // kappa' = 0 freezes phi
    const IsotropicFlow flow = isotropic_flow(3, 0.5, 0.1, 0.0, 2.0);
    CHECK_FALSE(flow.hit_forward.has_value());
    CHECK_FALSE(flow.hit_backward.has_value());
    CHECK(flow.phi_at(1.7) == doctest::Approx(0.1));
  }
  {
    // n = 2: u' = kappa' cos u never meets the boundary at finite s
    const double theta = 0.3, phi0 = 0.4, kp = 1.3;
    const IsotropicFlow flow = isotropic_flow(2, theta, phi0, kp, 3.0);
    CHECK_FALSE(flow.hit_forward.has_value());
    CHECK_FALSE(flow.hit_backward.has_value());
    const double u0 = 2.0 * phi0 - theta;
    for (double s : {-3.0, -1.5, 0.0, 0.8, 2.9}) {
      const double expect = (isotropic_n2_closed_form(u0, kp, s) + theta) / 2.0;
      CHECK(flow.phi_at(s) == doctest::Approx(expect).epsilon(1e-8).scale(1.0));
    }
  }
  {
    // n = 3 meets cos(n phi - theta) = 0 at finite s in both directions
    const IsotropicFlow flow = isotropic_flow(3, 0.0, 0.0, 1.0, 50.0);
    REQUIRE(flow.hit_forward.has_value());
    REQUIRE(flow.hit_backward.has_value());
    CHECK(*flow.hit_forward > 0.0);
    CHECK(*flow.hit_backward < 0.0);
    // u0 = 0 makes the two hits symmetric
    CHECK(*flow.hit_forward == doctest::Approx(-*flow.hit_backward).epsilon(1e-6));
  }
  CHECK_THROWS_AS(isotropic_flow(3, 0.0, M_PI / 3.0 + 0.2, 1.0, 2.0), InvalidStartError);
}

TEST_CASE("isotropic flow matches finite differences and r''") {
  const int n = 3;
  const double theta = 0.4, phi0 = 0.3, kp = 0.8;
  const IsotropicFlow flow = isotropic_flow(n, theta, phi0, kp, 1.0);
  for (double s : {-0.5, 0.0, 0.4}) {
    const double dphi = oracles::central_diff_scalar(
        [&](double x) { return flow.phi_at(x); }, s, 1e-5);
    const double u = n * flow.phi_at(s) - theta;
    const double expect = kp * std::pow(std::cos(u), 2.0 / n) / n;
    CHECK(dphi == doctest::Approx(expect).epsilon(1e-6));
    CHECK(flow.rpp_at(s) == doctest::Approx(std::tan(theta - n * flow.phi_at(s))));
  }
}

TEST_CASE("isotropic seeds stay isotropic in the full system") {
  const int n = 3;
  const double theta = 0.2;
  const HessianCoefficients h = theta_to_coefficients({n, theta});
  SystemState init;
  init.p = Eigen::VectorXd::Constant(n, 0.3);
  init.R = Eigen::VectorXd::Constant(n, 1.2);
  const Trajectory traj = integrate(h, init, 0.5);
  for (const auto& pt : traj.points) {
    CHECK(std::abs(pt.state.p[0] - pt.state.p[1]) < 1e-9);
    CHECK(std::abs(pt.state.p[0] - pt.state.p[2]) < 1e-9);
  }
}
