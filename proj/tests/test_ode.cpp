#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "quadrics/dhym.hpp"
#include "quadrics/errors.hpp"
#include "quadrics/ode.hpp"
#include "quadrics/xi_quadrature.hpp"

using namespace quadrics;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(v.size());
  int i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

SystemState state(Eigen::VectorXd p, Eigen::VectorXd R, double r = 0.0, double rp = 0.0,
                  double s = 0.0) {
  SystemState st;
  st.s = s;
  st.p = std::move(p);
  st.R = std::move(R);
  st.r = r;
  st.rprime = rp;
  return st;
}

// seed of the tanh pair: p_i = tanh s, R_i = cosh^2 s, r' = -cosh(2s)/2
SystemState tanh_seed() { return state(vec({0.0, 0.0}), vec({1.0, 1.0}), 0.0, -0.5); }

HessianCoefficients dhym_n(int n, double theta = 0.0) {
  return theta_to_coefficients({n, theta});
}

RecursiveSpec dhym_spec_n(int n, double theta = 0.0) { return theta_to_spec({n, theta}); }

}  // namespace

TEST_CASE("vector_field examples") {
  {
    const HessianCoefficients h = dhym_n(2);
    const FieldDerivative d = vector_field(h, tanh_seed());
    CHECK(d.dp.isApprox(vec({1.0, 1.0})));
    CHECK(d.dR.cwiseAbs().maxCoeff() == doctest::Approx(0.0).scale(1.0));
    CHECK(d.rpp == doctest::Approx(0.0).scale(1.0));
    CHECK(d.F == doctest::Approx(1.0));
  }
  {
    // pure sigma_n equation at the all-ones state
    const int n = 4;
    Eigen::VectorXd f = Eigen::VectorXd::Zero(n + 1);
    f[n] = 1.0;
    const auto h = HessianCoefficients::from_f_coeffs(f);
    const FieldDerivative d =
        vector_field(h, state(Eigen::VectorXd::Ones(n), Eigen::VectorXd::Ones(n)));
    for (int i = 0; i < n; ++i) CHECK(d.dR[i] == doctest::Approx(-2.0));
  }
  {
    // scaling all coefficients leaves the field unchanged
    auto gen = oracles::rng(1);
    const HessianCoefficients h = dhym_n(3, 0.4);
    const HessianCoefficients h2(3, Eigen::VectorXd(h.storage() * 3.7));
    const SystemState st = state(oracles::uniform_vec(gen, 3, -1.0, 1.0),
                                 oracles::uniform_vec(gen, 3, 0.5, 2.0));
    const FieldDerivative d1 = vector_field(h, st);
    const FieldDerivative d2 = vector_field(h2, st);
    CHECK((d1.dR - d2.dR).cwiseAbs().maxCoeff() < 1e-13);
    CHECK(d1.rpp == doctest::Approx(d2.rpp).epsilon(1e-13));
  }
  {
    // exact coefficients so F(1, 1) = 0 exactly
    const auto h = HessianCoefficients::from_f_coeffs(vec({1.0, 0.0, -1.0}));
    CHECK_THROWS_AS(vector_field(h, state(vec({1.0, 1.0}), vec({1.0, 1.0}))),
                    SingularFieldError);
  }
}

TEST_CASE("integrate reproduces the closed-form tanh pair") {
  const HessianCoefficients h = dhym_n(2);
  const Trajectory traj = integrate(h, tanh_seed(), 1.0);
  REQUIRE(traj.termination == Termination::ReachedEnd);
  const SystemState end = traj.at(1.0);
  CHECK(end.p[0] == doctest::Approx(std::tanh(1.0)).epsilon(1e-8));
  CHECK(end.p[1] == doctest::Approx(std::tanh(1.0)).epsilon(1e-8));
  CHECK(end.R[0] == doctest::Approx(std::cosh(1.0) * std::cosh(1.0)).epsilon(1e-8));
  CHECK(end.r == doctest::Approx(-std::sinh(2.0) / 4.0).epsilon(1e-7));
  CHECK(end.rprime == doctest::Approx(-std::cosh(2.0) / 2.0).epsilon(1e-8));

  for (size_t i = 1; i < traj.points.size(); ++i)
    CHECK(traj.points[i].state.s > traj.points[i - 1].state.s);
}

TEST_CASE("generic n = 3 seeds stop at finite s in both directions") {
  const HessianCoefficients h = dhym_n(3);
  const SystemState init = state(vec({1.0, 1.0, 1.0}), vec({1.0, 1.0, 1.0}));
  const Trajectory fwd = integrate(h, init, 50.0);
  const Trajectory bwd = integrate(h, init, -50.0);
  CHECK(fwd.termination != Termination::ReachedEnd);
  CHECK(bwd.termination != Termination::ReachedEnd);
  CHECK(std::isfinite(fwd.s_star));
  CHECK(std::isfinite(bwd.s_star));
}

TEST_CASE("first integrals on the tanh pair") {
  const HessianCoefficients h = dhym_n(2);
  const RecursiveSpec sp = dhym_spec_n(2);
  const Trajectory traj = integrate(h, tanh_seed(), 1.5);
  for (double s : {0.0, 0.5, 1.2}) {
    const SystemState st = traj.at(s);
    const FirstIntegrals fi = first_integrals(sp, h, st);
    CHECK(fi.kappa == doctest::Approx(1.0).epsilon(1e-7));
    REQUIRE(fi.xi.has_value());
    // xi_1 = xi_2 = cosh(2s)
    CHECK(fi.xi->xi[0] == doctest::Approx(std::cosh(2.0 * s)).epsilon(1e-7));
    CHECK(std::abs(fi.xi->offsets[1]) < 1e-7 * (1.0 + std::cosh(2.0 * s)));
    // hamiltonian = -log kappa when all the factors are positive
    CHECK(fi.hamiltonian == doctest::Approx(-std::log(fi.kappa)).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("xi_rhs_check: angle-system constants and the tanh pair") {
  const RecursiveSpec sp = dhym_spec_n(2);
  // k1 = -4 and k2 = 4 kappa: c_{n-1}^2 + c_n^2 = 1 for every theta
  const auto [k1, k2] = xi_equation_constants(sp, 1.0);
  CHECK(k1 == doctest::Approx(-4.0));
  CHECK(k2 == doctest::Approx(4.0));

  const HessianCoefficients h = dhym_n(2);
  const Trajectory traj = integrate(h, tanh_seed(), 1.5);
  for (double s : {0.3, 0.9, 1.4}) {
    const XiRhsCheck chk = xi_rhs_check(sp, h, traj.at(s));
    CHECK(std::abs(chk.residual) / chk.scale < 1e-8);
    // xi' = 2 sinh(2s) on this family
    CHECK(chk.xi_prime == doctest::Approx(2.0 * std::sinh(2.0 * s)).epsilon(1e-6));
  }
}

TEST_CASE("xi derivative is the same for every component") {
  auto gen = oracles::rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(oracles::uniform(gen, 0.0, 3.99));
    RecursiveSpec sp;
    sp.n = n;
    sp.a0 = oracles::uniform(gen, -2.0, 2.0);
    sp.a1 = oracles::uniform(gen, -2.0, 2.0);
    sp.c_nm1 = oracles::uniform(gen, -2.0, 2.0);
    sp.c_n = oracles::uniform(gen, -2.0, 2.0);
    if (std::abs(sp.c_n) + std::abs(sp.c_nm1) < 0.1) sp.c_n += 1.0;
    const HessianCoefficients h = build_recursive(sp);
    const Eigen::VectorXd p = oracles::uniform_vec(gen, n, -1.5, 1.5);
    const PolyValue F = h.F(p);
    if (std::abs(F.value) < 0.05) continue;

    double lo = 0.0, hi = 0.0, scale = 1.0;
    for (int i = 0; i < n; ++i) {
      const double q = p[i] * p[i] + sp.a1 * p[i] + sp.a0;
      const double qp = 2.0 * p[i] + sp.a1;
      const double xi_prime = (qp * F.value - 2.0 * q * F.gradient[i]) / F.value;
      if (i == 0) lo = hi = xi_prime;
      lo = std::min(lo, xi_prime);
      hi = std::max(hi, xi_prime);
      scale = std::max(scale, std::abs(xi_prime));
    }
    CHECK((hi - lo) / scale < 1e-8);
  }
}

TEST_CASE("invariant drift along random recursive trajectories") {
  auto gen = oracles::rng(88);
  int done = 0;
  for (int trial = 0; trial < 60 && done < 25; ++trial) {
    const int n = 2 + static_cast<int>(oracles::uniform(gen, 0.0, 3.99));
    const double theta = oracles::uniform(gen, -1.2, 1.2);
    const HessianCoefficients h = dhym_n(n, theta);
    const RecursiveSpec sp = dhym_spec_n(n, theta);

    SystemState init = state(oracles::uniform_vec(gen, n, -1.0, 1.0),
                             oracles::uniform_vec(gen, n, 0.5, 2.0));
    if (std::abs(h.F(init.p).value) < 0.2) continue;
    ++done;

    const Trajectory traj = integrate(h, init, 2.0);
    const InvariantDrift drift = invariant_drift(traj, h, sp);
    CHECK(drift.kappa_rel <= 1e-6);
    CHECK(drift.xi_offsets <= 1e-6);
    CHECK(drift.hamiltonian_abs <= 1e-6);
    CHECK(drift.xi_rhs_residual <= 1e-8);
  }
  CHECK(done >= 20);
}

TEST_CASE("time reversal returns to the seed") {
  const HessianCoefficients h = dhym_n(3, 0.3);
  SystemState init = state(vec({0.2, -0.3, 0.4}), vec({1.2, 0.8, -1.5}), 0.1, -0.2);
  const Trajectory fwd = integrate(h, init, 0.8);
  REQUIRE(fwd.termination == Termination::ReachedEnd);
  SystemState turn = fwd.points.back().state;
  const Trajectory back = integrate(h, turn, 0.0);
  REQUIRE(back.termination == Termination::ReachedEnd);
  const SystemState again = back.points.back().state;
  CHECK((again.p - init.p).cwiseAbs().maxCoeff() < 1e-7);
  CHECK((again.R - init.R).cwiseAbs().maxCoeff() < 1e-7);
  CHECK(again.r == doctest::Approx(init.r).epsilon(1e-7).scale(1.0));
  CHECK(again.rprime == doctest::Approx(init.rprime).epsilon(1e-7).scale(1.0));
}

TEST_CASE("xi quadrature: cosh oracle for n = 2") {
  // (xi')^2 = 4 (xi^2 - 1), started exactly on the turning point: xi = cosh(2s)
  const XiQuadrature xq(-4.0, 4.0, vec({0.0, 0.0}), 1.0, +1);
  for (double s : {-2.0, -1.3, -0.4, 0.0, 0.7, 1.1, 2.0}) {
    CHECK(xq.xi1_at(s) == doctest::Approx(std::cosh(2.0 * s)).epsilon(1e-9));
  }
  CHECK(std::isinf(xq.blowup_s(+1)));
  CHECK(std::isinf(xq.blowup_s(-1)));
}

TEST_CASE("xi quadrature: escape time against a brute-force oracle, n = 3") {
  const XiQuadrature xq(-4.0, 4.0, vec({0.0, 0.0, 0.0}), 2.0, +1);
  const double predicted = xq.blowup_s(+1);
  REQUIRE(std::isfinite(predicted));

  // Simpson sum of ds = d xi / (2 sqrt(xi^3 - 1)) over a geometric grid.
  auto g = [](double x) { return 1.0 / (2.0 * std::sqrt(x * x * x - 1.0)); };
  double s = 0.0, a = 2.0;
  const double cap = 1e12;
  while (a < cap) {
    const double b = std::min(a * 1.001, cap);
    const double m = 0.5 * (a + b);
    s += (b - a) / 6.0 * (g(a) + 4.0 * g(m) + g(b));
    a = b;
  }
  CHECK(predicted == doctest::Approx(s).epsilon(1e-3));
}

TEST_CASE("xi quadrature sampler follows a full n = 3 trajectory") {
  const HessianCoefficients h = dhym_n(3, 0.2);
  const RecursiveSpec sp = dhym_spec_n(3, 0.2);
  const SystemState init = state(vec({0.4, -0.2, 0.1}), vec({1.1, 0.9, 1.4}));

  const XiQuadrature xq = XiQuadrature::from_state(sp, h, init);
  const Trajectory traj = integrate(h, init, 3.0);
  for (size_t i = 0; i < traj.points.size(); i += 7) {
    const SystemState& st = traj.points[i].state;
    const FirstIntegrals f2 = first_integrals(sp, h, st);
    const double sampled = xq.xi1_at(st.s);
    CHECK(f2.xi->xi[0] ==
          doctest::Approx(sampled).epsilon(1e-6).scale(1.0 + std::abs(sampled)));
  }
}

TEST_CASE("blow-up prediction matches integration for angle systems, n = 3") {
  auto gen = oracles::rng(123);
  int checked = 0;
  for (int trial = 0; trial < 12 && checked < 6; ++trial) {
    const double theta = oracles::uniform(gen, -1.0, 1.0);
    const HessianCoefficients h = dhym_n(3, theta);
    const RecursiveSpec sp = dhym_spec_n(3, theta);
    SystemState init = state(oracles::uniform_vec(gen, 3, -1.2, 1.2),
                             oracles::uniform_vec(gen, 3, 0.5, 2.0));
    for (int i = 0; i < 3; ++i)
      if (oracles::uniform(gen, 0.0, 1.0) < 0.4) init.R[i] = -init.R[i];
    if (std::abs(h.F(init.p).value) < 0.3) continue;
    ++checked;

    for (int dir : {+1, -1}) {
      const BlowupPrediction pred = predict_blowup(sp, h, init, dir);
      REQUIRE(pred.kind != BlowupPrediction::Kind::None);
      const Trajectory traj = integrate(h, init, dir * 60.0);
      REQUIRE(traj.termination != Termination::ReachedEnd);
      const double observed = std::abs(traj.s_star - init.s);
      CHECK(pred.s_star == doctest::Approx(observed).epsilon(0.01));
    }
  }
  CHECK(checked >= 6);
}

TEST_CASE("n = 2 admissible seeds do not blow up") {
  const double psi1 = 0.3, psi2 = -0.2;
  const double theta = psi1 + psi2;
  const HessianCoefficients h = dhym_n(2, theta);
  const RecursiveSpec sp = dhym_spec_n(2, theta);
  SystemState init = state(vec({std::tan(psi1), std::tan(psi2)}), vec({1.0, 1.0}));
  const Trajectory fwd = integrate(h, init, 10.0);
  const Trajectory bwd = integrate(h, init, -10.0);
  CHECK(fwd.termination == Termination::ReachedEnd);
  CHECK(bwd.termination == Termination::ReachedEnd);

  const BlowupPrediction pf = predict_blowup(sp, h, init, +1);
  CHECK(std::isinf(pf.s_star));
}

TEST_CASE("zero-length range keeps only the seed") {
  const HessianCoefficients h = dhym_n(2);
  const Trajectory traj = integrate(h, tanh_seed(), 0.0);
  CHECK(traj.points.size() == 1);
  CHECK(traj.termination == Termination::ReachedEnd);
}
