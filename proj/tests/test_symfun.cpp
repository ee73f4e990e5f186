#include <doctest.h>

#include "oracles.hpp"
#include "quadrics/symfun.hpp"

using namespace quadrics;

namespace {
Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(v.size());
  int i = 0;
  for (double x : v) out[i++] = x;
  return out;
}
}  // namespace

TEST_CASE("elem_sym basics") {
  CHECK(elem_sym(vec({7.3, -2.0}), 0) == 1.0);
  CHECK(elem_sym(vec({2.0, 3.0}), 2) == doctest::Approx(6.0));
  // brute-force oracle value for a 2-subset sum
  const Eigen::VectorXd p = vec({1.0, 2.0, 3.0});
  CHECK(oracles::elem_sym_enumerated(p, 2) == doctest::Approx(11.0));
  CHECK(elem_sym(p, 2) == doctest::Approx(11.0));
  // out-of-range convention
  CHECK(elem_sym(p, -1) == 0.0);
  CHECK(elem_sym(p, 4) == 0.0);
}

TEST_CASE("elem_sym matches enumeration for random tuples") {
  auto gen = oracles::rng(101);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(oracles::uniform(gen, 0.0, 7.99));
    const Eigen::VectorXd p = oracles::uniform_vec(gen, n, -3.0, 3.0);
    for (int k = 0; k <= n; ++k) {
      const double expect = oracles::elem_sym_enumerated(p, k);
      CHECK(elem_sym(p, k) == doctest::Approx(expect).epsilon(1e-12));
    }
  }
}

TEST_CASE("exclusion values and conventions") {
  const Eigen::VectorXd p = vec({1.0, 2.0, 3.0});
  CHECK(elem_sym_excl(p, 1, 1) == doctest::Approx(4.0));  // 1 + 3, entry index 1 removed
  const Eigen::VectorXd q = vec({5.0, 6.0});
  CHECK(elem_sym_excl(q, -1, 0) == 0.0);
  CHECK(elem_sym_excl(q, 2, 0) == 0.0);
  CHECK_THROWS_AS(elem_sym_excl(q, 1, 2), std::out_of_range);
  CHECK_THROWS_AS(elem_sym_excl(q, 1, -1), std::out_of_range);
}

TEST_CASE("recursion identity sigma_k = p_i sigma_{k-1}(p|i) + sigma_k(p|i)") {
  auto gen = oracles::rng(202);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(oracles::uniform(gen, 0.0, 6.99));
    const Eigen::VectorXd p = oracles::uniform_vec(gen, n, -5.0, 5.0);
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k <= n; ++k) {
        const double lhs = elem_sym(p, k);
        const double rhs = p[i] * elem_sym_excl(p, k - 1, i) + elem_sym_excl(p, k, i);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("generating identity prod(t + p_j) = sum_k t^{n-k} sigma_k") {
  auto gen = oracles::rng(303);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + static_cast<int>(oracles::uniform(gen, 0.0, 6.99));
    const Eigen::VectorXd p = oracles::uniform_vec(gen, n, -2.0, 2.0);
    const Eigen::VectorXd sig = elem_sym_all(p);
    for (int tt = 0; tt < 10; ++tt) {
      const double t = oracles::uniform(gen, -2.0, 2.0);
      double prod = 1.0;
      for (int j = 0; j < n; ++j) prod *= t + p[j];
      double sum = 0.0;
      for (int k = 0; k <= n; ++k) sum += std::pow(t, n - k) * sig[k];
      CHECK(prod == doctest::Approx(sum).epsilon(1e-12));
    }
  }
}

TEST_CASE("poly_eval examples") {
  // F = 1 - p1 p2, coefficients (1, 0, -1)
  const Eigen::VectorXd c = vec({1.0, 0.0, -1.0});
  {
    const PolyValue v = poly_eval(c, vec({0.0, 0.0}));
    CHECK(v.value == doctest::Approx(1.0));
    CHECK(v.gradient[0] == doctest::Approx(0.0));
    CHECK(v.gradient[1] == doctest::Approx(0.0));
  }
  {
    const PolyValue v = poly_eval(c, vec({1.0, 2.0}));
    CHECK(v.value == doctest::Approx(-1.0));
    CHECK(v.gradient[0] == doctest::Approx(-2.0));
    CHECK(v.gradient[1] == doctest::Approx(-1.0));
  }
  {
    // pure sigma_n at the all-ones point
    const int n = 5;
    Eigen::VectorXd cs = Eigen::VectorXd::Zero(n + 1);
    cs[n] = 1.0;
    const PolyValue v = poly_eval(cs, Eigen::VectorXd::Ones(n));
    CHECK(v.value == doctest::Approx(1.0));
    for (int i = 0; i < n; ++i) CHECK(v.gradient[i] == doctest::Approx(1.0));
  }
}

TEST_CASE("poly_eval gradient matches central differences") {
  auto gen = oracles::rng(404);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + static_cast<int>(oracles::uniform(gen, 0.0, 5.99));
    const Eigen::VectorXd c = oracles::uniform_vec(gen, n + 1, -2.0, 2.0);
    const Eigen::VectorXd p = oracles::uniform_vec(gen, n, -10.0, 10.0);
    const PolyValue v = poly_eval(c, p);
    for (int i = 0; i < n; ++i) {
      const double fd = oracles::central_diff(
          [&](const Eigen::VectorXd& q) { return poly_eval(c, q).value; }, p, i);
      CHECK(v.gradient[i] == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
    }
  }
}
