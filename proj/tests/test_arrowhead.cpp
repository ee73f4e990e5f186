#include <doctest.h>

#include <algorithm>

#include "oracles.hpp"
#include "quadrics/arrowhead.hpp"

using namespace quadrics;

namespace {

ArrowheadMatrix make(const Eigen::VectorXd& P, const Eigen::VectorXd& Qre, double R) {
  ArrowheadMatrix H;
  H.P = P;
  H.Q = Qre.cast<std::complex<double>>();
  H.R = R;
  return H;
}

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(v.size());
  int i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

ArrowheadMatrix random_arrowhead(std::mt19937_64& gen, int n) {
  ArrowheadMatrix H;
  H.P = oracles::uniform_vec(gen, n, -3.0, 3.0);
  H.Q.resize(n);
  for (int i = 0; i < n; ++i)
    H.Q[i] = std::complex<double>(oracles::uniform(gen, -2.0, 2.0),
                                  oracles::uniform(gen, -2.0, 2.0));
  H.R = oracles::uniform(gen, -3.0, 3.0);
  return H;
}

double eval_poly(const Eigen::VectorXd& coeffs, double lambda) {
  double v = 0.0;
  for (int i = 0; i < coeffs.size(); ++i) v = v * lambda + coeffs[i];
  return v;
}

}  // namespace

TEST_CASE("char_poly block diagonal and 2x2 examples") {
  {
    const ArrowheadMatrix H = make(vec({1.0, 2.0}), vec({0.0, 0.0}), 3.0);
    const Eigen::VectorXd c = char_poly(H);
    // (l-1)(l-2)(l-3) = l^3 - 6 l^2 + 11 l - 6
    CHECK(c.isApprox(vec({1.0, -6.0, 11.0, -6.0})));
  }
  {
    const ArrowheadMatrix H = make(vec({0.0}), vec({1.0}), 0.0);
    const Eigen::VectorXd c = char_poly(H);
    CHECK(c.isApprox(vec({1.0, 0.0, -1.0})));  // l^2 - 1
  }
}

TEST_CASE("char_poly matches a dense determinant oracle") {
  auto gen = oracles::rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(oracles::uniform(gen, 0.0, 7.99));
    const ArrowheadMatrix H = random_arrowhead(gen, n);
    const Eigen::VectorXd c = char_poly(H);
    const Eigen::MatrixXcd M = oracles::dense_arrowhead(H.P, H.Q, H.R);
    for (int k = 0; k < 10; ++k) {
      const double lambda = oracles::uniform(gen, -5.0, 5.0);
      const std::complex<double> det = oracles::dense_det(
          lambda * Eigen::MatrixXcd::Identity(n + 1, n + 1) - M);
      const double mine = eval_poly(c, lambda);
      CHECK(mine ==
            doctest::Approx(det.real()).epsilon(1e-10).scale(1.0 + std::abs(det.real())));
      CHECK(std::abs(det.imag()) < 1e-9 * (1.0 + std::abs(det.real())));
    }
  }
}

TEST_CASE("sigma from characteristic coefficients") {
  {
    ArrowheadMatrix H = make(vec({0.0, 0.0}), vec({0.0, 0.0}), 0.0);
    for (int k = 1; k <= 3; ++k) CHECK(sigma_of_hessian(H, k) == doctest::Approx(0.0));
    CHECK(sigma_of_hessian(H, 0) == doctest::Approx(1.0));
  }
  {
    const ArrowheadMatrix H = make(vec({1.0, 2.0}), vec({0.0, 0.0}), 3.0);
    CHECK(sigma_of_hessian(H, 1) == doctest::Approx(6.0));
    CHECK(sigma_of_hessian(H, 2) == doctest::Approx(11.0));
    CHECK(sigma_of_hessian(H, 3) == doctest::Approx(6.0));
  }
  {
    const ArrowheadMatrix H = make(vec({0.0}), vec({1.0}), 0.0);
    CHECK(sigma_of_hessian(H, 1) == doctest::Approx(0.0));
    CHECK(sigma_of_hessian(H, 2) == doctest::Approx(-1.0));
  }
}

TEST_CASE("sigma_1 is the trace, sigma_{n+1} the determinant") {
  auto gen = oracles::rng(22);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(oracles::uniform(gen, 0.0, 7.99));
    const ArrowheadMatrix H = random_arrowhead(gen, n);
    const Eigen::MatrixXcd M = oracles::dense_arrowhead(H.P, H.Q, H.R);
    const double tr = M.trace().real();
    const double det = oracles::dense_det(M).real();
    CHECK(sigma_of_hessian(H, 1) ==
          doctest::Approx(tr).epsilon(1e-10).scale(1.0 + std::abs(tr)));
    CHECK(sigma_of_hessian(H, n + 1) ==
          doctest::Approx(det).epsilon(1e-10).scale(1.0 + std::abs(det)));
  }
}

TEST_CASE("eigenvalues: examples and the dense oracle") {
  {
    const ArrowheadMatrix H = make(vec({1.0, 2.0}), vec({0.0, 0.0}), 3.0);
    CHECK(eigenvalues(H).isApprox(vec({1.0, 2.0, 3.0})));
  }
  {
    const ArrowheadMatrix H = make(vec({0.0}), vec({1.0}), 0.0);
    CHECK(eigenvalues(H).isApprox(vec({-1.0, 1.0})));
  }
  auto gen = oracles::rng(33);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(oracles::uniform(gen, 0.0, 7.99));
    ArrowheadMatrix H = random_arrowhead(gen, n);
    if (trial % 4 == 0) H.Q[0] = 0.0;           // exact deflation path
    if (trial % 5 == 0 && n >= 2) H.P[1] = H.P[0];  // repeated diagonal entry
    const Eigen::VectorXd lam = eigenvalues(H);
    const Eigen::VectorXd ref =
        oracles::dense_hermitian_eigenvalues(oracles::dense_arrowhead(H.P, H.Q, H.R));
    REQUIRE(lam.size() == ref.size());
    CHECK((lam - ref).cwiseAbs().maxCoeff() <= 1e-9);

    // trace consistency
    CHECK(lam.sum() == doctest::Approx(H.P.sum() + H.R).epsilon(1e-10).scale(1.0));

    // interlacing with the sorted diagonal (weak inequalities)
    Eigen::VectorXd sortedP = H.P;
    std::sort(sortedP.data(), sortedP.data() + n);
    for (int i = 0; i < n; ++i) {
      CHECK(lam[i] <= sortedP[i] + 1e-9);
      CHECK(sortedP[i] <= lam[i + 1] + 1e-9);
    }
  }
}

TEST_CASE("phase examples and permutation invariance") {
  CHECK(phase(make(vec({0.0, 0.0}), vec({0.0, 0.0}), 0.0)) == doctest::Approx(0.0));
  CHECK(phase(make(vec({1.0, 1.0}), vec({0.0, 0.0}), 1.0)) ==
        doctest::Approx(3.0 * M_PI_4));
  CHECK(phase(make(vec({0.0}), vec({1.0}), 0.0)) == doctest::Approx(0.0).scale(1.0));

  auto gen = oracles::rng(44);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(oracles::uniform(gen, 0.0, 5.99));
    ArrowheadMatrix H = random_arrowhead(gen, n);
    const double ph = phase(H);
    // permute (P_i, Q_i) simultaneously
    ArrowheadMatrix Hp = H;
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), gen);
    for (int i = 0; i < n; ++i) {
      Hp.P[i] = H.P[idx[i]];
      Hp.Q[i] = H.Q[idx[i]];
    }
    CHECK(phase(Hp) == doctest::Approx(ph).epsilon(1e-10));
  }
}

TEST_CASE("assemble") {
  const Eigen::VectorXd empty;
  {
    // x = 0 gives diagonal plus corner
    const ArrowheadMatrix H = assemble(vec({1.0, 2.0}), vec({0.5, 0.5}), vec({0.1, 0.1}),
                                       empty, empty, 7.0, vec({0.0, 0.0}));
    CHECK(H.P.isApprox(vec({1.0, 2.0})));
    CHECK(H.Q.cwiseAbs().maxCoeff() == 0.0);
    CHECK(H.R == doctest::Approx(7.0));
  }
  {
    // tanh pair at s = 0: P = 0, Q = x, R = 0
    const ArrowheadMatrix H = assemble(vec({0.0, 0.0}), vec({1.0, 1.0}), vec({0.0, 0.0}),
                                       empty, empty, 0.0, vec({1.0, 1.0}));
    CHECK(H.P.cwiseAbs().maxCoeff() == 0.0);
    CHECK(H.Q[0].real() == doctest::Approx(1.0));
    CHECK(H.Q[1].real() == doctest::Approx(1.0));
    CHECK(H.R == doctest::Approx(0.0));
  }
  {
    // a linear term contributes its slope to the border even at p' = 0
    const ArrowheadMatrix H =
        assemble(vec({1.0, 1.0, 0.0}), vec({0.2, 0.2, 0.0}), vec({0.0, 0.0, 0.0}),
                 vec({0.0, 0.0, 0.7}), vec({0.0, 0.0, 0.0}), 0.0, vec({0.3, -0.4, 2.0}));
    CHECK(H.Q[2].real() == doctest::Approx(0.7));
  }
  CHECK_THROWS_AS(assemble(vec({1.0, 2.0}), vec({1.0}), vec({0.0, 0.0}), empty, empty, 0.0,
                           vec({0.0, 0.0})),
                  std::invalid_argument);
}
