#include "quadrics/arrowhead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace quadrics {

Eigen::MatrixXcd ArrowheadMatrix::dense() const {
  const int m = n() + 1;
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(m, m);
  for (int i = 0; i < n(); ++i) {
    M(i, i) = P[i];
    M(i, m - 1) = Q[i];
    M(m - 1, i) = std::conj(Q[i]);
  }
  M(m - 1, m - 1) = R;
  return M;
}

namespace {

// Monic polynomial coefficients (decreasing degree) of prod (lambda - roots).
Eigen::VectorXd monic_from_roots(const std::vector<double>& roots) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(roots.size() + 1);
  c[0] = 1.0;
  int deg = 0;
  for (double a : roots) {
    ++deg;
    for (int k = deg; k >= 1; --k) c[k] -= a * c[k - 1];
  }
  return c;
}

}  // namespace

Eigen::VectorXd char_poly(const ArrowheadMatrix& H) {
  const int n = H.n();
  std::vector<double> roots(H.P.data(), H.P.data() + n);
  roots.push_back(H.R);
  Eigen::VectorXd coeffs = monic_from_roots(roots);  // degree n+1

  for (int i = 0; i < n; ++i) {
    const double w = std::norm(H.Q[i]);
    if (w == 0.0) continue;
    std::vector<double> sub;
    sub.reserve(n - 1);
    for (int j = 0; j < n; ++j)
      if (j != i) sub.push_back(H.P[j]);
    const Eigen::VectorXd b = monic_from_roots(sub);  // degree n-1
    for (int k = 0; k <= n - 1; ++k) coeffs[k + 2] -= w * b[k];
  }
  return coeffs;
}

Eigen::VectorXd sigma_all(const ArrowheadMatrix& H) {
  const Eigen::VectorXd coeffs = char_poly(H);
  Eigen::VectorXd sig(coeffs.size());
  double sign = 1.0;
  for (int k = 0; k < coeffs.size(); ++k) {
    sig[k] = sign * coeffs[k];
    sign = -sign;
  }
  return sig;
}

double sigma_of_hessian(const ArrowheadMatrix& H, int k) {
  if (k < 0 || k > H.n() + 1)
    throw std::out_of_range("sigma_of_hessian: k out of range");
  return sigma_all(H)[k];
}

namespace {

struct Pole {
  double position;
  double weight;
};

double secular(double lambda, double R, const std::vector<Pole>& poles) {
  double f = lambda - R;
  for (const auto& pl : poles) f -= pl.weight / (lambda - pl.position);
  return f;
}

// Root of the secular function in (a, b); f is increasing from -inf to +inf.
double bisect_secular(double a, double b, double R, const std::vector<Pole>& poles) {
  double lo = a, hi = b;
  for (int it = 0; it < 110 && lo < hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (secular(mid, R, poles) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

Eigen::VectorXd eigenvalues(const ArrowheadMatrix& H) {
  const int n = H.n();
  std::vector<double> found;
  found.reserve(n + 1);

  // Group equal diagonal entries and fold their border weights together.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return H.P[a] < H.P[b]; });

  double pscale = 1.0;
  for (int i = 0; i < n; ++i) pscale = std::max(pscale, std::abs(H.P[i]));
  const double group_tol = 8.0 * std::numeric_limits<double>::epsilon() * pscale;

  std::vector<Pole> poles;
  int i = 0;
  while (i < n) {
    int j = i;
    double w = 0.0;
    while (j < n && H.P[order[j]] - H.P[order[i]] <= group_tol) {
      w += std::norm(H.Q[order[j]]);
      ++j;
    }
    const int mult = j - i;
    const double pos = H.P[order[i]];
    if (w == 0.0) {
      for (int k = 0; k < mult; ++k) found.push_back(pos);
    } else {
      for (int k = 0; k < mult - 1; ++k) found.push_back(pos);
      poles.push_back({pos, w});
    }
    i = j;
  }

  if (poles.empty()) {
    found.push_back(H.R);
  } else {
    const double s = std::sqrt(
        std::accumulate(poles.begin(), poles.end(), 0.0,
                        [](double acc, const Pole& pl) { return acc + pl.weight; }));
    double lo = std::min(poles.front().position, H.R) - 2.0 * s - 1e-300;
    double hi = std::max(poles.back().position, H.R) + 2.0 * s + 1e-300;

    const int m = static_cast<int>(poles.size());
    for (int k = 0; k <= m; ++k) {
      double a = (k == 0) ? lo : poles[k - 1].position;
      double b = (k == m) ? hi : poles[k].position;
      // keep strictly inside the pole asymptotes
      a = std::nextafter(a, std::numeric_limits<double>::infinity());
      b = std::nextafter(b, -std::numeric_limits<double>::infinity());
      found.push_back(bisect_secular(a, b, H.R, poles));
    }
  }

  std::sort(found.begin(), found.end());
  return Eigen::Map<Eigen::VectorXd>(found.data(), static_cast<int>(found.size()));
}

double phase(const ArrowheadMatrix& H) {
  const Eigen::VectorXd lam = eigenvalues(H);
  double sum = 0.0;
  for (int k = 0; k < lam.size(); ++k) sum += std::atan(lam[k]);
  return sum;
}

ArrowheadMatrix assemble(const Eigen::Ref<const Eigen::VectorXd>& p,
                         const Eigen::Ref<const Eigen::VectorXd>& pprime,
                         const Eigen::Ref<const Eigen::VectorXd>& ppp,
                         const Eigen::Ref<const Eigen::VectorXd>& qprime,
                         const Eigen::Ref<const Eigen::VectorXd>& qpp,
                         double rpp,
                         const Eigen::Ref<const Eigen::VectorXd>& x) {
  const int n = static_cast<int>(p.size());
  const bool has_q = qprime.size() > 0;
  if (pprime.size() != n || ppp.size() != n || x.size() != n ||
      (has_q && (qprime.size() != n || qpp.size() != n)))
    throw std::invalid_argument("assemble: inconsistent lengths");

  ArrowheadMatrix H;
  H.P = p;
  H.Q.resize(n);
  H.R = rpp;
  for (int j = 0; j < n; ++j) {
    double qj = x[j] * pprime[j];
    if (has_q) qj += qprime[j];
    H.Q[j] = qj;
    H.R += 0.5 * x[j] * x[j] * ppp[j];
    if (has_q) H.R += qpp[j] * x[j];
  }
  return H;
}

}  // namespace quadrics
