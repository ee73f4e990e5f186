#include "quadrics/slag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "quadrics/arrowhead.hpp"
#include "quadrics/errors.hpp"

namespace quadrics {

ResidualReport slag_residual(double theta, const AnsatzSampler& sampler, const GridSpec& grid,
                             const VerifyOptions& opts) {
  // the real Hessian equals the coefficient matrix of the complex ansatz, so
  // the imaginary part of e^{-i theta} det(I + i H) is exactly the
  // alternating sigma sum; reuse the determinant sweep
  return lyz_residual(theta, sampler, grid, opts);
}

Eigen::VectorXcd graph_map(const AnsatzSample& a, const Eigen::Ref<const Eigen::VectorXd>& x) {
  const int n = a.dim();
  if (x.size() != n) throw std::invalid_argument("graph_map: dimension mismatch");
  Eigen::VectorXcd z(n + 1);
  double ds_part = a.rprime;
  for (int j = 0; j < n; ++j) {
    double grad_j = a.p[j] * x[j];
    if (a.has_linear()) grad_j += a.q[j];
    z[j] = std::complex<double>(x[j], grad_j);
    ds_part += 0.5 * x[j] * x[j] * a.pprime[j];
    if (a.has_linear()) ds_part += a.qprime[j] * x[j];
  }
  z[n] = std::complex<double>(a.s, ds_part);
  return z;
}

double joyce_required_theta(int n) {
  // e^{i theta} i^n = -i  <=>  theta = -(n+1) pi/2 (mod 2 pi), folded to (-pi, pi]
  double theta = -(n + 1) * M_PI_2;
  while (theta <= -M_PI) theta += 2.0 * M_PI;
  while (theta > M_PI) theta -= 2.0 * M_PI;
  return theta;
}

namespace {

void check_applicable(const AnsatzSample& a, double kappa, double theta) {
  if (!(kappa > 0.0)) throw NotApplicableError("quadric correspondence needs kappa > 0");
  for (int j = 0; j < a.dim(); ++j)
    if (!(a.pprime[j] > 0.0))
      throw NotApplicableError("quadric correspondence needs p_j' > 0 for all j");
  const std::complex<double> cond =
      std::polar(1.0, theta) * std::pow(std::complex<double>(0.0, 1.0), a.dim());
  if (std::abs(cond + std::complex<double>(0.0, 1.0)) > 1e-9)
    throw AngleMismatchError(joyce_required_theta(a.dim()));
}

}  // namespace

JoyceState joyce_map(const AnsatzSample& a, double kappa, double theta) {
  check_applicable(a, kappa, theta);
  const int n = a.dim();
  JoyceState js;
  js.t = std::sqrt(kappa) * a.s;
  js.w.resize(n);
  const std::complex<double> iunit(0.0, 1.0);
  for (int j = 0; j < n; ++j)
    js.w[j] = iunit * std::complex<double>(1.0, a.p[j]) / std::sqrt(a.pprime[j]);
  js.beta = iunit * std::complex<double>(a.s, a.rprime);
  return js;
}

JoyceResidual joyce_residual_at(const AnsatzSample& a, double kappa, double theta) {
  const JoyceState js = joyce_map(a, kappa, theta);
  const int n = a.dim();
  const std::complex<double> iunit(0.0, 1.0);
  const double dt_ds = std::sqrt(kappa);

  // prefix/suffix products for conj(prod_{k != j} w_k)
  std::vector<std::complex<double>> pre(n + 1), suf(n + 1);
  pre[0] = 1.0;
  for (int j = 0; j < n; ++j) pre[j + 1] = pre[j] * js.w[j];
  suf[n] = 1.0;
  for (int j = n - 1; j >= 0; --j) suf[j] = suf[j + 1] * js.w[j];

  JoyceResidual out;
  for (int j = 0; j < n; ++j) {
    // d/ds [ i (1 + i p_j) / sqrt(p_j') ]
    const double sq = std::sqrt(a.pprime[j]);
    const std::complex<double> dw_ds =
        iunit * (iunit * a.pprime[j] / sq -
                 std::complex<double>(1.0, a.p[j]) * a.ppp[j] / (2.0 * sq * a.pprime[j]));
    const std::complex<double> rhs = std::conj(pre[j] * suf[j + 1]);
    out.w_residual = std::max(out.w_residual, std::abs(dw_ds / dt_ds - rhs));
  }
  const std::complex<double> dbeta_ds = iunit * std::complex<double>(1.0, a.rpp);
  out.beta_residual = std::abs(dbeta_ds / dt_ds - std::conj(pre[n]));
  return out;
}

JoyceResidual joyce_residual(const AnsatzSampler& sampler, double kappa, double theta,
                             double s_lo, double s_hi, int samples) {
  JoyceResidual worst;
  for (int i = 0; i < samples; ++i) {
    const double s = samples == 1 ? s_lo : s_lo + (s_hi - s_lo) * i / (samples - 1);
    const JoyceResidual r = joyce_residual_at(sampler.at(s), kappa, theta);
    worst.w_residual = std::max(worst.w_residual, r.w_residual);
    worst.beta_residual = std::max(worst.beta_residual, r.beta_residual);
  }
  return worst;
}

Eigen::VectorXcd quadric_point(const JoyceState& js,
                               const Eigen::Ref<const Eigen::VectorXd>& zeta) {
  const int n = js.n();
  if (zeta.size() != n) throw std::invalid_argument("quadric_point: dimension mismatch");
  Eigen::VectorXcd z(n + 1);
  double norm_sq = 0.0;
  for (int j = 0; j < n; ++j) {
    z[j] = js.w[j] * zeta[j];
    norm_sq += zeta[j] * zeta[j];
  }
  z[n] = -0.5 * norm_sq + js.beta;
  return z;
}

namespace {

// packing for the real ODE drive: y = (Re w, Im w, Re beta, Im beta)
Eigen::VectorXd pack_quadric(const Eigen::VectorXcd& w, std::complex<double> beta) {
  const int n = static_cast<int>(w.size());
  Eigen::VectorXd y(2 * n + 2);
  for (int j = 0; j < n; ++j) {
    y[2 * j] = w[j].real();
    y[2 * j + 1] = w[j].imag();
  }
  y[2 * n] = beta.real();
  y[2 * n + 1] = beta.imag();
  return y;
}

void unpack_quadric(const Eigen::VectorXd& y, Eigen::VectorXcd& w,
                    std::complex<double>& beta) {
  const int n = (static_cast<int>(y.size()) - 2) / 2;
  w.resize(n);
  for (int j = 0; j < n; ++j) w[j] = {y[2 * j], y[2 * j + 1]};
  beta = {y[2 * n], y[2 * n + 1]};
}

void quadric_rhs(const Eigen::VectorXcd& w, Eigen::VectorXcd& dw,
                 std::complex<double>& dbeta) {
  const int n = static_cast<int>(w.size());
  std::vector<std::complex<double>> pre(n + 1), suf(n + 1);
  pre[0] = 1.0;
  for (int j = 0; j < n; ++j) pre[j + 1] = pre[j] * w[j];
  suf[n] = 1.0;
  for (int j = n - 1; j >= 0; --j) suf[j] = suf[j + 1] * w[j];
  dw.resize(n);
  for (int j = 0; j < n; ++j) dw[j] = std::conj(pre[j] * suf[j + 1]);
  dbeta = std::conj(pre[n]);
}

}  // namespace

JoyceState QuadricFlow::at(double t) const {
  if (nodes.empty()) throw std::out_of_range("QuadricFlow::at: empty flow");
  const bool fwd = nodes.back().t >= nodes.front().t;
  size_t j = 1;
  while (j + 1 < nodes.size() && (fwd ? nodes[j].t < t : nodes[j].t > t)) ++j;
  if (nodes.size() == 1) j = 0;

  JoyceState js;
  js.t = t;
  if (j == 0) {
    js.w = nodes[0].w;
    js.beta = nodes[0].beta;
    return js;
  }
  const Node& A = nodes[j - 1];
  const Node& B = nodes[j];
  const double h = B.t - A.t;
  const double u = (t - A.t) / h;
  const double u2 = u * u, u3 = u2 * u;
  const double h00 = 2 * u3 - 3 * u2 + 1, h10 = u3 - 2 * u2 + u;
  const double h01 = -2 * u3 + 3 * u2, h11 = u3 - u2;
  js.w = h00 * A.w + h10 * h * A.dw + h01 * B.w + h11 * h * B.dw;
  js.beta = h00 * A.beta + h10 * h * A.dbeta + h01 * B.beta + h11 * h * B.dbeta;
  return js;
}

double QuadricFlow::min_abs_w() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& node : nodes)
    for (int j = 0; j < node.w.size(); ++j) m = std::min(m, std::abs(node.w[j]));
  return m;
}

QuadricFlow evolve_quadrics(const JoyceState& init, double t_end, const OdeOptions& opts) {
  QuadricFlow flow;
  auto record = [&](double t, const Eigen::VectorXcd& w, std::complex<double> beta) {
    QuadricFlow::Node node;
    node.t = t;
    node.w = w;
    node.beta = beta;
    quadric_rhs(w, node.dw, node.dbeta);
    flow.nodes.push_back(std::move(node));
  };
  record(init.t, init.w, init.beta);
  if (t_end == init.t) return flow;

  auto field = [&](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) -> bool {
    Eigen::VectorXcd w, dw;
    std::complex<double> beta, dbeta;
    unpack_quadric(y, w, beta);
    quadric_rhs(w, dw, dbeta);
    dy = pack_quadric(dw, dbeta);
    return true;
  };

  auto on_step = [&](const DenseStep& step) -> bool {
    Eigen::VectorXcd w;
    std::complex<double> beta;
    unpack_quadric(step.y1, w, beta);
    record(step.s1, w, beta);
    return true;
  };

  const DriveStatus st =
      drive_rk45(field, init.t, pack_quadric(init.w, init.beta), t_end, opts, on_step);
  flow.reached_end = (st == DriveStatus::ReachedEnd);
  return flow;
}

std::complex<double> frame_determinant(const JoyceState& js,
                                       const Eigen::Ref<const Eigen::VectorXd>& zeta) {
  const int n = js.n();
  if (zeta.size() != n) throw std::invalid_argument("frame_determinant: dimension mismatch");
  Eigen::VectorXcd dw;
  std::complex<double> dbeta;
  quadric_rhs(js.w, dw, dbeta);

  // bordered-diagonal expansion: the frame matrix has columns w_j e_j - zeta_j e_{n+1}
  // and (dw_j zeta_j, ..., dbeta)
  std::complex<double> prod_w = 1.0;
  for (int j = 0; j < n; ++j) prod_w *= js.w[j];
  std::complex<double> det = dbeta * prod_w;
  for (int j = 0; j < n; ++j) {
    std::complex<double> reduced = 1.0;
    for (int k = 0; k < n; ++k)
      if (k != j) reduced *= js.w[k];
    det += zeta[j] * zeta[j] * dw[j] * reduced;
  }
  return det;
}

}  // namespace quadrics
