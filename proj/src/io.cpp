#include "quadrics/io.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace quadrics {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

HessianCoefficients equation_from_json(const nlohmann::json& j) {
  if (!j.contains("n")) throw std::invalid_argument("equation file: missing \"n\"");
  const int n = j.at("n").get<int>();

  if (j.contains("recursive")) {
    const auto& r = j.at("recursive");
    RecursiveSpec spec;
    spec.n = n;
    spec.a0 = r.at("a0").get<double>();
    spec.a1 = r.at("a1").get<double>();
    spec.c_nm1 = r.at("c_nm1").get<double>();
    spec.c_n = r.at("c_n").get<double>();
    spec.c_m1 = r.value("c_m1", 0.0);
    return build_recursive(spec);
  }

  if (!j.contains("c"))
    throw std::invalid_argument("equation file: need \"c\" or \"recursive\"");
  const auto c = j.at("c").get<std::vector<double>>();
  if (static_cast<int>(c.size()) != n + 2)
    throw std::invalid_argument("equation file: \"c\" must list c_{-1}..c_n (n+2 numbers)");
  Eigen::VectorXd storage = Eigen::Map<const Eigen::VectorXd>(c.data(), c.size());
  return HessianCoefficients(n, std::move(storage));
}

nlohmann::json equation_to_json(const HessianCoefficients& h) {
  nlohmann::json j;
  j["n"] = h.n();
  j["c"] = std::vector<double>(h.storage().data(), h.storage().data() + h.storage().size());
  return j;
}

FamilyConfig family_from_json(const nlohmann::json& j) {
  FamilyConfig cfg;
  cfg.variant = family_variant_from_string(j.at("variant").get<std::string>());
  cfg.n = j.value("n", 2);
  cfg.alpha = j.value("alpha", 1.0);
  cfg.beta = j.value("beta", 1.0);
  if (j.contains("psi")) cfg.psi = j.at("psi").get<std::vector<double>>();
  if (j.contains("gamma")) cfg.gamma = j.at("gamma").get<std::vector<double>>();
  cfg.theta = j.value("theta", 0.0);
  cfg.r_lin = j.value("r_lin", 0.0);
  cfg.r_const = j.value("r_const", 0.0);
  return cfg;
}

nlohmann::json family_to_json(const FamilyConfig& cfg) {
  nlohmann::json j;
  j["variant"] = to_string(cfg.variant);
  j["n"] = cfg.n;
  j["alpha"] = cfg.alpha;
  j["beta"] = cfg.beta;
  j["psi"] = cfg.psi;
  j["gamma"] = cfg.gamma;
  j["theta"] = cfg.theta;
  return j;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj,
                          const HessianCoefficients& h,
                          const std::optional<RecursiveSpec>& spec) {
  const int n = h.n();
  os << "s";
  for (int i = 1; i <= n; ++i) os << ",p" << i;
  for (int i = 1; i <= n; ++i) os << ",R" << i;
  os << ",r,rprime,rpp,F,kappa";
  if (spec)
    for (int i = 1; i <= n; ++i) os << ",xi" << i;
  os << "\n";

  for (const auto& pt : traj.points) {
    const FirstIntegrals fi = first_integrals(spec, h, pt.state);
    os << format_double(pt.state.s);
    for (int i = 0; i < n; ++i) os << "," << format_double(pt.state.p[i]);
    for (int i = 0; i < n; ++i) os << "," << format_double(pt.state.R[i]);
    os << "," << format_double(pt.state.r) << "," << format_double(pt.state.rprime)
       << "," << format_double(pt.rpp) << "," << format_double(pt.F) << ","
       << format_double(fi.kappa);
    if (spec)
      for (int i = 0; i < n; ++i) os << "," << format_double(fi.xi->xi[i]);
    os << "\n";
  }
}

nlohmann::json trajectory_summary(const Trajectory& traj, const HessianCoefficients& h,
                                  const std::optional<RecursiveSpec>& spec) {
  nlohmann::json j;
  j["termination"] = to_string(traj.termination);
  if (std::isfinite(traj.s_star)) j["s_star"] = traj.s_star;
  j["points"] = traj.points.size();
  if (!traj.diagnostic.empty()) j["diagnostic"] = traj.diagnostic;
  if (!traj.points.empty()) {
    j["s_begin"] = traj.s_front();
    j["s_end"] = traj.s_back();
    const InvariantDrift drift = invariant_drift(traj, h, spec);
    nlohmann::json d;
    d["kappa_rel"] = drift.kappa_rel;
    d["hamiltonian_abs"] = drift.hamiltonian_abs;
    if (spec) {
      d["xi_offsets"] = drift.xi_offsets;
      d["xi_rhs_residual"] = drift.xi_rhs_residual;
    }
    j["invariant_drift"] = d;
  }
  return j;
}

nlohmann::json report_to_json(const ResidualReport& rep) {
  nlohmann::json j;
  j["n"] = rep.n;
  j["points"] = rep.points;
  j["max_abs_residual"] = rep.max_abs_residual;
  j["scaled_max"] = rep.scaled_max;
  j["positivity_ok"] = rep.positivity_ok;
  j["min_re"] = rep.min_re;
  j["phase_min"] = rep.phase_min;
  j["phase_max"] = rep.phase_max;
  j["xi0_max"] = rep.xi0_max;
  j["xii_max"] = rep.xii_max;
  j["method_disagreement"] = rep.method_disagreement;
  if (rep.argmax_point.size() > 0)
    j["argmax_point"] = std::vector<double>(rep.argmax_point.data(),
                                            rep.argmax_point.data() + rep.argmax_point.size());
  return j;
}

void write_report_points_csv(std::ostream& os, const ResidualReport& rep,
                             const GridSpec& grid) {
  if (rep.point_residuals.empty()) return;
  const int n = static_cast<int>(grid.x_axes.size());
  for (int i = 1; i <= n; ++i) os << "x" << i << ",";
  os << "s,residual\n";

  std::vector<std::vector<double>> axes(n);
  long x_total = 1;
  for (int j = 0; j < n; ++j) {
    auto& ax = grid.x_axes[j];
    axes[j].resize(ax.count);
    for (int i = 0; i < ax.count; ++i)
      axes[j][i] = ax.count == 1 ? 0.5 * (ax.lo + ax.hi)
                                 : ax.lo + (ax.hi - ax.lo) * i / (ax.count - 1);
    x_total *= ax.count;
  }
  for (long idx = 0; idx < static_cast<long>(rep.point_residuals.size()); ++idx) {
    const long is = idx / x_total;
    long rest = idx % x_total;
    std::vector<double> x(n);
    for (int j = n - 1; j >= 0; --j) {
      x[j] = axes[j][rest % grid.x_axes[j].count];
      rest /= grid.x_axes[j].count;
    }
    const double s =
        grid.s_axis.count == 1
            ? 0.5 * (grid.s_axis.lo + grid.s_axis.hi)
            : grid.s_axis.lo + (grid.s_axis.hi - grid.s_axis.lo) * is / (grid.s_axis.count - 1);
    for (int j = 0; j < n; ++j) os << format_double(x[j]) << ",";
    os << format_double(s) << "," << format_double(rep.point_residuals[idx]) << "\n";
  }
}

void write_pointcloud_csv(std::ostream& os, const std::vector<Eigen::VectorXcd>& points) {
  if (points.empty()) return;
  const int m = static_cast<int>(points.front().size());
  for (int i = 1; i <= m; ++i) {
    os << "re_z" << i << ",im_z" << i;
    os << (i == m ? "\n" : ",");
  }
  for (const auto& z : points) {
    for (int i = 0; i < m; ++i) {
      os << format_double(z[i].real()) << "," << format_double(z[i].imag());
      os << (i == m - 1 ? "\n" : ",");
    }
  }
}

}  // namespace quadrics
