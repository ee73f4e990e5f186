// Command line front end: classify | solve | family | verify | slag.
//
// Exit codes: 0 success, 1 tolerance failure, 2 parse/file error,
// 3 invalid initial state, 4 inadmissible family parameters,
// 5 correspondence not applicable (signature or angle condition).

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "quadrics/dhym.hpp"
#include "quadrics/errors.hpp"
#include "quadrics/io.hpp"
#include "quadrics/nonrec3.hpp"
#include "quadrics/slag.hpp"
#include "quadrics/xi_quadrature.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;
using namespace quadrics;

constexpr int kExitTolerance = 1;
constexpr int kExitParse = 2;
constexpr int kExitInit = 3;
constexpr int kExitInadmissible = 4;
constexpr int kExitNotApplicable = 5;

struct GlobalOpts {
  unsigned seed = 0;
  int threads = 1;
  double rtol = 1e-10;
  double atol = 1e-12;
  std::string out_dir = ".";
};

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return j;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

json classification_json(const HessianCoefficients& h) {
  json j;
  j["n"] = h.n();
  if (h.n() == 3) {
    const NonRec3Detection det = detect3(h);
    if (!det.recursive) {
      j["recursive"] = false;
      j["degenerate_case"] =
          det.degenerate->kind == NonRec3Kind::CubicShift ? "cubic_shift" : "linear";
      if (det.degenerate->kind == NonRec3Kind::CubicShift) j["a"] = det.degenerate->a;
      return j;
    }
  }
  const DetectionResult det = detect_recursive(h);
  j["recursive"] = det.recursive();
  j["residual"] = det.residual;
  if (!det.recursive()) return j;

  j["kind"] = det.kind == RecursiveDetection::Unique ? "unique" : "family";
  j["a0"] = det.a0;
  j["a1"] = det.a1;

  RecursiveSpec spec{h.n(), det.a0, det.a1, h.c(h.n() - 1), h.c(h.n()), h.c(-1)};
  const Factorization fact = classify(spec);
  json f;
  switch (fact.kind) {
    case RecursiveCase::DistinctRoots:
      f["case"] = "distinct_roots";
      f["r1"] = {fact.r1.real(), fact.r1.imag()};
      f["r2"] = {fact.r2.real(), fact.r2.imag()};
      f["A"] = {fact.A.real(), fact.A.imag()};
      f["B"] = {fact.B.real(), fact.B.imag()};
      break;
    case RecursiveCase::RepeatedNonzeroRoot:
      f["case"] = "repeated_nonzero_root";
      f["u"] = fact.u;
      f["A"] = fact.Au;
      f["B"] = fact.Bu;
      break;
    case RecursiveCase::RepeatedZeroRoot:
      f["case"] = "repeated_zero_root";
      break;
  }
  j["factorization"] = f;
  return j;
}

int cmd_classify(const GlobalOpts& g, const std::string& equation_path) {
  HessianCoefficients h = equation_from_json(load_json(equation_path));
  const json j = classification_json(h);
  std::cout << j.dump(2) << "\n";
  write_json(fs::path(g.out_dir) / "classification.json", j);
  return 0;
}

std::optional<RecursiveSpec> detected_spec(const HessianCoefficients& h) {
  if (h.n() < 2) return std::nullopt;
  const DetectionResult det = detect_recursive(h);
  if (!det.recursive()) return std::nullopt;
  return RecursiveSpec{h.n(), det.a0, det.a1, h.c(h.n() - 1), h.c(h.n()), h.c(-1)};
}

int cmd_solve(const GlobalOpts& g, const std::string& equation_path, const std::string& p_list,
              const std::string& R_list, double r0, double rprime0, double s_from,
              double s_to, double max_step) {
  HessianCoefficients h = equation_from_json(load_json(equation_path));

  SystemState init;
  init.s = s_from;
  const auto pv = parse_list(p_list);
  const auto Rv = parse_list(R_list);
  init.p = Eigen::Map<const Eigen::VectorXd>(pv.data(), pv.size());
  init.R = Eigen::Map<const Eigen::VectorXd>(Rv.data(), Rv.size());
  init.r = r0;
  init.rprime = rprime0;
  if (init.p.size() != h.n() || init.R.size() != h.n()) {
    std::cerr << "error: init lists must have n = " << h.n() << " entries\n";
    return kExitInit;
  }

  IntegrateOptions opts;
  opts.rtol = g.rtol;
  opts.atol = g.atol;
  opts.max_step = max_step;

  Trajectory traj;
  try {
    traj = integrate(h, init, s_to, opts);
  } catch (const SingularFieldError&) {
    std::cerr << "error: F vanishes at the initial state\n";
    return kExitInit;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInit;
  }

  const std::optional<RecursiveSpec> spec = detected_spec(h);
  {
    std::ofstream csv(fs::path(g.out_dir) / "trajectory.csv");
    write_trajectory_csv(csv, traj, h, spec);
  }
  json summary = trajectory_summary(traj, h, spec);
  if (spec) {
    summary["recursive"] = {{"a0", spec->a0}, {"a1", spec->a1}};
  }
  write_json(fs::path(g.out_dir) / "summary.json", summary);
  std::cout << summary.dump(2) << "\n";
  return 0;
}

GridSpec grid_for(const AnsatzSampler& fam, double x_half, int x_count, double s_half,
                  int s_count) {
  GridSpec grid = GridSpec::uniform(fam.dim(), x_half, x_count, s_half, s_count);
  const Interval dom = fam.domain();
  // stay strictly inside a bounded domain
  if (std::isfinite(dom.lo))
    grid.s_axis.lo = std::max(grid.s_axis.lo, dom.lo + 1e-3 * (1.0 + std::abs(dom.lo)));
  if (std::isfinite(dom.hi))
    grid.s_axis.hi = std::min(grid.s_axis.hi, dom.hi - 1e-3 * (1.0 + std::abs(dom.hi)));
  return grid;
}

int cmd_family(const GlobalOpts& g, const std::string& family_path, double x_half,
               int x_count, double s_half, int s_count, double tol) {
  const FamilyConfig cfg = family_from_json(load_json(family_path));
  const Admissibility adm = check_admissible(cfg);
  if (!adm.ok) {
    std::cerr << "inadmissible family parameters: " << adm.violation << "\n";
    return kExitInadmissible;
  }
  const auto fam = make_family(cfg);
  const GridSpec grid = grid_for(*fam, x_half, x_count, s_half, s_count);

  VerifyOptions vo;
  vo.threads = g.threads;
  vo.seed = g.seed;
  const ResidualReport rep = lyz_residual(fam->theta(), *fam, grid, vo);

  // samples along s
  {
    std::ofstream csv(fs::path(g.out_dir) / "family_samples.csv");
    const int n = fam->dim();
    csv << "s";
    for (int i = 1; i <= n; ++i) csv << ",p" << i;
    for (int i = 1; i <= n; ++i) csv << ",pprime" << i;
    csv << ",r,rprime,rpp,F_theta,F_theta_perp\n";
    for (int i = 0; i < grid.s_axis.count; ++i) {
      const double s = grid.s_axis.lo +
                       (grid.s_axis.hi - grid.s_axis.lo) * i /
                           std::max(1, grid.s_axis.count - 1);
      const AnsatzSample a = fam->at(s);
      csv << format_double(s);
      for (int k = 0; k < n; ++k) csv << "," << format_double(a.p[k]);
      for (int k = 0; k < n; ++k) csv << "," << format_double(a.pprime[k]);
      csv << "," << format_double(a.r) << "," << format_double(a.rprime) << ","
          << format_double(a.rpp) << "," << format_double(a.f_theta) << ","
          << format_double(a.f_theta_perp) << "\n";
    }
  }

  json j = report_to_json(rep);
  j["theta"] = fam->theta();
  const Interval dom = fam->domain();
  j["domain"] = {{"lo", dom.lo}, {"hi", dom.hi}, {"entire", dom.entire()}};
  write_json(fs::path(g.out_dir) / "report.json", j);
  std::cout << j.dump(2) << "\n";
  return rep.scaled_max <= tol ? 0 : kExitTolerance;
}

int cmd_verify(const GlobalOpts& g, const std::string& equation_path,
               const std::string& family_path, double x_half, int x_count, double s_half,
               int s_count, double tol, bool points) {
  HessianCoefficients h = equation_from_json(load_json(equation_path));
  const FamilyConfig cfg = family_from_json(load_json(family_path));
  const auto fam = make_family(cfg);
  const GridSpec grid = grid_for(*fam, x_half, x_count, s_half, s_count);

  VerifyOptions vo;
  vo.threads = g.threads;
  vo.seed = g.seed;
  vo.keep_points = points;
  const ResidualReport rep = hessian_residual(h, *fam, grid, vo);
  json j = report_to_json(rep);
  write_json(fs::path(g.out_dir) / "report.json", j);
  if (points) {
    std::ofstream csv(fs::path(g.out_dir) / "points.csv");
    write_report_points_csv(csv, rep, grid);
  }
  std::cout << j.dump(2) << "\n";
  return rep.scaled_max <= tol ? 0 : kExitTolerance;
}

int cmd_slag(const GlobalOpts& g, const std::string& family_path, const std::string& mode,
             double x_half, int x_count, double s_half, int s_count, double tol,
             double t_extend) {
  const FamilyConfig cfg = family_from_json(load_json(family_path));
  const auto fam = make_family(cfg);

  double kappa = 0.0;
  if (const auto* hy = dynamic_cast<const N2HyperbolicFamily*>(fam.get()))
    kappa = hy->kappa();
  else if (const auto* tr = dynamic_cast<const N2TrigFamily*>(fam.get()))
    kappa = tr->kappa();

  try {
    if (mode == "residual") {
      const GridSpec grid = grid_for(*fam, x_half, x_count, s_half, s_count);
      VerifyOptions vo;
      vo.threads = g.threads;
      const ResidualReport rep = slag_residual(fam->theta(), *fam, grid, vo);
      const json j = report_to_json(rep);
      write_json(fs::path(g.out_dir) / "report.json", j);
      std::cout << j.dump(2) << "\n";
      return rep.scaled_max <= tol ? 0 : kExitTolerance;
    }

    if (mode == "joyce") {
      const Interval dom = fam->domain();
      const double lo = std::max(-s_half, std::isfinite(dom.lo) ? dom.lo + 1e-3 : -s_half);
      const double hi = std::min(s_half, std::isfinite(dom.hi) ? dom.hi - 1e-3 : s_half);
      const JoyceResidual res = joyce_residual(*fam, kappa, fam->theta(), lo, hi, 101);
      json j;
      j["w_residual"] = res.w_residual;
      j["beta_residual"] = res.beta_residual;
      write_json(fs::path(g.out_dir) / "joyce.json", j);
      std::cout << j.dump(2) << "\n";
      return std::max(res.w_residual, res.beta_residual) <= tol ? 0 : kExitTolerance;
    }

    if (mode == "extend" || mode == "pointcloud") {
      const JoyceState start = joyce_map(fam->at(0.0), kappa, fam->theta());
      const QuadricFlow fwd = evolve_quadrics(start, start.t + t_extend);
      const QuadricFlow bwd = evolve_quadrics(start, start.t - t_extend);

      std::vector<Eigen::VectorXcd> cloud;
      const int zeta_count = 9;
      double worst_phase = 0.0;
      auto emit = [&](const QuadricFlow& flow) {
        for (const auto& node : flow.nodes) {
          JoyceState js;
          js.t = node.t;
          js.w = node.w;
          js.beta = node.beta;
          for (int iz = 0; iz < zeta_count; ++iz) {
            Eigen::VectorXd zeta =
                Eigen::VectorXd::Constant(js.n(), -2.0 + 4.0 * iz / (zeta_count - 1));
            cloud.push_back(quadric_point(js, zeta));
            const std::complex<double> det = frame_determinant(js, zeta);
            worst_phase = std::max(worst_phase,
                                   std::abs(det.imag()) / (1.0 + std::abs(det)));
          }
        }
      };
      emit(bwd);
      emit(fwd);

      std::ofstream csv(fs::path(g.out_dir) / "pointcloud.csv");
      write_pointcloud_csv(csv, cloud);
      json j;
      j["points"] = cloud.size();
      j["t_range"] = {start.t - t_extend, start.t + t_extend};
      j["max_scaled_im_frame_det"] = worst_phase;
      j["min_abs_w"] = std::min(fwd.min_abs_w(), bwd.min_abs_w());
      write_json(fs::path(g.out_dir) / "extension.json", j);
      std::cout << j.dump(2) << "\n";
      return 0;
    }
  } catch (const AngleMismatchError& e) {
    std::cerr << "angle condition violated: required theta = " << e.required_theta
              << " (e^{i theta} i^n = -i)\n";
    return kExitNotApplicable;
  } catch (const NotApplicableError& e) {
    std::cerr << "not applicable: " << e.what() << "\n";
    return kExitNotApplicable;
  }

  std::cerr << "unknown slag mode: " << mode << "\n";
  return kExitParse;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quadric-ansatz solver and verifier for constant-coefficient Hessian equations"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--seed", g.seed, "seed for randomized sampling");
  app.add_option("--threads", g.threads, "data-parallel grid evaluation");
  app.add_option("--rtol", g.rtol, "integrator relative tolerance");
  app.add_option("--atol", g.atol, "integrator absolute tolerance");
  app.add_option("--out", g.out_dir, "output directory");

  std::string equation_path, family_path, p_list, R_list, mode = "residual";
  double r0 = 0.0, rprime0 = 0.0, s_from = 0.0, s_to = 1.0, max_step = 0.05;
  double x_half = 2.0, s_half = 2.0, tol = 1e-9, t_extend = 2.0;
  int x_count = 21, s_count = 21;

  CLI::App* classify = app.add_subcommand("classify", "recursive-type detection and factored form");
  classify->add_option("--equation", equation_path, "equation JSON file")->required();

  CLI::App* solve = app.add_subcommand("solve", "integrate the reduced first-order system");
  solve->add_option("--equation", equation_path)->required();
  solve->add_option("--p", p_list, "comma-separated p_i(0)")->required();
  solve->add_option("--R", R_list, "comma-separated R_i(0) = 1/p_i'(0)")->required();
  solve->add_option("--r", r0);
  solve->add_option("--rprime", rprime0);
  solve->add_option("--from", s_from);
  solve->add_option("--to", s_to)->required();
  solve->add_option("--max-step", max_step);

  CLI::App* family = app.add_subcommand("family", "sample a closed-form family and verify it");
  family->add_option("--family", family_path)->required();
  family->add_option("--x-half", x_half);
  family->add_option("--x-count", x_count);
  family->add_option("--s-half", s_half);
  family->add_option("--s-count", s_count);
  family->add_option("--tol", tol);

  CLI::App* verify = app.add_subcommand("verify", "coefficient-form residual of a family");
  verify->add_option("--equation", equation_path)->required();
  verify->add_option("--family", family_path)->required();
  verify->add_option("--x-half", x_half);
  verify->add_option("--x-count", x_count);
  verify->add_option("--s-half", s_half);
  verify->add_option("--s-count", s_count);
  verify->add_option("--tol", tol);
  bool points = false;
  verify->add_flag("--points", points, "write per-point residual CSV");

  CLI::App* slag = app.add_subcommand("slag", "special Lagrangian checks and extensions");
  slag->add_option("--family", family_path)->required();
  slag->add_option("--mode", mode, "residual | joyce | extend | pointcloud");
  slag->add_option("--x-half", x_half);
  slag->add_option("--x-count", x_count);
  slag->add_option("--s-half", s_half);
  slag->add_option("--s-count", s_count);
  slag->add_option("--tol", tol);
  slag->add_option("--t-extend", t_extend);

  CLI11_PARSE(app, argc, argv);

  try {
    std::filesystem::create_directories(g.out_dir);
    if (classify->parsed()) return cmd_classify(g, equation_path);
    if (solve->parsed())
      return cmd_solve(g, equation_path, p_list, R_list, r0, rprime0, s_from, s_to, max_step);
    if (family->parsed())
      return cmd_family(g, family_path, x_half, x_count, s_half, s_count, tol);
    if (verify->parsed())
      return cmd_verify(g, equation_path, family_path, x_half, x_count, s_half, s_count, tol,
                        points);
    if (slag->parsed())
      return cmd_slag(g, family_path, mode, x_half, x_count, s_half, s_count, tol, t_extend);
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  }
  return 0;
}
