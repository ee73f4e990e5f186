#ifndef QUADRICS_IO_HPP
#define QUADRICS_IO_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "quadrics/equations.hpp"
#include "quadrics/families.hpp"
#include "quadrics/ode.hpp"
#include "quadrics/verify.hpp"

namespace quadrics {

/// 17 significant digits: round-trip exact for binary64.
std::string format_double(double v);

// Equation files: {"n": int, "c": [c_{-1}, ..., c_n]} or
// {"n": int, "recursive": {"a0":, "a1":, "c_nm1":, "c_n":, "c_m1":}}.
HessianCoefficients equation_from_json(const nlohmann::json& j);
nlohmann::json equation_to_json(const HessianCoefficients& h);

// Family files: {"variant":, "n":, "alpha":, "beta":, "psi": [...],
// "gamma": [...], "theta":}.
FamilyConfig family_from_json(const nlohmann::json& j);
nlohmann::json family_to_json(const FamilyConfig& cfg);

/// CSV schema: s,p1..pn,R1..Rn,r,rprime,rpp,F,kappa[,xi1..xin].
void write_trajectory_csv(std::ostream& os, const Trajectory& traj,
                          const HessianCoefficients& h,
                          const std::optional<RecursiveSpec>& spec = {});

nlohmann::json trajectory_summary(const Trajectory& traj, const HessianCoefficients& h,
                                  const std::optional<RecursiveSpec>& spec = {});

nlohmann::json report_to_json(const ResidualReport& rep);

void write_report_points_csv(std::ostream& os, const ResidualReport& rep,
                             const GridSpec& grid);

/// Point clouds in C^{n+1}: re(z1),im(z1),...,re(z_{n+1}),im(z_{n+1}).
void write_pointcloud_csv(std::ostream& os, const std::vector<Eigen::VectorXcd>& points);

}  // namespace quadrics

#endif
