#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "stealthgame/brd_engine.hpp"
#include "stealthgame/gaussian_model.hpp"
#include "stealthgame/grid_model.hpp"

namespace stealthgame::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitNoConvergence = 3,
  kExitInputData = 4,
};

/// Where the Jacobian comes from and how the Gaussian model is calibrated.
struct ModelFlags {
  std::string case_path;
  std::string h_matrix_path;
  double rho = 0.9;
  std::optional<double> snr_db;
  std::optional<double> sigma2;
};

struct LoadedModel {
  JacobianMatrix jacobian;
  MeasurementModel model;
  double rho = 0.0;
  double snr_db = 0.0;
};

/// Throws std::invalid_argument for flag misuse, InputError for bad files.
LoadedModel load_model(const ModelFlags& flags);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

/// Trajectory CSV: '#' metadata lines, then
///   t,player,v_1..v_m,potential,mi_global,kl_global
/// player is 1-based, 0 for the initial record.
std::string trajectory_csv(const std::vector<TrajectoryRecord>& trajectory,
                           const std::vector<std::string>& metadata);
std::vector<TrajectoryRecord> parse_trajectory_csv(const std::string& text);

/// Full command-line entry point; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stealthgame::cli
