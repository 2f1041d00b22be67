#pragma once

#include <filesystem>
#include <iosfwd>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cascade/params.hpp"
#include "cascade/report.hpp"

namespace cascade {

/// Everything a subcommand needs. Filled from flags and an optional config
/// file by the command-line front end; `echo` holds the effective
/// configuration as key/value pairs and is copied into every output header.
struct RunConfig {
  std::string command;
  CascadeParams params;
  std::filesystem::path out_dir = ".";
  std::set<std::string> formats = {"csv", "json", "svg"};
  std::vector<std::pair<std::string, std::string>> echo;

  // simulate
  std::vector<unsigned> depths = {8, 12, 18, 27};
  bool normalize = false;
  std::uint64_t max_points = std::uint64_t{1} << 16;

  // moments
  unsigned n = 20;
  unsigned q = 6;
  bool normalized = false;
  bool gaussian = false;
  unsigned p = 8;
  bool sigma_only = false;

  // clt
  std::string test;  // empty: terminal for H <= 1/2, residual otherwise
  std::vector<unsigned> clt_depths;
  std::size_t reps = 4000;
  unsigned increments_p = 4;
  unsigned residual_m = 12;
  std::vector<double> hurst_values = {0.8, 0.65, 0.55, 0.51};
  double d_threshold = 0.0;

  // fractal
  unsigned fractal_depth = 18;
  int j_lo = 4, j_hi = 12;
  int p_lo = 4, p_hi = 12;
  int holder_points = 64;
  double box_tol = 0.1;
  double exponent_tol = 0.05;
  double holder_tol = 0.1;
  double holder_spread = 0.1;

  // density
  DensityOptions density;

  bool wants(const std::string& format) const { return formats.count(format) != 0; }
  Metadata metadata() const;
  /// out_dir / (command + "_b<b>_H<H>_seed<seed>" + suffix)
  std::filesystem::path output(const std::string& suffix) const;
};

struct CommandResult {
  int exit_code = 0;  // 0 all asserted checks pass, 1 otherwise
  std::vector<std::filesystem::path> files;
};

/// Each command writes its files under config.out_dir and a short summary to
/// `log`. Invalid requests throw (std::invalid_argument, RegimeError,
/// CapacityError); IO failures throw std::runtime_error.
CommandResult cmd_simulate(const RunConfig& config, std::ostream& log);
CommandResult cmd_moments(const RunConfig& config, std::ostream& log);
CommandResult cmd_clt(const RunConfig& config, std::ostream& log);
CommandResult cmd_fractal(const RunConfig& config, std::ostream& log);
CommandResult cmd_density(const RunConfig& config, std::ostream& log);

}  // namespace cascade
