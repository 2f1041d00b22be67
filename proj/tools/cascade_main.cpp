// Command-line front end: flags and an optional key=value config file are
// folded into a RunConfig; the subcommands live in the library.

#include <cstdlib>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cascade/commands.hpp"

namespace {

constexpr int kUsageError = 2;

// CLI11 renders the effective configuration (defaults included) as
// `key=value` lines, subcommand options as `command.key`; only the global
// options and those of the chosen subcommand are kept.
std::vector<std::pair<std::string, std::string>> effective_config(const CLI::App& app,
                                                                  const std::string& command) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(app.config_to_str(true, false));
  std::string line, section;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      section = line.substr(1, line.find(']') - 1) + ".";
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string name = section + line.substr(0, eq);
    const auto dot = name.find('.');
    if (dot != std::string::npos && name.substr(0, dot) != command) continue;
    std::string value = line.substr(eq + 1);
    if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') && value.back() == value.front()) {
      value = value.substr(1, value.size() - 2);
    }
    out.emplace_back(name, value);
  }
  return out;
}

std::set<std::string> parse_formats(const std::string& text) {
  std::set<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item != "csv" && item != "json" && item != "svg") {
      throw CLI::ValidationError("--formats", "unknown format '" + item + "' (csv, json, svg)");
    }
    out.insert(item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  cascade::RunConfig cfg;
  int base = 2;
  std::string hurst = "0.7";
  std::string formats = "csv,json,svg";
  std::string out_dir = ".";

  CLI::App app{"Signed b-adic multiplicative cascades: simulation, exact moments, limit theorems"};
  app.set_version_flag("--version", cascade::kToolVersion);
  app.set_config("--config", "", "key=value configuration file; flags given on the command line win");
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--b", base, "Grid base b >= 2")->capture_default_str()->check(CLI::Range(2, 64));
  app.add_option("--H", hurst, "Hurst parameter H <= 1, or 'sym' for the fair-sign limit")->capture_default_str();
  app.add_option("--seed", cfg.params.seed, "64-bit RNG seed")->capture_default_str();
  app.add_option("--out", out_dir, "Output directory")->envname("CASCADE_OUT_DIR")->capture_default_str();
  app.add_option("--formats", formats, "Comma-separated subset of csv,json,svg")->capture_default_str();

  auto* sim = app.add_subcommand("simulate", "Sample paths B_n (or their normalized versions) per depth");
  sim->add_option("--depths", cfg.depths, "Comma-separated depths")->delimiter(',')->capture_default_str();
  sim->add_flag("--normalize", cfg.normalize, "Apply the regime normalization");
  sim->add_option("--max-points", cfg.max_points, "Decimate deeper paths by a power-of-b stride")
      ->capture_default_str();

  auto* mom = app.add_subcommand("moments", "Exact moment tables, sigma constants, Gaussian moments");
  auto* mom_n = mom->add_option("--n", cfg.n, "Largest depth")->capture_default_str();
  auto* mom_q = mom->add_option("--q", cfg.q, "Largest order")->capture_default_str();
  auto* mom_norm = mom->add_flag("--normalized", cfg.normalized, "Also tabulate E(X_n(1)^q) (H <= 1/2)");
  auto* mom_sigma = mom->add_flag("--sigma", cfg.sigma_only, "Only report the normalization constants");
  auto* mom_gauss = mom->add_flag("--gaussian", cfg.gaussian, "Even moments from the Gaussian induction");
  auto* mom_p = mom->add_option("--p", cfg.p, "Number of even moments with --gaussian")->capture_default_str();
  mom_gauss->excludes(mom_n, mom_q, mom_norm, mom_sigma);
  mom_p->needs(mom_gauss);
  mom_sigma->excludes(mom_n, mom_q, mom_norm);

  auto* clt = app.add_subcommand("clt", "Monte-Carlo checks of the limit theorems");
  clt->add_option("--test", cfg.test, "terminal | smallH | increments | residual | moments")
      ->check(CLI::IsMember({"terminal", "smallH", "increments", "residual", "moments"}));
  clt->add_option("--n", cfg.clt_depths, "Depth(s), comma-separated")->delimiter(',');
  clt->add_option("--reps", cfg.reps, "Replicas")->capture_default_str();
  clt->add_option("--p", cfg.increments_p, "Increment generation (increments)")->capture_default_str();
  clt->add_option("--m", cfg.residual_m, "Extra levels standing in for the limit (residual)")
      ->capture_default_str();
  clt->add_option("--Hs", cfg.hurst_values, "H sequence for smallH")->delimiter(',')->capture_default_str();
  clt->add_option("--q", cfg.q, "Largest order for --test moments (capped at 4)")->capture_default_str();
  clt->add_option("--threshold", cfg.d_threshold, "KS bound for terminal (0: regime default)")
      ->capture_default_str();

  auto* fr = app.add_subcommand("fractal", "Box dimension and Hoelder exponent estimates");
  fr->add_option("--n", cfg.fractal_depth, "Path depth")->capture_default_str();
  fr->add_option("--jmin", cfg.j_lo, "Smallest box / ball scale")->capture_default_str();
  fr->add_option("--jmax", cfg.j_hi, "Largest box / ball scale")->capture_default_str();
  fr->add_option("--pmin", cfg.p_lo, "Smallest increment generation")->capture_default_str();
  fr->add_option("--pmax", cfg.p_hi, "Largest increment generation")->capture_default_str();
  fr->add_option("--points", cfg.holder_points, "Pointwise estimates at (i + 1/2) / points")
      ->capture_default_str();
  fr->add_option("--box-tol", cfg.box_tol, "Bound on |dimension - (2 - H)|")->capture_default_str();
  fr->add_option("--exp-tol", cfg.exponent_tol, "Bound on |increment exponent - H|")->capture_default_str();
  fr->add_option("--holder-tol", cfg.holder_tol, "Bound on |median pointwise - H|")->capture_default_str();
  fr->add_option("--spread", cfg.holder_spread, "Bound on the sd of the pointwise estimates")
      ->capture_default_str();

  auto* den = app.add_subcommand("density", "Characteristic function and density of Z (H > 1/2)");
  den->add_option("--T", cfg.density.t_max, "Truncation |t| <= T (0: automatic)")->capture_default_str();
  den->add_option("--dt", cfg.density.step, "t step (0: pi / x range)")->capture_default_str();
  den->add_option("--x-points", cfg.density.x_points, "Density grid size")->capture_default_str();
  den->add_option("--depth", cfg.density.depth, "Starting iteration depth")->capture_default_str();
  den->add_option("--cauchy-tol", cfg.density.cauchy_tol, "Successive-depth stopping tolerance")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
    cfg.params.base = base;
    cfg.params.hurst = cascade::Hurst::parse(hurst);
    cfg.params.validate();
    cfg.formats = parse_formats(formats);
    cfg.out_dir = out_dir;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  }

  const CLI::App* chosen = app.get_subcommands().front();
  cfg.command = chosen->get_name();
  cfg.echo = effective_config(app, cfg.command);

  try {
    cascade::CommandResult r;
    if (chosen == sim) r = cascade::cmd_simulate(cfg, std::cout);
    else if (chosen == mom) r = cascade::cmd_moments(cfg, std::cout);
    else if (chosen == clt) r = cascade::cmd_clt(cfg, std::cout);
    else if (chosen == fr) r = cascade::cmd_fractal(cfg, std::cout);
    else r = cascade::cmd_density(cfg, std::cout);
    return r.exit_code;
  } catch (const cascade::RegimeError& e) {
    std::cerr << "regime mismatch: " << e.what() << '\n';
  } catch (const cascade::CapacityError& e) {
    std::cerr << "capacity: " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return kUsageError;
}
