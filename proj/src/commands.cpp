#include "cascade/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "cascade/sampling.hpp"
#include "cascade/sign_field.hpp"

namespace cascade {

namespace {

using ojson = nlohmann::ordered_json;

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

void emit_json(const RunConfig& config, CommandResult& result, const std::string& suffix, const ojson& body) {
  if (!config.wants("json")) return;
  const auto file = config.output(suffix + ".json");
  write_json(file, config.metadata(), body);
  result.files.push_back(file);
}

void emit_csv(const RunConfig& config, CommandResult& result, const std::string& suffix, const Metadata& meta,
              const std::vector<std::string>& columns, const Eigen::MatrixXd& rows) {
  if (!config.wants("csv")) return;
  const auto file = config.output(suffix + ".csv");
  write_csv(file, meta, columns, rows);
  result.files.push_back(file);
}

void summarize(const StatReport& report, std::ostream& log) {
  log << report.test << ": " << (report.pass ? "PASS" : "FAIL") << " (" << report.sample_size << " samples, "
      << report.runtime_seconds << " s)\n";
  for (const auto& [name, bound] : report.thresholds) {
    const double v = report.statistics.at(name);
    log << "  " << name << " = " << v << "  (<= " << bound << ')' << (v <= bound ? "" : "  violated") << '\n';
  }
}

}  // namespace

Metadata RunConfig::metadata() const {
  Metadata meta(command);
  meta.add(params);
  for (const auto& [k, v] : echo) meta.add("config." + k, v);
  return meta;
}

std::filesystem::path RunConfig::output(const std::string& suffix) const {
  return out_dir / (command + "_b" + std::to_string(params.base) + "_H" + params.hurst.to_string() + "_seed" +
                    std::to_string(params.seed) + suffix);
}

CommandResult cmd_simulate(const RunConfig& config, std::ostream& log) {
  const CascadeParams& params = config.params;
  params.validate();
  if (config.depths.empty()) throw std::invalid_argument("simulate: no depths requested");
  CommandResult result;
  for (const unsigned depth : config.depths) {
    const auto start = std::chrono::steady_clock::now();
    const LeafSignField field = generate_leaf_signs(params, depth);
    const std::uint64_t stride = decimation_stride(params.base, depth, config.max_points);
    SamplePath path = build_path(field, params, stride);
    double divisor = 1.0;
    if (config.normalize) {
      divisor = normalization_divisor(params, depth);
      path = normalize_path(path, params);
    }

    Metadata meta = config.metadata();
    meta.add("depth", static_cast<long long>(depth))
        .add("kind", to_string(path.kind))
        .add("divisor", divisor)
        .add("stride", static_cast<long long>(stride))
        .add("points", static_cast<long long>(path.values.size()));
    const std::string suffix = "_n" + std::to_string(depth);
    emit_csv(config, result, suffix, meta, {"t", "value"}, path_rows(path));
    if (config.wants("svg")) {
      const auto file = config.output(suffix + ".svg");
      write_svg(file, meta, path);
      result.files.push_back(file);
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    log << "depth " << depth << ": " << path.values.size() << " points (stride " << stride << "), "
        << to_string(path.kind) << ", divisor " << format_double(divisor) << ", terminal value "
        << format_double(path.values(path.values.size() - 1)) << ", " << secs << " s\n";
  }
  return result;
}

CommandResult cmd_moments(const RunConfig& config, std::ostream& log) {
  CommandResult result;
  if (config.gaussian) {
    if (config.p < 1) throw std::invalid_argument("moments: --p must be >= 1");
    const Eigen::VectorXd m = gaussian_even_moments(config.p);
    Eigen::MatrixXd rows(m.size(), 2);
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      rows(i, 0) = 2.0 * static_cast<double>(i + 1);
      rows(i, 1) = m(i);
      log << "M(" << 2 * (i + 1) << ") = " << format_double(m(i)) << '\n';
    }
    Metadata meta = config.metadata();
    meta.add("p", static_cast<long long>(config.p));
    if (config.wants("csv")) {
      const auto file = config.out_dir / ("moments_gaussian_p" + std::to_string(config.p) + ".csv");
      write_csv(file, meta, {"order", "value"}, rows);
      result.files.push_back(file);
    }
    return result;
  }

  const CascadeParams& params = config.params;
  params.validate();
  const Regime regime = regime_of(params);
  const auto [p_plus, p_minus] = epsilon_probabilities(params);
  const double s = sigma(params);

  ojson constants;
  constants["regime"] = to_string(regime);
  constants["p_plus"] = p_plus;
  constants["p_minus"] = p_minus;
  constants["weight"] = params.weight();
  constants["sigma"] = s;
  log << "sigma = " << format_double(s) << '\n';
  if (config.sigma_only) {
    emit_json(config, result, "_constants", constants);
    return result;
  }

  if (regime == Regime::Convergent) {
    const Eigen::VectorXd limit = limit_z_moments(params, config.q);
    const Eigen::VectorXd tilde = tilde_moment_solver(params, config.q);
    constants["limit_moments"] = to_std(limit.tail(config.q));
    constants["tilde_moments"] = to_std(tilde.tail(config.q));
    for (unsigned q = 1; q <= config.q; ++q) log << "E Z^" << q << " = " << format_double(limit(q)) << '\n';
  }

  Metadata meta = config.metadata();
  meta.add("n_max", static_cast<long long>(config.n)).add("q_max", static_cast<long long>(config.q));

  const MomentTable table = z_moment_recursion(params, config.n, config.q);
  if (config.wants("csv")) {
    const auto [rows, flags] = moment_rows(table);
    Metadata m = meta;
    m.add("quantity", "E(Z_n^q)");
    const auto file = config.output("_Z.csv");
    write_csv(file, m, {"n", "q", "value", "flag"}, rows, flags);
    result.files.push_back(file);
  }
  if (config.normalized) {
    const MomentTable norm = normalized_moment_recursion(params, config.n, config.q);
    if (config.wants("csv")) {
      const auto [rows, flags] = moment_rows(norm);
      Metadata m = meta;
      m.add("quantity", "E(X_n(1)^q)");
      const auto file = config.output("_X.csv");
      write_csv(file, m, {"n", "q", "value", "flag"}, rows, flags);
      result.files.push_back(file);
    }
  }
  emit_json(config, result, "_constants", constants);
  for (const auto& f : result.files) log << "wrote " << f.string() << '\n';
  return result;
}

CommandResult cmd_clt(const RunConfig& config, std::ostream& log) {
  const CascadeParams& params = config.params;
  params.validate();
  const Regime regime = regime_of(params);
  std::string test = config.test;
  if (test.empty()) test = regime == Regime::Convergent ? "residual" : "terminal";

  const auto depths_or = [&](std::vector<unsigned> fallback) {
    return config.clt_depths.empty() ? fallback : config.clt_depths;
  };
  const auto single_depth = [&](unsigned fallback) {
    if (config.clt_depths.size() > 1) throw std::invalid_argument("clt " + test + ": takes a single --n");
    return config.clt_depths.empty() ? fallback : config.clt_depths.front();
  };

  StatReport report;
  if (test == "terminal") {
    report = clt_terminal_test(params, depths_or({8, 12, 16}), config.reps, config.d_threshold);
  } else if (test == "smallH") {
    report = clt_smallH_test(params, config.hurst_values, single_depth(16), config.reps);
  } else if (test == "increments") {
    report = increments_gaussianity(params, config.increments_p, single_depth(16), config.reps);
  } else if (test == "residual") {
    report = residual_clt_test(params, depths_or({4, 8, 12}), config.residual_m, config.reps);
  } else if (test == "moments") {
    report = empirical_vs_exact_moments(params, single_depth(10), config.reps, std::min(config.q, 4u));
  } else {
    throw std::invalid_argument("clt: unknown test '" + test + "'");
  }

  CommandResult result;
  emit_json(config, result, "_" + test, to_json(report));
  summarize(report, log);
  for (const auto& f : result.files) log << "wrote " << f.string() << '\n';
  result.exit_code = report.pass ? 0 : 1;
  return result;
}

CommandResult cmd_fractal(const RunConfig& config, std::ostream& log) {
  const CascadeParams& params = config.params;
  params.validate();
  if (regime_of(params) != Regime::Convergent) {
    throw RegimeError("fractal: the Hoelder exponent H and graph dimension 2 - H are claims about the limit path, "
                      "which exists only for 1/2 < H <= 1");
  }
  const auto start = std::chrono::steady_clock::now();
  const unsigned n = config.fractal_depth;
  const SamplePath path = build_path(generate_leaf_signs(params, n), params);
  const DimensionFit box = box_dimension(path, config.j_lo, config.j_hi);
  const DimensionFit inc = increment_scaling_exponent(path, config.p_lo, config.p_hi);
  const Eigen::VectorXd profile = holder_profile(path, config.holder_points, config.j_lo, config.j_hi);

  Eigen::VectorXd sorted = profile;
  std::sort(sorted.data(), sorted.data() + sorted.size());
  const Eigen::Index k = sorted.size();
  const double median = k % 2 ? sorted(k / 2) : 0.5 * (sorted(k / 2 - 1) + sorted(k / 2));
  const double sd = k > 1 ? std::sqrt((profile.array() - profile.mean()).square().sum() / static_cast<double>(k - 1))
                          : 0.0;

  const double h = params.hurst.value();
  StatReport report;
  report.test = "fractal";
  report.params = params;
  report.sample_size = 1;
  report.depths = {n};
  report.record("box_dimension", box.estimate);
  report.record("increment_exponent", inc.estimate);
  report.record("increment_zero_count", static_cast<double>(inc.excluded));
  report.record("holder_median", median);
  report.record("holder_min", sorted(0));
  report.record("holder_max", sorted(k - 1));
  report.check("box_dimension_error", std::fabs(box.estimate - (2.0 - h)), config.box_tol);
  report.check("increment_exponent_error", std::fabs(inc.estimate - h), config.exponent_tol);
  report.check("holder_median_error", std::fabs(median - h), config.holder_tol);
  report.check("holder_sd", sd, config.holder_spread);
  report.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  CommandResult result;
  Metadata meta = config.metadata();
  meta.add("depth", static_cast<long long>(n));
  const auto fit_rows = [](const DimensionFit& f) {
    Eigen::MatrixXd rows(f.log_values.size(), 2);
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
      rows(i, 0) = f.scales[static_cast<std::size_t>(i)];
      rows(i, 1) = f.log_values(i);
    }
    return rows;
  };
  {
    Metadata m = meta;
    m.add("estimate", box.estimate).add("r_squared", box.r_squared);
    emit_csv(config, result, "_box", m, {"j", "log_b_count"}, fit_rows(box));
  }
  {
    Metadata m = meta;
    m.add("estimate", inc.estimate).add("r_squared", inc.r_squared).add("zero_increments",
                                                                        static_cast<long long>(inc.excluded));
    emit_csv(config, result, "_increments", m, {"p", "mean_log_b_abs_increment"}, fit_rows(inc));
  }
  {
    Eigen::MatrixXd rows(profile.size(), 2);
    for (Eigen::Index i = 0; i < profile.size(); ++i) {
      rows(i, 0) = (static_cast<double>(i) + 0.5) / static_cast<double>(profile.size());
      rows(i, 1) = profile(i);
    }
    emit_csv(config, result, "_holder", meta, {"t", "estimate"}, rows);
  }
  ojson body;
  body["report"] = to_json(report);
  body["box"] = to_json(box);
  body["increments"] = to_json(inc);
  body["holder_profile"] = to_std(profile);
  emit_json(config, result, "", body);

  summarize(report, log);
  log << "box dimension " << box.estimate << " (2 - H = " << 2.0 - h << "), increment exponent " << inc.estimate
      << ", pointwise median " << median << " sd " << sd << '\n';
  result.exit_code = report.pass ? 0 : 1;
  return result;
}

CommandResult cmd_density(const RunConfig& config, std::ostream& log) {
  const CascadeParams& params = config.params;
  params.validate();
  if (regime_of(params) != Regime::Convergent) {
    throw RegimeError("density: Z = lim Z_n exists only for 1/2 < H <= 1; for H <= 1/2 the normalized "
                      "terminal value is asymptotically Gaussian instead (see `clt`)");
  }
  const auto start = std::chrono::steady_clock::now();
  const DensityResult d = density_of_Z(params, config.density);
  const double exact2 = limit_z_moments(params, 2)(2);

  StatReport report;
  report.test = "density";
  report.params = params;
  report.depths = {d.depth.depth};
  report.record("t_max", d.t_max);
  report.record("step", d.step);
  report.record("depth", d.depth.depth);
  report.record("mass", d.mass);
  report.record("mean", d.mean);
  report.record("second_moment", d.second_moment);
  report.record("exact_second_moment", exact2);
  report.record("max_imag_residue", d.max_imag_residue);
  report.record("min_density", d.density.minCoeff());
  report.check("mass_error", std::fabs(d.mass - 1.0), 1e-6);
  report.check("mean_error", std::fabs(d.mean - 1.0), 1e-4);
  report.check("second_moment_error", std::fabs(d.second_moment - exact2), 1e-3);
  report.check("tail_max", d.tail_max, config.density.tail_tol);
  report.check("depth_gap", d.depth.gap, config.density.cauchy_tol);

  ojson decay;
  try {
    const DecayFit fit = decay_fit(params);
    decay = {{"rho", fit.rho},          {"slope", fit.slope},     {"r_squared", fit.r_squared},
             {"points", fit.points},    {"t_lo", fit.t_lo},       {"t_hi", fit.t_hi},
             {"monotone_tail", fit.monotone_tail}};
    report.record("decay_rho", fit.rho);
    report.record("decay_r_squared", fit.r_squared);
  } catch (const std::runtime_error& e) {
    decay = {{"error", e.what()}};
  }
  report.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  CommandResult result;
  Metadata meta = config.metadata();
  meta.add("t_max", d.t_max).add("step", d.step).add("depth", static_cast<long long>(d.depth.depth));
  {
    Eigen::MatrixXd rows(d.x.size(), 3);
    rows << d.x, d.density, d.cdf_grid;
    emit_csv(config, result, "", meta, {"x", "density", "cdf"}, rows);
  }
  if (config.wants("csv")) {
    const CharFnGrid grid = charfn_grid(params, d.t_max, d.step, d.depth.depth);
    Eigen::MatrixXd rows(grid.t.size(), 3);
    rows << grid.t, grid.values.real(), grid.values.imag();
    emit_csv(config, result, "_charfn", meta, {"t", "re", "im"}, rows);
  }
  ojson body;
  body["report"] = to_json(report);
  body["decay_fit"] = decay;
  body["tail_negligible"] = d.tail_negligible;
  emit_json(config, result, "", body);

  summarize(report, log);
  log << "mass " << format_double(d.mass) << ", mean " << format_double(d.mean) << ", second moment "
      << format_double(d.second_moment) << " (exact " << format_double(exact2) << ")\n";
  result.exit_code = report.pass ? 0 : 1;
  return result;
}

}  // namespace cascade
