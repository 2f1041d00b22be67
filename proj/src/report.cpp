#include "cascade/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace cascade {

namespace {

std::ofstream open_output(const std::filesystem::path& file) {
  if (file.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(file.parent_path(), ec);
    if (ec) throw std::runtime_error("cannot create directory " + file.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot open " + file.string() + " for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& file) {
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + file.string());
}

void write_header(std::ostream& out, const Metadata& meta, const std::vector<std::string>& columns) {
  for (const auto& [k, v] : meta.entries()) out << "# " << k << '=' << v << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << '\n';
}

nlohmann::ordered_json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

Metadata::Metadata(std::string command) {
  entries_.emplace_back("tool", "cascade");
  entries_.emplace_back("version", kToolVersion);
  entries_.emplace_back("command", std::move(command));
}

Metadata& Metadata::add(const std::string& key, const std::string& value) {
  entries_.emplace_back(key, value);
  return *this;
}

Metadata& Metadata::add(const std::string& key, double value) { return add(key, format_double(value)); }

Metadata& Metadata::add(const std::string& key, long long value) { return add(key, std::to_string(value)); }

Metadata& Metadata::add(const CascadeParams& params) {
  add("b", static_cast<long long>(params.base));
  add("H", params.hurst.to_string());
  return add("seed", std::to_string(params.seed));
}

nlohmann::ordered_json Metadata::to_json() const {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [k, v] : entries_) j[k] = v;
  return j;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(const std::filesystem::path& file, const Metadata& meta, const std::vector<std::string>& columns,
               const Eigen::MatrixXd& rows) {
  if (static_cast<std::size_t>(rows.cols()) != columns.size()) {
    throw std::invalid_argument("write_csv: column count mismatch");
  }
  auto out = open_output(file);
  write_header(out, meta, columns);
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    for (Eigen::Index j = 0; j < rows.cols(); ++j) out << (j ? "," : "") << format_double(rows(i, j));
    out << '\n';
  }
  finish(out, file);
}

void write_csv(const std::filesystem::path& file, const Metadata& meta, const std::vector<std::string>& columns,
               const Eigen::MatrixXd& rows, const std::vector<std::string>& text_column) {
  if (static_cast<std::size_t>(rows.cols()) + 1 != columns.size() ||
      text_column.size() != static_cast<std::size_t>(rows.rows())) {
    throw std::invalid_argument("write_csv: shape mismatch");
  }
  auto out = open_output(file);
  write_header(out, meta, columns);
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    for (Eigen::Index j = 0; j < rows.cols(); ++j) out << format_double(rows(i, j)) << ',';
    out << text_column[static_cast<std::size_t>(i)] << '\n';
  }
  finish(out, file);
}

void write_json(const std::filesystem::path& file, const Metadata& meta, const nlohmann::ordered_json& body) {
  auto out = open_output(file);
  nlohmann::ordered_json doc;
  doc["metadata"] = meta.to_json();
  doc["result"] = body;
  out << doc.dump(2) << '\n';
  finish(out, file);
}

void write_svg(const std::filesystem::path& file, const Metadata& meta, const SamplePath& path, int width,
               int height) {
  auto out = open_output(file);
  const double lo = path.values.minCoeff();
  const double hi = path.values.maxCoeff();
  const double span = hi > lo ? hi - lo : 1.0;
  const double margin = 10.0;
  const double w = width - 2 * margin, h = height - 2 * margin;

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<!--\n";
  for (const auto& [k, v] : meta.entries()) out << "  " << k << '=' << v << '\n';
  out << "-->\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (lo < 0.0 && hi > 0.0) {
    const double y0 = margin + h * (hi / span);
    out << "<line x1=\"" << margin << "\" y1=\"" << y0 << "\" x2=\"" << margin + w << "\" y2=\"" << y0
        << "\" stroke=\"#bbb\" stroke-width=\"0.5\"/>\n";
  }
  out << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"0.6\" points=\"";
  char buf[64];
  for (Eigen::Index i = 0; i < path.values.size(); ++i) {
    const double x = margin + w * path.time(i);
    const double y = margin + h * (hi - path.values(i)) / span;
    std::snprintf(buf, sizeof buf, "%s%.3f,%.3f", i ? " " : "", x, y);
    out << buf;
  }
  out << "\"/>\n</svg>\n";
  finish(out, file);
}

nlohmann::ordered_json to_json(const CascadeParams& params) {
  return {{"base", params.base}, {"hurst", params.hurst.to_string()}, {"seed", params.seed}};
}

nlohmann::ordered_json to_json(const StatReport& report) {
  nlohmann::ordered_json j;
  j["test"] = report.test;
  j["params"] = to_json(report.params);
  j["seed"] = report.params.seed;
  j["sample_size"] = report.sample_size;
  j["depths"] = report.depths;
  j["statistics"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.statistics) j["statistics"][k] = finite_or_null(v);
  j["thresholds"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.thresholds) j["thresholds"][k] = v;
  j["pass"] = report.pass;
  j["runtime_seconds"] = report.runtime_seconds;
  return j;
}

nlohmann::ordered_json to_json(const DimensionFit& fit) {
  nlohmann::ordered_json j;
  j["scales"] = fit.scales;
  j["log_values"] = std::vector<double>(fit.log_values.data(), fit.log_values.data() + fit.log_values.size());
  j["slope"] = fit.slope;
  j["intercept"] = fit.intercept;
  j["r_squared"] = fit.r_squared;
  j["estimate"] = fit.estimate;
  j["excluded"] = fit.excluded;
  return j;
}

Eigen::MatrixXd path_rows(const SamplePath& path) {
  Eigen::MatrixXd rows(path.values.size(), 2);
  for (Eigen::Index i = 0; i < path.values.size(); ++i) {
    rows(i, 0) = path.time(i);
    rows(i, 1) = path.values(i);
  }
  return rows;
}

std::pair<Eigen::MatrixXd, std::vector<std::string>> moment_rows(const MomentTable& table) {
  const Eigen::Index count = static_cast<Eigen::Index>(table.n_max + 1) * table.q_max;
  Eigen::MatrixXd rows(count, 3);
  std::vector<std::string> flags;
  flags.reserve(static_cast<std::size_t>(count));
  Eigen::Index r = 0;
  for (unsigned n = 0; n <= table.n_max; ++n) {
    for (unsigned q = 1; q <= table.q_max; ++q, ++r) {
      rows(r, 0) = n;
      rows(r, 1) = q;
      rows(r, 2) = table.at(n, q);
      flags.emplace_back(to_string(table.flag(n, q)));
    }
  }
  return {std::move(rows), std::move(flags)};
}

}  // namespace cascade
