#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "cascade/charfn.hpp"
#include "cascade/fractal.hpp"
#include "cascade/moments.hpp"
#include "cascade/path.hpp"
#include "cascade/stats.hpp"

namespace cascade {

inline constexpr const char* kToolVersion = "0.1.0";

/// Ordered key/value lines written at the top of every output file.
/// The first entries are always tool and version; callers append the full
/// effective configuration so that a file can be regenerated from its header.
class Metadata {
 public:
  explicit Metadata(std::string command);

  Metadata& add(const std::string& key, const std::string& value);
  Metadata& add(const std::string& key, double value);
  Metadata& add(const std::string& key, long long value);
  Metadata& add(const CascadeParams& params);

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
  nlohmann::ordered_json to_json() const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

/// %.17g: round-trips every double.
std::string format_double(double v);

/// `# key=value` header lines, then a comma-separated header row and one row
/// per matrix row. Throws std::runtime_error on IO failure.
void write_csv(const std::filesystem::path& file, const Metadata& meta, const std::vector<std::string>& columns,
               const Eigen::MatrixXd& rows);

/// CSV where the last column is text (e.g. moment table flags).
void write_csv(const std::filesystem::path& file, const Metadata& meta, const std::vector<std::string>& columns,
               const Eigen::MatrixXd& rows, const std::vector<std::string>& text_column);

/// {"metadata": {...}, "result": body}, two-space indented.
void write_json(const std::filesystem::path& file, const Metadata& meta, const nlohmann::ordered_json& body);

/// Single polyline over the stored points, metadata in a leading comment.
void write_svg(const std::filesystem::path& file, const Metadata& meta, const SamplePath& path, int width = 1000,
               int height = 400);

nlohmann::ordered_json to_json(const CascadeParams& params);
nlohmann::ordered_json to_json(const StatReport& report);
nlohmann::ordered_json to_json(const DimensionFit& fit);

/// (t, value) columns for a path.
Eigen::MatrixXd path_rows(const SamplePath& path);

/// (n, q, value) rows for q >= 1 and the matching flag strings.
std::pair<Eigen::MatrixXd, std::vector<std::string>> moment_rows(const MomentTable& table);

}  // namespace cascade
