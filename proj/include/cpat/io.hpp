#pragma once

// Serialization of maps, radius fields and circle patterns. JSON carries every
// real number as a decimal string with the full mantissa so values read back
// bit-exactly; CSV and SVG are write-only views. Every artifact embeds its
// RunManifest.

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "cpat/pattern.hpp"

namespace cpat {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;
std::string_view tool_version();

struct RunManifest {
  std::string command;
  Json config = Json::object();
  int bits = 0;
  Json residuals = Json::object();
  double wall_seconds = 0.0;

  Json to_json() const;
  static RunManifest from_json(const Json& j);
};

/// Starts timing on construction; stamp() writes the elapsed time.
class WallClock {
public:
  WallClock() : start_(std::chrono::steady_clock::now()) {}
  void stamp(RunManifest& m) const {
    m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

private:
  std::chrono::steady_clock::time_point start_;
};

struct Artifact {
  RunManifest manifest;
  std::optional<GridMap> grid;
  std::optional<RadiusField> radii;
  std::vector<Circle> circles;
};

/// Exact decimal form of a double ("%.17g").
std::string decimal(double v);
/// Config echo with exact decimal strings.
Json config_to_json(const PatternConfig& c);
PatternConfig config_from_json(const Json& j);

Json to_json(const Artifact& a);
/// Throws Error on a missing field, a schema version mismatch or a malformed number.
Artifact artifact_from_json(const Json& j);

/// Text to a file, or to stdout when path is empty or "-". Throws Error on IO failure.
void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

void write_json(const std::string& path, const Artifact& a);
Artifact read_json(const std::string& path);

/// Manifest as leading "# key: value" lines, then a header row and the rows.
std::string csv_table(const RunManifest& m, const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows);
std::string grid_csv(const Artifact& a);
std::string radii_csv(const Artifact& a);
std::string circles_csv(const Artifact& a);

struct SvgOptions {
  bool circles = true;
  bool mesh = false;
  bool axes = false;
  double canvas = 800.0;  // width of the larger side in user units
};

/// SVG 1.1 document with 12 significant digits; y grows upwards in the model.
/// Circles need radii; the mesh needs the grid. The manifest goes into <metadata>.
std::string export_svg(const Artifact& a, const SvgOptions& options);

}  // namespace cpat
