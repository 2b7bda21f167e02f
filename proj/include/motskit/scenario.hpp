#pragma once

#include <optional>
#include <string>

#include "motskit/report.hpp"

namespace motskit {

struct SymmetrySpec {
  std::string kind = "translation";  // translation | rotation | radial | custom
  Vec3 axis = Vec3::UnitZ();
  Point center = Point::Zero();
  Vec3 b = Vec3::Zero();    // custom: x = b + A (p - center)
  Mat3 A = Mat3::Zero();
};

VectorField build_generator(const SymmetrySpec& spec, const InitialDataSet& data);

struct ScenarioConfig {
  int schema_version = 1;
  std::string name;
  CatalogEntry entry = SchwarzschildIsotropic{};
  std::optional<SymmetrySpec> symmetry;
  int ntheta = 24, nphi = 48;
  Point center = Point::Zero();
  double initial_radius = 1.0;
  int max_iterations = 50;
  double finder_tolerance = 1e-10;
  double damping = 1.0;
  double max_radius = 0.0;
  bool allow_axisymmetric = true;
  // Operator shift: a number, or subtract the principal eigenvalue.
  double shift = 0.0;
  bool cancel_principal = false;
  double variation_eps = 1e-4;
  Tolerances tol;
  std::string out_dir = "out";
};

inline constexpr int kSchemaVersion = 1;

// Throws ConfigError (including invalid catalog parameters).
ScenarioConfig parse_scenario(const Json& j);
ScenarioConfig load_scenario(const std::string& path);
Json to_json(const ScenarioConfig& cfg);

enum class Stage { FindMots, Spectrum, Verify, Report };

struct RunReport {
  Json data;    // deterministic
  Json timing;  // seconds per stage, written separately
  int exit_code = 0;
  std::string message;
};

// 0 ok, 1 config error, 2 no MOTS, 3 eigensolver failure, 4 a verifier whose
// hypotheses hold failed its conclusion.
RunReport run_scenario(const ScenarioConfig& cfg, Stage stage, bool write_files = true);

}  // namespace motskit
