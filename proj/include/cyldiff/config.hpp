#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "cyldiff/mc_engine.hpp"
#include "cyldiff/potentials.hpp"

namespace cyldiff {

struct StripOverrides {
  int l = 6;
  double gamma = 0.81;
  double tau = 0.02;
  double kappa = 0.2;
  double delta = 0.01;
};

// Everything a subcommand needs, after config file and flag overrides.
struct RunConfig {
  SystemPotentials potentials = SystemPotentials::cos_sin();
  double epsilon = 0.02;
  double s = 1.0;
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  double beta = 0.05;
  unsigned threads = 0;
  double a = 0.55;
  int smoothness = 7;
  InitialCondition initial{InitialMode::UniformTorus, 0.0, 0.0, 0.0, 1.0};
  StripOverrides strips;
  Interval range{0.0, 1.0};
  int grid = 201;
  std::string out = ".";

  MapSystem map_system() const;
  StripParams strip_params() const;
};

// Parses a potentials list. Each entry is
//   {"which": "u"|"v"|"w", "sign": 1|-1, "k": int, "re": [c0, c1, ...], "im": [...]}
// with coefficients in ascending powers of r. An entry for only one of +-k is
// mirrored to its conjugate. The string "cos_sin" selects the built-in example.
// `where` prefixes field paths in error messages.
SystemPotentials parse_potentials(const nlohmann::json& j, const std::string& where = "potentials");

// Strict parse: unknown keys and wrong types raise ConfigError naming the
// JSON path; syntax errors report line and column.
RunConfig parse_config(const std::string& text, const std::string& source = "<config>");
RunConfig load_config(const std::string& path);

}  // namespace cyldiff
