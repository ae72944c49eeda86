#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "remote_track/closedloop.hpp"
#include "remote_track/types.hpp"

namespace rtrack {

/// Plain-data mirror of a scenario config document. Units: seconds for all
/// times, exosystem state units for boxes and lengths.
struct ScenarioConfig {
  // [exosystem]
  std::string exo_type = "vanderpol";
  double epsilon = 1.5;
  double a = 1.0;
  Vec w0_min, w0_max;
  std::optional<double> w_margin;  // absent = auto

  // [channel]
  int bits_per_sample = 0;
  double sampling_interval = 0.0;
  int expansion_pairs = 2000;
  std::uint64_t expansion_seed = 1;
  std::optional<double> m_t;       // absent = Monte Carlo estimate
  std::optional<int> levels;       // absent = derive from bits_per_sample

  // [plant]
  std::string plant_type = "integrator";
  double y_init = 0.0;

  // [internal_model]
  double blend_width = 0.5;
  double support_inflation = 1.25;

  // [gains]
  double kappa = 1.0;
  Vec hurwitz_c;
  double k = 1.0;

  // [simulation]
  double t_end = 0.0;
  double step = 1e-3;
  double t_tail = 0.0;
  Vec w_init, codec_init, xi_init;
  double state_ceiling = 1e3;

  // [second_level] (optional)
  std::optional<int> ell;
  std::optional<double> t_bar;
  std::optional<double> t_star;

  // [thresholds]
  double tracking_tail = 0.05;
  double decoder_tail = 0.02;

  bool operator==(const ScenarioConfig&) const = default;
};

/// Parses a config document. Unknown keys, missing required keys and
/// malformed values raise ConfigError with the offending key and line.
ScenarioConfig parse_config(const std::string& text,
                            const std::string& name = "<config>");

ScenarioConfig load_config_file(const std::string& path);

/// Emits a document that parses back to an identical ScenarioConfig.
std::string serialize_config(const ScenarioConfig& cfg);

/// Builds a runnable scenario. Only the vanderpol exosystem and the
/// integrator plant are recognized.
Scenario build_scenario(const ScenarioConfig& cfg);

}  // namespace rtrack
