#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "skilldepth/agents/agents.hpp"
#include "skilldepth/game/params.hpp"
#include "skilldepth/opt/optimizers.hpp"

namespace skilldepth::harness {

enum class Algorithm : std::uint8_t { kRmhc, kMabrmhc };

std::string_view algorithm_name(Algorithm a);
Algorithm algorithm_from_name(std::string_view name);

// Everything that determines an experiment's output. Serialized as flat
// key=value lines (see to_key_values) into the header of every artifact.
struct ExperimentConfig {
  int space_dims = 5;  // 5 or 6
  agents::AgentSpec p1 = agents::parse_agent_spec("olmcts:350");
  agents::AgentSpec p2 = agents::parse_agent_spec("ras");
  Algorithm algorithm = Algorithm::kRmhc;
  int resamples = 5;
  std::int64_t budget = 5000;
  // Unset means the command's own default: 11 games per point for `sweep`,
  // 30 optimisation runs for `optimize`.
  std::optional<int> trials;
  std::uint64_t seed = 1;
  int jobs = 1;
  // Points drawn for `sweep`; 0 enumerates the whole space.
  std::int64_t sample = 200;
  int audit_games = 30;
  int audit_stride = 1;
  opt::DeltaMode delta_mode = opt::DeltaMode::kSignedMax;
  double omega_max = 1e-6;
  int validate_games = 100;
  double recoil_max = 1.0;
  std::string out;

  int sweep_trials() const { return trials.value_or(11); }
  int optimize_trials() const { return trials.value_or(30); }
  game::ParamSpace space() const;
  // Throws std::invalid_argument naming the first bad field.
  void validate() const;
};

// Applies one key=value pair. Throws std::invalid_argument for an unknown
// key or a malformed value.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);

// Reads `key = value` lines; blank lines and lines starting with '#' are skipped.
void load_config(ExperimentConfig& config, std::istream& in);
void load_config_file(ExperimentConfig& config, const std::string& path);

std::vector<std::pair<std::string, std::string>> to_key_values(const ExperimentConfig& config);

std::string format_double(double v);

}  // namespace skilldepth::harness
