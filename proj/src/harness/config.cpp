#include "skilldepth/harness/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace skilldepth::harness {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw std::invalid_argument("bad value for " + std::string(key) + ": '" +
                                std::string(value) + "'");
  }
  return out;
}

double parse_double(std::string_view key, std::string_view value) {
  // from_chars for double is missing from older libstdc++
  const std::string s(value);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw std::invalid_argument("bad value for " + std::string(key) + ": '" + s + "'");
  }
  return v;
}

bool apply_agent_setting(agents::AgentSpec& spec, std::string_view field, std::string_view key,
                         std::string_view value) {
  if (field.empty()) {
    const agents::AgentSpec parsed = agents::parse_agent_spec(value);
    spec.kind = parsed.kind;
    spec.iterations = parsed.iterations;
  } else if (field == "iterations") {
    spec.iterations = parse_number<int>(key, value);
  } else if (field == "rollout_depth") {
    spec.rollout_depth = parse_number<int>(key, value);
  } else if (field == "ucb") {
    spec.ucb_constant = parse_double(key, value);
  } else if (field == "seed") {
    spec.seed = parse_number<std::uint64_t>(key, value);
  } else {
    return false;
  }
  return true;
}

void append_agent(std::vector<std::pair<std::string, std::string>>& kv, const std::string& name,
                  const agents::AgentSpec& spec) {
  kv.emplace_back(name, agents::to_string(spec));
  kv.emplace_back(name + ".rollout_depth", std::to_string(spec.rollout_depth));
  kv.emplace_back(name + ".ucb", format_double(spec.ucb_constant));
  kv.emplace_back(name + ".seed", std::to_string(spec.seed));
}

}  // namespace

std::string_view algorithm_name(Algorithm a) {
  return a == Algorithm::kRmhc ? "rmhc" : "mabrmhc";
}

Algorithm algorithm_from_name(std::string_view name) {
  if (name == "rmhc") return Algorithm::kRmhc;
  if (name == "mabrmhc") return Algorithm::kMabrmhc;
  throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

game::ParamSpace ExperimentConfig::space() const {
  game::ParamSpace s = space_dims == 6 ? game::ParamSpace::six_dim() : game::ParamSpace::five_dim();
  game::GameParams base = s.base();
  base.recoil_max = recoil_max;
  std::vector<game::Dimension> dims(s.dims().begin(), s.dims().end());
  return game::ParamSpace(std::move(dims), base);
}

void ExperimentConfig::validate() const {
  if (space_dims != 5 && space_dims != 6) throw std::invalid_argument("space must be 5 or 6");
  if (resamples < 1) throw std::invalid_argument("r must be >= 1");
  if (budget <= 0) throw std::invalid_argument("budget must be > 0");
  if (trials && *trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (jobs < 1) throw std::invalid_argument("jobs must be >= 1");
  if (sample < 0) throw std::invalid_argument("sample must be >= 0");
  if (audit_games < 0) throw std::invalid_argument("audit_games must be >= 0");
  if (audit_stride < 1) throw std::invalid_argument("audit_stride must be >= 1");
  if (validate_games < 1) throw std::invalid_argument("games must be >= 1");
  if (recoil_max < 0) throw std::invalid_argument("recoil_max must be >= 0");
  for (const auto* spec : {&p1, &p2}) {
    if (spec->iterations < 1) throw std::invalid_argument("agent iterations must be >= 1");
    if (spec->rollout_depth < 1) throw std::invalid_argument("agent rollout_depth must be >= 1");
  }
}

void apply_setting(ExperimentConfig& c, std::string_view key, std::string_view value) {
  value = trim(value);
  if (key == "space") {
    c.space_dims = parse_number<int>(key, value);
  } else if (key.starts_with("p1") && (key.size() == 2 || key[2] == '.')) {
    if (!apply_agent_setting(c.p1, key.size() > 3 ? key.substr(3) : "", key, value)) {
      throw std::invalid_argument("unknown config key '" + std::string(key) + "'");
    }
  } else if (key.starts_with("p2") && (key.size() == 2 || key[2] == '.')) {
    if (!apply_agent_setting(c.p2, key.size() > 3 ? key.substr(3) : "", key, value)) {
      throw std::invalid_argument("unknown config key '" + std::string(key) + "'");
    }
  } else if (key == "algo") {
    c.algorithm = algorithm_from_name(value);
  } else if (key == "r") {
    c.resamples = parse_number<int>(key, value);
  } else if (key == "budget") {
    c.budget = parse_number<std::int64_t>(key, value);
  } else if (key == "trials") {
    if (value == "default") {
      c.trials.reset();
    } else {
      c.trials = parse_number<int>(key, value);
    }
  } else if (key == "seed") {
    c.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "jobs") {
    c.jobs = parse_number<int>(key, value);
  } else if (key == "sample") {
    c.sample = parse_number<std::int64_t>(key, value);
  } else if (key == "audit_games") {
    c.audit_games = parse_number<int>(key, value);
  } else if (key == "audit_stride") {
    c.audit_stride = parse_number<int>(key, value);
  } else if (key == "delta_mode") {
    if (value == "signed") {
      c.delta_mode = opt::DeltaMode::kSignedMax;
    } else if (value == "abs") {
      c.delta_mode = opt::DeltaMode::kAbsMax;
    } else {
      throw std::invalid_argument("delta_mode must be 'signed' or 'abs'");
    }
  } else if (key == "omega_max") {
    c.omega_max = parse_double(key, value);
  } else if (key == "games") {
    c.validate_games = parse_number<int>(key, value);
  } else if (key == "recoil_max") {
    c.recoil_max = parse_double(key, value);
  } else if (key == "out") {
    c.out = std::string(value);
  } else {
    throw std::invalid_argument("unknown config key '" + std::string(key) + "'");
  }
}

void load_config(ExperimentConfig& config, std::istream& in) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view s = trim(line);
    if (s.empty() || s.front() == '#') continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key=value");
    }
    apply_setting(config, trim(s.substr(0, eq)), s.substr(eq + 1));
  }
}

void load_config_file(ExperimentConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  load_config(config, in);
}

std::vector<std::pair<std::string, std::string>> to_key_values(const ExperimentConfig& c) {
  std::vector<std::pair<std::string, std::string>> kv;
  kv.emplace_back("space", std::to_string(c.space_dims));
  append_agent(kv, "p1", c.p1);
  append_agent(kv, "p2", c.p2);
  kv.emplace_back("algo", std::string(algorithm_name(c.algorithm)));
  kv.emplace_back("r", std::to_string(c.resamples));
  kv.emplace_back("budget", std::to_string(c.budget));
  kv.emplace_back("trials", c.trials ? std::to_string(*c.trials) : "default");
  kv.emplace_back("seed", std::to_string(c.seed));
  kv.emplace_back("jobs", std::to_string(c.jobs));
  kv.emplace_back("sample", std::to_string(c.sample));
  kv.emplace_back("audit_games", std::to_string(c.audit_games));
  kv.emplace_back("audit_stride", std::to_string(c.audit_stride));
  kv.emplace_back("delta_mode", c.delta_mode == opt::DeltaMode::kSignedMax ? "signed" : "abs");
  kv.emplace_back("omega_max", format_double(c.omega_max));
  kv.emplace_back("games", std::to_string(c.validate_games));
  kv.emplace_back("recoil_max", format_double(c.recoil_max));
  kv.emplace_back("out", c.out);
  return kv;
}

}  // namespace skilldepth::harness
