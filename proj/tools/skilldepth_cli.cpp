// skilldepth: command-line front end for the game-tuning workbench.
//
// Settings are resolved in order: built-in defaults, then --config file,
// then command-line flags. Errors go to stderr as a single line
//   error: kind=<usage|input|runtime> message="..."
// with exit status 2 for usage errors and 1 otherwise.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "skilldepth/eval/evaluation.hpp"
#include "skilldepth/game/kernels.hpp"
#include "skilldepth/game/trace.hpp"
#include "skilldepth/harness/config.hpp"
#include "skilldepth/harness/experiments.hpp"

namespace {

using namespace skilldepth;
using harness::ExperimentConfig;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c == '\n' ? ' ' : c;
  }
  return out + '"';
}

void report_error(const char* kind, const std::string& message) {
  std::cerr << "error: kind=" << kind << " message=" << quoted(message) << '\n';
}

// Flags are kept as strings and routed through apply_setting, so the CLI
// and the config file share one parser and one set of error messages.
class Settings {
 public:
  void add(CLI::App* app, const std::string& flag, const std::string& key,
           const std::string& help) {
    app->add_option(flag, values_[key], help);
    keys_.emplace_back(app, flag, key);
  }

  void apply(ExperimentConfig& config) const {
    for (const auto& [app, flag, key] : keys_) {
      if (app->parsed() && app->count(flag) > 0) {
        harness::apply_setting(config, key, values_.at(key));
      }
    }
  }

 private:
  std::map<std::string, std::string> values_;
  std::vector<std::tuple<CLI::App*, std::string, std::string>> keys_;
};

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  return out;
}

// Writes to config.out when set, otherwise to stdout.
template <typename Fn>
void emit(const ExperimentConfig& config, Fn&& write) {
  if (config.out.empty()) {
    write(std::cout);
  } else {
    std::ofstream out = open_output(config.out);
    write(out);
  }
}

game::GameParams play_params(const ExperimentConfig& config, const std::string& genome) {
  const game::ParamSpace space = config.space();
  if (genome.empty()) return space.base();
  return game::params_from_genome(space, harness::parse_genome(genome));
}

int run_play(const ExperimentConfig& config, const std::string& genome,
             const std::string& trace_path) {
  const game::GameParams params = play_params(config, genome);
  std::unique_ptr<std::ofstream> trace_file;
  std::unique_ptr<game::TraceWriter> trace;
  if (!trace_path.empty()) {
    trace_file = std::make_unique<std::ofstream>(open_output(trace_path));
    *trace_file << harness::config_record(config) << '\n';
    trace = std::make_unique<game::TraceWriter>(*trace_file);
  }
  const eval::MatchResult r =
      eval::play_match(params, config.p1, config.p2, eval::match_seeds(config.seed), trace.get());
  std::printf("game_value=%g score_p1=%g score_p2=%g\n", r.value, r.outcome.scores[0],
              r.outcome.scores[1]);
  return 0;
}

int run_sweep(const ExperimentConfig& config) {
  const auto records = harness::sweep(config);
  emit(config, [&](std::ostream& out) { harness::write_sweep_csv(out, config, records); });
  return 0;
}

int run_marginals(const ExperimentConfig& config, const std::string& in_path,
                  const std::string& dim) {
  std::ifstream in(in_path);
  if (!in) throw std::runtime_error("cannot open '" + in_path + "'");
  const game::ParamSpace space = config.space();
  const auto records = harness::read_sweep_csv(in, space);
  const auto rows = harness::marginals(records, space, dim);
  emit(config, [&](std::ostream& out) { harness::write_marginals_csv(out, config, dim, rows); });
  return 0;
}

int run_optimize(const ExperimentConfig& config) {
  const auto result = harness::optimize_experiment(config);
  const std::string prefix = config.out.empty() ? "optimize" : config.out;
  {
    std::ofstream log = open_output(prefix + ".runlog.jsonl");
    harness::write_run_log(log, config, result.logs);
  }
  {
    std::ofstream curves = open_output(prefix + ".curves.csv");
    harness::write_curves_csv(curves, config, result.curve);
  }
  {
    std::ofstream recs = open_output(prefix + ".recommendations.txt");
    harness::write_csv_metadata(recs, config);
    for (const auto& run : result.runs) recs << game::to_string(run.recommendation) << '\n';
  }
  if (!result.curve.empty()) {
    const auto& last = result.curve.back();
    std::printf("generations=%zu best_fit_mean=%.6f", result.curve.size(), last.best_fit_mean);
    if (!result.final_quality.empty()) std::printf(" quality_mean=%.6f", last.quality_mean);
    std::printf("\n");
  }
  std::printf("wrote %s.runlog.jsonl %s.curves.csv %s.recommendations.txt\n", prefix.c_str(),
              prefix.c_str(), prefix.c_str());
  return 0;
}

std::vector<Genome> read_genomes(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::vector<Genome> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    out.push_back(harness::parse_genome(line));
  }
  return out;
}

int run_validate(const ExperimentConfig& config, const std::vector<std::string>& genomes,
                 const std::string& file) {
  std::vector<Genome> recs;
  for (const auto& g : genomes) recs.push_back(harness::parse_genome(g));
  if (!file.empty()) {
    const auto more = read_genomes(file);
    recs.insert(recs.end(), more.begin(), more.end());
  }
  const game::ParamSpace space = config.space();
  for (const auto& g : recs) {
    if (!space.contains(g)) throw std::invalid_argument("genome " + game::to_string(g) +
                                                        " is not in the selected space");
  }
  const auto report = harness::validate(space, recs, config.p1, config.p2, config.validate_games,
                                        config.seed, config.jobs);
  emit(config, [&](std::ostream& out) { harness::write_validation_csv(out, config, report); });
  if (!config.out.empty()) std::printf("mean_win_rate_pct=%s\n",
                                       harness::format_percent(report.mean_pct).c_str());
  return 0;
}

int run_bench(const ExperimentConfig& config, long long ticks, const std::string& isa) {
  using game::kernels::Isa;
  std::vector<Isa> isas;
  if (isa == "all") {
    isas.push_back(Isa::kScalar);
    if (game::kernels::avx2_kernels()) isas.push_back(Isa::kAvx2);
    if (game::kernels::neon_kernels()) isas.push_back(Isa::kNeon);
  } else if (isa == "scalar") {
    isas.push_back(Isa::kScalar);
  } else if (isa == "avx2") {
    isas.push_back(Isa::kAvx2);
  } else if (isa == "neon") {
    isas.push_back(Isa::kNeon);
  } else {
    throw UsageError("--isa must be scalar, avx2, neon or all");
  }
  const game::GameParams params = config.space().base();
  for (Isa i : isas) {
    const auto r = harness::bench(params, ticks, i);
    std::printf("isa=%s ticks=%lld seconds=%.3f ticks_per_second=%.0f\n",
                std::string(game::kernels::isa_name(i)).c_str(), r.ticks, r.seconds,
                r.ticks_per_second);
  }
  return 0;
}

int dispatch(int argc, char** argv) {
  CLI::App app{"Evolves space-battle game parameters for skill-depth."};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  Settings settings;
  std::string config_path;
  app.add_option("--config", config_path, "Flat key=value config file")->check(CLI::ExistingFile);
  settings.add(&app, "--seed", "seed", "Base seed");
  settings.add(&app, "--out", "out", "Output path (or prefix for optimize)");
  settings.add(&app, "--jobs", "jobs", "Worker threads");

  auto agents = [&](CLI::App* sub) {
    settings.add(sub, "--p1", "p1", "Player 1 agent: ras | random | olmcts[:N]");
    settings.add(sub, "--p2", "p2", "Player 2 agent");
    settings.add(sub, "--space", "space", "Parameter space: 5 or 6 dimensions");
    settings.add(sub, "--recoil-max", "recoil_max", "Largest recoil kick; 0 disables it");
  };

  CLI::App* play = app.add_subcommand("play", "Play one game");
  agents(play);
  std::string genome;
  std::string trace_path;
  play->add_option("--genome", genome, "Value indices, e.g. 1,2,3,4,5 (default: base params)");
  play->add_option("--trace", trace_path, "Write a per-tick JSON-lines trace");

  CLI::App* sweep = app.add_subcommand("sweep", "Win rate over (a sample of) the space");
  agents(sweep);
  settings.add(sweep, "--sample", "sample", "Points to sample; 0 = whole space");
  settings.add(sweep, "--trials", "trials", "Games per point");

  CLI::App* marg = app.add_subcommand("marginals", "Group a sweep CSV by one dimension");
  std::string in_path;
  std::string dim;
  marg->add_option("--in", in_path, "Sweep CSV")->required();
  marg->add_option("--dim", dim, "Dimension: v_s v_t v_m d c sr")->required();
  settings.add(marg, "--space", "space", "Parameter space of the sweep");

  CLI::App* optimize = app.add_subcommand("optimize", "Independent hill-climber runs");
  agents(optimize);
  settings.add(optimize, "--algo", "algo", "rmhc | mabrmhc");
  settings.add(optimize, "--r", "r", "Resamples per fitness call");
  settings.add(optimize, "--budget", "budget", "Games per run");
  settings.add(optimize, "--trials", "trials", "Independent runs");
  settings.add(optimize, "--audit-games", "audit_games", "Audit games per genome; 0 disables");
  settings.add(optimize, "--audit-stride", "audit_stride", "Audit every n-th generation");
  settings.add(optimize, "--delta-mode", "delta_mode", "signed | abs");
  settings.add(optimize, "--omega-max", "omega_max", "Upper bound of the tie-break noise");

  CLI::App* val = app.add_subcommand("validate", "Replay recommended genomes");
  agents(val);
  std::vector<std::string> genomes;
  std::string genomes_file;
  val->add_option("--genome", genomes, "Genome, repeatable");
  val->add_option("--genomes-file", genomes_file, "One genome per line")
      ->check(CLI::ExistingFile);
  settings.add(val, "--games", "games", "Games per genome");

  CLI::App* bench = app.add_subcommand("bench", "Forward-model throughput, no agents");
  long long ticks = 200000;
  std::string isa = "all";
  bench->add_option("--ticks", ticks, "Ticks to simulate per variant")
      ->check(CLI::PositiveNumber);
  bench->add_option("--isa", isa, "scalar | avx2 | neon | all");
  settings.add(bench, "--space", "space", "Base params of this space");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << app.help();
    report_error("usage", e.what());
    return 2;
  }

  ExperimentConfig config;
  try {
    if (!config_path.empty()) harness::load_config_file(config, config_path);
    settings.apply(config);
    config.validate();
  } catch (const std::exception& e) {
    report_error("input", e.what());
    return 2;
  }

  try {
    if (play->parsed()) return run_play(config, genome, trace_path);
    if (sweep->parsed()) return run_sweep(config);
    if (marg->parsed()) return run_marginals(config, in_path, dim);
    if (optimize->parsed()) return run_optimize(config);
    if (val->parsed()) {
      if (genomes.empty() && genomes_file.empty()) {
        throw UsageError("validate needs --genome or --genomes-file");
      }
      return run_validate(config, genomes, genomes_file);
    }
    if (bench->parsed()) return run_bench(config, ticks, isa);
  } catch (const UsageError& e) {
    std::cerr << app.help();
    report_error("usage", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    report_error("input", e.what());
    return 1;
  } catch (const std::exception& e) {
    report_error("runtime", e.what());
    return 1;
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) { return dispatch(argc, argv); }
