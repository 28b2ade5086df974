#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include <json.hpp>

#include "skilldepth/harness/config.hpp"
#include "skilldepth/harness/experiments.hpp"

using namespace skilldepth;
using namespace skilldepth::harness;

namespace {

ExperimentConfig cheap_config() {
  ExperimentConfig c;
  c.p1 = agents::parse_agent_spec("random");
  c.p2 = agents::parse_agent_spec("ras");
  return c;
}

std::size_t data_rows(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  std::size_t rows = 0;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    if (!header) {
      header = true;
      continue;
    }
    ++rows;
  }
  return rows;
}

}  // namespace

TEST_CASE("config files and settings") {
  std::istringstream in(
      "# comment\n"
      "space = 6\n"
      "p1 = olmcts:700\n"
      "p1.rollout_depth = 12\n"
      "p2 = random\n"
      "algo = mabrmhc\n"
      "r = 50\n"
      "budget = 1000\n"
      "trials = 7\n"
      "delta_mode = abs\n"
      "\n");
  ExperimentConfig c;
  load_config(c, in);
  CHECK(c.space_dims == 6);
  CHECK(c.p1.iterations == 700);
  CHECK(c.p1.rollout_depth == 12);
  CHECK(c.p2.kind == agents::AgentKind::kRandom);
  CHECK(c.algorithm == Algorithm::kMabrmhc);
  CHECK(c.resamples == 50);
  CHECK(c.budget == 1000);
  CHECK(c.optimize_trials() == 7);
  CHECK(c.delta_mode == opt::DeltaMode::kAbsMax);
  CHECK(c.space().cardinality() == 72000);

  // serialization round-trips
  std::ostringstream dump;
  for (const auto& [k, v] : to_key_values(c)) dump << k << '=' << v << '\n';
  ExperimentConfig back;
  std::istringstream again(dump.str());
  load_config(back, again);
  CHECK(to_key_values(back) == to_key_values(c));

  CHECK_THROWS_AS(apply_setting(c, "colour", "red"), std::invalid_argument);
  CHECK_THROWS_AS(apply_setting(c, "r", "five"), std::invalid_argument);
  CHECK_THROWS_AS(apply_setting(c, "p3", "ras"), std::invalid_argument);
  CHECK_THROWS_AS(apply_setting(c, "p1.depth", "3"), std::invalid_argument);
  std::istringstream bad("r 5\n");
  CHECK_THROWS_AS(load_config(c, bad), std::invalid_argument);

  ExperimentConfig v;
  v.budget = 0;
  CHECK_THROWS_AS(v.validate(), std::invalid_argument);
  v = ExperimentConfig{};
  v.trials = 0;
  CHECK_THROWS_AS(v.validate(), std::invalid_argument);
  v = ExperimentConfig{};
  v.space_dims = 4;
  CHECK_THROWS_AS(v.validate(), std::invalid_argument);
}

TEST_CASE("default trials depend on the command") {
  ExperimentConfig c;
  CHECK(c.sweep_trials() == 11);
  CHECK(c.optimize_trials() == 30);
  apply_setting(c, "trials", "3");
  CHECK(c.sweep_trials() == 3);
  apply_setting(c, "trials", "default");
  CHECK(c.optimize_trials() == 30);
}

TEST_CASE("recoil setting reaches the base parameters") {
  ExperimentConfig c;
  apply_setting(c, "recoil_max", "0");
  CHECK(c.space().base().recoil_max == 0);
  CHECK(game::params_from_genome(c.space(), {0, 0, 0, 0, 0}).recoil_max == 0);
}

TEST_CASE("full sweeps enumerate every point once") {
  ExperimentConfig c;
  c.sample = 0;
  CHECK(sweep_points(c).size() == 14400);
  c.space_dims = 6;
  const auto six = sweep_points(c);
  CHECK(six.size() == 72000);
  CHECK(std::set<std::uint64_t>(six.begin(), six.end()).size() == 72000);
  CHECK(six.back() == 71999);

  ExperimentConfig full;
  full.p1 = full.p2 = agents::parse_agent_spec("ras");
  full.sample = 0;
  full.trials = 1;
  const auto records = sweep(full);
  REQUIRE(records.size() == 14400);
  for (std::size_t i = 0; i < records.size(); ++i) {
    REQUIRE(records[i].index == i);
    REQUIRE((records[i].mean == 0 || records[i].mean == 0.5 || records[i].mean == 1));
    REQUIRE(records[i].se == 0);
  }
  std::ostringstream csv;
  write_sweep_csv(csv, full, records);
  CHECK(data_rows(csv.str()) == 14400);
}

TEST_CASE("sampled sweep rows, CSV round trip and reproducibility") {
  ExperimentConfig c = cheap_config();
  c.sample = 200;
  c.trials = 3;
  const auto points = sweep_points(c);
  CHECK(points.size() == 200);
  CHECK(std::set<std::uint64_t>(points.begin(), points.end()).size() == 200);
  CHECK(std::is_sorted(points.begin(), points.end()));

  const auto a = sweep(c);
  c.jobs = 3;
  const auto b = sweep(c);
  REQUIRE(a.size() == 200);
  for (std::size_t i = 0; i < a.size(); ++i) {
    REQUIRE(a[i].index == b[i].index);
    REQUIRE(a[i].mean == b[i].mean);
    REQUIRE(a[i].se == b[i].se);
    REQUIRE(a[i].mean >= 0);
    REQUIRE(a[i].mean <= 1);
  }
  c.jobs = 1;

  std::ostringstream out;
  write_sweep_csv(out, c, a);
  CHECK(data_rows(out.str()) == 200);
  CHECK(out.str().find("# seed=1\n") != std::string::npos);
  std::istringstream in(out.str());
  const auto back = read_sweep_csv(in, c.space());
  REQUIRE(back.size() == a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(back[i].genome == a[i].genome);
    CHECK(back[i].mean == a[i].mean);
    CHECK(back[i].se == a[i].se);
    CHECK(back[i].params == a[i].params);
  }

  std::ostringstream again;
  write_sweep_csv(again, c, sweep(c));
  CHECK(again.str() == out.str());
}

TEST_CASE("standard error is the sample SD over sqrt(t)") {
  const MeanSe ms = mean_and_se({1, 0, 1, 1});
  CHECK(ms.mean == 0.75);
  CHECK(ms.se == doctest::Approx(std::sqrt(0.25) / 2));
  CHECK(mean_and_se({0.5}).se == 0);
  CHECK_THROWS_AS(mean_and_se({}), std::invalid_argument);
}

TEST_CASE("marginals") {
  const game::ParamSpace space = game::ParamSpace::five_dim();
  std::vector<SweepRecord> recs;
  Rng rng(5);
  for (std::uint64_t i = 0; i < space.cardinality(); i += 7) {
    SweepRecord r;
    r.index = i;
    r.genome = space.genome_at(i);
    r.mean = rng.uniform();
    recs.push_back(r);
  }
  const auto by_c = marginals(recs, space, "c");
  CHECK(by_c.size() == 8);
  CHECK(by_c[4].value == 20);

  // weighted average of group means = global mean
  double global = 0;
  for (const auto& r : recs) global += r.mean;
  global /= static_cast<double>(recs.size());
  double weighted = 0;
  std::size_t n = 0;
  for (const auto& row : by_c) {
    weighted += row.mean * static_cast<double>(row.count);
    n += row.count;
  }
  CHECK(n == recs.size());
  CHECK(weighted / static_cast<double>(n) == doctest::Approx(global).epsilon(1e-12));

  for (auto& r : recs) r.mean = 0.25;
  for (const auto& row : marginals(recs, space, "v_s")) CHECK(row.mean == 0.25);
  CHECK(between_group_variance(marginals(recs, space, "v_t")) == 0);

  CHECK_THROWS_AS(marginals(recs, space, "speed"), std::invalid_argument);
  CHECK_THROWS_AS(marginals(recs, space, "sr"), std::invalid_argument);
  CHECK_THROWS_AS(marginals({}, space, "c"), std::invalid_argument);

  std::ostringstream out;
  write_marginals_csv(out, ExperimentConfig{}, "c", by_c);
  CHECK(data_rows(out.str()) == 8);
}

TEST_CASE("optimize experiment: curves, logs and parallel reproducibility") {
  ExperimentConfig c = cheap_config();
  c.algorithm = Algorithm::kMabrmhc;
  c.resamples = 5;
  c.budget = 100;
  c.trials = 4;
  c.audit_games = 5;
  c.audit_stride = 3;
  const auto a = optimize_experiment(c);
  REQUIRE(a.runs.size() == 4);
  CHECK(a.curve.size() == 10);
  CHECK(a.final_quality.size() == 4);
  for (const auto& p : a.curve) {
    CHECK(p.games_consumed == 10 * (p.generation + 1));
    if (p.generation % 3 == 0 || p.generation == 9) {
      CHECK_FALSE(std::isnan(p.quality_mean));
    } else {
      CHECK(std::isnan(p.quality_mean));
    }
  }

  c.jobs = 2;
  const auto b = optimize_experiment(c);
  for (std::size_t i = 0; i < a.curve.size(); ++i) {
    CHECK(a.curve[i].best_fit_mean == b.curve[i].best_fit_mean);
    if (!std::isnan(a.curve[i].quality_mean)) {
      CHECK(a.curve[i].quality_mean == b.curve[i].quality_mean);
    }
  }
  c.jobs = 1;

  std::ostringstream log;
  write_run_log(log, c, a.logs);
  std::istringstream lines(log.str());
  std::string line;
  std::getline(lines, line);
  const auto head = nlohmann::json::parse(line);
  CHECK(head["type"] == "config");
  CHECK(head["algo"] == "mabrmhc");
  int generations = 0;
  while (std::getline(lines, line)) {
    const auto j = nlohmann::json::parse(line);
    CHECK(j["type"] == "generation");
    CHECK(j.contains("d_star"));
    CHECK(j.contains("k_star"));
    CHECK(j["urgency"].size() == 5);
    CHECK(j.contains("bestFitSoFar"));
    CHECK(j.contains("M"));
    ++generations;
  }
  CHECK(generations == 40);

  std::ostringstream curves;
  write_curves_csv(curves, c, a.curve);
  CHECK(data_rows(curves.str()) == 10);
}

TEST_CASE("validation reports table-style percentages") {
  const game::ParamSpace space = game::ParamSpace::five_dim();
  ExperimentConfig c;
  c.recoil_max = 0;
  const auto ras = agents::parse_agent_spec("ras");
  const auto report = validate(c.space(), {{0, 0, 0, 0, 0}, {3, 4, 9, 8, 7}}, ras, ras, 5, 1);
  CHECK(report.rows.size() == 2);
  CHECK(report.mean_pct == 50);
  CHECK(format_percent(report.mean_pct) == "50.0000");
  CHECK(format_percent(100.0 * 101 / 110) == "91.8182");
  CHECK_THROWS_AS(validate(space, {}, ras, ras, 5, 1), std::invalid_argument);
  CHECK_THROWS_AS(validate(space, {{0, 0, 0, 0, 0}}, ras, ras, 0, 1), std::invalid_argument);
}

TEST_CASE("genome parsing") {
  CHECK(parse_genome("1,2,3") == Genome{1, 2, 3});
  CHECK(parse_genome("(3, 4,9,8,7)") == Genome{3, 4, 9, 8, 7});
  CHECK_THROWS_AS(parse_genome("1,,2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_genome(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_genome("a,b"), std::invalid_argument);
}

TEST_CASE("bench runs the requested number of ticks") {
  const auto r = bench(game::GameParams{}, 5000, game::kernels::Isa::kScalar);
  CHECK(r.ticks == 5000);
  CHECK(r.ticks_per_second > 0);
}
