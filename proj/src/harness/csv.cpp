// CSV and JSON-lines writers for harness artifacts. CSV files open with
// "# key=value" metadata lines, then a header row, then one record per line.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "skilldepth/harness/experiments.hpp"

namespace skilldepth::harness {

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "";
  return format_double(v);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::string config_record(const ExperimentConfig& config) {
  nlohmann::ordered_json j;
  j["type"] = "config";
  for (const auto& [k, v] : to_key_values(config)) j[k] = v;
  return j.dump();
}

void write_csv_metadata(std::ostream& out, const ExperimentConfig& config) {
  for (const auto& [k, v] : to_key_values(config)) out << "# " << k << '=' << v << '\n';
}

void write_sweep_csv(std::ostream& out, const ExperimentConfig& config,
                     const std::vector<SweepRecord>& records) {
  const game::ParamSpace space = config.space();
  write_csv_metadata(out, config);
  out << "index";
  for (const auto& d : space.dims()) out << ',' << game::field_name(d.field);
  for (const auto& d : space.dims()) out << ",g_" << game::field_name(d.field);
  out << ",trials,mean,se,rank\n";

  std::vector<std::size_t> order(records.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return records[a].mean < records[b].mean;
  });
  std::vector<std::size_t> rank(records.size());
  for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = r;

  for (std::size_t i = 0; i < records.size(); ++i) {
    const SweepRecord& rec = records[i];
    out << rec.index;
    for (std::size_t d = 0; d < space.size(); ++d) {
      out << ',' << num(space.dim(d).values[static_cast<std::size_t>(rec.genome[d])]);
    }
    for (int g : rec.genome) out << ',' << g;
    out << ',' << rec.trials << ',' << num(rec.mean) << ',' << num(rec.se) << ',' << rank[i]
        << '\n';
  }
}

std::vector<SweepRecord> read_sweep_csv(std::istream& in, const game::ParamSpace& space) {
  std::string line;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    header = split(line);
    break;
  }
  if (header.empty()) throw std::invalid_argument("sweep CSV has no header row");
  auto column = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw std::invalid_argument("sweep CSV lacks column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  std::vector<std::size_t> gene_cols;
  for (const auto& d : space.dims()) {
    gene_cols.push_back(column("g_" + std::string(game::field_name(d.field))));
  }
  const std::size_t c_index = column("index");
  const std::size_t c_trials = column("trials");
  const std::size_t c_mean = column("mean");
  const std::size_t c_se = column("se");

  std::vector<SweepRecord> records;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    const auto cells = split(line);
    if (cells.size() != header.size()) {
      throw std::invalid_argument("sweep CSV row has " + std::to_string(cells.size()) +
                                  " cells, expected " + std::to_string(header.size()));
    }
    SweepRecord rec;
    rec.index = std::stoull(cells[c_index]);
    for (std::size_t c : gene_cols) rec.genome.push_back(std::stoi(cells[c]));
    rec.params = game::params_from_genome(space, rec.genome);
    rec.trials = std::stoi(cells[c_trials]);
    rec.mean = std::stod(cells[c_mean]);
    rec.se = std::stod(cells[c_se]);
    records.push_back(std::move(rec));
  }
  return records;
}

void write_marginals_csv(std::ostream& out, const ExperimentConfig& config, const std::string& dim,
                         const std::vector<MarginalRow>& rows) {
  write_csv_metadata(out, config);
  out << "# dim=" << dim << '\n';
  out << "value,count,mean,se\n";
  for (const auto& r : rows) {
    out << num(r.value) << ',' << r.count << ',' << num(r.mean) << ',' << num(r.se) << '\n';
  }
}

void write_curves_csv(std::ostream& out, const ExperimentConfig& config,
                      const std::vector<CurvePoint>& curve) {
  write_csv_metadata(out, config);
  out << "generation,games_consumed,best_fit_mean,best_fit_se,quality_mean,quality_se\n";
  for (const auto& p : curve) {
    out << p.generation << ',' << p.games_consumed << ',' << num(p.best_fit_mean) << ','
        << num(p.best_fit_se) << ',' << num(p.quality_mean) << ',' << num(p.quality_se) << '\n';
  }
}

std::string generation_json(int trial, const opt::GenerationRecord& rec) {
  nlohmann::ordered_json j;
  j["type"] = "generation";
  j["trial"] = trial;
  j["generation"] = rec.generation;
  j["games_consumed"] = rec.games_consumed;
  j["genome"] = rec.parent;
  j["offspring"] = rec.offspring;
  j["Fit_x"] = rec.fit_x;
  j["Fit_y"] = rec.fit_y;
  j["averageFitness"] = rec.average_fitness;
  j["accepted"] = rec.accepted;
  j["bestFitSoFar"] = rec.best_fit_so_far;
  j["M"] = rec.m;
  if (rec.mutated_dim >= 0) {
    j["d_star"] = rec.mutated_dim;
    j["k_star"] = rec.chosen_arm;
    nlohmann::ordered_json u = nlohmann::ordered_json::array();
    // JSON has no infinity; never-selected dimensions are written as null
    for (double v : rec.urgencies) {
      if (std::isinf(v)) {
        u.push_back(nullptr);
      } else {
        u.push_back(v);
      }
    }
    j["urgency"] = std::move(u);
  }
  return j.dump();
}

void write_run_log(std::ostream& out, const ExperimentConfig& config,
                   const std::vector<std::vector<opt::GenerationRecord>>& logs) {
  out << config_record(config) << '\n';
  for (std::size_t t = 0; t < logs.size(); ++t) {
    for (const auto& rec : logs[t]) out << generation_json(static_cast<int>(t), rec) << '\n';
  }
}

std::string format_percent(double pct) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", pct);
  return buf;
}

void write_validation_csv(std::ostream& out, const ExperimentConfig& config,
                          const ValidationReport& report) {
  write_csv_metadata(out, config);
  out << "genome,win_rate_pct\n";
  for (const auto& r : report.rows) {
    out << '"' << game::to_string(r.genome) << "\"," << format_percent(r.win_rate_pct) << '\n';
  }
  out << "mean," << format_percent(report.mean_pct) << '\n';
}

}  // namespace skilldepth::harness
