// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion.
//
//   acceptance [N ...] [--expect-fail N,M] [--jobs J] [--seed S]
//
// With no criterion numbers all nine run. The exit status is 0 iff every
// selected criterion passed or was listed in --expect-fail; a listed
// criterion still prints FAIL (marked "expected") when it fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "skilldepth/agents/agents.hpp"
#include "skilldepth/eval/evaluation.hpp"
#include "skilldepth/game/engine.hpp"
#include "skilldepth/harness/experiments.hpp"
#include "skilldepth/opt/optimizers.hpp"
#include "skilldepth/rng.hpp"

using namespace skilldepth;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Options {
  int jobs = 1;
  std::uint64_t seed = 1;
};

struct Verdict {
  bool pass;
  std::string detail;
};

bool close(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

double mean(const std::vector<double>& xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 == 1 ? xs[n / 2] : (xs[n / 2 - 1] + xs[n / 2]) / 2;
}

// ---------------------------------------------------------------- 1

class ScriptedFitness final : public opt::NoisyFitness {
 public:
  ScriptedFitness(std::vector<double> values, int r)
      : values_(std::move(values)), r_(r), ledger_(1'000'000) {}

  std::optional<double> evaluate(const Genome&) override {
    if (next_ >= values_.size()) return std::nullopt;
    ledger_.charge(r_);
    return values_[next_++];
  }
  int resamples() const override { return r_; }
  const eval::BudgetLedger& ledger() const override { return ledger_; }

 private:
  std::vector<double> values_;
  std::size_t next_ = 0;
  int r_;
  eval::BudgetLedger ledger_;
};

std::vector<double> script(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) x = static_cast<double>(rng.below(11)) / 10.0;
  return v;
}

// Replays the incumbent's raw samples; false on any mismatch.
struct IncumbentOracle {
  std::vector<double> samples;

  bool check(const opt::GenerationRecord& rec) {
    const double avg = (std::accumulate(samples.begin(), samples.end(), 0.0) + rec.fit_x) /
                       static_cast<double>(samples.size() + 1);
    if (!close(rec.average_fitness, avg)) return false;
    const bool accept = rec.fit_y >= avg;
    if (rec.accepted != accept) return false;
    if (accept) {
      samples = {rec.fit_y};
    } else {
      samples.push_back(rec.fit_x);
    }
    return close(rec.best_fit_so_far, mean(samples)) &&
           rec.m == static_cast<std::int64_t>(samples.size());
  }
};

Verdict criterion1(const Options&) {
  constexpr int kTranscripts = 12;
  int ok_score = 0, ok_fit = 0, ok_urg = 0, ok_arm = 0, ok_inc = 0;
  Rng rng(4242);
  const game::ParamSpace space = game::ParamSpace::five_dim();

  for (int t = 0; t < kTranscripts; ++t) {
    // score: counters of a randomly played game against 100 k - c m
    {
      const game::GameParams p = game::params_from_genome(space, space.random_genome(rng));
      game::GameState s = game::init_state(p, static_cast<std::uint64_t>(t));
      bool good = true;
      while (!s.finished()) {
        game::step(s, static_cast<game::Action>(rng.below(game::kNumActions)),
                   static_cast<game::Action>(rng.below(game::kNumActions)));
        for (int i = 0; i < 2; ++i) {
          const game::Ship& sh = s.ships[static_cast<std::size_t>(i)];
          const double hand = 100.0 * sh.hits - p.missile_cost * sh.missiles_fired;
          const auto who = i == 0 ? game::Player::kOne : game::Player::kTwo;
          good = good && close(game::score(s, who), hand) && close(sh.running_score, hand);
        }
      }
      ok_score += good;
    }
    // fitness: mean of the r game values, replayed one by one
    {
      const Genome g = space.random_genome(rng);
      const int r = 3 + static_cast<int>(rng.below(8));
      const auto rnd = agents::parse_agent_spec("random");
      const auto ras = agents::parse_agent_spec("ras");
      eval::BudgetLedger ledger(r);
      const auto rep = eval::fitness(space, g, r, rnd, ras, ledger, 77, t);
      double sum = 0;
      for (int i = 0; i < r; ++i) {
        sum += eval::play_game(game::params_from_genome(space, g), rnd, ras,
                               eval::resample_seed(77, t, space.index_of(g), i));
      }
      ok_fit += rep.has_value() && close(rep->value, sum / r) && ledger.played() == r;
    }
    // urgency and arm UCB against raw delta logs
    {
      const opt::Shape shape = {4, 5, 10, 9, 8};
      opt::BanditStats stats(shape);
      std::map<std::pair<std::size_t, int>, std::vector<double>> log;
      const int n = 30 + static_cast<int>(rng.below(200));
      for (int i = 0; i < n; ++i) {
        const std::size_t d = rng.below(shape.size());
        const int k = static_cast<int>(rng.below(static_cast<std::uint64_t>(shape[d])));
        const double delta = rng.uniform() * 2 - 1;
        stats.record(d, k, delta, opt::DeltaMode::kSignedMax);
        log[{d, k}].push_back(delta);
      }
      const opt::TieBreak none = [] { return 0.0; };
      bool urg_good = true, arm_good = true;
      for (std::size_t d = 0; d < shape.size(); ++d) {
        std::size_t n_d = 0;
        bool untried = false;
        for (int k = 0; k < shape[d]; ++k) {
          n_d += log[{d, k}].size();
          untried = untried || log[{d, k}].empty();
        }
        double hand = kInf;
        if (n_d > 0) {
          const double explore = std::sqrt(2 * std::log(double(n_d)) / double(n_d));
          for (int k = 0; k < shape[d]; ++k) {
            const auto& v = log[{d, k}];
            hand = std::min(hand, (v.empty() ? 0.0 : *std::max_element(v.begin(), v.end())) +
                                      explore);
          }
        }
        const double got = opt::urgency(d, stats, none);
        urg_good = urg_good && (std::isinf(hand) ? std::isinf(got) : close(got, hand));

        const int arm = opt::select_arm(d, stats, none);
        if (untried) {
          arm_good = arm_good && log[{d, arm}].empty();
          continue;
        }
        auto ucb = [&](int k) {
          const auto& v = log[{d, k}];
          return mean(v) + std::sqrt(2 * std::log(double(n_d)) / double(v.size()));
        };
        double best = -kInf;
        for (int k = 0; k < shape[d]; ++k) best = std::max(best, ucb(k));
        arm_good = arm_good && close(ucb(arm), best);
      }
      // a fully explored dimension so the UCB branch is always exercised
      opt::BanditStats full({3});
      std::vector<std::vector<double>> flog(3);
      for (int i = 0; i < 20; ++i) {
        const int k = i < 3 ? i : static_cast<int>(rng.below(3));
        const double delta = rng.uniform() - 0.5;
        full.record(0, k, delta, opt::DeltaMode::kSignedMax);
        flog[static_cast<std::size_t>(k)].push_back(delta);
      }
      double best = -kInf;
      std::vector<double> u(3);
      for (std::size_t k = 0; k < 3; ++k) {
        u[k] = mean(flog[k]) + std::sqrt(2 * std::log(20.0) / double(flog[k].size()));
        best = std::max(best, u[k]);
      }
      arm_good = arm_good && close(u[static_cast<std::size_t>(opt::select_arm(0, full, none))], best);
      ok_urg += urg_good;
      ok_arm += arm_good;
    }
    // incumbent averaging in both climbers
    {
      bool good = true;
      for (int algo = 0; algo < 2; ++algo) {
        const std::size_t calls = 2 * (10 + rng.below(40));
        ScriptedFitness f(script(rng, calls), 1 + static_cast<int>(rng.below(5)));
        Rng run(static_cast<std::uint64_t>(t * 2 + algo));
        IncumbentOracle oracle;
        std::size_t gens = 0;
        const opt::GenerationObserver observe = [&](const opt::GenerationRecord& rec) {
          good = good && oracle.check(rec);
          ++gens;
        };
        if (algo == 0) {
          opt::rmhc_run({4, 5, 10, 9, 8}, f, run, observe);
        } else {
          opt::mabrmhc_run({4, 5, 10, 9, 8}, f, run, {opt::DeltaMode::kSignedMax, 0.0}, observe);
        }
        good = good && gens == calls / 2;
      }
      ok_inc += good;
    }
  }
  const bool pass = ok_score == kTranscripts && ok_fit == kTranscripts && ok_urg == kTranscripts &&
                    ok_arm == kTranscripts && ok_inc == kTranscripts;
  std::ostringstream d;
  d << "score " << ok_score << "/" << kTranscripts << ", fitness " << ok_fit << "/" << kTranscripts
    << ", urgency " << ok_urg << "/" << kTranscripts << ", arm " << ok_arm << "/" << kTranscripts
    << ", incumbent " << ok_inc << "/" << kTranscripts;
  return {pass, d.str()};
}

// ---------------------------------------------------------------- 2

bool antipodal(const game::GameState& s) {
  const game::Ship& a = s.ships[0];
  const game::Ship& b = s.ships[1];
  const game::Vec2 pa = a.screen_position();
  const game::Vec2 pb = b.screen_position();
  const double dx = std::fmod(pa.x + pb.x, game::kArenaWidth);
  const double dy = std::fmod(pa.y + pb.y, game::kArenaHeight);
  return std::min(dx, game::kArenaWidth - dx) < 1e-9 &&
         std::min(dy, game::kArenaHeight - dy) < 1e-9 && a.vel.x == -b.vel.x &&
         a.vel.y == -b.vel.y &&
         (a.heading + game::kHeadingSteps / 2) % game::kHeadingSteps == b.heading &&
         a.hits == b.hits && a.missiles_fired == b.missiles_fired &&
         a.cooldown == b.cooldown;
}

Verdict criterion2(const Options& o) {
  const game::ParamSpace space = game::ParamSpace::five_dim();
  const auto ras = agents::parse_agent_spec("ras");
  Rng pick(o.seed);
  int draws = 0, symmetric = 0;
  for (int seed = 0; seed < 100; ++seed) {
    game::GameParams p = game::params_from_genome(space, space.random_genome(pick));
    p.recoil_max = 0;
    draws += eval::play_game(p, ras, ras, static_cast<std::uint64_t>(seed)) == 0.5;

    game::GameState s = game::init_state(p, static_cast<std::uint64_t>(seed));
    bool sym = antipodal(s);
    while (!s.finished()) {
      game::step(s, agents::ras_act(s, game::Player::kOne), agents::ras_act(s, game::Player::kTwo));
      sym = sym && antipodal(s);
    }
    symmetric += sym;
  }
  return {draws == 100 && symmetric == 100,
          "draws " + std::to_string(draws) + "/100, symmetric at every tick " +
              std::to_string(symmetric) + "/100"};
}

// ---------------------------------------------------------------- 3

Verdict criterion3(const Options& o) {
  const game::ParamSpace space = game::ParamSpace::five_dim();
  const char* opponents[] = {"olmcts:60", "random", "ras"};
  const int par = std::max(4, o.jobs);
  Rng pick(o.seed + 3);
  int ok = 0;
  for (int i = 0; i < 20; ++i) {
    const Genome g = space.random_genome(pick);
    const auto p1 = agents::parse_agent_spec(opponents[i % 3]);
    const auto p2 = agents::parse_agent_spec("ras");
    const std::uint64_t seed = pick();
    const auto params = game::params_from_genome(space, g);

    std::vector<double> first, again;
    for (int j = 0; j < 4; ++j) {
      first.push_back(eval::play_game(params, p1, p2, seed + j));
      again.push_back(eval::play_game(params, p1, p2, seed + j));
    }
    eval::BudgetLedger l1(4), lp(4);
    const auto serial = eval::fitness(space, g, 4, p1, p2, l1, seed, 0, 1);
    const auto parallel = eval::fitness(space, g, 4, p1, p2, lp, seed, 0, par);
    ok += first == again && serial && parallel && serial->value == parallel->value;
  }

  // whole sampled sweeps at two parallelism levels
  harness::ExperimentConfig c;
  c.p1 = agents::parse_agent_spec("olmcts:40");
  c.sample = 20;
  c.trials = 2;
  c.seed = o.seed;
  const auto a = harness::sweep(c);
  c.jobs = par;
  const auto b = harness::sweep(c);
  bool sweeps = a.size() == b.size();
  for (std::size_t i = 0; sweeps && i < a.size(); ++i) {
    sweeps = a[i].index == b[i].index && a[i].mean == b[i].mean && a[i].se == b[i].se;
  }
  return {ok == 20 && sweeps, "spot checks " + std::to_string(ok) + "/20, sweep jobs 1 vs " +
                                  std::to_string(par) + (sweeps ? " identical" : " differ")};
}

// ---------------------------------------------------------------- 4, 5

std::vector<harness::SweepRecord> sampled_sweep(const Options& o, const char* p1, int points,
                                                std::uint64_t seed) {
  harness::ExperimentConfig c;
  c.p1 = agents::parse_agent_spec(p1);
  c.p2 = agents::parse_agent_spec("ras");
  c.sample = points;
  c.trials = 11;
  c.seed = seed;
  c.jobs = o.jobs;
  return harness::sweep(c);
}

double mean_win_rate(const std::vector<harness::SweepRecord>& recs) {
  double s = 0;
  for (const auto& r : recs) s += r.mean;
  return s / static_cast<double>(recs.size());
}

Verdict criterion4(const Options& o) {
  const double mcts = mean_win_rate(sampled_sweep(o, "olmcts:350", 20, o.seed));
  const double rnd = mean_win_rate(sampled_sweep(o, "random", 20, o.seed));
  return {mcts - rnd >= 0.25 && mcts >= 0.5,
          fmt("OLMCTS-350 %.4f, Random %.4f, difference %.4f (need >= 0.25, OLMCTS >= 0.5)",
              mcts, rnd, mcts - rnd)};
}

Verdict criterion5(const Options& o) {
  const auto recs = sampled_sweep(o, "olmcts:350", 200, o.seed);
  const game::ParamSpace space = game::ParamSpace::five_dim();
  const double c = harness::between_group_variance(harness::marginals(recs, space, "c"));
  const double vs = harness::between_group_variance(harness::marginals(recs, space, "v_s"));
  const double vt = harness::between_group_variance(harness::marginals(recs, space, "v_t"));
  return {c > vs && c > vt,
          fmt("between-group variance c %.5f, v_s %.5f, v_t %.5f", c, vs, vt)};
}

// ---------------------------------------------------------------- 6, 7

Verdict criterion6(const Options&) {
  const Genome optimum(5, 1);
  int solved = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    opt::OneMaxFitness f(5, 1, 2000, 0, s);
    Rng rng(s);
    solved += opt::rmhc_run(f.shape(), f, rng).recommendation == optimum;
  }
  std::vector<double> r1, r50;
  for (std::uint64_t s = 0; s < 100; ++s) {
    for (int r : {1, 50}) {
      opt::OneMaxFitness f(5, r, 10000, 0.3, 1000 + s);
      Rng rng(1000 + s);
      const double v = opt::OneMaxFitness::true_value(opt::rmhc_run(f.shape(), f, rng).recommendation);
      (r == 1 ? r1 : r50).push_back(v);
    }
  }
  const double m1 = median(r1);
  const double m50 = median(r50);
  return {solved >= 95 && m50 > m1,
          fmt("noiseless solved %.0f/100; sigma 0.3 median true fitness r=50 %.2f vs r=1 %.2f "
              "(mean %.3f vs ",
              solved, m50, m1, mean(r50)) +
              fmt("%.3f)", mean(r1))};
}

// Games consumed when the incumbent first becomes the optimum; inf if never.
double games_to_optimum(bool mab, std::uint64_t seed) {
  opt::OneMaxFitness f(5, 1, 2000, 0, seed);
  Rng rng(seed);
  double hit = kInf;
  const opt::GenerationObserver observe = [&](const opt::GenerationRecord& r) {
    const Genome& inc = r.accepted ? r.offspring : r.parent;
    if (std::isinf(hit) && opt::OneMaxFitness::true_value(inc) == 1.0) {
      hit = static_cast<double>(r.games_consumed);
    }
  };
  if (mab) {
    opt::mabrmhc_run(f.shape(), f, rng, {}, observe);
  } else {
    opt::rmhc_run(f.shape(), f, rng, observe);
  }
  return hit;
}

Verdict criterion7(const Options&) {
  std::vector<double> rm, mab;
  int rm_miss = 0, mab_miss = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    rm.push_back(games_to_optimum(false, s));
    mab.push_back(games_to_optimum(true, s));
    rm_miss += std::isinf(rm.back());
    mab_miss += std::isinf(mab.back());
  }
  const double a = median(rm);
  const double b = median(mab);
  return {b <= a, fmt("median games to optimum MABRMHC %.1f vs RMHC %.1f (never reached: %.0f vs ",
                      b, a, mab_miss) +
                      fmt("%.0f of 100)", rm_miss)};
}

// ---------------------------------------------------------------- 8, 9

Verdict criterion8(const Options& o) {
  harness::ExperimentConfig c;
  c.algorithm = harness::Algorithm::kRmhc;
  c.resamples = 5;
  c.budget = 1000;
  c.trials = 11;
  c.seed = o.seed;
  c.jobs = o.jobs;
  c.audit_games = 30;
  c.audit_stride = 1'000'000;  // final recommendation only
  const auto out = harness::optimize_experiment(c);
  const double tuned = mean(out.final_quality);

  const game::ParamSpace space = c.space();
  Rng pick(mix_seed({o.seed, 0xba5e}));
  std::vector<Genome> baseline;
  for (int i = 0; i < 11; ++i) baseline.push_back(space.random_genome(pick));
  std::vector<double> q(baseline.size());
  for (std::size_t i = 0; i < baseline.size(); ++i) {
    q[i] = harness::audit_quality(space, baseline[i], c.p1, c.p2, c.audit_games, c.seed);
  }
  const double base = mean(q);
  return {tuned - base >= 0.1,
          fmt("optimized %.4f vs random genomes %.4f, difference %.4f (need >= 0.1)", tuned, base,
              tuned - base)};
}

Verdict criterion9(const Options&) {
  const auto r = harness::bench(game::GameParams{}, 2'000'000, game::kernels::Isa::kScalar);
  return {r.ticks_per_second >= 10000, fmt("%.0f ticks/s (scalar, one core)", r.ticks_per_second)};
}

std::set<int> parse_list(const std::string& s) {
  std::set<int> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) out.insert(std::stoi(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Verdict(const Options&)>> criteria = {
      criterion1, criterion2, criterion3, criterion4, criterion5,
      criterion6, criterion7, criterion8, criterion9};
  Options o;
  std::set<int> selected;
  std::set<int> expect_fail;
  try {
    for (int i = 1; i < argc; ++i) {
      const std::string a = argv[i];
      if (a == "--expect-fail" && i + 1 < argc) {
        expect_fail = parse_list(argv[++i]);
      } else if (a == "--jobs" && i + 1 < argc) {
        o.jobs = std::stoi(argv[++i]);
      } else if (a == "--seed" && i + 1 < argc) {
        o.seed = std::stoull(argv[++i]);
      } else {
        const int n = std::stoi(a);
        if (n < 1 || n > static_cast<int>(criteria.size())) throw std::out_of_range(a);
        selected.insert(n);
      }
    }
  } catch (const std::exception&) {
    std::fprintf(stderr, "usage: acceptance [1-9 ...] [--expect-fail N,M] [--jobs J] [--seed S]\n");
    return 2;
  }
  if (o.jobs < 1) o.jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (selected.empty()) {
    for (int n = 1; n <= static_cast<int>(criteria.size()); ++n) selected.insert(n);
  }

  int unexpected = 0;
  for (int n : selected) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[static_cast<std::size_t>(n - 1)](o);
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool expected = !v.pass && expect_fail.count(n) > 0;
    std::printf("criterion %d: %s%s -- %s [%.1fs]\n", n, v.pass ? "PASS" : "FAIL",
                expected ? " (expected)" : "", v.detail.c_str(), secs);
    std::fflush(stdout);
    if (!v.pass && !expected) ++unexpected;
  }
  return unexpected == 0 ? 0 : 1;
}
