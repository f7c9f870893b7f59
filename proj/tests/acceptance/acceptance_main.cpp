// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>

#include "crowdbelief/aggregation.hpp"
#include "crowdbelief/campaign_io.hpp"
#include "crowdbelief/cli.hpp"
#include "crowdbelief/crowd_sim.hpp"
#include "crowdbelief/error.hpp"
#include "crowdbelief/monitor.hpp"
#include "support/oracles.hpp"

using namespace crowdbelief;
namespace fs = std::filesystem;
namespace oracle = crowdbelief::testing;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir =
      fs::temp_directory_path() / ("crowdbelief_acceptance_" + std::to_string(::getpid())) / name;
  fs::create_directories(dir);
  return dir;
}

// 1 ----------------------------------------------------------------------------
Outcome yager_oracle() {
  const auto start = Clock::now();
  std::mt19937_64 rng(20240601);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Frame f = oracle::letters_frame(2 + i % 3);
    const std::vector<MassFunction> pair = {oracle::random_mass(rng, f),
                                            oracle::random_mass(rng, f)};
    worst = std::max(worst, oracle::max_abs_deviation(combine_yager(pair),
                                                      oracle::brute_force_yager(pair)));
  }
  const double elapsed = seconds_since(start);
  return {worst <= 1e-12 && elapsed < 10.0,
          "1000 pairs, max deviation " + fmt("%.3g", worst) + ", " + fmt("%.3f", elapsed) + " s"};
}

// 2 ----------------------------------------------------------------------------
Outcome pignistic_invariants() {
  std::mt19937_64 rng(77);
  double worst_sum = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Frame f = oracle::letters_frame(2 + i % 4);
    // Half of the inputs carry conflict mass.
    MassFunction m = oracle::random_mass(rng, f);
    if (i % 2) {
      const auto conj = combine_conjunctive(std::vector{m, oracle::random_mass(rng, f)});
      if (conj.conflict() < 0.999) m = conj;
    }
    double total = 0.0;
    for (double p : pignistic(m).probs) total += p;
    worst_sum = std::max(worst_sum, std::abs(total - 1.0));
  }

  bool uniform = true;
  for (std::size_t n = 2; n <= 10; ++n)
    for (double p : pignistic(MassFunction::vacuous(oracle::letters_frame(n))).probs)
      uniform = uniform && std::abs(p - 1.0 / n) <= 1e-15;

  double worst_marginal = 0.0;
  for (int i = 0; i < 200; ++i) {
    const Frame f = oracle::letters_frame(2 + i % 3);
    const Frame theta = oracle::letters_frame(2 + (i / 3) % 3);
    const auto m = oracle::random_mass(rng, f);
    const auto side = i % 2 ? ExtensionSide::kLeft : ExtensionSide::kRight;
    const auto ext = pignistic(vacuous_extend(m, theta, side)).probs;
    const auto direct = pignistic(m).probs;
    for (std::size_t a = 0; a < f.size(); ++a) {
      double marginal = 0.0;
      for (std::size_t b = 0; b < theta.size(); ++b)
        marginal += side == ExtensionSide::kLeft ? ext[a * theta.size() + b]
                                                 : ext[b * f.size() + a];
      worst_marginal = std::max(worst_marginal, std::abs(marginal - direct[a]));
    }
  }
  return {worst_sum <= 1e-12 && uniform && worst_marginal <= 1e-12,
          "sum deviation " + fmt("%.3g", worst_sum) + ", vacuous uniform " +
              (uniform ? "yes" : "no") + ", marginal deviation " + fmt("%.3g", worst_marginal)};
}

// 3 ----------------------------------------------------------------------------
Outcome boundary_exactness() {
  std::size_t checks = 0, failures = 0;
  auto check = [&](bool ok) {
    ++checks;
    failures += !ok;
  };
  const Frame f = oracle::letters_frame(5);
  const FocalSet x = FocalSet::of({1, 3});
  // ε above the 1e-12 pruning threshold, so 1−w survives as a focal mass.
  const double eps = 1e-9;
  for (double w : {0.0, 1.0 - eps}) {
    const auto m = make_simple_support(f, x, w);
    check(m.at(x) == w);
    check(m.at(f.full()) == 1.0 - w);
  }
  // Below the threshold the Ω remainder is pruned and X renormalized to 1.
  const auto tiny = make_simple_support(f, x, 1.0 - std::numeric_limits<double>::epsilon());
  check(tiny.at(x) == 1.0 && tiny.at(f.full()) == 0.0);
  const auto source = MassFunction(f, {{x, 0.3}, {FocalSet::singleton(0), 0.5}, {f.full(), 0.2}});
  check(discount(source, 1.0) == source);
  check(discount(source, 0.0) == MassFunction::vacuous(f));
  for (double beta : {0.0, 0.8, 1.0})
    for (double ip : {0.0, 0.5, 1.0}) {
      const auto m = qualification_mass(ip, beta);
      check(m.at(FocalSet::singleton(kPrecise)) == beta * ip);
      check(m.at(FocalSet::singleton(kImprecise)) == beta * (1.0 - ip));
      check(m.at(qualification_frame().full()) == 1.0 - beta);
    }
  return {failures == 0, std::to_string(checks - failures) + "/" + std::to_string(checks) +
                             " exact substitutions"};
}

// 4 ----------------------------------------------------------------------------
Outcome profile_recovery() {
  const auto start = Clock::now();
  const CampaignConfig config;
  const auto specs = default_archetypes(config, 10);
  const auto campaign = generate(specs, CampaignShape{}, config, 42);
  const auto profiles = profile_all(campaign.data.contributions, config.answers,
                                    reference_times(campaign.data.gold), config.profiling());
  std::size_t hits = 0;
  for (const auto& p : profiles)
    hits += p.decision.contains(
        static_cast<std::size_t>(campaign.intended.at(p.contributor_id)));
  const double rate = static_cast<double>(hits) / profiles.size();
  const double elapsed = seconds_since(start);
  return {rate >= 0.95 && elapsed < 5.0,
          std::to_string(hits) + "/" + std::to_string(profiles.size()) + " recovered (seed 42), " +
              fmt("%.3f", elapsed) + " s"};
}

// 5 ----------------------------------------------------------------------------
// Small crowd whose fuzzy members are far more accurate than its precise ones.
constexpr const char* kTrendSpec = R"({
  "n_gold_per_hit": 12,
  "archetypes": [
    {"profile": "spammer", "count": 3},
    {"profile": "categorical", "count": 3, "accuracy": 0.4},
    {"profile": "fuzzy", "count": 3, "accuracy": 0.95, "imprecision_rate": 0.9}
  ]
})";
constexpr std::uint64_t kTrendSeed = 1;

Outcome imprecise_trend() {
  const auto spec = parse_simulation_spec(kTrendSpec);
  const auto campaign = generate(spec.archetypes, spec.shape, spec.config, kTrendSeed);
  const auto& config = spec.config;
  const auto& contribs = campaign.data.contributions;
  const auto& gold = campaign.data.gold;

  const auto all = lambda_sweep(contribs, gold, config.lambda_grid, config.answers);
  // λ = 0 puts all weight on the imprecise answers.
  const double imprecise_only = all.error_rates.front();
  const bool all_ok = all.lambda_grid.front() == 0.0 && imprecise_only <= all.mv_error;

  const auto profiles =
      profile_all(contribs, config.answers, reference_times(gold), config.profiling());
  std::optional<ErrorCurve> spammer, categorical;
  for (const auto& g : make_groups(Grouping::kProfile, profiles, config.argmax_tol)) {
    if (g.label != "spammer" && g.label != "categorical") continue;
    try {
      auto curve = lambda_sweep(contribs, gold, config.lambda_grid, config.answers, g,
                                config.argmax_tol);
      (g.label == "spammer" ? spammer : categorical) = std::move(curve);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kEmptyGroup) throw;
    }
  }
  bool dominates = spammer && categorical;
  if (dominates)
    for (std::size_t i = 0; i < spammer->lambda_grid.size(); ++i)
      if (spammer->lambda_grid[i] <= 0.5 + 1e-12)
        dominates = dominates && spammer->error_rates[i] >= categorical->error_rates[i];

  std::string detail = "All: error at lambda=0 " + fmt("%.4f", imprecise_only) + " vs MV " +
                       fmt("%.4f", all.mv_error) + "; spammer >= categorical for lambda<=0.5: " +
                       (dominates ? "yes" : "no");
  if (!spammer || !categorical) detail += " (a group is empty)";
  return {all_ok && dominates, detail + " (seed " + std::to_string(kTrendSeed) + ")"};
}

// 6 ----------------------------------------------------------------------------
Outcome mv_cross_check() {
  std::mt19937_64 rng(6);
  std::size_t agree = 0;
  for (int i = 0; i < 200; ++i) {
    const std::size_t n_answers = 2 + i % 4;
    const std::size_t n_contrib = 1 + (i * 7) % 10;
    const Frame f = oracle::letters_frame(n_answers);
    std::uniform_int_distribution<std::size_t> pick(0, n_answers - 1);
    std::vector<Contribution> cs;
    for (std::size_t c = 0; c < n_contrib; ++c)
      cs.push_back({"c" + std::to_string(c), "h", "q", FocalSet::singleton(pick(rng)), 0.75, 1});
    const FocalSet mv = majority_vote(cs, f);
    const FocalSet lam = decide_answer(lambda_aggregate(split_and_average(cs, f), 1.0));
    agree += mv == lam;
  }
  return {agree == 200, std::to_string(agree) + "/200 instances agree"};
}

// 7 ----------------------------------------------------------------------------
int cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  return cli::run(args, out, err);
}

Outcome evaluate_determinism() {
  const fs::path dir = scratch_dir("determinism");
  if (cli({"simulate", "--seed", "7", "--out-dir", (dir / "campaign").string()}) != 0)
    return {false, "simulate failed"};
  std::size_t identical = 0, total = 0;
  for (const std::string ext : {"json", "csv"})
    for (const std::string groups : {"all", "profile"}) {
      std::vector<std::string> outputs;
      for (int round = 0; round < 2; ++round) {
        const fs::path out = dir / ("eval_" + groups + "_" + std::to_string(round) + "." + ext);
        if (cli({"evaluate", "--contributions", (dir / "campaign/contributions.csv").string(),
                 "--gold", (dir / "campaign/gold.csv").string(), "--groups", groups, "--out",
                 out.string()}) != 0)
          return {false, "evaluate failed"};
        outputs.push_back(slurp(out));
      }
      ++total;
      identical += !outputs[0].empty() && outputs[0] == outputs[1];
    }
  return {identical == total,
          std::to_string(identical) + "/" + std::to_string(total) + " output pairs byte-identical"};
}

// 8 ----------------------------------------------------------------------------
Outcome ingestion_robustness() {
  const fs::path dir = scratch_dir("ingestion");
  if (cli({"simulate", "--seed", "3", "--out-dir", (dir / "campaign").string()}) != 0)
    return {false, "simulate failed"};
  const std::string good_contribs = (dir / "campaign/contributions.csv").string();
  const std::string good_gold = (dir / "campaign/gold.csv").string();

  std::size_t fixtures = 0, ok = 0;
  std::string first_bad;
  for (const auto& entry : fs::directory_iterator(fs::path(CROWDBELIEF_FIXTURES_DIR) / "malformed")) {
    if (entry.path().extension() != ".csv") continue;
    ++fixtures;
    const std::string bad = entry.path().string();
    const bool gold = entry.path().filename().string().starts_with("gold_");
    std::ostringstream out, err;
    int code = -1;
    try {
      code = cli::run({"profile", "--contributions", gold ? good_contribs : bad, "--gold",
                       gold ? bad : good_gold, "--out", (dir / "out.json").string()},
                      out, err);
    } catch (...) {
      code = -2;
    }
    // Row-addressed: the message names "<file>:<line>:".
    const bool addressed = err.str().find(bad + ":") != std::string::npos;
    if (code == 1 && addressed)
      ++ok;
    else if (first_bad.empty())
      first_bad = entry.path().filename().string();
  }
  std::string detail = std::to_string(ok) + "/" + std::to_string(fixtures) +
                       " fixtures rejected with exit 1 and a row address";
  if (!first_bad.empty()) detail += "; first failure: " + first_bad;
  return {fixtures >= 10 && ok == fixtures, detail};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "Yager vs subset-tuple enumeration", yager_oracle},
      {2, "pignistic invariants", pignistic_invariants},
      {3, "boundary-value exactness", boundary_exactness},
      {4, "profile recovery", profile_recovery},
      {5, "imprecise-answer trend", imprecise_trend},
      {6, "majority-vote cross-check", mv_cross_check},
      {7, "evaluate determinism", evaluate_determinism},
      {8, "ingestion robustness", ingestion_robustness},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("[%s] criterion %d: %s - %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str());
  }
  std::error_code ec;
  fs::remove_all(fs::temp_directory_path() /
                     ("crowdbelief_acceptance_" + std::to_string(::getpid())),
                 ec);
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
