#include "crowdbelief/crowd_sim.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "crowdbelief/error.hpp"
#include "csv.hpp"
#include "text.hpp"

namespace crowdbelief {

std::vector<std::string> ArchetypeSpec::validate(const CampaignConfig& config) const {
  std::vector<std::string> issues;
  const std::string name(profile_name(profile));
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in_unit(accuracy)) issues.push_back(name + ": accuracy outside [0, 1]");
  if (!in_unit(imprecision_rate))
    issues.push_back(name + ": imprecision_rate outside [0, 1]");
  if (!(time_ratio_lo > 0.0 && time_ratio_lo < time_ratio_hi) ||
      !std::isfinite(time_ratio_hi))
    issues.push_back(name + ": time ratio range needs 0 < lo < hi");
  double total = 0.0;
  for (const auto& [label, weight] : confidence) {
    if (!config.confidence_weight(label))
      issues.push_back(name + ": unknown confidence label '" + label + "'");
    if (!(weight >= 0.0) || !std::isfinite(weight))
      issues.push_back(name + ": negative confidence weight for '" + label + "'");
    else
      total += weight;
  }
  if (!(total > 0.0)) issues.push_back(name + ": confidence distribution is empty");
  return issues;
}

std::vector<ArchetypeSpec> default_archetypes(const CampaignConfig& config,
                                              std::size_t per_archetype) {
  const auto& scale = config.confidence_scale;
  auto level = [&](std::size_t rank) {
    return scale[std::min(rank, scale.size() - 1)].label;
  };
  const double chance = 1.0 / static_cast<double>(config.answers.size());

  // Spammers claim high confidence; hesitant archetypes (fuzzy, expert)
  // report a middling one alongside their imprecise answers.
  return {
      {Profile::kSpammer, per_archetype, chance, 0.0, 0.05, 0.3,
       {{level(0), 0.5}, {level(1), 0.5}}},
      {Profile::kCategorical, per_archetype, 0.85, 0.0, 1.0, 3.0, {{level(1), 1.0}}},
      {Profile::kFuzzy, per_archetype, 0.9, 0.6, 1.0, 3.0, {{level(2), 1.0}}},
      {Profile::kExpert, per_archetype, 0.95, 0.3, 0.1, 0.5, {{level(2), 1.0}}},
  };
}

namespace {

// Uniform draws from the raw engine bits.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  bool bernoulli(double p) { return uniform() < p; }
  std::size_t index(std::size_t n) {
    auto i = static_cast<std::size_t>(uniform() * static_cast<double>(n));
    return i < n ? i : n - 1;
  }
  std::size_t weighted(const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double x = uniform() * total;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (x < weights[i]) return i;
      x -= weights[i];
    }
    return weights.size() - 1;
  }

 private:
  std::mt19937_64 engine_;
};

double round_to(double v, double scale) { return std::round(v * scale) / scale; }

// Uniform element of `n` indices excluding those in `exclude`.
std::size_t pick_other(Sampler& rng, std::size_t n, FocalSet exclude) {
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < n; ++i)
    if (!exclude.contains(i)) candidates.push_back(i);
  return candidates[rng.index(candidates.size())];
}

std::string padded(std::size_t value, int width) {
  std::string s = std::to_string(value);
  return std::string(s.size() < static_cast<std::size_t>(width) ? width - s.size() : 0,
                     '0') +
         s;
}

}  // namespace

SyntheticCampaign generate(std::span<const ArchetypeSpec> specs,
                           const CampaignShape& shape, const CampaignConfig& config,
                           std::uint64_t seed) {
  std::size_t total = 0;
  std::vector<std::string> issues;
  for (const auto& s : specs) {
    total += s.count;
    auto more = s.validate(config);
    issues.insert(issues.end(), more.begin(), more.end());
  }
  if (total == 0)
    throw Error(ErrorCode::kArity, "simulation needs at least one contributor");
  if (shape.n_hits == 0 || shape.n_questions_per_hit == 0)
    issues.push_back("campaign shape needs at least one HIT and one question");
  if (shape.n_gold_per_hit > shape.n_questions_per_hit)
    issues.push_back("n_gold_per_hit exceeds n_questions_per_hit");
  if (!(shape.t0_min_s > 0.0 && shape.t0_min_s <= shape.t0_max_s))
    issues.push_back("t0 range needs 0 < lo <= hi");
  if (!issues.empty()) throw ValidationError("simulation spec", std::move(issues));

  Sampler rng(seed);
  const std::size_t n_answers = config.answers.size();
  SyntheticCampaign out;
  out.data.config = config;

  struct Question {
    std::string hit_id, id;
    double t0;
  };
  std::vector<Question> questions;
  for (std::size_t h = 1; h <= shape.n_hits; ++h) {
    const std::string hit_id = "h" + std::to_string(h);
    const std::size_t first = questions.size();
    for (std::size_t q = 1; q <= shape.n_questions_per_hit; ++q) {
      Question question{hit_id, hit_id + "-q" + padded(q, 2),
                        round_to(rng.uniform(shape.t0_min_s, shape.t0_max_s), 10.0)};
      out.truth[question.id] = rng.index(n_answers);
      questions.push_back(std::move(question));
    }
    // Partial Fisher-Yates: the first n_gold_per_hit positions are published.
    std::vector<std::size_t> order(shape.n_questions_per_hit);
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    for (std::size_t i = 0; i < shape.n_gold_per_hit; ++i)
      std::swap(order[i], order[i + rng.index(order.size() - i)]);
    std::vector<bool> published(order.size(), false);
    for (std::size_t i = 0; i < shape.n_gold_per_hit; ++i) published[order[i]] = true;
    for (std::size_t q = 0; q < order.size(); ++q) {
      const auto& question = questions[first + q];
      GoldRecord g{question.id, std::nullopt, question.t0};
      if (published[q]) g.true_answer = out.truth[question.id];
      out.data.gold.push_back(std::move(g));
    }
  }

  std::size_t serial = 0;
  for (const auto& spec : specs) {
    std::vector<double> weights;
    std::vector<double> levels;
    for (const auto& [label, w] : spec.confidence) {
      weights.push_back(w);
      levels.push_back(*config.confidence_weight(label));
    }
    const bool can_be_imprecise = n_answers >= 3;
    for (std::size_t k = 0; k < spec.count; ++k) {
      const std::string id = "c" + padded(++serial, 3);
      out.intended[id] = spec.profile;
      for (const auto& q : questions) {
        const std::size_t truth = out.truth[q.id];
        const bool imprecise = can_be_imprecise && rng.bernoulli(spec.imprecision_rate);
        const bool correct = rng.bernoulli(spec.accuracy);
        FocalSet answer = correct ? FocalSet::singleton(truth)
                                  : FocalSet::singleton(pick_other(
                                        rng, n_answers, FocalSet::singleton(truth)));
        if (imprecise)
          answer = answer | FocalSet::singleton(pick_other(
                                rng, n_answers, answer | FocalSet::singleton(truth)));
        const double ratio = rng.uniform(spec.time_ratio_lo, spec.time_ratio_hi);
        const double time = std::max(0.001, round_to(ratio * q.t0, 1000.0));
        const double w = levels[rng.weighted(weights)];
        out.data.contributions.push_back(Contribution{id, q.hit_id, q.id, answer, w, time});
      }
    }
  }
  return out;
}

SimulationSpec default_simulation_spec() {
  SimulationSpec spec;
  spec.archetypes = default_archetypes(spec.config);
  return spec;
}

SimulationSpec parse_simulation_spec(const std::string& json_text,
                                     const std::string& source) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParse, source + ": " + e.what());
  }
  if (!j.is_object())
    throw Error(ErrorCode::kParse, source + ": simulation spec must be a JSON object");
  if (!j.contains("answer_labels"))
    j["answer_labels"] = CampaignConfig{}.answers.labels();

  SimulationSpec spec;
  spec.config = parse_config(j.dump(), source);
  std::vector<std::string> issues;
  try {
    spec.shape.n_hits = j.value("n_hits", spec.shape.n_hits);
    spec.shape.n_questions_per_hit =
        j.value("n_questions_per_hit", spec.shape.n_questions_per_hit);
    spec.shape.n_gold_per_hit = j.value("n_gold_per_hit", spec.shape.n_gold_per_hit);
    if (j.contains("t0_range")) {
      auto range = j.at("t0_range").get<std::vector<double>>();
      if (range.size() != 2)
        issues.push_back("t0_range: expected [lo, hi]");
      else
        spec.shape.t0_min_s = range[0], spec.shape.t0_max_s = range[1];
    }
    const std::size_t per_archetype = j.value("per_archetype", std::size_t{10});
    auto defaults = default_archetypes(spec.config, per_archetype);
    if (!j.contains("archetypes")) {
      spec.archetypes = std::move(defaults);
    } else {
      for (const auto& a : j.at("archetypes")) {
        const auto name = a.at("profile").get<std::string>();
        auto profile = profile_from_name(name);
        if (!profile) {
          issues.push_back("archetypes: unknown profile '" + name + "'");
          continue;
        }
        ArchetypeSpec s = defaults[0];
        for (const auto& d : defaults)
          if (d.profile == *profile) s = d;
        s.count = a.value("count", s.count);
        s.accuracy = a.value("accuracy", s.accuracy);
        s.imprecision_rate = a.value("imprecision_rate", s.imprecision_rate);
        if (a.contains("time_ratio")) {
          auto range = a.at("time_ratio").get<std::vector<double>>();
          if (range.size() != 2)
            issues.push_back(name + ": time_ratio: expected [lo, hi]");
          else
            s.time_ratio_lo = range[0], s.time_ratio_hi = range[1];
        }
        if (a.contains("confidence")) {
          s.confidence.clear();
          for (const auto& [label, w] : a.at("confidence").items())
            s.confidence.emplace_back(label, w.get<double>());
        }
        auto more = s.validate(spec.config);
        issues.insert(issues.end(), more.begin(), more.end());
        spec.archetypes.push_back(std::move(s));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    issues.push_back(std::string("malformed simulation field: ") + e.what());
  }
  if (!issues.empty()) throw ValidationError(source, std::move(issues));
  return spec;
}

SimulationSpec load_simulation_spec(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_simulation_spec(buf.str(), path.string());
}

void write_campaign(const SyntheticCampaign& campaign,
                    const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec)
    throw Error(ErrorCode::kIo,
                "cannot create directory '" + out_dir.string() + "': " + ec.message());
  const auto& config = campaign.data.config;
  write_contributions(out_dir / "contributions.csv", campaign.data.contributions, config);
  write_gold(out_dir / "gold.csv", campaign.data.gold, config);

  std::string truth = "question_id,true_answer\n";
  for (const auto& [qid, answer] : campaign.truth)
    truth += csv::join({qid, config.answers.label(answer)}) + "\n";
  write_text_file(out_dir / "truth.csv", truth);

  std::string intended = "contributor_id,profile\n";
  for (const auto& [cid, profile] : campaign.intended)
    intended += csv::join({cid, std::string(profile_name(profile))}) + "\n";
  write_text_file(out_dir / "intended_profiles.csv", intended);
}

}  // namespace crowdbelief
