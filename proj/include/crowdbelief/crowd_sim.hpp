#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "crowdbelief/campaign_io.hpp"
#include "crowdbelief/monitor.hpp"

namespace crowdbelief {

/// Behavior of one synthetic contributor type.
struct ArchetypeSpec {
  Profile profile = Profile::kCategorical;
  std::size_t count = 0;
  /// Probability that the answer set contains the true answer.
  double accuracy = 1.0;
  /// Probability of a two-element answer instead of a singleton.
  double imprecision_rate = 0.0;
  /// Response time is t0 · r with r uniform in [time_ratio_lo, time_ratio_hi).
  double time_ratio_lo = 1.0;
  double time_ratio_hi = 2.0;
  /// Distribution over confidence-scale labels; weights are normalized.
  std::vector<std::pair<std::string, double>> confidence;

  /// Messages for violated invariants; labels are checked against `config`.
  std::vector<std::string> validate(const CampaignConfig& config) const;
};

struct CampaignShape {
  std::size_t n_hits = 4;
  std::size_t n_questions_per_hit = 12;
  /// Questions per HIT whose true answer is published in the gold file.
  std::size_t n_gold_per_hit = 5;
  double t0_min_s = 10.0;
  double t0_max_s = 60.0;
};

struct SyntheticCampaign {
  CampaignData data;
  std::map<std::string, std::size_t> truth;      // question id → answer index
  std::map<std::string, Profile> intended;       // contributor id → archetype
};

/// Defaults with well separated behaviors, `per_archetype` contributors each.
/// Confidence labels are taken by rank from `config.confidence_scale`.
std::vector<ArchetypeSpec> default_archetypes(const CampaignConfig& config,
                                              std::size_t per_archetype = 10);

/// Deterministic given (specs, shape, config, seed). Every contributor
/// answers every question; gold records carry the reference time of every
/// question and the true answer of `n_gold_per_hit` questions per HIT.
SyntheticCampaign generate(std::span<const ArchetypeSpec> specs,
                           const CampaignShape& shape, const CampaignConfig& config,
                           std::uint64_t seed);

/// Simulation input file: a campaign configuration (same keys as
/// load_config, answer_labels optional here) plus
///   "n_hits", "n_questions_per_hit", "n_gold_per_hit", "t0_range": [lo, hi],
///   "per_archetype": n,
///   "archetypes": [{"profile": "spammer", "count": 10, "accuracy": 0.2,
///                   "imprecision_rate": 0.0, "time_ratio": [0.05, 0.3],
///                   "confidence": {"très sûr": 0.5, "plutôt sûr": 0.5}}, ...]
/// Omitted archetype fields fall back to that profile's defaults.
struct SimulationSpec {
  CampaignConfig config;
  CampaignShape shape;
  std::vector<ArchetypeSpec> archetypes;
};

SimulationSpec default_simulation_spec();
SimulationSpec load_simulation_spec(const std::filesystem::path& path);
SimulationSpec parse_simulation_spec(const std::string& json_text,
                                     const std::string& source = "<spec>");

/// Writes contributions.csv, gold.csv, truth.csv and intended_profiles.csv.
void write_campaign(const SyntheticCampaign& campaign,
                    const std::filesystem::path& out_dir);

}  // namespace crowdbelief
