#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "crowdbelief/aggregation.hpp"
#include "crowdbelief/monitor.hpp"

namespace crowdbelief {

struct ConfidenceLevel {
  std::string label;
  double weight = 0;

  friend bool operator==(const ConfidenceLevel&, const ConfidenceLevel&) = default;
};

struct CampaignConfig {
  Frame answers{{"mauvais", "pauvre", "correct", "bon", "excellent"}};
  /// Ordered from most to least confident.
  std::vector<ConfidenceLevel> confidence_scale = default_confidence_scale();
  double beta = 0.8;
  double eta = 0.8;
  std::vector<double> lambda_grid = default_lambda_grid();
  double argmax_tol = kDefaultArgmaxTolerance;

  static std::vector<ConfidenceLevel> default_confidence_scale();

  ProfilingParams profiling() const { return {beta, eta, argmax_tol}; }
  std::optional<double> confidence_weight(std::string_view label) const;
  std::optional<std::string> confidence_label(double weight) const;

  /// One message per violated invariant, each naming the field.
  std::vector<std::string> validate() const;
};

struct CampaignData {
  CampaignConfig config;
  std::vector<Contribution> contributions;
  std::vector<GoldRecord> gold;
};

/// Reference time per question, as used by the reflection channel.
std::map<std::string, double, std::less<>> reference_times(
    std::span<const GoldRecord> gold);

// --- configuration ---------------------------------------------------------
//
// JSON object. Only "answer_labels" is required:
//   {
//     "answer_labels": ["mauvais", "pauvre", "correct", "bon", "excellent"],
//     "confidence_scale": [{"label": "très sûr", "weight": 0.99}, ...],
//     "beta": 0.8, "eta": 0.8,
//     "lambda_grid": [0.0, 0.1, ..., 1.0],
//     "argmax_tol": 1e-9
//   }
// Unknown keys are ignored so one file can also carry simulation settings.

CampaignConfig load_config(const std::filesystem::path& path);
CampaignConfig parse_config(const std::string& json_text,
                            const std::string& source = "<config>");
std::string config_to_json(const CampaignConfig& config);

// --- campaign CSV files ----------------------------------------------------
//
// contributions: contributor_id,hit_id,question_id,answer,confidence,response_time_s
//   answer      one or more answer labels separated by ';'. A label may also
//               be given by its 1-based position in answer_labels.
//   confidence  a confidence_scale label, or a number in (0, 1).
// gold: question_id,true_answer,t0_seconds
//   true_answer may be left empty when only the reference time is known.
//
// Loaders collect every row error and then throw ValidationError.

std::vector<Contribution> load_contributions(const std::filesystem::path& path,
                                             const CampaignConfig& config);
std::vector<GoldRecord> load_gold(const std::filesystem::path& path,
                                  const CampaignConfig& config);

std::optional<std::size_t> resolve_answer_label(const Frame& answers,
                                                std::string_view token);

void write_contributions(const std::filesystem::path& path,
                         std::span<const Contribution> contribs,
                         const CampaignConfig& config);
void write_gold(const std::filesystem::path& path, std::span<const GoldRecord> gold,
                const CampaignConfig& config);

// --- results -----------------------------------------------------------------

enum class OutputFormat { kCsv, kJson };

/// A group's curve, or nullopt with a warning when the group is empty.
struct GroupCurve {
  std::string group_label;
  std::optional<ErrorCurve> curve;
  std::string warning;
};

/// Per-question output of λ-aggregation.
struct AggregateResult {
  std::string question_id;
  double lambda = 0;
  std::size_t n_precise = 0;
  std::size_t n_imprecise = 0;
  MassFunction mass;
  PignisticDistribution betp;
  FocalSet decision;
};

/// Profiles are written sorted by contributor id, aggregates by question id;
/// curves keep their order. JSON output carries the configuration. CSV holds a
/// single table, so when both profiles and curves are given the curves go to
/// "<stem>.curves.csv" next to `path`.
void write_results(std::span<const ContributorProfile> profiles,
                   std::span<const GroupCurve> curves,
                   const CampaignConfig& config, const std::filesystem::path& path,
                   OutputFormat format);
void write_aggregates(std::span<const AggregateResult> results,
                      const CampaignConfig& config,
                      const std::filesystem::path& path, OutputFormat format);

std::string profiles_csv(std::span<const ContributorProfile> profiles);
std::string curves_csv(std::span<const GroupCurve> curves);
std::string results_json(std::span<const ContributorProfile> profiles,
                         std::span<const GroupCurve> curves,
                         const CampaignConfig& config);

/// Writes `content` to `path`, throwing Error(kIo) with the path on failure.
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace crowdbelief
