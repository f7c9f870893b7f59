#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crowdbelief/belief.hpp"
#include "crowdbelief/monitor.hpp"

namespace crowdbelief {

/// Averaged confidence masses of one question, split by answer precision.
struct QuestionAggregate {
  std::string question_id;
  MassFunction m_precise;    // mean over singleton answers, vacuous if none
  MassFunction m_imprecise;  // mean over multi-element answers, vacuous if none
  std::size_t n_precise = 0;
  std::size_t n_imprecise = 0;
};

/// Reference data for a question. The true answer is optional: a record may
/// carry only the expected answering time.
struct GoldRecord {
  std::string question_id;
  std::optional<std::size_t> true_answer;
  double t0_seconds = 0;

  friend bool operator==(const GoldRecord&, const GoldRecord&) = default;
};

struct ErrorCurve {
  std::string group_label;
  std::vector<double> lambda_grid;
  std::vector<double> error_rates;
  double mv_error = 0;
  std::size_t n_contributors = 0;
};

/// Contributor filter used to build groups. An empty function keeps everyone.
struct GroupFilter {
  std::string label = "All";
  std::function<bool(const std::string& contributor_id)> keep;
};

/// 0.0, 0.1, ..., 1.0.
std::vector<double> default_lambda_grid();

/// `contribs` must all answer the same question.
QuestionAggregate split_and_average(std::span<const Contribution> contribs,
                                    const Frame& answers);

/// λ·m_precise + (1−λ)·m_imprecise.
MassFunction lambda_aggregate(const QuestionAggregate& agg, double lambda);

FocalSet decide_answer(const MassFunction& m,
                       double tol = kDefaultArgmaxTolerance);

/// Each contribution casts 1/|X| votes for every element of its answer X.
FocalSet majority_vote(std::span<const Contribution> contribs,
                       const Frame& answers,
                       double tol = kDefaultArgmaxTolerance);

/// Fraction of gold questions (those with a true answer) whose decision is
/// not exactly {true answer}. Ties count as errors.
double error_rate(const std::map<std::string, FocalSet, std::less<>>& decisions,
                  std::span<const GoldRecord> gold);

/// Error rate of λ-aggregation for every λ of `grid` plus the majority-vote
/// error, over the contributions of contributors kept by `filter`. A gold
/// question none of them answered is decided as a full tie. Throws
/// Error(kEmptyGroup) when the filter keeps nobody.
ErrorCurve lambda_sweep(std::span<const Contribution> contribs,
                        std::span<const GoldRecord> gold,
                        std::span<const double> grid, const Frame& answers,
                        const GroupFilter& filter = {},
                        double tol = kDefaultArgmaxTolerance);

enum class Grouping { kAll, kPrecision, kReflection, kProfile };

/// Group filters derived from profiles. A contributor belongs to a group only
/// when its decision on the relevant frame is exactly that group (ties join
/// no group). Labels: "All"; "P", "NP"; "R", "NR"; profile names.
std::vector<GroupFilter> make_groups(Grouping grouping,
                                     std::span<const ContributorProfile> profiles,
                                     double tol = kDefaultArgmaxTolerance);

}  // namespace crowdbelief
