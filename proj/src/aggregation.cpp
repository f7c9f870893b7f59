#include "crowdbelief/aggregation.hpp"

#include <algorithm>
#include <memory>
#include <set>

#include "crowdbelief/error.hpp"
#include "text.hpp"

namespace crowdbelief {

std::vector<double> default_lambda_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i) grid.push_back(i / 10.0);
  return grid;
}

QuestionAggregate split_and_average(std::span<const Contribution> contribs,
                                    const Frame& answers) {
  if (contribs.empty())
    throw Error(ErrorCode::kArity, "aggregation needs at least one contribution");
  // Canonical order so the floating-point means do not depend on row order.
  std::vector<const Contribution*> ordered;
  for (const auto& c : contribs) ordered.push_back(&c);
  std::sort(ordered.begin(), ordered.end(), [](auto* a, auto* b) {
    return std::tie(a->contributor_id, a->question_id) <
           std::tie(b->contributor_id, b->question_id);
  });

  std::vector<MassFunction> precise, imprecise;
  for (const auto* c : ordered) {
    auto m = confidence_mass(*c, answers);
    (c->answer.size() == 1 ? precise : imprecise).push_back(std::move(m));
  }
  auto mean_or_vacuous = [&](const std::vector<MassFunction>& ms) {
    return ms.empty() ? MassFunction::vacuous(answers) : mean_mass(ms);
  };
  return QuestionAggregate{contribs.front().question_id, mean_or_vacuous(precise),
                           mean_or_vacuous(imprecise), precise.size(),
                           imprecise.size()};
}

MassFunction lambda_aggregate(const QuestionAggregate& agg, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw Error(ErrorCode::kRange,
                "lambda = " + text::format_double(lambda) + " is outside [0, 1]");
  MassFunction::Map out;
  for (const auto& [set, mass] : agg.m_precise.masses()) out[set] += lambda * mass;
  for (const auto& [set, mass] : agg.m_imprecise.masses())
    out[set] += (1.0 - lambda) * mass;
  return MassFunction(agg.m_precise.frame(), std::move(out));
}

FocalSet decide_answer(const MassFunction& m, double tol) {
  return decide_argmax(pignistic(m), tol);
}

FocalSet majority_vote(std::span<const Contribution> contribs, const Frame& answers,
                       double tol) {
  std::vector<const Contribution*> sorted;
  for (const auto& c : contribs) sorted.push_back(&c);
  std::sort(sorted.begin(), sorted.end(), [](const Contribution* a, const Contribution* b) {
    return a->contributor_id < b->contributor_id;
  });
  PignisticDistribution votes{answers, std::vector<double>(answers.size(), 0.0)};
  for (const Contribution* cp : sorted) {
    const Contribution& c = *cp;
    const double share = 1.0 / static_cast<double>(c.answer.size());
    for (auto i : c.answer.indices()) votes.probs.at(i) += share;
  }
  return decide_argmax(votes, tol);
}

double error_rate(const std::map<std::string, FocalSet, std::less<>>& decisions,
                  std::span<const GoldRecord> gold) {
  std::size_t scored = 0, wrong = 0;
  for (const auto& g : gold) {
    if (!g.true_answer) continue;
    auto it = decisions.find(g.question_id);
    if (it == decisions.end())
      throw Error(ErrorCode::kMissingReference,
                  "no decision for gold question '" + g.question_id + "'");
    ++scored;
    if (it->second != FocalSet::singleton(*g.true_answer)) ++wrong;
  }
  if (scored == 0)
    throw Error(ErrorCode::kMissingReference, "no gold question has a true answer");
  return static_cast<double>(wrong) / static_cast<double>(scored);
}

ErrorCurve lambda_sweep(std::span<const Contribution> contribs,
                        std::span<const GoldRecord> gold,
                        std::span<const double> grid, const Frame& answers,
                        const GroupFilter& filter, double tol) {
  if (grid.empty()) throw Error(ErrorCode::kArity, "lambda grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0 && grid[i] <= 1.0))
      throw Error(ErrorCode::kRange, "lambda grid value " +
                                         text::format_double(grid[i]) +
                                         " is outside [0, 1]");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw Error(ErrorCode::kRange, "lambda grid must be strictly increasing");
  }

  std::set<std::string> members;
  std::map<std::string, std::vector<Contribution>, std::less<>> by_question;
  for (const auto& c : contribs) {
    if (filter.keep && !filter.keep(c.contributor_id)) continue;
    members.insert(c.contributor_id);
    by_question[c.question_id].push_back(c);
  }
  if (members.empty())
    throw Error(ErrorCode::kEmptyGroup,
                "group '" + filter.label + "' has no contributors");

  const FocalSet full_tie = answers.full();
  std::map<std::string, QuestionAggregate, std::less<>> aggregates;
  std::map<std::string, FocalSet, std::less<>> mv_decisions;
  for (const auto& g : gold) {
    if (!g.true_answer) continue;
    auto it = by_question.find(g.question_id);
    if (it == by_question.end()) {
      mv_decisions[g.question_id] = full_tie;
      continue;
    }
    aggregates.emplace(g.question_id, split_and_average(it->second, answers));
    mv_decisions[g.question_id] = majority_vote(it->second, answers, tol);
  }

  ErrorCurve curve;
  curve.group_label = filter.label;
  curve.lambda_grid.assign(grid.begin(), grid.end());
  curve.n_contributors = members.size();
  curve.mv_error = error_rate(mv_decisions, gold);
  for (double lambda : grid) {
    std::map<std::string, FocalSet, std::less<>> decisions;
    for (const auto& [qid, _] : mv_decisions) {
      auto agg = aggregates.find(qid);
      decisions[qid] = agg == aggregates.end()
                           ? full_tie
                           : decide_answer(lambda_aggregate(agg->second, lambda), tol);
    }
    curve.error_rates.push_back(error_rate(decisions, gold));
  }
  return curve;
}

namespace {

GroupFilter member_filter(std::string label, std::set<std::string> members) {
  auto shared = std::make_shared<const std::set<std::string>>(std::move(members));
  return GroupFilter{std::move(label), [shared](const std::string& id) {
                       return shared->count(id) > 0;
                     }};
}

}  // namespace

std::vector<GroupFilter> make_groups(Grouping grouping,
                                     std::span<const ContributorProfile> profiles,
                                     double tol) {
  std::vector<GroupFilter> out;
  auto by_decision = [&](const std::vector<std::string>& labels,
                         auto decide) {
    std::vector<std::set<std::string>> members(labels.size());
    for (const auto& p : profiles) {
      const FocalSet d = decide(p);
      if (d.size() == 1) members[d.indices().front()].insert(p.contributor_id);
    }
    return members;
  };
  switch (grouping) {
    case Grouping::kAll:
      out.push_back(GroupFilter{});
      break;
    case Grouping::kPrecision: {
      auto m = by_decision({"P", "NP"}, [&](const ContributorProfile& p) {
        return qualification_decision(p, tol);
      });
      out.push_back(member_filter("P", std::move(m[kPrecise])));
      out.push_back(member_filter("NP", std::move(m[kImprecise])));
      break;
    }
    case Grouping::kReflection: {
      auto m = by_decision({"R", "NR"}, [&](const ContributorProfile& p) {
        return reflection_decision(p, tol);
      });
      out.push_back(member_filter("R", std::move(m[kReflective])));
      out.push_back(member_filter("NR", std::move(m[kNonReflective])));
      break;
    }
    case Grouping::kProfile: {
      auto m = by_decision({"categorical", "spammer", "fuzzy", "expert"},
                           [](const ContributorProfile& p) { return p.decision; });
      for (Profile p : kAllProfiles)
        out.push_back(member_filter(std::string(profile_name(p)),
                                    std::move(m[static_cast<std::size_t>(p)])));
      break;
    }
  }
  return out;
}

}  // namespace crowdbelief
