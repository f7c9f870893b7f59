#include "crowdbelief/monitor.hpp"

#include <algorithm>

#include <array>
#include <cmath>

#include "crowdbelief/error.hpp"
#include "text.hpp"

namespace crowdbelief {

const Frame& qualification_frame() {
  static const Frame frame({"P", "NP"});
  return frame;
}

const Frame& reflection_frame() {
  static const Frame frame({"R", "NR"});
  return frame;
}

const Frame& profile_frame() {
  static const Frame frame = product_frame(qualification_frame(), reflection_frame());
  return frame;
}

namespace {

constexpr std::array<std::string_view, 4> kProfileNames = {
    "categorical", "spammer", "fuzzy", "expert"};
constexpr std::array<std::string_view, 4> kProfilePairs = {
    "{P,R}", "{P,NR}", "{NP,R}", "{NP,NR}"};

void require_unit_interval(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0))
    throw Error(ErrorCode::kRange, std::string(what) + " = " +
                                       text::format_double(v) +
                                       " is outside [0, 1]");
}

}  // namespace

std::string_view profile_name(Profile p) {
  return kProfileNames[static_cast<std::size_t>(p)];
}

std::string_view profile_pair(Profile p) {
  return kProfilePairs[static_cast<std::size_t>(p)];
}

std::optional<Profile> profile_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kProfileNames.size(); ++i)
    if (kProfileNames[i] == name) return static_cast<Profile>(i);
  return std::nullopt;
}

std::string decision_name(FocalSet decision) {
  std::string out;
  for (auto i : decision.indices()) {
    if (!out.empty()) out += '|';
    out += kProfileNames[i];
  }
  return out;
}

std::string decision_pairs(FocalSet decision) {
  std::string out;
  for (auto i : decision.indices()) {
    if (!out.empty()) out += "∪";
    out += kProfilePairs[i];
  }
  return out;
}

MassFunction confidence_mass(const Contribution& c, const Frame& answers) {
  return make_simple_support(answers, c.answer, c.confidence_w);
}

double imprecision_degree(std::span<const Contribution> contribs,
                          const Frame& answers) {
  if (contribs.empty())
    throw Error(ErrorCode::kArity, "imprecision degree needs at least one contribution");
  if (answers.size() < 2)
    throw Error(ErrorCode::kDomain, "imprecision degree needs at least two answers");
  const double n = static_cast<double>(answers.size());
  double total = 0.0;
  for (const auto& c : contribs) {
    const MassFunction m = confidence_mass(c, answers);
    double specificity = 0.0;
    for (const auto& [set, mass] : m.masses())
      specificity += mass * (n - static_cast<double>(set.size())) / (n - 1.0);
    total += specificity;
  }
  return total / static_cast<double>(contribs.size());
}

MassFunction qualification_mass(double ip_c, double beta) {
  require_unit_interval(ip_c, "IP_c");
  require_unit_interval(beta, "beta");
  const Frame& f = qualification_frame();
  return MassFunction(f, {{FocalSet::singleton(kPrecise), beta * ip_c},
                          {FocalSet::singleton(kImprecise), beta * (1.0 - ip_c)},
                          {f.full(), 1.0 - beta}});
}

QualificationEvidence qualification_evidence(std::span<const Contribution> contribs,
                                             const Frame& answers, double beta) {
  QualificationEvidence q;
  q.ip_c = imprecision_degree(contribs, answers);
  q.mass_omega2 = qualification_mass(q.ip_c, beta);
  return q;
}

MassFunction reflection_mass(double t_cq, double t_0q, double eta) {
  if (!(t_cq > 0.0) || !(t_0q > 0.0) || !std::isfinite(t_cq) || !std::isfinite(t_0q))
    throw Error(ErrorCode::kDomain, "response time " + text::format_double(t_cq) +
                                        " and reference time " +
                                        text::format_double(t_0q) +
                                        " must both be positive");
  require_unit_interval(eta, "eta");
  const double total = t_cq + t_0q;
  const Frame& f = reflection_frame();
  return MassFunction(f, {{FocalSet::singleton(kReflective), eta * (t_cq / total)},
                          {FocalSet::singleton(kNonReflective), eta * (t_0q / total)},
                          {f.full(), 1.0 - eta}});
}

ReflectionEvidence contributor_reflection(
    std::span<const Contribution> contribs,
    const std::map<std::string, double, std::less<>>& reference_times,
    double eta) {
  ReflectionEvidence r;
  r.per_question.reserve(contribs.size());
  for (const auto& c : contribs) {
    auto it = reference_times.find(c.question_id);
    if (it == reference_times.end())
      throw Error(ErrorCode::kMissingReference,
                  "no reference time for question '" + c.question_id + "'");
    r.per_question.push_back(reflection_mass(c.response_time_s, it->second, eta));
  }
  r.mass_omega3 = mean_mass(r.per_question);
  return r;
}

namespace {

std::array<MassFunction, 2> extended_evidence(const MassFunction& omega2,
                                              const MassFunction& omega3) {
  if (!(omega2.frame() == qualification_frame()) ||
      !(omega3.frame() == reflection_frame()))
    throw Error(ErrorCode::kFrameMismatch,
                "profile evidence must be on the qualification and reflection frames");
  return {vacuous_extend(omega2, reflection_frame(), ExtensionSide::kLeft),
          vacuous_extend(omega3, qualification_frame(), ExtensionSide::kRight)};
}

}  // namespace

MassFunction profile_mass_conjunctive(const QualificationEvidence& q,
                                      const ReflectionEvidence& r) {
  return combine_conjunctive(extended_evidence(q.mass_omega2, r.mass_omega3));
}

MassFunction profile_mass(const MassFunction& omega2, const MassFunction& omega3) {
  return combine_yager(extended_evidence(omega2, omega3));
}

MassFunction profile_mass(const QualificationEvidence& q,
                          const ReflectionEvidence& r) {
  return profile_mass(q.mass_omega2, r.mass_omega3);
}

FocalSet classify_profile(const MassFunction& m4, double tol) {
  if (!(m4.frame() == profile_frame()))
    throw Error(ErrorCode::kFrameMismatch, "profile mass must be on the profile frame");
  return decide_argmax(pignistic(m4), tol);
}

ContributorProfile profile_contributor(
    std::string contributor_id, std::span<const Contribution> contribs,
    const Frame& answers,
    const std::map<std::string, double, std::less<>>& reference_times,
    const ProfilingParams& params) {
  ContributorProfile p;
  p.contributor_id = std::move(contributor_id);
  p.qualification = qualification_evidence(contribs, answers, params.beta);
  p.reflection = contributor_reflection(contribs, reference_times, params.eta);
  p.mass_omega4 = profile_mass(p.qualification, p.reflection);
  p.pignistic4 = pignistic(p.mass_omega4);
  p.decision = decide_argmax(p.pignistic4, params.argmax_tol);
  return p;
}

std::vector<ContributorProfile> profile_all(
    std::span<const Contribution> contribs, const Frame& answers,
    const std::map<std::string, double, std::less<>>& reference_times,
    const ProfilingParams& params) {
  std::map<std::string, std::vector<Contribution>> by_contributor;
  for (const auto& c : contribs) by_contributor[c.contributor_id].push_back(c);
  std::vector<ContributorProfile> out;
  out.reserve(by_contributor.size());
  for (auto& [id, own] : by_contributor) {
    // Summation order follows question id, not row order.
    std::stable_sort(own.begin(), own.end(), [](const Contribution& a, const Contribution& b) {
      return a.question_id < b.question_id;
    });
    out.push_back(profile_contributor(id, own, answers, reference_times, params));
  }
  return out;
}

FocalSet qualification_decision(const ContributorProfile& p, double tol) {
  return decide_argmax(pignistic(p.qualification.mass_omega2), tol);
}

FocalSet reflection_decision(const ContributorProfile& p, double tol) {
  return decide_argmax(pignistic(p.reflection.mass_omega3), tol);
}

}  // namespace crowdbelief
