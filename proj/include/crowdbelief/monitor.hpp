#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "crowdbelief/belief.hpp"

namespace crowdbelief {

/// One contributor's answer to one question.
struct Contribution {
  std::string contributor_id;
  std::string hit_id;
  std::string question_id;
  FocalSet answer;         // over the answer frame, neither ∅ nor Ω
  double confidence_w = 0; // in [0, 1]
  double response_time_s = 0;

  friend bool operator==(const Contribution&, const Contribution&) = default;
};

// Fixed frames of the profiling model. Indices follow the label order.
const Frame& qualification_frame();  // {P, NP}
const Frame& reflection_frame();     // {R, NR}
const Frame& profile_frame();        // {(P,R), (P,NR), (NP,R), (NP,NR)}

inline constexpr std::size_t kPrecise = 0;
inline constexpr std::size_t kImprecise = 1;
inline constexpr std::size_t kReflective = 0;
inline constexpr std::size_t kNonReflective = 1;

/// Profiles as indices of profile_frame().
enum class Profile : std::size_t {
  kCategorical = 0,  // (P, R)
  kSpammer = 1,      // (P, NR)
  kFuzzy = 2,        // (NP, R)
  kExpert = 3,       // (NP, NR)
};

inline constexpr Profile kAllProfiles[] = {Profile::kExpert, Profile::kFuzzy,
                                           Profile::kCategorical, Profile::kSpammer};

std::string_view profile_name(Profile p);
/// "{NP,NR}" style pair notation.
std::string_view profile_pair(Profile p);
std::optional<Profile> profile_from_name(std::string_view name);
inline FocalSet profile_set(Profile p) {
  return FocalSet::singleton(static_cast<std::size_t>(p));
}
/// "categorical" or, for ties, "categorical|spammer" in frame order.
std::string decision_name(FocalSet decision);
/// "{P,R}∪{P,NR}" style rendering of a decision.
std::string decision_pairs(FocalSet decision);

struct QualificationEvidence {
  double ip_c = 0;
  MassFunction mass_omega2 = MassFunction::vacuous(qualification_frame());
};

struct ReflectionEvidence {
  std::vector<MassFunction> per_question;
  MassFunction mass_omega3 = MassFunction::vacuous(reflection_frame());
};

struct ContributorProfile {
  std::string contributor_id;
  QualificationEvidence qualification;
  ReflectionEvidence reflection;
  MassFunction mass_omega4 = MassFunction::vacuous(profile_frame());
  PignisticDistribution pignistic4{profile_frame(), {}};
  FocalSet decision;  // over profile_frame()
};

struct ProfilingParams {
  double beta = 0.8;
  double eta = 0.8;
  double argmax_tol = kDefaultArgmaxTolerance;
};

/// Simple support mass on the answer with the stated confidence as weight.
MassFunction confidence_mass(const Contribution& c, const Frame& answers);

/// Belief-weighted specificity of a contributor's answers, averaged over
/// questions: mean of Σ_X m(X)·(|Ω|−|X|)/(|Ω|−1). 1 is fully precise and
/// confident, 0 is total ignorance.
double imprecision_degree(std::span<const Contribution> contribs,
                          const Frame& answers);

/// m(P) = β·IP, m(NP) = β·(1−IP), m(Ω₂) = 1−β.
MassFunction qualification_mass(double ip_c, double beta);
QualificationEvidence qualification_evidence(std::span<const Contribution> contribs,
                                             const Frame& answers, double beta);

/// Response-time evidence. With s = t/(t + t0), i.e. r/(r+1) for r = t/t0:
/// m(R) = η·s, m(NR) = η·(1−s), m(Ω₃) = 1−η.
MassFunction reflection_mass(double t_cq, double t_0q, double eta);

/// Per-question reflection masses and their mean. Throws
/// Error(kMissingReference) naming the first question without a reference
/// time.
ReflectionEvidence contributor_reflection(
    std::span<const Contribution> contribs,
    const std::map<std::string, double, std::less<>>& reference_times,
    double eta);

/// Conjunctive combination of the two vacuous extensions, before Yager's
/// conflict transfer. Cylinders always intersect, so its conflict is zero.
MassFunction profile_mass_conjunctive(const QualificationEvidence& q,
                                      const ReflectionEvidence& r);
/// Yager combination of the extended qualification and reflection masses on
/// profile_frame().
MassFunction profile_mass(const QualificationEvidence& q,
                          const ReflectionEvidence& r);
MassFunction profile_mass(const MassFunction& omega2, const MassFunction& omega3);

/// Argmax of the pignistic probability over profiles; ties keep every
/// maximal profile.
FocalSet classify_profile(const MassFunction& m4,
                          double tol = kDefaultArgmaxTolerance);

/// Full pipeline for one contributor. `contribs` must all belong to them.
ContributorProfile profile_contributor(
    std::string contributor_id, std::span<const Contribution> contribs,
    const Frame& answers,
    const std::map<std::string, double, std::less<>>& reference_times,
    const ProfilingParams& params);

/// Profiles every contributor present in `contribs`, sorted by id.
std::vector<ContributorProfile> profile_all(
    std::span<const Contribution> contribs, const Frame& answers,
    const std::map<std::string, double, std::less<>>& reference_times,
    const ProfilingParams& params);

/// Argmax of the pignistic transform of the qualification (Ω₂) or
/// reflection (Ω₃) mass, used to form precision and reflection groups.
FocalSet qualification_decision(const ContributorProfile& p, double tol);
FocalSet reflection_decision(const ContributorProfile& p, double tol);

}  // namespace crowdbelief
