#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "crowdbelief/belief.hpp"
#include "crowdbelief/error.hpp"
#include "support/oracles.hpp"

using namespace crowdbelief;
using crowdbelief::testing::letters_frame;
using crowdbelief::testing::random_mass;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::kIo;
}

const FocalSet A = FocalSet::singleton(0);
const FocalSet B = FocalSet::singleton(1);

}  // namespace

TEST(Frame, RejectsDuplicateAndEmptyLabels) {
  EXPECT_EQ(code_of([] { Frame({"a", "a"}); }), ErrorCode::kValidation);
  EXPECT_EQ(code_of([] { Frame({"a", ""}); }), ErrorCode::kValidation);
  EXPECT_EQ(code_of([] { Frame(std::vector<std::string>{}); }), ErrorCode::kValidation);
}

TEST(Frame, CapsSizeAtTwenty) {
  EXPECT_NO_THROW(letters_frame(20));
  EXPECT_EQ(code_of([] { letters_frame(21); }), ErrorCode::kCapacity);
}

TEST(Frame, ProductLabelsAndOrder) {
  const Frame p = product_frame(Frame({"P", "NP"}), Frame({"R", "NR"}));
  EXPECT_EQ(p.labels(), (std::vector<std::string>{"(P,R)", "(P,NR)", "(NP,R)", "(NP,NR)"}));
}

TEST(MassFunction, PrunesTinyMassesAndRenormalizes) {
  const Frame f = letters_frame(3);
  MassFunction m(f, {{A, 0.5 - 5e-13}, {B, 1e-12 / 2}, {f.full(), 0.5}});
  EXPECT_EQ(m.focal_count(), 2u);
  EXPECT_EQ(m.at(B), 0.0);
  EXPECT_NEAR(m.at(A) + m.at(f.full()), 1.0, 1e-15);
}

TEST(MassFunction, RejectsBadSumsAndEmptySet) {
  const Frame f = letters_frame(2);
  EXPECT_EQ(code_of([&] { MassFunction(f, {{A, 0.5}}); }), ErrorCode::kInvalidMass);
  EXPECT_EQ(code_of([&] { MassFunction(f, {{FocalSet::empty(), 0.5}, {A, 0.5}}); }),
            ErrorCode::kInvalidMass);
  EXPECT_EQ(code_of([&] { MassFunction(f, {{FocalSet{0b100}, 1.0}}); }),
            ErrorCode::kInvalidFocal);
  EXPECT_NO_THROW(MassFunction(f, {{FocalSet::empty(), 0.5}, {A, 0.5}},
                               MassFunction::EmptySet::kAllow));
}

// --- make_simple_support ---------------------------------------------------

TEST(SimpleSupport, ConfidenceLevelOnFiveAnswers) {
  const Frame f = letters_frame(5);
  const auto m = make_simple_support(f, FocalSet::singleton(2), 0.75);
  EXPECT_EQ(m.at(FocalSet::singleton(2)), 0.75);
  EXPECT_EQ(m.at(f.full()), 0.25);
  EXPECT_EQ(m.focal_count(), 2u);
}

TEST(SimpleSupport, ZeroWeightIsVacuous) {
  const Frame f = letters_frame(4);
  EXPECT_TRUE(make_simple_support(f, A, 0.0).is_vacuous());
}

TEST(SimpleSupport, NonSingletonFocal) {
  const Frame f = letters_frame(3);
  const auto m = make_simple_support(f, A | B, 0.5);
  EXPECT_EQ(m.at(A | B), 0.5);
  EXPECT_EQ(m.at(f.full()), 0.5);
}

TEST(SimpleSupport, RejectsEmptyAndFullFocal) {
  const Frame f = letters_frame(3);
  EXPECT_EQ(code_of([&] { make_simple_support(f, FocalSet::empty(), 0.5); }),
            ErrorCode::kInvalidFocal);
  EXPECT_EQ(code_of([&] { make_simple_support(f, f.full(), 0.5); }),
            ErrorCode::kInvalidFocal);
  EXPECT_EQ(code_of([&] { make_simple_support(f, A, 1.5); }), ErrorCode::kRange);
}

// --- discount ------------------------------------------------------------------

TEST(Discount, IdentityAndVacuousBoundaries) {
  const Frame f = letters_frame(3);
  const auto m = MassFunction(f, {{A, 0.3}, {A | B, 0.4}, {f.full(), 0.3}});
  EXPECT_EQ(discount(m, 1.0), m);
  EXPECT_TRUE(discount(m, 0.0).is_vacuous());
}

TEST(Discount, ScalesNonOmegaMasses) {
  const Frame f = letters_frame(2);
  const auto d = discount(MassFunction(f, {{A, 0.5}, {f.full(), 0.5}}), 0.8);
  EXPECT_DOUBLE_EQ(d.at(A), 0.4);
  EXPECT_DOUBLE_EQ(d.at(f.full()), 0.6);
}

TEST(Discount, RangeError) {
  const Frame f = letters_frame(2);
  EXPECT_EQ(code_of([&] { discount(MassFunction::vacuous(f), -0.1); }), ErrorCode::kRange);
  EXPECT_EQ(code_of([&] { discount(MassFunction::vacuous(f), 1.1); }), ErrorCode::kRange);
}

TEST(Discount, LinearInEachNonOmegaMass) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Frame f = letters_frame(2 + trial % 3);
    const auto m = random_mass(rng, f);
    const double alpha = std::uniform_real_distribution<double>(0, 1)(rng);
    const auto d = discount(m, alpha);
    for (const auto& [s, w] : m.masses())
      if (s != f.full()) EXPECT_NEAR(d.at(s), alpha * w, 1e-15);
  }
}

// --- combination ---------------------------------------------------------------

TEST(Conjunctive, SingleInputUnchanged) {
  const Frame f = letters_frame(3);
  const auto m = MassFunction(f, {{A, 0.3}, {f.full(), 0.7}});
  EXPECT_EQ(combine_conjunctive(std::vector{m}), m);
}

TEST(Conjunctive, TotalConflict) {
  const Frame f = letters_frame(2);
  const auto out = combine_conjunctive(
      std::vector{MassFunction::categorical(f, A), MassFunction::categorical(f, B)});
  EXPECT_EQ(out.conflict(), 1.0);
  EXPECT_EQ(out.focal_count(), 1u);
}

TEST(Conjunctive, AgreeingSimpleSupports) {
  const Frame f = letters_frame(2);
  const auto out = combine_conjunctive(std::vector{
      MassFunction(f, {{A, 0.6}, {f.full(), 0.4}}), MassFunction(f, {{A, 0.5}, {f.full(), 0.5}})});
  EXPECT_NEAR(out.at(A), 0.8, 1e-15);
  EXPECT_NEAR(out.at(f.full()), 0.2, 1e-15);
  EXPECT_EQ(out.conflict(), 0.0);
}

TEST(Conjunctive, ArityAndFrameErrors) {
  EXPECT_EQ(code_of([] { combine_conjunctive({}); }), ErrorCode::kArity);
  EXPECT_EQ(code_of([] {
              combine_conjunctive(std::vector{MassFunction::vacuous(letters_frame(2)),
                                              MassFunction::vacuous(letters_frame(3))});
            }),
            ErrorCode::kFrameMismatch);
  EXPECT_EQ(code_of([] { combine_yager({}); }), ErrorCode::kArity);
}

TEST(Conjunctive, PermutationInvariant) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const Frame f = letters_frame(2 + trial % 3);
    std::vector<MassFunction> ms;
    for (int i = 0; i < 3; ++i) ms.push_back(random_mass(rng, f));
    const auto ref = combine_conjunctive(ms);
    std::vector<MassFunction> shuffled = ms;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto other = combine_conjunctive(shuffled);
    EXPECT_LE(crowdbelief::testing::max_abs_deviation(other, crowdbelief::testing::dense(ref)),
              1e-12);
  }
}

TEST(Yager, ConflictBecomesIgnorance) {
  const Frame f = letters_frame(2);
  const auto out = combine_yager(
      std::vector{MassFunction::categorical(f, A), MassFunction::categorical(f, B)});
  EXPECT_TRUE(out.is_vacuous());
}

TEST(Yager, VacuousIsNeutral) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const Frame f = letters_frame(2 + trial % 4);
    const auto m = random_mass(rng, f);
    const auto out = combine_yager(std::vector{m, MassFunction::vacuous(f)});
    EXPECT_LE(crowdbelief::testing::max_abs_deviation(out, crowdbelief::testing::dense(m)),
              1e-15);
  }
}

TEST(Yager, PartialConflict) {
  const Frame f = letters_frame(2);
  const auto out = combine_yager(std::vector{MassFunction(f, {{A, 0.7}, {f.full(), 0.3}}),
                                             MassFunction(f, {{B, 0.6}, {f.full(), 0.4}})});
  EXPECT_NEAR(out.at(A), 0.28, 1e-15);
  EXPECT_NEAR(out.at(B), 0.18, 1e-15);
  EXPECT_NEAR(out.at(f.full()), 0.54, 1e-15);
  EXPECT_EQ(out.conflict(), 0.0);
}

TEST(Yager, EqualsConjunctiveWithConflictMovedToOmega) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const Frame f = letters_frame(1 + trial % 4);
    std::vector<MassFunction> ms;
    for (int i = 0; i < 2 + trial % 2; ++i) ms.push_back(random_mass(rng, f));
    auto expected = combine_conjunctive(ms).masses();
    if (auto it = expected.find(FocalSet::empty()); it != expected.end()) {
      expected[f.full()] += it->second;
      expected.erase(it);
    }
    EXPECT_EQ(combine_yager(ms).masses(), expected);
  }
}

TEST(Yager, MatchesSubsetTupleEnumeration) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const Frame f = letters_frame(2 + trial % 3);
    std::vector<MassFunction> ms;
    for (int i = 0; i < 2 + trial % 3; ++i) ms.push_back(random_mass(rng, f));
    EXPECT_LE(crowdbelief::testing::max_abs_deviation(
                  combine_yager(ms), crowdbelief::testing::brute_force_yager(ms)),
              1e-12);
  }
}

TEST(Yager, AppliedOnceNotPairwise) {
  // Pairwise Yager differs from the single transfer on three sources.
  const Frame f = letters_frame(3);
  const FocalSet C = FocalSet::singleton(2);
  std::vector<MassFunction> ms = {MassFunction(f, {{A, 0.5}, {f.full(), 0.5}}),
                                  MassFunction(f, {{B, 0.5}, {f.full(), 0.5}}),
                                  MassFunction(f, {{C, 0.5}, {f.full(), 0.5}})};
  const auto once = combine_yager(ms);
  const auto pairwise =
      combine_yager(std::vector{combine_yager(std::vector{ms[0], ms[1]}), ms[2]});
  const auto ref = crowdbelief::testing::brute_force_yager(ms);
  EXPECT_LE(crowdbelief::testing::max_abs_deviation(once, ref), 1e-15);
  EXPECT_GT(crowdbelief::testing::max_abs_deviation(pairwise, ref), 1e-3);
}

// --- vacuous extension ---------------------------------------------------------

TEST(VacuousExtend, LeftCylinder) {
  const Frame q({"P", "NP"}), r({"R", "NR"});
  const auto m = MassFunction(q, {{FocalSet::singleton(0), 0.8}, {q.full(), 0.2}});
  const auto ext = vacuous_extend(m, r, ExtensionSide::kLeft);
  EXPECT_EQ(ext.frame(), product_frame(q, r));
  EXPECT_EQ(ext.at(FocalSet::of({0, 1})), 0.8);  // {(P,R),(P,NR)}
  EXPECT_EQ(ext.at(ext.frame().full()), 0.2);
}

TEST(VacuousExtend, RightCylinder) {
  const Frame q({"P", "NP"}), r({"R", "NR"});
  const auto m = MassFunction(r, {{FocalSet::singleton(1), 0.6}, {r.full(), 0.4}});
  const auto ext = vacuous_extend(m, q, ExtensionSide::kRight);
  EXPECT_EQ(ext.frame(), product_frame(q, r));
  EXPECT_EQ(ext.at(FocalSet::of({1, 3})), 0.6);  // {(P,NR),(NP,NR)}
  EXPECT_EQ(ext.at(ext.frame().full()), 0.4);
}

TEST(VacuousExtend, VacuousStaysVacuous) {
  const auto ext =
      vacuous_extend(MassFunction::vacuous(letters_frame(3)), letters_frame(4), ExtensionSide::kLeft);
  EXPECT_TRUE(ext.is_vacuous());
  EXPECT_EQ(ext.frame().size(), 12u);
}

TEST(VacuousExtend, CapacityError) {
  EXPECT_EQ(code_of([] {
              vacuous_extend(MassFunction::vacuous(letters_frame(5)), letters_frame(5),
                             ExtensionSide::kLeft);
            }),
            ErrorCode::kCapacity);
}

// --- pignistic -------------------------------------------------------------------

TEST(Pignistic, VacuousIsUniform) {
  const auto p = pignistic(MassFunction::vacuous(letters_frame(5)));
  for (double v : p.probs) EXPECT_DOUBLE_EQ(v, 0.2);
}

TEST(Pignistic, SharesNestedFocalSets) {
  const Frame f = letters_frame(3);
  const auto p = pignistic(MassFunction(f, {{A, 0.6}, {A | B, 0.4}}));
  EXPECT_NEAR(p.probs[0], 0.8, 1e-15);
  EXPECT_NEAR(p.probs[1], 0.2, 1e-15);
  EXPECT_EQ(p.probs[2], 0.0);
}

TEST(Pignistic, RenormalizesConflict) {
  const Frame f = letters_frame(2);
  const auto p = pignistic(
      MassFunction(f, {{FocalSet::empty(), 0.2}, {A, 0.8}}, MassFunction::EmptySet::kAllow));
  EXPECT_DOUBLE_EQ(p.probs[0], 1.0);
  EXPECT_EQ(p.probs[1], 0.0);
}

TEST(Pignistic, UndefinedOnTotalConflict) {
  const Frame f = letters_frame(2);
  const auto m = MassFunction(f, {{FocalSet::empty(), 1.0}}, MassFunction::EmptySet::kAllow);
  EXPECT_EQ(code_of([&] { pignistic(m); }), ErrorCode::kUndefinedTransform);
}

TEST(Pignistic, MatchesDefinitionOnConflictingMasses) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const Frame f = letters_frame(2 + trial % 4);
    const auto conj = combine_conjunctive(std::vector{random_mass(rng, f), random_mass(rng, f)});
    if (conj.conflict() > 0.999) continue;
    const auto p = pignistic(conj);
    const auto ref = crowdbelief::testing::reference_pignistic(conj);
    for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(p.probs[i], ref[i], 1e-12);
  }
}

// --- decide_argmax -----------------------------------------------------------

TEST(DecideArgmax, UniqueMaximum) {
  PignisticDistribution p{letters_frame(2), {0.7, 0.3}};
  EXPECT_EQ(decide_argmax(p), A);
}

TEST(DecideArgmax, UniformTie) {
  PignisticDistribution p{letters_frame(4), {0.25, 0.25, 0.25, 0.25}};
  EXPECT_EQ(decide_argmax(p), FocalSet::full(4));
}

TEST(DecideArgmax, WithinTolerance) {
  PignisticDistribution p{letters_frame(3), {0.5, 0.5 - 1e-12, 0.0}};
  EXPECT_EQ(decide_argmax(p, 1e-9), A | B);
  EXPECT_EQ(decide_argmax(p, 0.0), A);
}

TEST(DecideArgmax, DependsOnlyOnOrdering) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> probs(4);
    for (auto& v : probs) v = u(rng);
    PignisticDistribution p{letters_frame(4), probs};
    PignisticDistribution q = p;
    // Strictly increasing transform preserves the ordering.
    for (auto& v : q.probs) v = v * v * 3.0 + 0.1;
    EXPECT_EQ(decide_argmax(p, 0.0), decide_argmax(q, 0.0));
  }
}

// --- mean_mass ---------------------------------------------------------------

TEST(MeanMass, SingleInputAndSymmetry) {
  const Frame f = letters_frame(2);
  const auto m = MassFunction(f, {{A, 0.3}, {f.full(), 0.7}});
  EXPECT_EQ(mean_mass(std::vector{m}), m);
  const auto sym = mean_mass(
      std::vector{MassFunction::categorical(f, A), MassFunction::categorical(f, B)});
  EXPECT_EQ(sym.at(A), 0.5);
  EXPECT_EQ(sym.at(B), 0.5);
}

TEST(MeanMass, PointwiseAverage) {
  const Frame f = letters_frame(3);
  const auto m = mean_mass(
      std::vector{MassFunction(f, {{A, 0.8}, {f.full(), 0.2}}), MassFunction::vacuous(f)});
  EXPECT_DOUBLE_EQ(m.at(A), 0.4);
  EXPECT_DOUBLE_EQ(m.at(f.full()), 0.6);
}

TEST(MeanMass, ArityError) {
  EXPECT_EQ(code_of([] { mean_mass({}); }), ErrorCode::kArity);
}
