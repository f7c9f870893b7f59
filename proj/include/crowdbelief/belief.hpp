#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "crowdbelief/frame.hpp"

namespace crowdbelief {

/// Masses below this are dropped after every operation.
inline constexpr double kPruneThreshold = 1e-12;
/// Allowed deviation of the total mass from 1.
inline constexpr double kMassSumTolerance = 1e-9;
inline constexpr double kDefaultArgmaxTolerance = 1e-9;

/// Basic belief assignment over the subsets of a frame.
///
/// Only strictly positive masses are stored and they sum to 1. A mass on the
/// empty set (conflict) is only accepted when the function is built with
/// EmptySet::kAllow, which is how conjunctive combination reports conflict;
/// every other operation requires normalized inputs.
class MassFunction {
 public:
  enum class EmptySet { kReject, kAllow };
  using Map = std::map<FocalSet, double>;

  /// Validates and prunes `masses`. Entries below kPruneThreshold are removed
  /// and, if anything was removed, the remaining masses are rescaled by the
  /// pruned total.
  MassFunction(Frame frame, Map masses, EmptySet empty = EmptySet::kReject);

  /// m(Ω) = 1.
  static MassFunction vacuous(const Frame& frame);
  /// m(X) = 1.
  static MassFunction categorical(const Frame& frame, FocalSet x);

  const Frame& frame() const { return frame_; }
  const Map& masses() const { return masses_; }
  std::size_t focal_count() const { return masses_.size(); }

  /// Mass of `x`, zero when `x` is not focal.
  double at(FocalSet x) const;
  double conflict() const { return at(FocalSet::empty()); }
  bool is_normalized() const { return conflict() == 0.0; }
  bool is_vacuous() const;

  std::string to_string() const;

  friend bool operator==(const MassFunction&, const MassFunction&) = default;

 private:
  Frame frame_;
  Map masses_;
};

/// Pignistic probability over the elements of a frame.
struct PignisticDistribution {
  Frame frame;
  std::vector<double> probs;
};

enum class ExtensionSide {
  kLeft,   // result lives on Ω × Θ
  kRight,  // result lives on Θ × Ω
};

/// m(X) = w, m(Ω) = 1 - w. X must be neither ∅ nor Ω.
MassFunction make_simple_support(const Frame& frame, FocalSet x, double w);

/// Classical discounting with reliability `alpha` in [0, 1].
MassFunction discount(const MassFunction& m, double alpha);

/// n-ary conjunctive (intersection-product) combination. The result keeps the
/// conflict on ∅.
MassFunction combine_conjunctive(std::span<const MassFunction> ms);

/// Conjunctive combination of all inputs followed by a single transfer of the
/// global conflict onto Ω.
MassFunction combine_yager(std::span<const MassFunction> ms);

/// Lifts `m` to the product with `aux`: every focal set A maps to the
/// cylinder A × Θ (or Θ × A for kRight).
MassFunction vacuous_extend(const MassFunction& m, const Frame& aux,
                            ExtensionSide side);

/// Each focal mass is shared equally among its elements, with the conflict
/// renormalized away. Throws Error(kUndefinedTransform) when m(∅) = 1.
PignisticDistribution pignistic(const MassFunction& m);

/// Elements whose probability is within `tol` of the maximum.
FocalSet decide_argmax(const PignisticDistribution& p,
                       double tol = kDefaultArgmaxTolerance);

/// Pointwise arithmetic mean.
MassFunction mean_mass(std::span<const MassFunction> ms);

}  // namespace crowdbelief
