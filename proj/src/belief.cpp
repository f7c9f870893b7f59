#include "crowdbelief/belief.hpp"

#include <algorithm>
#include <cmath>

#include "crowdbelief/error.hpp"
#include "text.hpp"

namespace crowdbelief {

namespace {

void require_unit_interval(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0))
    throw Error(ErrorCode::kRange, std::string(what) + " = " +
                                       text::format_double(v) +
                                       " is outside [0, 1]");
}

void require_combinable(std::span<const MassFunction> ms, const char* op) {
  if (ms.empty())
    throw Error(ErrorCode::kArity, std::string(op) + " needs at least one input");
  const Frame& frame = ms.front().frame();
  for (const auto& m : ms) {
    if (!(m.frame() == frame))
      throw Error(ErrorCode::kFrameMismatch,
                  std::string(op) + " inputs are defined on different frames");
    if (!m.is_normalized())
      throw Error(ErrorCode::kInvalidMass,
                  std::string(op) + " requires normalized inputs");
  }
}

}  // namespace

MassFunction::MassFunction(Frame frame, Map masses, EmptySet empty)
    : frame_(std::move(frame)) {
  double pruned = 0.0;
  double kept = 0.0;
  for (const auto& [set, mass] : masses) {
    if (!frame_.contains(set))
      throw Error(ErrorCode::kInvalidFocal,
                  "focal set " + frame_.format(set) + " is not a subset of the frame");
    if (!std::isfinite(mass) || mass < -kPruneThreshold || mass > 1.0 + kMassSumTolerance)
      throw Error(ErrorCode::kInvalidMass,
                  "mass " + text::format_double(mass) + " on " +
                      frame_.format(set) + " is outside [0, 1]");
    if (mass < kPruneThreshold) {
      pruned += mass;
      continue;
    }
    if (set.is_empty() && empty == EmptySet::kReject)
      throw Error(ErrorCode::kInvalidMass,
                  "normalized mass function has mass " +
                      text::format_double(mass) + " on the empty set");
    masses_.emplace(set, mass);
    kept += mass;
  }
  if (std::abs(kept + pruned - 1.0) > kMassSumTolerance)
    throw Error(ErrorCode::kInvalidMass,
                "masses sum to " + text::format_double(kept + pruned) +
                    ", expected 1");
  if (pruned != 0.0)
    for (auto& entry : masses_) entry.second /= kept;
}

MassFunction MassFunction::vacuous(const Frame& frame) {
  return MassFunction(frame, {{frame.full(), 1.0}});
}

MassFunction MassFunction::categorical(const Frame& frame, FocalSet x) {
  return MassFunction(frame, {{x, 1.0}});
}

double MassFunction::at(FocalSet x) const {
  auto it = masses_.find(x);
  return it == masses_.end() ? 0.0 : it->second;
}

bool MassFunction::is_vacuous() const {
  return masses_.size() == 1 && masses_.begin()->first == frame_.full();
}

std::string MassFunction::to_string() const {
  std::string out;
  for (const auto& [set, mass] : masses_) {
    if (!out.empty()) out += ", ";
    out += set == frame_.full() ? std::string("Ω") : frame_.format(set);
    out += ':';
    out += text::format_double(mass);
  }
  return out;
}

MassFunction make_simple_support(const Frame& frame, FocalSet x, double w) {
  if (x.is_empty() || x == frame.full() || !frame.contains(x))
    throw Error(ErrorCode::kInvalidFocal,
                "simple support needs a focal set strictly between ∅ and Ω, got " +
                    frame.format(x));
  require_unit_interval(w, "support weight");
  return MassFunction(frame, {{x, w}, {frame.full(), 1.0 - w}});
}

MassFunction discount(const MassFunction& m, double alpha) {
  require_unit_interval(alpha, "discount coefficient");
  if (!m.is_normalized())
    throw Error(ErrorCode::kInvalidMass, "discounting requires a normalized input");
  if (alpha == 1.0) return m;
  const Frame& frame = m.frame();
  if (alpha == 0.0) return MassFunction::vacuous(frame);
  MassFunction::Map out;
  for (const auto& [set, mass] : m.masses())
    if (set != frame.full()) out.emplace(set, alpha * mass);
  out[frame.full()] = 1.0 - alpha * (1.0 - m.at(frame.full()));
  return MassFunction(frame, std::move(out));
}

MassFunction combine_conjunctive(std::span<const MassFunction> ms) {
  require_combinable(ms, "conjunctive combination");
  const Frame& frame = ms.front().frame();
  MassFunction::Map acc = ms.front().masses();
  for (const auto& m : ms.subspan(1)) {
    MassFunction::Map next;
    for (const auto& [a, ma] : acc)
      for (const auto& [b, mb] : m.masses()) next[a & b] += ma * mb;
    acc = std::move(next);
  }
  return MassFunction(frame, std::move(acc), MassFunction::EmptySet::kAllow);
}

MassFunction combine_yager(std::span<const MassFunction> ms) {
  MassFunction conj = combine_conjunctive(ms);
  const Frame& frame = conj.frame();
  MassFunction::Map out = conj.masses();
  if (auto it = out.find(FocalSet::empty()); it != out.end()) {
    out[frame.full()] += it->second;
    out.erase(it);
  }
  return MassFunction(frame, std::move(out));
}

MassFunction vacuous_extend(const MassFunction& m, const Frame& aux,
                            ExtensionSide side) {
  if (!m.is_normalized())
    throw Error(ErrorCode::kInvalidMass, "vacuous extension requires a normalized input");
  const Frame& own = m.frame();
  const bool left = side == ExtensionSide::kLeft;
  Frame product = left ? product_frame(own, aux) : product_frame(aux, own);
  const std::size_t right_size = left ? aux.size() : own.size();

  MassFunction::Map out;
  for (const auto& [set, mass] : m.masses()) {
    std::uint32_t bits = 0;
    for (auto i : set.indices())
      for (std::size_t j = 0; j < aux.size(); ++j) {
        const std::size_t cell = left ? i * right_size + j : j * right_size + i;
        bits |= 1u << cell;
      }
    out.emplace(FocalSet{bits}, mass);
  }
  return MassFunction(std::move(product), std::move(out));
}

PignisticDistribution pignistic(const MassFunction& m) {
  const Frame& frame = m.frame();
  // The total non-conflicting mass equals 1 - m(∅); summing it directly keeps
  // the output normalized to rounding error.
  double denom = 0.0;
  for (const auto& [set, mass] : m.masses())
    if (!set.is_empty()) denom += mass;
  if (denom <= 0.0)
    throw Error(ErrorCode::kUndefinedTransform,
                "pignistic transform is undefined when all mass is on ∅");

  std::vector<double> probs(frame.size(), 0.0);
  for (const auto& [set, mass] : m.masses()) {
    if (set.is_empty()) continue;
    const double share = mass / static_cast<double>(set.size()) / denom;
    for (auto i : set.indices()) probs[i] += share;
  }
  return {frame, std::move(probs)};
}

FocalSet decide_argmax(const PignisticDistribution& p, double tol) {
  if (p.probs.empty()) return FocalSet::empty();
  const double best = *std::max_element(p.probs.begin(), p.probs.end());
  FocalSet out;
  for (std::size_t i = 0; i < p.probs.size(); ++i)
    if (p.probs[i] >= best - tol) out = out | FocalSet::singleton(i);
  return out;
}

MassFunction mean_mass(std::span<const MassFunction> ms) {
  require_combinable(ms, "mean");
  MassFunction::Map sum;
  for (const auto& m : ms)
    for (const auto& [set, mass] : m.masses()) sum[set] += mass;
  const double n = static_cast<double>(ms.size());
  for (auto& entry : sum) entry.second /= n;
  return MassFunction(ms.front().frame(), std::move(sum));
}

}  // namespace crowdbelief
