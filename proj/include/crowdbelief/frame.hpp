#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace crowdbelief {

/// Largest frame supported. Combination iterates over focal-set pairs and
/// vacuous extension builds product frames, both bounded by this width.
inline constexpr std::size_t kMaxFrameSize = 20;

/// Subset of a frame of discernment, one bit per frame element.
class FocalSet {
 public:
  constexpr FocalSet() = default;
  constexpr explicit FocalSet(std::uint32_t bits) : bits_(bits) {}

  static constexpr FocalSet empty() { return FocalSet{}; }
  static constexpr FocalSet full(std::size_t width) {
    return FocalSet{width >= 32 ? ~0u : ((1u << width) - 1u)};
  }
  static constexpr FocalSet singleton(std::size_t index) {
    return FocalSet{1u << index};
  }
  static FocalSet of(std::initializer_list<std::size_t> indices) {
    FocalSet s;
    for (auto i : indices) s = s | singleton(i);
    return s;
  }

  constexpr std::uint32_t bits() const { return bits_; }
  constexpr bool is_empty() const { return bits_ == 0; }
  constexpr std::size_t size() const {
    return static_cast<std::size_t>(std::popcount(bits_));
  }
  constexpr bool contains(std::size_t index) const {
    return (bits_ >> index) & 1u;
  }
  constexpr bool is_subset_of(FocalSet other) const {
    return (bits_ & ~other.bits_) == 0;
  }

  /// Element indices in increasing order.
  std::vector<std::size_t> indices() const;

  friend constexpr FocalSet operator&(FocalSet a, FocalSet b) {
    return FocalSet{a.bits_ & b.bits_};
  }
  friend constexpr FocalSet operator|(FocalSet a, FocalSet b) {
    return FocalSet{a.bits_ | b.bits_};
  }
  friend constexpr auto operator<=>(FocalSet, FocalSet) = default;

 private:
  std::uint32_t bits_ = 0;
};

/// Ordered set of mutually exclusive labels. Copies share the label storage.
class Frame {
 public:
  /// Throws Error(kValidation) on empty/duplicate labels and
  /// Error(kCapacity) above kMaxFrameSize elements.
  explicit Frame(std::vector<std::string> labels);

  std::size_t size() const { return labels_->size(); }
  const std::vector<std::string>& labels() const { return *labels_; }
  const std::string& label(std::size_t index) const {
    return (*labels_)[index];
  }
  std::optional<std::size_t> index_of(std::string_view label) const;

  FocalSet full() const { return FocalSet::full(size()); }
  bool contains(FocalSet s) const { return s.is_subset_of(full()); }

  /// "{a,b}" style rendering; "∅" for the empty set.
  std::string format(FocalSet s) const;

  friend bool operator==(const Frame& a, const Frame& b) {
    return a.labels_ == b.labels_ || *a.labels_ == *b.labels_;
  }

 private:
  std::shared_ptr<const std::vector<std::string>> labels_;
};

/// Cartesian product frame with labels "(l,r)", indexed l * |right| + r.
Frame product_frame(const Frame& left, const Frame& right);

}  // namespace crowdbelief
