#include "crowdbelief/frame.hpp"

#include <algorithm>
#include <unordered_set>

#include "crowdbelief/error.hpp"

namespace crowdbelief {

std::vector<std::size_t> FocalSet::indices() const {
  std::vector<std::size_t> out;
  out.reserve(size());
  for (std::uint32_t b = bits_; b != 0; b &= b - 1)
    out.push_back(static_cast<std::size_t>(std::countr_zero(b)));
  return out;
}

Frame::Frame(std::vector<std::string> labels) {
  if (labels.empty())
    throw Error(ErrorCode::kValidation, "frame needs at least one label");
  if (labels.size() > kMaxFrameSize)
    throw Error(ErrorCode::kCapacity,
                "frame of " + std::to_string(labels.size()) +
                    " labels exceeds the limit of " +
                    std::to_string(kMaxFrameSize));
  std::unordered_set<std::string> seen;
  for (const auto& l : labels) {
    if (l.empty()) throw Error(ErrorCode::kValidation, "empty frame label");
    if (!seen.insert(l).second)
      throw Error(ErrorCode::kValidation, "duplicate frame label '" + l + "'");
  }
  labels_ = std::make_shared<const std::vector<std::string>>(std::move(labels));
}

std::optional<std::size_t> Frame::index_of(std::string_view label) const {
  auto it = std::find(labels_->begin(), labels_->end(), label);
  if (it == labels_->end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels_->begin());
}

std::string Frame::format(FocalSet s) const {
  if (s.is_empty()) return "∅";
  std::string out = "{";
  bool first = true;
  for (auto i : s.indices()) {
    if (!first) out += ',';
    first = false;
    out += i < size() ? label(i) : "#" + std::to_string(i);
  }
  return out + "}";
}

Frame product_frame(const Frame& left, const Frame& right) {
  if (left.size() * right.size() > kMaxFrameSize)
    throw Error(ErrorCode::kCapacity,
                "product frame of " +
                    std::to_string(left.size() * right.size()) +
                    " elements exceeds the limit of " +
                    std::to_string(kMaxFrameSize));
  std::vector<std::string> labels;
  labels.reserve(left.size() * right.size());
  for (const auto& l : left.labels())
    for (const auto& r : right.labels()) labels.push_back("(" + l + "," + r + ")");
  return Frame(std::move(labels));
}

}  // namespace crowdbelief
