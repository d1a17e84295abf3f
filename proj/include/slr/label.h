#ifndef SLR_LABEL_H_
#define SLR_LABEL_H_

#include <optional>
#include <string>
#include <string_view>

namespace slr {

enum class Label { kEntailment = 0, kNeutral = 1, kContradiction = 2 };

inline constexpr int kNumLabels = 3;

std::string_view to_string(Label label);

// Accepts the canonical lower-case names plus the upper-case SICK spelling.
std::optional<Label> parse_label(std::string_view text);

// The two detection heads. Index order is used for per-class arrays.
enum class Detector { kNeutral = 0, kContradiction = 1 };

inline constexpr int kNumDetectors = 2;

inline Label detector_label(Detector d) {
  return d == Detector::kNeutral ? Label::kNeutral : Label::kContradiction;
}

}  // namespace slr

#endif  // SLR_LABEL_H_
