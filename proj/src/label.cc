#include "slr/label.h"

namespace slr {

std::string_view to_string(Label label) {
  switch (label) {
    case Label::kEntailment: return "entailment";
    case Label::kNeutral: return "neutral";
    case Label::kContradiction: return "contradiction";
  }
  return "entailment";
}

std::optional<Label> parse_label(std::string_view text) {
  if (text == "entailment" || text == "ENTAILMENT") return Label::kEntailment;
  if (text == "neutral" || text == "NEUTRAL") return Label::kNeutral;
  if (text == "contradiction" || text == "CONTRADICTION") {
    return Label::kContradiction;
  }
  return std::nullopt;
}

}  // namespace slr
