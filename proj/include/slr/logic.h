#ifndef SLR_LOGIC_H_
#define SLR_LOGIC_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "slr/label.h"
#include "slr/segmenter.h"

namespace slr {

inline constexpr double kDetectionThreshold = 0.5;

// Binary detector labels derived from a sentence label. The neutral detector
// is unsupervised for contradiction sentences.
struct SupervisionTarget {
  std::optional<int> y_n;
  int y_c = 0;

  std::optional<int> operator[](Detector d) const {
    return d == Detector::kNeutral ? y_n : std::optional<int>(y_c);
  }
};

SupervisionTarget training_targets(Label gold);

// Contradiction if any contradiction score exceeds the threshold, else
// neutral if any neutral score does, else entailment. Strict inequality.
Label aggregate_prediction(std::span<const double> a_neutral,
                           std::span<const double> a_contradiction,
                           double threshold = kDetectionThreshold);

// Per-span label with the same precedence as aggregate_prediction.
Label span_prediction(double a_neutral, double a_contradiction,
                      double threshold = kDetectionThreshold);

// Sentence label implied by a set of span labels.
Label compose_labels(std::span<const Label> span_labels);

struct ExplanationSpan {
  int index = 0;  // into SpanSet::all()
  TokenRange range;
  Label label = Label::kNeutral;
};

struct ExplanationReport {
  std::string id;
  Label prediction = Label::kEntailment;
  std::vector<ExplanationSpan> explanation_spans;
  std::vector<double> a_neutral;
  std::vector<double> a_contradiction;
};

// Minimal predicted spans of the explaining class: a predicted span is
// reported unless it strictly contains another predicted span of the same
// class. Contradiction sentences report only contradiction spans. Throws
// InvalidArgument when `prediction` disagrees with the span labels.
std::vector<ExplanationSpan> extract_explanation_spans(
    const SpanSet& spans, std::span<const Label> span_labels, Label prediction);

// Runs aggregation, span labelling and explanation extraction over scores.
ExplanationReport explain(const std::string& id, const SpanSet& spans,
                          std::span<const double> a_neutral,
                          std::span<const double> a_contradiction);

// {"id", "prediction", "spans": [{"text", "start", "end", "class", "a_n",
// "a_c"}], "per_span": [...]}
nlohmann::json to_json(const ExplanationReport& report, const SpanSet& spans);

// Hypothesis with explanation spans underlined ('~' neutral, '!'
// contradiction), one line per explanation span.
std::string render_text(const ExplanationReport& report, const SpanSet& spans);

}  // namespace slr

#endif  // SLR_LOGIC_H_
