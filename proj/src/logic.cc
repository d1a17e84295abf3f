#include "slr/logic.h"

#include <algorithm>
#include <sstream>

#include "slr/error.h"

namespace slr {

SupervisionTarget training_targets(Label gold) {
  switch (gold) {
    case Label::kContradiction: return {std::nullopt, 1};
    case Label::kNeutral: return {1, 0};
    case Label::kEntailment: return {0, 0};
  }
  return {0, 0};
}

Label span_prediction(double a_neutral, double a_contradiction,
                      double threshold) {
  if (a_contradiction > threshold) return Label::kContradiction;
  if (a_neutral > threshold) return Label::kNeutral;
  return Label::kEntailment;
}

Label aggregate_prediction(std::span<const double> a_neutral,
                           std::span<const double> a_contradiction,
                           double threshold) {
  if (a_neutral.empty() || a_neutral.size() != a_contradiction.size()) {
    throw InvalidArgument("attention vectors must be non-empty and equal length");
  }
  auto above = [threshold](double a) { return a > threshold; };
  if (std::any_of(a_contradiction.begin(), a_contradiction.end(), above)) {
    return Label::kContradiction;
  }
  if (std::any_of(a_neutral.begin(), a_neutral.end(), above)) {
    return Label::kNeutral;
  }
  return Label::kEntailment;
}

Label compose_labels(std::span<const Label> span_labels) {
  bool neutral = false;
  for (Label l : span_labels) {
    if (l == Label::kContradiction) return Label::kContradiction;
    neutral = neutral || l == Label::kNeutral;
  }
  return neutral ? Label::kNeutral : Label::kEntailment;
}

std::vector<ExplanationSpan> extract_explanation_spans(
    const SpanSet& spans, std::span<const Label> span_labels, Label prediction) {
  if (static_cast<int>(span_labels.size()) != spans.size()) {
    throw InvalidArgument("need one label per span");
  }
  if (compose_labels(span_labels) != prediction) {
    throw InvalidArgument("sentence prediction '" +
                          std::string(to_string(prediction)) +
                          "' disagrees with the span labels");
  }
  std::vector<ExplanationSpan> out;
  if (prediction == Label::kEntailment) return out;

  std::vector<int> candidates;
  for (int i = 0; i < spans.size(); ++i) {
    if (span_labels[i] == prediction) candidates.push_back(i);
  }
  for (int i : candidates) {
    const TokenRange& r = spans.at(i).range;
    bool minimal = std::none_of(candidates.begin(), candidates.end(), [&](int j) {
      const TokenRange& other = spans.at(j).range;
      return j != i && r.contains(other) && !(other == r);
    });
    if (minimal) out.push_back({i, r, prediction});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.range.begin != b.range.begin ? a.range.begin < b.range.begin
                                          : a.range.end < b.range.end;
  });
  return out;
}

ExplanationReport explain(const std::string& id, const SpanSet& spans,
                          std::span<const double> a_neutral,
                          std::span<const double> a_contradiction) {
  if (static_cast<int>(a_neutral.size()) != spans.size()) {
    throw InvalidArgument("need one score per span");
  }
  ExplanationReport report;
  report.id = id;
  report.prediction = aggregate_prediction(a_neutral, a_contradiction);
  std::vector<Label> labels;
  for (int i = 0; i < spans.size(); ++i) {
    labels.push_back(span_prediction(a_neutral[i], a_contradiction[i]));
  }
  report.explanation_spans =
      extract_explanation_spans(spans, labels, report.prediction);
  report.a_neutral.assign(a_neutral.begin(), a_neutral.end());
  report.a_contradiction.assign(a_contradiction.begin(), a_contradiction.end());
  return report;
}

nlohmann::json to_json(const ExplanationReport& report, const SpanSet& spans) {
  nlohmann::json j;
  j["id"] = report.id;
  j["prediction"] = to_string(report.prediction);
  auto& arr = j["spans"] = nlohmann::json::array();
  for (const auto& e : report.explanation_spans) {
    arr.push_back({{"text", spans.span_text(e.index)},
                   {"start", e.range.begin},
                   {"end", e.range.end},
                   {"class", to_string(e.label)},
                   {"a_n", report.a_neutral.at(e.index)},
                   {"a_c", report.a_contradiction.at(e.index)}});
  }
  auto& per_span = j["per_span"] = nlohmann::json::array();
  for (int i = 0; i < spans.size(); ++i) {
    per_span.push_back({{"start", spans.at(i).range.begin},
                        {"end", spans.at(i).range.end},
                        {"a_n", report.a_neutral.at(i)},
                        {"a_c", report.a_contradiction.at(i)}});
  }
  return j;
}

std::string render_text(const ExplanationReport& report, const SpanSet& spans) {
  std::ostringstream out;
  out << spans.text << "\n";
  for (const auto& e : report.explanation_spans) {
    size_t begin = spans.tokens.tokens[e.range.begin].begin;
    size_t end = spans.tokens.tokens[e.range.end - 1].end;
    char mark = e.label == Label::kContradiction ? '!' : '~';
    out << std::string(begin, ' ') << std::string(end - begin, mark) << " "
        << to_string(e.label) << "\n";
  }
  out << "=> " << to_string(report.prediction) << "\n";
  return out.str();
}

}  // namespace slr
