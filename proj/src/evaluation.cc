#include "slr/evaluation.h"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <sstream>

#include "slr/error.h"
#include "slr/tokenizer.h"

namespace slr {

bool label_matches(Label predicted, Label gold, SourceFormat format) {
  if (format == SourceFormat::kHansTsv) {
    return (predicted == Label::kEntailment) == (gold == Label::kEntailment);
  }
  return predicted == gold;
}

SentenceEvaluation evaluate_sentences(const SlrModel& model,
                                      const DatasetSplit& split,
                                      const Segmenter& segmenter) {
  SentenceEvaluation out;
  out.split = split.name;
  int correct = 0;
  for (const auto& ex : split.examples) {
    out.golds.push_back(ex.gold);
    SpanSet spans;
    std::vector<std::string> premise;
    try {
      spans = segmenter.segment(ex.id, ex.hypothesis);
      premise = tokenize(ex.premise).words();
    } catch (const Error& e) {
      ++out.errors;
      out.predictions.push_back(std::nullopt);
      continue;
    }
    SpanScores scores = model.forward(premise, spans);
    ExplanationReport report =
        explain(ex.id, spans, scores[Detector::kNeutral].a_raw,
                scores[Detector::kContradiction].a_raw);
    out.predictions.push_back(report.prediction);
    if (label_matches(report.prediction, ex.gold, split.source_format)) {
      ++correct;
    }
    out.reports.push_back(std::move(report));
    out.span_sets.push_back(std::move(spans));
  }
  out.accuracy = split.examples.empty()
                     ? 0.0
                     : static_cast<double>(correct) / split.examples.size();
  return out;
}

std::vector<SpanEvalRecord> span_records(
    const NLIExample& example, const SpanSet& spans,
    std::span<const double> a_neutral, std::span<const double> a_contradiction) {
  std::vector<SpanEvalRecord> out;
  for (size_t v = 0; v < example.rationales.size(); ++v) {
    const auto& rationale = example.rationales[v];
    if (!is_single_consecutive(rationale)) continue;
    auto [lo, hi] = std::minmax_element(rationale.begin(), rationale.end());
    SpanEvalRecord record;
    record.id = example.id;
    record.variant = static_cast<int>(v);
    record.rationale = {*lo, *hi + 1};
    for (int i = 0; i < spans.size(); ++i) {
      if (!spans.at(i).range.contains(record.rationale)) continue;
      record.items.push_back({i, spans.at(i).range,
                              span_prediction(a_neutral[i], a_contradiction[i]),
                              example.gold});
    }
    out.push_back(std::move(record));
  }
  return out;
}

std::array<double, kNumLabels> per_class_f1(std::span<const Label> predicted,
                                            std::span<const Label> gold) {
  if (predicted.size() != gold.size()) {
    throw InvalidArgument("prediction and gold lists differ in length");
  }
  std::array<double, kNumLabels> f{};
  for (int c = 0; c < kNumLabels; ++c) {
    int tp = 0, fp = 0, fn = 0;
    for (size_t i = 0; i < gold.size(); ++i) {
      bool p = static_cast<int>(predicted[i]) == c;
      bool g = static_cast<int>(gold[i]) == c;
      tp += p && g;
      fp += p && !g;
      fn += !p && g;
    }
    f[c] = tp == 0 ? 0.0 : 2.0 * tp / (2.0 * tp + fp + fn);
  }
  return f;
}

void fill_span_metrics(const std::vector<SpanEvalRecord>& records,
                       MetricsReport& report) {
  std::vector<Label> predicted, gold;
  for (const auto& r : records) {
    for (const auto& item : r.items) {
      predicted.push_back(item.predicted);
      gold.push_back(item.gold);
    }
  }
  int correct = 0;
  for (size_t i = 0; i < gold.size(); ++i) correct += predicted[i] == gold[i];
  report.n_records = static_cast<int>(records.size());
  report.n_spans = static_cast<int>(gold.size());
  report.span_accuracy =
      gold.empty() ? 0.0 : static_cast<double>(correct) / gold.size();
  report.f_class = per_class_f1(predicted, gold);
  report.f_macro =
      (report.f_class[0] + report.f_class[1] + report.f_class[2]) / 3.0;
}

SpanEvaluation evaluate_spans(const SlrModel& model, const DatasetSplit& split,
                              const Segmenter& segmenter) {
  SpanEvaluation out;
  SentenceEvaluation sentences = evaluate_sentences(model, split, segmenter);
  out.metrics.sentence_accuracy = sentences.accuracy;
  out.metrics.n_sentences = static_cast<int>(split.size());
  size_t k = 0;
  for (size_t i = 0; i < split.examples.size(); ++i) {
    if (!sentences.predictions[i]) continue;
    const auto& report = sentences.reports[k];
    const auto& spans = sentences.span_sets[k];
    ++k;
    auto records = span_records(split.examples[i], spans, report.a_neutral,
                                report.a_contradiction);
    for (auto& r : records) out.records.push_back(std::move(r));
  }
  fill_span_metrics(out.records, out.metrics);
  return out;
}

std::vector<OodRow> run_ood_suite(const SlrModel& model,
                                  const std::vector<DatasetSplit>& splits,
                                  const Segmenter& segmenter) {
  std::vector<OodRow> rows;
  for (const auto& split : splits) {
    auto result = evaluate_sentences(model, split, segmenter);
    rows.push_back({split.name, result.accuracy,
                    static_cast<int>(split.size()), result.errors});
  }
  return rows;
}

double bootstrap_test(const std::vector<bool>& correct_a,
                      const std::vector<bool>& correct_b, int n_resamples,
                      uint64_t seed) {
  if (correct_a.size() != correct_b.size()) {
    throw InvalidArgument("bootstrap inputs differ in length");
  }
  if (n_resamples < 1) throw InvalidArgument("need at least one resample");
  const size_t n = correct_a.size();
  if (n == 0) return 1.0;
  std::vector<int> diff(n);
  long observed = 0;
  for (size_t i = 0; i < n; ++i) {
    diff[i] = static_cast<int>(correct_a[i]) - static_cast<int>(correct_b[i]);
    observed += diff[i];
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<size_t> pick(0, n - 1);
  long extreme = 0;
  for (int r = 0; r < n_resamples; ++r) {
    long total = 0;
    for (size_t i = 0; i < n; ++i) total += diff[pick(rng)];
    if (std::labs(total - observed) >= std::labs(observed)) ++extreme;
  }
  return static_cast<double>(extreme + 1) / (n_resamples + 1);
}

double bootstrap_test(std::span<const Label> preds_a,
                      std::span<const Label> preds_b,
                      std::span<const Label> golds, int n_resamples,
                      uint64_t seed) {
  if (preds_a.size() != golds.size() || preds_b.size() != golds.size()) {
    throw InvalidArgument("bootstrap inputs differ in length");
  }
  std::vector<bool> a(golds.size()), b(golds.size());
  for (size_t i = 0; i < golds.size(); ++i) {
    a[i] = preds_a[i] == golds[i];
    b[i] = preds_b[i] == golds[i];
  }
  return bootstrap_test(a, b, n_resamples, seed);
}

nlohmann::json to_json(const MetricsReport& r) {
  return {{"sentence_accuracy", r.sentence_accuracy},
          {"span_accuracy", r.span_accuracy},
          {"f_macro", r.f_macro},
          {"f_entailment", r.f_class[0]},
          {"f_neutral", r.f_class[1]},
          {"f_contradiction", r.f_class[2]},
          {"n_sentences", r.n_sentences},
          {"n_spans", r.n_spans},
          {"n_records", r.n_records}};
}

std::string format_metrics_table(
    const std::vector<std::pair<std::string, MetricsReport>>& rows) {
  size_t width = 5;
  for (const auto& [name, _] : rows) width = std::max(width, name.size());
  std::ostringstream out;
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-*s  %10s  %9s  %7s  %6s  %6s  %6s\n",
                static_cast<int>(width), "Model", "Sent. acc.", "Span acc.",
                "F-macro", "F-ent", "F-neut", "F-cont");
  out << buf;
  for (const auto& [name, r] : rows) {
    std::snprintf(buf, sizeof(buf),
                  "%-*s  %10.2f  %9.2f  %7.2f  %6.2f  %6.2f  %6.2f\n",
                  static_cast<int>(width), name.c_str(),
                  100 * r.sentence_accuracy, 100 * r.span_accuracy,
                  100 * r.f_macro, 100 * r.f_class[0], 100 * r.f_class[1],
                  100 * r.f_class[2]);
    out << buf;
  }
  return out.str();
}

std::string format_ood_table(const std::vector<OodRow>& rows) {
  size_t width = 7;
  for (const auto& r : rows) width = std::max(width, r.split.size());
  std::ostringstream out;
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-*s  %8s  %8s  %6s\n",
                static_cast<int>(width), "Dataset", "Accuracy", "Examples",
                "Errors");
  out << buf;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%-*s  %8.2f  %8d  %6d\n",
                  static_cast<int>(width), r.split.c_str(), 100 * r.accuracy,
                  r.examples, r.errors);
    out << buf;
  }
  return out.str();
}

}  // namespace slr
