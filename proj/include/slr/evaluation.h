#ifndef SLR_EVALUATION_H_
#define SLR_EVALUATION_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "slr/corpus.h"
#include "slr/logic.h"
#include "slr/model.h"
#include "slr/segmenter.h"

namespace slr {

// HANS gold labels are binary; neutral and contradiction both count as
// non-entailment there.
bool label_matches(Label predicted, Label gold, SourceFormat format);

struct SentenceEvaluation {
  std::string split;
  double accuracy = 0.0;
  int errors = 0;  // examples that could not be segmented, counted wrong
  std::vector<Label> golds;
  std::vector<std::optional<Label>> predictions;
  std::vector<ExplanationReport> reports;  // one per segmented example
  std::vector<SpanSet> span_sets;          // aligned with reports
};

// Predictions come only from the unnormalized span attentions; sentence
// logits are not consulted.
SentenceEvaluation evaluate_sentences(const SlrModel& model,
                                      const DatasetSplit& split,
                                      const Segmenter& segmenter);

struct SpanEvalItem {
  int span_index = 0;
  TokenRange range;
  Label predicted = Label::kEntailment;
  Label gold = Label::kEntailment;
};

struct SpanEvalRecord {
  std::string id;
  int variant = 0;
  TokenRange rationale;
  std::vector<SpanEvalItem> items;
};

// Scores every span that contains a whole single-run rationale against the
// sentence gold label. Non-consecutive rationale variants yield no record.
std::vector<SpanEvalRecord> span_records(const NLIExample& example,
                                         const SpanSet& spans,
                                         std::span<const double> a_neutral,
                                         std::span<const double> a_contradiction);

struct MetricsReport {
  double sentence_accuracy = 0.0;
  double span_accuracy = 0.0;
  double f_macro = 0.0;
  std::array<double, kNumLabels> f_class{0.0, 0.0, 0.0};  // by Label index
  int n_sentences = 0;
  int n_spans = 0;
  int n_records = 0;
};

// Accuracy and harmonic-mean F per class over (span, variant) pairs. A class
// with no gold and no predicted pairs gets F = 0.
void fill_span_metrics(const std::vector<SpanEvalRecord>& records,
                       MetricsReport& report);

// Per-class F1 over paired label lists.
std::array<double, kNumLabels> per_class_f1(std::span<const Label> predicted,
                                            std::span<const Label> gold);

struct SpanEvaluation {
  std::vector<SpanEvalRecord> records;
  MetricsReport metrics;  // sentence and span fields both filled
};

SpanEvaluation evaluate_spans(const SlrModel& model, const DatasetSplit& split,
                              const Segmenter& segmenter);

struct OodRow {
  std::string split;
  double accuracy = 0.0;
  int examples = 0;
  int errors = 0;
};

std::vector<OodRow> run_ood_suite(const SlrModel& model,
                                  const std::vector<DatasetSplit>& splits,
                                  const Segmenter& segmenter);

// Paired bootstrap over examples. Returns the two-tailed p-value of the
// observed accuracy difference against the resampled differences recentred
// on it: (1 + #{|d_r - d| >= |d|}) / (1 + resamples).
double bootstrap_test(std::span<const Label> preds_a,
                      std::span<const Label> preds_b,
                      std::span<const Label> golds, int n_resamples,
                      uint64_t seed);

// Same test over per-example correctness.
double bootstrap_test(const std::vector<bool>& correct_a,
                      const std::vector<bool>& correct_b, int n_resamples,
                      uint64_t seed);

nlohmann::json to_json(const MetricsReport& report);

// Aligned text table: Model | Sent. acc. | Span acc. | F-macro | F-ent |
// F-neut | F-cont, scores in percent.
std::string format_metrics_table(
    const std::vector<std::pair<std::string, MetricsReport>>& rows);

std::string format_ood_table(const std::vector<OodRow>& rows);

}  // namespace slr

#endif  // SLR_EVALUATION_H_
