#include "slr/evaluation.h"

#include <gtest/gtest.h>

#include "slr/error.h"
#include "slr/synthetic.h"
#include "slr/tokenizer.h"

namespace slr {
namespace {

// Two one-token granular spans plus their composite.
SpanSet two_spans() {
  std::string text = "x y";
  return extend_with_composites(
      segment_granular(text, tokenize(text), {{0, 1}, {1, 2}}), 2);
}

// Model whose heads never fire, so every prediction is entailment.
std::unique_ptr<SlrModel> silent_model(const DatasetSplit& split) {
  ToyEncoderConfig cfg;
  cfg.embedding_dim = 4;
  cfg.token_dim = 4;
  cfg.output_dim = 4;
  auto model = std::make_unique<SlrModel>(
      std::make_unique<ToyEncoder>(build_vocabulary(split.examples), cfg, 1), 0, 1);
  for (Detector d : {Detector::kNeutral, Detector::kContradiction}) {
    model->head(d).w2.value.setZero();
    model->head(d).b2.value(0, 0) = -5.0;
  }
  return model;
}

TEST(LabelMatchTest, HansCollapsesNonEntailment) {
  EXPECT_TRUE(label_matches(Label::kNeutral, Label::kContradiction, SourceFormat::kHansTsv));
  EXPECT_FALSE(label_matches(Label::kEntailment, Label::kContradiction, SourceFormat::kHansTsv));
  EXPECT_FALSE(label_matches(Label::kNeutral, Label::kContradiction, SourceFormat::kSnliJsonl));
  EXPECT_TRUE(label_matches(Label::kEntailment, Label::kEntailment, SourceFormat::kHansTsv));
}

TEST(SentenceEvalTest, ConstantPredictorOnBalancedSplit) {
  SyntheticConfig sc;
  sc.examples = 1500;
  DatasetSplit split = generate_synthetic(sc, "bal").split;
  int counts[3] = {0, 0, 0};
  for (const auto& ex : split.examples) ++counts[static_cast<int>(ex.gold)];
  Segmenter seg(3);
  SentenceEvaluation ev = evaluate_sentences(*silent_model(split), split, seg);
  EXPECT_NEAR(ev.accuracy, counts[0] / 1500.0, 1e-12);
  EXPECT_NEAR(ev.accuracy, 1.0 / 3.0, 0.04);
  EXPECT_EQ(ev.reports.size(), split.size());
  EXPECT_EQ(ev.span_sets.size(), split.size());
  EXPECT_EQ(ev.errors, 0);
}

TEST(SpanEvalTest, OneOfTwoContainingSpansCorrect) {
  SpanSet spans = two_spans();
  NLIExample ex{"e", "p", "x y", Label::kNeutral, {{0}}};
  // Granular 0 neutral, composite entailment; granular 1 does not contain
  // the rationale.
  std::vector<double> a_n = {0.9, 0.9, 0.2}, a_c = {0.1, 0.1, 0.1};
  auto records = span_records(ex, spans, a_n, a_c);
  ASSERT_EQ(records.size(), 1u);
  ASSERT_EQ(records[0].items.size(), 2u);
  for (const auto& item : records[0].items) {
    EXPECT_TRUE(item.range.contains(records[0].rationale));
    EXPECT_EQ(item.gold, Label::kNeutral);
  }
  MetricsReport m;
  fill_span_metrics(records, m);
  EXPECT_DOUBLE_EQ(m.span_accuracy, 0.5);
  EXPECT_EQ(m.n_spans, 2);
  EXPECT_EQ(m.n_records, 1);
}

TEST(SpanEvalTest, NonConsecutiveRationaleYieldsNothing) {
  SpanSet spans = Segmenter(3).segment("e", "a dog near the cat.");
  NLIExample ex{"e", "p", "a dog near the cat.", Label::kNeutral, {{1, 4}}};
  std::vector<double> a(spans.size(), 0.9);
  EXPECT_TRUE(span_records(ex, spans, a, a).empty());
}

TEST(SpanEvalTest, EveryVariantIsScored) {
  SpanSet spans = two_spans();
  NLIExample ex{"e", "p", "x y", Label::kContradiction, {{0}, {1}, {0, 1}}};
  std::vector<double> a_n(3, 0.1), a_c(3, 0.9);
  auto records = span_records(ex, spans, a_n, a_c);
  ASSERT_EQ(records.size(), 3u);
  MetricsReport m;
  fill_span_metrics(records, m);
  EXPECT_EQ(m.n_spans, 2 + 2 + 1);
  EXPECT_DOUBLE_EQ(m.span_accuracy, 1.0);
}

TEST(MetricsTest, PerClassF1ByHand) {
  using L = Label;
  std::vector<L> gold = {L::kEntailment, L::kEntailment, L::kNeutral, L::kContradiction};
  std::vector<L> pred = {L::kEntailment, L::kNeutral, L::kNeutral, L::kNeutral};
  auto f = per_class_f1(pred, gold);
  EXPECT_NEAR(f[0], 2.0 / 3.0, 1e-12);  // P 1, R 1/2
  EXPECT_NEAR(f[1], 0.5, 1e-12);        // P 1/3, R 1
  EXPECT_NEAR(f[2], 0.0, 1e-12);
}

TEST(MetricsTest, MacroIsMeanOfClasses) {
  SpanSet spans = two_spans();
  std::vector<SpanEvalRecord> records;
  NLIExample a{"a", "p", "x y", Label::kNeutral, {{0}}};
  NLIExample b{"b", "p", "x y", Label::kContradiction, {{1}}};
  for (auto& r : span_records(a, spans, std::vector<double>{0.9, 0.1, 0.1},
                              std::vector<double>{0.1, 0.1, 0.1})) {
    records.push_back(r);
  }
  for (auto& r : span_records(b, spans, std::vector<double>{0.1, 0.1, 0.9},
                              std::vector<double>{0.1, 0.9, 0.1})) {
    records.push_back(r);
  }
  MetricsReport m;
  fill_span_metrics(records, m);
  EXPECT_NEAR(m.f_macro, (m.f_class[0] + m.f_class[1] + m.f_class[2]) / 3.0, 1e-9);
  for (double f : m.f_class) {
    EXPECT_GE(f, 0.0);
    EXPECT_LE(f, 1.0);
  }
  nlohmann::json j = to_json(m);
  EXPECT_DOUBLE_EQ(j["span_accuracy"].get<double>(), m.span_accuracy);
  std::string table = format_metrics_table({{"SLR-NLI", m}});
  EXPECT_NE(table.find("Span acc."), std::string::npos);
  EXPECT_NE(table.find("SLR-NLI"), std::string::npos);
}

TEST(BootstrapTest, IdenticalPredictionsGiveOne) {
  std::vector<Label> gold(200, Label::kNeutral), pred(200, Label::kEntailment);
  for (int i = 0; i < 200; i += 3) pred[i] = Label::kNeutral;
  EXPECT_DOUBLE_EQ(bootstrap_test(pred, pred, gold, 10000, 1), 1.0);
}

TEST(BootstrapTest, DisjointCorrectnessIsSignificant) {
  std::vector<bool> a(500, true), b(500, false);
  EXPECT_LT(bootstrap_test(a, b, 10000, 1), 0.01);
}

TEST(BootstrapTest, DeterministicAndMonotone) {
  std::vector<bool> a(300), base(300);
  for (int i = 0; i < 300; ++i) a[i] = base[i] = (i % 2 == 0);
  EXPECT_EQ(bootstrap_test(a, base, 2000, 9), bootstrap_test(a, base, 2000, 9));
  double last = 1.0;
  for (int flips : {5, 15, 30, 60}) {
    std::vector<bool> better = base;
    int done = 0;
    for (int i = 1; i < 300 && done < flips; i += 2, ++done) better[i] = true;
    double p = bootstrap_test(better, base, 2000, 9);
    EXPECT_GE(p, 0.0);
    EXPECT_LE(p, 1.0);
    EXPECT_LE(p, last);
    last = p;
  }
  EXPECT_LT(last, 0.01);
}

TEST(BootstrapTest, RejectsLengthMismatch) {
  std::vector<Label> a(3), b(4), g(3);
  EXPECT_THROW(bootstrap_test(a, b, g, 100, 1), InvalidArgument);
  EXPECT_THROW(bootstrap_test(std::vector<bool>(2), std::vector<bool>(3), 100, 1),
               InvalidArgument);
}

TEST(OodTest, SameSplitTwiceGivesSameRow) {
  SyntheticConfig sc;
  sc.examples = 60;
  DatasetSplit split = generate_synthetic(sc, "ood").split;
  Segmenter seg(3);
  auto model = silent_model(split);
  auto rows = run_ood_suite(*model, {split, split}, seg);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].accuracy, rows[1].accuracy);
  EXPECT_EQ(rows[0].accuracy, evaluate_sentences(*model, split, seg).accuracy);
  EXPECT_NE(format_ood_table(rows).find("ood"), std::string::npos);
}

}  // namespace
}  // namespace slr
