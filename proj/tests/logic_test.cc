#include "slr/logic.h"

#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "slr/error.h"
#include "slr/segmenter.h"
#include "slr/tokenizer.h"

namespace slr {
namespace {

// Brute-force reading of the composition rules over per-span scores.
Label rule_table(const std::vector<double>& a_n, const std::vector<double>& a_c) {
  bool any_c = false, any_n = false;
  for (double a : a_c) any_c = any_c || a > 0.5;
  for (double a : a_n) any_n = any_n || a > 0.5;
  if (any_c) return Label::kContradiction;
  if (any_n) return Label::kNeutral;
  return Label::kEntailment;
}

// Three one-token granular spans plus the K=2 composites (0,1) and (1,2).
SpanSet three_spans() {
  std::string text = "x y z";
  SpanSet s = segment_granular(text, tokenize(text), {{0, 1}, {1, 2}, {2, 3}});
  return extend_with_composites(s, 2);
}

TEST(TargetsTest, FollowGoldLabel) {
  SupervisionTarget c = training_targets(Label::kContradiction);
  EXPECT_FALSE(c.y_n.has_value());
  EXPECT_EQ(c.y_c, 1);
  SupervisionTarget n = training_targets(Label::kNeutral);
  EXPECT_EQ(n.y_n, 1);
  EXPECT_EQ(n.y_c, 0);
  SupervisionTarget e = training_targets(Label::kEntailment);
  EXPECT_EQ(e.y_n, 0);
  EXPECT_EQ(e.y_c, 0);
}

TEST(AggregateTest, Examples) {
  using V = std::vector<double>;
  EXPECT_EQ(aggregate_prediction(V{0.9, 0.9}, V{0.6, 0.1}), Label::kContradiction);
  EXPECT_EQ(aggregate_prediction(V{0.5, 0.2}, V{0.1, 0.4}), Label::kEntailment);
  EXPECT_EQ(aggregate_prediction(V{0.7, 0.1}, V{0.2, 0.3}), Label::kNeutral);
  EXPECT_EQ(aggregate_prediction(V{0.5}, V{0.5}), Label::kEntailment);
  EXPECT_THROW(aggregate_prediction(V{}, V{}), InvalidArgument);
  EXPECT_THROW(aggregate_prediction(V{0.1}, V{0.1, 0.2}), InvalidArgument);
}

TEST(AggregateTest, MatchesRuleTableOnGrid) {
  const double grid[] = {0.1, 0.3, 0.7, 0.9};
  int checked = 0;
  for (int m = 1; m <= 3; ++m) {
    int combos = 1;
    for (int i = 0; i < 2 * m; ++i) combos *= 4;
    for (int code = 0; code < combos; ++code) {
      std::vector<double> a_n(m), a_c(m);
      int rest = code;
      for (int i = 0; i < m; ++i) {
        a_n[i] = grid[rest % 4];
        rest /= 4;
        a_c[i] = grid[rest % 4];
        rest /= 4;
      }
      Label expected = rule_table(a_n, a_c);
      ASSERT_EQ(aggregate_prediction(a_n, a_c), expected);
      std::vector<Label> per_span;
      for (int i = 0; i < m; ++i) per_span.push_back(span_prediction(a_n[i], a_c[i]));
      ASSERT_EQ(compose_labels(per_span), expected);
      ++checked;
    }
  }
  EXPECT_EQ(checked, 16 + 256 + 4096);
}

TEST(AggregateTest, PermutationInvariantAndMonotone) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    int m = 1 + trial % 6;
    std::vector<double> a_n(m), a_c(m);
    for (int i = 0; i < m; ++i) {
      a_n[i] = unit(rng);
      a_c[i] = unit(rng);
    }
    Label base = aggregate_prediction(a_n, a_c);
    std::vector<int> order(m);
    for (int i = 0; i < m; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<double> pn(m), pc(m);
    for (int i = 0; i < m; ++i) {
      pn[i] = a_n[order[i]];
      pc[i] = a_c[order[i]];
    }
    EXPECT_EQ(aggregate_prediction(pn, pc), base);
    if (base == Label::kContradiction) {
      a_c[trial % m] = std::min(1.0, a_c[trial % m] + 0.3);
      EXPECT_EQ(aggregate_prediction(a_n, a_c), Label::kContradiction);
    }
  }
}

TEST(SpanPredictionTest, Examples) {
  EXPECT_EQ(span_prediction(0.1, 0.9), Label::kContradiction);
  EXPECT_EQ(span_prediction(0.9, 0.6), Label::kContradiction);
  EXPECT_EQ(span_prediction(0.9, 0.2), Label::kNeutral);
  EXPECT_EQ(span_prediction(0.2, 0.2), Label::kEntailment);
}

TEST(ExplanationTest, PrefersContainedGranularSpan) {
  SpanSet spans = three_spans();
  std::vector<Label> labels = {Label::kEntailment, Label::kNeutral,
                               Label::kEntailment, Label::kEntailment,
                               Label::kNeutral};
  auto out = extract_explanation_spans(spans, labels, Label::kNeutral);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].index, 1);
  EXPECT_EQ(out[0].label, Label::kNeutral);
}

TEST(ExplanationTest, CompositeWhenNoGranularCarriesIt) {
  SpanSet spans = three_spans();
  std::vector<Label> labels(5, Label::kEntailment);
  labels[3] = Label::kContradiction;  // composite (g1, g2)
  auto out = extract_explanation_spans(spans, labels, Label::kContradiction);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].index, 3);
  EXPECT_EQ(out[0].range, (TokenRange{0, 2}));
}

TEST(ExplanationTest, ContradictionDropsNeutralSpans) {
  SpanSet spans = three_spans();
  std::vector<Label> labels = {Label::kNeutral, Label::kEntailment,
                               Label::kContradiction, Label::kNeutral,
                               Label::kContradiction};
  auto out = extract_explanation_spans(spans, labels, Label::kContradiction);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].index, 2);
}

TEST(ExplanationTest, EntailmentHasNoSpans) {
  SpanSet spans = three_spans();
  std::vector<Label> labels(5, Label::kEntailment);
  EXPECT_TRUE(extract_explanation_spans(spans, labels, Label::kEntailment).empty());
}

TEST(ExplanationTest, RejectsInconsistentPrediction) {
  SpanSet spans = three_spans();
  std::vector<Label> labels(5, Label::kEntailment);
  EXPECT_THROW(extract_explanation_spans(spans, labels, Label::kNeutral),
               InvalidArgument);
  EXPECT_THROW(extract_explanation_spans(spans, std::vector<Label>(2), Label::kEntailment),
               InvalidArgument);
}

TEST(ExplanationTest, CoverageAndMinimality) {
  SpanSet spans = three_spans();
  // Every assignment of the five span labels.
  for (int code = 0; code < 243; ++code) {
    std::vector<Label> labels;
    for (int i = 0, rest = code; i < 5; ++i, rest /= 3) {
      labels.push_back(static_cast<Label>(rest % 3));
    }
    Label pred = compose_labels(labels);
    auto out = extract_explanation_spans(spans, labels, pred);
    if (pred == Label::kEntailment) {
      EXPECT_TRUE(out.empty());
      continue;
    }
    for (const auto& e : out) EXPECT_EQ(e.label, pred);
    for (int i = 0; i < spans.size(); ++i) {
      if (labels[i] != pred) continue;
      bool covered = std::any_of(out.begin(), out.end(), [&](const auto& e) {
        return spans.at(i).range.contains(e.range);
      });
      EXPECT_TRUE(covered) << "code " << code << " span " << i;
    }
    for (const auto& a : out) {
      for (const auto& b : out) {
        if (a.index != b.index) {
          EXPECT_FALSE(a.range.contains(b.range) && a.range != b.range);
        }
      }
    }
  }
}

TEST(ExplainTest, ReportAndRendering) {
  SpanSet spans = Segmenter(3).segment(
      "fig1", "a man in a wetsuit walks out of the water carrying a surfboard.");
  std::vector<double> a_n(spans.size(), 0.1), a_c(spans.size(), 0.1);
  a_n[3] = 0.8;  // "carrying a surfboard."
  a_n[6] = 0.7;  // composite containing it
  a_n[8] = 0.9;
  ExplanationReport r = explain("fig1", spans, a_n, a_c);
  EXPECT_EQ(r.prediction, Label::kNeutral);
  ASSERT_EQ(r.explanation_spans.size(), 1u);
  EXPECT_EQ(r.explanation_spans[0].index, 3);
  nlohmann::json j = to_json(r, spans);
  EXPECT_EQ(j["id"], "fig1");
  EXPECT_EQ(j["prediction"], "neutral");
  ASSERT_EQ(j["spans"].size(), 1u);
  EXPECT_EQ(j["spans"][0]["text"], "carrying a surfboard.");
  EXPECT_EQ(j["spans"][0]["class"], "neutral");
  EXPECT_DOUBLE_EQ(j["spans"][0]["a_n"].get<double>(), 0.8);
  std::string text = render_text(r, spans);
  EXPECT_NE(text.find("a man in a wetsuit walks out of the water carrying a surfboard."),
            std::string::npos);
  EXPECT_NE(text.find("~~~~~~~~~~~~~~~~~~~~~"), std::string::npos);
}

}  // namespace
}  // namespace slr
