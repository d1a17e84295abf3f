// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero when any mandatory criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "slr/evaluation.h"
#include "slr/logic.h"
#include "slr/losses.h"
#include "slr/segmenter.h"
#include "slr/synthetic.h"
#include "slr/tokenizer.h"
#include "slr/trainer.h"

namespace slr {
namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, a);
  return buf;
}

// 1. Aggregation against the brute-force rule table on the score grid.
Outcome logic_oracle() {
  auto t0 = Clock::now();
  const double grid[] = {0.1, 0.3, 0.7, 0.9};
  long checked = 0, mismatched = 0;
  for (int m = 1; m <= 3; ++m) {
    int combos = 1;
    for (int i = 0; i < 2 * m; ++i) combos *= 4;
    for (int code = 0; code < combos; ++code) {
      std::vector<double> a_n(m), a_c(m);
      bool any_c = false, any_n = false;
      for (int i = 0, rest = code; i < m; ++i) {
        a_n[i] = grid[rest % 4];
        rest /= 4;
        a_c[i] = grid[rest % 4];
        rest /= 4;
        any_c = any_c || a_c[i] > 0.5;
        any_n = any_n || a_n[i] > 0.5;
      }
      Label expected = any_c   ? Label::kContradiction
                       : any_n ? Label::kNeutral
                               : Label::kEntailment;
      ++checked;
      if (aggregate_prediction(a_n, a_c) != expected) ++mismatched;
    }
  }
  double secs = seconds_since(t0);
  return {mismatched == 0 && secs < 1.0,
          std::to_string(checked) + " configurations, " +
              std::to_string(mismatched) + " mismatches, " +
              fmt("%.3fs", secs) + " (limit 1s)"};
}

// 2. Figure 1 segmentation, exact strings.
Outcome figure1() {
  SpanSet spans = Segmenter(3).segment(
      "fig1", "a man in a wetsuit walks out of the water carrying a surfboard.");
  const std::vector<std::string> expected = {
      "a man", "in a wetsuit", "walks out of the water", "carrying a surfboard."};
  std::vector<std::string> granular;
  for (const Span& s : spans.granular) granular.push_back(spans.span_text(s));
  bool composite = false;
  for (const Span& s : spans.composites) {
    composite = composite || spans.span_text(s) == "a man in a wetsuit";
  }
  std::string got;
  for (const auto& g : granular) got += (got.empty() ? "" : " | ") + g;
  return {granular == expected && composite,
          "granular [" + got + "], composite \"a man in a wetsuit\" " +
              (composite ? "present" : "missing")};
}

// 3. Losses against a scalar-loop oracle and gradients against central
// differences.
Outcome loss_correctness() {
  auto t0 = Clock::now();
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> size(1, 8), bit(0, 1), label(0, 2);
  std::uniform_real_distribution<double> unit(0.02, 0.98), wide(-3, 3);
  double worst_value = 0.0, worst_grad = 0.0;

  struct Case {
    std::array<std::vector<double>, 2> raw, logits;
    std::vector<int> p;
    std::array<SentenceScaling, 2> scaling;
  };
  auto scores_of = [](const Case& c) {
    SpanScores s;
    s.h.resize(c.raw[0].size());
    for (int d = 0; d < 2; ++d) {
      double total = 0.0, L = 0.0;
      for (double a : c.raw[d]) total += a;
      s.detectors[d].a_raw = c.raw[d];
      s.detectors[d].span_logit = c.logits[d];
      for (size_t i = 0; i < c.raw[d].size(); ++i) {
        s.detectors[d].a_norm.push_back(c.raw[d][i] / total);
        L += c.raw[d][i] / total * c.logits[d][i];
      }
      s.detectors[d].sentence_logit = L;
    }
    return s;
  };

  for (int trial = 0; trial < 1000; ++trial) {
    Case c;
    int m = size(rng);
    for (int d = 0; d < 2; ++d) {
      for (int i = 0; i < m; ++i) {
        c.raw[d].push_back(unit(rng));
        c.logits[d].push_back(wide(rng));
      }
      c.scaling[d] = {wide(rng), wide(rng)};
      // Unique maximum, so the span-loss subgradient is a gradient.
      auto& r = c.raw[d];
      size_t arg = std::max_element(r.begin(), r.end()) - r.begin();
      for (size_t i = 0; i < r.size(); ++i) {
        if (i != arg && r[arg] - r[i] < 1e-3) r[i] -= 2e-3;
      }
    }
    for (int i = 0; i < m; ++i) c.p.push_back(bit(rng));
    Label gold = static_cast<Label>(label(rng));
    SupervisionTarget target = training_targets(gold);
    RationaleAlignment al{c.p, true};
    LossOptions opts{true, 0.1};

    // Oracle: straight loops over the formulas.
    double oracle = 0.0;
    for (int d = 0; d < 2; ++d) {
      auto y = target[static_cast<Detector>(d)];
      if (!y) continue;
      double total = 0.0, L = 0.0, best = c.raw[d][0], rationale = 0.0;
      for (double a : c.raw[d]) total += a;
      for (int i = 0; i < m; ++i) {
        L += c.raw[d][i] / total * c.logits[d][i];
        best = std::max(best, c.raw[d][i]);
        rationale += c.p[i] * (c.raw[d][i] - *y) * (c.raw[d][i] - *y);
      }
      double q = 1.0 / (1.0 + std::exp(-(c.scaling[d].w3 * L + c.scaling[d].b3)));
      oracle += (q - *y) * (q - *y) + (best - *y) * (best - *y) + 0.1 * rationale;
    }
    ScoreGradients g;
    double value =
        total_example_loss(scores_of(c), target, al, opts, c.scaling, &g).total;
    worst_value = std::max(worst_value, std::abs(value - oracle));

    const double eps = 1e-6;
    auto loss = [&](const Case& x) {
      return total_example_loss(scores_of(x), target, al, opts, x.scaling).total;
    };
    auto check = [&](double analytic, Case up, Case down) {
      double numeric = (loss(up) - loss(down)) / (2 * eps);
      double rel = std::abs(analytic - numeric) /
                   std::max({1.0, std::abs(analytic), std::abs(numeric)});
      worst_grad = std::max(worst_grad, rel);
    };
    for (int d = 0; d < 2; ++d) {
      for (int i = 0; i < m; ++i) {
        Case up = c, down = c;
        up.raw[d][i] += eps;
        down.raw[d][i] -= eps;
        check(g.d_a_raw[d][i], up, down);
        up = c, down = c;
        up.logits[d][i] += eps;
        down.logits[d][i] -= eps;
        check(g.d_span_logit[d][i], up, down);
      }
      Case up = c, down = c;
      up.scaling[d].w3 += eps;
      down.scaling[d].w3 -= eps;
      check(g.d_w3[d], up, down);
      up = c, down = c;
      up.scaling[d].b3 += eps;
      down.scaling[d].b3 -= eps;
      check(g.d_b3[d], up, down);
    }
  }
  double secs = seconds_since(t0);
  return {worst_value <= 1e-9 && worst_grad <= 1e-4 && secs < 30.0,
          "max |loss - oracle| " + fmt("%.2e", worst_value) + " (tol 1e-9), " +
              "max gradient rel. error " + fmt("%.2e", worst_grad) +
              " (tol 1e-4), " + fmt("%.2fs", secs) + " (limit 30s)"};
}

// 4. Span count for g granular spans and cap K.
Outcome composite_count() {
  int wrong = 0;
  for (int g = 1; g <= 10; ++g) {
    std::string text;
    std::vector<TokenRange> nps;
    for (int i = 0; i < g; ++i) {
      text += (i ? " w" : "w") + std::to_string(i);
      nps.push_back({i, i + 1});
    }
    SpanSet base = segment_granular(text, tokenize(text), nps);
    for (int k = 1; k <= 5; ++k) {
      int expected = 0;
      for (int l = 1; l <= std::min(k, g); ++l) expected += g - l + 1;
      if (extend_with_composites(base, k).size() != expected) ++wrong;
    }
  }
  return {wrong == 0, std::to_string(50 - wrong) + "/50 (g, K) pairs exact"};
}

struct SyntheticRun {
  double sentence = 0.0;
  double span = 0.0;
  double granular = 0.0;
  double composite = 0.0;
  double seconds = 0.0;
};

SyntheticRun synthetic_run(const SyntheticConfig& train_cfg,
                           const SyntheticConfig& test_cfg, bool use_esnli) {
  auto t0 = Clock::now();
  SyntheticCorpus train_set = generate_synthetic(train_cfg, "synthetic-train");
  SyntheticCorpus test_set = generate_synthetic(test_cfg, "synthetic-test");
  TrainConfig config = preset_config("synthetic");
  config.use_esnli = use_esnli;
  Segmenter segmenter(config.max_run);
  TrainResult result = train(train_set.split, config, segmenter);
  SyntheticRun run;
  run.sentence = evaluate_sentences(*result.model, test_set.split, segmenter).accuracy;
  SyntheticSpanAccuracy spans = synthetic_span_report(*result.model, test_set, segmenter);
  run.span = spans.all;
  run.granular = spans.granular;
  run.composite = spans.composite;
  run.seconds = seconds_since(t0);
  return run;
}

SyntheticConfig base_train() {
  SyntheticConfig c;
  c.examples = 2400;
  c.seed = 1;
  return c;
}

SyntheticConfig held_out(SyntheticConfig c) {
  c.examples = 600;
  c.seed += 1000;
  c.biased_decoys = false;
  return c;
}

SyntheticRun& base_sentence_only() {
  static SyntheticRun run = synthetic_run(base_train(), held_out(base_train()), false);
  return run;
}

// 5. Span decisions learned from sentence labels only.
Outcome synthetic_end_to_end() {
  const SyntheticRun& r = base_sentence_only();
  return {r.sentence >= 0.95 && r.span >= 0.90 && r.seconds <= 300.0,
          "2400 train / 600 held out: sentence acc " + fmt("%.4f", r.sentence) +
              " (>= 0.95), span acc " + fmt("%.4f", r.span) + " (>= 0.90; granular " +
              fmt("%.4f", r.granular) + ", composite " + fmt("%.4f", r.composite) +
              "), " +
              fmt("%.1fs", r.seconds) + " (limit 300s)"};
}

// 6. Rationale supervision with lambda = 0.1.
Outcome esnli_effect() {
  const SyntheticRun& base_off = base_sentence_only();
  SyntheticRun base_on = synthetic_run(base_train(), held_out(base_train()), true);
  SyntheticConfig decoy = base_train();
  decoy.decoy_rate = 0.5;
  decoy.biased_decoys = true;
  SyntheticRun decoy_off = synthetic_run(decoy, held_out(decoy), false);
  SyntheticRun decoy_on = synthetic_run(decoy, held_out(decoy), true);
  double secs = base_on.seconds + decoy_off.seconds + decoy_on.seconds;
  double gain = decoy_on.span - decoy_off.span;
  return {base_on.span >= base_off.span && decoy_on.span >= decoy_off.span &&
              gain >= 0.01 && secs <= 300.0,
          "base span acc " + fmt("%.4f", base_off.span) + " -> " +
              fmt("%.4f", base_on.span) + ", ambiguous-atom span acc " +
              fmt("%.4f", decoy_off.span) + " -> " + fmt("%.4f", decoy_on.span) +
              " (gain " + fmt("%+.2f", 100 * gain) + " points, >= +1), " +
              fmt("%.1fs", secs) + " (limit 300s)"};
}

// 7. Paired bootstrap sanity.
Outcome bootstrap_sanity() {
  std::vector<Label> gold(500, Label::kNeutral), some(500, Label::kNeutral);
  for (int i = 0; i < 500; i += 4) some[i] = Label::kEntailment;
  double same = bootstrap_test(some, some, gold, 10000, 1);
  std::vector<bool> all(500, true), none(500, false);
  double disjoint = bootstrap_test(all, none, 10000, 1);
  double again = bootstrap_test(all, none, 10000, 1);
  std::vector<bool> half(500);
  for (int i = 0; i < 500; ++i) half[i] = i % 2;
  bool deterministic = again == disjoint && bootstrap_test(half, none, 10000, 7) ==
                                                bootstrap_test(half, none, 10000, 7);
  return {same == 1.0 && disjoint < 0.01 && deterministic,
          "identical p = " + fmt("%.4f", same) + ", disjoint p = " +
              fmt("%.5f", disjoint) + " (< 0.01), deterministic " +
              (deterministic ? "yes" : "no")};
}

// 8. Composite dropout statistics.
Outcome dropout_statistics() {
  SpanSet base = Segmenter(3).segment(
      "fig1", "a man in a wetsuit walks out of the water carrying a surfboard.");
  std::mt19937_64 rng(2);
  int dropped = 0;
  bool granular_intact = true;
  for (int i = 0; i < 10000; ++i) {
    SpanSet out = apply_composite_dropout(base, 0.1, rng);
    if (out.composites.empty()) ++dropped;
    granular_intact = granular_intact && out.granular.size() == base.granular.size();
    for (size_t g = 0; granular_intact && g < base.granular.size(); ++g) {
      granular_intact = out.granular[g].range == base.granular[g].range;
    }
  }
  double rate = dropped / 10000.0;
  return {std::abs(rate - 0.10) <= 0.01 && granular_intact,
          "empirical rate " + fmt("%.4f", rate) + " (0.10 +/- 0.01), granular " +
              (granular_intact ? "intact" : "altered")};
}

}  // namespace
}  // namespace slr

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::set<int> only;
  app.add_option("--only", only, "Run only these criteria")->check(CLI::Range(1, 9));
  CLI11_PARSE(app, argc, argv);

  struct Criterion {
    int id;
    const char* name;
    std::function<slr::Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "logic oracle equivalence", slr::logic_oracle},
      {2, "Figure 1 golden segmentation", slr::figure1},
      {3, "loss correctness", slr::loss_correctness},
      {4, "composite-count formula", slr::composite_count},
      {5, "synthetic end-to-end", slr::synthetic_end_to_end},
      {6, "e-SNLI supervision effect", slr::esnli_effect},
      {7, "bootstrap sanity", slr::bootstrap_sanity},
      {8, "dropout statistics", slr::dropout_statistics},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    slr::Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("[%s] %d. %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str());
    std::fflush(stdout);
  }
  if (only.empty() || only.count(9)) {
    std::printf("[SKIP] 9. full-scale track (non-gating): needs SNLI/MNLI/e-SNLI "
                "data and a pretrained encoder; not run at desk scale\n");
  }
  return failures == 0 ? 0 : 1;
}
