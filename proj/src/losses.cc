#include "slr/losses.h"

#include <algorithm>
#include <cmath>

#include "slr/error.h"

namespace slr {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

double sentence_loss(double logit, int y, double w3, double b3) {
  double diff = sigmoid(w3 * logit + b3) - y;
  return diff * diff;
}

double span_loss(std::span<const double> a_raw, int y) {
  if (a_raw.empty()) throw InvalidArgument("span loss over no spans");
  double diff = *std::max_element(a_raw.begin(), a_raw.end()) - y;
  return diff * diff;
}

double esnli_loss(std::span<const double> a_raw, std::span<const int> p, int y,
                  double lambda) {
  if (a_raw.size() != p.size()) {
    throw InvalidArgument("rationale mask and attention differ in length");
  }
  double total = 0.0;
  for (size_t i = 0; i < a_raw.size(); ++i) {
    if (p[i]) total += (a_raw[i] - y) * (a_raw[i] - y);
  }
  return lambda * total;
}

std::array<SentenceScaling, kNumDetectors> sentence_scaling(
    const SlrModel& model) {
  std::array<SentenceScaling, kNumDetectors> out;
  for (int c = 0; c < kNumDetectors; ++c) {
    const auto& head = model.head(static_cast<Detector>(c));
    out[c] = {head.w3.value(0, 0), head.b3.value(0, 0)};
  }
  return out;
}

LossBreakdown total_example_loss(
    const SpanScores& scores, const SupervisionTarget& target,
    const RationaleAlignment& alignment, const LossOptions& options,
    const std::array<SentenceScaling, kNumDetectors>& scaling,
    ScoreGradients* grads) {
  const int m = scores.size();
  if (static_cast<int>(alignment.p.size()) != m) {
    throw InvalidArgument("rationale alignment does not match the span count");
  }
  if (grads) *grads = ScoreGradients(m);
  LossBreakdown out;
  for (int c = 0; c < kNumDetectors; ++c) {
    Detector d = static_cast<Detector>(c);
    auto y_opt = target[d];
    if (!y_opt) continue;
    const int y = *y_opt;
    const DetectorScores& s = scores.detectors[c];
    if (static_cast<int>(s.a_raw.size()) != m) {
      throw InvalidArgument("detector scores do not match the span count");
    }
    const SentenceScaling& k = scaling[c];

    double sent = sentence_loss(s.sentence_logit, y, k.w3, k.b3);
    double span = span_loss(s.a_raw, y);
    double rationale =
        options.use_esnli
            ? esnli_loss(s.a_raw, alignment.p, y, options.lambda_esnli)
            : 0.0;
    if (d == Detector::kNeutral) {
      out.sent_n = sent;
      out.span_n = span;
      out.esnli_n = rationale;
    } else {
      out.sent_c = sent;
      out.span_c = span;
      out.esnli_c = rationale;
    }
    out.total += sent + span + rationale;

    if (!grads) continue;
    auto& d_a = grads->d_a_raw[c];
    auto& d_l = grads->d_span_logit[c];

    // Sentence loss through the normalized attention.
    double q = sigmoid(k.w3 * s.sentence_logit + k.b3);
    double d_pre = 2.0 * (q - y) * q * (1.0 - q);
    grads->d_w3[c] = d_pre * s.sentence_logit;
    grads->d_b3[c] = d_pre;
    double d_logit = d_pre * k.w3;
    double total_raw = 0.0;
    for (double a : s.a_raw) total_raw += a;
    for (int i = 0; i < m; ++i) {
      d_l[i] += d_logit * s.a_norm[i];
      d_a[i] += d_logit * (s.span_logit[i] - s.sentence_logit) / total_raw;
    }

    auto argmax = std::max_element(s.a_raw.begin(), s.a_raw.end()) -
                  s.a_raw.begin();
    d_a[argmax] += 2.0 * (s.a_raw[argmax] - y);

    if (options.use_esnli) {
      for (int i = 0; i < m; ++i) {
        if (alignment.p[i]) {
          d_a[i] += 2.0 * options.lambda_esnli * (s.a_raw[i] - y);
        }
      }
    }
  }
  return out;
}

}  // namespace slr
