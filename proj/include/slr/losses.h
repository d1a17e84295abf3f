#ifndef SLR_LOSSES_H_
#define SLR_LOSSES_H_

#include <array>
#include <span>

#include "slr/logic.h"
#include "slr/model.h"
#include "slr/segmenter.h"

namespace slr {

// (sigmoid(w3 * L + b3) - y)^2
double sentence_loss(double logit, int y, double w3, double b3);

// (max_i a_i - y)^2. Throws InvalidArgument on an empty vector.
double span_loss(std::span<const double> a_raw, int y);

// lambda * sum_i p_i (a_i - y)^2. Throws InvalidArgument on a length
// mismatch.
double esnli_loss(std::span<const double> a_raw, std::span<const int> p, int y,
                  double lambda);

struct LossBreakdown {
  double sent_n = 0.0, sent_c = 0.0;
  double span_n = 0.0, span_c = 0.0;
  double esnli_n = 0.0, esnli_c = 0.0;
  double total = 0.0;
};

struct LossOptions {
  bool use_esnli = false;
  double lambda_esnli = 0.1;
};

struct SentenceScaling {
  double w3 = 1.0;
  double b3 = 0.0;
};

std::array<SentenceScaling, kNumDetectors> sentence_scaling(const SlrModel& model);

// Sentence, span and (optionally) rationale losses for every supervised
// detector, summed. A detector without a target contributes nothing. When
// `grads` is non-null it is reset and filled with d(total)/d(scores); the
// max in the span loss routes its gradient to the first maximizing span.
LossBreakdown total_example_loss(
    const SpanScores& scores, const SupervisionTarget& target,
    const RationaleAlignment& alignment, const LossOptions& options,
    const std::array<SentenceScaling, kNumDetectors>& scaling,
    ScoreGradients* grads = nullptr);

}  // namespace slr

#endif  // SLR_LOSSES_H_
