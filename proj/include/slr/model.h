#ifndef SLR_MODEL_H_
#define SLR_MODEL_H_

#include <array>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "slr/encoder.h"
#include "slr/label.h"
#include "slr/param.h"
#include "slr/segmenter.h"

namespace slr {

// Attention and logit parameters for one detector (neutral or
// contradiction). Shapes: w1 hidden x d, b1 hidden x 1, w2 1 x hidden,
// b2/w3/b3 1 x 1, logit_w 1 x d, logit_b 1 x 1.
struct DetectionHead {
  Param w1, b1, w2, b2;  // unnormalized attention
  Param w3, b3;          // sentence logit scaling
  Param logit_w, logit_b;  // per-span logit

  DetectionHead() = default;
  DetectionHead(const std::string& prefix, int input_dim, int hidden_dim);
  void initialize(std::mt19937_64& rng);
  std::vector<Param*> parameters();
  std::vector<const Param*> parameters() const;
  int input_dim() const { return static_cast<int>(w1.value.cols()); }
  int hidden_dim() const { return static_cast<int>(w1.value.rows()); }
};

// sigmoid(w2 . tanh(w1 h + b1) + b2), strictly inside (0, 1) for finite h.
double attention_score(const DetectionHead& head, const Eigen::VectorXd& h);

double span_logit(const DetectionHead& head, const Eigen::VectorXd& h);

// a_i = raw_i / sum(raw). Throws InvalidArgument on an empty input.
std::vector<double> normalize_attention(std::span<const double> raw);

// sum_i a_i L_i. Throws InvalidArgument on a length mismatch.
double sentence_logit(std::span<const double> attention,
                      std::span<const double> span_logits);

struct DetectorScores {
  std::vector<double> span_logit;  // L_i
  std::vector<double> a_raw;       // unnormalized attention, the span decision
  std::vector<double> a_norm;      // normalized attention
  double sentence_logit = 0.0;     // L
};

struct SpanScores {
  std::vector<Eigen::VectorXd> h;  // shared span representations
  std::array<DetectorScores, kNumDetectors> detectors;

  int size() const { return static_cast<int>(h.size()); }
  const DetectorScores& operator[](Detector d) const {
    return detectors[static_cast<int>(d)];
  }
  DetectorScores& operator[](Detector d) {
    return detectors[static_cast<int>(d)];
  }
};

// d(loss) with respect to the per-span outputs of each detector, plus the
// sentence scaling parameters.
struct ScoreGradients {
  std::array<std::vector<double>, kNumDetectors> d_a_raw;
  std::array<std::vector<double>, kNumDetectors> d_span_logit;
  std::array<double, kNumDetectors> d_w3{0.0, 0.0};
  std::array<double, kNumDetectors> d_b3{0.0, 0.0};

  explicit ScoreGradients(int m = 0);
};

struct ForwardCache {
  std::vector<std::unique_ptr<EncoderCache>> encoder;
  std::vector<Eigen::VectorXd> h;
  std::array<std::vector<Eigen::VectorXd>, kNumDetectors> hidden;  // tanh(w1 h + b1)
  std::vector<double> a_raw[kNumDetectors];
};

// Encoder plus the two detection heads.
class SlrModel {
 public:
  // head_hidden <= 0 selects the encoder dimension.
  SlrModel(std::unique_ptr<Encoder> encoder, int head_hidden, uint64_t seed);

  SpanScores forward(const std::vector<std::string>& premise,
                     const SpanSet& spans, ForwardCache* cache = nullptr) const;
  // Accumulates parameter gradients.
  void backward(const ForwardCache& cache, const ScoreGradients& grads);

  std::vector<Param*> parameters();
  void zero_grad();

  Encoder& encoder() { return *encoder_; }
  const Encoder& encoder() const { return *encoder_; }
  DetectionHead& head(Detector d) { return heads_[static_cast<int>(d)]; }
  const DetectionHead& head(Detector d) const {
    return heads_[static_cast<int>(d)];
  }
  std::string signature() const;

  nlohmann::json save() const;
  static SlrModel load(const nlohmann::json& j);

 private:
  std::unique_ptr<Encoder> encoder_;
  std::array<DetectionHead, kNumDetectors> heads_;
};

}  // namespace slr

#endif  // SLR_MODEL_H_
