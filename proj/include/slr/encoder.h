#ifndef SLR_ENCODER_H_
#define SLR_ENCODER_H_

#include <atomic>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "slr/param.h"
#include "slr/segmenter.h"

namespace slr {

// Per-call state an encoder keeps for its backward pass.
class EncoderCache {
 public:
  virtual ~EncoderCache() = default;
};

// Maps a premise and a masked hypothesis to one pooled vector of fixed
// dimension. Implementations must be deterministic when not training.
class Encoder {
 public:
  virtual ~Encoder() = default;

  virtual std::string kind() const = 0;
  virtual int dimension() const = 0;
  virtual const std::string& mask_token() const = 0;

  // When `cache` is non-null it receives what backward() needs.
  virtual Eigen::VectorXd encode(const std::vector<std::string>& premise,
                                 const std::vector<std::string>& hypothesis,
                                 std::unique_ptr<EncoderCache>* cache) const = 0;
  // Accumulates parameter gradients for d(loss)/d(output) = d_output.
  virtual void backward(const EncoderCache& cache,
                        const Eigen::VectorXd& d_output) = 0;

  virtual std::vector<Param*> parameters() = 0;
  virtual nlohmann::json save() const = 0;
  // Architecture and vocabulary identity, used in fingerprints.
  virtual std::string signature() const = 0;

  // Number of inputs whose premise was cut to fit the length limit.
  long truncations() const { return truncations_.load(); }

 protected:
  void note_truncation() const;

 private:
  mutable std::atomic<long> truncations_{0};
};

// Replaces every token outside `range` with `mask`, keeping positions.
std::vector<std::string> mask_hypothesis(const std::vector<std::string>& tokens,
                                         const TokenRange& range,
                                         const std::string& mask);

// Encodes the premise with the hypothesis masked down to one span.
Eigen::VectorXd encode_span(const Encoder& encoder,
                            const std::vector<std::string>& premise,
                            const SpanSet& spans, const Span& span,
                            std::unique_ptr<EncoderCache>* cache = nullptr);

// Lower-cased word vocabulary with reserved <unk> and <mask> entries.
class Vocabulary {
 public:
  static constexpr int kUnk = 0;
  static constexpr int kMask = 1;
  static const std::string& mask_token();

  Vocabulary();
  explicit Vocabulary(const std::vector<std::string>& words);

  void add(const std::string& word);
  int id(const std::string& word) const;
  int size() const { return static_cast<int>(words_.size()); }
  const std::vector<std::string>& words() const { return words_; }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, int> index_;
};

enum class Pooling { kMean, kMax, kMeanMax };

std::string_view to_string(Pooling pooling);
Pooling parse_pooling(std::string_view text);

struct ToyEncoderConfig {
  int embedding_dim = 24;
  int token_dim = 32;
  int output_dim = 32;
  int max_tokens = 256;
  Pooling pooling = Pooling::kMeanMax;
};

// Small trainable encoder for desk-scale runs. Each unmasked hypothesis
// token is combined with the mean premise embedding,
//   u_t = tanh(A [e_t ; e_t * p] + a),
// the u_t are pooled (mean, max, or both concatenated) and projected,
//   h = tanh(W pool(u) + b).
// Mask tokens are skipped when pooling. The max channel lets a single
// decisive token survive in long composite spans, where the mean alone
// dilutes it.
class ToyEncoder : public Encoder {
 public:
  ToyEncoder(Vocabulary vocab, ToyEncoderConfig config, uint64_t seed);
  static std::unique_ptr<ToyEncoder> load(const nlohmann::json& j);

  std::string kind() const override { return "toy"; }
  int dimension() const override { return config_.output_dim; }
  const std::string& mask_token() const override {
    return Vocabulary::mask_token();
  }
  Eigen::VectorXd encode(const std::vector<std::string>& premise,
                         const std::vector<std::string>& hypothesis,
                         std::unique_ptr<EncoderCache>* cache) const override;
  void backward(const EncoderCache& cache,
                const Eigen::VectorXd& d_output) override;
  std::vector<Param*> parameters() override;
  nlohmann::json save() const override;
  std::string signature() const override;

  const Vocabulary& vocabulary() const { return vocab_; }
  const ToyEncoderConfig& config() const { return config_; }

 private:
  Vocabulary vocab_;
  ToyEncoderConfig config_;
  Param embedding_;  // embedding_dim x vocab
  Param token_w_;    // token_dim x 2*embedding_dim
  Param token_b_;
  Param out_w_;      // output_dim x pooled width
  Param out_b_;
};

// Builds a vocabulary over every premise and hypothesis token of the
// examples.
struct NLIExample;
Vocabulary build_vocabulary(const std::vector<NLIExample>& examples);

// Reconstructs an encoder saved with Encoder::save().
std::unique_ptr<Encoder> load_encoder(const nlohmann::json& j);

}  // namespace slr

#endif  // SLR_ENCODER_H_
