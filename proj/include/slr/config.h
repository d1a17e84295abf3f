#ifndef SLR_CONFIG_H_
#define SLR_CONFIG_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace slr {

// Training and model settings. Text form is one "key = value" per line;
// '#' starts a comment.
struct TrainConfig {
  double learning_rate = 7.5e-6;
  int epochs = 2;
  int warmup_epochs = 1;
  int warmdown_epochs = 1;
  int max_run = 3;  // longest composite, in granular spans
  double composite_dropout_rate = 0.0;
  double lambda_esnli = 0.1;
  int batch_size = 32;
  uint64_t seed = 1;
  bool use_esnli = false;
  bool early_stopping = false;
  int patience = 10;
  double weight_decay = 0.01;
  double grad_clip = 1.0;
  // Toy encoder and head sizes.
  int embedding_dim = 24;
  int token_dim = 32;
  int output_dim = 32;
  int max_tokens = 256;
  std::string pooling = "mean_max";  // mean | max | mean_max
  int head_hidden = 0;  // 0 = encoder dimension

  // Throws InvalidArgument on out-of-range values.
  void validate() const;
  // Throws InvalidArgument on an unknown key or malformed value.
  void set(const std::string& key, const std::string& value);
  std::map<std::string, std::string> to_map() const;
  std::string to_text() const;
  // Hash over every field, stable across runs and platforms.
  std::string fingerprint() const;
};

TrainConfig parse_config(const std::string& text);
TrainConfig load_config(const std::string& path);
// Applies "key=value" overrides in order.
void apply_overrides(TrainConfig& config, const std::vector<std::string>& overrides);

// Presets: "snli", "snli-esnli", "sick", "reduced", plus "synthetic" for
// the toy encoder on the generated corpus.
TrainConfig preset_config(const std::string& name);

}  // namespace slr

#endif  // SLR_CONFIG_H_
