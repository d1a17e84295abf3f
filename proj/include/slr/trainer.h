#ifndef SLR_TRAINER_H_
#define SLR_TRAINER_H_

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "slr/config.h"
#include "slr/corpus.h"
#include "slr/losses.h"
#include "slr/model.h"
#include "slr/segmenter.h"

namespace slr {

// An example segmented once up front; composite dropout is applied per
// epoch on a copy of `spans`.
struct PreparedExample {
  std::string id;
  Label gold = Label::kEntailment;
  std::vector<std::string> premise;
  SpanSet spans;
  std::vector<int> rationale;  // first annotation variant, may be empty
};

// Examples that fail to segment are skipped and counted in `skipped`.
std::vector<PreparedExample> prepare_examples(const DatasetSplit& split,
                                              const Segmenter& segmenter,
                                              int* skipped = nullptr);

struct EpochLog {
  int epoch = 0;
  LossBreakdown mean_loss;
  int examples = 0;
  int dropped_composites = 0;
  double learning_rate = 0.0;  // at the end of the epoch
  std::optional<double> dev_accuracy;
};

nlohmann::json to_json(const EpochLog& log);

struct TrainResult {
  std::unique_ptr<SlrModel> model;
  std::vector<EpochLog> log;
  int best_epoch = 0;
  int skipped = 0;
};

// Trains the encoder and both heads. Without `encoder`, a toy encoder is
// built over the training vocabulary. Early stopping keeps the parameters
// of the best dev epoch and needs `dev`. Throws Error("non_finite_loss")
// naming the offending example.
TrainResult train(const DatasetSplit& train_split, const TrainConfig& config,
                  const Segmenter& segmenter, const DatasetSplit* dev = nullptr,
                  std::unique_ptr<Encoder> encoder = nullptr,
                  const std::function<void(const EpochLog&)>& on_epoch = {});

// Fingerprint over the segmentation behaviour and the model architecture.
std::string model_fingerprint(const SlrModel& model, const Segmenter& segmenter);

struct Checkpoint {
  static constexpr int kVersion = 1;
  TrainConfig config;
  std::string segmenter_signature;
  std::string fingerprint;
  std::unique_ptr<SlrModel> model;
};

// Atomic write of a versioned JSON container.
void save_checkpoint(const std::string& path, const SlrModel& model,
                     const TrainConfig& config, const Segmenter& segmenter);

// Refuses (LoadError) a checkpoint from another format version, one whose
// contents do not match its fingerprint, or one segmented differently from
// `expected_segmenter` when given.
Checkpoint load_checkpoint(const std::string& path,
                           const Segmenter* expected_segmenter = nullptr);

}  // namespace slr

#endif  // SLR_TRAINER_H_
