#include "slr/trainer.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "slr/encoder.h"
#include "slr/error.h"
#include "slr/evaluation.h"
#include "slr/io.h"
#include "slr/logic.h"
#include "slr/optim.h"
#include "slr/tokenizer.h"

namespace slr {

namespace {

void accumulate(LossBreakdown& into, const LossBreakdown& x) {
  into.sent_n += x.sent_n;
  into.sent_c += x.sent_c;
  into.span_n += x.span_n;
  into.span_c += x.span_c;
  into.esnli_n += x.esnli_n;
  into.esnli_c += x.esnli_c;
  into.total += x.total;
}

LossBreakdown scaled(LossBreakdown x, double f) {
  x.sent_n *= f, x.sent_c *= f, x.span_n *= f, x.span_c *= f;
  x.esnli_n *= f, x.esnli_c *= f, x.total *= f;
  return x;
}

std::vector<Eigen::MatrixXd> snapshot(const std::vector<Param*>& params) {
  std::vector<Eigen::MatrixXd> out;
  for (const Param* p : params) out.push_back(p->value);
  return out;
}

void restore(const std::vector<Param*>& params,
             const std::vector<Eigen::MatrixXd>& values) {
  for (size_t i = 0; i < params.size(); ++i) params[i]->value = values[i];
}

}  // namespace

std::vector<PreparedExample> prepare_examples(const DatasetSplit& split,
                                              const Segmenter& segmenter,
                                              int* skipped) {
  std::vector<PreparedExample> out;
  int failed = 0;
  for (const auto& ex : split.examples) {
    try {
      PreparedExample p;
      p.id = ex.id;
      p.gold = ex.gold;
      p.premise = tokenize(ex.premise).words();
      p.spans = segmenter.segment(ex.id, ex.hypothesis);
      if (!ex.rationales.empty()) p.rationale = ex.rationales.front();
      out.push_back(std::move(p));
    } catch (const Error&) {
      ++failed;
    }
  }
  if (skipped) *skipped = failed;
  return out;
}

nlohmann::json to_json(const EpochLog& log) {
  nlohmann::json j = {{"epoch", log.epoch},
                      {"examples", log.examples},
                      {"dropped_composites", log.dropped_composites},
                      {"learning_rate", log.learning_rate},
                      {"loss",
                       {{"sent_n", log.mean_loss.sent_n},
                        {"sent_c", log.mean_loss.sent_c},
                        {"span_n", log.mean_loss.span_n},
                        {"span_c", log.mean_loss.span_c},
                        {"esnli_n", log.mean_loss.esnli_n},
                        {"esnli_c", log.mean_loss.esnli_c},
                        {"total", log.mean_loss.total}}}};
  j["dev_accuracy"] = log.dev_accuracy ? nlohmann::json(*log.dev_accuracy)
                                       : nlohmann::json(nullptr);
  return j;
}

TrainResult train(const DatasetSplit& train_split, const TrainConfig& config,
                  const Segmenter& segmenter, const DatasetSplit* dev,
                  std::unique_ptr<Encoder> encoder,
                  const std::function<void(const EpochLog&)>& on_epoch) {
  config.validate();
  TrainResult result;
  auto examples = prepare_examples(train_split, segmenter, &result.skipped);
  if (examples.empty()) throw InvalidArgument("no trainable examples");

  if (!encoder) {
    ToyEncoderConfig ec;
    ec.embedding_dim = config.embedding_dim;
    ec.token_dim = config.token_dim;
    ec.output_dim = config.output_dim;
    ec.max_tokens = config.max_tokens;
    ec.pooling = parse_pooling(config.pooling);
    encoder = std::make_unique<ToyEncoder>(
        build_vocabulary(train_split.examples), ec, config.seed);
  }
  result.model = std::make_unique<SlrModel>(std::move(encoder),
                                            config.head_hidden, config.seed);
  SlrModel& model = *result.model;
  auto params = model.parameters();
  AdamW optimizer(params, config.weight_decay);

  const long n = static_cast<long>(examples.size());
  const long steps_per_epoch = (n + config.batch_size - 1) / config.batch_size;
  LinearSchedule schedule = build_schedule(config, steps_per_epoch);
  LossOptions loss_options{config.use_esnli, config.lambda_esnli};

  std::mt19937_64 rng(config.seed);
  std::vector<size_t> order(examples.size());
  std::iota(order.begin(), order.end(), 0);

  double best_dev = -1.0;
  int since_best = 0;
  std::vector<Eigen::MatrixXd> best_params;
  long step = 0;
  ForwardCache cache;
  ScoreGradients grads;

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    EpochLog log;
    log.epoch = epoch;
    LossBreakdown sum;
    for (long start = 0; start < n; start += config.batch_size) {
      long end = std::min(n, start + config.batch_size);
      model.zero_grad();
      auto scaling = sentence_scaling(model);
      for (long b = start; b < end; ++b) {
        const PreparedExample& ex = examples[order[b]];
        SpanSet spans =
            apply_composite_dropout(ex.spans, config.composite_dropout_rate, rng);
        if (spans.composites.size() < ex.spans.composites.size()) {
          ++log.dropped_composites;
        }
        RationaleAlignment alignment = align_rationale(spans, ex.rationale);
        SpanScores scores = model.forward(ex.premise, spans, &cache);
        LossBreakdown loss =
            total_example_loss(scores, training_targets(ex.gold), alignment,
                               loss_options, scaling, &grads);
        if (!std::isfinite(loss.total)) {
          throw Error("non_finite_loss", "non-finite loss at epoch " +
                                             std::to_string(epoch) +
                                             " on example '" + ex.id + "'");
        }
        accumulate(sum, loss);
        model.backward(cache, grads);
      }
      scale_grads(params, 1.0 / static_cast<double>(end - start));
      clip_grad_norm(params, config.grad_clip);
      log.learning_rate = schedule(step);
      optimizer.step(log.learning_rate);
      ++step;
      if (!all_finite(params)) {
        throw Error("non_finite_loss",
                    "parameters became non-finite at epoch " +
                        std::to_string(epoch) + " after example '" +
                        examples[order[end - 1]].id + "'");
      }
    }
    log.examples = static_cast<int>(n);
    log.mean_loss = scaled(sum, 1.0 / static_cast<double>(n));
    if (dev) {
      log.dev_accuracy = evaluate_sentences(model, *dev, segmenter).accuracy;
    }
    result.log.push_back(log);
    if (on_epoch) on_epoch(log);

    if (dev && config.early_stopping) {
      if (*log.dev_accuracy > best_dev) {
        best_dev = *log.dev_accuracy;
        best_params = snapshot(params);
        result.best_epoch = epoch;
        since_best = 0;
      } else if (++since_best >= config.patience) {
        break;
      }
    } else {
      result.best_epoch = epoch;
    }
  }
  if (!best_params.empty()) restore(params, best_params);
  return result;
}

std::string model_fingerprint(const SlrModel& model,
                              const Segmenter& segmenter) {
  return hex64(fnv1a64(segmenter.signature() + "|" + model.signature()));
}

void save_checkpoint(const std::string& path, const SlrModel& model,
                     const TrainConfig& config, const Segmenter& segmenter) {
  nlohmann::json j;
  j["format"] = "slr-nli-checkpoint";
  j["version"] = Checkpoint::kVersion;
  j["segmenter"] = segmenter.signature();
  j["fingerprint"] = model_fingerprint(model, segmenter);
  j["config"] = config.to_map();
  j["config_fingerprint"] = config.fingerprint();
  j["model"] = model.save();
  write_file_atomic(path, j.dump());
}

Checkpoint load_checkpoint(const std::string& path,
                           const Segmenter* expected_segmenter) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw LoadError(path + ": not a checkpoint (" + e.what() + ")");
  }
  if (j.value("format", "") != "slr-nli-checkpoint") {
    throw LoadError(path + ": not a checkpoint");
  }
  if (j.value("version", 0) != Checkpoint::kVersion) {
    throw LoadError(path + ": unsupported checkpoint version " +
                    j["version"].dump());
  }
  Checkpoint cp;
  cp.segmenter_signature = j.at("segmenter").get<std::string>();
  cp.fingerprint = j.at("fingerprint").get<std::string>();
  for (const auto& [k, v] : j.at("config").items()) {
    cp.config.set(k, v.get<std::string>());
  }
  if (expected_segmenter &&
      expected_segmenter->signature() != cp.segmenter_signature) {
    throw LoadError(path + ": checkpoint was trained with segmenter '" +
                    cp.segmenter_signature + "' but '" +
                    expected_segmenter->signature() + "' was requested");
  }
  cp.model = std::make_unique<SlrModel>(SlrModel::load(j.at("model")));
  std::string actual = hex64(
      fnv1a64(cp.segmenter_signature + "|" + cp.model->signature()));
  if (actual != cp.fingerprint) {
    throw LoadError(path + ": fingerprint mismatch (stored " + cp.fingerprint +
                    ", computed " + actual + ")");
  }
  return cp;
}

}  // namespace slr
