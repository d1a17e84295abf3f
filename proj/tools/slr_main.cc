// Command-line entry point: train, evaluate, explain, spans, experiment.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "slr/config.h"
#include "slr/corpus.h"
#include "slr/error.h"
#include "slr/evaluation.h"
#include "slr/io.h"
#include "slr/logic.h"
#include "slr/segmenter.h"
#include "slr/synthetic.h"
#include "slr/tokenizer.h"
#include "slr/trainer.h"

namespace slr {
namespace {

using nlohmann::json;

constexpr char kCacheEnv[] = "SLR_CACHE_DIR";

// Options shared by the data-reading subcommands.
struct DataOptions {
  std::vector<std::string> data;
  std::string format = "canonical_jsonl";
  std::string rationales;
  std::string np_sidecar;
  std::string pos_sidecar;
};

void add_data_options(CLI::App* cmd, DataOptions& o, bool data_required) {
  auto* data = cmd->add_option("--data", o.data,
                               "Dataset file or format:file; repeat for several splits");
  if (data_required) data->required();
  cmd->add_option("--format", o.format,
                  "canonical_jsonl | snli_jsonl | mnli_jsonl | sick_tsv | hans_tsv");
  cmd->add_option("--rationales", o.rationales,
                  "e-SNLI highlights (.csv or JSON-lines) for the first split");
  cmd->add_option("--np-sidecar", o.np_sidecar,
                  "Precomputed noun-phrase character ranges (JSON-lines)");
  cmd->add_option("--pos-sidecar", o.pos_sidecar,
                  "Precomputed part-of-speech tags (JSON-lines)");
}

SourceFormat format_of(const std::string& name) {
  auto f = parse_source_format(name);
  if (!f) throw InvalidArgument("unknown dataset format '" + name + "'");
  return *f;
}

void require_file(const std::string& path) {
  if (!std::filesystem::exists(path)) {
    throw LoadError("no such file: " + path);
  }
}

DatasetSplit load_split(const std::string& path, const std::string& format,
                        const std::string& rationales = "") {
  require_file(path);
  DatasetSplit split = load_nli_dataset(path, format_of(format));
  if (!rationales.empty()) {
    require_file(rationales);
    RationaleStats stats;
    split = attach_esnli_rationales(split, rationales, &stats);
    std::cerr << "rationales: attached " << stats.attached << ", rejected "
              << stats.rejected << ", unmatched " << stats.unmatched << "\n";
  }
  return split;
}

// Dataset arguments are "path" or "format:path"; the prefix overrides --format.
std::pair<std::string, std::string> split_data_arg(const std::string& arg,
                                                   const std::string& format) {
  auto colon = arg.find(':');
  if (colon != std::string::npos && parse_source_format(arg.substr(0, colon))) {
    return {arg.substr(0, colon), arg.substr(colon + 1)};
  }
  return {format, arg};
}

DatasetSplit load_data_arg(const std::string& arg, const std::string& format,
                           const std::string& rationales = "") {
  auto [f, path] = split_data_arg(arg, format);
  return load_split(path, f, rationales);
}

Segmenter make_segmenter(const DataOptions& o, int max_run) {
  if (!o.np_sidecar.empty() && !o.pos_sidecar.empty()) {
    throw InvalidArgument("--np-sidecar and --pos-sidecar are exclusive");
  }
  if (!o.np_sidecar.empty()) {
    require_file(o.np_sidecar);
    return Segmenter(std::make_shared<NpSidecarChunker>(
                         NpSidecarChunker::load(o.np_sidecar)),
                     max_run);
  }
  if (!o.pos_sidecar.empty()) {
    require_file(o.pos_sidecar);
    return Segmenter(std::make_shared<PosSidecarChunker>(
                         PosSidecarChunker::load(o.pos_sidecar)),
                     max_run);
  }
  return Segmenter(max_run);
}

// Options that determine a TrainConfig.
struct ConfigOptions {
  std::string config_path;
  std::string preset;
  std::vector<std::string> overrides;
  std::optional<uint64_t> seed;
};

void add_config_options(CLI::App* cmd, ConfigOptions& o) {
  cmd->add_option("--config", o.config_path, "Config file (key = value lines)");
  cmd->add_option("--preset", o.preset,
                  "snli | snli-esnli | sick | reduced | synthetic");
  cmd->add_option("--set", o.overrides, "Override a config key: key=value");
  cmd->add_option("--seed", o.seed, "Random seed");
}

TrainConfig resolve_config(const ConfigOptions& o, const std::string& fallback) {
  if (!o.config_path.empty() && !o.preset.empty()) {
    throw InvalidArgument("--config and --preset are exclusive");
  }
  TrainConfig config;
  if (!o.config_path.empty()) {
    require_file(o.config_path);
    config = load_config(o.config_path);
  } else {
    config = preset_config(o.preset.empty() ? fallback : o.preset);
  }
  apply_overrides(config, o.overrides);
  if (o.seed) config.seed = *o.seed;
  config.validate();
  return config;
}

void write_or_print(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
  } else {
    write_file_atomic(path, content);
  }
}

// Held-out split of the generated corpus, from a seed disjoint from training.
SyntheticCorpus synthetic_split(int n, uint64_t seed, const std::string& name,
                                double decoy_rate) {
  SyntheticConfig sc;
  sc.examples = n;
  sc.seed = seed;
  sc.decoy_rate = decoy_rate;
  sc.biased_decoys = decoy_rate > 0.0 && name == "synthetic-train";
  return generate_synthetic(sc, name);
}

// ---------------------------------------------------------------- train

struct TrainOptions {
  DataOptions data;
  ConfigOptions config;
  std::string dev;
  std::string out;
  std::string log;
  int synthetic = 0;
  double decoy_rate = 0.0;
};

int run_train(const TrainOptions& o) {
  TrainConfig config = resolve_config(o.config, "snli");
  Segmenter segmenter = make_segmenter(o.data, config.max_run);
  DatasetSplit train_split, dev_split;
  bool have_dev = false;
  if (o.synthetic > 0) {
    train_split = synthetic_split(o.synthetic, config.seed, "synthetic-train",
                                  o.decoy_rate).split;
    dev_split = synthetic_split(std::max(100, o.synthetic / 4), config.seed + 1000,
                                "synthetic-dev", o.decoy_rate).split;
    have_dev = true;
  } else {
    if (o.data.data.size() != 1) {
      throw InvalidArgument("train takes exactly one --data file or --synthetic");
    }
    train_split = load_data_arg(o.data.data[0], o.data.format, o.data.rationales);
  }
  if (!o.dev.empty()) {
    dev_split = load_data_arg(o.dev, o.data.format);
    have_dev = true;
  }
  if (config.early_stopping && !have_dev) {
    throw InvalidArgument("early_stopping needs --dev");
  }

  std::string log_path = o.log.empty() ? o.out + ".log.jsonl" : o.log;
  std::string log_text;
  TrainResult result = train(train_split, config, segmenter,
                             have_dev ? &dev_split : nullptr, nullptr,
                             [&](const EpochLog& e) {
                               json j = to_json(e);
                               j["config_fingerprint"] = config.fingerprint();
                               log_text += j.dump() + "\n";
                               std::cerr << j.dump() << "\n";
                             });
  save_checkpoint(o.out, *result.model, config, segmenter);
  write_file_atomic(log_path, log_text);
  json summary = {{"checkpoint", o.out},
                  {"log", log_path},
                  {"config_fingerprint", config.fingerprint()},
                  {"fingerprint", model_fingerprint(*result.model, segmenter)},
                  {"examples", train_split.size()},
                  {"skipped", result.skipped},
                  {"epochs_run", result.log.size()},
                  {"best_epoch", result.best_epoch}};
  if (!result.log.empty() && result.log.back().dev_accuracy) {
    summary["dev_accuracy"] = *result.log[result.best_epoch - 1].dev_accuracy;
  }
  std::cout << summary.dump(2) << "\n";
  return 0;
}

// ---------------------------------------------------------------- evaluate

struct EvaluateOptions {
  DataOptions data;
  std::string checkpoint;
  std::string out;
  std::string predictions;
};

int run_evaluate(const EvaluateOptions& o) {
  require_file(o.checkpoint);
  Checkpoint probe = load_checkpoint(o.checkpoint);
  Segmenter segmenter = make_segmenter(o.data, probe.config.max_run);
  Checkpoint cp = load_checkpoint(o.checkpoint, &segmenter);

  json out = {{"checkpoint", o.checkpoint},
              {"config_fingerprint", cp.config.fingerprint()},
              {"fingerprint", cp.fingerprint},
              {"splits", json::array()}};
  std::vector<std::pair<std::string, MetricsReport>> table;
  std::vector<OodRow> ood;
  std::string predictions;
  for (size_t k = 0; k < o.data.data.size(); ++k) {
    DatasetSplit split = load_data_arg(o.data.data[k], o.data.format,
                                    k == 0 ? o.data.rationales : "");
    SpanEvaluation ev = evaluate_spans(*cp.model, split, segmenter);
    SentenceEvaluation sent = evaluate_sentences(*cp.model, split, segmenter);
    json entry = {{"split", split.name}, {"metrics", to_json(ev.metrics)}};
    entry["segmentation_errors"] = sent.errors;
    out["splits"].push_back(entry);
    table.emplace_back(split.name, ev.metrics);
    ood.push_back({split.name, sent.accuracy, static_cast<int>(split.size()),
                   sent.errors});
    if (k == 0 && !o.predictions.empty()) {
      for (size_t i = 0; i < sent.reports.size(); ++i) {
        predictions += to_json(sent.reports[i], sent.span_sets[i]).dump() + "\n";
      }
    }
  }
  if (!o.predictions.empty()) write_file_atomic(o.predictions, predictions);
  std::cerr << format_metrics_table(table);
  if (ood.size() > 1) std::cerr << format_ood_table(ood);
  write_or_print(o.out, out.dump(2) + "\n");
  return 0;
}

// ---------------------------------------------------------------- explain

struct ExplainOptions {
  DataOptions data;
  std::string checkpoint;
  std::string scores;
  std::string premise;
  std::string hypothesis;
  std::string out;
  bool text = false;
  int max_run = 3;
};

// Scores read from a file instead of a model: {"id", "a_n": [...],
// "a_c": [...]}, one line per example.
std::map<std::string, std::pair<std::vector<double>, std::vector<double>>>
load_score_stub(const std::string& path) {
  require_file(path);
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> out;
  auto lines = read_lines(path);
  for (size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    json j = parse_json_line(path, static_cast<int>(i) + 1, lines[i]);
    try {
      out[j.at("id").get<std::string>()] = {j.at("a_n").get<std::vector<double>>(),
                                            j.at("a_c").get<std::vector<double>>()};
    } catch (const json::exception& e) {
      throw ParseError(path, static_cast<int>(i) + 1, e.what());
    }
  }
  return out;
}

int run_explain(const ExplainOptions& o) {
  if (o.checkpoint.empty() == o.scores.empty()) {
    throw InvalidArgument("explain needs exactly one of --checkpoint or --scores");
  }
  std::vector<NLIExample> examples;
  if (!o.hypothesis.empty()) {
    examples.push_back({"input", o.premise, o.hypothesis, Label::kEntailment, {}});
  }
  for (const auto& path : o.data.data) {
    for (auto& ex : load_data_arg(path, o.data.format).examples) {
      examples.push_back(std::move(ex));
    }
  }
  if (examples.empty()) throw InvalidArgument("explain needs --data or --hypothesis");

  std::optional<Checkpoint> cp;
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> stub;
  int max_run = o.max_run;
  if (!o.checkpoint.empty()) {
    require_file(o.checkpoint);
    max_run = load_checkpoint(o.checkpoint).config.max_run;
  } else {
    stub = load_score_stub(o.scores);
  }
  Segmenter segmenter = make_segmenter(o.data, max_run);
  if (!o.checkpoint.empty()) cp = load_checkpoint(o.checkpoint, &segmenter);

  std::string out;
  for (const auto& ex : examples) {
    SpanSet spans = segmenter.segment(ex.id, ex.hypothesis);
    std::vector<double> a_n, a_c;
    if (cp) {
      SpanScores s = cp->model->forward(tokenize(ex.premise).words(), spans);
      a_n = s[Detector::kNeutral].a_raw;
      a_c = s[Detector::kContradiction].a_raw;
    } else {
      auto it = stub.find(ex.id);
      if (it == stub.end()) throw LoadError("no scores for example '" + ex.id + "'");
      std::tie(a_n, a_c) = it->second;
      if (static_cast<int>(a_n.size()) != spans.size() ||
          static_cast<int>(a_c.size()) != spans.size()) {
        throw InvalidArgument("scores for '" + ex.id + "' have " +
                              std::to_string(a_n.size()) + " entries for " +
                              std::to_string(spans.size()) + " spans");
      }
    }
    ExplanationReport report = explain(ex.id, spans, a_n, a_c);
    out += o.text ? ex.id + ": " + std::string(to_string(report.prediction)) + "\n" +
                        render_text(report, spans) + "\n"
                  : to_json(report, spans).dump() + "\n";
  }
  write_or_print(o.out, out);
  return 0;
}

// ---------------------------------------------------------------- spans

struct SpansOptions {
  DataOptions data;
  std::string hypothesis;
  std::string id = "input";
  int max_run = 3;
};

int run_spans(const SpansOptions& o) {
  Segmenter segmenter = make_segmenter(o.data, o.max_run);
  json j = to_json(segmenter.segment(o.id, o.hypothesis));
  j["segmenter"] = segmenter.signature();
  std::cout << j.dump(2) << "\n";
  return 0;
}

// ---------------------------------------------------------------- experiment

struct ExperimentOptions {
  DataOptions data;
  ConfigOptions config;
  std::string dev;
  std::vector<std::string> eval;
  std::vector<int> sizes = {100, 1000};
  int seeds = 5;
  std::vector<std::string> variants = {"slr", "slr+dropout"};
  int synthetic = 0;
  int resamples = 10000;
  std::string out;
};

TrainConfig variant_config(TrainConfig base, const std::string& variant) {
  if (variant == "slr") return base;
  if (variant == "slr+dropout") {
    base.composite_dropout_rate = 0.1;
  } else if (variant == "slr+esnli") {
    base.use_esnli = true;
  } else {
    throw InvalidArgument("unknown variant '" + variant +
                          "' (slr, slr+dropout, slr+esnli)");
  }
  return base;
}

struct RunOutcome {
  std::map<std::string, double> accuracy;
  std::map<std::string, std::vector<bool>> correct;
};

json outcome_json(const RunOutcome& r) {
  return {{"accuracy", r.accuracy}, {"correct", r.correct}};
}

RunOutcome outcome_from(const json& j) {
  return {j.at("accuracy").get<std::map<std::string, double>>(),
          j.at("correct").get<std::map<std::string, std::vector<bool>>>()};
}

RunOutcome train_and_score(const DatasetSplit& train_split,
                           const DatasetSplit* dev, const TrainConfig& config,
                           const Segmenter& segmenter,
                           const std::vector<DatasetSplit>& evals) {
  TrainResult result = train(train_split, config, segmenter, dev);
  RunOutcome out;
  for (const auto& split : evals) {
    SentenceEvaluation ev = evaluate_sentences(*result.model, split, segmenter);
    std::vector<bool> correct;
    for (size_t i = 0; i < split.size(); ++i) {
      correct.push_back(ev.predictions[i] &&
                        label_matches(*ev.predictions[i], ev.golds[i],
                                      split.source_format));
    }
    out.accuracy[split.name] = ev.accuracy;
    out.correct[split.name] = std::move(correct);
  }
  return out;
}

uint64_t split_hash(const DatasetSplit& s) {
  return fnv1a64(to_canonical_jsonl(s));
}

int run_experiment(const ExperimentOptions& o) {
  TrainConfig base = resolve_config(o.config, "reduced");
  Segmenter segmenter = make_segmenter(o.data, base.max_run);
  if (o.seeds < 1) throw InvalidArgument("--seeds must be >= 1");
  if (o.variants.empty()) throw InvalidArgument("need at least one variant");

  DatasetSplit pool, dev;
  std::vector<DatasetSplit> evals;
  bool have_dev = false;
  if (o.synthetic > 0) {
    pool = synthetic_split(o.synthetic, 1, "synthetic-train", 0.0).split;
    dev = synthetic_split(300, 2001, "synthetic-dev", 0.0).split;
    evals.push_back(synthetic_split(600, 3001, "synthetic-test", 0.0).split);
    have_dev = true;
  } else {
    if (o.data.data.size() != 1) {
      throw InvalidArgument("experiment takes one --data pool or --synthetic");
    }
    pool = load_data_arg(o.data.data[0], o.data.format, o.data.rationales);
  }
  if (!o.dev.empty()) {
    dev = load_data_arg(o.dev, o.data.format);
    have_dev = true;
  }
  for (const auto& arg : o.eval) evals.push_back(load_data_arg(arg, o.data.format));
  if (evals.empty()) throw InvalidArgument("experiment needs at least one --eval");
  if (base.early_stopping && !have_dev) {
    throw InvalidArgument("early_stopping needs --dev");
  }

  const char* cache_env = std::getenv(kCacheEnv);
  std::string cache_dir = cache_env ? cache_env : "";
  if (!cache_dir.empty()) std::filesystem::create_directories(cache_dir);
  std::string eval_key;
  for (const auto& e : evals) eval_key += e.name + ":" + hex64(split_hash(e)) + ";";
  const std::string pool_key = hex64(split_hash(pool));
  const std::string dev_key = have_dev ? hex64(split_hash(dev)) : "none";

  json rows = json::array();
  // size -> variant -> split -> accuracies over seeds
  std::map<int, std::map<std::string, std::map<std::string, std::vector<double>>>> agg;
  for (int size : o.sizes) {
    if (size < 1 || static_cast<size_t>(size) > pool.size()) {
      throw InvalidArgument("size " + std::to_string(size) + " exceeds the pool of " +
                            std::to_string(pool.size()));
    }
    for (int s = 0; s < o.seeds; ++s) {
      uint64_t seed = base.seed + static_cast<uint64_t>(s);
      DatasetSplit sub = subsample(pool, static_cast<size_t>(size), seed);
      json row = {{"size", size}, {"seed", seed}, {"variants", json::object()},
                  {"p_values", json::object()}};
      std::map<std::string, RunOutcome> outcomes;
      for (const auto& variant : o.variants) {
        TrainConfig config = variant_config(base, variant);
        config.seed = seed;
        config.validate();
        std::string key = hex64(fnv1a64(config.fingerprint() + "|" + segmenter.signature() +
                                        "|" + pool_key + "|" + dev_key + "|" +
                                        std::to_string(size) + "|" + eval_key));
        std::string cache_file = cache_dir.empty() ? "" : cache_dir + "/" + key + ".json";
        RunOutcome outcome;
        if (!cache_file.empty() && std::filesystem::exists(cache_file)) {
          outcome = outcome_from(json::parse(read_file(cache_file)));
        } else {
          outcome = train_and_score(sub, have_dev ? &dev : nullptr, config,
                                    segmenter, evals);
          if (!cache_file.empty()) {
            write_file_atomic(cache_file, outcome_json(outcome).dump());
          }
        }
        row["variants"][variant] = {{"accuracy", outcome.accuracy},
                                    {"config_fingerprint", config.fingerprint()}};
        for (const auto& [split, acc] : outcome.accuracy) {
          agg[size][variant][split].push_back(acc);
        }
        outcomes[variant] = std::move(outcome);
        std::cerr << "size " << size << " seed " << seed << " " << variant << " "
                  << json(outcomes[variant].accuracy).dump() << "\n";
      }
      const std::string& reference = o.variants.front();
      for (size_t v = 1; v < o.variants.size(); ++v) {
        for (const auto& split : evals) {
          row["p_values"][o.variants[v]][split.name] = bootstrap_test(
              outcomes[o.variants[v]].correct[split.name],
              outcomes[reference].correct[split.name], o.resamples, seed);
        }
      }
      rows.push_back(row);
    }
  }

  json summary = json::array();
  std::ostringstream table;
  table << "size  variant          split                 mean acc.  seeds\n";
  for (const auto& [size, variants] : agg) {
    for (const auto& [variant, splits] : variants) {
      for (const auto& [split, accs] : splits) {
        double mean = 0.0;
        for (double a : accs) mean += a;
        mean /= static_cast<double>(accs.size());
        summary.push_back({{"size", size}, {"variant", variant},
                           {"split", split}, {"mean_accuracy", mean},
                           {"seeds", accs.size()}});
        char line[160];
        std::snprintf(line, sizeof(line), "%-5d %-16s %-21s %9.2f  %5zu\n", size,
                      variant.c_str(), split.c_str(), 100.0 * mean, accs.size());
        table << line;
      }
    }
  }
  std::cerr << table.str();
  json out = {{"config_fingerprint", base.fingerprint()},
              {"reference_variant", o.variants.front()},
              {"rows", rows},
              {"summary", summary}};
  write_or_print(o.out, out.dump(2) + "\n");
  return 0;
}

int report_error(const std::string& kind, const std::string& message) {
  json err = {{"error", {{"kind", kind}, {"message", message}}}};
  std::cerr << err.dump() << "\n";
  return 2;
}

}  // namespace
}  // namespace slr

int main(int argc, char** argv) {
  using namespace slr;
  CLI::App app{"Span-level logical reasoning for natural language inference"};
  app.require_subcommand(1);

  TrainOptions train_opts;
  auto* train_cmd = app.add_subcommand("train", "Train a model and write a checkpoint");
  add_data_options(train_cmd, train_opts.data, false);
  add_config_options(train_cmd, train_opts.config);
  train_cmd->add_option("--dev", train_opts.dev, "Validation split (same format)");
  train_cmd->add_option("--out,--checkpoint", train_opts.out, "Checkpoint path")->required();
  train_cmd->add_option("--log", train_opts.log, "Epoch log (JSON-lines)");
  train_cmd->add_option("--synthetic", train_opts.synthetic,
                        "Train on N generated examples instead of --data");
  train_cmd->add_option("--decoy-rate", train_opts.decoy_rate,
                        "Biased decoy atoms in generated training data");

  EvaluateOptions eval_opts;
  auto* eval_cmd = app.add_subcommand("evaluate", "Sentence and span metrics");
  add_data_options(eval_cmd, eval_opts.data, true);
  eval_cmd->add_option("--checkpoint", eval_opts.checkpoint, "Checkpoint path")->required();
  eval_cmd->add_option("--out", eval_opts.out, "Metrics JSON (default stdout)");
  eval_cmd->add_option("--predictions", eval_opts.predictions,
                       "Explanation reports for the first split (JSON-lines)");

  ExplainOptions explain_opts;
  auto* explain_cmd = app.add_subcommand("explain", "Explanation spans per example");
  add_data_options(explain_cmd, explain_opts.data, false);
  explain_cmd->add_option("--checkpoint", explain_opts.checkpoint, "Checkpoint path");
  explain_cmd->add_option("--scores", explain_opts.scores,
                          "Per-span scores instead of a model (JSON-lines)");
  explain_cmd->add_option("--premise", explain_opts.premise, "Single premise");
  explain_cmd->add_option("--hypothesis", explain_opts.hypothesis, "Single hypothesis");
  explain_cmd->add_option("--max-run", explain_opts.max_run,
                          "Composite cap when using --scores");
  explain_cmd->add_option("--out", explain_opts.out, "Output (default stdout)");
  explain_cmd->add_flag("--text", explain_opts.text, "Underlined text instead of JSON");

  SpansOptions spans_opts;
  auto* spans_cmd = app.add_subcommand("spans", "Dump the span set of a hypothesis");
  add_data_options(spans_cmd, spans_opts.data, false);
  spans_cmd->add_option("--hypothesis", spans_opts.hypothesis, "Hypothesis text")->required();
  spans_cmd->add_option("--id", spans_opts.id, "Example id for sidecar lookup");
  spans_cmd->add_option("--max-run", spans_opts.max_run, "Composite cap K");

  ExperimentOptions exp_opts;
  auto* exp_cmd = app.add_subcommand("experiment", "Reduced-data grid over sizes and seeds");
  add_data_options(exp_cmd, exp_opts.data, false);
  add_config_options(exp_cmd, exp_opts.config);
  exp_cmd->add_option("--dev", exp_opts.dev, "Validation split for early stopping");
  exp_cmd->add_option("--eval", exp_opts.eval, "Evaluation split: path or format:path");
  exp_cmd->add_option("--sizes", exp_opts.sizes, "Training sizes")->delimiter(',');
  exp_cmd->add_option("--seeds", exp_opts.seeds, "Seeds per size");
  exp_cmd->add_option("--variants", exp_opts.variants,
                      "slr, slr+dropout, slr+esnli; the first is the reference")
      ->delimiter(',');
  exp_cmd->add_option("--synthetic", exp_opts.synthetic,
                      "Use a generated pool of N examples and generated dev/test");
  exp_cmd->add_option("--resamples", exp_opts.resamples, "Bootstrap resamples");
  exp_cmd->add_option("--out", exp_opts.out, "Grid JSON (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("usage_error", e.what());
  }

  try {
    if (*train_cmd) return run_train(train_opts);
    if (*eval_cmd) return run_evaluate(eval_opts);
    if (*explain_cmd) return run_explain(explain_opts);
    if (*spans_cmd) return run_spans(spans_opts);
    if (*exp_cmd) return run_experiment(exp_opts);
  } catch (const Error& e) {
    return report_error(e.kind(), e.what());
  } catch (const std::exception& e) {
    return report_error("internal", e.what());
  }
  return report_error("usage_error", "no subcommand");
}
