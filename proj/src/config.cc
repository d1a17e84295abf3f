#include "slr/config.h"

#include <charconv>
#include <sstream>

#include "slr/error.h"
#include "slr/io.h"

namespace slr {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    size_t used = 0;
    double out = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw InvalidArgument("config key '" + key + "' expects a number, got '" +
                          v + "'");
  }
}

long long to_int(const std::string& key, const std::string& v) {
  long long out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw InvalidArgument("config key '" + key + "' expects an integer, got '" +
                          v + "'");
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw InvalidArgument("config key '" + key + "' expects a boolean, got '" +
                        v + "'");
}

std::string fmt_double(double v) {
  std::ostringstream ss;
  ss.precision(17);
  ss << v;
  return ss.str();
}

}  // namespace

void TrainConfig::validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw InvalidArgument("invalid config: " + what);
  };
  require(learning_rate > 0.0, "learning_rate must be positive");
  require(epochs >= 1, "epochs must be >= 1");
  require(warmup_epochs >= 0 && warmdown_epochs >= 0,
          "warmup/warmdown epochs must be >= 0");
  require(warmup_epochs + warmdown_epochs <= epochs,
          "warmup_epochs + warmdown_epochs must not exceed epochs");
  require(max_run >= 1, "max_run must be >= 1");
  require(composite_dropout_rate >= 0.0 && composite_dropout_rate <= 1.0,
          "composite_dropout_rate must be in [0, 1]");
  require(lambda_esnli >= 0.0, "lambda_esnli must be >= 0");
  require(batch_size >= 1, "batch_size must be >= 1");
  require(patience >= 1, "patience must be >= 1");
  require(weight_decay >= 0.0, "weight_decay must be >= 0");
  require(grad_clip > 0.0, "grad_clip must be positive");
  require(embedding_dim >= 1 && token_dim >= 1 && output_dim >= 1,
          "encoder dimensions must be positive");
  require(max_tokens >= 2, "max_tokens must be >= 2");
  require(head_hidden >= 0, "head_hidden must be >= 0");
  require(pooling == "mean" || pooling == "max" || pooling == "mean_max",
          "pooling must be mean, max or mean_max");
}

void TrainConfig::set(const std::string& key, const std::string& raw) {
  std::string v = trim(raw);
  if (key == "learning_rate") learning_rate = to_double(key, v);
  else if (key == "epochs") epochs = static_cast<int>(to_int(key, v));
  else if (key == "warmup_epochs") warmup_epochs = static_cast<int>(to_int(key, v));
  else if (key == "warmdown_epochs") warmdown_epochs = static_cast<int>(to_int(key, v));
  else if (key == "max_run" || key == "K") max_run = static_cast<int>(to_int(key, v));
  else if (key == "composite_dropout_rate") composite_dropout_rate = to_double(key, v);
  else if (key == "lambda_esnli") lambda_esnli = to_double(key, v);
  else if (key == "batch_size") batch_size = static_cast<int>(to_int(key, v));
  else if (key == "seed") seed = static_cast<uint64_t>(to_int(key, v));
  else if (key == "use_esnli") use_esnli = to_bool(key, v);
  else if (key == "early_stopping") early_stopping = to_bool(key, v);
  else if (key == "patience") patience = static_cast<int>(to_int(key, v));
  else if (key == "weight_decay") weight_decay = to_double(key, v);
  else if (key == "grad_clip") grad_clip = to_double(key, v);
  else if (key == "embedding_dim") embedding_dim = static_cast<int>(to_int(key, v));
  else if (key == "token_dim") token_dim = static_cast<int>(to_int(key, v));
  else if (key == "output_dim") output_dim = static_cast<int>(to_int(key, v));
  else if (key == "max_tokens") max_tokens = static_cast<int>(to_int(key, v));
  else if (key == "pooling") {
    if (v != "mean" && v != "max" && v != "mean_max") {
      throw InvalidArgument("config key 'pooling' expects mean, max or mean_max");
    }
    pooling = v;
  } else if (key == "head_hidden") head_hidden = static_cast<int>(to_int(key, v));
  else throw InvalidArgument("unknown config key '" + key + "'");
}

std::map<std::string, std::string> TrainConfig::to_map() const {
  return {
      {"learning_rate", fmt_double(learning_rate)},
      {"epochs", std::to_string(epochs)},
      {"warmup_epochs", std::to_string(warmup_epochs)},
      {"warmdown_epochs", std::to_string(warmdown_epochs)},
      {"max_run", std::to_string(max_run)},
      {"composite_dropout_rate", fmt_double(composite_dropout_rate)},
      {"lambda_esnli", fmt_double(lambda_esnli)},
      {"batch_size", std::to_string(batch_size)},
      {"seed", std::to_string(seed)},
      {"use_esnli", use_esnli ? "true" : "false"},
      {"early_stopping", early_stopping ? "true" : "false"},
      {"patience", std::to_string(patience)},
      {"weight_decay", fmt_double(weight_decay)},
      {"grad_clip", fmt_double(grad_clip)},
      {"embedding_dim", std::to_string(embedding_dim)},
      {"token_dim", std::to_string(token_dim)},
      {"output_dim", std::to_string(output_dim)},
      {"max_tokens", std::to_string(max_tokens)},
      {"head_hidden", std::to_string(head_hidden)},
      {"pooling", pooling},
  };
}

std::string TrainConfig::to_text() const {
  std::string out;
  for (const auto& [k, v] : to_map()) out += k + " = " + v + "\n";
  return out;
}

std::string TrainConfig::fingerprint() const {
  return hex64(fnv1a64(to_text()));
}

TrainConfig parse_config(const std::string& text) {
  TrainConfig config;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError("config", line_no, "expected key = value");
    }
    config.set(trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  config.validate();
  return config;
}

TrainConfig load_config(const std::string& path) {
  return parse_config(read_file(path));
}

void apply_overrides(TrainConfig& config,
                     const std::vector<std::string>& overrides) {
  for (const auto& kv : overrides) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw InvalidArgument("override '" + kv + "' is not key=value");
    }
    config.set(trim(kv.substr(0, eq)), kv.substr(eq + 1));
  }
  config.validate();
}

TrainConfig preset_config(const std::string& name) {
  TrainConfig c;
  if (name == "snli") {
    c.epochs = 2, c.warmup_epochs = 1, c.warmdown_epochs = 1;
    c.learning_rate = 7.5e-6;
  } else if (name == "snli-esnli") {
    c.epochs = 2, c.warmup_epochs = 1, c.warmdown_epochs = 1;
    c.learning_rate = 5e-6;
    c.use_esnli = true;
  } else if (name == "sick") {
    c.epochs = 6, c.warmup_epochs = 3, c.warmdown_epochs = 3;
    c.learning_rate = 1e-5;
  } else if (name == "reduced") {
    c.epochs = 10, c.warmup_epochs = 0, c.warmdown_epochs = 0;
    c.learning_rate = 1e-5;
    c.early_stopping = true;
  } else if (name == "synthetic") {
    // Toy encoder trained from scratch; pretrained-scale rates are far too
    // small for randomly initialized weights.
    c.epochs = 20, c.warmup_epochs = 1, c.warmdown_epochs = 10;
    c.learning_rate = 1e-2;
    c.batch_size = 16;
  } else {
    throw InvalidArgument("unknown preset '" + name + "'");
  }
  return c;
}

}  // namespace slr
