#include "slr/encoder.h"

#include <cctype>
#include <cmath>
#include <iostream>

#include "slr/corpus.h"
#include "slr/error.h"
#include "slr/io.h"

namespace slr {

namespace {

std::string lower(const std::string& s) {
  std::string out = s;
  for (auto& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

struct ToyCache : EncoderCache {
  std::vector<int> premise_ids;
  std::vector<int> token_ids;  // unmasked hypothesis tokens
  Eigen::VectorXd premise_mean;
  Eigen::MatrixXd inputs;      // 2e x k
  Eigen::MatrixXd activations; // token_dim x k
  std::vector<int> argmax;     // per token_dim row, for the max channel
  Eigen::VectorXd pooled;
  Eigen::VectorXd output;
};

int pooled_width(const ToyEncoderConfig& c) {
  return c.pooling == Pooling::kMeanMax ? 2 * c.token_dim : c.token_dim;
}

}  // namespace

std::string_view to_string(Pooling pooling) {
  switch (pooling) {
    case Pooling::kMean: return "mean";
    case Pooling::kMax: return "max";
    case Pooling::kMeanMax: return "mean_max";
  }
  return "mean_max";
}

Pooling parse_pooling(std::string_view text) {
  if (text == "mean") return Pooling::kMean;
  if (text == "max") return Pooling::kMax;
  if (text == "mean_max") return Pooling::kMeanMax;
  throw InvalidArgument("unknown pooling '" + std::string(text) + "'");
}

void Encoder::note_truncation() const {
  if (truncations_.fetch_add(1) == 0) {
    std::cerr << "warning: input exceeds the encoder length limit; "
                 "truncating the premise tail\n";
  }
}

std::vector<std::string> mask_hypothesis(const std::vector<std::string>& tokens,
                                         const TokenRange& range,
                                         const std::string& mask) {
  if (range.begin < 0 || range.end > static_cast<int>(tokens.size()) ||
      range.begin >= range.end) {
    throw InvalidArgument("span range outside the hypothesis");
  }
  std::vector<std::string> out = tokens;
  for (int i = 0; i < static_cast<int>(out.size()); ++i) {
    if (i < range.begin || i >= range.end) out[i] = mask;
  }
  return out;
}

Eigen::VectorXd encode_span(const Encoder& encoder,
                            const std::vector<std::string>& premise,
                            const SpanSet& spans, const Span& span,
                            std::unique_ptr<EncoderCache>* cache) {
  return encoder.encode(
      premise,
      mask_hypothesis(spans.tokens.words(), span.range, encoder.mask_token()),
      cache);
}

const std::string& Vocabulary::mask_token() {
  static const std::string kMaskToken = "<mask>";
  return kMaskToken;
}

Vocabulary::Vocabulary() {
  add("<unk>");
  add(mask_token());
}

Vocabulary::Vocabulary(const std::vector<std::string>& words) : Vocabulary() {
  for (const auto& w : words) add(w);
}

void Vocabulary::add(const std::string& word) {
  std::string key = word == mask_token() ? word : lower(word);
  if (index_.count(key)) return;
  index_.emplace(key, static_cast<int>(words_.size()));
  words_.push_back(key);
}

int Vocabulary::id(const std::string& word) const {
  if (word == mask_token()) return kMask;
  auto it = index_.find(lower(word));
  return it == index_.end() ? kUnk : it->second;
}

Vocabulary build_vocabulary(const std::vector<NLIExample>& examples) {
  Vocabulary vocab;
  for (const auto& ex : examples) {
    for (const auto& w : tokenize(ex.premise).words()) vocab.add(w);
    for (const auto& w : tokenize(ex.hypothesis).words()) vocab.add(w);
  }
  return vocab;
}

ToyEncoder::ToyEncoder(Vocabulary vocab, ToyEncoderConfig config,
                       uint64_t seed)
    : vocab_(std::move(vocab)),
      config_(config),
      embedding_("encoder.embedding", config.embedding_dim, vocab_.size()),
      token_w_("encoder.token_w", config.token_dim, 2 * config.embedding_dim),
      token_b_("encoder.token_b", config.token_dim, 1),
      out_w_("encoder.out_w", config.output_dim, pooled_width(config)),
      out_b_("encoder.out_b", config.output_dim, 1) {
  if (config.embedding_dim < 1 || config.token_dim < 1 ||
      config.output_dim < 1 || config.max_tokens < 2) {
    throw InvalidArgument("toy encoder dimensions must be positive");
  }
  std::mt19937_64 rng(seed);
  embedding_.randomize(0.5, rng);
  embedding_.value.col(Vocabulary::kMask).setZero();
  token_w_.randomize(1.0 / std::sqrt(2.0 * config.embedding_dim), rng);
  out_w_.randomize(1.0 / std::sqrt(static_cast<double>(pooled_width(config))),
                   rng);
}

Eigen::VectorXd ToyEncoder::encode(const std::vector<std::string>& premise,
                                   const std::vector<std::string>& hypothesis,
                                   std::unique_ptr<EncoderCache>* cache) const {
  const int e = config_.embedding_dim;
  auto c = std::make_unique<ToyCache>();

  size_t premise_len = premise.size();
  if (premise_len + hypothesis.size() > static_cast<size_t>(config_.max_tokens)) {
    size_t room = hypothesis.size() >= static_cast<size_t>(config_.max_tokens)
                      ? 0
                      : config_.max_tokens - hypothesis.size();
    premise_len = std::min(premise_len, room);
    note_truncation();
  }
  for (size_t i = 0; i < premise_len; ++i) {
    c->premise_ids.push_back(vocab_.id(premise[i]));
  }
  c->premise_mean = Eigen::VectorXd::Zero(e);
  for (int id : c->premise_ids) c->premise_mean += embedding_.value.col(id);
  if (!c->premise_ids.empty()) {
    c->premise_mean /= static_cast<double>(c->premise_ids.size());
  }

  for (const auto& w : hypothesis) {
    int id = vocab_.id(w);
    if (id != Vocabulary::kMask) c->token_ids.push_back(id);
  }
  const int k = static_cast<int>(c->token_ids.size());
  c->inputs.resize(2 * e, k);
  for (int t = 0; t < k; ++t) {
    auto emb = embedding_.value.col(c->token_ids[t]);
    c->inputs.col(t).head(e) = emb;
    c->inputs.col(t).tail(e) = emb.cwiseProduct(c->premise_mean);
  }
  c->activations =
      ((token_w_.value * c->inputs).colwise() + token_b_.value.col(0))
          .array()
          .tanh()
          .matrix();
  const int td = config_.token_dim;
  c->pooled = Eigen::VectorXd::Zero(pooled_width(config_));
  if (k > 0) {
    int offset = 0;
    if (config_.pooling != Pooling::kMax) {
      c->pooled.head(td) = c->activations.rowwise().mean();
      offset = td;
    }
    if (config_.pooling != Pooling::kMean) {
      c->argmax.resize(td);
      for (int r = 0; r < td; ++r) {
        Eigen::Index best;
        c->pooled(offset + r) = c->activations.row(r).maxCoeff(&best);
        c->argmax[r] = static_cast<int>(best);
      }
    }
  }
  c->output = (out_w_.value * c->pooled + out_b_.value.col(0))
                  .array()
                  .tanh()
                  .matrix();
  Eigen::VectorXd h = c->output;
  if (cache) *cache = std::move(c);
  return h;
}

void ToyEncoder::backward(const EncoderCache& base,
                          const Eigen::VectorXd& d_output) {
  const auto& c = dynamic_cast<const ToyCache&>(base);
  const int e = config_.embedding_dim;
  const int k = static_cast<int>(c.token_ids.size());

  Eigen::VectorXd dz =
      d_output.cwiseProduct((1.0 - c.output.array().square()).matrix());
  out_w_.grad += dz * c.pooled.transpose();
  out_b_.grad.col(0) += dz;
  if (k == 0) return;

  const int td = config_.token_dim;
  Eigen::VectorXd d_pooled = out_w_.value.transpose() * dz;
  Eigen::MatrixXd du = Eigen::MatrixXd::Zero(td, k);
  int offset = 0;
  if (config_.pooling != Pooling::kMax) {
    du.colwise() += d_pooled.head(td) / static_cast<double>(k);
    offset = td;
  }
  if (config_.pooling != Pooling::kMean) {
    for (int r = 0; r < td; ++r) du(r, c.argmax[r]) += d_pooled(offset + r);
  }
  Eigen::MatrixXd dv =
      du.cwiseProduct((1.0 - c.activations.array().square()).matrix());
  token_w_.grad += dv * c.inputs.transpose();
  token_b_.grad.col(0) += dv.rowwise().sum();
  Eigen::MatrixXd dx = token_w_.value.transpose() * dv;

  Eigen::VectorXd d_premise = Eigen::VectorXd::Zero(e);
  for (int t = 0; t < k; ++t) {
    int id = c.token_ids[t];
    auto emb = c.inputs.col(t).head(e);
    embedding_.grad.col(id) +=
        dx.col(t).head(e) + dx.col(t).tail(e).cwiseProduct(c.premise_mean);
    d_premise += dx.col(t).tail(e).cwiseProduct(emb);
  }
  if (!c.premise_ids.empty()) {
    d_premise /= static_cast<double>(c.premise_ids.size());
    for (int id : c.premise_ids) embedding_.grad.col(id) += d_premise;
  }
}

std::vector<Param*> ToyEncoder::parameters() {
  return {&embedding_, &token_w_, &token_b_, &out_w_, &out_b_};
}

nlohmann::json ToyEncoder::save() const {
  return {
      {"kind", kind()},
      {"config",
       {{"embedding_dim", config_.embedding_dim},
        {"token_dim", config_.token_dim},
        {"output_dim", config_.output_dim},
        {"max_tokens", config_.max_tokens},
        {"pooling", to_string(config_.pooling)}}},
      {"vocabulary", vocab_.words()},
      {"params",
       {{embedding_.name, to_json(embedding_)},
        {token_w_.name, to_json(token_w_)},
        {token_b_.name, to_json(token_b_)},
        {out_w_.name, to_json(out_w_)},
        {out_b_.name, to_json(out_b_)}}},
  };
}

std::unique_ptr<ToyEncoder> ToyEncoder::load(const nlohmann::json& j) {
  ToyEncoderConfig config;
  const auto& jc = j.at("config");
  config.embedding_dim = jc.at("embedding_dim").get<int>();
  config.token_dim = jc.at("token_dim").get<int>();
  config.output_dim = jc.at("output_dim").get<int>();
  config.max_tokens = jc.at("max_tokens").get<int>();
  config.pooling = parse_pooling(jc.at("pooling").get<std::string>());
  Vocabulary vocab(j.at("vocabulary").get<std::vector<std::string>>());
  auto enc = std::make_unique<ToyEncoder>(std::move(vocab), config, 0);
  const auto& params = j.at("params");
  for (Param* p : enc->parameters()) load_json(*p, params.at(p->name));
  return enc;
}

std::string ToyEncoder::signature() const {
  std::string vocab_text;
  for (const auto& w : vocab_.words()) {
    vocab_text += w;
    vocab_text += '\n';
  }
  return "toy(e=" + std::to_string(config_.embedding_dim) +
         ",t=" + std::to_string(config_.token_dim) +
         ",d=" + std::to_string(config_.output_dim) +
         ",max=" + std::to_string(config_.max_tokens) +
         ",pool=" + std::string(to_string(config_.pooling)) +
         ",vocab=" + hex64(fnv1a64(vocab_text)) + ")";
}

std::unique_ptr<Encoder> load_encoder(const nlohmann::json& j) {
  auto kind = j.at("kind").get<std::string>();
  if (kind == "toy") return ToyEncoder::load(j);
  throw LoadError("unknown encoder kind '" + kind + "'");
}

}  // namespace slr
