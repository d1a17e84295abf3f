#include "slr/model.h"

#include <cmath>
#include <numeric>

#include "slr/error.h"

namespace slr {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

constexpr Detector kDetectors[] = {Detector::kNeutral, Detector::kContradiction};

}  // namespace

DetectionHead::DetectionHead(const std::string& prefix, int input_dim,
                             int hidden_dim)
    : w1(prefix + ".w1", hidden_dim, input_dim),
      b1(prefix + ".b1", hidden_dim, 1),
      w2(prefix + ".w2", 1, hidden_dim),
      b2(prefix + ".b2", 1, 1),
      w3(prefix + ".w3", 1, 1),
      b3(prefix + ".b3", 1, 1),
      logit_w(prefix + ".logit_w", 1, input_dim),
      logit_b(prefix + ".logit_b", 1, 1) {}

void DetectionHead::initialize(std::mt19937_64& rng) {
  w1.randomize(1.0 / std::sqrt(static_cast<double>(input_dim())), rng);
  w2.randomize(1.0 / std::sqrt(static_cast<double>(hidden_dim())), rng);
  logit_w.randomize(1.0 / std::sqrt(static_cast<double>(input_dim())), rng);
  b1.value.setZero();
  b2.value.setZero();
  w3.value.setOnes();
  b3.value.setZero();
  logit_b.value.setZero();
}

std::vector<Param*> DetectionHead::parameters() {
  return {&w1, &b1, &w2, &b2, &w3, &b3, &logit_w, &logit_b};
}

std::vector<const Param*> DetectionHead::parameters() const {
  return {&w1, &b1, &w2, &b2, &w3, &b3, &logit_w, &logit_b};
}

double attention_score(const DetectionHead& head, const Eigen::VectorXd& h) {
  Eigen::VectorXd hidden =
      (head.w1.value * h + head.b1.value.col(0)).array().tanh().matrix();
  return sigmoid((head.w2.value * hidden)(0) + head.b2.value(0, 0));
}

double span_logit(const DetectionHead& head, const Eigen::VectorXd& h) {
  return (head.logit_w.value * h)(0) + head.logit_b.value(0, 0);
}

std::vector<double> normalize_attention(std::span<const double> raw) {
  if (raw.empty()) throw InvalidArgument("cannot normalize empty attention");
  double total = std::accumulate(raw.begin(), raw.end(), 0.0);
  // NaN passes through so the trainer can report the offending example.
  if (total <= 0.0) {
    throw InvalidArgument("attention weights must be positive");
  }
  std::vector<double> out(raw.size());
  for (size_t i = 0; i < raw.size(); ++i) out[i] = raw[i] / total;
  return out;
}

double sentence_logit(std::span<const double> attention,
                      std::span<const double> span_logits) {
  if (attention.size() != span_logits.size()) {
    throw InvalidArgument("attention and span logits differ in length");
  }
  double total = 0.0;
  for (size_t i = 0; i < attention.size(); ++i) {
    total += attention[i] * span_logits[i];
  }
  return total;
}

ScoreGradients::ScoreGradients(int m) {
  for (int c = 0; c < kNumDetectors; ++c) {
    d_a_raw[c].assign(m, 0.0);
    d_span_logit[c].assign(m, 0.0);
  }
}

SlrModel::SlrModel(std::unique_ptr<Encoder> encoder, int head_hidden,
                   uint64_t seed)
    : encoder_(std::move(encoder)) {
  if (!encoder_) throw InvalidArgument("model needs an encoder");
  const int d = encoder_->dimension();
  const int hidden = head_hidden > 0 ? head_hidden : d;
  heads_[0] = DetectionHead("head.neutral", d, hidden);
  heads_[1] = DetectionHead("head.contradiction", d, hidden);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  for (auto& head : heads_) head.initialize(rng);
}

SpanScores SlrModel::forward(const std::vector<std::string>& premise,
                             const SpanSet& spans, ForwardCache* cache) const {
  const int m = spans.size();
  if (m < 1) throw InvalidArgument("span set is empty");
  SpanScores out;
  out.h.reserve(m);
  if (cache) {
    cache->encoder.clear();
    cache->encoder.resize(m);
    for (auto& v : cache->hidden) v.assign(m, Eigen::VectorXd());
  }
  for (int i = 0; i < m; ++i) {
    out.h.push_back(encode_span(*encoder_, premise, spans, spans.at(i),
                                cache ? &cache->encoder[i] : nullptr));
  }
  for (Detector d : kDetectors) {
    const int c = static_cast<int>(d);
    const DetectionHead& head = heads_[c];
    DetectorScores& scores = out.detectors[c];
    scores.a_raw.resize(m);
    scores.span_logit.resize(m);
    for (int i = 0; i < m; ++i) {
      Eigen::VectorXd hidden = (head.w1.value * out.h[i] + head.b1.value.col(0))
                                   .array()
                                   .tanh()
                                   .matrix();
      scores.a_raw[i] = sigmoid((head.w2.value * hidden)(0) + head.b2.value(0, 0));
      scores.span_logit[i] = span_logit(head, out.h[i]);
      if (cache) cache->hidden[c][i] = std::move(hidden);
    }
    scores.a_norm = normalize_attention(scores.a_raw);
    scores.sentence_logit = sentence_logit(scores.a_norm, scores.span_logit);
    if (cache) cache->a_raw[c] = scores.a_raw;
  }
  if (cache) cache->h = out.h;
  return out;
}

void SlrModel::backward(const ForwardCache& cache, const ScoreGradients& grads) {
  const int m = static_cast<int>(cache.h.size());
  const int d = encoder_->dimension();
  std::vector<Eigen::VectorXd> d_h(m, Eigen::VectorXd::Zero(d));
  for (int c = 0; c < kNumDetectors; ++c) {
    DetectionHead& head = heads_[c];
    head.w3.grad(0, 0) += grads.d_w3[c];
    head.b3.grad(0, 0) += grads.d_b3[c];
    for (int i = 0; i < m; ++i) {
      const double a = cache.a_raw[c][i];
      const double d_pre = grads.d_a_raw[c][i] * a * (1.0 - a);
      const double d_logit = grads.d_span_logit[c][i];
      if (d_pre != 0.0) {
        const Eigen::VectorXd& hidden = cache.hidden[c][i];
        head.w2.grad += d_pre * hidden.transpose();
        head.b2.grad(0, 0) += d_pre;
        Eigen::VectorXd d_z = (d_pre * head.w2.value.transpose())
                                  .cwiseProduct((1.0 - hidden.array().square())
                                                    .matrix());
        head.w1.grad += d_z * cache.h[i].transpose();
        head.b1.grad.col(0) += d_z;
        d_h[i] += head.w1.value.transpose() * d_z;
      }
      if (d_logit != 0.0) {
        head.logit_w.grad += d_logit * cache.h[i].transpose();
        head.logit_b.grad(0, 0) += d_logit;
        d_h[i] += d_logit * head.logit_w.value.transpose();
      }
    }
  }
  for (int i = 0; i < m; ++i) {
    if (d_h[i].squaredNorm() > 0.0) encoder_->backward(*cache.encoder[i], d_h[i]);
  }
}

std::vector<Param*> SlrModel::parameters() {
  std::vector<Param*> out = encoder_->parameters();
  for (auto& head : heads_) {
    auto hp = head.parameters();
    out.insert(out.end(), hp.begin(), hp.end());
  }
  return out;
}

void SlrModel::zero_grad() {
  for (Param* p : parameters()) p->zero_grad();
}

std::string SlrModel::signature() const {
  return encoder_->signature() +
         ";heads(hidden=" + std::to_string(heads_[0].hidden_dim()) + ")";
}

nlohmann::json SlrModel::save() const {
  nlohmann::json heads;
  for (const auto& head : heads_) {
    for (const Param* p : head.parameters()) heads[p->name] = to_json(*p);
  }
  return {{"encoder", encoder_->save()},
          {"head_hidden", heads_[0].hidden_dim()},
          {"heads", heads}};
}

SlrModel SlrModel::load(const nlohmann::json& j) {
  SlrModel model(load_encoder(j.at("encoder")), j.at("head_hidden").get<int>(),
                 0);
  const auto& heads = j.at("heads");
  for (auto& head : model.heads_) {
    for (Param* p : head.parameters()) load_json(*p, heads.at(p->name));
  }
  return model;
}

}  // namespace slr
