#include "slr/segmenter.h"

#include <algorithm>

#include "slr/error.h"

namespace slr {

const Span& SpanSet::at(int i) const {
  int g = static_cast<int>(granular.size());
  return i < g ? granular.at(i) : composites.at(i - g);
}

std::vector<Span> SpanSet::all() const {
  std::vector<Span> out = granular;
  out.insert(out.end(), composites.begin(), composites.end());
  return out;
}

std::string SpanSet::span_text(const Span& span) const {
  const auto& first = tokens.tokens.at(span.range.begin);
  const auto& last = tokens.tokens.at(span.range.end - 1);
  return text.substr(first.begin, last.end - first.begin);
}

SpanSet segment_granular(const std::string& text, TokenizedText tokens,
                         const std::vector<TokenRange>& np_ranges) {
  const int n = static_cast<int>(tokens.size());
  SpanSet out;
  out.text = text;
  out.tokens = std::move(tokens);
  int prev_end = 0;
  for (const auto& np : np_ranges) {
    if (np.begin < prev_end || np.end <= np.begin || np.end > n) {
      throw InvalidArgument("noun phrase ranges must be ordered, non-empty "
                            "and inside the hypothesis");
    }
    Span s;
    s.range = {prev_end, np.end};
    s.constituents = {static_cast<int>(out.granular.size())};
    out.granular.push_back(std::move(s));
    prev_end = np.end;
  }
  if (out.granular.empty()) {
    out.granular.push_back({{0, n}, {0}, SpanKind::kGranular});
  } else {
    out.granular.back().range.end = n;
  }
  return out;
}

SpanSet extend_with_composites(SpanSet spans, int max_run) {
  if (max_run < 1) throw InvalidArgument("composite run length must be >= 1");
  const int g = static_cast<int>(spans.granular.size());
  spans.composites.clear();
  for (int len = 2; len <= std::min(max_run, g); ++len) {
    for (int start = 0; start + len <= g; ++start) {
      Span s;
      s.kind = SpanKind::kComposite;
      s.range = {spans.granular[start].range.begin,
                 spans.granular[start + len - 1].range.end};
      for (int k = start; k < start + len; ++k) s.constituents.push_back(k);
      spans.composites.push_back(std::move(s));
    }
  }
  return spans;
}

SpanSet apply_composite_dropout(SpanSet spans, double rate,
                                std::mt19937_64& rng) {
  if (!(rate >= 0.0 && rate <= 1.0)) {
    throw InvalidArgument("dropout rate must be in [0, 1]");
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (unit(rng) < rate) spans.composites.clear();
  return spans;
}

bool is_single_consecutive(const std::vector<int>& rationale) {
  if (rationale.empty()) return false;
  std::vector<int> sorted = rationale;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  return sorted.back() - sorted.front() + 1 ==
         static_cast<int>(sorted.size());
}

RationaleAlignment align_rationale(const SpanSet& spans,
                                   const std::vector<int>& rationale) {
  RationaleAlignment out;
  out.p.assign(spans.size(), 0);
  if (!is_single_consecutive(rationale)) return out;
  auto [lo, hi] = std::minmax_element(rationale.begin(), rationale.end());
  TokenRange target{*lo, *hi + 1};
  if (target.begin < 0 || target.end > static_cast<int>(spans.tokens.size())) {
    throw InvalidArgument("rationale index outside the hypothesis");
  }
  out.single_consecutive = true;
  for (int i = 0; i < spans.size(); ++i) {
    if (spans.at(i).range.contains(target)) out.p[i] = 1;
  }
  return out;
}

nlohmann::json to_json(const SpanSet& spans) {
  nlohmann::json j;
  j["text"] = spans.text;
  auto& toks = j["tokens"] = nlohmann::json::array();
  for (const auto& t : spans.tokens.tokens) {
    toks.push_back({{"text", t.text}, {"begin", t.begin}, {"end", t.end}});
  }
  auto& arr = j["spans"] = nlohmann::json::array();
  for (int i = 0; i < spans.size(); ++i) {
    const Span& s = spans.at(i);
    arr.push_back({
        {"index", i},
        {"kind", s.kind == SpanKind::kGranular ? "granular" : "composite"},
        {"start", s.range.begin},
        {"end", s.range.end},
        {"char_begin", spans.tokens.tokens[s.range.begin].begin},
        {"char_end", spans.tokens.tokens[s.range.end - 1].end},
        {"constituents", s.constituents},
        {"text", spans.span_text(s)},
    });
  }
  j["m"] = spans.size();
  return j;
}

Segmenter::Segmenter(std::shared_ptr<const NpChunker> chunker, int max_run)
    : chunker_(std::move(chunker)), max_run_(max_run) {
  if (!chunker_) throw InvalidArgument("segmenter needs a chunker");
  if (max_run_ < 1) throw InvalidArgument("composite run length must be >= 1");
}

Segmenter::Segmenter(int max_run)
    : Segmenter(std::make_shared<RuleChunker>(), max_run) {}

SpanSet Segmenter::segment(const std::string& example_id,
                           const std::string& hypothesis) const {
  TokenizedText tokens = tokenize(hypothesis);
  auto nps = chunker_->chunk(example_id, tokens);
  return extend_with_composites(
      segment_granular(hypothesis, std::move(tokens), nps), max_run_);
}

std::string Segmenter::signature() const {
  return "tokenizer=v1;chunker=" + chunker_->name() +
         ";K=" + std::to_string(max_run_);
}

}  // namespace slr
