#ifndef SLR_SEGMENTER_H_
#define SLR_SEGMENTER_H_

#include <memory>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "slr/chunker.h"
#include "slr/tokenizer.h"

namespace slr {

enum class SpanKind { kGranular, kComposite };

struct Span {
  TokenRange range;
  std::vector<int> constituents;  // indices into SpanSet::granular
  SpanKind kind = SpanKind::kGranular;
};

// Hypothesis spans. Granular spans tile the hypothesis; composites are runs
// of two or more consecutive granular spans. all() lists granular spans
// first, then composites, and this order indexes every per-span vector.
struct SpanSet {
  std::string text;
  TokenizedText tokens;
  std::vector<Span> granular;
  std::vector<Span> composites;

  int size() const {
    return static_cast<int>(granular.size() + composites.size());
  }
  const Span& at(int i) const;
  std::vector<Span> all() const;
  // Source text covered by a span, including interior whitespace.
  std::string span_text(const Span& span) const;
  std::string span_text(int i) const { return span_text(at(i)); }
};

// One span per noun phrase holding the NP and any text since the previous
// NP; the first span starts at token 0 and text after the last NP joins the
// last span. No NPs gives a single span over the whole hypothesis.
SpanSet segment_granular(const std::string& text, TokenizedText tokens,
                         const std::vector<TokenRange>& np_ranges);

// Adds every run of 2..min(max_run, |granular|) consecutive granular spans,
// ordered by run length then start.
SpanSet extend_with_composites(SpanSet spans, int max_run);

// With probability `rate` removes all composite spans, otherwise returns the
// set unchanged. Exactly one draw from `rng` per call.
SpanSet apply_composite_dropout(SpanSet spans, double rate, std::mt19937_64& rng);

struct RationaleAlignment {
  std::vector<int> p;  // 1 where the span contains the whole rationale
  bool single_consecutive = false;
};

// `rationale` holds hypothesis token indices; empty means absent.
RationaleAlignment align_rationale(const SpanSet& spans,
                                   const std::vector<int>& rationale);

// True when the indices form one gap-free run.
bool is_single_consecutive(const std::vector<int>& rationale);

// Debug dump with token offsets, constituents and kind.
nlohmann::json to_json(const SpanSet& spans);

// Tokenize, chunk and build the full span set for a hypothesis.
class Segmenter {
 public:
  Segmenter(std::shared_ptr<const NpChunker> chunker, int max_run);
  explicit Segmenter(int max_run = 3);

  SpanSet segment(const std::string& example_id,
                  const std::string& hypothesis) const;

  int max_run() const { return max_run_; }
  const NpChunker& chunker() const { return *chunker_; }
  // Identifies the segmentation behaviour for checkpoint fingerprints.
  std::string signature() const;

 private:
  std::shared_ptr<const NpChunker> chunker_;
  int max_run_;
};

}  // namespace slr

#endif  // SLR_SEGMENTER_H_
