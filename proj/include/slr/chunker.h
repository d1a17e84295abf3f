#ifndef SLR_CHUNKER_H_
#define SLR_CHUNKER_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "slr/tokenizer.h"

namespace slr {

// Coarse universal part-of-speech tags.
enum class PosTag {
  kAdj, kAdp, kAdv, kAux, kCconj, kDet, kIntj, kNoun, kNum, kPart,
  kPron, kPropn, kPunct, kSconj, kSym, kVerb, kX
};

std::string_view to_string(PosTag tag);
std::optional<PosTag> parse_pos_tag(std::string_view text);

// Half-open token range [begin, end).
struct TokenRange {
  int begin = 0;
  int end = 0;
  int size() const { return end - begin; }
  bool contains(const TokenRange& other) const {
    return begin <= other.begin && other.end <= end;
  }
  bool operator==(const TokenRange&) const = default;
};

// Lexicon and suffix based tagger used when no POS sidecar is supplied.
// Open-class words default to NOUN; a plural-looking word directly after a
// noun is read as a verb ("a man walks").
std::vector<PosTag> tag_tokens(const std::vector<std::string>& tokens);

// Reference rule chunker: greedy longest match of
//   (DET | possessive)? (ADJ | NUM)* (NOUN | PROPN)+
// plus standalone pronouns. Throws InvalidArgument when the tag sequence is
// not aligned with the tokens.
std::vector<TokenRange> chunk_noun_phrases(
    const std::vector<std::string>& tokens, const std::vector<PosTag>& tags);

// Source of noun-phrase ranges for a hypothesis.
class NpChunker {
 public:
  virtual ~NpChunker() = default;
  virtual std::vector<TokenRange> chunk(std::string_view example_id,
                                        const TokenizedText& text) const = 0;
  virtual std::string name() const = 0;
};

// tag_tokens() followed by chunk_noun_phrases().
class RuleChunker : public NpChunker {
 public:
  std::vector<TokenRange> chunk(std::string_view example_id,
                                const TokenizedText& text) const override;
  std::string name() const override { return "rule"; }
};

// Rule chunker over POS tags read from a sidecar file. Falls back to the
// built-in tagger for ids the sidecar does not cover.
class PosSidecarChunker : public NpChunker {
 public:
  // JSON-lines: {"id": str, "pos": [str, ...]}, one tag per token.
  static PosSidecarChunker load(const std::string& path);

  std::vector<TokenRange> chunk(std::string_view example_id,
                                const TokenizedText& text) const override;
  std::string name() const override { return "pos-sidecar"; }

 private:
  std::map<std::string, std::vector<PosTag>, std::less<>> tags_;
};

// Precomputed noun-phrase character ranges, e.g. from an external parser.
// Ranges are mapped onto the tokens they overlap. Ids missing from the
// sidecar fall back to the rule chunker.
class NpSidecarChunker : public NpChunker {
 public:
  // JSON-lines: {"id": str, "np_char_ranges": [[start, end], ...]}.
  static NpSidecarChunker load(const std::string& path);

  void add(std::string id, std::vector<std::pair<size_t, size_t>> ranges);
  std::vector<TokenRange> chunk(std::string_view example_id,
                                const TokenizedText& text) const override;
  std::string name() const override { return "np-sidecar"; }

 private:
  std::map<std::string, std::vector<std::pair<size_t, size_t>>, std::less<>>
      ranges_;
};

}  // namespace slr

#endif  // SLR_CHUNKER_H_
