#ifndef SLR_CORPUS_H_
#define SLR_CORPUS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "slr/label.h"

namespace slr {

enum class SourceFormat { kCanonicalJsonl, kSnliJsonl, kMnliJsonl, kSickTsv, kHansTsv };

std::string_view to_string(SourceFormat format);
std::optional<SourceFormat> parse_source_format(std::string_view text);

struct NLIExample {
  std::string id;
  std::string premise;
  std::string hypothesis;
  Label gold = Label::kEntailment;
  // Highlighted hypothesis token indices, one entry per annotator. Empty
  // when the example has no rationale.
  std::vector<std::vector<int>> rationales;

  bool operator==(const NLIExample&) const = default;
};

struct DatasetSplit {
  std::string name;
  std::vector<NLIExample> examples;
  SourceFormat source_format = SourceFormat::kCanonicalJsonl;

  size_t size() const { return examples.size(); }
  bool operator==(const DatasetSplit&) const = default;
};

// Loads a dataset file. Rows without a resolvable gold label ("-" or empty)
// are dropped; file order is preserved. HANS "non-entailment" is stored as
// contradiction and collapsed again at scoring time. The split name
// defaults to the file stem.
//
// Field mappings:
//   snli_jsonl / mnli_jsonl: sentence1, sentence2, gold_label, pairID
//   sick_tsv: pair_ID, sentence_A, sentence_B, entailment_label
//   hans_tsv: pairID, sentence1, sentence2, gold_label
//   canonical_jsonl: id, premise, hypothesis, gold, rationales
DatasetSplit load_nli_dataset(const std::string& path, SourceFormat format,
                              const std::string& name = "");

// Same as load_nli_dataset but over in-memory content.
DatasetSplit parse_nli_dataset(const std::string& content, SourceFormat format,
                               const std::string& name);

// Serializes to the canonical JSON-lines format.
std::string to_canonical_jsonl(const DatasetSplit& split);

struct RationaleStats {
  int attached = 0;   // examples that received at least one rationale
  int rejected = 0;   // records dropped for out-of-range indices
  int unmatched = 0;  // records whose id is not in the split
};

// Attaches e-SNLI hypothesis highlights. Accepts JSON-lines
// {"id": str, "highlights": [[int, ...], ...]} or the e-SNLI CSV, where
// Sentence2_marked_k marks highlighted words with asterisks. Up to three
// annotation variants per example are kept.
DatasetSplit attach_esnli_rationales(const DatasetSplit& split,
                                     const std::string& path,
                                     RationaleStats* stats = nullptr);

// Converts an asterisk-marked sentence into highlighted token indices of
// the unmarked sentence.
std::vector<int> marked_to_token_indices(std::string_view marked);

// Uniform sample of n examples without replacement, deterministic per
// (seed, split name), keeping the original relative order.
DatasetSplit subsample(const DatasetSplit& split, size_t n, uint64_t seed);

// Minimal RFC 4180 reader: quoted fields, doubled quotes, embedded
// newlines. Returns rows paired with the 1-based line each row starts on.
std::vector<std::pair<int, std::vector<std::string>>> parse_csv(
    const std::string& content, char delimiter = ',');

}  // namespace slr

#endif  // SLR_CORPUS_H_
