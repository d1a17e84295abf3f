#include "slr/corpus.h"

#include <algorithm>
#include <filesystem>
#include <iterator>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"
#include "slr/error.h"
#include "slr/io.h"
#include "slr/tokenizer.h"

namespace slr {

namespace {

using nlohmann::json;

constexpr std::pair<SourceFormat, std::string_view> kFormatNames[] = {
    {SourceFormat::kCanonicalJsonl, "canonical_jsonl"},
    {SourceFormat::kSnliJsonl, "snli_jsonl"},
    {SourceFormat::kMnliJsonl, "mnli_jsonl"},
    {SourceFormat::kSickTsv, "sick_tsv"},
    {SourceFormat::kHansTsv, "hans_tsv"},
};

std::vector<std::string> split_lines(const std::string& content) {
  std::vector<std::string> lines;
  std::istringstream in(content);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    size_t tab = line.find('\t', start);
    out.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return out;
}

bool is_unlabeled(std::string_view label) {
  return label.empty() || label == "-";
}

// Maps a raw label string; nullopt means "unlabeled, drop the row".
std::optional<Label> resolve_label(const std::string& source, int line,
                                   std::string_view raw, SourceFormat format) {
  if (is_unlabeled(raw)) return std::nullopt;
  if (format == SourceFormat::kHansTsv && raw == "non-entailment") {
    return Label::kContradiction;
  }
  auto label = parse_label(raw);
  if (!label) {
    throw LoadError(source + ":" + std::to_string(line) +
                    ": unknown label '" + std::string(raw) + "'");
  }
  return label;
}

std::string required_string(const json& j, const char* key,
                            const std::string& source, int line) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) {
    throw ParseError(source, line, std::string("missing string field ") + key);
  }
  return it->get<std::string>();
}

std::string id_or_default(const json& j, const char* key,
                          const std::string& name, int line) {
  auto it = j.find(key);
  if (it != j.end() && it->is_string() && !it->get<std::string>().empty()) {
    return it->get<std::string>();
  }
  if (it != j.end() && it->is_number_integer()) {
    return std::to_string(it->get<long long>());
  }
  return name + "-" + std::to_string(line);
}

std::vector<std::vector<int>> parse_rationales(const json& j,
                                               const std::string& source,
                                               int line) {
  std::vector<std::vector<int>> out;
  if (!j.is_array()) throw ParseError(source, line, "rationales must be a list");
  for (const auto& variant : j) {
    if (!variant.is_array()) {
      throw ParseError(source, line, "each rationale must be a list of ints");
    }
    std::vector<int> idx;
    for (const auto& v : variant) {
      if (!v.is_number_integer()) {
        throw ParseError(source, line, "rationale index must be an integer");
      }
      idx.push_back(v.get<int>());
    }
    out.push_back(std::move(idx));
  }
  return out;
}

bool rationale_in_range(const std::vector<int>& rationale, size_t n_tokens) {
  return std::all_of(rationale.begin(), rationale.end(), [&](int i) {
    return i >= 0 && static_cast<size_t>(i) < n_tokens;
  });
}

void parse_jsonl(const std::string& content, SourceFormat format,
                 const std::string& name, DatasetSplit& split) {
  auto lines = split_lines(content);
  const bool canonical = format == SourceFormat::kCanonicalJsonl;
  for (size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].find_first_not_of(" \t") == std::string::npos) continue;
    int line_no = static_cast<int>(i) + 1;
    json j = parse_json_line(name, line_no, lines[i]);
    if (!j.is_object()) throw ParseError(name, line_no, "expected an object");
    NLIExample ex;
    std::string raw_label;
    if (canonical) {
      ex.id = required_string(j, "id", name, line_no);
      ex.premise = required_string(j, "premise", name, line_no);
      ex.hypothesis = required_string(j, "hypothesis", name, line_no);
      raw_label = required_string(j, "gold", name, line_no);
      if (j.contains("rationales")) {
        ex.rationales = parse_rationales(j["rationales"], name, line_no);
      }
    } else {
      ex.id = id_or_default(j, "pairID", name, line_no);
      ex.premise = required_string(j, "sentence1", name, line_no);
      ex.hypothesis = required_string(j, "sentence2", name, line_no);
      raw_label = j.contains("gold_label") && j["gold_label"].is_string()
                      ? j["gold_label"].get<std::string>()
                      : "";
    }
    auto label = resolve_label(name, line_no, raw_label, format);
    if (!label) continue;
    ex.gold = *label;
    split.examples.push_back(std::move(ex));
  }
}

int find_column(const std::vector<std::string>& header,
                std::initializer_list<std::string_view> names) {
  for (auto n : names) {
    auto it = std::find(header.begin(), header.end(), n);
    if (it != header.end()) return static_cast<int>(it - header.begin());
  }
  return -1;
}

void parse_tsv(const std::string& content, SourceFormat format,
               const std::string& name, DatasetSplit& split) {
  auto lines = split_lines(content);
  if (lines.empty()) throw ParseError(name, 1, "missing header row");
  auto header = split_tabs(lines[0]);
  int c_id, c_premise, c_hypothesis, c_label;
  if (format == SourceFormat::kSickTsv) {
    c_id = find_column(header, {"pair_ID", "id"});
    c_premise = find_column(header, {"sentence_A"});
    c_hypothesis = find_column(header, {"sentence_B"});
    c_label = find_column(header, {"entailment_label", "entailment_AB", "label"});
  } else {
    c_id = find_column(header, {"pairID"});
    c_premise = find_column(header, {"sentence1"});
    c_hypothesis = find_column(header, {"sentence2"});
    c_label = find_column(header, {"gold_label"});
  }
  if (c_premise < 0 || c_hypothesis < 0 || c_label < 0) {
    throw ParseError(name, 1, "header lacks premise/hypothesis/label columns");
  }
  for (size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    int line_no = static_cast<int>(i) + 1;
    auto cols = split_tabs(lines[i]);
    if (cols.size() != header.size()) {
      throw ParseError(name, line_no,
                       "expected " + std::to_string(header.size()) +
                           " columns, found " + std::to_string(cols.size()));
    }
    auto label = resolve_label(name, line_no, cols[c_label], format);
    if (!label) continue;
    NLIExample ex;
    ex.id = c_id >= 0 && !cols[c_id].empty()
                ? cols[c_id]
                : name + "-" + std::to_string(line_no);
    ex.premise = cols[c_premise];
    ex.hypothesis = cols[c_hypothesis];
    ex.gold = *label;
    split.examples.push_back(std::move(ex));
  }
}

void check_split(const DatasetSplit& split) {
  std::set<std::string_view> ids;
  for (const auto& ex : split.examples) {
    if (!ids.insert(ex.id).second) {
      throw LoadError(split.name + ": duplicate example id '" + ex.id + "'");
    }
    if (ex.rationales.empty()) continue;
    size_t n = tokenize(ex.hypothesis).size();
    for (const auto& r : ex.rationales) {
      if (!rationale_in_range(r, n)) {
        throw LoadError(split.name + ": rationale of '" + ex.id +
                        "' indexes past the hypothesis");
      }
    }
  }
}

}  // namespace

std::string_view to_string(SourceFormat format) {
  for (const auto& [f, n] : kFormatNames) {
    if (f == format) return n;
  }
  return "unknown";
}

std::optional<SourceFormat> parse_source_format(std::string_view text) {
  for (const auto& [f, n] : kFormatNames) {
    if (n == text) return f;
  }
  return std::nullopt;
}

DatasetSplit parse_nli_dataset(const std::string& content, SourceFormat format,
                               const std::string& name) {
  DatasetSplit split;
  split.name = name;
  split.source_format = format;
  switch (format) {
    case SourceFormat::kCanonicalJsonl:
    case SourceFormat::kSnliJsonl:
    case SourceFormat::kMnliJsonl:
      parse_jsonl(content, format, name, split);
      break;
    case SourceFormat::kSickTsv:
    case SourceFormat::kHansTsv:
      parse_tsv(content, format, name, split);
      break;
  }
  check_split(split);
  return split;
}

DatasetSplit load_nli_dataset(const std::string& path, SourceFormat format,
                              const std::string& name) {
  std::string split_name =
      name.empty() ? std::filesystem::path(path).stem().string() : name;
  return parse_nli_dataset(read_file(path), format, split_name);
}

std::string to_canonical_jsonl(const DatasetSplit& split) {
  std::string out;
  for (const auto& ex : split.examples) {
    json j = {{"id", ex.id},
              {"premise", ex.premise},
              {"hypothesis", ex.hypothesis},
              {"gold", std::string(to_string(ex.gold))}};
    if (!ex.rationales.empty()) j["rationales"] = ex.rationales;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<std::pair<int, std::vector<std::string>>> parse_csv(
    const std::string& content, char delimiter) {
  std::vector<std::pair<int, std::vector<std::string>>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool row_has_data = false;
  int line = 1, row_line = 1;
  for (size_t i = 0; i < content.size(); ++i) {
    char c = content[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < content.size() && content[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    if (c == '"') {
      in_quotes = true;
      row_has_data = true;
    } else if (c == delimiter) {
      row.push_back(std::move(field));
      field.clear();
      row_has_data = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < content.size() && content[i + 1] == '\n') ++i;
      if (row_has_data || !field.empty()) {
        row.push_back(std::move(field));
        rows.emplace_back(row_line, std::move(row));
      }
      row.clear();
      field.clear();
      row_has_data = false;
      ++line;
      row_line = line;
    } else {
      field += c;
      row_has_data = true;
    }
  }
  if (in_quotes) throw ParseError("csv", row_line, "unterminated quoted field");
  if (row_has_data || !field.empty()) {
    row.push_back(std::move(field));
    rows.emplace_back(row_line, std::move(row));
  }
  return rows;
}

std::vector<int> marked_to_token_indices(std::string_view marked) {
  std::string clean;
  std::vector<bool> highlighted;
  bool inside = false;
  for (char c : marked) {
    if (c == '*') {
      inside = !inside;
      continue;
    }
    clean += c;
    highlighted.push_back(inside);
  }
  std::vector<int> out;
  if (clean.find_first_not_of(" \t\r\n") == std::string::npos) return out;
  auto tokens = tokenize(clean);
  for (size_t t = 0; t < tokens.size(); ++t) {
    const auto& tok = tokens.tokens[t];
    bool any = false;
    for (size_t k = tok.begin; k < tok.end; ++k) any = any || highlighted[k];
    // Punctuation is never part of an e-SNLI highlight.
    bool word = std::any_of(tok.text.begin(), tok.text.end(), [](char ch) {
      auto u = static_cast<unsigned char>(ch);
      return u >= 0x80 || std::isalnum(u);
    });
    if (any && word) out.push_back(static_cast<int>(t));
  }
  return out;
}

DatasetSplit attach_esnli_rationales(const DatasetSplit& split,
                                     const std::string& path,
                                     RationaleStats* stats) {
  RationaleStats local;
  std::map<std::string, std::vector<std::vector<int>>> by_id;
  auto ext = std::filesystem::path(path).extension().string();
  if (ext == ".csv") {
    auto rows = parse_csv(read_file(path));
    if (rows.empty()) throw ParseError(path, 1, "empty rationale file");
    const auto& header = rows[0].second;
    int c_id = find_column(header, {"pairID", "id"});
    if (c_id < 0) throw ParseError(path, 1, "missing pairID column");
    std::vector<int> c_marked;
    for (int k = 1; k <= 3; ++k) {
      std::string col = "Sentence2_marked_" + std::to_string(k);
      int c = find_column(header, {col});
      if (c >= 0) c_marked.push_back(c);
    }
    if (c_marked.empty()) {
      throw ParseError(path, 1, "missing Sentence2_marked_k columns");
    }
    for (size_t r = 1; r < rows.size(); ++r) {
      const auto& [line_no, cols] = rows[r];
      if (cols.size() != header.size()) {
        throw ParseError(path, line_no, "column count mismatch");
      }
      auto& variants = by_id[cols[c_id]];
      for (int c : c_marked) {
        auto idx = marked_to_token_indices(cols[c]);
        if (!idx.empty()) variants.push_back(std::move(idx));
      }
    }
  } else {
    auto lines = read_lines(path);
    for (size_t i = 0; i < lines.size(); ++i) {
      if (lines[i].empty()) continue;
      int line_no = static_cast<int>(i) + 1;
      json j = parse_json_line(path, line_no, lines[i]);
      std::string id = required_string(j, "id", path, line_no);
      const char* key = j.contains("highlights") ? "highlights" : "rationales";
      if (!j.contains(key)) {
        throw ParseError(path, line_no, "missing highlights field");
      }
      auto& variants = by_id[id];
      for (auto& v : parse_rationales(j[key], path, line_no)) {
        if (!v.empty()) variants.push_back(std::move(v));
      }
    }
  }

  DatasetSplit out = split;
  std::set<std::string> seen;
  for (auto& ex : out.examples) {
    auto it = by_id.find(ex.id);
    if (it == by_id.end()) continue;
    seen.insert(ex.id);
    size_t n = tokenize(ex.hypothesis).size();
    ex.rationales.clear();
    for (const auto& v : it->second) {
      if (ex.rationales.size() == 3) break;
      if (!rationale_in_range(v, n)) {
        ++local.rejected;
        continue;
      }
      std::vector<int> sorted = v;
      std::sort(sorted.begin(), sorted.end());
      sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
      ex.rationales.push_back(std::move(sorted));
    }
    if (!ex.rationales.empty()) ++local.attached;
  }
  local.unmatched = static_cast<int>(by_id.size() - seen.size());
  if (stats) *stats = local;
  return out;
}

DatasetSplit subsample(const DatasetSplit& split, size_t n, uint64_t seed) {
  if (n > split.size()) {
    throw InvalidArgument("cannot sample " + std::to_string(n) +
                          " examples from a split of " +
                          std::to_string(split.size()));
  }
  std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32),
                    static_cast<uint32_t>(fnv1a64(split.name)),
                    static_cast<uint32_t>(fnv1a64(split.name) >> 32)};
  std::mt19937_64 rng(seq);
  // Selection sampling keeps the chosen indices in ascending order.
  std::vector<size_t> chosen;
  chosen.reserve(n);
  size_t remaining = split.size(), needed = n;
  for (size_t i = 0; i < split.size() && needed > 0; ++i, --remaining) {
    std::uniform_int_distribution<size_t> draw(0, remaining - 1);
    if (draw(rng) < needed) {
      chosen.push_back(i);
      --needed;
    }
  }
  DatasetSplit out;
  out.name = split.name;
  out.source_format = split.source_format;
  out.examples.reserve(n);
  for (size_t i : chosen) out.examples.push_back(split.examples[i]);
  return out;
}

}  // namespace slr
