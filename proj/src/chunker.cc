#include "slr/chunker.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <set>

#include "slr/error.h"
#include "slr/io.h"

namespace slr {

namespace {

constexpr std::array<std::pair<PosTag, std::string_view>, 17> kTagNames = {{
    {PosTag::kAdj, "ADJ"},     {PosTag::kAdp, "ADP"},
    {PosTag::kAdv, "ADV"},     {PosTag::kAux, "AUX"},
    {PosTag::kCconj, "CCONJ"}, {PosTag::kDet, "DET"},
    {PosTag::kIntj, "INTJ"},   {PosTag::kNoun, "NOUN"},
    {PosTag::kNum, "NUM"},     {PosTag::kPart, "PART"},
    {PosTag::kPron, "PRON"},   {PosTag::kPropn, "PROPN"},
    {PosTag::kPunct, "PUNCT"}, {PosTag::kSconj, "SCONJ"},
    {PosTag::kSym, "SYM"},     {PosTag::kVerb, "VERB"},
    {PosTag::kX, "X"},
}};

using Lexicon = std::set<std::string, std::less<>>;

const Lexicon& determiners() {
  static const Lexicon kWords = {
      "a", "an", "the", "this", "that", "these", "those", "some", "any",
      "each", "every", "no", "another", "both", "all", "several", "many",
      "few", "either", "neither", "much", "such"};
  return kWords;
}

const Lexicon& possessives() {
  static const Lexicon kWords = {"my",  "your", "his",  "her",
                                 "its", "our",  "their"};
  return kWords;
}

const Lexicon& pronouns() {
  static const Lexicon kWords = {
      "i",       "you",     "he",      "she",     "it",      "we",
      "they",    "me",      "him",     "us",      "them",    "someone",
      "somebody", "something", "anyone", "anybody", "anything", "everyone",
      "everybody", "everything", "nobody", "nothing", "noone", "one",
      "myself",  "yourself", "himself", "herself", "itself", "ourselves",
      "themselves", "there", "who", "what", "which", "mine", "yours",
      "hers",    "ours",    "theirs"};
  return kWords;
}

const Lexicon& adpositions() {
  static const Lexicon kWords = {
      "in", "on", "at", "of", "for", "with", "without", "from", "to", "by",
      "into", "onto", "over", "under", "near", "beside", "behind", "between",
      "through", "across", "along", "around", "about", "above", "below",
      "after", "before", "during", "against", "toward", "towards", "up",
      "down", "out", "off", "inside", "outside", "upon", "beneath", "past",
      "like", "via", "among", "within", "underneath", "atop", "beyond"};
  return kWords;
}

const Lexicon& auxiliaries() {
  static const Lexicon kWords = {
      "is", "are", "was", "were", "be", "been", "being", "am", "has",
      "have", "had", "do", "does", "did", "will", "would", "can", "could",
      "may", "might", "must", "shall", "should"};
  return kWords;
}

const Lexicon& conjunctions() {
  static const Lexicon kWords = {"and", "or", "but", "nor", "yet", "&"};
  return kWords;
}

const Lexicon& subordinators() {
  static const Lexicon kWords = {"while", "because", "although", "if",
                                 "since", "as", "than", "whether", "though",
                                 "until", "unless", "when", "where"};
  return kWords;
}

const Lexicon& particles() {
  static const Lexicon kWords = {"not", "n't", "'s"};
  return kWords;
}

const Lexicon& adverbs() {
  static const Lexicon kWords = {"very", "too", "also", "just", "now",
                                 "here", "together", "away", "outdoors",
                                 "indoors", "outside", "again", "almost",
                                 "alone", "never", "always", "still"};
  return kWords;
}

const Lexicon& numerals() {
  static const Lexicon kWords = {
      "one", "two", "three", "four", "five", "six", "seven", "eight", "nine",
      "ten", "eleven", "twelve", "twenty", "hundred", "thousand", "dozen"};
  return kWords;
}

const Lexicon& adjectives() {
  static const Lexicon kWords = {
      "big", "small", "large", "little", "young", "old", "tall", "short",
      "red", "blue", "green", "yellow", "black", "white", "brown", "pink",
      "orange", "purple", "gray", "grey", "happy", "sad", "new", "long",
      "busy", "empty", "dark", "bright", "wet", "dry", "hot", "cold",
      "asian", "blond", "blonde", "several", "other", "same", "different",
      "beautiful", "pretty", "elderly", "male", "female", "nice", "good",
      "bad", "great", "high", "low", "crowded", "colorful", "outdoor",
      "indoor", "older", "younger", "front"};
  return kWords;
}

// Frequent caption verbs in base and third-person forms.
const Lexicon& verbs() {
  static const Lexicon kWords = {
      "run", "runs", "walk", "walks", "sit", "sits", "stand", "stands",
      "play", "plays", "ride", "rides", "eat", "eats", "drink", "drinks",
      "look", "looks", "wear", "wears", "hold", "holds", "jump", "jumps",
      "swim", "swims", "sleep", "sleeps", "climb", "climbs", "dance",
      "dances", "sing", "sings", "read", "reads", "throw", "throws",
      "catch", "catches", "watch", "watches", "cook", "cooks", "work",
      "works", "talk", "talks", "smile", "smiles", "wait", "waits", "lie",
      "lies", "lay", "lays", "carry", "carries", "push", "pushes", "pull",
      "pulls", "kick", "kicks", "sat", "stood", "ran", "rode", "ate",
      "took", "take", "takes", "make", "makes", "made", "go", "goes",
      "went", "get", "gets", "got", "see", "sees", "saw", "drive",
      "drives", "fly", "flies", "paint", "paints", "laugh", "laughs",
      "fish", "fishes", "surf", "surfs", "skate", "skates", "ski", "skis",
      "use", "uses", "perform", "performs", "pose", "poses", "lean",
      "leans", "wave", "waves", "hug", "hugs", "kiss", "kisses", "paid",
      "pay", "pays", "fight", "fights", "sells", "sell", "buy", "buys"};
  return kWords;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(
                          static_cast<unsigned char>(c)));
  return out;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() > suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

bool all_punct(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) {
    auto u = static_cast<unsigned char>(c);
    return u < 0x80 && std::ispunct(u);
  });
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.' ||
           c == ',';
  });
}

PosTag lexical_tag(const std::string& word, bool sentence_initial) {
  std::string w = lower(word);
  if (all_punct(w)) return PosTag::kPunct;
  if (all_digits(w)) return PosTag::kNum;
  if (determiners().count(w)) return PosTag::kDet;
  if (possessives().count(w)) return PosTag::kPron;
  if (numerals().count(w) && w != "one") return PosTag::kNum;
  if (pronouns().count(w)) return PosTag::kPron;
  if (auxiliaries().count(w)) return PosTag::kAux;
  if (conjunctions().count(w)) return PosTag::kCconj;
  if (subordinators().count(w)) return PosTag::kSconj;
  if (adpositions().count(w)) return PosTag::kAdp;
  if (particles().count(w)) return PosTag::kPart;
  if (adverbs().count(w)) return PosTag::kAdv;
  if (adjectives().count(w)) return PosTag::kAdj;
  if (verbs().count(w)) return PosTag::kVerb;
  if (ends_with(w, "ing") && w.size() > 4) return PosTag::kVerb;
  if (ends_with(w, "ed") && w.size() > 4) return PosTag::kVerb;
  if (ends_with(w, "ly") && w.size() > 4) return PosTag::kAdv;
  if (ends_with(w, "ful") || ends_with(w, "ous") || ends_with(w, "ive")) {
    return PosTag::kAdj;
  }
  if (!sentence_initial && std::isupper(static_cast<unsigned char>(word[0]))) {
    return PosTag::kPropn;
  }
  return PosTag::kNoun;
}

bool is_nominal(PosTag t) { return t == PosTag::kNoun || t == PosTag::kPropn; }

}  // namespace

std::string_view to_string(PosTag tag) {
  for (const auto& [t, name] : kTagNames) {
    if (t == tag) return name;
  }
  return "X";
}

std::optional<PosTag> parse_pos_tag(std::string_view text) {
  for (const auto& [t, name] : kTagNames) {
    if (name == text) return t;
  }
  return std::nullopt;
}

std::vector<PosTag> tag_tokens(const std::vector<std::string>& tokens) {
  std::vector<PosTag> tags;
  tags.reserve(tokens.size());
  for (size_t i = 0; i < tokens.size(); ++i) {
    PosTag tag = lexical_tag(tokens[i], i == 0);
    // "a man walks": an s-final open-class word right after a noun head.
    if (tag == PosTag::kNoun && i > 0 && is_nominal(tags[i - 1]) &&
        ends_with(lower(tokens[i]), "s") && !ends_with(lower(tokens[i]), "ss")) {
      tag = PosTag::kVerb;
    }
    tags.push_back(tag);
  }
  return tags;
}

std::vector<TokenRange> chunk_noun_phrases(
    const std::vector<std::string>& tokens, const std::vector<PosTag>& tags) {
  if (tokens.size() != tags.size()) {
    throw InvalidArgument("POS tags (" + std::to_string(tags.size()) +
                          ") do not align with tokens (" +
                          std::to_string(tokens.size()) + ")");
  }
  const int n = static_cast<int>(tokens.size());
  std::vector<TokenRange> out;
  int i = 0;
  while (i < n) {
    int j = i;
    if (tags[j] == PosTag::kDet ||
        (tags[j] == PosTag::kPron && possessives().count(lower(tokens[j])))) {
      ++j;
    }
    while (j < n && (tags[j] == PosTag::kAdj || tags[j] == PosTag::kNum)) ++j;
    int head_start = j;
    while (j < n && is_nominal(tags[j])) ++j;
    if (j > head_start) {
      out.push_back({i, j});
      i = j;
    } else if (tags[i] == PosTag::kPron) {
      out.push_back({i, i + 1});
      ++i;
    } else {
      ++i;
    }
  }
  return out;
}

std::vector<TokenRange> RuleChunker::chunk(std::string_view,
                                           const TokenizedText& text) const {
  auto words = text.words();
  return chunk_noun_phrases(words, tag_tokens(words));
}

PosSidecarChunker PosSidecarChunker::load(const std::string& path) {
  PosSidecarChunker chunker;
  auto lines = read_lines(path);
  for (size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    int line_no = static_cast<int>(i) + 1;
    auto j = parse_json_line(path, line_no, lines[i]);
    if (!j.contains("id") || !j.contains("pos") || !j["pos"].is_array()) {
      throw ParseError(path, line_no, "expected fields id and pos");
    }
    std::vector<PosTag> tags;
    for (const auto& t : j["pos"]) {
      auto tag = parse_pos_tag(t.get<std::string>());
      if (!tag) throw ParseError(path, line_no, "unknown POS tag " + t.dump());
      tags.push_back(*tag);
    }
    chunker.tags_[j["id"].get<std::string>()] = std::move(tags);
  }
  return chunker;
}

std::vector<TokenRange> PosSidecarChunker::chunk(
    std::string_view example_id, const TokenizedText& text) const {
  auto it = tags_.find(example_id);
  auto words = text.words();
  if (it == tags_.end()) return chunk_noun_phrases(words, tag_tokens(words));
  return chunk_noun_phrases(words, it->second);
}

NpSidecarChunker NpSidecarChunker::load(const std::string& path) {
  NpSidecarChunker chunker;
  auto lines = read_lines(path);
  for (size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    int line_no = static_cast<int>(i) + 1;
    auto j = parse_json_line(path, line_no, lines[i]);
    if (!j.contains("id") || !j.contains("np_char_ranges")) {
      throw ParseError(path, line_no, "expected fields id and np_char_ranges");
    }
    std::vector<std::pair<size_t, size_t>> ranges;
    for (const auto& r : j["np_char_ranges"]) {
      if (!r.is_array() || r.size() != 2) {
        throw ParseError(path, line_no, "range must be [start, end]");
      }
      size_t a = r[0].get<size_t>(), b = r[1].get<size_t>();
      if (a >= b) throw ParseError(path, line_no, "empty character range");
      ranges.emplace_back(a, b);
    }
    chunker.add(j["id"].get<std::string>(), std::move(ranges));
  }
  return chunker;
}

void NpSidecarChunker::add(std::string id,
                           std::vector<std::pair<size_t, size_t>> ranges) {
  std::sort(ranges.begin(), ranges.end());
  ranges_[std::move(id)] = std::move(ranges);
}

std::vector<TokenRange> NpSidecarChunker::chunk(
    std::string_view example_id, const TokenizedText& text) const {
  auto it = ranges_.find(example_id);
  if (it == ranges_.end()) return RuleChunker().chunk(example_id, text);
  std::vector<TokenRange> out;
  const int n = static_cast<int>(text.size());
  for (const auto& [cb, ce] : it->second) {
    int first = -1, last = -1;
    for (int t = 0; t < n; ++t) {
      const auto& tok = text.tokens[t];
      if (tok.begin < ce && cb < tok.end) {
        if (first < 0) first = t;
        last = t;
      }
    }
    if (first < 0) continue;
    // Overlapping or out-of-order ranges are dropped.
    if (!out.empty() && first < out.back().end) continue;
    out.push_back({first, last + 1});
  }
  return out;
}

}  // namespace slr
