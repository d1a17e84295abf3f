#include "slr/tokenizer.h"

#include <cctype>

#include "slr/error.h"

namespace slr {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

// Bytes >= 0x80 belong to multi-byte UTF-8 sequences and count as word
// characters.
bool is_word_char(char c) {
  auto u = static_cast<unsigned char>(c);
  return u >= 0x80 || std::isalnum(u);
}

bool is_punct(char c) { return !is_space(c) && !is_word_char(c); }

// Punctuation that joins two word characters into one token, e.g. "man's",
// "t-shirt", "3.5".
bool is_joiner(std::string_view text, size_t i) {
  char c = text[i];
  if (i == 0 || i + 1 >= text.size()) return false;
  if (!is_word_char(text[i - 1]) || !is_word_char(text[i + 1])) return false;
  if (c == '\'' || c == '-') return true;
  if (c == '.' || c == ',') {
    return std::isdigit(static_cast<unsigned char>(text[i - 1])) &&
           std::isdigit(static_cast<unsigned char>(text[i + 1]));
  }
  return false;
}

}  // namespace

std::vector<std::string> TokenizedText::words() const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(t.text);
  return out;
}

TokenizedText tokenize(std::string_view text) {
  TokenizedText out;
  size_t i = 0;
  while (i < text.size() && is_space(text[i])) ++i;
  out.leading = std::string(text.substr(0, i));

  while (i < text.size()) {
    size_t start = i;
    if (is_punct(text[i]) && !is_joiner(text, i)) {
      ++i;
    } else {
      while (i < text.size() && !is_space(text[i]) &&
             (!is_punct(text[i]) || is_joiner(text, i))) {
        ++i;
      }
    }
    Token tok;
    tok.text = std::string(text.substr(start, i - start));
    tok.begin = start;
    tok.end = i;
    size_t ws = i;
    while (i < text.size() && is_space(text[i])) ++i;
    tok.trailing = std::string(text.substr(ws, i - ws));
    out.tokens.push_back(std::move(tok));
  }
  if (out.tokens.empty()) throw InvalidArgument("cannot tokenize empty text");
  return out;
}

std::string detokenize(const TokenizedText& tokenized) {
  std::string out = tokenized.leading;
  for (const auto& t : tokenized.tokens) {
    out += t.text;
    out += t.trailing;
  }
  return out;
}

}  // namespace slr
