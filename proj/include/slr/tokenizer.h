#ifndef SLR_TOKENIZER_H_
#define SLR_TOKENIZER_H_

#include <string>
#include <string_view>
#include <vector>

namespace slr {

// One token with its byte offsets into the source text and the whitespace
// that follows it, so the source can be reproduced exactly.
struct Token {
  std::string text;
  size_t begin = 0;
  size_t end = 0;
  std::string trailing;
};

struct TokenizedText {
  std::string leading;  // whitespace before the first token
  std::vector<Token> tokens;

  size_t size() const { return tokens.size(); }
  std::vector<std::string> words() const;
};

// Whitespace tokenizer that also splits punctuation into separate tokens.
// Apostrophes and hyphens between word characters and decimal points inside
// numbers stay attached. Throws InvalidArgument on text with no tokens.
TokenizedText tokenize(std::string_view text);

// Inverse of tokenize().
std::string detokenize(const TokenizedText& tokenized);

}  // namespace slr

#endif  // SLR_TOKENIZER_H_
