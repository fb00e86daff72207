// lexer.hpp -- small tokenizer shared by the text formats
#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace zeroone::detail {

struct Token {
  enum class Type { Ident, Punct, End } type = Type::End;
  std::string text;
  std::size_t line = 0;
  std::size_t column = 0;
};

inline bool is_ident_char(char ch) {
  return (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') || ch == '_' ||
         ch == '.' || ch == '\'';
}

inline bool is_number(std::string_view s) {
  if (s.empty()) return false;
  for (char ch : s)
    if (ch < '0' || ch > '9') return false;
  return true;
}

/// Tokenizes one logical unit. With `hash_comments`, '#' starts a comment
/// that runs to the end of the line; otherwise '#' is punctuation.
/// Returns the tokens followed by an End token. Unknown characters are
/// reported through `bad`, which receives the offending token.
std::vector<Token> tokenize(std::string_view text, std::size_t first_line, bool hash_comments, Token* bad);

/// Splits a document into lines (without terminators).
std::vector<std::string_view> split_lines(std::string_view text);

}  // namespace zeroone::detail
