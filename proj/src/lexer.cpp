#include "lexer.hpp"

namespace zeroone::detail {

std::vector<Token> tokenize(std::string_view text, std::size_t first_line, bool hash_comments, Token* bad) {
  static constexpr std::string_view kTwoChar[] = {"->", "!=", ">=", "<="};
  static constexpr std::string_view kOneChar = "!?[],@{}()&|#=<>";

  std::vector<Token> out;
  std::size_t line = first_line;
  std::size_t col = 1;
  std::size_t i = 0;
  while (i < text.size()) {
    char ch = text[i];
    if (ch == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (ch == ' ' || ch == '\t' || ch == '\r') {
      ++i;
      ++col;
      continue;
    }
    if (hash_comments && ch == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    if (is_ident_char(ch)) {
      std::size_t start = i;
      while (i < text.size() && is_ident_char(text[i])) ++i;
      out.push_back({Token::Type::Ident, std::string(text.substr(start, i - start)), line, col});
      col += i - start;
      continue;
    }
    bool matched = false;
    for (auto two : kTwoChar) {
      if (text.substr(i, 2) == two) {
        out.push_back({Token::Type::Punct, std::string(two), line, col});
        i += 2;
        col += 2;
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (kOneChar.find(ch) != std::string_view::npos) {
      out.push_back({Token::Type::Punct, std::string(1, ch), line, col});
      ++i;
      ++col;
      continue;
    }
    if (bad) *bad = Token{Token::Type::Punct, std::string(1, ch), line, col};
    out.clear();
    out.push_back({Token::Type::End, "", line, col});
    return out;
  }
  out.push_back({Token::Type::End, "", line, col});
  return out;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

}  // namespace zeroone::detail
