#include <cctype>
#include <set>

#include "funstack/errors.hpp"
#include "funstack/frontend.hpp"

namespace funstack {

namespace {

const std::set<std::string> kKeywords = {
    "let", "in", "if", "then", "else", "observe", "random", "for", "fun"};

}  // namespace

std::vector<Token> tokenize(const std::string& src) {
  std::vector<Token> out;
  size_t i = 0;
  int line = 1, col = 1;
  auto bump = [&](size_t n) {
    for (size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  auto push = [&](Token::Kind k, std::string lex, Span sp) {
    out.push_back({k, std::move(lex), sp});
  };

  while (i < src.size()) {
    char c = src[i];
    Span sp{line, col};
    if (c == '\r' || std::isspace(static_cast<unsigned char>(c))) {
      bump(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') bump(1);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
        ++j;
      bool real = false;
      if (j + 1 < src.size() && src[j] == '.' &&
          std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
        real = true;
        ++j;
        while (j < src.size() &&
               std::isdigit(static_cast<unsigned char>(src[j])))
          ++j;
      }
      std::string lex = src.substr(i, j - i);
      bump(j - i);
      push(real ? Token::Kind::RealLit : Token::Kind::IntLit, lex, sp);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) ||
              src[j] == '_'))
        ++j;
      std::string lex = src.substr(i, j - i);
      bump(j - i);
      if (lex == "true" || lex == "false")
        push(Token::Kind::BoolLit, lex, sp);
      else if (kKeywords.count(lex))
        push(Token::Kind::Keyword, lex, sp);
      else
        push(Token::Kind::Ident, lex, sp);
      continue;
    }
    auto two = i + 1 < src.size() ? src.substr(i, 2) : std::string();
    if (two == "&&" || two == "||" || two == "->" || two == "==") {
      bump(2);
      push(Token::Kind::Punct, two, sp);
      continue;
    }
    static const std::string singles = "()[],;=>+-*%.";
    if (singles.find(c) != std::string::npos) {
      bump(1);
      push(Token::Kind::Punct, std::string(1, c), sp);
      continue;
    }
    throw LexError("unrecognized character '" + std::string(1, c) + "'", sp);
  }
  out.push_back({Token::Kind::End, "", {line, col}});
  return out;
}

}  // namespace funstack
