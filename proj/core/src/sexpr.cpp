#include "foml/sexpr.hpp"

#include <cctype>

namespace foml {

ParseError::ParseError(Code c, int l, int col, const std::string& msg)
    : Error(std::to_string(l) + ":" + std::to_string(col) + ": " + msg),
      code(c),
      line(l),
      column(col) {}

std::string_view SExpr::head() const {
  if (is_list && !items.empty() && items.front().is_atom()) return items.front().atom;
  return {};
}

void SExpr::fail(const std::string& msg, ParseError::Code code) const {
  throw ParseError(code, line, column, msg);
}

namespace {

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  std::vector<SExpr> read_all() {
    std::vector<SExpr> out;
    skip();
    while (pos_ < text_.size()) {
      out.push_back(read());
      skip();
    }
    return out;
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  SExpr read() {
    SExpr s;
    s.line = line_;
    s.column = col_;
    char c = text_[pos_];
    if (c == ')') throw ParseError(ParseError::Code::Syntax, line_, col_, "unexpected ')'");
    if (c == '(') {
      s.is_list = true;
      advance();
      for (;;) {
        skip();
        if (pos_ >= text_.size())
          throw ParseError(ParseError::Code::Syntax, s.line, s.column, "unbalanced '('");
        if (text_[pos_] == ')') {
          advance();
          return s;
        }
        s.items.push_back(read());
      }
    }
    while (pos_ < text_.size()) {
      c = text_[pos_];
      if (c == '(' || c == ')' || c == ';' || std::isspace(static_cast<unsigned char>(c))) break;
      s.atom += c;
      advance();
    }
    return s;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

std::vector<SExpr> read_sexprs(std::string_view text) { return Reader(text).read_all(); }

}  // namespace foml
