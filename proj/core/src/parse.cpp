#include "gtd/parse.hpp"

#include <cctype>
#include <cstdlib>
#include <optional>
#include <utility>

namespace gtd {

namespace {

enum class Tok {
  Number,
  Identifier,
  Plus,
  Minus,
  Star,
  Slash,
  Caret,
  LParen,
  RParen,
  End,
};

struct Token {
  Tok kind;
  std::size_t offset;
  std::string text;
  bool exact = false;   // numbers: rational payload valid
  Rational rat;
  double flt = 0.0;
};

const char* describe(Tok t) {
  switch (t) {
    case Tok::Number: return "number";
    case Tok::Identifier: return "identifier";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::Caret: return "'^'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::End: return "end of input";
  }
  return "?";
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_space();
    std::size_t start = pos_;
    if (pos_ >= text_.size()) return {Tok::End, start, ""};
    char c = text_[pos_];
    // U+2212 (minus sign) is accepted wherever '-' is.
    if (static_cast<unsigned char>(c) == 0xE2 && pos_ + 2 < text_.size() &&
        static_cast<unsigned char>(text_[pos_ + 1]) == 0x88 &&
        static_cast<unsigned char>(text_[pos_ + 2]) == 0x92) {
      pos_ += 3;
      return {Tok::Minus, start, "-"};
    }
    switch (c) {
      case '+': ++pos_; return {Tok::Plus, start, "+"};
      case '-': ++pos_; return {Tok::Minus, start, "-"};
      case '*': ++pos_; return {Tok::Star, start, "*"};
      case '/': ++pos_; return {Tok::Slash, start, "/"};
      case '^': ++pos_; return {Tok::Caret, start, "^"};
      case '(': ++pos_; return {Tok::LParen, start, "("};
      case ')': ++pos_; return {Tok::RParen, start, ")"};
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return lex_number(start);
    if (std::isalpha(static_cast<unsigned char>(c))) {
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_'))
        ++pos_;
      return {Tok::Identifier, start,
              std::string(text_.substr(start, pos_ - start))};
    }
    throw ParseError("unexpected character '" + std::string(1, c) + "'", start,
                     {"number", "identifier", "operator", "'('"});
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  Token lex_number(std::size_t start) {
    while (pos_ < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    bool has_frac = false;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      if (pos_ >= text_.size() ||
          !std::isdigit(static_cast<unsigned char>(text_[pos_])))
        throw ParseError("expected digits after decimal point", pos_,
                         {"digit"});
      has_frac = true;
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_])))
        ++pos_;
    }
    bool has_exp = false;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      // Only consume as an exponent when digits (optionally signed) follow;
      // otherwise it starts an identifier, as in "2e" meaning 2*e? No —
      // juxtaposition is not multiplication here, so require the suffix
      // shape strictly and leave a bare 'e' to the caller's error path.
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-'))
        ++pos_;
      if (pos_ < text_.size() &&
          std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        has_exp = true;
        while (pos_ < text_.size() &&
               std::isdigit(static_cast<unsigned char>(text_[pos_])))
          ++pos_;
      } else {
        pos_ = save;
      }
    }
    std::string text(text_.substr(start, pos_ - start));
    Token tok{Tok::Number, start, text};
    try {
      tok.rat = exact_value(text, has_frac, has_exp);
      tok.exact = true;
    } catch (const std::overflow_error&) {
      tok.exact = false;
      tok.flt = std::strtod(text.c_str(), nullptr);
    }
    return tok;
  }

  static Rational exact_value(const std::string& text, bool has_frac,
                              bool has_exp) {
    std::size_t i = 0;
    Rational value(0);
    const Rational ten(10);
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      value = value * ten + Rational(text[i] - '0');
      ++i;
    }
    if (has_frac) {
      ++i;  // '.'
      Rational scale(1);
      while (i < text.size() &&
             std::isdigit(static_cast<unsigned char>(text[i]))) {
        scale = scale / ten;
        value = value + Rational(text[i] - '0') * scale;
        ++i;
      }
    }
    if (has_exp) {
      ++i;  // 'e'
      bool neg = false;
      if (text[i] == '+' || text[i] == '-') {
        neg = text[i] == '-';
        ++i;
      }
      std::int64_t k = 0;
      while (i < text.size() &&
             std::isdigit(static_cast<unsigned char>(text[i]))) {
        k = k * 10 + (text[i] - '0');
        if (k > 400) throw std::overflow_error("exponent too large");
        ++i;
      }
      value = value * ten.pow(neg ? -k : k);
    }
    return value;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

ExprPtr raw(ExprNode n) { return std::make_shared<const ExprNode>(std::move(n)); }

ExprPtr raw_binary(ExprKind kind, ExprPtr lhs, ExprPtr rhs) {
  ExprNode n;
  n.kind = kind;
  n.lhs = std::move(lhs);
  n.rhs = std::move(rhs);
  return raw(std::move(n));
}

ExprPtr raw_unary(ExprKind kind, ExprPtr operand) {
  ExprNode n;
  n.kind = kind;
  n.lhs = std::move(operand);
  return raw(std::move(n));
}

// Folds a constant subtree to an exact rational; nullopt when the subtree
// contains variables, floats, or overflows 64-bit rationals.
std::optional<Rational> fold_rational(const ExprNode& n) {
  try {
    switch (n.kind) {
      case ExprKind::Rational:
        return n.rat;
      case ExprKind::Neg: {
        auto v = fold_rational(*n.lhs);
        if (!v) return std::nullopt;
        return -*v;
      }
      case ExprKind::Add: {
        auto a = fold_rational(*n.lhs), b = fold_rational(*n.rhs);
        if (!a || !b) return std::nullopt;
        return *a + *b;
      }
      case ExprKind::Sub: {
        auto a = fold_rational(*n.lhs), b = fold_rational(*n.rhs);
        if (!a || !b) return std::nullopt;
        return *a - *b;
      }
      case ExprKind::Mul: {
        auto a = fold_rational(*n.lhs), b = fold_rational(*n.rhs);
        if (!a || !b) return std::nullopt;
        return *a * *b;
      }
      case ExprKind::Div: {
        auto a = fold_rational(*n.lhs), b = fold_rational(*n.rhs);
        if (!a || !b || b->is_zero()) return std::nullopt;
        return *a / *b;
      }
      case ExprKind::Pow: {
        auto a = fold_rational(*n.lhs);
        if (!a || !n.rat.is_integer()) return std::nullopt;
        return a->pow(n.rat.num());
      }
      default:
        return std::nullopt;
    }
  } catch (const std::overflow_error&) {
    return std::nullopt;
  } catch (const std::domain_error&) {
    return std::nullopt;
  }
}

class Parser {
 public:
  explicit Parser(std::string_view text) : lexer_(text) { advance(); }

  ExprPtr parse() {
    ExprPtr e = expr();
    if (tok_.kind != Tok::End)
      throw ParseError(std::string("unexpected ") + describe(tok_.kind),
                       tok_.offset, {"'+'", "'-'", "'*'", "'/'", "'^'",
                                     "end of input"});
    return e;
  }

 private:
  void advance() { tok_ = lexer_.next(); }

  ExprPtr expr() {
    ExprPtr e = term();
    while (tok_.kind == Tok::Plus || tok_.kind == Tok::Minus) {
      ExprKind k = tok_.kind == Tok::Plus ? ExprKind::Add : ExprKind::Sub;
      advance();
      e = raw_binary(k, std::move(e), term());
    }
    return e;
  }

  ExprPtr term() {
    ExprPtr e = factor();
    while (tok_.kind == Tok::Star || tok_.kind == Tok::Slash) {
      ExprKind k = tok_.kind == Tok::Star ? ExprKind::Mul : ExprKind::Div;
      advance();
      e = raw_binary(k, std::move(e), factor());
    }
    return e;
  }

  ExprPtr factor() {
    if (tok_.kind == Tok::Minus) {
      advance();
      return raw_unary(ExprKind::Neg, factor());
    }
    return power();
  }

  ExprPtr power() {
    ExprPtr base = atom();
    if (tok_.kind != Tok::Caret) return base;
    std::size_t caret_off = tok_.offset;
    advance();
    ExprPtr exp_tree = factor();
    auto folded = fold_rational(*exp_tree);
    if (!folded)
      throw ParseError("exponent of '^' must fold to a rational constant",
                       caret_off, {"rational constant exponent"});
    ExprNode n;
    n.kind = ExprKind::Pow;
    n.rat = *folded;
    n.lhs = std::move(base);
    return raw(std::move(n));
  }

  ExprPtr atom() {
    switch (tok_.kind) {
      case Tok::Number: {
        ExprNode n;
        if (tok_.exact) {
          n.kind = ExprKind::Rational;
          n.rat = tok_.rat;
        } else {
          n.kind = ExprKind::Float;
          n.flt = tok_.flt;
        }
        advance();
        return raw(std::move(n));
      }
      case Tok::Identifier: {
        std::string name = tok_.text;
        std::size_t off = tok_.offset;
        advance();
        if (tok_.kind == Tok::LParen) {
          if (name != "ln") throw UnknownFunctionError(name, off);
          advance();
          ExprPtr arg = expr();
          expect(Tok::RParen);
          return raw_unary(ExprKind::Ln, std::move(arg));
        }
        ExprNode n;
        n.kind = ExprKind::Variable;
        n.name = std::move(name);
        return raw(std::move(n));
      }
      case Tok::LParen: {
        advance();
        ExprPtr e = expr();
        expect(Tok::RParen);
        return e;
      }
      default:
        throw ParseError(std::string("unexpected ") + describe(tok_.kind),
                         tok_.offset,
                         {"number", "identifier", "'('", "'-'"});
    }
  }

  void expect(Tok kind) {
    if (tok_.kind != kind)
      throw ParseError(std::string("unexpected ") + describe(tok_.kind),
                       tok_.offset, {describe(kind)});
    advance();
  }

  Lexer lexer_;
  Token tok_{Tok::End, 0, ""};
};

}  // namespace

Expression parse(std::string_view text) {
  Parser parser(text);
  return Expression(parser.parse());
}

}  // namespace gtd
