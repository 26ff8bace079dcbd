#include "ncluster/textio.hpp"

#include <cctype>
#include <sstream>

#include "ncluster/errors.hpp"
#include "ncluster/sequence.hpp"

namespace ncluster {

namespace {

// --- lexer ---

enum class Tok { Num, Y1, Y2, Z, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
  Tok type;
  std::string_view text;
  std::size_t pos;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) { advance(); }

  const Token& peek() const { return current_; }

  Token take() {
    Token t = current_;
    advance();
    return t;
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;
  Token current_{Tok::End, {}, 0};

  void advance() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    std::size_t start = pos_;
    if (pos_ >= src_.size()) {
      current_ = {Tok::End, {}, start};
      return;
    }
    char c = src_[pos_];
    auto single = [&](Tok t) {
      ++pos_;
      current_ = {t, src_.substr(start, 1), start};
    };
    switch (c) {
      case '+': single(Tok::Plus); return;
      case '-': single(Tok::Minus); return;
      case '*': single(Tok::Star); return;
      case '/': single(Tok::Slash); return;
      case '^': single(Tok::Caret); return;
      case '(': single(Tok::LParen); return;
      case ')': single(Tok::RParen); return;
      case 'z': single(Tok::Z); return;
      case 'y': {
        if (pos_ + 1 < src_.size() && (src_[pos_ + 1] == '1' || src_[pos_ + 1] == '2')) {
          Tok t = src_[pos_ + 1] == '1' ? Tok::Y1 : Tok::Y2;
          pos_ += 2;
          current_ = {t, src_.substr(start, 2), start};
          return;
        }
        throw parse_error("expected y1 or y2", start);
      }
      default:
        if (std::isdigit(static_cast<unsigned char>(c))) {
          while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
          current_ = {Tok::Num, src_.substr(start, pos_ - start), start};
          return;
        }
        throw parse_error(std::string("unexpected character '") + c + "'", start);
    }
  }
};

// --- parser ---

class Parser {
 public:
  explicit Parser(std::string_view src) : lex_(src) {}

  ExprPtr parse() {
    ExprPtr e = parse_sum();
    if (lex_.peek().type != Tok::End)
      throw parse_error("unexpected trailing input", lex_.peek().pos);
    return e;
  }

 private:
  Lexer lex_;

  static bool starts_factor(Tok t) {
    return t == Tok::Num || t == Tok::Y1 || t == Tok::Y2 || t == Tok::Z || t == Tok::LParen;
  }

  ExprPtr parse_sum() {
    auto sum = std::make_unique<Expr>();
    auto& terms = sum->node.emplace<Expr::Sum>().terms;
    int sign = 1;
    if (lex_.peek().type == Tok::Plus || lex_.peek().type == Tok::Minus)
      sign = lex_.take().type == Tok::Minus ? -1 : 1;
    terms.emplace_back(sign, parse_term());
    while (lex_.peek().type == Tok::Plus || lex_.peek().type == Tok::Minus) {
      sign = lex_.take().type == Tok::Minus ? -1 : 1;
      terms.emplace_back(sign, parse_term());
    }
    if (terms.size() == 1 && terms[0].first == 1) return std::move(terms[0].second);
    return sum;
  }

  ExprPtr parse_term() {
    auto first = parse_factor();
    if (!starts_factor(lex_.peek().type) && lex_.peek().type != Tok::Star) return first;
    auto prod = std::make_unique<Expr>();
    auto& factors = prod->node.emplace<Expr::Product>().factors;
    factors.push_back(std::move(first));
    while (true) {
      if (lex_.peek().type == Tok::Star) {
        lex_.take();
        factors.push_back(parse_factor());
      } else if (starts_factor(lex_.peek().type)) {
        factors.push_back(parse_factor());
      } else {
        break;
      }
    }
    return prod;
  }

  ExprPtr parse_factor() {
    ExprPtr base = parse_primary();
    if (lex_.peek().type != Tok::Caret) return base;
    lex_.take();
    Int e = parse_signed_int();
    auto p = std::make_unique<Expr>();
    p->node = Expr::Power{std::move(base), std::move(e)};
    return p;
  }

  Int parse_signed_int() {
    int sign = 1;
    if (lex_.peek().type == Tok::Plus || lex_.peek().type == Tok::Minus)
      sign = lex_.take().type == Tok::Minus ? -1 : 1;
    if (lex_.peek().type != Tok::Num)
      throw parse_error("expected integer exponent", lex_.peek().pos);
    Token t = lex_.take();
    Int v(std::string(t.text));
    return sign < 0 ? -v : v;
  }

  ExprPtr parse_primary() {
    Token t = lex_.peek();
    switch (t.type) {
      case Tok::Y1:
      case Tok::Y2:
      case Tok::Z: {
        lex_.take();
        auto e = std::make_unique<Expr>();
        e->node = Expr::Atom{t.type == Tok::Y1   ? AtomKind::Y1
                             : t.type == Tok::Y2 ? AtomKind::Y2
                                                 : AtomKind::Z};
        return e;
      }
      case Tok::Num: {
        lex_.take();
        Int num(std::string(t.text));
        auto e = std::make_unique<Expr>();
        if (lex_.peek().type == Tok::Slash) {
          std::size_t slash_pos = lex_.take().pos;
          if (lex_.peek().type != Tok::Num)
            throw parse_error("expected denominator after '/'", lex_.peek().pos);
          Int den(std::string(lex_.take().text));
          if (den == 0) throw parse_error("zero denominator", slash_pos);
          e->node = Expr::Literal{Rational(num, den)};
        } else {
          e->node = Expr::Literal{Rational(num)};
        }
        return e;
      }
      case Tok::LParen: {
        lex_.take();
        ExprPtr inner = parse_sum();
        if (lex_.peek().type != Tok::RParen)
          throw parse_error("expected ')'", lex_.peek().pos);
        lex_.take();
        return inner;
      }
      default:
        throw parse_error("expected a value", t.pos);
    }
  }
};

Element power_of(const Element& base, const Int& e) {
  if (e == 0) return Element::one();
  if (base.term_count() == 1) {
    // monomial fast path; the only place a negative power is legal
    const auto& [w, c] = *base.terms().begin();
    return Element::from_word(w.pow(e), rational_pow(c, e));
  }
  if (e < 0) throw eval_error("negative power of a non-monomial value");
  if (e > 10'000'000) throw resource_error("element power exponent too large: " + e.str());
  return base.pow(e.convert_to<std::uint64_t>());
}

// --- strict TSV helpers ---

bool is_strict_uint(std::string_view s) {
  if (s.empty()) return false;
  if (s.size() > 1 && s[0] == '0') return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

bool is_strict_int(std::string_view s) {
  if (!s.empty() && s[0] == '-') s.remove_prefix(1);
  return is_strict_uint(s);
}

Rational parse_strict_coefficient(std::string_view s, std::size_t line_no) {
  auto fail = [&](const std::string& why) -> Rational {
    throw parse_error("line " + std::to_string(line_no) + ": " + why, line_no);
  };
  std::string_view num = s, den;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    num = s.substr(0, slash);
    den = s.substr(slash + 1);
  }
  if (!is_strict_int(num)) return fail("malformed coefficient '" + std::string(s) + "'");
  Int n((std::string(num)));
  if (n == 0) return fail("zero coefficient");
  if (den.empty()) {
    if (s.find('/') != std::string_view::npos) return fail("malformed coefficient");
    return Rational(n);
  }
  if (!is_strict_uint(den)) return fail("malformed denominator '" + std::string(den) + "'");
  Int d((std::string(den)));
  if (d < 2) return fail("denominator must be >= 2 in canonical form");
  if (gcd(abs(n), d) != 1) return fail("coefficient not in lowest terms");
  return Rational(n, d);
}

Word parse_strict_word(std::string_view s, std::size_t line_no) {
  auto fail = [&](const std::string& why) -> Word {
    throw parse_error("line " + std::to_string(line_no) + ": " + why, line_no);
  };
  if (s == "1") return Word();
  if (s.empty()) return fail("empty word field");
  Word::Builder b;
  int last_gen = -1;
  std::size_t token_start = 0;
  while (token_start <= s.size()) {
    std::size_t space = s.find(' ', token_start);
    std::string_view tok =
        space == std::string_view::npos ? s.substr(token_start) : s.substr(token_start, space - token_start);
    if (tok.size() < 4 || tok[0] != 'y' || (tok[1] != '1' && tok[1] != '2') || tok[2] != '^')
      return fail("bad word token '" + std::string(tok) + "'");
    std::string_view exp_text = tok.substr(3);
    if (!is_strict_int(exp_text)) return fail("bad exponent in token '" + std::string(tok) + "'");
    Int e((std::string(exp_text)));
    if (e == 0) return fail("zero exponent in token '" + std::string(tok) + "'");
    int gen = tok[1] == '1' ? 0 : 1;
    if (gen == last_gen) return fail("unreduced word: adjacent '" + std::string(tok) + "'");
    last_gen = gen;
    b.append(gen == 0 ? Gen::y1 : Gen::y2, e);
    if (space == std::string_view::npos) break;
    token_start = space + 1;
    if (token_start >= s.size()) return fail("trailing space in word field");
  }
  return std::move(b).build();
}

std::string coefficient_str(const Rational& c) {
  std::ostringstream os;
  os << c;
  return os.str();
}

}  // namespace

ExprPtr parse_expression(std::string_view text) { return Parser(text).parse(); }

Element evaluate(const Expr& ast) {
  return std::visit(
      [](const auto& node) -> Element {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Expr::Literal>) {
          return Element::from_rational(node.value);
        } else if constexpr (std::is_same_v<T, Expr::Atom>) {
          switch (node.kind) {
            case AtomKind::Y1: return Element::from_word(Word::generator(Gen::y1));
            case AtomKind::Y2: return Element::from_word(Word::generator(Gen::y2));
            default: return z_element();
          }
        } else if constexpr (std::is_same_v<T, Expr::Power>) {
          return power_of(evaluate(*node.base), node.exponent);
        } else if constexpr (std::is_same_v<T, Expr::Product>) {
          Element acc = Element::one();
          for (const auto& f : node.factors) acc = acc * evaluate(*f);
          return acc;
        } else {
          Element acc;
          for (const auto& [sign, term] : node.terms) {
            Element v = evaluate(*term);
            if (sign < 0)
              acc -= v;
            else
              acc += v;
          }
          return acc;
        }
      },
      ast.node);
}

Element evaluate_expression(std::string_view text) { return evaluate(*parse_expression(text)); }

std::string print_canonical(const Element& a) {
  if (a.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [w, c] : a.terms()) {
    bool negative = c < 0;
    Rational mag = negative ? Rational(-c) : c;
    if (first) {
      if (negative) os << '-';
      first = false;
    } else {
      os << (negative ? " - " : " + ");
    }
    if (w.is_identity()) {
      os << coefficient_str(mag);
    } else if (mag == 1) {
      os << w.str();
    } else {
      os << coefficient_str(mag) << ' ' << w.str();
    }
  }
  return os.str();
}

std::string print_latex(const Element& a) {
  if (a.is_zero()) return "0";
  auto word_latex = [](const Word& w) {
    std::ostringstream os;
    for (std::size_t i = 0; i < w.syllable_count(); ++i) {
      Syllable s = w.syllable(i);
      os << (s.gen == Gen::y1 ? "y_1" : "y_2");
      if (s.exp != 1) os << "^{" << s.exp << "}";
    }
    return os.str();
  };
  std::ostringstream os;
  bool first = true;
  for (const auto& [w, c] : a.terms()) {
    bool negative = c < 0;
    Rational mag = negative ? Rational(-c) : c;
    if (first) {
      if (negative) os << '-';
      first = false;
    } else {
      os << (negative ? " - " : " + ");
    }
    std::string coeff;
    if (is_integer(mag)) {
      coeff = numerator(mag).str();
    } else {
      coeff = "\\tfrac{" + numerator(mag).str() + "}{" + denominator(mag).str() + "}";
    }
    if (w.is_identity()) {
      os << coeff;
    } else if (mag == 1) {
      os << word_latex(w);
    } else {
      os << coeff << word_latex(w);
    }
  }
  return os.str();
}

std::string encode_tsv(const Element& a) {
  std::ostringstream os;
  for (const auto& [w, c] : a.terms()) os << coefficient_str(c) << '\t' << w.str() << '\n';
  return os.str();
}

Element decode_tsv(std::string_view text) {
  Element result;
  if (text.empty()) return result;
  if (text.back() != '\n') throw parse_error("missing final newline", 0);

  const Word* prev_word = nullptr;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  std::vector<std::pair<Word, Rational>> rows;
  while (pos < text.size()) {
    ++line_no;
    std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos)
      throw parse_error("line " + std::to_string(line_no) + ": missing tab separator", line_no);
    if (line.find('\t', tab + 1) != std::string_view::npos)
      throw parse_error("line " + std::to_string(line_no) + ": more than one tab", line_no);
    Rational c = parse_strict_coefficient(line.substr(0, tab), line_no);
    Word w = parse_strict_word(line.substr(tab + 1), line_no);
    if (prev_word) {
      auto order = prev_word->compare(w);
      if (order == std::strong_ordering::equal)
        throw parse_error("line " + std::to_string(line_no) + ": duplicate word", line_no);
      if (order == std::strong_ordering::greater)
        throw parse_error("line " + std::to_string(line_no) + ": words out of canonical order",
                          line_no);
    }
    rows.emplace_back(std::move(w), std::move(c));
    prev_word = &rows.back().first;
  }
  for (auto& [w, c] : rows) result += Element::from_word(std::move(w), c);
  return result;
}

}  // namespace ncluster
