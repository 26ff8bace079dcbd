#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ncluster/algebra.hpp"

namespace ncluster {

// Expression grammar (whitespace insensitive, ASCII only):
//   Sum     := ('+'|'-')? Term (('+'|'-') Term)*
//   Term    := Factor ('*'? Factor)*          juxtaposition = product
//   Factor  := Primary ('^' SignedInt)?
//   Primary := 'y1' | 'y2' | 'z' | Number | '(' Sum ')'
//   Number  := UnsignedInt ('/' UnsignedInt)?  a rational literal, not division
// Products are left associative and order preserving. A negative power is
// only defined for one-term (monomial) values and is rejected during
// evaluation otherwise.
struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

enum class AtomKind { Y1, Y2, Z };

struct Expr {
  struct Literal {
    Rational value;
  };
  struct Atom {
    AtomKind kind;
  };
  struct Power {
    ExprPtr base;
    Int exponent;
  };
  struct Product {
    std::vector<ExprPtr> factors;  // in written order
  };
  struct Sum {
    std::vector<std::pair<int, ExprPtr>> terms;  // sign is +1 or -1
  };
  std::variant<Literal, Atom, Power, Product, Sum> node;
};

ExprPtr parse_expression(std::string_view text);  // throws parse_error
Element evaluate(const Expr& ast);                // throws eval_error
Element evaluate_expression(std::string_view text);

// Canonical text: terms in word order, "coeff word-tokens" with unit
// coefficients elided, +/- separated, zero prints as "0". Parsing the output
// reproduces the element exactly.
std::string print_canonical(const Element& a);

// Display form with y_1/y_2, braced exponents and no round-trip guarantee.
std::string print_latex(const Element& a);

// One term per line, "<coefficient>\t<word tokens>\n", coefficient as p or
// p/q in lowest terms, lines in canonical order. The zero element encodes as
// the empty string. decode is strict: it rejects anything encode would not
// produce (bad tokens, zero/unnormalized coefficients, unreduced words,
// duplicates, lines out of order) with the offending line number.
std::string encode_tsv(const Element& a);
Element decode_tsv(std::string_view text);  // throws parse_error

}  // namespace ncluster
