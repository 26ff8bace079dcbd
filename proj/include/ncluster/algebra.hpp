#pragma once

#include <cstddef>
#include <map>
#include <utility>

#include "ncluster/rational.hpp"
#include "ncluster/word.hpp"

namespace ncluster {

struct CoefficientStats {
  std::size_t term_count = 0;
  Int max_word_length = 0;
  bool all_integer = true;   // vacuously true for the zero element
  bool all_positive = true;  // ditto (zero coefficients are never stored)
};

// A noncommutative Laurent polynomial: a finite map from reduced words to
// nonzero exact rationals, kept sorted in the canonical word order. All
// operations are pure; elements are immutable values.
//
// Every operation that grows the term map checks the global term cap and
// throws resource_error as soon as the running result exceeds it.
class Element {
 public:
  using TermMap = std::map<Word, Rational, WordLess>;

  Element() = default;  // zero

  static Element one() { return from_rational(Rational(1)); }
  static Element from_rational(const Rational& c);
  static Element from_word(Word w, const Rational& c = Rational(1));

  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }
  const TermMap& terms() const { return terms_; }

  Element& operator+=(const Element& o);
  Element& operator-=(const Element& o);
  friend Element operator+(Element a, const Element& b) { return a += b; }
  friend Element operator-(Element a, const Element& b) { return a -= b; }
  friend Element operator*(const Element& a, const Element& b);
  Element operator-() const;
  Element scaled(const Rational& c) const;

  // a^n with a^0 = 1, by repeated multiplication.
  Element pow(std::uint64_t n) const;

  // The linear extension of word reflection: the unique anti-automorphism
  // with y1 <-> y2. Involutive; turns products around.
  Element sigma() const;

  // Substitute commuting nonzero rationals for y1, y2 (so any commutator,
  // z in particular, maps to 1). Ring homomorphism onto Q. Throws
  // std::invalid_argument when va or vb is zero.
  Rational abelian_eval(const Rational& va, const Rational& vb) const;

  CoefficientStats stats() const;

  bool operator==(const Element& o) const { return terms_ == o.terms_; }

  // structural audit: no zero coefficients stored
  bool well_formed() const;

 private:
  TermMap terms_;
  // accumulate c * w into the map, dropping the term if it cancels
  void add_term(Word w, const Rational& c);
};

}  // namespace ncluster
