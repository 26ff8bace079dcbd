#include "ncluster/algebra.hpp"

#include <stdexcept>
#include <string>

#include "ncluster/errors.hpp"

namespace ncluster {

bool is_integer(const Rational& q) { return denominator(q) == 1; }

Rational rational_pow(const Rational& x, const Int& e) {
  if (e == 0) return Rational(1);
  if (x == 0) {
    if (e > 0) return Rational(0);
    throw std::invalid_argument("rational_pow: zero base with negative exponent");
  }
  if (x == 1) return Rational(1);
  if (x == -1) return (e % 2 == 0) ? Rational(1) : Rational(-1);
  Int mag = abs(e);
  if (mag > 10'000'000)
    throw resource_error("rational_pow: exponent too large: " + e.str());
  std::uint64_t n = mag.convert_to<std::uint64_t>();
  Rational base = e > 0 ? x : Rational(1) / x;
  Rational acc(1);
  while (true) {
    if (n & 1) acc *= base;
    n >>= 1;
    if (!n) break;
    base *= base;
  }
  return acc;
}

Element Element::from_rational(const Rational& c) {
  Element e;
  if (c != 0) e.terms_.emplace(Word(), c);
  return e;
}

Element Element::from_word(Word w, const Rational& c) {
  Element e;
  if (c != 0) e.terms_.emplace(std::move(w), c);
  return e;
}

void Element::add_term(Word w, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(std::move(w), c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  } else if (terms_.size() > term_cap()) {
    throw resource_error("term cap exceeded (" + std::to_string(term_cap()) + " terms)");
  }
}

Element& Element::operator+=(const Element& o) {
  if (this == &o) {
    for (auto& [w, c] : terms_) c += c;
    return *this;
  }
  for (const auto& [w, c] : o.terms_) add_term(w, c);
  return *this;
}

Element& Element::operator-=(const Element& o) {
  if (this == &o) {
    terms_.clear();
    return *this;
  }
  for (const auto& [w, c] : o.terms_) add_term(w, -c);
  return *this;
}

Element operator*(const Element& a, const Element& b) {
  Element r;
  for (const auto& [wa, ca] : a.terms_)
    for (const auto& [wb, cb] : b.terms_) r.add_term(wa * wb, ca * cb);
  return r;
}

Element Element::operator-() const {
  Element r;
  for (const auto& [w, c] : terms_) r.terms_.emplace(w, -c);
  return r;
}

Element Element::scaled(const Rational& c) const {
  Element r;
  if (c == 0) return r;
  for (const auto& [w, coeff] : terms_) r.terms_.emplace(w, coeff * c);
  return r;
}

Element Element::pow(std::uint64_t n) const {
  if (n == 0) return one();
  Element r = *this;
  for (std::uint64_t i = 1; i < n; ++i) r = r * *this;
  return r;
}

Element Element::sigma() const {
  Element r;
  for (const auto& [w, c] : terms_) r.terms_.emplace(w.reflected(), c);
  return r;
}

Rational Element::abelian_eval(const Rational& va, const Rational& vb) const {
  if (va == 0 || vb == 0)
    throw std::invalid_argument("abelian_eval: evaluation point must be nonzero");
  Rational total(0);
  for (const auto& [w, c] : terms_) {
    auto [e1, e2] = w.exponent_sums();
    total += c * rational_pow(va, e1) * rational_pow(vb, e2);
  }
  return total;
}

CoefficientStats Element::stats() const {
  CoefficientStats s;
  s.term_count = terms_.size();
  for (const auto& [w, c] : terms_) {
    Int len = w.length();
    if (len > s.max_word_length) s.max_word_length = len;
    if (!is_integer(c)) s.all_integer = false;
    if (c <= 0) s.all_positive = false;
  }
  return s;
}

bool Element::well_formed() const {
  for (const auto& [w, c] : terms_)
    if (c == 0) return false;
  return true;
}

}  // namespace ncluster
