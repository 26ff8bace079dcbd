#include "ncluster/word.hpp"

#include <atomic>
#include <sstream>

#include "ncluster/errors.hpp"

namespace ncluster {

namespace {

// Exponent range stored inline; everything else escapes to the big list.
constexpr std::int64_t kMaxSmall = (std::int64_t{1} << 62) - 1;
constexpr std::int64_t kMinSmall = -(std::int64_t{1} << 62);

// Packed values 0 and 1 decode to exponent 0 and are therefore free to act
// as escape markers (bit 0 still carries the generator).
constexpr bool is_escape(std::int64_t v) { return v == 0 || v == 1; }

constexpr Gen gen_of(std::int64_t v) { return static_cast<Gen>(v & 1); }
constexpr std::int64_t exp_of(std::int64_t v) { return v >> 1; }

std::int64_t pack(Gen g, std::int64_t exp) {
  return (exp << 1) | static_cast<std::int64_t>(g);
}

bool fits_small(const Int& e) { return e >= kMinSmall && e <= kMaxSmall; }

std::uint64_t magnitude(std::int64_t e) {
  return e < 0 ? static_cast<std::uint64_t>(-e) : static_cast<std::uint64_t>(e);
}

// Guard for word powers and similar syllable-count expansions.
constexpr std::uint64_t kMaxBuiltSyllables = 10'000'000;

}  // namespace

// --- copy support (deep-copies the escape list) ---

Word::Word(const Word& o) : packed_(o.packed_), len_(o.len_) {
  if (o.big_) big_ = std::make_unique<std::vector<Int>>(*o.big_);
}

Word& Word::operator=(const Word& o) {
  if (this != &o) {
    packed_ = o.packed_;
    len_ = o.len_;
    big_ = o.big_ ? std::make_unique<std::vector<Int>>(*o.big_) : nullptr;
  }
  return *this;
}

// --- Builder ---

void Word::Builder::push_unchecked(Gen g, const Int& exp) {
  if (fits_small(exp)) {
    packed_.push_back(pack(g, exp.convert_to<std::int64_t>()));
  } else {
    packed_.push_back(static_cast<std::int64_t>(g));
    big_.push_back(exp);
  }
}

Syllable Word::Builder::pop() {
  std::int64_t v = packed_.back();
  packed_.pop_back();
  if (is_escape(v)) {
    Syllable s{gen_of(v), std::move(big_.back())};
    big_.pop_back();
    return s;
  }
  return Syllable{gen_of(v), Int(exp_of(v))};
}

void Word::Builder::append(Gen g, const Int& exp) {
  if (exp == 0) return;
  if (!packed_.empty()) {
    std::int64_t tail = packed_.back();
    if (gen_of(tail) == g) {
      if (!is_escape(tail) && fits_small(exp)) {
        // fast path: both inline; sum cannot overflow int64 range checks
        // because |a|,|b| <= 2^62
        std::int64_t merged = exp_of(tail) + exp.convert_to<std::int64_t>();
        packed_.pop_back();
        if (merged != 0) {
          if (merged >= kMinSmall && merged <= kMaxSmall)
            packed_.push_back(pack(g, merged));
          else
            push_unchecked(g, Int(merged));
        }
        return;
      }
      Syllable tail_syl = pop();
      Int merged = tail_syl.exp + exp;
      if (merged != 0) push_unchecked(g, merged);
      return;
    }
  }
  push_unchecked(g, exp);
}

void Word::Builder::append_word(const Word& w) {
  if (w.packed_.empty()) return;
  if (packed_.empty() && big_.empty()) {
    packed_ = w.packed_;
    if (w.big_) big_ = *w.big_;
    return;
  }
  // Feed syllables one at a time until one lands without merging or
  // cancelling; after that the remainder cannot interact (w is reduced) and
  // is copied wholesale.
  std::size_t big_cursor = 0;
  std::size_t i = 0;
  for (; i < w.packed_.size(); ++i) {
    std::int64_t v = w.packed_[i];
    std::size_t before = packed_.size();
    if (is_escape(v))
      append(gen_of(v), (*w.big_)[big_cursor++]);
    else
      append(gen_of(v), Int(exp_of(v)));
    if (packed_.size() == before + 1) {
      ++i;
      break;
    }
  }
  for (; i < w.packed_.size(); ++i) {
    std::int64_t v = w.packed_[i];
    if (is_escape(v)) {
      packed_.push_back(static_cast<std::int64_t>(gen_of(v)));
      big_.push_back((*w.big_)[big_cursor++]);
    } else {
      packed_.push_back(v);
    }
  }
}

Word Word::Builder::build() && {
  Word w;
  w.packed_ = std::move(packed_);
  if (!big_.empty()) {
    w.big_ = std::make_unique<std::vector<Int>>(std::move(big_));
  } else {
    unsigned __int128 len = 0;
    for (std::int64_t v : w.packed_) len += magnitude(exp_of(v));
    w.len_ = len;
  }
  return w;
}

// --- Word ---

Word Word::generator(Gen g, const Int& exp) {
  Builder b;
  b.append(g, exp);
  return std::move(b).build();
}

Int Word::exponent_at(std::size_t i, std::size_t big_index) const {
  std::int64_t v = packed_[i];
  if (is_escape(v)) return (*big_)[big_index];
  return Int(exp_of(v));
}

Syllable Word::syllable(std::size_t i) const {
  std::int64_t v = packed_[i];
  if (!is_escape(v)) return Syllable{gen_of(v), Int(exp_of(v))};
  std::size_t big_index = 0;
  for (std::size_t j = 0; j < i; ++j)
    if (is_escape(packed_[j])) ++big_index;
  return Syllable{gen_of(v), (*big_)[big_index]};
}

Int Word::length() const {
  if (!has_big()) return Int(len_);
  Int total = 0;
  std::size_t big_index = 0;
  for (std::size_t i = 0; i < packed_.size(); ++i) {
    std::int64_t v = packed_[i];
    if (is_escape(v))
      total += abs((*big_)[big_index++]);
    else
      total += Int(magnitude(exp_of(v)));
  }
  return total;
}

Word Word::inverse() const {
  Builder b;
  b.reserve(packed_.size());
  std::size_t big_index = has_big() ? big_->size() : 0;
  for (std::size_t i = packed_.size(); i-- > 0;) {
    std::int64_t v = packed_[i];
    if (is_escape(v))
      b.push_unchecked(gen_of(v), -(*big_)[--big_index]);
    else
      b.push_unchecked(gen_of(v), Int(-exp_of(v)));
  }
  return std::move(b).build();
}

Word Word::reflected() const {
  Builder b;
  b.reserve(packed_.size());
  std::size_t big_index = has_big() ? big_->size() : 0;
  for (std::size_t i = packed_.size(); i-- > 0;) {
    std::int64_t v = packed_[i];
    if (is_escape(v))
      b.push_unchecked(other_gen(gen_of(v)), (*big_)[--big_index]);
    else
      b.push_unchecked(other_gen(gen_of(v)), Int(exp_of(v)));
  }
  return std::move(b).build();
}

Word Word::pow(const Int& e) const {
  if (e == 0 || is_identity()) return Word();
  if (syllable_count() == 1) {
    Syllable s = syllable(0);
    return generator(s.gen, s.exp * e);
  }
  if (e < 0) return inverse().pow(-e);
  Int built = e * Int(syllable_count());
  if (built > kMaxBuiltSyllables)
    throw resource_error("word power too large: " + e.str() + " repetitions of a " +
                         std::to_string(syllable_count()) + "-syllable word");
  std::uint64_t n = e.convert_to<std::uint64_t>();
  Builder b;
  b.reserve(packed_.size() * n);
  for (std::uint64_t i = 0; i < n; ++i) b.append_word(*this);
  return std::move(b).build();
}

Word operator*(const Word& a, const Word& b) {
  if (a.is_identity()) return b;
  if (b.is_identity()) return a;
  Word::Builder builder;
  builder.reserve(a.packed_.size() + b.packed_.size());
  builder.append_word(a);
  builder.append_word(b);
  return std::move(builder).build();
}

std::strong_ordering Word::compare(const Word& o) const {
  if (!has_big() && !o.has_big()) {
    if (len_ != o.len_) return len_ < o.len_ ? std::strong_ordering::less : std::strong_ordering::greater;
    // equal lengths: scan for the first differing syllable (all inline)
    std::size_t n = std::min(packed_.size(), o.packed_.size());
    for (std::size_t i = 0; i < n; ++i) {
      std::int64_t va = packed_[i], vb = o.packed_[i];
      if (va == vb) continue;
      Gen ga = gen_of(va), gb = gen_of(vb);
      if (ga != gb) return ga == Gen::y1 ? std::strong_ordering::less : std::strong_ordering::greater;
      std::int64_t ea = exp_of(va), eb = exp_of(vb);
      bool neg_a = ea < 0, neg_b = eb < 0;
      if (neg_a != neg_b) return neg_a ? std::strong_ordering::greater : std::strong_ordering::less;
      std::uint64_t ma = magnitude(ea), mb = magnitude(eb);
      return ma < mb ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    if (packed_.size() == o.packed_.size()) return std::strong_ordering::equal;
    // unreachable for reduced words of equal length; kept for totality
    return packed_.size() < o.packed_.size() ? std::strong_ordering::less
                                             : std::strong_ordering::greater;
  }
  // slow path: at least one escaped exponent present
  Int la = length(), lb = o.length();
  if (la != lb) return la < lb ? std::strong_ordering::less : std::strong_ordering::greater;
  std::size_t n = std::min(packed_.size(), o.packed_.size());
  std::size_t bia = 0, bib = 0;
  for (std::size_t i = 0; i < n; ++i) {
    Int ea = exponent_at(i, bia), eb = o.exponent_at(i, bib);
    if (is_escape(packed_[i])) ++bia;
    if (is_escape(o.packed_[i])) ++bib;
    Gen ga = gen_of(packed_[i]), gb = gen_of(o.packed_[i]);
    if (ga != gb) return ga == Gen::y1 ? std::strong_ordering::less : std::strong_ordering::greater;
    if (ea == eb) continue;
    bool neg_a = ea < 0, neg_b = eb < 0;
    if (neg_a != neg_b) return neg_a ? std::strong_ordering::greater : std::strong_ordering::less;
    Int ma = abs(ea), mb = abs(eb);
    if (ma != mb) return ma < mb ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  if (packed_.size() == o.packed_.size()) return std::strong_ordering::equal;
  return packed_.size() < o.packed_.size() ? std::strong_ordering::less
                                           : std::strong_ordering::greater;
}

bool Word::operator==(const Word& o) const {
  if (packed_ != o.packed_) return false;
  if (has_big() != o.has_big()) return false;
  if (!has_big()) return true;
  return *big_ == *o.big_;
}

std::pair<Int, Int> Word::exponent_sums() const {
  Int s1 = 0, s2 = 0;
  std::size_t big_index = 0;
  for (std::size_t i = 0; i < packed_.size(); ++i) {
    std::int64_t v = packed_[i];
    Int e = is_escape(v) ? (*big_)[big_index++] : Int(exp_of(v));
    (gen_of(v) == Gen::y1 ? s1 : s2) += e;
  }
  return {std::move(s1), std::move(s2)};
}

std::string Word::str() const {
  if (is_identity()) return "1";
  std::ostringstream out;
  std::size_t big_index = 0;
  for (std::size_t i = 0; i < packed_.size(); ++i) {
    std::int64_t v = packed_[i];
    if (i) out << ' ';
    out << (gen_of(v) == Gen::y1 ? "y1^" : "y2^");
    if (is_escape(v))
      out << (*big_)[big_index++];
    else
      out << exp_of(v);
  }
  return out.str();
}

// --- term cap (shared by the algebra layer; lives here to keep errors.hpp
// header-only) ---

namespace {
std::atomic<std::size_t> g_term_cap{kDefaultTermCap};
}

std::size_t term_cap() { return g_term_cap.load(std::memory_order_relaxed); }

void set_term_cap(std::size_t cap) {
  g_term_cap.store(cap == 0 ? 1 : cap, std::memory_order_relaxed);
}

}  // namespace ncluster
