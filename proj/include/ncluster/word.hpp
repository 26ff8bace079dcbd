#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "ncluster/rational.hpp"

namespace ncluster {

enum class Gen : int { y1 = 0, y2 = 1 };

constexpr Gen other_gen(Gen g) { return g == Gen::y1 ? Gen::y2 : Gen::y1; }

struct Syllable {
  Gen gen;
  Int exp;  // nonzero
  bool operator==(const Syllable&) const = default;
};

// A freely reduced word in the free group on y1, y2: a run-length encoded
// sequence of syllables where adjacent syllables have distinct generators and
// no exponent is zero. The empty word is the group identity. Immutable after
// construction; safe to share across threads.
//
// Storage: one int64 per syllable, exponent in the upper 63 bits (arithmetic
// shift), generator in bit 0. Exponents outside [-2^62, 2^62-1] are escaped
// to a side vector so exponents stay arbitrary-precision.
class Word {
 public:
  Word() = default;  // identity

  static Word generator(Gen g, const Int& exp = Int(1));

  bool is_identity() const { return packed_.empty(); }
  std::size_t syllable_count() const { return packed_.size(); }
  Syllable syllable(std::size_t i) const;

  // Total word length: the sum of |exponent| over all syllables.
  Int length() const;

  Word inverse() const;

  // Reverse the word and swap y1 <-> y2 (per-letter exponent signs kept).
  // This is the word-level action of the reflection anti-automorphism.
  Word reflected() const;

  // w^e; e < 0 goes through inverse(). Guarded by a size limit.
  Word pow(const Int& e) const;

  // Free reduction of the concatenation. Cancellation happens at the seam
  // only, so the cost is O(|a| + |b|) with O(cancellation) extra work.
  friend Word operator*(const Word& a, const Word& b);

  // Canonical total order: shorter total length first; on equal length,
  // lexicographic on syllables where the first difference is decided by
  // generator (y1 < y2), then sign (positive < negative), then magnitude
  // (smaller |exponent| first).
  std::strong_ordering compare(const Word& o) const;

  bool operator==(const Word& o) const;
  bool operator<(const Word& o) const { return compare(o) < 0; }

  // (sum of y1 exponents, sum of y2 exponents) -- the abelianized image.
  std::pair<Int, Int> exponent_sums() const;

  // Token form: space-separated "y1^e" / "y2^e"; the identity prints as "1".
  std::string str() const;

  // Incremental construction with on-the-fly free reduction. Appending a
  // syllable merges it into the tail, cancelling completely reduced runs.
  class Builder {
   public:
    void reserve(std::size_t n) { packed_.reserve(n); }
    void append(Gen g, const Int& exp);
    void append_word(const Word& w);
    bool empty() const { return packed_.empty(); }
    Word build() &&;

   private:
    friend class Word;
    std::vector<std::int64_t> packed_;
    std::vector<Int> big_;
    void push_unchecked(Gen g, const Int& exp);
    // pops the last syllable and returns it
    Syllable pop();
  };

 private:
  friend class Builder;

  std::vector<std::int64_t> packed_;
  // Escaped exponents in syllable order; non-null iff any syllable escapes.
  std::unique_ptr<std::vector<Int>> big_;
  // Cached total length, valid iff big_ is null. Bounded by
  // (#syllables) * 2^62, which always fits in 128 bits.
  unsigned __int128 len_ = 0;

  bool has_big() const { return big_ != nullptr; }
  Int exponent_at(std::size_t i, std::size_t big_index) const;

 public:
  Word(const Word& o);
  Word& operator=(const Word& o);
  Word(Word&&) = default;
  Word& operator=(Word&&) = default;
  ~Word() = default;
};

struct WordLess {
  bool operator()(const Word& a, const Word& b) const { return a.compare(b) < 0; }
};

}  // namespace ncluster
