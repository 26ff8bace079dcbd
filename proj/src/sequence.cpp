#include "ncluster/sequence.hpp"

#include <limits>
#include <mutex>
#include <stdexcept>
#include <string>

#include "ncluster/errors.hpp"

namespace ncluster {

SeedParams swapped(const SeedParams& p) { return SeedParams{p.r2, p.r1}; }

const Word& z_word() {
  static const Word z = [] {
    Word::Builder b;
    b.append(Gen::y2, -1);
    b.append(Gen::y1, 1);
    b.append(Gen::y2, 1);
    b.append(Gen::y1, -1);
    return std::move(b).build();
  }();
  return z;
}

const Word& z_inverse_word() {
  static const Word zi = z_word().inverse();
  return zi;
}

Element z_element() { return Element::from_word(z_word()); }
Element z_inverse_element() { return Element::from_word(z_inverse_word()); }

unsigned r_of(long long k, const SeedParams& p) { return k % 2 != 0 ? p.r1 : p.r2; }

Element base_y(int k, const SeedParams& p) {
  if (p.r1 < 1 || p.r2 < 1) throw std::invalid_argument("seed parameters must be >= 1");
  switch (k) {
    case 1:
      return Element::from_word(Word::generator(Gen::y1));
    case 2:
      return Element::from_word(Word::generator(Gen::y2));
    case 0: {
      // z^-1 y2^-1 (1 + y1^{r1}), solved from y2 z y0 = 1 + y1^{r1}
      Element pre = Element::from_word(z_inverse_word() * Word::generator(Gen::y2, -1));
      Element paren = Element::one() + Element::from_word(Word::generator(Gen::y1, p.r1));
      return pre * paren;
    }
    case 3: {
      // (1 + y2^{r2}) y1^-1 z^-1, solved from y3 z y1 = 1 + y2^{r2}
      Element paren = Element::one() + Element::from_word(Word::generator(Gen::y2, p.r2));
      Element post = Element::from_word(Word::generator(Gen::y1, -1) * z_inverse_word());
      return paren * post;
    }
    default:
      throw std::invalid_argument("base_y: k must be in {0,1,2,3}");
  }
}

Element forward_step(const Element& yk, const Element& yk1, const Element& yk2,
                     const Element& yk3, long long k, const SeedParams& p) {
  const unsigned a = r_of(k + 1, p);
  const unsigned b = r_of(k, p);
  const Element z = z_element();

  const Element y3z = yk3 * z;
  const Element zy1 = z * yk1;
  const Element mid = z * (yk2 * z).pow(b - 1);

  Element sum;
  Element left = Element::one();   // (z y_{k+1})^j
  Element right = Element::one();  // (y_{k+3} z)^j
  for (unsigned j = 0; j < a; ++j) {
    if (j > 0) {
      left = left * zy1;
      right = right * y3z;
    }
    sum += left * (mid * right);
  }
  Element lead = (z * yk) * (right * y3z);  // z y_k (y_{k+3} z)^a
  return (lead - sum) * z_inverse_element();
}

SequenceCache::SequenceCache(SeedParams p)
    : params_(p), forward_blocked_from_(std::numeric_limits<long long>::max()) {
  if (p.r1 < 1 || p.r2 < 1) throw std::invalid_argument("seed parameters must be >= 1");
}

std::shared_ptr<const Element> SequenceCache::get(long long k) {
  {
    std::shared_lock lock(mtx_);
    auto it = table_.find(k);
    if (it != table_.end()) return it->second;
    if (k >= forward_blocked_from_)
      throw resource_error("y_" + std::to_string(k) + " blocked by the term cap");
  }
  std::unique_lock lock(mtx_);
  return get_locked(k);
}

std::shared_ptr<const Element> SequenceCache::get_locked(long long k) {
  auto it = table_.find(k);
  if (it != table_.end()) return it->second;
  if (k >= forward_blocked_from_)
    throw resource_error("y_" + std::to_string(k) + " blocked by the term cap");

  if (k >= 0 && k <= 3) {
    auto e = std::make_shared<const Element>(base_y(static_cast<int>(k), params_));
    table_.emplace(k, e);
    return e;
  }

  if (k >= 4) {
    for (int i = 0; i <= 3; ++i) get_locked(i);
    long long first = 4;
    while (table_.count(first)) ++first;
    for (long long m = first; m <= k; ++m) {
      try {
        Element next = forward_step(*table_.at(m - 4), *table_.at(m - 3), *table_.at(m - 2),
                                    *table_.at(m - 1), m - 4, params_);
        table_.emplace(m, std::make_shared<const Element>(std::move(next)));
      } catch (const resource_error&) {
        forward_blocked_from_ = m;
        throw resource_error("y_" + std::to_string(k) + " blocked by the term cap (y_" +
                             std::to_string(m) + " exceeds it)");
      }
    }
    return table_.at(k);
  }

  // k < 0: reflect from the swapped-parameter sequence, y_k = sigma(y_{3-k}).
  if (!reflected_) reflected_ = std::make_unique<SequenceCache>(swapped(params_));
  auto src = reflected_->get(3 - k);
  auto e = std::make_shared<const Element>(src->sigma());
  table_.emplace(k, e);
  return e;
}

std::shared_ptr<const Element> SequenceCache::get_if_available(long long k) {
  try {
    return get(k);
  } catch (const resource_error&) {
    return nullptr;
  }
}

std::pair<Element, std::shared_ptr<const Element>> SequenceCache::pair(long long k) {
  if (k < 1) throw std::invalid_argument("pair: k must be >= 1");
  auto y_prev = get(k - 1);
  auto y = get(k);
  return {z_element() * *y_prev, std::move(y)};
}

bool SequenceCache::spot_check(long long k) {
  std::shared_ptr<const Element> prev, cur, next;
  {
    std::shared_lock lock(mtx_);
    auto a = table_.find(k - 1);
    auto b = table_.find(k);
    auto c = table_.find(k + 1);
    if (a == table_.end() || b == table_.end() || c == table_.end()) return true;
    prev = a->second;
    cur = b->second;
    next = c->second;
  }
  Element residual = *next * z_element() * *prev - Element::one() - cur->pow(r_of(k, params_));
  return residual.is_zero();
}

}  // namespace ncluster
