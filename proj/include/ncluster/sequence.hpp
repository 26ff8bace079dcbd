#pragma once

#include <map>
#include <memory>
#include <shared_mutex>
#include <utility>

#include "ncluster/algebra.hpp"

namespace ncluster {

// Exchange exponents (r1, r2), both >= 1.
struct SeedParams {
  unsigned r1 = 1;
  unsigned r2 = 1;
  bool operator==(const SeedParams&) const = default;
};

SeedParams swapped(const SeedParams& p);

// z = y2^-1 y1 y2 y1^-1 and its inverse, as words and one-term elements.
const Word& z_word();
const Word& z_inverse_word();
Element z_element();
Element z_inverse_element();

// r_k: r1 for odd k, r2 for even k, extended to all integers by parity.
unsigned r_of(long long k, const SeedParams& p);

// Base cases k in {0,1,2,3}: y1, y2 are the generators; y0 and y3 are solved
// from the exchange relation y_{k+1} z y_{k-1} = 1 + y_k^{r_k} at k = 1, 2 by
// multiplying with unit words:
//   y0 = z^-1 y2^-1 (1 + y1^{r1})
//   y3 = (1 + y2^{r2}) y1^-1 z^-1
Element base_y(int k, const SeedParams& p);

// One step of the Laurent-preserving recursion:
//   y_{k+4} z = z y_k (y_{k+3} z)^{r_{k+1}}
//               - sum_{j=0}^{r_{k+1}-1} (z y_{k+1})^j z (y_{k+2} z)^{r_k - 1} (y_{k+3} z)^j
// followed by right multiplication with the unit word z^-1. No division by a
// non-monomial element ever happens.
Element forward_step(const Element& yk, const Element& yk1, const Element& yk2,
                     const Element& yk3, long long k, const SeedParams& p);

// Memoized y_k for all integer k. Forward indices use base cases plus
// forward_step; negative indices come from the reflection y_k = sigma(y_{3-k})
// where y_{3-k} is taken from a cache with swapped parameters.
//
// Thread safety: concurrent readers are fine; a miss computes under an
// exclusive lock (writers serialized) and never exposes a partial element.
// Indices whose computation exceeded the term cap are remembered as blocked
// under the cap that was active at the time.
class SequenceCache {
 public:
  explicit SequenceCache(SeedParams p);

  const SeedParams& params() const { return params_; }

  // y_k; throws resource_error if the term cap blocks this index.
  std::shared_ptr<const Element> get(long long k);

  // nullptr instead of resource_error for cap-blocked indices.
  std::shared_ptr<const Element> get_if_available(long long k);

  // (x_k, y_k) with x_k = z * y_{k-1}; requires k >= 1.
  std::pair<Element, std::shared_ptr<const Element>> pair(long long k);

  // Exchange-relation spot check at index k using only already-cached
  // neighbors; returns true when neighbors are absent or the residual is 0.
  bool spot_check(long long k);

 private:
  SeedParams params_;
  std::shared_mutex mtx_;
  std::map<long long, std::shared_ptr<const Element>> table_;
  long long forward_blocked_from_;  // smallest forward k that hit the cap
  std::unique_ptr<SequenceCache> reflected_;  // lazily built, swapped params

  std::shared_ptr<const Element> get_locked(long long k);
};

}  // namespace ncluster
