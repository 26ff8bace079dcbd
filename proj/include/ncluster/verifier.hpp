#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ncluster/sequence.hpp"

namespace ncluster {

// One identity family (or observation) checked by the suite.
enum class CheckKind {
  Recursion,        // y_{k+1} z y_{k-1} = 1 + y_k^{r_k}
  Commutation,      // y_{k+1} z y_k = y_k y_{k+1}
  Recursion2,       // y_{k-1} y_{k+1} z = 1 + (y_k z)^{r_k}
  ReductionLemma,   // y_1^m (y_3 z)^m = 1 + sum_j y_1^j (y_2 z)^{r_2} (y_3 z)^j
  Presentation,     // the four relation families on y_0..y_3, z
  HIdentities,      // y_0 y_3 z and y_3 z y_0 against h_r products
  Example22,        // the expanded y_4 z identity, (2,2) only
  Positivity,       // all coefficients of y_k strictly positive
  Integrality,      // all coefficients of y_k integers
  SigmaReflection,  // sigma(y_k | r1,r2) = y_{3-k} | r2,r1
  AbelianOracle,    // abelianized y_k against the scalar exchange recursion
  PeriodScan,       // observation: y_{k+5} == y_k
};

inline constexpr CheckKind kAllCheckKinds[] = {
    CheckKind::Recursion,    CheckKind::Commutation, CheckKind::Recursion2,
    CheckKind::ReductionLemma, CheckKind::Presentation, CheckKind::HIdentities,
    CheckKind::Example22,    CheckKind::Positivity,  CheckKind::Integrality,
    CheckKind::SigmaReflection, CheckKind::AbelianOracle, CheckKind::PeriodScan,
};

std::string_view to_string(CheckKind kind);
std::optional<CheckKind> check_kind_from_string(std::string_view name);

enum class CheckStatus { Pass, Fail, Skip };

struct CheckReport {
  CheckKind kind = CheckKind::Recursion;
  SeedParams params;
  long long index = 0;  // k, or m for ReductionLemma; 0 for one-shot kinds
  CheckStatus status = CheckStatus::Pass;
  std::size_t residual_terms = 0;
  std::chrono::microseconds elapsed{0};
  std::string detail;

  bool passed() const { return status == CheckStatus::Pass; }
  bool skipped() const { return status == CheckStatus::Skip; }
};

struct CheckOptions {
  std::size_t sample_points = 5;
  std::uint64_t sample_seed = 0;
  // Optional shared cache with swapped parameters for SigmaReflection; a
  // temporary one is built per call when absent.
  SequenceCache* swapped_cache = nullptr;
};

// Runs one check. Identity kinds pass iff the residual is exactly zero.
// A term-cap hit is reported as a skip, not a failure. Invalid combinations
// (Example22 off (2,2), negative ReductionLemma index) throw
// std::invalid_argument.
CheckReport run_check(CheckKind kind, const SeedParams& p, long long arg, SequenceCache& cache,
                      const CheckOptions& opts = {});

// The classical rank-2 exchange recursion over exact rationals, from
// y_1 = a, y_2 = b. Returns nullopt when a zero intermediate makes the
// sample point unusable (division by zero).
std::optional<Rational> commutative_oracle_value(long long k, const SeedParams& p,
                                                 const Rational& a, const Rational& b);

// Whether a failure of this check should fail a run (Positivity is asserted
// only for the three parameter pairs with verified positivity; PeriodScan is
// always observational).
bool is_asserted(CheckKind kind, const SeedParams& p);

struct SweepOptions {
  long long k_min = 0;
  long long k_max = 0;
  std::vector<CheckKind> kinds;  // empty = all kinds
  std::size_t sample_points = 5;
  std::uint64_t sample_seed = 0;
  unsigned threads = 1;
};

// Runs every requested check on every valid index in range. Reports come back
// ordered by (kind, index) regardless of execution order; failures and skips
// never abort the sweep.
std::vector<CheckReport> sweep(const SeedParams& p, SequenceCache& cache, const SweepOptions& o);

// One stable-order record per check:
// kind r1 r2 index passed residual_terms elapsed_ms (tab separated, passed is
// 1/0/-). elapsed_ms prints as 0 unless with_timing is set, keeping default
// output byte-reproducible.
std::string serialize_report(const CheckReport& r, bool with_timing = false);

}  // namespace ncluster
