#include "ncluster/verifier.hpp"

#include <algorithm>
#include <atomic>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "ncluster/errors.hpp"

namespace ncluster {

namespace {

struct KindName {
  CheckKind kind;
  std::string_view name;
};

constexpr KindName kKindNames[] = {
    {CheckKind::Recursion, "Recursion"},
    {CheckKind::Commutation, "Commutation"},
    {CheckKind::Recursion2, "Recursion2"},
    {CheckKind::ReductionLemma, "ReductionLemma"},
    {CheckKind::Presentation, "Presentation"},
    {CheckKind::HIdentities, "HIdentities"},
    {CheckKind::Example22, "Example22"},
    {CheckKind::Positivity, "Positivity"},
    {CheckKind::Integrality, "Integrality"},
    {CheckKind::SigmaReflection, "SigmaReflection"},
    {CheckKind::AbelianOracle, "AbelianOracle"},
    {CheckKind::PeriodScan, "PeriodScan"},
};

// h_r(w) = w^-1 + w^{r-1} on a unit word
Element h_of(unsigned r, const Word& w) {
  return Element::from_word(w.inverse()) + Element::from_word(w.pow(Int(r) - 1));
}

// deterministic per-(seed, params, index) stream, stable across platforms
std::uint64_t mix_seed(std::uint64_t seed, const SeedParams& p, long long k) {
  std::uint64_t h = seed * 0x9E3779B97F4A7C15ULL + 0x2545F4914F6CDD1DULL;
  h ^= static_cast<std::uint64_t>(k) * 0xBF58476D1CE4E5B9ULL;
  h ^= (static_cast<std::uint64_t>(p.r1) << 32) | p.r2;
  h ^= h >> 29;
  h *= 0x94D049BB133111EBULL;
  h ^= h >> 32;
  return h;
}

struct SmallRng {
  std::uint64_t state;
  std::uint64_t next() {  // splitmix64
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t x = state;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  }
  // uniform-ish in [1, 7]; bias is irrelevant here
  unsigned digit() { return static_cast<unsigned>(next() % 7) + 1; }
};

void set_residual(CheckReport& rep, const Element& residual, const std::string& label) {
  rep.residual_terms += residual.term_count();
  if (!residual.is_zero() && rep.status == CheckStatus::Pass) {
    rep.status = CheckStatus::Fail;
    rep.detail = label + ": residual has " + std::to_string(residual.term_count()) + " terms";
  }
}

void check_recursion(CheckReport& rep, const SeedParams& p, long long k, SequenceCache& cache) {
  auto prev = cache.get(k - 1);
  auto cur = cache.get(k);
  auto next = cache.get(k + 1);
  Element residual =
      *next * z_element() * *prev - Element::one() - cur->pow(r_of(k, p));
  set_residual(rep, residual, "y_{k+1} z y_{k-1} - 1 - y_k^{r_k}");
}

void check_commutation(CheckReport& rep, long long k, SequenceCache& cache) {
  auto cur = cache.get(k);
  auto next = cache.get(k + 1);
  Element residual = *next * z_element() * *cur - *cur * *next;
  set_residual(rep, residual, "y_{k+1} z y_k - y_k y_{k+1}");
}

void check_recursion2(CheckReport& rep, const SeedParams& p, long long k, SequenceCache& cache) {
  auto prev = cache.get(k - 1);
  auto cur = cache.get(k);
  auto next = cache.get(k + 1);
  Element residual = *prev * *next * z_element() - Element::one() -
                     (*cur * z_element()).pow(r_of(k, p));
  set_residual(rep, residual, "y_{k-1} y_{k+1} z - 1 - (y_k z)^{r_k}");
}

void check_reduction_lemma(CheckReport& rep, const SeedParams& p, long long m,
                           SequenceCache& cache) {
  auto y3 = cache.get(3);
  const Element y3z = *y3 * z_element();
  const Word y2z = Word::generator(Gen::y2) * z_word();

  Element lhs = Element::from_word(Word::generator(Gen::y1, m)) * y3z.pow(m);
  Element rhs = Element::one();
  Element right = Element::one();  // (y_3 z)^j
  for (long long j = 0; j < m; ++j) {
    if (j > 0) right = right * y3z;
    rhs += Element::from_word(Word::generator(Gen::y1, j) * y2z.pow(p.r2)) * right;
  }
  set_residual(rep, lhs - rhs, "y_1^m (y_3 z)^m - 1 - sum");
}

void check_presentation(CheckReport& rep, const SeedParams& p, SequenceCache& cache) {
  const Element z = z_element();
  for (int i = 0; i <= 2; ++i) {
    auto a = cache.get(i);
    auto b = cache.get(i + 1);
    Element residual = *a * *b - *b * z * *a;
    set_residual(rep, residual, "y_" + std::to_string(i) + " y_" + std::to_string(i + 1) +
                                    " - y_" + std::to_string(i + 1) + " z y_" + std::to_string(i));
  }
  for (int j = 1; j <= 2; ++j) {
    auto prev = cache.get(j - 1);
    auto cur = cache.get(j);
    auto next = cache.get(j + 1);
    unsigned r = r_of(j, p);
    set_residual(rep, *next * z * *prev - cur->pow(r) - Element::one(),
                 "y_" + std::to_string(j + 1) + " z y_" + std::to_string(j - 1) + " - y_" +
                     std::to_string(j) + "^r - 1");
    set_residual(rep, *prev * *next * z - (*cur * z).pow(r) - Element::one(),
                 "y_" + std::to_string(j - 1) + " y_" + std::to_string(j + 1) + " z - (y_" +
                     std::to_string(j) + " z)^r - 1");
  }
  auto y0 = cache.get(0);
  auto y3 = cache.get(3);
  Word lead = Word::generator(Gen::y2, Int(p.r2) - 1) * Word::generator(Gen::y1, Int(p.r1) - 1);
  Word tail = z_word() * (Word::generator(Gen::y1) * z_word()).pow(Int(p.r1) - 1) *
              (Word::generator(Gen::y2) * z_word()).pow(Int(p.r2) - 1);
  Element rhs = Element::from_word(lead) - Element::from_word(tail);
  Element lhs = *y3 * z * *y0 - z * *y0 * *y3 * z;
  set_residual(rep, lhs - rhs, "y_3 z y_0 - z y_0 y_3 z - (y_2^{r_2-1} y_1^{r_1-1} - z (y_1 z)^{r_1-1} (y_2 z)^{r_2-1})");
}

void check_h_identities(CheckReport& rep, const SeedParams& p, SequenceCache& cache) {
  auto y0 = cache.get(0);
  auto y3 = cache.get(3);
  const Element z = z_element();
  const Word y1w = Word::generator(Gen::y1);
  const Word y2w = Word::generator(Gen::y2);
  set_residual(rep, *y0 * *y3 * z - h_of(p.r1, y1w * z_word()) * h_of(p.r2, y2w * z_word()),
               "y_0 y_3 z - h_{r_1}(y_1 z) h_{r_2}(y_2 z)");
  set_residual(rep, *y3 * z * *y0 - h_of(p.r2, y2w) * h_of(p.r1, y1w),
               "y_3 z y_0 - h_{r_2}(y_2) h_{r_1}(y_1)");
}

void check_example22(CheckReport& rep, SequenceCache& cache) {
  const Element z = z_element();
  auto y0 = cache.get(0);
  auto y1 = cache.get(1);
  auto y2 = cache.get(2);
  auto y3 = cache.get(3);
  auto y4 = cache.get(4);
  Element lhs = *y4 * z;
  Element rhs = z * *y0 * (*y3 * z).pow(2) -
                (z * *y1 * z * *y2 * z * *y3 * z + z * *y2 * z);
  set_residual(rep, lhs - rhs, "y_4 z - (z y_0 (y_3 z)^2 - (z y_1 z y_2 z y_3 z + z y_2 z))");
}

void check_coefficients(CheckReport& rep, CheckKind kind, long long k, SequenceCache& cache) {
  auto y = cache.get(k);
  CoefficientStats s = y->stats();
  bool ok = kind == CheckKind::Positivity ? s.all_positive : s.all_integer;
  if (!ok) {
    rep.status = CheckStatus::Fail;
    for (const auto& [w, c] : y->terms()) {
      bool bad = kind == CheckKind::Positivity ? c <= 0 : !is_integer(c);
      if (bad) {
        std::ostringstream os;
        os << "counterexample at k=" << k << ": word " << w.str() << " has coefficient " << c;
        rep.detail = os.str();
        break;
      }
    }
  } else {
    rep.detail = "terms=" + std::to_string(s.term_count);
  }
}

void check_sigma_reflection(CheckReport& rep, const SeedParams& p, long long k,
                            SequenceCache& cache, SequenceCache* shared_swapped) {
  std::optional<SequenceCache> local;
  SequenceCache* sw = shared_swapped;
  if (!sw) {
    local.emplace(swapped(p));
    sw = &*local;
  }
  auto yk = cache.get(k);
  auto mirrored = sw->get(3 - k);
  set_residual(rep, yk->sigma() - *mirrored, "sigma(y_k | r1,r2) - y_{3-k} | r2,r1");
}

void check_abelian_oracle(CheckReport& rep, const SeedParams& p, long long k,
                          SequenceCache& cache, const CheckOptions& opts) {
  auto y = cache.get(k);
  SmallRng rng{mix_seed(opts.sample_seed, p, k)};
  std::size_t mismatches = 0;
  for (std::size_t s = 0; s < opts.sample_points; ++s) {
    Rational a, b;
    std::optional<Rational> expected;
    for (int attempt = 0; attempt < 64 && !expected; ++attempt) {
      a = Rational(Int(rng.digit()), Int(rng.digit()));
      b = Rational(Int(rng.digit()), Int(rng.digit()));
      expected = commutative_oracle_value(k, p, a, b);
    }
    if (!expected) {
      rep.status = CheckStatus::Fail;
      rep.detail = "no usable sample point";
      return;
    }
    Rational got = y->abelian_eval(a, b);
    if (got != *expected) {
      ++mismatches;
      if (rep.detail.empty()) {
        std::ostringstream os;
        os << "mismatch at k=" << k << ", (a,b)=(" << a << "," << b << "): engine " << got
           << " vs oracle " << *expected;
        rep.detail = os.str();
      }
    }
  }
  rep.residual_terms = mismatches;
  if (mismatches) rep.status = CheckStatus::Fail;
}

void check_period(CheckReport& rep, long long k, SequenceCache& cache) {
  auto a = cache.get(k);
  auto b = cache.get(k + 5);
  bool equal = *a == *b;
  rep.status = equal ? CheckStatus::Pass : CheckStatus::Fail;
  rep.detail = equal ? "y_{k+5} == y_k observed" : "y_{k+5} != y_k";
}

}  // namespace

std::string_view to_string(CheckKind kind) {
  for (const auto& kn : kKindNames)
    if (kn.kind == kind) return kn.name;
  return "?";
}

std::optional<CheckKind> check_kind_from_string(std::string_view name) {
  for (const auto& kn : kKindNames)
    if (kn.name == name) return kn.kind;
  return std::nullopt;
}

bool is_asserted(CheckKind kind, const SeedParams& p) {
  switch (kind) {
    case CheckKind::PeriodScan:
      return false;
    case CheckKind::Positivity:
      return (p.r1 == 2 && p.r2 == 2) || (p.r1 == 4 && p.r2 == 1) || (p.r1 == 1 && p.r2 == 4);
    default:
      return true;
  }
}

std::optional<Rational> commutative_oracle_value(long long k, const SeedParams& p,
                                                 const Rational& a, const Rational& b) {
  if (a == 0 || b == 0) return std::nullopt;
  if (k == 1) return a;
  if (k == 2) return b;
  if (k > 2) {
    Rational prev = a, cur = b;
    for (long long idx = 2; idx < k; ++idx) {
      if (prev == 0) return std::nullopt;
      Rational next = (Rational(1) + rational_pow(cur, Int(r_of(idx, p)))) / prev;
      prev = cur;
      cur = next;
    }
    return cur;
  }
  Rational low = a, high = b;  // y_idx, y_{idx+1}
  for (long long idx = 1; idx > k; --idx) {
    if (high == 0) return std::nullopt;
    Rational lower = (Rational(1) + rational_pow(low, Int(r_of(idx, p)))) / high;
    high = low;
    low = lower;
  }
  return low;
}

CheckReport run_check(CheckKind kind, const SeedParams& p, long long arg, SequenceCache& cache,
                      const CheckOptions& opts) {
  if (kind == CheckKind::Example22 && !(p.r1 == 2 && p.r2 == 2))
    throw std::invalid_argument("Example22 requires (r1, r2) = (2, 2)");
  if (kind == CheckKind::ReductionLemma && arg < 0)
    throw std::invalid_argument("ReductionLemma requires a nonnegative index");

  CheckReport rep;
  rep.kind = kind;
  rep.params = p;
  rep.index = arg;
  auto t0 = std::chrono::steady_clock::now();
  try {
    switch (kind) {
      case CheckKind::Recursion: check_recursion(rep, p, arg, cache); break;
      case CheckKind::Commutation: check_commutation(rep, arg, cache); break;
      case CheckKind::Recursion2: check_recursion2(rep, p, arg, cache); break;
      case CheckKind::ReductionLemma: check_reduction_lemma(rep, p, arg, cache); break;
      case CheckKind::Presentation: check_presentation(rep, p, cache); break;
      case CheckKind::HIdentities: check_h_identities(rep, p, cache); break;
      case CheckKind::Example22: check_example22(rep, cache); break;
      case CheckKind::Positivity:
      case CheckKind::Integrality: check_coefficients(rep, kind, arg, cache); break;
      case CheckKind::SigmaReflection:
        check_sigma_reflection(rep, p, arg, cache, opts.swapped_cache);
        break;
      case CheckKind::AbelianOracle: check_abelian_oracle(rep, p, arg, cache, opts); break;
      case CheckKind::PeriodScan: check_period(rep, arg, cache); break;
    }
  } catch (const resource_error& e) {
    rep.status = CheckStatus::Skip;
    rep.residual_terms = 0;
    rep.detail = e.what();
  }
  rep.elapsed = std::chrono::duration_cast<std::chrono::microseconds>(
      std::chrono::steady_clock::now() - t0);
  return rep;
}

std::vector<CheckReport> sweep(const SeedParams& p, SequenceCache& cache, const SweepOptions& o) {
  if (o.k_min > o.k_max) throw std::invalid_argument("sweep: k_min > k_max");

  std::vector<CheckKind> kinds(o.kinds.begin(), o.kinds.end());
  if (kinds.empty()) kinds.assign(std::begin(kAllCheckKinds), std::end(kAllCheckKinds));
  std::sort(kinds.begin(), kinds.end());
  kinds.erase(std::unique(kinds.begin(), kinds.end()), kinds.end());

  // warm the cache sequentially so parallel checks mostly read
  for (long long k = o.k_min - 1; k <= o.k_max + 1; ++k) cache.get_if_available(k);

  bool wants_sigma = std::find(kinds.begin(), kinds.end(), CheckKind::SigmaReflection) != kinds.end();
  std::optional<SequenceCache> swapped_cache;
  if (wants_sigma) {
    swapped_cache.emplace(swapped(p));
    for (long long k = 3 - o.k_max; k <= 3 - o.k_min; ++k) swapped_cache->get_if_available(k);
  }

  struct Task {
    CheckKind kind;
    long long index;
  };
  std::vector<Task> tasks;
  for (CheckKind kind : kinds) {
    switch (kind) {
      case CheckKind::Presentation:
      case CheckKind::HIdentities:
        tasks.push_back({kind, 0});
        break;
      case CheckKind::Example22:
        if (p.r1 == 2 && p.r2 == 2) tasks.push_back({kind, 0});
        break;
      case CheckKind::ReductionLemma:
        for (long long m = std::max<long long>(0, o.k_min); m <= o.k_max; ++m)
          tasks.push_back({kind, m});
        break;
      default:
        for (long long k = o.k_min; k <= o.k_max; ++k) tasks.push_back({kind, k});
        break;
    }
  }

  CheckOptions copts;
  copts.sample_points = o.sample_points;
  copts.sample_seed = o.sample_seed;
  copts.swapped_cache = swapped_cache ? &*swapped_cache : nullptr;

  std::vector<CheckReport> reports(tasks.size());
  auto run_task = [&](std::size_t i) {
    try {
      reports[i] = run_check(tasks[i].kind, p, tasks[i].index, cache, copts);
    } catch (const std::exception& e) {
      reports[i].kind = tasks[i].kind;
      reports[i].params = p;
      reports[i].index = tasks[i].index;
      reports[i].status = CheckStatus::Fail;
      reports[i].detail = e.what();
    }
  };

  unsigned threads = std::max(1u, o.threads);
  if (threads == 1 || tasks.size() <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) run_task(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1))
          run_task(i);
      });
    for (auto& th : pool) th.join();
  }
  return reports;
}

std::string serialize_report(const CheckReport& r, bool with_timing) {
  std::ostringstream os;
  os << to_string(r.kind) << '\t' << r.params.r1 << '\t' << r.params.r2 << '\t' << r.index
     << '\t';
  switch (r.status) {
    case CheckStatus::Pass: os << '1'; break;
    case CheckStatus::Fail: os << '0'; break;
    case CheckStatus::Skip: os << '-'; break;
  }
  os << '\t' << r.residual_terms << '\t'
     << (with_timing ? r.elapsed.count() / 1000 : 0);
  return os.str();
}

}  // namespace ncluster
