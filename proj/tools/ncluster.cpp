// Command-line front end: compute y_k, run identity sweeps, print term
// statistics, evaluate expressions. Exit codes: 0 success, 1 check failure,
// 2 usage/parse error, 3 term cap exceeded.
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ncluster/errors.hpp"
#include "ncluster/sequence.hpp"
#include "ncluster/textio.hpp"
#include "ncluster/verifier.hpp"

using namespace ncluster;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitResource = 3;

std::string format_element(const Element& e, const std::string& format) {
  if (format == "latex") return print_latex(e) + "\n";
  if (format == "tsv") return encode_tsv(e);
  return print_canonical(e) + "\n";
}

std::vector<CheckKind> parse_checks(const std::vector<std::string>& names) {
  std::vector<CheckKind> kinds;
  for (const auto& name : names) {
    if (name == "all") return {};
    auto kind = check_kind_from_string(name);
    if (!kind) throw CLI::ValidationError("--checks", "unknown check kind '" + name + "'");
    kinds.push_back(*kind);
  }
  return kinds;
}

void apply_env_term_cap() {
  if (const char* env = std::getenv("NCLUSTER_TERM_CAP")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) set_term_cap(static_cast<std::size_t>(v));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact noncommutative cluster sequence engine"};
  app.require_subcommand(1);

  unsigned r1 = 1, r2 = 1;
  long long k = 0, k_min = 0, k_max = 0;
  std::size_t term_cap_flag = 0;
  std::size_t samples = 5;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string format = "text";
  bool pair = false;
  bool timings = false;
  std::vector<std::string> check_names{"all"};
  std::string expr_text;

  auto add_params = [&](CLI::App* cmd) {
    cmd->add_option("--r1", r1, "first exchange exponent (>= 1)")->required()->check(CLI::PositiveNumber);
    cmd->add_option("--r2", r2, "second exchange exponent (>= 1)")->required()->check(CLI::PositiveNumber);
    cmd->add_option("--term-cap", term_cap_flag, "override the term cap (default 1000000)");
  };

  CLI::App* compute = app.add_subcommand("compute", "print y_k (and x_k with --pair)");
  add_params(compute);
  compute->add_option("--k", k, "sequence index")->required();
  compute->add_option("--format", format, "text | latex | tsv")
      ->check(CLI::IsMember({"text", "latex", "tsv"}));
  compute->add_flag("--pair", pair, "also print x_k = z y_{k-1} (requires k >= 1)");

  CLI::App* verify = app.add_subcommand("verify", "run identity checks over an index range");
  add_params(verify);
  verify->add_option("--kmin", k_min, "lowest index")->required();
  verify->add_option("--kmax", k_max, "highest index")->required();
  verify->add_option("--checks", check_names, "check kinds (or 'all')")->delimiter(',');
  verify->add_option("--samples", samples, "abelianization sample points per index");
  verify->add_option("--seed", seed, "sample seed");
  verify->add_option("--threads", threads, "worker threads for independent checks")
      ->check(CLI::PositiveNumber);
  verify->add_option("--format", format, "report | text")->check(CLI::IsMember({"report", "text"}));
  verify->add_flag("--timings", timings, "include real elapsed times in records");

  CLI::App* stats = app.add_subcommand("stats", "term-count and coefficient statistics per index");
  add_params(stats);
  auto* stats_k = stats->add_option("--k", k, "single index");
  auto* stats_kmin = stats->add_option("--kmin", k_min, "lowest index");
  auto* stats_kmax = stats->add_option("--kmax", k_max, "highest index");
  stats_kmin->needs(stats_kmax);
  stats_k->excludes(stats_kmin);

  CLI::App* eval = app.add_subcommand("eval", "evaluate an expression and print it canonically");
  eval->add_option("expr", expr_text, "expression over y1, y2, z")->required();
  eval->add_option("--format", format, "text | latex | tsv")
      ->check(CLI::IsMember({"text", "latex", "tsv"}));
  eval->add_option("--term-cap", term_cap_flag, "override the term cap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  apply_env_term_cap();
  if (term_cap_flag > 0) set_term_cap(term_cap_flag);

  try {
    if (compute->parsed()) {
      SequenceCache cache(SeedParams{r1, r2});
      if (pair) {
        if (format == "tsv") {
          std::cerr << "--pair is not available with --format tsv\n";
          return kExitUsage;
        }
        if (k < 1) {
          std::cerr << "--pair requires k >= 1\n";
          return kExitUsage;
        }
        auto [x, y] = cache.pair(k);
        std::cout << "x: " << format_element(x, format);
        std::cout << "y: " << format_element(*y, format);
      } else {
        std::cout << format_element(*cache.get(k), format);
      }
      return kExitOk;
    }

    if (verify->parsed()) {
      SeedParams p{r1, r2};
      SequenceCache cache(p);
      SweepOptions opts;
      opts.k_min = k_min;
      opts.k_max = k_max;
      opts.kinds = parse_checks(check_names);
      opts.sample_points = samples;
      opts.sample_seed = seed;
      opts.threads = threads;
      auto reports = sweep(p, cache, opts);
      bool failed = false;
      for (const auto& rep : reports) {
        if (format == "text") {
          const char* tag = rep.passed() ? "PASS" : rep.skipped() ? "SKIP" : (is_asserted(rep.kind, p) ? "FAIL" : "NOT-OBSERVED");
          std::cout << tag << ' ' << to_string(rep.kind) << " k=" << rep.index;
          if (!rep.detail.empty()) std::cout << "  (" << rep.detail << ')';
          std::cout << '\n';
        } else {
          std::cout << serialize_report(rep, timings) << '\n';
        }
        if (rep.status == CheckStatus::Fail && is_asserted(rep.kind, p)) {
          failed = true;
          std::cerr << "FAIL " << to_string(rep.kind) << " r1=" << p.r1 << " r2=" << p.r2
                    << " k=" << rep.index << ": " << rep.detail << '\n';
        }
      }
      return failed ? kExitCheckFailure : kExitOk;
    }

    if (stats->parsed()) {
      if (*stats_k) {
        k_min = k;
        k_max = k;
      } else if (!*stats_kmin) {
        std::cerr << "stats requires --k or --kmin/--kmax\n";
        return kExitUsage;
      }
      if (k_min > k_max) {
        std::cerr << "empty index range\n";
        return kExitUsage;
      }
      SequenceCache cache(SeedParams{r1, r2});
      for (long long i = k_min; i <= k_max; ++i) {
        auto y = cache.get_if_available(i);
        if (!y) {
          std::cout << i << "\t-\t-\t-\t-\n";
          continue;
        }
        CoefficientStats s = y->stats();
        std::cout << i << '\t' << s.term_count << '\t' << s.max_word_length << '\t'
                  << (s.all_integer ? 1 : 0) << '\t' << (s.all_positive ? 1 : 0) << '\n';
      }
      return kExitOk;
    }

    // eval
    std::cout << format_element(evaluate_expression(expr_text), format);
    return kExitOk;
  } catch (const resource_error& e) {
    std::cerr << "resource limit: " << e.what() << '\n';
    return kExitResource;
  } catch (const parse_error& e) {
    std::cerr << "parse error at " << e.position() << ": " << e.what() << '\n';
    return kExitUsage;
  } catch (const eval_error& e) {
    std::cerr << "evaluation error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}
