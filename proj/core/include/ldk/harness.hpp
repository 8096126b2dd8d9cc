#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ldk/rewrite.hpp"

namespace ldk {

struct GenSpec {
  std::vector<std::string> atoms{"X"};
  SystemId system = SystemId::Full;
  std::size_t size_bound = 8;
  Context context = default_context();
  std::optional<Formula> type_filter;
  /// Lambda binders and the free side of injections are annotated from this
  /// list. Empty means `annotation_universe(atoms, system, 1)`.
  std::vector<Formula> annotations;
  /// Reductio binders are annotated from this list. Empty means
  /// `annotation_universe(atoms, system, 3)`.
  std::vector<Formula> delta_annotations;

  static Context default_context();
};

/// All formulas of the system over `atoms` and Bot with at most `max_size` nodes.
std::vector<Formula> annotation_universe(const std::vector<std::string>& atoms, SystemId system,
                                         std::size_t max_size);

struct Typed {
  Context context;
  Term term;
  Formula type;
};

/// Every well-typed term with at most `size_bound` constructors, once up to
/// α, by increasing size. Terms are built by typing rules, so no candidate is
/// ever rejected after construction. Binders get canonical names (u for
/// lambdas, k for reductios, v for case branches) fresh for the enclosing scope.
std::vector<Typed> enumerate_terms(const GenSpec& spec);
/// Same order as enumerate_terms, without holding the largest size in memory.
void for_each_term(const GenSpec& spec, const std::function<void(const Typed&)>& visit);

/// Hand-picked terms that exercise rules the bounded corpus is too small
/// to reach (commuting case over case, rho1 on case with several
/// occurrences of the reductio variable, overlapping rho4 and rho2).
std::vector<Typed> seeded_terms(SystemId system);

/// Reduction sequences from `t` of length `max_len`, or shorter when they end
/// in a normal form. Stops after `max_traces`; `truncated` is set if more existed.
std::vector<Trace> maximal_traces(const Context& gamma, const Term& t, const RuleSet& rules,
                                  std::size_t max_len, std::size_t max_traces, bool* truncated);

struct Failure {
  std::string input;
  std::string law;
  std::string witness;
};

struct Report {
  std::string suite;
  std::size_t cases_run = 0;
  std::vector<Failure> failures;
  /// Work skipped because a per-item cap was hit; reported separately from failures.
  std::size_t cap_hits = 0;
  /// Suite-specific counters (e.g. erasure cases seen, longest trace).
  std::vector<std::pair<std::string, std::size_t>> stats;
  std::chrono::duration<double> elapsed{0};

  bool passed() const { return failures.empty(); }
  std::size_t stat(const std::string& key) const;
};

nlohmann::json report_json(const Report& r, std::size_t max_failures = 50);

struct SuiteOptions {
  std::size_t size_bound = 8;
  /// Bounds for the substitution lemma: M and N respectively.
  std::size_t subst_bound_m = 6;
  std::size_t subst_bound_n = 4;
  std::size_t trace_len = 10;
  std::size_t traces_per_term = 64;
  std::size_t node_bound = kDefaultNodeBound;
  std::size_t threads = 0;  // 0 = hardware concurrency
  std::vector<std::string> atoms{"X"};
  /// Largest annotation on lambdas and injections, and on reductios.
  std::size_t lambda_annotation_size = 1;
  std::size_t delta_annotation_size = 3;
  /// Corpus system for the suites that are not tied to one (subject-reduction,
  /// the two termination suites, derived-rule-expansion). Defaults to full.
  std::optional<SystemId> system;
};

const std::vector<std::string>& suite_names();
/// Throws std::invalid_argument on an unknown suite name.
Report run_suite(const std::string& name, const SuiteOptions& opts);

/// Runs `work(i)` for i in [0, n) on a pool of threads. Results are indexed,
/// so the outcome does not depend on scheduling.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& work);

}  // namespace ldk
