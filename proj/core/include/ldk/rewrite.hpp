#pragma once

#include <bitset>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ldk/errors.hpp"
#include "ldk/term.hpp"
#include "ldk/typing.hpp"

namespace ldk {

/// Reduction rule labels. The last four are auxiliary: they never belong to
/// a system rule set and are only used when requested explicitly.
enum class RuleId {
  BetaImp, BetaConj, BetaDisj,
  PiImp, PiConj, PiDisj,
  Rho1Imp, Rho1Conj, Rho1Disj,
  Rho1BotImp, Rho1BotConj, Rho1BotDisj,
  Rho2,
  Rho3, Rho4, Kappa, Iota,
};
inline constexpr std::size_t kRuleCount = 17;

/// ASCII label used in trace files, e.g. "beta_imp", "rho1bot_conj", "kappa".
std::string_view rule_name(RuleId r);
/// Accepts the ASCII labels and the Greek forms (β⊃, ρ1⊥∧, ρ₃, κ, ι, ...).
std::optional<RuleId> parse_rule(std::string_view s);
bool is_aux(RuleId r);

class RuleSet {
 public:
  RuleSet() = default;
  RuleSet(std::initializer_list<RuleId> rules) {
    for (auto r : rules) insert(r);
  }
  /// System rules of Full, DisjFree (no disjunction rules) or Small
  /// (implication rules and rho2 only).
  static RuleSet system(SystemId s);

  void insert(RuleId r) { bits_.set(static_cast<std::size_t>(r)); }
  bool contains(RuleId r) const { return bits_.test(static_cast<std::size_t>(r)); }
  RuleSet operator|(const RuleSet& o) const {
    RuleSet s;
    s.bits_ = bits_ | o.bits_;
    return s;
  }
  bool empty() const { return bits_.none(); }
  std::vector<RuleId> rules() const;
  friend bool operator==(const RuleSet&, const RuleSet&) = default;

 private:
  std::bitset<kRuleCount> bits_;
};

struct Redex {
  Position position;
  RuleId rule;
  friend bool operator==(const Redex&, const Redex&) = default;
};

struct Step {
  RuleId rule;
  Position position;
  Term before;
  Term after;
};

/// A reduction sequence with its start term; `length()` counts steps.
struct Trace {
  Term start;
  std::vector<Step> steps;

  explicit Trace(Term s) : start(std::move(s)) {}
  std::size_t length() const { return steps.size(); }
  const Term& end() const { return steps.empty() ? start : steps.back().after; }
  std::size_t count(RuleId r) const;
};

/// A (rule, position) pair detached from concrete terms; replayable.
struct Move {
  RuleId rule;
  Position position;
};

/// All redexes in leftmost-outermost order; at one position rules are listed in
/// `RuleId` order. Throws TypeError when `t` is ill-typed.
std::vector<Redex> redexes(const Context& gamma, const Term& t, const RuleSet& rules);

/// Contracts the redex at `pos` by `rule`. Throws NotARedex.
Term contract(const Context& gamma, const Term& t, const Position& pos, RuleId rule);
Step make_step(const Context& gamma, const Term& t, const Position& pos, RuleId rule);

/// Replays moves from `start`, contracting each in turn.
Trace replay(const Context& gamma, const Term& start, const std::vector<Move>& moves);
std::vector<Move> moves_of(const Trace& t);
/// Moves with `prefix` prepended to each position.
std::vector<Move> shifted(const std::vector<Move>& moves, const Position& prefix);

/// Appends `more` (which must start α-equal to `t.end()`) by replay.
void append_replayed(const Context& gamma, Trace& t, const std::vector<Move>& more);

/// Checks every step's rule is in `rules` and the step is a genuine
/// contraction chaining from the previous one (up to α).
bool trace_is_valid(const Context& gamma, const Trace& t, const RuleSet& rules,
                    std::string* why = nullptr);

enum class Strategy { LeftmostOutermost, LeftmostInnermost };

struct FuelExhausted : Error {
  explicit FuelExhausted(Trace partial)
      : Error("fuel exhausted after " + std::to_string(partial.length()) + " steps"),
        trace(std::move(partial)) {}
  Trace trace;
};

Trace normalize(const Context& gamma, const Term& t, const RuleSet& rules, Strategy strategy,
                std::size_t fuel);

enum class Verdict { ExhaustedAndAcyclic, ExhaustedWithCycle, BoundExceeded };
std::string_view verdict_name(Verdict v);

/// Reduction graph with nodes quotiented by α-equivalence.
struct ReductionGraph {
  struct Edge {
    std::size_t from;
    std::size_t to;
    RuleId rule;
    Position position;
  };
  std::vector<Term> nodes;
  std::vector<Edge> edges;
  Verdict verdict = Verdict::ExhaustedAndAcyclic;
  /// Node ids of a cycle when the verdict is ExhaustedWithCycle.
  std::vector<std::size_t> cycle;

  /// Number of steps in a longest path from the root; only meaningful
  /// for an acyclic exhausted graph.
  std::size_t longest_path() const;
  std::string to_dot() const;
};

inline constexpr std::size_t kDefaultNodeBound = 100000;

ReductionGraph reduction_graph(const Context& gamma, const Term& t, const RuleSet& rules,
                               std::size_t node_bound = kDefaultNodeBound);

/// Shortest path of `rules` steps from `from` to a term α-equal to `to`,
/// exploring at most `node_bound` terms.
std::optional<std::vector<Move>> find_path(const Context& gamma, const Term& from, const Term& to,
                                           const RuleSet& rules, std::size_t node_bound = 4096);

/// One JSON object per line: a `start` line (step 0) followed by one line per
/// step, with keys `pos`, `rule`, `step`, `term` in that order.
std::string trace_to_jsonl(const Trace& t);
/// Parses a trace file and replays it from its start line. The start term is
/// parsed against `gamma`.
Trace trace_from_jsonl(const Context& gamma, std::string_view text);

}  // namespace ldk
