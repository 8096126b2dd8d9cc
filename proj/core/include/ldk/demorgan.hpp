#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ldk/rewrite.hpp"

namespace ldk {

// De Morgan translation: disjunction becomes negated conjunction of negations.
//   A \/ B  |->  ~(~A /\ ~B)
//   in_i M  |->  \w. p_i w M
//   case M of x => P | y => Q  |->  M <\x.P, \y.Q>                 (branches of type Bot)
//                              |->  delta k. M <\x.k P, \y.k Q>    (otherwise)

Formula dm_formula(const Formula& a);
Context dm_context(const Context& gamma);
/// Throws TypeError when `m` is ill-typed under `gamma`.
Term dm_term(const Context& gamma, const Term& m);
/// Position in `dm_term(gamma, m)` of the translation of the subterm at `p`.
Position dm_position(const Context& gamma, const Term& m, const Position& p);

/// A source step replayed in the image of a translation.
struct SimStepResult {
  /// Steps from the translated source term.
  Trace target;
  /// Rho4 steps from the translated contractum to `target.end()`; empty
  /// unless the image needs closing.
  Trace residual;
  int item = 1;

  SimStepResult(Term from, Term to) : target(std::move(from)), residual(std::move(to)) {}
};

/// Throws NotARedex for an invalid step and CannotClose when the replayed
/// image does not reach the translated contractum.
SimStepResult simulate_step(const Context& gamma, const Step& step);

struct Commutation {
  /// Zero or one step from the rho4 contractum.
  Trace transported;
  /// Rho4 steps from the other contractum to `transported.end()`.
  Trace closing;
};

/// Closes the peak formed by a rho4 step and another step from the same
/// term. Throws CannotClose when no rho4 path meets the two sides.
Commutation commute_rho4(const Context& gamma, const Term& u, const Step& rho4, const Step& r);

struct Tiled {
  /// Steps from the end of the chain.
  Trace transported;
  /// Rho4 steps from the end of the original steps to `transported.end()`.
  Trace chain;
};
/// Carries `steps` across the rho4 trace `chain`, both starting at the same term.
Tiled transport_across(const Context& gamma, const Trace& steps, const Trace& chain);

struct SimCertificate {
  Trace source;
  Trace target;
  Trace rho4;
  std::size_t m = 0;
  bool ok = false;
  /// First broken condition when `ok` is false.
  std::string problem;

  SimCertificate(Trace s, Term target_start)
      : source(std::move(s)), target(target_start), rho4(std::move(target_start)) {}
};

using TermMap = std::function<Term(const Term&)>;
using StepMap = std::function<SimStepResult(const Step&)>;

/// Builds a certificate by simulating each step and tiling the target
/// steps across the accumulated rho4 chain. Does not set `ok`.
SimCertificate tile_sequence(const Context& target_ctx, const Trace& s, const TermMap& translate,
                             const StepMap& simulate);

/// Translates a full-system reduction sequence to a disjunction-free one of
/// length at least `|s| - m`, m being the number of rho2 steps in `s`.
SimCertificate simulate_sequence(const Context& gamma, const Trace& s);

/// Rechecks every certificate condition by replay.
bool check_certificate(const Context& source_ctx, const Context& target_ctx,
                       const SimCertificate& c, const RuleSet& source_rules,
                       const RuleSet& target_rules, const TermMap& translate,
                       std::string* why = nullptr);

nlohmann::json trace_json(const Trace& t);
nlohmann::json certificate_json(const SimCertificate& c);

}  // namespace ldk
