#pragma once

#include <cstddef>
#include <string>

#include "ldk/demorgan.hpp"

namespace ldk {

// Conjunction translation on disjunction-free terms:
//   A /\ B    |->  ~(A -> ~B)
//   <M, N>    |->  \f. f M N
//   p_i M     |->  M (\x1 x2. x_i)                 (A_i = Bot)
//             |->  delta k. M (\x1 x2. k x_i)      (otherwise)

/// Throws DisjPresent on a disjunction.
Formula cf_formula(const Formula& a);
Context cf_context(const Context& gamma);
/// Throws DisjPresent or TypeError.
Term cf_term(const Context& gamma, const Term& m);
Position cf_position(const Context& gamma, const Term& m, const Position& p);

/// Image of one disjunction-free step in the small system extended with
/// rho1bot_imp. Item 2 is a rho1 step on a projection.
SimStepResult simulate_step_cf(const Context& gamma, const Step& step);

/// Replaces a rho1bot step by rho1, rho3 and one beta_imp per occurrence of
/// the reductio variable. The endpoint is α-equal to the step's.
Trace expand_rho1bot(const Context& gamma, const Step& step);

/// The rules of the small system plus rho1bot_imp, used before expansion.
RuleSet small_with_rho1bot();
/// The rules of the small system plus rho3.
RuleSet small_with_rho3();

/// Sequence translation into the small system plus rho3.
SimCertificate simulate_sequence_cf(const Context& gamma, const Trace& s);

struct Postponed {
  Step leading;
  /// Steps of the postponed rule from `leading.after`.
  Trace trailing;
};

/// Moves a rho3 step after the step that follows it. A beta_imp on an
/// identity created by the rho3 substitution becomes kappa on the variable.
Postponed postpone_rho3(const Context& gamma, const Step& first, const Step& second);
/// Moves a kappa step after the step that follows it.
Postponed postpone_kappa(const Context& gamma, const Step& first, const Step& second);

/// A beta_imp step whose redex is `(\x:Bot. x) N`.
bool is_iota_step(const Step& s);

struct Purified {
  Trace trace;
  std::size_t rho3 = 0;
  std::size_t iota = 0;
  bool ok = false;
  std::string problem;

  explicit Purified(Term start) : trace(std::move(start)) {}
};

/// Pushes every rho3 step and then every kappa step to the end of the trace
/// and drops them, leaving a small-system trace of length at least
/// `|s| - rho3 - iota`.
Purified purify_sequence(const Context& gamma, const Trace& s, std::size_t max_rounds = 20000);

}  // namespace ldk
