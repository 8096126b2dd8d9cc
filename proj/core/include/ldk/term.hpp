#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "ldk/formula.hpp"

namespace ldk {

using Name = std::string;
using NameSet = std::set<Name>;

enum class TermKind { Var, Lam, App, Pair, Proj, Inj, Case, Delta };

/// Annotated proof term.
///
/// Children are stored in constructor-argument order, which is also the order
/// used by positions:
///
///   Lam   (0 body)           App  (0 fun, 1 arg)      Pair (0 fst, 1 snd)
///   Proj  (0 arg)            Inj  (0 arg)             Delta (0 body)
///   Case  (0 scrut, 1 left branch, 2 right branch)
///
/// `Delta(k, A, M)` is reductio ad absurdum: it proves `A` and binds `k : ~A`.
/// `Inj(i, A \/ B, M)` carries the full disjunction it introduces.
class Term {
 public:
  static Term var(Name x);
  static Term lam(Name x, Formula annot, Term body);
  static Term app(Term fun, Term arg);
  static Term pair(Term fst, Term snd);
  static Term proj(int index, Term arg);
  static Term inj(int index, Formula disjunction, Term arg);
  static Term case_of(Term scrut, Name x, Formula annot_x, Term left, Name y, Formula annot_y,
                      Term right);
  static Term delta(Name k, Formula annot, Term body);

  TermKind kind() const;
  /// Variable name, or the (first) binder of Lam/Delta/Case.
  const Name& name() const;
  /// Second binder of Case.
  const Name& name2() const;
  /// Binder annotation (Lam, Delta, first Case binder) or the disjunction of Inj.
  const Formula& annot() const;
  /// Annotation of the second Case binder.
  const Formula& annot2() const;
  /// 1 or 2 for Proj/Inj.
  int index() const;

  std::size_t arity() const;
  const Term& child(std::size_t i) const;
  std::span<const Term> children() const;

  /// Number of term constructors (annotations not counted).
  std::size_t size() const;

  bool is(TermKind k) const { return kind() == k; }
  /// Same node with child `i` replaced.
  Term with_child(std::size_t i, Term c) const;
  /// Binder introduced for child `i`, if any.
  const Name* binder_for_child(std::size_t i) const;

  /// Representation equality (binder names matter). Use `alpha_eq` for α-equivalence.
  friend bool operator==(const Term& a, const Term& b);
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }

  bool same_node(const Term& other) const { return node_ == other.node_; }

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// A path of child indices from the root.
struct Position {
  std::vector<std::size_t> path;

  Position() = default;
  Position(std::initializer_list<std::size_t> p) : path(p) {}
  explicit Position(std::vector<std::size_t> p) : path(std::move(p)) {}

  std::size_t depth() const { return path.size(); }
  bool is_root() const { return path.empty(); }
  Position child(std::size_t i) const;
  Position concat(const Position& rest) const;
  bool is_prefix_of(const Position& other) const;
  bool is_strict_prefix_of(const Position& other) const {
    return is_prefix_of(other) && depth() < other.depth();
  }
  bool disjoint(const Position& other) const {
    return !is_prefix_of(other) && !other.is_prefix_of(*this);
  }
  std::string str() const;

  friend bool operator==(const Position&, const Position&) = default;
  friend auto operator<=>(const Position&, const Position&) = default;
};

// ---------------------------------------------------------------------------
// Variables

NameSet free_vars(const Term& t);
bool occurs_free(const Term& t, const Name& x);
/// Positions of the free occurrences of `x`, left to right.
std::vector<Position> free_occurrences(const Term& t, const Name& x);

/// First of `hint`, `hint'`, `hint''`, ... not in `avoid`.
///
/// The number of primes tried first can be raised process-wide with
/// `set_fresh_base`, which the CLI wires to `LDK_SEED`.
Name fresh(const NameSet& avoid, const Name& hint);
void set_fresh_base(unsigned primes);
unsigned fresh_base();

// ---------------------------------------------------------------------------
// Substitution and α-equivalence

/// Capture-avoiding `[replacement/x]body`.
Term subst(const Term& body, const Name& x, const Term& replacement);

/// Canonical nameless rendering; equal keys iff the terms are α-equivalent.
std::string alpha_key(const Term& t);
bool alpha_eq(const Term& a, const Term& b);

// ---------------------------------------------------------------------------
// Positions

bool valid_position(const Term& t, const Position& p);
/// Throws std::out_of_range on an invalid position.
const Term& subterm_at(const Term& t, const Position& p);
Term replace_at(const Term& t, const Position& p, Term replacement);

// ---------------------------------------------------------------------------
// Elimination contexts

enum class ElimKind { AppHole, ProjHole, CaseHole };

/// A single elimination inference with a hole at its main premise:
/// `[.] N`, `p_i [.]`, or `case [.] of { x:A => P | y:B => Q }`.
class ElimContext {
 public:
  static ElimContext app_hole(Term arg);
  static ElimContext proj_hole(int index);
  static ElimContext case_hole(Name x, Formula annot_x, Term left, Name y, Formula annot_y,
                               Term right);

  /// Splits an elimination `E[M]` into `E` and `M`.
  static std::optional<std::pair<ElimContext, Term>> split(const Term& t);

  ElimKind kind() const { return kind_; }
  const Term& arg() const { return terms_[0]; }
  int index() const { return index_; }
  const Name& x() const { return x_; }
  const Name& y() const { return y_; }
  const Formula& annot_x() const { return annot_x_; }
  const Formula& annot_y() const { return annot_y_; }
  const Term& left() const { return terms_[0]; }
  const Term& right() const { return terms_[1]; }

  NameSet free_vars() const;

 private:
  ElimKind kind_ = ElimKind::ProjHole;
  int index_ = 1;
  Name x_, y_;
  Formula annot_x_, annot_y_;
  std::vector<Term> terms_;
};

Term fill(const ElimContext& e, const Term& m);
/// `[q/x]E`: substitution into the frame's subterms.
ElimContext subst_ctx(const ElimContext& e, const Name& x, const Term& q);

/// The identity `\x:Bot. x`.
Term identity_bot();
bool is_identity_bot(const Term& t);

}  // namespace ldk
