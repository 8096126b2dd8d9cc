#pragma once

#include <cstddef>
#include <memory>
#include <string>

namespace ldk {

enum class FormulaKind { Atom, Bottom, Imp, Conj, Disj };

/// Propositional formula over atoms, falsity, implication, conjunction and
/// disjunction. Negation is not a constructor: `neg(a)` builds `a -> Bot`.
///
/// Formulas are immutable and shared; copying is a reference-count bump.
class Formula {
 public:
  /// The default formula is falsity.
  Formula();

  static Formula atom(std::string name);
  static Formula bottom();
  static Formula imp(Formula lhs, Formula rhs);
  static Formula conj(Formula lhs, Formula rhs);
  static Formula disj(Formula lhs, Formula rhs);
  static Formula neg(Formula f) { return imp(std::move(f), bottom()); }

  FormulaKind kind() const;
  const std::string& name() const;
  const Formula& left() const;
  const Formula& right() const;

  bool is_bottom() const { return kind() == FormulaKind::Bottom; }
  bool is_atom() const { return kind() == FormulaKind::Atom; }
  bool is_imp() const { return kind() == FormulaKind::Imp; }
  bool is_conj() const { return kind() == FormulaKind::Conj; }
  bool is_disj() const { return kind() == FormulaKind::Disj; }
  /// True for `A -> Bot`.
  bool is_neg() const { return is_imp() && right().is_bottom(); }

  /// Number of connective and leaf nodes.
  std::size_t size() const;
  /// True when some subformula has the given kind.
  bool contains(FormulaKind k) const;

  /// Concrete syntax (`X`, `Bot`, `~A`, `A -> B`, `A /\ B`, `A \/ B`).
  std::string str() const;

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }
  /// Total structural order, used for deterministic containers.
  friend bool operator<(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

}  // namespace ldk
