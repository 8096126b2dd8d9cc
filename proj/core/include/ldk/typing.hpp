#pragma once

#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ldk/errors.hpp"
#include "ldk/formula.hpp"
#include "ldk/term.hpp"

namespace ldk {

/// Immutable set of declarations `x : A`.
class Context {
 public:
  Context() = default;
  /// Throws DuplicateBinding if a name is declared twice.
  static Context of(const std::vector<std::pair<Name, Formula>>& decls);
  static Context of(std::initializer_list<std::pair<Name, Formula>> decls) {
    return of(std::vector<std::pair<Name, Formula>>(decls));
  }

  /// Context with `x : a` added; an existing `x` is shadowed.
  Context extended(const Name& x, const Formula& a) const;
  const Formula* lookup(const Name& x) const;
  bool contains(const Name& x) const { return lookup(x) != nullptr; }
  NameSet names() const;
  std::size_t size() const { return decls_.size(); }
  const std::map<Name, Formula>& decls() const { return decls_; }

  std::string str() const;

  friend bool operator==(const Context&, const Context&) = default;

 private:
  std::map<Name, Formula> decls_;
};

enum class SystemId { Full, DisjFree, Small };

std::string_view system_name(SystemId s);
std::optional<SystemId> parse_system(std::string_view s);

/// The unique `A` with `gamma |- t : A`. Throws TypeError.
Formula infer(const Context& gamma, const Term& t);
std::optional<Formula> try_infer(const Context& gamma, const Term& t);

/// The `B` with `gamma | hole |- E : B`. Throws HoleTypeMismatch or TypeError.
Formula infer_ctx(const Context& gamma, const ElimContext& e, const Formula& hole);

/// Context in force at position `p` of `t` (binders on the path added).
Context context_at(const Context& gamma, const Term& t, const Position& p);

bool in_system(const Formula& f, SystemId s);
/// No constructor or annotation outside the system occurs in `t`.
bool in_system(const Term& t, SystemId s);

}  // namespace ldk
