#pragma once

#include <string>
#include <string_view>

#include "ldk/formula.hpp"
#include "ldk/term.hpp"
#include "ldk/typing.hpp"

namespace ldk {

// Concrete syntax.
//
//   formulas  X | Bot | ~A | A -> B | A /\ B | A \/ B | (A)
//             `->` binds loosest, then `\/`, then `/\`; all right-associative.
//   terms     x | \x:A. M | M N | <M, N> | p1 M | p2 M | in1[A \/ B] M | in2[A \/ B] M
//             | case M of { x:A => P | y:B => Q } | delta k:~A. M | (M)
//   contexts  x:A, y:B, ...
//
// Application is left-associative juxtaposition. A lambda or delta may appear
// unparenthesized as the last argument of an application.

std::string print(const Term& t);

Formula parse_formula(std::string_view src);
/// Parses a term; binders that shadow an enclosing binder or a name in
/// `context` are renamed to fresh primed variants.
Term parse_term(std::string_view src, const Context& context = {});
Context parse_context(std::string_view src);

}  // namespace ldk
