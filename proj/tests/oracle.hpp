#pragma once

// Reference implementations used only by tests. They share no code with the
// library beyond the Term/Formula data types, so agreement is evidence.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ldk/formula.hpp"
#include "ldk/term.hpp"
#include "ldk/typing.hpp"

namespace oracle {

/// Nameless rendering: bound variables become de Bruijn indices, free ones
/// keep their names. Two terms are α-equal iff their renderings match.
std::string nameless(const ldk::Term& t);

/// Type checking by direct transcription of the typing rules.
std::optional<ldk::Formula> type_of(const std::map<std::string, ldk::Formula>& gamma,
                                    const ldk::Term& t);

std::optional<ldk::Formula> type_of(const ldk::Context& gamma, const ldk::Term& t);

/// All formulas over `atoms` and Bot with at most `max_size` nodes, using the
/// connectives of the given system.
std::vector<ldk::Formula> formulas(const std::vector<std::string>& atoms, ldk::SystemId s,
                                   std::size_t max_size);

struct NaiveSpec {
  ldk::SystemId system = ldk::SystemId::Full;
  std::size_t bound = 5;
  ldk::Context context;
  std::vector<ldk::Formula> lambda_annots;  // also the free side of injections
  std::vector<ldk::Formula> delta_annots;
  /// Candidates for the injected side of an injection. Empty means the
  /// injected term's own type, as computed by type_of; listing every formula
  /// up to the largest possible type size is exact but slow past size 4.
  std::vector<ldk::Formula> inj_annots;
  /// Candidates for case binders.
  std::vector<ldk::Formula> case_annots;
};

/// Generates every raw tree with at most `bound` nodes, keeps the ones the
/// reference checker accepts, and returns the number of α-classes per size.
std::map<std::size_t, std::size_t> naive_counts(const NaiveSpec& spec);

}  // namespace oracle
