#include "ldk/conjfree.hpp"

#include <algorithm>

namespace ldk {

namespace {

struct Translated {
  Term term;
  Formula type;
};

Translated cf(const Context& g, const Term& t) {
  switch (t.kind()) {
    case TermKind::Var: {
      const Formula* a = g.lookup(t.name());
      if (!a) throw TypeError({}, "unbound variable " + t.name());
      return {t, *a};
    }
    case TermKind::Lam: {
      auto b = cf(g.extended(t.name(), t.annot()), t.child(0));
      return {Term::lam(t.name(), cf_formula(t.annot()), b.term), Formula::imp(t.annot(), b.type)};
    }
    case TermKind::App: {
      auto f = cf(g, t.child(0));
      auto a = cf(g, t.child(1));
      if (!f.type.is_imp() || f.type.left() != a.type) throw TypeError({}, "ill-typed application");
      return {Term::app(f.term, a.term), f.type.right()};
    }
    case TermKind::Pair: {
      auto a = cf(g, t.child(0));
      auto b = cf(g, t.child(1));
      NameSet avoid = free_vars(a.term);
      for (const auto& n : free_vars(b.term)) avoid.insert(n);
      Name f = fresh(avoid, "f");
      Formula ft = Formula::imp(cf_formula(a.type), Formula::neg(cf_formula(b.type)));
      return {Term::lam(f, ft, Term::app(Term::app(Term::var(f), a.term), b.term)),
              Formula::conj(a.type, b.type)};
    }
    case TermKind::Proj: {
      auto a = cf(g, t.child(0));
      if (!a.type.is_conj()) throw TypeError({}, "ill-typed projection");
      Formula ai = t.index() == 1 ? a.type.left() : a.type.right();
      Formula a1 = cf_formula(a.type.left());
      Formula a2 = cf_formula(a.type.right());
      if (ai.is_bottom()) {
        Name x1 = fresh({}, "x");
        Name x2 = fresh({x1}, "x");
        Term sel = Term::lam(x1, a1, Term::lam(x2, a2, Term::var(t.index() == 1 ? x1 : x2)));
        return {Term::app(a.term, sel), ai};
      }
      Name k = fresh(free_vars(a.term), "k");
      Name x1 = fresh({k}, "x");
      Name x2 = fresh({k, x1}, "x");
      Term sel = Term::lam(
          x1, a1, Term::lam(x2, a2, Term::app(Term::var(k), Term::var(t.index() == 1 ? x1 : x2))));
      return {Term::delta(k, cf_formula(ai), Term::app(a.term, sel)), ai};
    }
    case TermKind::Inj:
    case TermKind::Case: throw DisjPresent("disjunction constructor in " + std::string("term"));
    case TermKind::Delta: {
      auto b = cf(g.extended(t.name(), Formula::neg(t.annot())), t.child(0));
      return {Term::delta(t.name(), cf_formula(t.annot()), b.term), t.annot()};
    }
  }
  throw TypeError({}, "unknown term");
}

using Moves = std::vector<Move>;

std::vector<Position> occurrence_moves(const Term& body, const Name& k, const Position& prefix) {
  std::vector<Position> out;
  for (const auto& occ : free_occurrences(body, k)) out.push_back(prefix.concat(occ).child(0));
  return out;
}

Moves concat(Moves a, const Moves& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::vector<std::size_t> tail_from(const Position& p, std::size_t depth) {
  return {p.path.begin() + static_cast<std::ptrdiff_t>(depth), p.path.end()};
}

// Finds a path of `rules` steps from `from` to `to` and packages it.
Trace close_with(const Context& gamma, const Term& from, const Term& to, const RuleSet& rules,
                 const char* what) {
  auto path = find_path(gamma, from, to, rules);
  if (!path) throw CannotClose(std::string(what) + " cannot be postponed");
  return replay(gamma, from, *path);
}

void check_chain(const Step& first, const Step& second, RuleId expected) {
  if (first.rule != expected)
    throw NotChained("first step is " + std::string(rule_name(first.rule)));
  if (second.rule == expected)
    throw NotChained("second step has the postponed rule " + std::string(rule_name(expected)));
  if (!alpha_eq(first.after, second.before)) throw NotChained("steps do not compose");
}

}  // namespace

Formula cf_formula(const Formula& a) {
  switch (a.kind()) {
    case FormulaKind::Atom:
    case FormulaKind::Bottom: return a;
    case FormulaKind::Imp: return Formula::imp(cf_formula(a.left()), cf_formula(a.right()));
    case FormulaKind::Conj:
      return Formula::neg(Formula::imp(cf_formula(a.left()), Formula::neg(cf_formula(a.right()))));
    case FormulaKind::Disj: throw DisjPresent("disjunction in " + a.str());
  }
  return a;
}

Context cf_context(const Context& gamma) {
  Context out;
  for (const auto& [x, a] : gamma.decls()) out = out.extended(x, cf_formula(a));
  return out;
}

Term cf_term(const Context& gamma, const Term& m) {
  infer(gamma, m);
  return cf(gamma, m).term;
}

Position cf_position(const Context& gamma, const Term& m, const Position& p) {
  Position out;
  const Term* cur = &m;
  Context g = gamma;
  for (auto i : p.path) {
    if (i >= cur->arity()) throw std::out_of_range("invalid position " + p.str());
    if (cur->is(TermKind::Pair)) {
      if (i == 0)
        out.path.insert(out.path.end(), {0, 0, 1});
      else
        out.path.insert(out.path.end(), {0, 1});
    } else if (cur->is(TermKind::Proj)) {
      if (infer(g, *cur).is_bottom())
        out.path.push_back(0);
      else
        out.path.insert(out.path.end(), {0, 0});
    } else if (cur->is(TermKind::Inj) || cur->is(TermKind::Case)) {
      throw DisjPresent("disjunction constructor on the path " + p.str());
    } else {
      out.path.push_back(i);
    }
    g = context_at(g, *cur, Position{i});
    cur = &cur->child(i);
  }
  return out;
}

RuleSet small_with_rho1bot() { return RuleSet::system(SystemId::Small) | RuleSet{RuleId::Rho1BotImp}; }
RuleSet small_with_rho3() { return RuleSet::system(SystemId::Small) | RuleSet{RuleId::Rho3}; }

SimStepResult simulate_step_cf(const Context& gamma, const Step& step) {
  const Term& m = step.before;
  const Position& p = step.position;
  Term n = contract(gamma, m, p, step.rule);
  Context g = context_at(gamma, m, p);
  const Term& s = subterm_at(m, p);
  bool bot = infer(g, s).is_bottom();

  Moves local;
  Moves resid;
  int item = 1;
  switch (step.rule) {
    case RuleId::BetaImp:
    case RuleId::Rho1Imp:
    case RuleId::Rho1BotImp:
    case RuleId::Rho2:
      local = {{step.rule, {}}};
      break;
    case RuleId::Rho1BotConj:
      local = {{RuleId::Rho1BotImp, {}}};
      break;
    case RuleId::BetaConj:
      if (bot) {
        local = {{RuleId::BetaImp, {}}, {RuleId::BetaImp, {0}}, {RuleId::BetaImp, {}}};
      } else {
        local = {{RuleId::BetaImp, {0}},
                 {RuleId::BetaImp, {0, 0}},
                 {RuleId::BetaImp, {0}},
                 {RuleId::Rho2, {}}};
      }
      break;
    case RuleId::Rho1Conj: {
      item = 2;
      if (bot) {
        local = {{RuleId::Rho1Imp, {}}};
        break;
      }
      local = {{RuleId::Rho1BotImp, {0}}};
      const Term& d = s.child(0);
      Term body = cf_term(g.extended(d.name(), Formula::neg(d.annot())), d.child(0));
      for (const auto& at : occurrence_moves(body, d.name(), Position{0}))
        resid.push_back({RuleId::Rho4, at});
      break;
    }
    default:
      throw NotARedex(std::string(rule_name(step.rule)) +
                      " is not a rule of the disjunction-free system");
  }

  Context tg = cf_context(gamma);
  Position at = cf_position(gamma, m, p);
  SimStepResult out(cf_term(gamma, m), cf_term(gamma, n));
  out.item = item;
  append_replayed(tg, out.target, shifted(local, at));
  append_replayed(tg, out.residual, shifted(resid, at));
  if (!alpha_eq(out.target.end(), out.residual.end()))
    throw CannotClose("image of " + std::string(rule_name(step.rule)) + " at " + p.str() +
                      " does not reach the translated contractum");
  return out;
}

Trace expand_rho1bot(const Context& gamma, const Step& step) {
  RuleId plain;
  switch (step.rule) {
    case RuleId::Rho1BotImp: plain = RuleId::Rho1Imp; break;
    case RuleId::Rho1BotConj: plain = RuleId::Rho1Conj; break;
    case RuleId::Rho1BotDisj: plain = RuleId::Rho1Disj; break;
    default: throw NotARedex("not a rho1bot step");
  }
  const Term& d = subterm_at(step.before, step.position).child(0);
  Moves moves{{plain, step.position}, {RuleId::Rho3, step.position}};
  for (const auto& at : occurrence_moves(d.child(0), d.name(), step.position))
    moves.push_back({RuleId::BetaImp, at});
  Trace t = replay(gamma, step.before, moves);
  if (!alpha_eq(t.end(), step.after))
    throw CannotClose("expansion of " + std::string(rule_name(step.rule)) + " at " +
                      step.position.str() + " misses the contractum");
  return t;
}

SimCertificate simulate_sequence_cf(const Context& gamma, const Trace& s) {
  Context tg = cf_context(gamma);
  auto translate = [&](const Term& t) { return cf_term(gamma, t); };
  SimCertificate cert = tile_sequence(tg, s, translate,
                                      [&](const Step& st) { return simulate_step_cf(gamma, st); });
  Trace expanded(cert.target.start);
  for (const Step& st : cert.target.steps) {
    Step here = make_step(tg, expanded.end(), st.position, st.rule);
    if (here.rule == RuleId::Rho1BotImp)
      append_replayed(tg, expanded, moves_of(expand_rho1bot(tg, here)));
    else
      expanded.steps.push_back(here);
  }
  cert.target = expanded;
  cert.ok = check_certificate(gamma, tg, cert, RuleSet::system(SystemId::DisjFree),
                              small_with_rho3(), translate, &cert.problem);
  return cert;
}

bool is_iota_step(const Step& s) {
  return s.rule == RuleId::BetaImp && is_identity_bot(subterm_at(s.before, s.position).child(0));
}

Postponed postpone_rho3(const Context& gamma, const Step& first, const Step& second) {
  check_chain(first, second, RuleId::Rho3);
  const Term& u = first.before;
  const Position& q = first.position;
  const Position& p = second.position;
  RuleSet only_rho3{RuleId::Rho3};

  auto finish = [&](Step lead) {
    Trace trailing = close_with(gamma, lead.after, second.after, only_rho3, "rho3");
    return Postponed{std::move(lead), std::move(trailing)};
  };

  auto stuck = [&] {
    return CannotClose("rho3 at " + q.str() + " followed by " +
                       std::string(rule_name(second.rule)) + " at " + p.str() +
                       " cannot be postponed");
  };
  if (!q.is_prefix_of(p)) {
    try {
      return finish(make_step(gamma, u, p, second.rule));
    } catch (const NotARedex&) {
      throw stuck();  // e.g. a rho2 redex created above the reductio
    }
  }

  // The second step works inside [I/k]M; find the matching spot in M.
  Position inner = q.child(0).concat(Position(tail_from(p, q.depth())));
  const Term& d = subterm_at(u, q);
  try {
    Step lead = make_step(gamma, u, inner, second.rule);
    if (find_path(gamma, lead.after, second.after, only_rho3)) return finish(std::move(lead));
  } catch (const NotARedex&) {
  }
  // A beta_imp on I N where I replaced an occurrence of k: contract k N instead.
  if (second.rule == RuleId::BetaImp) {
    Position head = Position(tail_from(inner, q.depth() + 1)).child(0);
    auto occs = free_occurrences(d.child(0), d.name());
    if (std::find(occs.begin(), occs.end(), head) != occs.end())
      return finish(make_step(gamma, u, inner, RuleId::Kappa));
  }
  throw stuck();
}

Postponed postpone_kappa(const Context& gamma, const Step& first, const Step& second) {
  check_chain(first, second, RuleId::Kappa);
  const Term& u = first.before;
  const Position& q = first.position;
  const Position& p = second.position;
  RuleSet only_kappa{RuleId::Kappa};
  Position at = p;
  if (q.is_prefix_of(p)) at = q.child(1).concat(Position(tail_from(p, q.depth())));
  Step lead = [&] {
    try {
      return make_step(gamma, u, at, second.rule);
    } catch (const NotARedex&) {
      throw CannotClose("kappa at " + q.str() + " followed by " +
                        std::string(rule_name(second.rule)) + " at " + p.str() +
                        " cannot be postponed");
    }
  }();
  Trace trailing = close_with(gamma, lead.after, second.after, only_kappa, "kappa");
  return Postponed{std::move(lead), std::move(trailing)};
}

namespace {

// Bubbles every `rule` step to the end of `t`, then drops the tail.
Trace postpone_all(const Context& gamma, Trace t, RuleId rule, std::size_t& rounds,
                   std::size_t max_rounds) {
  while (true) {
    std::optional<std::size_t> at;
    for (std::size_t i = t.steps.size(); i-- > 1;) {
      if (t.steps[i - 1].rule == rule && t.steps[i].rule != rule) {
        at = i - 1;
        break;
      }
    }
    if (!at) break;
    if (++rounds > max_rounds) throw CannotClose("postponement did not finish within the round cap");
    const std::size_t i = *at;
    Postponed pp = rule == RuleId::Rho3 ? postpone_rho3(gamma, t.steps[i], t.steps[i + 1])
                                        : postpone_kappa(gamma, t.steps[i], t.steps[i + 1]);
    Moves moves;
    for (std::size_t j = 0; j < i; ++j) moves.push_back({t.steps[j].rule, t.steps[j].position});
    moves.push_back({pp.leading.rule, pp.leading.position});
    moves = concat(moves, moves_of(pp.trailing));
    for (std::size_t j = i + 2; j < t.steps.size(); ++j)
      moves.push_back({t.steps[j].rule, t.steps[j].position});
    t = replay(gamma, t.start, moves);
  }
  while (!t.steps.empty() && t.steps.back().rule == rule) t.steps.pop_back();
  return t;
}

}  // namespace

Purified purify_sequence(const Context& gamma, const Trace& s, std::size_t max_rounds) {
  Purified out(s.start);
  out.rho3 = s.count(RuleId::Rho3);
  out.iota = static_cast<std::size_t>(std::count_if(s.steps.begin(), s.steps.end(), is_iota_step));
  try {
    std::size_t rounds = 0;
    Trace t = postpone_all(gamma, s, RuleId::Rho3, rounds, max_rounds);
    t = postpone_all(gamma, t, RuleId::Kappa, rounds, max_rounds);
    out.trace = t;
  } catch (const CannotClose& e) {
    out.problem = e.what();
    return out;
  }
  std::string why;
  if (!trace_is_valid(gamma, out.trace, RuleSet::system(SystemId::Small), &why)) {
    out.problem = "purified trace invalid: " + why;
    return out;
  }
  if (out.trace.length() + out.rho3 + out.iota < s.length()) {
    out.problem = "purified length " + std::to_string(out.trace.length()) + " < " +
                  std::to_string(s.length()) + " - " + std::to_string(out.rho3) + " - " +
                  std::to_string(out.iota);
    return out;
  }
  out.ok = true;
  return out;
}

}  // namespace ldk
