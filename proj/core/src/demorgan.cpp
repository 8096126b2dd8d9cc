#include "ldk/demorgan.hpp"

#include <nlohmann/json.hpp>

#include "ldk/syntax.hpp"

namespace ldk {

namespace {

struct Translated {
  Term term;
  Formula type;
};

NameSet free_except(const Term& t, const Name& x) {
  NameSet s = free_vars(t);
  s.erase(x);
  return s;
}

Translated dm(const Context& g, const Term& t) {
  switch (t.kind()) {
    case TermKind::Var: {
      const Formula* a = g.lookup(t.name());
      if (!a) throw TypeError({}, "unbound variable " + t.name());
      return {t, *a};
    }
    case TermKind::Lam: {
      auto b = dm(g.extended(t.name(), t.annot()), t.child(0));
      return {Term::lam(t.name(), dm_formula(t.annot()), b.term), Formula::imp(t.annot(), b.type)};
    }
    case TermKind::App: {
      auto f = dm(g, t.child(0));
      auto a = dm(g, t.child(1));
      if (!f.type.is_imp() || f.type.left() != a.type) throw TypeError({}, "ill-typed application");
      return {Term::app(f.term, a.term), f.type.right()};
    }
    case TermKind::Pair: {
      auto a = dm(g, t.child(0));
      auto b = dm(g, t.child(1));
      return {Term::pair(a.term, b.term), Formula::conj(a.type, b.type)};
    }
    case TermKind::Proj: {
      auto a = dm(g, t.child(0));
      if (!a.type.is_conj()) throw TypeError({}, "ill-typed projection");
      return {Term::proj(t.index(), a.term), t.index() == 1 ? a.type.left() : a.type.right()};
    }
    case TermKind::Inj: {
      auto a = dm(g, t.child(0));
      const Formula& d = t.annot();
      Name w = fresh(free_vars(a.term), "w");
      Formula wt = Formula::conj(Formula::neg(dm_formula(d.left())), Formula::neg(dm_formula(d.right())));
      return {Term::lam(w, wt, Term::app(Term::proj(t.index(), Term::var(w)), a.term)), d};
    }
    case TermKind::Case: {
      auto m = dm(g, t.child(0));
      auto p = dm(g.extended(t.name(), t.annot()), t.child(1));
      auto q = dm(g.extended(t.name2(), t.annot2()), t.child(2));
      if (p.type != q.type) throw TypeError({}, "ill-typed case");
      Formula a = dm_formula(t.annot());
      Formula b = dm_formula(t.annot2());
      if (p.type.is_bottom()) {
        return {Term::app(m.term, Term::pair(Term::lam(t.name(), a, p.term),
                                             Term::lam(t.name2(), b, q.term))),
                p.type};
      }
      NameSet avoid = free_vars(m.term);
      for (const auto& n : free_except(p.term, t.name())) avoid.insert(n);
      for (const auto& n : free_except(q.term, t.name2())) avoid.insert(n);
      avoid.insert(t.name());
      avoid.insert(t.name2());
      Name k = fresh(avoid, "k");
      Term kv = Term::var(k);
      Term body = Term::app(m.term, Term::pair(Term::lam(t.name(), a, Term::app(kv, p.term)),
                                               Term::lam(t.name2(), b, Term::app(kv, q.term))));
      return {Term::delta(k, dm_formula(p.type), body), p.type};
    }
    case TermKind::Delta: {
      auto b = dm(g.extended(t.name(), Formula::neg(t.annot())), t.child(0));
      return {Term::delta(t.name(), dm_formula(t.annot()), b.term), t.annot()};
    }
  }
  throw TypeError({}, "unknown term");
}

using Moves = std::vector<Move>;

void require(bool ok, const std::string& what) {
  if (!ok) throw CannotClose(what);
}

}  // namespace

Formula dm_formula(const Formula& a) {
  switch (a.kind()) {
    case FormulaKind::Atom:
    case FormulaKind::Bottom: return a;
    case FormulaKind::Imp: return Formula::imp(dm_formula(a.left()), dm_formula(a.right()));
    case FormulaKind::Conj: return Formula::conj(dm_formula(a.left()), dm_formula(a.right()));
    case FormulaKind::Disj:
      return Formula::neg(Formula::conj(Formula::neg(dm_formula(a.left())),
                                        Formula::neg(dm_formula(a.right()))));
  }
  return a;
}

Context dm_context(const Context& gamma) {
  Context out;
  for (const auto& [x, a] : gamma.decls()) out = out.extended(x, dm_formula(a));
  return out;
}

Term dm_term(const Context& gamma, const Term& m) {
  infer(gamma, m);
  return dm(gamma, m).term;
}

Position dm_position(const Context& gamma, const Term& m, const Position& p) {
  Position out;
  const Term* cur = &m;
  Context g = gamma;
  for (std::size_t d = 0; d < p.depth(); ++d) {
    std::size_t i = p.path[d];
    if (i >= cur->arity()) throw std::out_of_range("invalid position " + p.str());
    std::vector<std::size_t> step{i};
    if (cur->is(TermKind::Inj)) {
      step = {0, 1};
    } else if (cur->is(TermKind::Case)) {
      bool bot = infer(g, *cur).is_bottom();
      if (bot) {
        static const std::vector<std::size_t> kBot[3] = {{0}, {1, 0, 0}, {1, 1, 0}};
        step = kBot[i];
      } else {
        static const std::vector<std::size_t> kOther[3] = {{0, 0}, {0, 1, 0, 0, 1}, {0, 1, 1, 0, 1}};
        step = kOther[i];
      }
    }
    out.path.insert(out.path.end(), step.begin(), step.end());
    g = context_at(g, *cur, Position{i});
    cur = &cur->child(i);
  }
  return out;
}

SimStepResult simulate_step(const Context& gamma, const Step& step) {
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
    case RuleId::BetaConj:
    case RuleId::Rho1Imp:
    case RuleId::Rho1Conj:
    case RuleId::Rho1BotImp:
    case RuleId::Rho1BotConj:
    case RuleId::Rho2:
      local = {{step.rule, {}}};
      break;
    case RuleId::Rho1BotDisj:
      item = 2;
      local = {{RuleId::Rho1BotImp, {}}};
      break;
    case RuleId::BetaDisj:
      item = 3;
      if (bot) {
        local = {{RuleId::BetaImp, {}}, {RuleId::BetaConj, {0}}, {RuleId::BetaImp, {}}};
      } else {
        local = {{RuleId::BetaImp, {0}},
                 {RuleId::BetaConj, {0, 0}},
                 {RuleId::BetaImp, {0}},
                 {RuleId::Rho2, {}}};
      }
      break;
    case RuleId::PiImp:
    case RuleId::PiConj: {
      item = 3;
      bool imp = step.rule == RuleId::PiImp;
      if (bot) {
        local = {{imp ? RuleId::Rho1BotImp : RuleId::Rho1BotConj, {}},
                 {RuleId::BetaImp, {1, 0, 0}},
                 {RuleId::BetaImp, {1, 1, 0}}};
      } else {
        local = {{imp ? RuleId::Rho1Imp : RuleId::Rho1Conj, {}},
                 {RuleId::BetaImp, {0, 1, 0, 0}},
                 {RuleId::BetaImp, {0, 1, 1, 0}}};
      }
      break;
    }
    case RuleId::PiDisj:
      item = 4;
      if (bot) {
        local = {{RuleId::Rho1BotImp, {}}, {RuleId::BetaImp, {1, 0, 0}}, {RuleId::BetaImp, {1, 1, 0}}};
      } else {
        local = {{RuleId::Rho1BotImp, {0}},
                 {RuleId::BetaImp, {0, 1, 0, 0}},
                 {RuleId::BetaImp, {0, 1, 1, 0}}};
        resid = {{RuleId::Rho4, {0, 1, 0, 0}}, {RuleId::Rho4, {0, 1, 1, 0}}};
      }
      break;
    case RuleId::Rho1Disj: {
      item = 4;
      if (bot) {
        local = {{RuleId::Rho1Imp, {}}};
        break;
      }
      local = {{RuleId::Rho1BotImp, {0}}};
      // One rho4 redex per occurrence of the reductio variable.
      const Term& d = s.child(0);
      Term body = dm_term(g.extended(d.name(), Formula::neg(d.annot())), d.child(0));
      for (const auto& occ : free_occurrences(body, d.name())) {
        Position at{0};
        at = at.concat(occ).child(0);
        resid.push_back({RuleId::Rho4, at});
      }
      break;
    }
    default:
      throw NotARedex(std::string(rule_name(step.rule)) + " is not a system rule");
  }

  Context tg = dm_context(gamma);
  Position at = dm_position(gamma, m, p);
  SimStepResult out(dm_term(gamma, m), dm_term(gamma, n));
  out.item = item;
  append_replayed(tg, out.target, shifted(local, at));
  append_replayed(tg, out.residual, shifted(resid, at));
  require(alpha_eq(out.target.end(), out.residual.end()),
          std::string("image of ") + std::string(rule_name(step.rule)) + " at " + p.str() +
              " does not reach the translated contractum");
  return out;
}

Commutation commute_rho4(const Context& gamma, const Term& u, const Step& rho4, const Step& r) {
  if (rho4.rule != RuleId::Rho4) throw NotARedex("first step must be rho4");
  const Position& q = rho4.position;
  const Position& p = r.position;
  if (p == q) throw CannotClose("both steps contract the same redex");
  const Term& n1 = rho4.after;
  const Term& n2 = r.after;

  std::optional<Position> moved = p;
  if (q.is_strict_prefix_of(p)) {
    std::vector<std::size_t> rest(p.path.begin() + static_cast<std::ptrdiff_t>(q.depth()), p.path.end());
    if (rest.size() < 2 || rest[0] != 1) {
      moved.reset();  // the reductio itself is contracted
    } else {
      Position np = q;
      np.path.insert(np.path.end(), rest.begin() + 2, rest.end());
      moved = np;
    }
  }
  (void)u;

  RuleSet only_rho4{RuleId::Rho4};
  if (moved) {
    try {
      Step st = make_step(gamma, n1, *moved, r.rule);
      if (auto path = find_path(gamma, n2, st.after, only_rho4)) {
        Commutation c{Trace(n1), replay(gamma, n2, *path)};
        c.transported.steps.push_back(st);
        return c;
      }
    } catch (const NotARedex&) {
    }
  }
  if (r.rule == RuleId::Rho2) {
    if (auto path = find_path(gamma, n2, n1, only_rho4))
      return Commutation{Trace(n1), replay(gamma, n2, *path)};
  }
  throw CannotClose("rho4 at " + q.str() + " and " + std::string(rule_name(r.rule)) + " at " +
                    p.str() + " do not commute");
}

Tiled transport_across(const Context& gamma, const Trace& steps, const Trace& chain) {
  Trace cur = replay(gamma, steps.start, moves_of(chain));
  Tiled out{Trace(cur.end()), cur};
  for (const Step& st : steps.steps) {
    std::optional<Step> front = st;
    Moves next;
    for (std::size_t i = 0; i < cur.steps.size(); ++i) {
      const Step& c = cur.steps[i];
      Commutation comm = commute_rho4(gamma, c.before, c, *front);
      for (const auto& mv : moves_of(comm.closing)) next.push_back(mv);
      if (comm.transported.steps.empty()) {
        for (std::size_t j = i + 1; j < cur.steps.size(); ++j)
          next.push_back({cur.steps[j].rule, cur.steps[j].position});
        front.reset();
        break;
      }
      front = comm.transported.steps.front();
    }
    if (front) append_replayed(gamma, out.transported, {{front->rule, front->position}});
    cur = replay(gamma, st.after, next);
  }
  out.chain = cur;
  return out;
}

SimCertificate tile_sequence(const Context& target_ctx, const Trace& s, const TermMap& translate,
                             const StepMap& simulate) {
  SimCertificate cert(s, translate(s.start));
  Trace chain(cert.target.start);
  for (const Step& st : s.steps) {
    SimStepResult sim = simulate(st);
    Trace local = replay(target_ctx, chain.start, moves_of(sim.target));
    Tiled tiled = transport_across(target_ctx, local, chain);
    append_replayed(target_ctx, cert.target, moves_of(tiled.transported));
    Moves next = moves_of(sim.residual);
    for (const auto& mv : moves_of(tiled.chain)) next.push_back(mv);
    chain = replay(target_ctx, translate(st.after), next);
  }
  cert.rho4 = chain;
  cert.m = s.count(RuleId::Rho2);
  return cert;
}

SimCertificate simulate_sequence(const Context& gamma, const Trace& s) {
  Context tg = dm_context(gamma);
  auto translate = [&](const Term& t) { return dm_term(gamma, t); };
  SimCertificate cert = tile_sequence(tg, s, translate,
                                      [&](const Step& st) { return simulate_step(gamma, st); });
  cert.ok = check_certificate(gamma, tg, cert, RuleSet::system(SystemId::Full),
                              RuleSet::system(SystemId::DisjFree), translate, &cert.problem);
  return cert;
}

bool check_certificate(const Context& source_ctx, const Context& target_ctx,
                       const SimCertificate& c, const RuleSet& source_rules,
                       const RuleSet& target_rules, const TermMap& translate, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  std::string sub;
  if (!trace_is_valid(source_ctx, c.source, source_rules, &sub)) return fail("source: " + sub);
  if (!trace_is_valid(target_ctx, c.target, target_rules, &sub)) return fail("target: " + sub);
  if (!trace_is_valid(target_ctx, c.rho4, RuleSet{RuleId::Rho4}, &sub)) return fail("rho4: " + sub);
  if (!alpha_eq(c.target.start, translate(c.source.start)))
    return fail("target does not start at the translated source");
  if (!alpha_eq(c.rho4.start, translate(c.source.end())))
    return fail("rho4 chain does not start at the translated endpoint");
  if (!alpha_eq(c.rho4.end(), c.target.end())) return fail("rho4 chain does not reach the target");
  if (c.m != c.source.count(RuleId::Rho2)) return fail("wrong rho2 count");
  if (c.target.length() + c.m < c.source.length())
    return fail("target length " + std::to_string(c.target.length()) + " < " +
                std::to_string(c.source.length()) + " - " + std::to_string(c.m));
  return true;
}

nlohmann::json trace_json(const Trace& t) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : t.steps)
    steps.push_back({{"pos", s.position.path}, {"rule", rule_name(s.rule)}, {"term", print(s.after)}});
  return {{"start", print(t.start)}, {"steps", steps}};
}

nlohmann::json certificate_json(const SimCertificate& c) {
  nlohmann::json j{{"source", trace_json(c.source)},
                   {"target", trace_json(c.target)},
                   {"rho4", trace_json(c.rho4)},
                   {"m", c.m},
                   {"ok", c.ok}};
  if (!c.ok && !c.problem.empty()) j["problem"] = c.problem;
  return j;
}

}  // namespace ldk
