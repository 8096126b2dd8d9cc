#include "ldk/rewrite.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "ldk/syntax.hpp"

namespace ldk {

namespace {

struct RuleInfo {
  RuleId id;
  std::string_view name;
};

constexpr std::array<RuleInfo, kRuleCount> kRules{{
    {RuleId::BetaImp, "beta_imp"},       {RuleId::BetaConj, "beta_conj"},
    {RuleId::BetaDisj, "beta_disj"},     {RuleId::PiImp, "pi_imp"},
    {RuleId::PiConj, "pi_conj"},         {RuleId::PiDisj, "pi_disj"},
    {RuleId::Rho1Imp, "rho1_imp"},       {RuleId::Rho1Conj, "rho1_conj"},
    {RuleId::Rho1Disj, "rho1_disj"},     {RuleId::Rho1BotImp, "rho1bot_imp"},
    {RuleId::Rho1BotConj, "rho1bot_conj"}, {RuleId::Rho1BotDisj, "rho1bot_disj"},
    {RuleId::Rho2, "rho2"},              {RuleId::Rho3, "rho3"},
    {RuleId::Rho4, "rho4"},              {RuleId::Kappa, "kappa"},
    {RuleId::Iota, "iota"},
}};

// Transliterates Greek letters and connective symbols, then drops everything
// that is not a lowercase letter or digit, so "ρ1⊥∧", "rho1bot_conj" and
// "ρ₁⊥conj" all become "rho1botconj".
std::string canonical_rule(std::string_view s) {
  static const std::pair<std::string_view, std::string_view> kMap[] = {
      {"β", "beta"}, {"π", "pi"},   {"ρ", "rho"},  {"κ", "kappa"}, {"ι", "iota"},
      {"⊃", "imp"},  {"∧", "conj"}, {"∨", "disj"}, {"⊥", "bot"},   {"₁", "1"},
      {"₂", "2"},    {"₃", "3"},    {"₄", "4"},
  };
  std::string out;
  std::size_t i = 0;
  while (i < s.size()) {
    bool hit = false;
    for (const auto& [from, to] : kMap) {
      if (s.substr(i, from.size()) == from) {
        out += to;
        i += from.size();
        hit = true;
        break;
      }
    }
    if (hit) continue;
    char c = s[i++];
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) out += c;
  }
  return out;
}

enum class Family { Imp, Conj, Disj };

Family frame_family(ElimKind k) {
  switch (k) {
    case ElimKind::AppHole: return Family::Imp;
    case ElimKind::ProjHole: return Family::Conj;
    case ElimKind::CaseHole: return Family::Disj;
  }
  return Family::Imp;
}

RuleId pick(Family f, RuleId imp, RuleId conj, RuleId disj) {
  return f == Family::Imp ? imp : f == Family::Conj ? conj : disj;
}

// Does `rule` apply at the root of `s`, which has type `ty` under `g`?
bool applies(const Context& g, const Term& s, const Formula& ty, RuleId rule) {
  switch (rule) {
    case RuleId::BetaImp:
      return s.is(TermKind::App) && s.child(0).is(TermKind::Lam);
    case RuleId::BetaConj:
      return s.is(TermKind::Proj) && s.child(0).is(TermKind::Pair);
    case RuleId::BetaDisj:
      return s.is(TermKind::Case) && s.child(0).is(TermKind::Inj);
    case RuleId::Rho2:
      return s.is(TermKind::Delta) && s.child(0).is(TermKind::App) &&
             s.child(0).child(0).is(TermKind::Var) && s.child(0).child(0).name() == s.name() &&
             !occurs_free(s.child(0).child(1), s.name());
    case RuleId::Rho3:
      return s.is(TermKind::Delta) && s.annot().is_bottom();
    case RuleId::Rho4:
      return s.is(TermKind::App) && s.child(0).is(TermKind::Var) &&
             s.child(1).is(TermKind::Delta);
    case RuleId::Kappa: {
      if (!s.is(TermKind::App) || !s.child(0).is(TermKind::Var)) return false;
      const Formula* a = g.lookup(s.child(0).name());
      return a && *a == Formula::neg(Formula::bottom());
    }
    case RuleId::Iota:
      return s.is(TermKind::App) && is_identity_bot(s.child(0)) && ty.is_bottom();
    default: break;
  }
  auto split = ElimContext::split(s);
  if (!split) return false;
  Family f = frame_family(split->first.kind());
  const Term& m = split->second;
  switch (rule) {
    case RuleId::PiImp:
    case RuleId::PiConj:
    case RuleId::PiDisj:
      return m.is(TermKind::Case) &&
             rule == pick(f, RuleId::PiImp, RuleId::PiConj, RuleId::PiDisj);
    case RuleId::Rho1Imp:
    case RuleId::Rho1Conj:
    case RuleId::Rho1Disj:
      return m.is(TermKind::Delta) &&
             rule == pick(f, RuleId::Rho1Imp, RuleId::Rho1Conj, RuleId::Rho1Disj);
    case RuleId::Rho1BotImp:
    case RuleId::Rho1BotConj:
    case RuleId::Rho1BotDisj:
      return m.is(TermKind::Delta) && ty.is_bottom() &&
             rule == pick(f, RuleId::Rho1BotImp, RuleId::Rho1BotConj, RuleId::Rho1BotDisj);
    default: return false;
  }
}

// Contractum of a redex `s` of type `ty`; assumes `applies` holds.
Term contract_root(const Term& s, const Formula& ty, RuleId rule) {
  switch (rule) {
    case RuleId::BetaImp:
      return subst(s.child(0).child(0), s.child(0).name(), s.child(1));
    case RuleId::BetaConj:
      return s.index() == 1 ? s.child(0).child(0) : s.child(0).child(1);
    case RuleId::BetaDisj: {
      const Term& inj = s.child(0);
      return inj.index() == 1 ? subst(s.child(1), s.name(), inj.child(0))
                              : subst(s.child(2), s.name2(), inj.child(0));
    }
    case RuleId::Rho2: return s.child(0).child(1);
    case RuleId::Rho3: return subst(s.child(0), s.name(), identity_bot());
    case RuleId::Rho4:
      return subst(s.child(1).child(0), s.child(1).name(), s.child(0));
    case RuleId::Kappa:
    case RuleId::Iota: return s.child(1);
    default: break;
  }
  auto [e, m] = *ElimContext::split(s);
  NameSet fe = e.free_vars();
  switch (rule) {
    case RuleId::PiImp:
    case RuleId::PiConj:
    case RuleId::PiDisj: {
      // Rename a case binder when the frame mentions it.
      auto branch = [&](const Name& x, const Term& p, const NameSet& other) {
        if (!fe.count(x)) return std::make_pair(x, p);
        NameSet avoid = fe;
        NameSet fp = free_vars(p);
        avoid.insert(fp.begin(), fp.end());
        avoid.insert(other.begin(), other.end());
        avoid.insert(x);
        Name x2 = fresh(avoid, x);
        return std::make_pair(x2, subst(p, x, Term::var(x2)));
      };
      auto [x, p] = branch(m.name(), m.child(1), {});
      auto [y, q] = branch(m.name2(), m.child(2), {});
      return Term::case_of(m.child(0), x, m.annot(), fill(e, p), y, m.annot2(), fill(e, q));
    }
    case RuleId::Rho1Imp:
    case RuleId::Rho1Conj:
    case RuleId::Rho1Disj: {
      NameSet avoid = free_vars(s);
      avoid.insert(m.name());
      Name k2 = fresh(avoid, m.name());
      NameSet zavoid = fe;
      zavoid.insert(k2);
      Name z = fresh(zavoid, "z");
      Term repl = Term::lam(z, m.annot(), Term::app(Term::var(k2), fill(e, Term::var(z))));
      return Term::delta(k2, ty, subst(m.child(0), m.name(), repl));
    }
    case RuleId::Rho1BotImp:
    case RuleId::Rho1BotConj:
    case RuleId::Rho1BotDisj: {
      Name z = fresh(fe, "z");
      Term repl = Term::lam(z, m.annot(), fill(e, Term::var(z)));
      return subst(m.child(0), m.name(), repl);
    }
    default: break;
  }
  throw NotARedex(std::string(rule_name(rule)) + ": unexpected rule");
}

Formula collect(const Context& g, const Term& t, Position& here, const RuleSet& rules,
                std::vector<Redex>& out);

Formula collect_child(const Context& g, const Term& t, std::size_t i, Position& here,
                      const RuleSet& rules, std::vector<Redex>& out) {
  here.path.push_back(i);
  Formula f = collect(g, t.child(i), here, rules, out);
  here.path.pop_back();
  return f;
}

Formula collect(const Context& g, const Term& t, Position& here, const RuleSet& rules,
                std::vector<Redex>& out) {
  std::size_t mark = out.size();
  Formula ty;
  switch (t.kind()) {
    case TermKind::Var: {
      const Formula* a = g.lookup(t.name());
      if (!a) throw TypeError(here, "unbound variable " + t.name());
      ty = *a;
      break;
    }
    case TermKind::Lam:
      ty = Formula::imp(t.annot(),
                        collect_child(g.extended(t.name(), t.annot()), t, 0, here, rules, out));
      break;
    case TermKind::App: {
      Formula f = collect_child(g, t, 0, here, rules, out);
      Formula a = collect_child(g, t, 1, here, rules, out);
      if (!f.is_imp()) throw TypeError(here, "applying a term of type " + f.str());
      if (f.left() != a)
        throw TypeError(here, "argument has type " + a.str() + ", expected " + f.left().str());
      ty = f.right();
      break;
    }
    case TermKind::Pair: {
      Formula a = collect_child(g, t, 0, here, rules, out);
      Formula b = collect_child(g, t, 1, here, rules, out);
      ty = Formula::conj(a, b);
      break;
    }
    case TermKind::Proj: {
      Formula f = collect_child(g, t, 0, here, rules, out);
      if (!f.is_conj()) throw TypeError(here, "projecting from a term of type " + f.str());
      ty = t.index() == 1 ? f.left() : f.right();
      break;
    }
    case TermKind::Inj: {
      Formula a = collect_child(g, t, 0, here, rules, out);
      const Formula& d = t.annot();
      if (!d.is_disj()) throw TypeError(here, "injection annotated with non-disjunction " + d.str());
      if ((t.index() == 1 ? d.left() : d.right()) != a)
        throw TypeError(here, "injected term has type " + a.str());
      ty = d;
      break;
    }
    case TermKind::Case: {
      Formula s = collect_child(g, t, 0, here, rules, out);
      if (!s.is_disj() || s.left() != t.annot() || s.right() != t.annot2())
        throw TypeError(here, "case on a term of type " + s.str());
      Formula p = collect_child(g.extended(t.name(), t.annot()), t, 1, here, rules, out);
      Formula q = collect_child(g.extended(t.name2(), t.annot2()), t, 2, here, rules, out);
      if (p != q) throw TypeError(here, "case branches have types " + p.str() + " and " + q.str());
      ty = p;
      break;
    }
    case TermKind::Delta: {
      Formula b = collect_child(g.extended(t.name(), Formula::neg(t.annot())), t, 0, here, rules,
                                out);
      if (!b.is_bottom()) throw TypeError(here, "reductio body has type " + b.str());
      ty = t.annot();
      break;
    }
  }
  std::vector<Redex> own;
  for (const auto& info : kRules)
    if (rules.contains(info.id) && applies(g, t, ty, info.id)) own.push_back({here, info.id});
  out.insert(out.begin() + static_cast<std::ptrdiff_t>(mark), own.begin(), own.end());
  return ty;
}

}  // namespace

std::string_view rule_name(RuleId r) { return kRules[static_cast<std::size_t>(r)].name; }

std::optional<RuleId> parse_rule(std::string_view s) {
  std::string c = canonical_rule(s);
  for (const auto& info : kRules)
    if (canonical_rule(info.name) == c) return info.id;
  return std::nullopt;
}

bool is_aux(RuleId r) {
  return r == RuleId::Rho3 || r == RuleId::Rho4 || r == RuleId::Kappa || r == RuleId::Iota;
}

RuleSet RuleSet::system(SystemId s) {
  switch (s) {
    case SystemId::Full:
      return {RuleId::BetaImp,    RuleId::BetaConj,    RuleId::BetaDisj,    RuleId::PiImp,
              RuleId::PiConj,     RuleId::PiDisj,      RuleId::Rho1Imp,     RuleId::Rho1Conj,
              RuleId::Rho1Disj,   RuleId::Rho1BotImp,  RuleId::Rho1BotConj, RuleId::Rho1BotDisj,
              RuleId::Rho2};
    case SystemId::DisjFree:
      // Permutations need a case expression, so none can fire without disjunction.
      return {RuleId::BetaImp,    RuleId::BetaConj,    RuleId::Rho1Imp, RuleId::Rho1Conj,
              RuleId::Rho1BotImp, RuleId::Rho1BotConj, RuleId::Rho2};
    case SystemId::Small:
      return {RuleId::BetaImp, RuleId::Rho1Imp, RuleId::Rho2};
  }
  return {};
}

std::vector<RuleId> RuleSet::rules() const {
  std::vector<RuleId> out;
  for (const auto& info : kRules)
    if (contains(info.id)) out.push_back(info.id);
  return out;
}

std::size_t Trace::count(RuleId r) const {
  return static_cast<std::size_t>(
      std::count_if(steps.begin(), steps.end(), [r](const Step& s) { return s.rule == r; }));
}

std::vector<Redex> redexes(const Context& gamma, const Term& t, const RuleSet& rules) {
  std::vector<Redex> out;
  Position here;
  collect(gamma, t, here, rules, out);
  return out;
}

Term contract(const Context& gamma, const Term& t, const Position& pos, RuleId rule) {
  if (!valid_position(t, pos)) throw NotARedex("no subterm at " + pos.str());
  const Term& s = subterm_at(t, pos);
  Context g = context_at(gamma, t, pos);
  auto ty = try_infer(g, s);
  if (!ty) throw NotARedex("ill-typed subterm at " + pos.str());
  if (!applies(g, s, *ty, rule))
    throw NotARedex(std::string(rule_name(rule)) + " does not apply at " + pos.str());
  return replace_at(t, pos, contract_root(s, *ty, rule));
}

Step make_step(const Context& gamma, const Term& t, const Position& pos, RuleId rule) {
  return Step{rule, pos, t, contract(gamma, t, pos, rule)};
}

Trace replay(const Context& gamma, const Term& start, const std::vector<Move>& moves) {
  Trace tr(start);
  for (const auto& m : moves) tr.steps.push_back(make_step(gamma, tr.end(), m.position, m.rule));
  return tr;
}

std::vector<Move> moves_of(const Trace& t) {
  std::vector<Move> out;
  out.reserve(t.steps.size());
  for (const auto& s : t.steps) out.push_back({s.rule, s.position});
  return out;
}

std::vector<Move> shifted(const std::vector<Move>& moves, const Position& prefix) {
  std::vector<Move> out;
  out.reserve(moves.size());
  for (const auto& m : moves) out.push_back({m.rule, prefix.concat(m.position)});
  return out;
}

void append_replayed(const Context& gamma, Trace& t, const std::vector<Move>& more) {
  for (const auto& m : more) t.steps.push_back(make_step(gamma, t.end(), m.position, m.rule));
}

bool trace_is_valid(const Context& gamma, const Trace& t, const RuleSet& rules, std::string* why) {
  auto fail = [&](std::size_t i, const std::string& msg) {
    if (why) *why = "step " + std::to_string(i + 1) + ": " + msg;
    return false;
  };
  Term cur = t.start;
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const Step& s = t.steps[i];
    if (!rules.contains(s.rule)) return fail(i, std::string(rule_name(s.rule)) + " not allowed");
    if (!alpha_eq(cur, s.before)) return fail(i, "does not chain");
    try {
      if (!alpha_eq(contract(gamma, s.before, s.position, s.rule), s.after))
        return fail(i, "wrong contractum");
    } catch (const NotARedex& e) {
      return fail(i, e.what());
    }
    cur = s.after;
  }
  return true;
}

Trace normalize(const Context& gamma, const Term& t, const RuleSet& rules, Strategy strategy,
                std::size_t fuel) {
  Trace tr(t);
  while (true) {
    auto rs = redexes(gamma, tr.end(), rules);
    if (rs.empty()) return tr;
    if (tr.length() >= fuel) throw FuelExhausted(std::move(tr));
    const Redex* chosen = &rs.front();
    if (strategy == Strategy::LeftmostInnermost) {
      for (const auto& r : rs) {
        bool innermost = std::none_of(rs.begin(), rs.end(), [&](const Redex& o) {
          return r.position.is_strict_prefix_of(o.position);
        });
        if (innermost) {
          chosen = &r;
          break;
        }
      }
    }
    tr.steps.push_back(make_step(gamma, tr.end(), chosen->position, chosen->rule));
  }
}

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::ExhaustedAndAcyclic: return "exhausted_acyclic";
    case Verdict::ExhaustedWithCycle: return "exhausted_with_cycle";
    case Verdict::BoundExceeded: return "bound_exceeded";
  }
  return "?";
}

ReductionGraph reduction_graph(const Context& gamma, const Term& t, const RuleSet& rules,
                               std::size_t node_bound) {
  ReductionGraph g;
  std::unordered_map<std::string, std::size_t> ids;
  ids.emplace(alpha_key(t), 0);
  g.nodes.push_back(t);
  std::vector<std::vector<std::size_t>> succ(1);
  for (std::size_t cur = 0; cur < g.nodes.size(); ++cur) {
    Term here = g.nodes[cur];
    for (const auto& r : redexes(gamma, here, rules)) {
      Term next = contract(gamma, here, r.position, r.rule);
      auto [it, inserted] = ids.emplace(alpha_key(next), g.nodes.size());
      if (inserted) {
        if (g.nodes.size() >= node_bound) {
          g.verdict = Verdict::BoundExceeded;
          return g;
        }
        g.nodes.push_back(next);
        succ.emplace_back();
      }
      g.edges.push_back({cur, it->second, r.rule, r.position});
      succ[cur].push_back(it->second);
    }
  }
  // Iterative DFS for a back edge.
  std::vector<int> color(g.nodes.size(), 0);
  std::vector<std::size_t> parent(g.nodes.size(), 0);
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
  color[0] = 1;
  while (!stack.empty()) {
    auto& [v, i] = stack.back();
    if (i == succ[v].size()) {
      color[v] = 2;
      stack.pop_back();
      continue;
    }
    std::size_t w = succ[v][i++];
    if (color[w] == 1) {
      g.verdict = Verdict::ExhaustedWithCycle;
      std::vector<std::size_t> cyc{w};
      for (std::size_t u = v; u != w; u = parent[u]) cyc.push_back(u);
      std::reverse(cyc.begin() + 1, cyc.end());
      g.cycle = cyc;
      return g;
    }
    if (color[w] == 0) {
      color[w] = 1;
      parent[w] = v;
      stack.emplace_back(w, 0);
    }
  }
  return g;
}

std::size_t ReductionGraph::longest_path() const {
  if (nodes.empty() || verdict != Verdict::ExhaustedAndAcyclic) return 0;
  std::vector<std::vector<std::size_t>> succ(nodes.size());
  for (const auto& e : edges) succ[e.from].push_back(e.to);
  // Nodes were discovered breadth-first, but edges may point backwards in id
  // order, so compute depths by post-order DFS.
  std::vector<std::size_t> depth(nodes.size(), 0);
  std::vector<bool> done(nodes.size(), false);
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
  while (!stack.empty()) {
    auto& [v, i] = stack.back();
    if (i < succ[v].size()) {
      std::size_t w = succ[v][i++];
      if (!done[w]) stack.emplace_back(w, 0);
      continue;
    }
    for (auto w : succ[v]) depth[v] = std::max(depth[v], depth[w] + 1);
    done[v] = true;
    stack.pop_back();
  }
  return depth[0];
}

std::string ReductionGraph::to_dot() const {
  auto quote = [](const std::string& s) {
    std::string q = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') q += '\\';
      q += c;
    }
    return q + "\"";
  };
  std::ostringstream os;
  os << "digraph reduction {\n  node [shape=box, fontname=monospace];\n";
  for (std::size_t i = 0; i < nodes.size(); ++i)
    os << "  n" << i << " [label=" << quote(print(nodes[i])) << "];\n";
  for (const auto& e : edges)
    os << "  n" << e.from << " -> n" << e.to << " [label="
       << quote(std::string(rule_name(e.rule)) + " " + e.position.str()) << "];\n";
  os << "}\n";
  return os.str();
}

std::optional<std::vector<Move>> find_path(const Context& gamma, const Term& from, const Term& to,
                                           const RuleSet& rules, std::size_t node_bound) {
  const std::string goal = alpha_key(to);
  struct Node {
    Term term;
    std::size_t parent;
    Move via;
  };
  std::vector<Node> nodes{{from, 0, {RuleId::Rho2, {}}}};
  std::unordered_map<std::string, std::size_t> seen{{alpha_key(from), 0}};
  auto path_to = [&](std::size_t i) {
    std::vector<Move> out;
    for (; i != 0; i = nodes[i].parent) out.push_back(nodes[i].via);
    std::reverse(out.begin(), out.end());
    return out;
  };
  if (seen.begin()->first == goal) return std::vector<Move>{};
  for (std::size_t cur = 0; cur < nodes.size(); ++cur) {
    Term here = nodes[cur].term;
    for (const auto& r : redexes(gamma, here, rules)) {
      Term next = contract(gamma, here, r.position, r.rule);
      std::string key = alpha_key(next);
      if (seen.count(key)) continue;
      if (nodes.size() >= node_bound) return std::nullopt;
      seen.emplace(key, nodes.size());
      nodes.push_back({next, cur, {r.rule, r.position}});
      if (key == goal) return path_to(nodes.size() - 1);
    }
  }
  return std::nullopt;
}

std::string trace_to_jsonl(const Trace& t) {
  std::string out;
  auto line = [&](const nlohmann::json& j) { out += j.dump() + "\n"; };
  line({{"pos", nlohmann::json::array()}, {"rule", "start"}, {"step", 0}, {"term", print(t.start)}});
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const Step& s = t.steps[i];
    line({{"pos", s.position.path},
          {"rule", rule_name(s.rule)},
          {"step", i + 1},
          {"term", print(s.after)}});
  }
  return out;
}

Trace trace_from_jsonl(const Context& gamma, std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string raw;
  std::optional<Trace> tr;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (raw.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(raw);
    } catch (const nlohmann::json::parse_error& e) {
      throw SyntaxError(lineno, 1, "a JSON object");
    }
    if (!j.is_object() || !j.contains("rule") || !j.contains("term"))
      throw SyntaxError(lineno, 1, "an object with rule and term");
    std::string rule = j.at("rule").get<std::string>();
    Term term = parse_term(j.at("term").get<std::string>(), gamma);
    if (!tr) {
      if (rule != "start") throw SyntaxError(lineno, 1, "a start line");
      tr.emplace(term);
      continue;
    }
    auto r = parse_rule(rule);
    if (!r) throw SyntaxError(lineno, 1, "a rule name, got " + rule);
    Position pos(j.value("pos", std::vector<std::size_t>{}));
    tr->steps.push_back(make_step(gamma, tr->end(), pos, *r));
    if (!alpha_eq(tr->end(), term))
      throw NotARedex("line " + std::to_string(lineno) + ": recorded term differs from contractum");
  }
  if (!tr) throw SyntaxError(lineno, 1, "a start line");
  return std::move(*tr);
}

}  // namespace ldk
