#include "ldk/typing.hpp"

namespace ldk {

Context Context::of(const std::vector<std::pair<Name, Formula>>& decls) {
  Context c;
  for (const auto& [x, a] : decls) {
    if (!c.decls_.emplace(x, a).second) throw DuplicateBinding(x);
  }
  return c;
}

Context Context::extended(const Name& x, const Formula& a) const {
  Context c = *this;
  c.decls_.insert_or_assign(x, a);
  return c;
}

const Formula* Context::lookup(const Name& x) const {
  auto it = decls_.find(x);
  return it == decls_.end() ? nullptr : &it->second;
}

NameSet Context::names() const {
  NameSet out;
  for (const auto& [x, _] : decls_) out.insert(x);
  return out;
}

std::string Context::str() const {
  std::string s;
  for (const auto& [x, a] : decls_) {
    if (!s.empty()) s += ", ";
    s += x + ":" + a.str();
  }
  return s;
}

std::string_view system_name(SystemId s) {
  switch (s) {
    case SystemId::Full: return "full";
    case SystemId::DisjFree: return "disjfree";
    case SystemId::Small: return "small";
  }
  return "full";
}

std::optional<SystemId> parse_system(std::string_view s) {
  if (s == "full") return SystemId::Full;
  if (s == "disjfree") return SystemId::DisjFree;
  if (s == "small") return SystemId::Small;
  return std::nullopt;
}

namespace {

Formula infer_at(const Context& g, const Term& t, Position& here);

Formula infer_child(const Context& g, const Term& t, std::size_t i, Position& here) {
  here.path.push_back(i);
  Formula f = infer_at(g, t.child(i), here);
  here.path.pop_back();
  return f;
}

Formula infer_at(const Context& g, const Term& t, Position& here) {
  switch (t.kind()) {
    case TermKind::Var: {
      const Formula* a = g.lookup(t.name());
      if (!a) throw TypeError(here, "unbound variable " + t.name());
      return *a;
    }
    case TermKind::Lam: {
      Context inner = g.extended(t.name(), t.annot());
      return Formula::imp(t.annot(), infer_child(inner, t, 0, here));
    }
    case TermKind::App: {
      Formula f = infer_child(g, t, 0, here);
      Formula a = infer_child(g, t, 1, here);
      if (!f.is_imp()) throw TypeError(here, "applying a term of type " + f.str());
      if (f.left() != a)
        throw TypeError(here, "argument has type " + a.str() + ", expected " + f.left().str());
      return f.right();
    }
    case TermKind::Pair:
      return Formula::conj(infer_child(g, t, 0, here), infer_child(g, t, 1, here));
    case TermKind::Proj: {
      Formula f = infer_child(g, t, 0, here);
      if (!f.is_conj()) throw TypeError(here, "projecting from a term of type " + f.str());
      return t.index() == 1 ? f.left() : f.right();
    }
    case TermKind::Inj: {
      Formula a = infer_child(g, t, 0, here);
      const Formula& d = t.annot();
      if (!d.is_disj()) throw TypeError(here, "injection annotated with non-disjunction " + d.str());
      const Formula& side = t.index() == 1 ? d.left() : d.right();
      if (side != a)
        throw TypeError(here, "injected term has type " + a.str() + ", expected " + side.str());
      return d;
    }
    case TermKind::Case: {
      Formula s = infer_child(g, t, 0, here);
      if (!s.is_disj()) throw TypeError(here, "case on a term of type " + s.str());
      if (s.left() != t.annot() || s.right() != t.annot2())
        throw TypeError(here, "case binder annotations do not match " + s.str());
      Formula p = infer_child(g.extended(t.name(), t.annot()), t, 1, here);
      Formula q = infer_child(g.extended(t.name2(), t.annot2()), t, 2, here);
      if (p != q) throw TypeError(here, "case branches have types " + p.str() + " and " + q.str());
      return p;
    }
    case TermKind::Delta: {
      Formula b = infer_child(g.extended(t.name(), Formula::neg(t.annot())), t, 0, here);
      if (!b.is_bottom()) throw TypeError(here, "reductio body has type " + b.str());
      return t.annot();
    }
  }
  throw TypeError(here, "unknown term");
}

bool term_in_system(const Term& t, SystemId s) {
  switch (t.kind()) {
    case TermKind::Var: break;
    case TermKind::Lam:
    case TermKind::Delta:
      if (!in_system(t.annot(), s)) return false;
      break;
    case TermKind::App: break;
    case TermKind::Pair:
    case TermKind::Proj:
      if (s == SystemId::Small) return false;
      break;
    case TermKind::Inj:
    case TermKind::Case:
      if (s != SystemId::Full) return false;
      break;
  }
  for (const auto& c : t.children())
    if (!term_in_system(c, s)) return false;
  return true;
}

}  // namespace

Formula infer(const Context& gamma, const Term& t) {
  Position here;
  return infer_at(gamma, t, here);
}

std::optional<Formula> try_infer(const Context& gamma, const Term& t) {
  try {
    return infer(gamma, t);
  } catch (const TypeError&) {
    return std::nullopt;
  }
}

Formula infer_ctx(const Context& gamma, const ElimContext& e, const Formula& hole) {
  switch (e.kind()) {
    case ElimKind::AppHole: {
      if (!hole.is_imp()) throw HoleTypeMismatch({}, "hole of [.]N has type " + hole.str());
      Formula a = infer(gamma, e.arg());
      if (a != hole.left())
        throw TypeError({}, "argument has type " + a.str() + ", expected " + hole.left().str());
      return hole.right();
    }
    case ElimKind::ProjHole:
      if (!hole.is_conj()) throw HoleTypeMismatch({}, "hole of projection has type " + hole.str());
      return e.index() == 1 ? hole.left() : hole.right();
    case ElimKind::CaseHole: {
      if (!hole.is_disj()) throw HoleTypeMismatch({}, "hole of case has type " + hole.str());
      if (hole.left() != e.annot_x() || hole.right() != e.annot_y())
        throw TypeError({}, "case binder annotations do not match " + hole.str());
      Formula p = infer(gamma.extended(e.x(), e.annot_x()), e.left());
      Formula q = infer(gamma.extended(e.y(), e.annot_y()), e.right());
      if (p != q) throw TypeError({}, "case branches have types " + p.str() + " and " + q.str());
      return p;
    }
  }
  return hole;
}

Context context_at(const Context& gamma, const Term& t, const Position& p) {
  Context g = gamma;
  const Term* cur = &t;
  for (auto i : p.path) {
    if (i >= cur->arity()) throw std::out_of_range("invalid position " + p.str());
    if (const Name* b = cur->binder_for_child(i)) {
      Formula a = cur->is(TermKind::Delta) ? Formula::neg(cur->annot())
                  : (cur->is(TermKind::Case) && i == 2) ? cur->annot2()
                                                         : cur->annot();
      g = g.extended(*b, a);
    }
    cur = &cur->child(i);
  }
  return g;
}

bool in_system(const Formula& f, SystemId s) {
  switch (s) {
    case SystemId::Full: return true;
    case SystemId::DisjFree: return !f.contains(FormulaKind::Disj);
    case SystemId::Small: return !f.contains(FormulaKind::Disj) && !f.contains(FormulaKind::Conj);
  }
  return true;
}

bool in_system(const Term& t, SystemId s) { return term_in_system(t, s); }

}  // namespace ldk
