#include "ldk/term.hpp"

#include <atomic>
#include <stdexcept>
#include <utility>

namespace ldk {

struct Term::Node {
  TermKind kind = TermKind::Var;
  int index = 0;
  Name name;
  Name name2;
  Formula annot;
  Formula annot2;
  std::vector<Term> children;
  std::size_t size = 1;
};


// ---------------------------------------------------------------------------
// Construction

namespace {
template <class NodeT>
std::shared_ptr<NodeT> make_node(TermKind k, std::vector<Term> children) {
  auto n = std::make_shared<NodeT>();
  n->kind = k;
  std::size_t size = 1;
  for (const auto& c : children) size += c.size();
  n->size = size;
  n->children = std::move(children);
  return n;
}
}  // namespace

Term Term::var(Name x) {
  auto n = make_node<Node>(TermKind::Var, {});
  n->name = std::move(x);
  return Term(std::move(n));
}

Term Term::lam(Name x, Formula annot, Term body) {
  auto n = make_node<Node>(TermKind::Lam, {std::move(body)});
  n->name = std::move(x);
  n->annot = std::move(annot);
  return Term(std::move(n));
}

Term Term::app(Term fun, Term arg) {
  return Term(make_node<Node>(TermKind::App, {std::move(fun), std::move(arg)}));
}

Term Term::pair(Term fst, Term snd) {
  return Term(make_node<Node>(TermKind::Pair, {std::move(fst), std::move(snd)}));
}

Term Term::proj(int index, Term arg) {
  if (index != 1 && index != 2) throw std::invalid_argument("projection index must be 1 or 2");
  auto n = make_node<Node>(TermKind::Proj, {std::move(arg)});
  n->index = index;
  return Term(std::move(n));
}

Term Term::inj(int index, Formula disjunction, Term arg) {
  if (index != 1 && index != 2) throw std::invalid_argument("injection index must be 1 or 2");
  auto n = make_node<Node>(TermKind::Inj, {std::move(arg)});
  n->index = index;
  n->annot = std::move(disjunction);
  return Term(std::move(n));
}

Term Term::case_of(Term scrut, Name x, Formula annot_x, Term left, Name y, Formula annot_y,
                   Term right) {
  auto n = make_node<Node>(TermKind::Case, {std::move(scrut), std::move(left), std::move(right)});
  n->name = std::move(x);
  n->annot = std::move(annot_x);
  n->name2 = std::move(y);
  n->annot2 = std::move(annot_y);
  return Term(std::move(n));
}

Term Term::delta(Name k, Formula annot, Term body) {
  auto n = make_node<Node>(TermKind::Delta, {std::move(body)});
  n->name = std::move(k);
  n->annot = std::move(annot);
  return Term(std::move(n));
}

TermKind Term::kind() const { return node_->kind; }
const Name& Term::name() const { return node_->name; }
const Name& Term::name2() const { return node_->name2; }
const Formula& Term::annot() const { return node_->annot; }
const Formula& Term::annot2() const { return node_->annot2; }
int Term::index() const { return node_->index; }
std::size_t Term::arity() const { return node_->children.size(); }
const Term& Term::child(std::size_t i) const { return node_->children.at(i); }
std::span<const Term> Term::children() const { return node_->children; }
std::size_t Term::size() const { return node_->size; }

Term Term::with_child(std::size_t i, Term c) const {
  auto n = std::make_shared<Node>(*node_);
  n->size = n->size - n->children.at(i).size() + c.size();
  n->children[i] = std::move(c);
  return Term(std::move(n));
}

const Name* Term::binder_for_child(std::size_t i) const {
  switch (kind()) {
    case TermKind::Lam:
    case TermKind::Delta: return &node_->name;
    case TermKind::Case:
      if (i == 1) return &node_->name;
      if (i == 2) return &node_->name2;
      return nullptr;
    default: return nullptr;
  }
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.kind != y.kind || x.size != y.size || x.index != y.index || x.name != y.name ||
      x.name2 != y.name2)
    return false;
  if (x.kind == TermKind::Lam || x.kind == TermKind::Delta || x.kind == TermKind::Inj ||
      x.kind == TermKind::Case) {
    if (x.annot != y.annot) return false;
  }
  if (x.kind == TermKind::Case && x.annot2 != y.annot2) return false;
  for (std::size_t i = 0; i < x.children.size(); ++i)
    if (x.children[i] != y.children[i]) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Positions

Position Position::child(std::size_t i) const {
  Position p = *this;
  p.path.push_back(i);
  return p;
}

Position Position::concat(const Position& rest) const {
  Position p = *this;
  p.path.insert(p.path.end(), rest.path.begin(), rest.path.end());
  return p;
}

bool Position::is_prefix_of(const Position& other) const {
  if (path.size() > other.path.size()) return false;
  for (std::size_t i = 0; i < path.size(); ++i)
    if (path[i] != other.path[i]) return false;
  return true;
}

std::string Position::str() const {
  std::string s = "[";
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(path[i]);
  }
  return s + "]";
}

bool valid_position(const Term& t, const Position& p) {
  const Term* cur = &t;
  for (auto i : p.path) {
    if (i >= cur->arity()) return false;
    cur = &cur->child(i);
  }
  return true;
}

const Term& subterm_at(const Term& t, const Position& p) {
  const Term* cur = &t;
  for (auto i : p.path) {
    if (i >= cur->arity()) throw std::out_of_range("invalid position " + p.str());
    cur = &cur->child(i);
  }
  return *cur;
}

namespace {
Term replace_rec(const Term& t, const std::vector<std::size_t>& path, std::size_t depth,
                 Term replacement) {
  if (depth == path.size()) return replacement;
  auto i = path[depth];
  if (i >= t.arity()) throw std::out_of_range("invalid position");
  return t.with_child(i, replace_rec(t.child(i), path, depth + 1, std::move(replacement)));
}
}  // namespace

Term replace_at(const Term& t, const Position& p, Term replacement) {
  return replace_rec(t, p.path, 0, std::move(replacement));
}

// ---------------------------------------------------------------------------
// Variables

namespace {

void collect_free(const Term& t, std::vector<Name>& scope, NameSet& out) {
  if (t.is(TermKind::Var)) {
    for (auto it = scope.rbegin(); it != scope.rend(); ++it)
      if (*it == t.name()) return;
    out.insert(t.name());
    return;
  }
  for (std::size_t i = 0; i < t.arity(); ++i) {
    const Name* b = t.binder_for_child(i);
    if (b) scope.push_back(*b);
    collect_free(t.child(i), scope, out);
    if (b) scope.pop_back();
  }
}

void collect_occurrences(const Term& t, const Name& x, Position& here, std::vector<Position>& out) {
  if (t.is(TermKind::Var)) {
    if (t.name() == x) out.push_back(here);
    return;
  }
  for (std::size_t i = 0; i < t.arity(); ++i) {
    const Name* b = t.binder_for_child(i);
    if (b && *b == x) continue;
    here.path.push_back(i);
    collect_occurrences(t.child(i), x, here, out);
    here.path.pop_back();
  }
}

std::atomic<unsigned> g_fresh_base{0};

}  // namespace

NameSet free_vars(const Term& t) {
  NameSet out;
  std::vector<Name> scope;
  collect_free(t, scope, out);
  return out;
}

bool occurs_free(const Term& t, const Name& x) {
  if (t.is(TermKind::Var)) return t.name() == x;
  for (std::size_t i = 0; i < t.arity(); ++i) {
    const Name* b = t.binder_for_child(i);
    if (b && *b == x) continue;
    if (occurs_free(t.child(i), x)) return true;
  }
  return false;
}

std::vector<Position> free_occurrences(const Term& t, const Name& x) {
  std::vector<Position> out;
  Position here;
  collect_occurrences(t, x, here, out);
  return out;
}

void set_fresh_base(unsigned primes) { g_fresh_base = primes; }
unsigned fresh_base() { return g_fresh_base; }

Name fresh(const NameSet& avoid, const Name& hint) {
  Name candidate = hint + std::string(g_fresh_base.load(), '\'');
  while (avoid.count(candidate)) candidate += '\'';
  return candidate;
}

// ---------------------------------------------------------------------------
// Substitution

namespace {

Term rebuild_with_binders(const Term& t, std::vector<Term> kids, const Name& b1, const Name& b2) {
  switch (t.kind()) {
    case TermKind::Lam: return Term::lam(b1, t.annot(), std::move(kids[0]));
    case TermKind::Delta: return Term::delta(b1, t.annot(), std::move(kids[0]));
    case TermKind::Case:
      return Term::case_of(std::move(kids[0]), b1, t.annot(), std::move(kids[1]), b2, t.annot2(),
                           std::move(kids[2]));
    case TermKind::App: return Term::app(std::move(kids[0]), std::move(kids[1]));
    case TermKind::Pair: return Term::pair(std::move(kids[0]), std::move(kids[1]));
    case TermKind::Proj: return Term::proj(t.index(), std::move(kids[0]));
    case TermKind::Inj: return Term::inj(t.index(), t.annot(), std::move(kids[0]));
    case TermKind::Var: return t;
  }
  return t;
}

Term subst_rec(const Term& t, const Name& x, const Term& r, const NameSet& fvr) {
  if (!occurs_free(t, x)) return t;
  if (t.is(TermKind::Var)) return r;
  std::vector<Term> kids;
  kids.reserve(t.arity());
  Name b1 = t.name(), b2 = t.name2();
  for (std::size_t i = 0; i < t.arity(); ++i) {
    const Name* b = t.binder_for_child(i);
    const Term& c = t.child(i);
    if (!b) {
      kids.push_back(subst_rec(c, x, r, fvr));
      continue;
    }
    if (*b == x || !occurs_free(c, x)) {
      kids.push_back(c);
      continue;
    }
    Name binder = *b;
    Term body = c;
    if (fvr.count(binder)) {
      NameSet avoid = fvr;
      NameSet fvc = free_vars(c);
      avoid.insert(fvc.begin(), fvc.end());
      avoid.insert(x);
      Name renamed = fresh(avoid, binder);
      body = subst_rec(body, binder, Term::var(renamed), {renamed});
      binder = renamed;
    }
    kids.push_back(subst_rec(body, x, r, fvr));
    if (t.is(TermKind::Case) && i == 2)
      b2 = binder;
    else
      b1 = binder;
  }
  return rebuild_with_binders(t, std::move(kids), b1, b2);
}

void key_rec(const Term& t, std::vector<const Name*>& scope, std::string& out) {
  switch (t.kind()) {
    case TermKind::Var: {
      for (std::size_t d = scope.size(); d-- > 0;) {
        if (*scope[d] == t.name()) {
          out += '#';
          out += std::to_string(scope.size() - 1 - d);
          return;
        }
      }
      out += '$';
      out += t.name();
      out += ';';
      return;
    }
    case TermKind::Lam: out += "L["; out += t.annot().str(); out += ']'; break;
    case TermKind::Delta: out += "D["; out += t.annot().str(); out += ']'; break;
    case TermKind::App: out += "A"; break;
    case TermKind::Pair: out += "P"; break;
    case TermKind::Proj: out += "J" + std::to_string(t.index()); break;
    case TermKind::Inj:
      out += "I" + std::to_string(t.index()) + "[";
      out += t.annot().str();
      out += ']';
      break;
    case TermKind::Case:
      out += "C[";
      out += t.annot().str();
      out += '|';
      out += t.annot2().str();
      out += ']';
      break;
  }
  out += '(';
  for (std::size_t i = 0; i < t.arity(); ++i) {
    if (i) out += ',';
    const Name* b = t.binder_for_child(i);
    if (b) scope.push_back(b);
    key_rec(t.child(i), scope, out);
    if (b) scope.pop_back();
  }
  out += ')';
}

}  // namespace

Term subst(const Term& body, const Name& x, const Term& replacement) {
  return subst_rec(body, x, replacement, free_vars(replacement));
}

std::string alpha_key(const Term& t) {
  std::string out;
  out.reserve(t.size() * 6);
  std::vector<const Name*> scope;
  key_rec(t, scope, out);
  return out;
}

bool alpha_eq(const Term& a, const Term& b) {
  if (a.same_node(b)) return true;
  if (a.size() != b.size()) return false;
  return alpha_key(a) == alpha_key(b);
}

// ---------------------------------------------------------------------------
// Elimination contexts

ElimContext ElimContext::app_hole(Term arg) {
  ElimContext e;
  e.kind_ = ElimKind::AppHole;
  e.terms_.push_back(std::move(arg));
  return e;
}

ElimContext ElimContext::proj_hole(int index) {
  if (index != 1 && index != 2) throw std::invalid_argument("projection index must be 1 or 2");
  ElimContext e;
  e.kind_ = ElimKind::ProjHole;
  e.index_ = index;
  return e;
}

ElimContext ElimContext::case_hole(Name x, Formula annot_x, Term left, Name y, Formula annot_y,
                                   Term right) {
  ElimContext e;
  e.kind_ = ElimKind::CaseHole;
  e.x_ = std::move(x);
  e.y_ = std::move(y);
  e.annot_x_ = std::move(annot_x);
  e.annot_y_ = std::move(annot_y);
  e.terms_.push_back(std::move(left));
  e.terms_.push_back(std::move(right));
  return e;
}

std::optional<std::pair<ElimContext, Term>> ElimContext::split(const Term& t) {
  switch (t.kind()) {
    case TermKind::App: return std::make_pair(app_hole(t.child(1)), t.child(0));
    case TermKind::Proj: return std::make_pair(proj_hole(t.index()), t.child(0));
    case TermKind::Case:
      return std::make_pair(
          case_hole(t.name(), t.annot(), t.child(1), t.name2(), t.annot2(), t.child(2)),
          t.child(0));
    default: return std::nullopt;
  }
}

NameSet ElimContext::free_vars() const {
  switch (kind_) {
    case ElimKind::AppHole: return ldk::free_vars(arg());
    case ElimKind::ProjHole: return {};
    case ElimKind::CaseHole: {
      NameSet out = ldk::free_vars(left());
      out.erase(x_);
      NameSet r = ldk::free_vars(right());
      r.erase(y_);
      out.insert(r.begin(), r.end());
      return out;
    }
  }
  return {};
}

Term fill(const ElimContext& e, const Term& m) {
  switch (e.kind()) {
    case ElimKind::AppHole: return Term::app(m, e.arg());
    case ElimKind::ProjHole: return Term::proj(e.index(), m);
    case ElimKind::CaseHole:
      return Term::case_of(m, e.x(), e.annot_x(), e.left(), e.y(), e.annot_y(), e.right());
  }
  return m;
}

ElimContext subst_ctx(const ElimContext& e, const Name& x, const Term& q) {
  switch (e.kind()) {
    case ElimKind::AppHole: return ElimContext::app_hole(subst(e.arg(), x, q));
    case ElimKind::ProjHole: return e;
    case ElimKind::CaseHole: {
      // Substitute through a probe case so binder renaming is shared with `subst`.
      NameSet avoid = free_vars(q);
      NameSet fe = e.free_vars();
      avoid.insert(fe.begin(), fe.end());
      avoid.insert(x);
      Term probe = fill(e, Term::var(fresh(avoid, "hole")));
      Term done = subst(probe, x, q);
      return ElimContext::case_hole(done.name(), done.annot(), done.child(1), done.name2(),
                                    done.annot2(), done.child(2));
    }
  }
  return e;
}

Term identity_bot() { return Term::lam("x", Formula::bottom(), Term::var("x")); }

bool is_identity_bot(const Term& t) {
  return t.is(TermKind::Lam) && t.annot().is_bottom() && t.child(0).is(TermKind::Var) &&
         t.child(0).name() == t.name();
}

}  // namespace ldk
