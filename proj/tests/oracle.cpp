#include "oracle.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace oracle {

using ldk::Formula;
using ldk::FormulaKind;
using ldk::SystemId;
using ldk::Term;
using ldk::TermKind;

namespace {

void render(const Term& t, std::vector<std::string>& bound, std::string& out) {
  auto index_of = [&](const std::string& x) -> std::optional<std::size_t> {
    for (std::size_t i = bound.size(); i-- > 0;)
      if (bound[i] == x) return bound.size() - 1 - i;
    return std::nullopt;
  };
  switch (t.kind()) {
    case TermKind::Var:
      if (auto i = index_of(t.name()))
        out += "#" + std::to_string(*i);
      else
        out += "$" + t.name();
      return;
    case TermKind::Lam:
    case TermKind::Delta:
      out += t.is(TermKind::Lam) ? "(L " : "(D ";
      out += t.annot().str() + " ";
      bound.push_back(t.name());
      render(t.child(0), bound, out);
      bound.pop_back();
      out += ")";
      return;
    case TermKind::App:
    case TermKind::Pair:
      out += t.is(TermKind::App) ? "(@ " : "(, ";
      render(t.child(0), bound, out);
      out += " ";
      render(t.child(1), bound, out);
      out += ")";
      return;
    case TermKind::Proj:
      out += "(p" + std::to_string(t.index()) + " ";
      render(t.child(0), bound, out);
      out += ")";
      return;
    case TermKind::Inj:
      out += "(i" + std::to_string(t.index()) + " " + t.annot().str() + " ";
      render(t.child(0), bound, out);
      out += ")";
      return;
    case TermKind::Case:
      out += "(C ";
      render(t.child(0), bound, out);
      out += " " + t.annot().str() + " ";
      bound.push_back(t.name());
      render(t.child(1), bound, out);
      bound.pop_back();
      out += " " + t.annot2().str() + " ";
      bound.push_back(t.name2());
      render(t.child(2), bound, out);
      bound.pop_back();
      out += ")";
      return;
  }
}

Formula neg(const Formula& a) { return Formula::imp(a, Formula::bottom()); }

}  // namespace

std::string nameless(const Term& t) {
  std::vector<std::string> bound;
  std::string out;
  render(t, bound, out);
  return out;
}

std::optional<Formula> type_of(const std::map<std::string, Formula>& g, const Term& t) {
  auto with = [&](const std::string& x, const Formula& a) {
    auto h = g;
    h[x] = a;
    return h;
  };
  switch (t.kind()) {
    case TermKind::Var: {
      auto it = g.find(t.name());
      if (it == g.end()) return std::nullopt;
      return it->second;
    }
    case TermKind::Lam: {
      auto b = type_of(with(t.name(), t.annot()), t.child(0));
      if (!b) return std::nullopt;
      return Formula::imp(t.annot(), *b);
    }
    case TermKind::Delta: {
      auto b = type_of(with(t.name(), neg(t.annot())), t.child(0));
      if (!b || !b->is_bottom()) return std::nullopt;
      return t.annot();
    }
    case TermKind::App: {
      auto f = type_of(g, t.child(0));
      auto a = type_of(g, t.child(1));
      if (!f || !a || !f->is_imp() || !(f->left() == *a)) return std::nullopt;
      return f->right();
    }
    case TermKind::Pair: {
      auto a = type_of(g, t.child(0));
      auto b = type_of(g, t.child(1));
      if (!a || !b) return std::nullopt;
      return Formula::conj(*a, *b);
    }
    case TermKind::Proj: {
      auto c = type_of(g, t.child(0));
      if (!c || !c->is_conj()) return std::nullopt;
      return t.index() == 1 ? c->left() : c->right();
    }
    case TermKind::Inj: {
      const Formula& d = t.annot();
      auto a = type_of(g, t.child(0));
      if (!a || !d.is_disj()) return std::nullopt;
      if (!(*a == (t.index() == 1 ? d.left() : d.right()))) return std::nullopt;
      return d;
    }
    case TermKind::Case: {
      auto d = type_of(g, t.child(0));
      if (!d || !d->is_disj()) return std::nullopt;
      if (!(d->left() == t.annot()) || !(d->right() == t.annot2())) return std::nullopt;
      auto p = type_of(with(t.name(), t.annot()), t.child(1));
      auto q = type_of(with(t.name2(), t.annot2()), t.child(2));
      if (!p || !q || !(*p == *q)) return std::nullopt;
      return p;
    }
  }
  return std::nullopt;
}

std::optional<Formula> type_of(const ldk::Context& gamma, const Term& t) {
  return type_of(gamma.decls(), t);
}

std::vector<Formula> formulas(const std::vector<std::string>& atoms, SystemId s,
                              std::size_t max_size) {
  std::map<std::size_t, std::vector<Formula>> by;
  for (const auto& a : atoms) by[1].push_back(Formula::atom(a));
  by[1].push_back(Formula::bottom());
  for (std::size_t n = 3; n <= max_size; n += 2)
    for (std::size_t i = 1; i < n - 1; i += 2)
      for (const auto& l : by[i])
        for (const auto& r : by[n - 1 - i]) {
          by[n].push_back(Formula::imp(l, r));
          if (s != SystemId::Small) by[n].push_back(Formula::conj(l, r));
          if (s == SystemId::Full) by[n].push_back(Formula::disj(l, r));
        }
  std::vector<Formula> out;
  for (const auto& [n, fs] : by) out.insert(out.end(), fs.begin(), fs.end());
  return out;
}

namespace {

struct Naive {
  const NaiveSpec& spec;
  std::map<std::pair<std::string, std::size_t>, std::vector<Term>> memo;

  static std::string key(const std::map<std::string, Formula>& g) {
    std::string k;
    for (const auto& [x, a] : g) k += x + ":" + a.str() + ";";
    return k;
  }

  // Raw trees of exactly n nodes in scope g, kept only if they typecheck.
  // Binders at depth d are all named b<d>.
  const std::vector<Term>& gen(const std::map<std::string, Formula>& g, std::size_t depth,
                               std::size_t n) {
    auto k = std::make_pair(key(g), n);
    if (auto it = memo.find(k); it != memo.end()) return it->second;
    std::vector<Term> raw;
    auto keep = [&](const Term& t) {
      if (type_of(g, t)) raw.push_back(t);
    };
    const bool pairs = spec.system != SystemId::Small;
    const bool sums = spec.system == SystemId::Full;
    std::string b = "b" + std::to_string(depth);
    auto inner = [&](const Formula& a) {
      auto h = g;
      h[b] = a;
      return h;
    };
    if (n == 1) {
      for (const auto& [x, a] : g) keep(Term::var(x));
    } else {
      for (const auto& a : spec.lambda_annots)
        for (const auto& m : gen(inner(a), depth + 1, n - 1)) keep(Term::lam(b, a, m));
      for (const auto& a : spec.delta_annots)
        for (const auto& m : gen(inner(neg(a)), depth + 1, n - 1)) keep(Term::delta(b, a, m));
      for (std::size_t i = 1; i + 1 < n; ++i) {
        const auto& ls = gen(g, depth, i);
        const auto& rs = gen(g, depth, n - 1 - i);
        for (const auto& l : ls)
          for (const auto& r : rs) {
            keep(Term::app(l, r));
            if (pairs) keep(Term::pair(l, r));
          }
      }
      if (pairs)
        for (const auto& m : gen(g, depth, n - 1)) {
          keep(Term::proj(1, m));
          keep(Term::proj(2, m));
        }
      if (sums) {
        for (const auto& m : gen(g, depth, n - 1)) {
          std::vector<Formula> wides = spec.inj_annots;
          if (wides.empty()) wides.push_back(*type_of(g, m));
          for (const auto& wide : wides)
            for (const auto& free : spec.lambda_annots) {
              keep(Term::inj(1, Formula::disj(wide, free), m));
              keep(Term::inj(2, Formula::disj(free, wide), m));
            }
        }
        for (std::size_t i = 1; i + 2 < n; ++i)
          for (std::size_t j = 1; i + j + 1 < n; ++j)
            for (const auto& m : gen(g, depth, i))
              for (const auto& a : spec.case_annots)
                for (const auto& c : spec.case_annots) {
                  const auto& ps = gen(inner(a), depth + 1, j);
                  const auto& qs = gen(inner(c), depth + 1, n - 1 - i - j);
                  for (const auto& p : ps)
                    for (const auto& q : qs) keep(Term::case_of(m, b, a, p, b, c, q));
                }
      }
    }
    return memo.emplace(k, std::move(raw)).first->second;
  }
};

}  // namespace

std::map<std::size_t, std::size_t> naive_counts(const NaiveSpec& spec) {
  Naive gen{spec, {}};
  std::map<std::size_t, std::size_t> out;
  const auto& g = spec.context.decls();
  for (std::size_t n = 1; n <= spec.bound; ++n) {
    std::set<std::string> classes;
    for (const auto& t : gen.gen(g, 0, n)) classes.insert(nameless(t));
    out[n] = classes.size();
  }
  return out;
}

}  // namespace oracle
