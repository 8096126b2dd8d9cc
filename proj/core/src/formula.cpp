#include "ldk/formula.hpp"

#include <utility>

namespace ldk {

struct Formula::Node {
  FormulaKind kind;
  std::string name;
  Formula left;
  Formula right;
  std::size_t size;
};

namespace {

// Prefix precedence levels: 0 implication, 1 disjunction, 2 conjunction, 3 atomic/negation.
int level(const Formula& f) {
  if (f.is_neg()) return 3;
  switch (f.kind()) {
    case FormulaKind::Imp: return 0;
    case FormulaKind::Disj: return 1;
    case FormulaKind::Conj: return 2;
    default: return 3;
  }
}

void render(const Formula& f, int min_level, std::string& out) {
  bool parens = level(f) < min_level;
  if (parens) out += '(';
  if (f.is_neg()) {
    out += '~';
    render(f.left(), 3, out);
  } else {
    switch (f.kind()) {
      case FormulaKind::Atom: out += f.name(); break;
      case FormulaKind::Bottom: out += "Bot"; break;
      case FormulaKind::Imp:
        render(f.left(), 1, out);
        out += " -> ";
        render(f.right(), 0, out);
        break;
      case FormulaKind::Disj:
        render(f.left(), 2, out);
        out += " \\/ ";
        render(f.right(), 1, out);
        break;
      case FormulaKind::Conj:
        render(f.left(), 3, out);
        out += " /\\ ";
        render(f.right(), 2, out);
        break;
    }
  }
  if (parens) out += ')';
}

const Formula& bottom_singleton() {
  static const Formula b = Formula::bottom();
  return b;
}

}  // namespace

Formula::Formula() : Formula(bottom_singleton()) {}

Formula::Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Formula Formula::atom(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = FormulaKind::Atom;
  n->name = std::move(name);
  n->size = 1;
  return Formula(std::move(n));
}

Formula Formula::bottom() {
  static const std::shared_ptr<const Node> node = [] {
    auto n = std::make_shared<Node>(Node{FormulaKind::Bottom, {}, Formula(nullptr), Formula(nullptr), 1});
    return n;
  }();
  return Formula(node);
}

namespace {
template <class NodeT>
std::shared_ptr<const NodeT> binary(FormulaKind k, Formula l, Formula r) {
  auto n = std::make_shared<NodeT>();
  n->kind = k;
  n->size = 1 + l.size() + r.size();
  n->left = std::move(l);
  n->right = std::move(r);
  return n;
}
}  // namespace

Formula Formula::imp(Formula lhs, Formula rhs) {
  return Formula(binary<Node>(FormulaKind::Imp, std::move(lhs), std::move(rhs)));
}
Formula Formula::conj(Formula lhs, Formula rhs) {
  return Formula(binary<Node>(FormulaKind::Conj, std::move(lhs), std::move(rhs)));
}
Formula Formula::disj(Formula lhs, Formula rhs) {
  return Formula(binary<Node>(FormulaKind::Disj, std::move(lhs), std::move(rhs)));
}

FormulaKind Formula::kind() const { return node_->kind; }
const std::string& Formula::name() const { return node_->name; }
const Formula& Formula::left() const { return node_->left; }
const Formula& Formula::right() const { return node_->right; }
std::size_t Formula::size() const { return node_->size; }

bool Formula::contains(FormulaKind k) const {
  if (kind() == k) return true;
  switch (kind()) {
    case FormulaKind::Imp:
    case FormulaKind::Conj:
    case FormulaKind::Disj:
      return left().contains(k) || right().contains(k);
    default:
      return false;
  }
}

std::string Formula::str() const {
  std::string out;
  render(*this, 0, out);
  return out;
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind() || a.size() != b.size()) return false;
  switch (a.kind()) {
    case FormulaKind::Atom: return a.name() == b.name();
    case FormulaKind::Bottom: return true;
    default: return a.left() == b.left() && a.right() == b.right();
  }
}

bool operator<(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return false;
  if (a.kind() != b.kind()) return a.kind() < b.kind();
  switch (a.kind()) {
    case FormulaKind::Atom: return a.name() < b.name();
    case FormulaKind::Bottom: return false;
    default:
      if (a.left() != b.left()) return a.left() < b.left();
      return a.right() < b.right();
  }
}

}  // namespace ldk
