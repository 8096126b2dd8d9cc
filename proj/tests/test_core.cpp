#include <gtest/gtest.h>

#include "ldk/syntax.hpp"
#include "ldk/typing.hpp"
#include "oracle.hpp"

using namespace ldk;

namespace {

Formula X() { return Formula::atom("X"); }
Formula Y() { return Formula::atom("Y"); }
Formula bot() { return Formula::bottom(); }
Term v(const char* x) { return Term::var(x); }

}  // namespace

TEST(Formula, NegationIsImplicationIntoBottom) {
  EXPECT_EQ(Formula::neg(X()), Formula::imp(X(), bot()));
  EXPECT_TRUE(Formula::neg(X()).is_neg());
  EXPECT_FALSE(Formula::imp(X(), Y()).is_neg());
}

TEST(Formula, ParsePrecedenceAndAssociativity) {
  EXPECT_EQ(parse_formula("X -> Y -> X"), Formula::imp(X(), Formula::imp(Y(), X())));
  EXPECT_EQ(parse_formula("X /\\ Y \\/ X"), Formula::disj(Formula::conj(X(), Y()), X()));
  EXPECT_EQ(parse_formula("~X"), Formula::neg(X()));
  EXPECT_EQ(parse_formula("~(X \\/ Bot)"), Formula::neg(Formula::disj(X(), bot())));
}

TEST(Formula, PrintParseRoundTrip) {
  for (const auto& f : oracle::formulas({"X", "Y"}, SystemId::Full, 7))
    EXPECT_EQ(parse_formula(f.str()), f) << f.str();
}

TEST(Names, FreeVariables) {
  EXPECT_EQ(free_vars(Term::lam("x", X(), Term::app(v("x"), v("y")))), NameSet{"y"});
  EXPECT_EQ(free_vars(Term::delta("k", X(), Term::app(v("k"), v("x")))), NameSet{"x"});
  EXPECT_EQ(free_vars(v("x")), NameSet{"x"});
}

TEST(Names, FreshPrimes) {
  EXPECT_EQ(fresh({"k"}, "k"), "k'");
  EXPECT_EQ(fresh({}, "z"), "z");
  EXPECT_EQ(fresh({"z", "z'"}, "z"), "z''");
}

TEST(Substitution, BaseCase) { EXPECT_EQ(subst(v("x"), "x", v("y")), v("y")); }

TEST(Substitution, AvoidsCapture) {
  Term body = Term::lam("x", X(), v("y"));
  Term out = subst(body, "y", v("x"));
  ASSERT_TRUE(out.is(TermKind::Lam));
  EXPECT_NE(out.name(), "x");
  EXPECT_EQ(out.child(0), v("x"));
  // Independent check in nameless form.
  EXPECT_EQ(oracle::nameless(out), oracle::nameless(Term::lam("w", X(), v("x"))));
}

TEST(Substitution, ProjectionFrameHasNothingToReplace) {
  ElimContext e = ElimContext::proj_hole(1);
  ElimContext f = subst_ctx(e, "x", v("q"));
  EXPECT_EQ(f.kind(), ElimKind::ProjHole);
  EXPECT_EQ(f.index(), 1);
}

TEST(Alpha, Examples) {
  EXPECT_TRUE(alpha_eq(Term::lam("x", X(), v("x")), Term::lam("y", X(), v("y"))));
  EXPECT_FALSE(alpha_eq(Term::lam("x", X(), v("x")), Term::lam("x", bot(), v("x"))));
  EXPECT_TRUE(alpha_eq(Term::delta("k", X(), Term::app(v("k"), v("z"))),
                       Term::delta("j", X(), Term::app(v("j"), v("z")))));
  EXPECT_FALSE(alpha_eq(Term::lam("x", X(), v("x")), Term::lam("x", X(), v("y"))));
}

TEST(Frames, Fill) {
  Term m = v("m");
  EXPECT_EQ(fill(ElimContext::app_hole(v("n")), m), Term::app(m, v("n")));
  Term p = Term::pair(v("a"), v("b"));
  EXPECT_EQ(fill(ElimContext::proj_hole(1), p), Term::proj(1, p));
  EXPECT_EQ(fill(ElimContext::case_hole("x", X(), v("p"), "y", Y(), v("q")), m),
            Term::case_of(m, "x", X(), v("p"), "y", Y(), v("q")));
}

TEST(Typing, Examples) {
  EXPECT_EQ(infer(Context::of({{"x", X()}}), v("x")), X());
  EXPECT_EQ(infer({}, Term::lam("x", X(), v("x"))), Formula::imp(X(), X()));
  Term raa = Term::delta("k", X(), v("y"));
  Context g = Context::of({{"y", bot()}});
  EXPECT_EQ(infer(g, raa), X());
  EXPECT_EQ(oracle::type_of(g, raa), X());
}

TEST(Typing, FrameTypes) {
  Formula a = X(), b = Y();
  EXPECT_EQ(infer_ctx(Context::of({{"n", a}}), ElimContext::app_hole(v("n")), Formula::imp(a, b)), b);
  EXPECT_EQ(infer_ctx({}, ElimContext::proj_hole(1), Formula::conj(a, b)), a);
  EXPECT_THROW(infer_ctx({}, ElimContext::case_hole("x", X(), v("z"), "y", X(), v("z")),
                         Formula::disj(X(), X())),
               TypeError);
}

TEST(Typing, Rejections) {
  EXPECT_THROW(infer({}, v("x")), TypeError);
  // Injection annotation must agree with the argument.
  Context g = Context::of({{"x", X()}});
  EXPECT_THROW(infer(g, Term::inj(1, Formula::disj(Y(), X()), v("x"))), TypeError);
  // Reductio body must be Bot.
  EXPECT_THROW(infer(g, Term::delta("k", X(), v("x"))), TypeError);
  EXPECT_THROW(Context::of({{"x", X()}, {"x", Y()}}), DuplicateBinding);
}

TEST(Systems, Membership) {
  EXPECT_FALSE(in_system(Term::pair(v("x"), v("y")), SystemId::Small));
  EXPECT_TRUE(in_system(Term::lam("x", X(), v("x")), SystemId::Small));
  EXPECT_FALSE(in_system(Term::inj(1, Formula::disj(X(), bot()), v("x")), SystemId::DisjFree));
  EXPECT_FALSE(in_system(Term::lam("x", Formula::conj(X(), X()), v("x")), SystemId::Small));
}

TEST(Syntax, ParseExamples) {
  EXPECT_EQ(parse_term("\\x:X. x"), Term::lam("x", X(), v("x")));
  EXPECT_EQ(parse_term("delta k:~X. k y"), Term::delta("k", X(), Term::app(v("k"), v("y"))));
  EXPECT_EQ(parse_term("case m of { x:X => p | y:Y => q }"),
            Term::case_of(v("m"), "x", X(), v("p"), "y", Y(), v("q")));
}

TEST(Syntax, ApplicationIsLeftAssociative) {
  EXPECT_EQ(parse_term("f a b"), Term::app(Term::app(v("f"), v("a")), v("b")));
  EXPECT_EQ(parse_term("f \\x:X. x"), Term::app(v("f"), Term::lam("x", X(), v("x"))));
}

TEST(Syntax, ShadowingIsFreshened) {
  Term t = parse_term("\\x:X. \\x:X. x");
  ASSERT_TRUE(t.child(0).is(TermKind::Lam));
  EXPECT_NE(t.name(), t.child(0).name());
  EXPECT_EQ(t.child(0).child(0), v(t.child(0).name().c_str()));
}

TEST(Syntax, ErrorsCarryLineAndColumn) {
  try {
    parse_term("\\x:X.\n  (x");
    FAIL() << "expected a syntax error";
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.line, 2u);
    EXPECT_GT(e.column, 1u);
  }
  EXPECT_THROW(parse_formula("X ->"), SyntaxError);
  EXPECT_THROW(parse_context("x X"), SyntaxError);
}

TEST(Syntax, ContextFiles) {
  Context g = parse_context("x:X, f:~X, y:Bot");
  EXPECT_EQ(g.size(), 3u);
  EXPECT_EQ(*g.lookup("f"), Formula::neg(X()));
}
