#include <algorithm>

#include <gtest/gtest.h>

#include "ldk/rewrite.hpp"
#include "ldk/syntax.hpp"

using namespace ldk;

namespace {

Formula X() { return Formula::atom("X"); }
Term v(const char* x) { return Term::var(x); }

bool has(const std::vector<Redex>& rs, const Position& p, RuleId r) {
  return std::find(rs.begin(), rs.end(), Redex{p, r}) != rs.end();
}

}  // namespace

TEST(Rules, NamesRoundTrip) {
  for (std::size_t i = 0; i < kRuleCount; ++i) {
    auto r = static_cast<RuleId>(i);
    EXPECT_EQ(parse_rule(rule_name(r)), r);
  }
  EXPECT_EQ(parse_rule("ρ3"), RuleId::Rho3);
  EXPECT_EQ(parse_rule("κ"), RuleId::Kappa);
  EXPECT_FALSE(parse_rule("rho9"));
}

TEST(Rules, SystemSets) {
  RuleSet full = RuleSet::system(SystemId::Full);
  RuleSet df = RuleSet::system(SystemId::DisjFree);
  RuleSet small = RuleSet::system(SystemId::Small);
  EXPECT_EQ(full.rules().size(), 13u);
  for (auto r : {RuleId::BetaDisj, RuleId::PiDisj, RuleId::Rho1Disj, RuleId::Rho1BotDisj})
    EXPECT_FALSE(df.contains(r));
  EXPECT_EQ(small, (RuleSet{RuleId::BetaImp, RuleId::Rho1Imp, RuleId::Rho2}));
  for (auto r : {RuleId::Rho3, RuleId::Rho4, RuleId::Kappa, RuleId::Iota}) {
    EXPECT_TRUE(is_aux(r));
    EXPECT_FALSE(full.contains(r));
  }
}

TEST(Redexes, Beta) {
  Context g = Context::of({{"a", X()}});
  Term t = parse_term("(\\x:X. x) a", g);
  auto rs = redexes(g, t, {RuleId::BetaImp});
  ASSERT_EQ(rs.size(), 1u);
  EXPECT_EQ(rs[0], (Redex{{}, RuleId::BetaImp}));

  Context h = parse_context("a:X, b:Y");
  auto ps = redexes(h, parse_term("p1 <a, b>", h), RuleSet::system(SystemId::Full));
  ASSERT_EQ(ps.size(), 1u);
  EXPECT_EQ(ps[0], (Redex{{}, RuleId::BetaConj}));
}

TEST(Redexes, BothRho1VariantsAtBottom) {
  Context g = parse_context("n:X, y:Bot");
  Term t = parse_term("(delta k:~(X -> Bot). y) n", g);
  auto rs = redexes(g, t, RuleSet::system(SystemId::Full));
  EXPECT_TRUE(has(rs, {}, RuleId::Rho1Imp));
  EXPECT_TRUE(has(rs, {}, RuleId::Rho1BotImp));
  // Off Bot only the plain variant applies.
  Term u = parse_term("(delta k:~(X -> X). y) n", g);
  auto us = redexes(g, u, RuleSet::system(SystemId::Full));
  EXPECT_TRUE(has(us, {}, RuleId::Rho1Imp));
  EXPECT_FALSE(has(us, {}, RuleId::Rho1BotImp));
}

TEST(Redexes, AuxRulesOnlyWhenAsked) {
  Context g = parse_context("y:Bot");
  Term t = parse_term("delta k:~Bot. k y", g);
  auto sys = redexes(g, t, RuleSet::system(SystemId::Full));
  EXPECT_TRUE(has(sys, {}, RuleId::Rho2));
  EXPECT_FALSE(has(sys, {}, RuleId::Rho3));
  auto aux = redexes(g, t, {RuleId::Rho3, RuleId::Kappa});
  EXPECT_TRUE(has(aux, {}, RuleId::Rho3));
  EXPECT_TRUE(has(aux, {0}, RuleId::Kappa));
}

TEST(Contract, Rho2) {
  Context g = parse_context("y:X");
  Term t = parse_term("delta k:~X. k y", g);
  EXPECT_EQ(contract(g, t, {}, RuleId::Rho2), v("y"));
  Term u = parse_term("delta k:~X. k (delta j:~X. k y)", g);
  EXPECT_THROW(contract(g, u, {}, RuleId::Rho2), NotARedex);
}

TEST(Contract, Rho1OnApplication) {
  Context g = parse_context("n:X, y:Bot");
  Term t = parse_term("(delta k:~(X -> X). k (\\u:X. u)) n", g);
  Term out = contract(g, t, {}, RuleId::Rho1Imp);
  Term want = parse_term("delta k':~X. (\\z:X -> X. k' (z n)) (\\u:X. u)", g);
  EXPECT_TRUE(alpha_eq(out, want)) << print(out);
  EXPECT_EQ(infer(g, out), infer(g, t));
}

TEST(Contract, Rho4) {
  Context g = parse_context("y:Bot");
  Term t = parse_term("delta j:~Bot. j (delta k:~Bot. k y)", g);
  Term out = contract(g, t, {0}, RuleId::Rho4);
  EXPECT_TRUE(alpha_eq(out, parse_term("delta j:~Bot. j y", g))) << print(out);
}

TEST(Contract, Rho3AndKappaAndIota) {
  Context g = parse_context("y:Bot");
  Term t = parse_term("delta k:~Bot. k y", g);
  EXPECT_TRUE(alpha_eq(contract(g, t, {}, RuleId::Rho3), Term::app(identity_bot(), v("y"))));
  EXPECT_TRUE(alpha_eq(contract(g, t, {0}, RuleId::Kappa), parse_term("delta k:~Bot. y", g)));
  Term i = Term::app(identity_bot(), v("y"));
  EXPECT_EQ(contract(g, i, {}, RuleId::Iota), v("y"));
}

TEST(Normalize, OneBetaStep) {
  Context g = Context::of({{"y", X()}});
  Trace tr = normalize(g, parse_term("(\\x:X. x) y", g), RuleSet::system(SystemId::Small),
                       Strategy::LeftmostOutermost, 100);
  ASSERT_EQ(tr.length(), 1u);
  EXPECT_EQ(tr.steps[0].rule, RuleId::BetaImp);
  EXPECT_EQ(tr.end(), v("y"));
}

TEST(Normalize, BothStrategiesReachTheUniqueNormalForm) {
  Context g = parse_context("a:X, b:X, c:X");
  Term t = parse_term("p2 <a, p1 <b, c>>", g);
  RuleSet full = RuleSet::system(SystemId::Full);
  for (auto s : {Strategy::LeftmostOutermost, Strategy::LeftmostInnermost}) {
    Trace tr = normalize(g, t, full, s, 100);
    EXPECT_EQ(tr.length(), 2u);
    EXPECT_EQ(tr.end(), v("b"));
  }
  // Every normal form in the graph is b.
  ReductionGraph gr = reduction_graph(g, t, full);
  for (std::size_t i = 0; i < gr.nodes.size(); ++i) {
    bool outgoing = std::any_of(gr.edges.begin(), gr.edges.end(),
                                [&](const auto& e) { return e.from == i; });
    if (!outgoing) EXPECT_EQ(gr.nodes[i], v("b"));
  }
}

TEST(Normalize, FuelExhaustion) {
  Context g = parse_context("a:X");
  Term t = parse_term("p1 <p1 <p1 <a, a>, a>, a>", g);
  try {
    normalize(g, t, RuleSet::system(SystemId::Full), Strategy::LeftmostOutermost, 2);
    FAIL() << "expected fuel exhaustion";
  } catch (const FuelExhausted& e) {
    EXPECT_EQ(e.trace.length(), 2u);
  }
}

TEST(Graph, Examples) {
  Context g = parse_context("a:X, b:X, z:Bot");
  ReductionGraph one = reduction_graph(g, v("a"), RuleSet::system(SystemId::Full));
  EXPECT_EQ(one.nodes.size(), 1u);
  EXPECT_EQ(one.verdict, Verdict::ExhaustedAndAcyclic);

  ReductionGraph two = reduction_graph(g, parse_term("p1 <a, b>", g), RuleSet::system(SystemId::Full));
  EXPECT_EQ(two.nodes.size(), 2u);
  EXPECT_EQ(two.edges.size(), 1u);
  EXPECT_EQ(two.longest_path(), 1u);

  Term ii = Term::app(identity_bot(), Term::app(identity_bot(), v("z")));
  ReductionGraph iota = reduction_graph(g, ii, RuleSet::system(SystemId::Small) | RuleSet{RuleId::Iota});
  EXPECT_EQ(iota.nodes.size(), 3u);
  EXPECT_EQ(iota.verdict, Verdict::ExhaustedAndAcyclic);
  EXPECT_NE(iota.to_dot().find("digraph"), std::string::npos);
}

TEST(Graph, BoundExceeded) {
  Context g = parse_context("a:X");
  Term t = parse_term("p1 <p1 <a, a>, p1 <a, a>>", g);
  ReductionGraph gr = reduction_graph(g, t, RuleSet::system(SystemId::Full), 2);
  EXPECT_EQ(gr.verdict, Verdict::BoundExceeded);
}

TEST(Traces, JsonLinesRoundTrip) {
  Context g = parse_context("a:X, b:X");
  Term t = parse_term("p2 <a, p1 <b, a>>", g);
  Trace tr = normalize(g, t, RuleSet::system(SystemId::Full), Strategy::LeftmostInnermost, 10);
  std::string text = trace_to_jsonl(tr);
  EXPECT_EQ(text.substr(0, text.find('\n')),
            R"({"pos":[],"rule":"start","step":0,"term":"p2 <a, p1 <b, a>>"})");
  Trace back = trace_from_jsonl(g, text);
  EXPECT_EQ(trace_to_jsonl(back), text);
  EXPECT_TRUE(trace_is_valid(g, back, RuleSet::system(SystemId::Full)));
  EXPECT_FALSE(trace_is_valid(g, back, RuleSet::system(SystemId::Small)));
}

TEST(Traces, ReplayAndPaths) {
  Context g = parse_context("a:X, b:X");
  Term t = parse_term("<p1 <a, b>, p2 <a, b>>", g);
  Trace tr = replay(g, t, {{RuleId::BetaConj, {1}}, {RuleId::BetaConj, {0}}});
  EXPECT_TRUE(alpha_eq(tr.end(), parse_term("<a, b>", g)));
  auto path = find_path(g, t, tr.end(), RuleSet::system(SystemId::Full));
  ASSERT_TRUE(path);
  EXPECT_EQ(path->size(), 2u);
  EXPECT_FALSE(find_path(g, tr.end(), t, RuleSet::system(SystemId::Full)));
}
