#include <atomic>
#include <set>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "ldk/harness.hpp"
#include "ldk/syntax.hpp"
#include "oracle.hpp"

using namespace ldk;

namespace {

std::map<std::size_t, std::size_t> library_counts(const GenSpec& spec) {
  std::map<std::size_t, std::size_t> out;
  for (std::size_t n = 1; n <= spec.size_bound; ++n) out[n] = 0;
  std::set<std::string> seen;
  for (const auto& t : enumerate_terms(spec)) {
    EXPECT_TRUE(seen.insert(oracle::nameless(t.term)).second) << "duplicate " << print(t.term);
    ++out[t.term.size()];
  }
  return out;
}

oracle::NaiveSpec naive_for(SystemId s, std::size_t bound) {
  oracle::NaiveSpec n;
  n.system = s;
  n.bound = bound;
  n.context = GenSpec::default_context();
  n.lambda_annots = oracle::formulas({"X"}, s, 1);
  n.delta_annots = oracle::formulas({"X"}, s, 3);
  // A term with n nodes has a type with at most 2n - 1 nodes.
  n.inj_annots = oracle::formulas({"X"}, s, 2 * bound - 1);
  n.case_annots = oracle::formulas({"X"}, s, 3);
  return n;
}

}  // namespace

TEST(Enumerate, SmallestTerms) {
  GenSpec spec;
  spec.system = SystemId::Small;
  spec.size_bound = 1;
  spec.context = parse_context("x:X");
  auto ts = enumerate_terms(spec);
  ASSERT_EQ(ts.size(), 1u);
  EXPECT_EQ(ts[0].term, Term::var("x"));
  EXPECT_EQ(ts[0].type, Formula::atom("X"));
}

TEST(Enumerate, TypeFilter) {
  GenSpec spec;
  spec.system = SystemId::Small;
  spec.size_bound = 2;
  spec.context = Context{};
  spec.type_filter = parse_formula("Bot -> Bot");
  auto ts = enumerate_terms(spec);
  ASSERT_EQ(ts.size(), 1u);
  EXPECT_TRUE(alpha_eq(ts[0].term, parse_term("\\z:Bot. z")));
}

TEST(Enumerate, AnnotationUniverse) {
  EXPECT_EQ(annotation_universe({"X"}, SystemId::Full, 1).size(), 2u);
  EXPECT_EQ(annotation_universe({"X"}, SystemId::Small, 3).size(), 6u);
  EXPECT_EQ(annotation_universe({"X"}, SystemId::DisjFree, 3).size(), 10u);
  EXPECT_EQ(annotation_universe({"X"}, SystemId::Full, 3).size(), 14u);
}

class CountsAgree : public ::testing::TestWithParam<std::pair<SystemId, std::size_t>> {};

TEST_P(CountsAgree, WithNaiveGenerateAndFilter) {
  auto [s, bound] = GetParam();
  GenSpec spec;
  spec.system = s;
  spec.size_bound = bound;
  EXPECT_EQ(library_counts(spec), oracle::naive_counts(naive_for(s, bound)));
}

INSTANTIATE_TEST_SUITE_P(Systems, CountsAgree,
                         ::testing::Values(std::make_pair(SystemId::Small, 5u),
                                           std::make_pair(SystemId::DisjFree, 5u),
                                           std::make_pair(SystemId::Full, 4u)),
                         [](const auto& info) {
                           return std::string(system_name(info.param.first)) + "_" +
                                  std::to_string(info.param.second);
                         });

TEST(Corpus, PrintParseAndTypesAgree) {
  GenSpec spec;
  spec.system = SystemId::Full;
  spec.size_bound = 5;
  std::size_t n = 0;
  for_each_term(spec, [&](const Typed& t) {
    ++n;
    Term back = parse_term(print(t.term), t.context);
    EXPECT_TRUE(alpha_eq(back, t.term)) << print(t.term);
    auto ty = oracle::type_of(t.context, t.term);
    ASSERT_TRUE(ty.has_value()) << print(t.term);
    EXPECT_EQ(*ty, t.type);
    EXPECT_EQ(infer(t.context, t.term), t.type);
  });
  EXPECT_GT(n, 1000u);
}

TEST(Corpus, SeedsAreTypedAndInSystem) {
  for (auto s : {SystemId::Full, SystemId::DisjFree, SystemId::Small})
    for (const auto& t : seeded_terms(s)) {
      EXPECT_EQ(oracle::type_of(t.context, t.term), t.type) << print(t.term);
      EXPECT_TRUE(in_system(t.term, s));
    }
}

TEST(Traces, MaximalTracesEndInNormalFormsOrAtTheLength) {
  Context g = parse_context("a:X, b:X");
  Term t = parse_term("<p1 <a, b>, p2 <a, b>>", g);
  bool truncated = true;
  auto ts = maximal_traces(g, t, RuleSet::system(SystemId::Full), 10, 64, &truncated);
  EXPECT_FALSE(truncated);
  ASSERT_EQ(ts.size(), 2u);
  for (const auto& tr : ts) EXPECT_EQ(tr.length(), 2u);
}

TEST(Suites, NamesAreUniqueAndUnknownNamesThrow) {
  const auto& names = suite_names();
  EXPECT_EQ(std::set<std::string>(names.begin(), names.end()).size(), names.size());
  EXPECT_THROW(run_suite("no-such-suite", {}), std::invalid_argument);
}

TEST(Suites, SubjectReductionOnSmallTerms) {
  SuiteOptions o;
  o.size_bound = 6;
  o.system = SystemId::Small;
  Report r = run_suite("subject-reduction", o);
  EXPECT_TRUE(r.passed());
  EXPECT_GT(r.cases_run, 0u);
}

TEST(Suites, StrongNormalizationSmall) {
  SuiteOptions o;
  o.size_bound = 7;
  Report r = run_suite("sn-small", o);
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.cap_hits, 0u);
}

TEST(Suites, ReportJson) {
  Report r;
  r.suite = "demo";
  r.cases_run = 3;
  r.failures.push_back({"x", "law", "w"});
  r.stats.push_back({"erasures", 2});
  auto j = report_json(r);
  EXPECT_EQ(j["suite"], "demo");
  EXPECT_EQ(j["cases_run"], 3);
  EXPECT_EQ(j["failures"].size(), 1u);
  EXPECT_EQ(r.stat("erasures"), 2u);
  EXPECT_EQ(r.stat("missing"), 0u);
}

TEST(Parallel, EveryIndexExactlyOnce) {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i]++; });
  for (auto& h : hits) EXPECT_EQ(h.load(), 1);
  EXPECT_THROW(parallel_for(10, 2, [](std::size_t i) {
                 if (i == 7) throw std::runtime_error("boom");
               }),
               std::runtime_error);
}

TEST(Oracle, InjectionAnnotationsFromChildTypeMatchTheFullList) {
  oracle::NaiveSpec listed = naive_for(SystemId::Full, 4);
  oracle::NaiveSpec typed = listed;
  typed.inj_annots.clear();
  EXPECT_EQ(oracle::naive_counts(listed), oracle::naive_counts(typed));
}
