#include "ldk/harness.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <set>
#include <tuple>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "ldk/conjfree.hpp"
#include "ldk/demorgan.hpp"
#include "ldk/syntax.hpp"

namespace ldk {

Context GenSpec::default_context() {
  Formula x = Formula::atom("X");
  return Context::of({{"x", x}, {"y", Formula::bottom()}, {"f", Formula::neg(x)}});
}

std::vector<Formula> annotation_universe(const std::vector<std::string>& atoms, SystemId system,
                                         std::size_t max_size) {
  // by_size[n] holds the formulas with exactly n nodes.
  std::vector<std::vector<Formula>> by_size(max_size + 1);
  if (max_size >= 1) {
    for (const auto& a : atoms) by_size[1].push_back(Formula::atom(a));
    by_size[1].push_back(Formula::bottom());
  }
  for (std::size_t n = 3; n <= max_size; ++n) {
    for (std::size_t i = 1; i + 1 < n; ++i) {
      for (const auto& l : by_size[i]) {
        for (const auto& r : by_size[n - 1 - i]) {
          by_size[n].push_back(Formula::imp(l, r));
          if (system != SystemId::Small) by_size[n].push_back(Formula::conj(l, r));
          if (system == SystemId::Full) by_size[n].push_back(Formula::disj(l, r));
        }
      }
    }
  }
  std::vector<Formula> out;
  for (const auto& v : by_size) out.insert(out.end(), v.begin(), v.end());
  return out;
}

namespace {

using Types = std::set<Formula>;
using Terms = std::vector<Term>;

// A context with two interned memo keys: one for the exact context, and one
// for the set of types it declares, which is all that inhabitation depends on.
struct Scope {
  Context g;
  std::size_t key;
  std::size_t type_key;
};

// Typing-derivation enumerator. Terms are produced per requested type, so a
// reductio body only ever generates terms of type Bot. Results are memoized
// on (context, exact size[, type]).
class Generator {
 public:
  explicit Generator(const GenSpec& spec) : spec_(spec) {
    auto pick = [&](const std::vector<Formula>& given, std::size_t dflt) {
      if (given.empty()) return annotation_universe(spec.atoms, spec.system, dflt);
      std::vector<Formula> out;
      for (const auto& a : given)
        if (in_system(a, spec.system)) out.push_back(a);
      return out;
    };
    universe_ = pick(spec.annotations, 1);
    delta_universe_ = pick(spec.delta_annotations, 3);
    pairs_ = spec.system != SystemId::Small;
    sums_ = spec.system == SystemId::Full;
  }

  Scope root(const Context& g) {
    Types declared;
    for (const auto& [x, a] : g.decls()) declared.insert(a);
    return {g, 0, intern(std::move(declared))};
  }

  Scope extend(const Scope& s, const Name& x, const Formula& a) {
    auto [it, added] = scopes_.try_emplace(std::make_tuple(s.key, x, a), scopes_.size() + 1);
    auto [tt, tadded] = type_scopes_.try_emplace(std::make_pair(s.type_key, a), 0);
    if (tadded) {
      Types declared = type_sets_[s.type_key];
      declared.insert(a);
      tt->second = intern(std::move(declared));
    }
    return {s.g.extended(x, a), it->second, tt->second};
  }

  const Types& types(const Scope& g, std::size_t n) {
    auto key = std::make_pair(g.type_key, n);
    if (auto it = type_memo_.find(key); it != type_memo_.end()) return it->second;
    Types out = build_types(g, n);
    return type_memo_.emplace(key, std::move(out)).first->second;
  }

  const Terms& terms(const Scope& g, std::size_t n, const Formula& a) {
    auto key = std::make_tuple(g.key, n, a);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    Terms out;
    build_terms(g, n, a, [&](Term t) { out.push_back(std::move(t)); });
    return memo_.emplace(key, std::move(out)).first->second;
  }

  // Like terms(), but the result is handed out rather than memoized.
  void stream(const Scope& g, std::size_t n, const Formula& a, const std::function<void(Term)>& emit) {
    build_terms(g, n, a, emit);
  }

 private:
  bool annotatable(const Formula& a) const {
    return std::find(universe_.begin(), universe_.end(), a) != universe_.end();
  }
  bool delta_annotatable(const Formula& a) const {
    return std::find(delta_universe_.begin(), delta_universe_.end(), a) != delta_universe_.end();
  }

  Types build_types(const Scope& g, std::size_t n) {
    Types out;
    if (n == 0) return out;
    if (n == 1) {
      for (const auto& [x, a] : g.g.decls()) out.insert(a);
      return out;
    }
    NameSet names = g.g.names();
    Name u = fresh(names, "u");
    for (const auto& a : universe_)
      for (const auto& b : types(extend(g, u, a), n - 1)) out.insert(Formula::imp(a, b));
    Name k = fresh(names, "k");
    for (const auto& a : delta_universe_)
      if (types(extend(g, k, Formula::neg(a)), n - 1).count(Formula::bottom())) out.insert(a);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const Types& fs = types(g, i);
      const Types& as = types(g, n - 1 - i);
      for (const auto& f : fs)
        if (f.is_imp() && as.count(f.left())) out.insert(f.right());
      if (pairs_)
        for (const auto& l : fs)
          for (const auto& r : as) out.insert(Formula::conj(l, r));
    }
    if (pairs_) {
      for (const auto& c : types(g, n - 1)) {
        if (!c.is_conj()) continue;
        out.insert(c.left());
        out.insert(c.right());
      }
    }
    if (sums_) {
      for (const auto& a : types(g, n - 1)) {
        for (const auto& b : universe_) {
          out.insert(Formula::disj(a, b));
          out.insert(Formula::disj(b, a));
        }
      }
      Name v = fresh(names, "v");
      for (std::size_t i = 1; i + 2 < n; ++i) {
        for (std::size_t j = 1; i + j + 1 < n; ++j) {
          for (const auto& d : types(g, i)) {
            if (!d.is_disj()) continue;
            const Types& ps = types(extend(g, v, d.left()), j);
            const Types& qs = types(extend(g, v, d.right()), n - 1 - i - j);
            for (const auto& c : ps)
              if (qs.count(c)) out.insert(c);
          }
        }
      }
    }
    return out;
  }

  template <class Emit>
  void build_terms(const Scope& g, std::size_t n, const Formula& a, Emit&& emit) {
    if (n == 0) return;
    if (n == 1) {
      for (const auto& [x, b] : g.g.decls())
        if (b == a) emit(Term::var(x));
      return;
    }
    NameSet names = g.g.names();
    if (a.is_imp() && annotatable(a.left())) {
      Name u = fresh(names, "u");
      for (const auto& m : terms(extend(g, u, a.left()), n - 1, a.right()))
        emit(Term::lam(u, a.left(), m));
    }
    if (delta_annotatable(a)) {
      Name k = fresh(names, "k");
      for (const auto& m : terms(extend(g, k, Formula::neg(a)), n - 1, Formula::bottom()))
        emit(Term::delta(k, a, m));
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
      std::size_t j = n - 1 - i;
      const Types& as = types(g, j);
      for (const auto& f : types(g, i)) {
        if (!f.is_imp() || f.right() != a || !as.count(f.left())) continue;
        const Terms& args = terms(g, j, f.left());
        for (const auto& m : terms(g, i, f))
          for (const auto& arg : args) emit(Term::app(m, arg));
      }
      if (pairs_ && a.is_conj()) {
        const Terms& rs = terms(g, j, a.right());
        for (const auto& l : terms(g, i, a.left()))
          for (const auto& r : rs) emit(Term::pair(l, r));
      }
    }
    if (pairs_) {
      for (const auto& c : types(g, n - 1)) {
        if (!c.is_conj()) continue;
        if (c.left() == a)
          for (const auto& m : terms(g, n - 1, c)) emit(Term::proj(1, m));
        if (c.right() == a)
          for (const auto& m : terms(g, n - 1, c)) emit(Term::proj(2, m));
      }
    }
    if (sums_) {
      if (a.is_disj()) {
        if (annotatable(a.right()))
          for (const auto& m : terms(g, n - 1, a.left())) emit(Term::inj(1, a, m));
        if (annotatable(a.left()))
          for (const auto& m : terms(g, n - 1, a.right())) emit(Term::inj(2, a, m));
      }
      Name v = fresh(names, "v");
      for (std::size_t i = 1; i + 2 < n; ++i) {
        for (std::size_t j = 1; i + j + 1 < n; ++j) {
          std::size_t l = n - 1 - i - j;
          for (const auto& d : types(g, i)) {
            if (!d.is_disj()) continue;
            Scope gl = extend(g, v, d.left());
            Scope gr = extend(g, v, d.right());
            if (!types(gl, j).count(a) || !types(gr, l).count(a)) continue;
            const Terms& qs = terms(gr, l, a);
            const Terms& ps = terms(gl, j, a);
            for (const auto& m : terms(g, i, d))
              for (const auto& p : ps)
                for (const auto& q : qs) emit(Term::case_of(m, v, d.left(), p, v, d.right(), q));
          }
        }
      }
    }
  }

  const GenSpec& spec_;
  std::vector<Formula> universe_;
  std::vector<Formula> delta_universe_;
  bool pairs_ = false;
  bool sums_ = false;
  std::size_t intern(Types declared) {
    auto [it, added] = type_set_ids_.try_emplace(declared, type_sets_.size());
    if (added) type_sets_.push_back(std::move(declared));
    return it->second;
  }

  std::map<std::tuple<std::size_t, Name, Formula>, std::size_t> scopes_;
  std::map<std::pair<std::size_t, Formula>, std::size_t> type_scopes_;
  std::map<Types, std::size_t> type_set_ids_;
  std::vector<Types> type_sets_;
  std::map<std::pair<std::size_t, std::size_t>, Types> type_memo_;
  std::map<std::tuple<std::size_t, std::size_t, Formula>, Terms> memo_;
};

}  // namespace

void for_each_term(const GenSpec& spec, const std::function<void(const Typed&)>& visit) {
  Generator gen(spec);
  Scope top = gen.root(spec.context);
  for (std::size_t n = 1; n <= spec.size_bound; ++n) {
    for (const auto& a : gen.types(top, n)) {
      if (spec.type_filter && *spec.type_filter != a) continue;
      gen.stream(top, n, a, [&](Term t) { visit(Typed{spec.context, std::move(t), a}); });
    }
  }
}

std::vector<Typed> enumerate_terms(const GenSpec& spec) {
  std::vector<Typed> out;
  for_each_term(spec, [&](const Typed& t) { out.push_back(t); });
  return out;
}

std::vector<Typed> seeded_terms(SystemId system) {
  static const char* kSources[] = {
      // commuting case over case, at an atom and at Bot
      "case (case in1[X \\/ X] x of { a:X => in1[X \\/ X] a | b:X => in2[X \\/ X] b }) of "
      "{ c:X => c | d:X => x }",
      "case (case in1[X \\/ X] x of { a:X => in1[X \\/ X] a | b:X => in2[X \\/ X] b }) of "
      "{ c:X => f c | d:X => y }",
      // rho1 on case with the reductio variable used twice, never, and at Bot
      "case (delta h:~(X \\/ X). h (in1[X \\/ X] (delta j:~X. h (in2[X \\/ X] x)))) of "
      "{ c:X => c | d:X => d }",
      "case (delta h:~(X \\/ X). y) of { c:X => c | d:X => x }",
      "case (delta h:~(X \\/ X). h (in1[X \\/ X] (delta j:~X. h (in2[X \\/ X] x)))) of "
      "{ c:X => f c | d:X => y }",
      // rho4 against rho2 (erasure), at Bot and at an atom
      "delta g:~Bot. g (delta h:~Bot. h y)",
      "delta g:~X. g (delta h:~X. h x)",
      // rho4 inside an argument that a beta step duplicates or erases
      "(\\a:Bot. <a, a>) (f (delta h:~X. h x))",
      "(\\a:Bot. x) (f (delta h:~X. h x))",
      // rho1 on a projection with the reductio variable used twice and never
      "p1 (delta h:~(X /\\ X). h <delta j:~X. h <x, x>, x>)",
      "p1 (delta h:~(X /\\ X). y)",
      "p2 (delta h:~(X /\\ Bot). h <x, y>)",
      // rho3 followed by a step it creates
      "delta j:~X. delta h:~Bot. j x",
      "delta h:~Bot. h (h y)",
      "delta j:~X. (delta h:~~X. j x) x",
  };
  Context g = GenSpec::default_context();
  std::vector<Typed> out;
  for (const char* src : kSources) {
    Term t = parse_term(src, g);
    if (!in_system(t, system)) continue;
    auto a = try_infer(g, t);
    if (!a) throw std::logic_error(std::string("ill-typed seed: ") + src);
    if (system != SystemId::Full && a->contains(FormulaKind::Disj)) continue;
    if (system == SystemId::Small && a->contains(FormulaKind::Conj)) continue;
    out.push_back({g, t, *a});
  }
  return out;
}

std::vector<Trace> maximal_traces(const Context& gamma, const Term& t, const RuleSet& rules,
                                  std::size_t max_len, std::size_t max_traces, bool* truncated) {
  std::vector<Trace> out;
  Trace cur(t);
  bool cut = false;
  std::function<void()> go = [&] {
    if (out.size() >= max_traces) {
      cut = true;
      return;
    }
    auto rs = cur.length() < max_len ? redexes(gamma, cur.end(), rules) : std::vector<Redex>{};
    if (rs.empty()) {
      out.push_back(cur);
      return;
    }
    for (const auto& r : rs) {
      cur.steps.push_back(make_step(gamma, cur.end(), r.position, r.rule));
      go();
      cur.steps.pop_back();
      if (cut) return;
    }
  };
  go();
  if (truncated) *truncated = cut;
  return out;
}

std::size_t Report::stat(const std::string& key) const {
  for (const auto& [k, v] : stats)
    if (k == key) return v;
  return 0;
}

nlohmann::json report_json(const Report& r, std::size_t max_failures) {
  nlohmann::json fails = nlohmann::json::array();
  for (std::size_t i = 0; i < r.failures.size() && i < max_failures; ++i)
    fails.push_back({{"input", r.failures[i].input},
                     {"law", r.failures[i].law},
                     {"witness", r.failures[i].witness}});
  nlohmann::json stats = nlohmann::json::object();
  for (const auto& [k, v] : r.stats) stats[k] = v;
  return {{"suite", r.suite},
          {"cases_run", r.cases_run},
          {"failure_count", r.failures.size()},
          {"failures", fails},
          {"cap_hits", r.cap_hits},
          {"stats", stats},
          {"elapsed_s", r.elapsed.count()},
          {"passed", r.passed()}};
}

void parallel_for(std::size_t n, std::size_t threads,
                  const std::function<void(std::size_t)>& work) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) work(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          work(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

namespace {

struct ItemResult {
  std::size_t cases = 0;
  std::size_t cap_hits = 0;
  std::vector<Failure> failures;
  std::map<std::string, std::size_t> counts;  // summed
  std::map<std::string, std::size_t> maxima;  // max-merged

  void fail(std::string input, std::string law, std::string witness) {
    failures.push_back({std::move(input), std::move(law), std::move(witness)});
  }
};

std::string show(const Context& g, const Term& t) { return g.str() + " |- " + print(t); }

std::string show_step(const Context& g, const Term& t, RuleId r, const Position& p) {
  return show(g, t) + " @ " + std::string(rule_name(r)) + " " + p.str();
}

std::string show_trace(const Trace& t) {
  std::string s;
  for (const auto& st : t.steps) {
    if (!s.empty()) s += ", ";
    s += std::string(rule_name(st.rule)) + " " + st.position.str();
  }
  return "[" + s + "]";
}

struct CorpusKey {
  SystemId system;
  std::size_t bound;
  std::vector<std::string> atoms;
  std::size_t lambda_size;
  std::size_t delta_size;
  auto operator<=>(const CorpusKey&) const = default;
};

const std::vector<Typed>& corpus(SystemId system, std::size_t bound, const SuiteOptions& o) {
  static std::mutex mu;
  static std::map<CorpusKey, std::vector<Typed>> cache;
  std::lock_guard lock(mu);
  CorpusKey key{system, bound, o.atoms, o.lambda_annotation_size, o.delta_annotation_size};
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  GenSpec spec;
  spec.atoms = o.atoms;
  spec.system = system;
  spec.size_bound = bound;
  spec.annotations = annotation_universe(o.atoms, system, o.lambda_annotation_size);
  spec.delta_annotations = annotation_universe(o.atoms, system, o.delta_annotation_size);
  return cache.emplace(key, enumerate_terms(spec)).first->second;
}

std::vector<Typed> corpus_with_seeds(SystemId system, const SuiteOptions& o) {
  std::vector<Typed> items = corpus(system, o.size_bound, o);
  for (auto& t : seeded_terms(system)) items.push_back(std::move(t));
  return items;
}

Report run_items(const std::string& name, std::size_t n, const SuiteOptions& o,
                 const std::function<void(std::size_t, ItemResult&)>& work) {
  auto t0 = std::chrono::steady_clock::now();
  std::vector<ItemResult> results(n);
  parallel_for(n, o.threads, [&](std::size_t i) {
    try {
      work(i, results[i]);
    } catch (const std::exception& e) {
      results[i].fail("item " + std::to_string(i), "no exception", e.what());
    }
  });
  Report r;
  r.suite = name;
  std::map<std::string, std::size_t> counts, maxima;
  for (auto& res : results) {
    r.cases_run += res.cases;
    r.cap_hits += res.cap_hits;
    for (auto& f : res.failures) r.failures.push_back(std::move(f));
    for (const auto& [k, v] : res.counts) counts[k] += v;
    for (const auto& [k, v] : res.maxima) maxima[k] = std::max(maxima[k], v);
  }
  for (const auto& [k, v] : counts) r.stats.emplace_back(k, v);
  for (const auto& [k, v] : maxima) r.stats.emplace_back(k, v);
  r.elapsed = std::chrono::steady_clock::now() - t0;
  return r;
}

// ---------------------------------------------------------------------------

Report subject_reduction(const SuiteOptions& o) {
  SystemId sys = o.system.value_or(SystemId::Full);
  const auto& items = corpus(sys, o.size_bound, o);
  RuleSet rules = RuleSet::system(sys);
  return run_items("subject-reduction", items.size(), o, [&](std::size_t i, ItemResult& r) {
    const Typed& it = items[i];
    for (const auto& rx : redexes(it.context, it.term, rules)) {
      ++r.cases;
      Term after = contract(it.context, it.term, rx.position, rx.rule);
      auto ty = try_infer(it.context, after);
      if (!ty || *ty != it.type)
        r.fail(show_step(it.context, it.term, rx.rule, rx.position), "type preserved",
               print(after) + " : " + (ty ? ty->str() : "ill-typed") + ", expected " +
                   it.type.str());
    }
  });
}

Report subst_lemma(const SuiteOptions& o, bool demorgan) {
  SystemId sys = demorgan ? SystemId::Full : SystemId::DisjFree;
  const auto& ms = corpus(sys, o.subst_bound_m, o);
  const auto& ns = corpus(sys, o.subst_bound_n, o);
  std::map<Formula, std::vector<const Typed*>> by_type;
  for (const auto& n : ns) by_type[n.type].push_back(&n);
  auto tr = [&](const Context& g, const Term& t) { return demorgan ? dm_term(g, t) : cf_term(g, t); };
  return run_items(demorgan ? "subst-lemma-dm" : "subst-lemma-cf", ms.size(), o,
                   [&](std::size_t i, ItemResult& r) {
                     const Typed& m = ms[i];
                     Term tm = tr(m.context, m.term);
                     for (const auto& x : free_vars(m.term)) {
                       const Formula* a = m.context.lookup(x);
                       auto it = by_type.find(*a);
                       if (it == by_type.end()) continue;
                       for (const Typed* n : it->second) {
                         ++r.cases;
                         Term lhs = tr(m.context, subst(m.term, x, n->term));
                         Term rhs = subst(tm, x, tr(n->context, n->term));
                         if (!alpha_eq(lhs, rhs))
                           r.fail(show(m.context, m.term) + " [" + print(n->term) + "/" + x + "]",
                                  "translation commutes with substitution",
                                  print(lhs) + " vs " + print(rhs));
                       }
                     }
                   });
}

Report soundness(const SuiteOptions& o, bool demorgan) {
  SystemId sys = demorgan ? SystemId::Full : SystemId::DisjFree;
  const auto& items = corpus(sys, o.size_bound, o);
  return run_items(demorgan ? "soundness-dm" : "soundness-cf", items.size(), o,
                   [&](std::size_t i, ItemResult& r) {
                     const Typed& it = items[i];
                     ++r.cases;
                     Context tg = demorgan ? dm_context(it.context) : cf_context(it.context);
                     Term t = demorgan ? dm_term(it.context, it.term) : cf_term(it.context, it.term);
                     Formula want = demorgan ? dm_formula(it.type) : cf_formula(it.type);
                     SystemId image = demorgan ? SystemId::DisjFree : SystemId::Small;
                     auto got = try_infer(tg, t);
                     if (!got || *got != want)
                       r.fail(show(it.context, it.term), "translation typed by translated formula",
                              print(t) + " : " + (got ? got->str() : "ill-typed") +
                                  ", expected " + want.str());
                     else if (!in_system(t, image))
                       r.fail(show(it.context, it.term), "image inside the target system", print(t));
                   });
}

int expected_item_dm(RuleId r) {
  switch (r) {
    case RuleId::Rho1BotDisj: return 2;
    case RuleId::BetaDisj:
    case RuleId::PiImp:
    case RuleId::PiConj: return 3;
    case RuleId::PiDisj:
    case RuleId::Rho1Disj: return 4;
    default: return 1;
  }
}

bool all_rules(const Trace& t, std::initializer_list<RuleId> allowed) {
  return std::all_of(t.steps.begin(), t.steps.end(), [&](const Step& s) {
    return std::find(allowed.begin(), allowed.end(), s.rule) != allowed.end();
  });
}

bool is_rho1(RuleId r) {
  return r == RuleId::Rho1Imp || r == RuleId::Rho1Conj || r == RuleId::Rho1Disj ||
         r == RuleId::Rho1BotImp || r == RuleId::Rho1BotConj || r == RuleId::Rho1BotDisj;
}

// Step-count profile of a simulated step, as fixed by the acceptance table.
std::string dm_profile_problem(RuleId rule, bool bot, const SimStepResult& s) {
  const Trace& t = s.target;
  switch (expected_item_dm(rule)) {
    case 1:
      if (t.length() != 1 || t.steps[0].rule != rule || s.residual.length() != 0)
        return "expected one step labelled " + std::string(rule_name(rule));
      return {};
    case 2:
      if (t.length() != 1 || t.steps[0].rule != RuleId::Rho1BotImp || s.residual.length() != 0)
        return "expected one rho1bot_imp step";
      return {};
    case 3:
      if (rule == RuleId::BetaDisj) {
        if (bot) {
          if (t.length() != 3 || !all_rules(t, {RuleId::BetaImp, RuleId::BetaConj}))
            return "expected 3 beta steps";
        } else if (t.length() != 4 || !all_rules(t, {RuleId::BetaImp, RuleId::BetaConj, RuleId::Rho2}) ||
                   t.steps[3].rule != RuleId::Rho2 || t.count(RuleId::Rho2) != 1) {
          return "expected 3 beta steps then rho2";
        }
      } else if (t.length() != 3 || !is_rho1(t.steps[0].rule) || t.count(RuleId::BetaImp) != 2) {
        return "expected one rho1 step then two beta_imp steps";
      }
      if (s.residual.length() != 0) return "unexpected residual";
      return {};
    default:
      if (t.length() != 1 || t.steps[0].rule != RuleId::Rho1BotImp || s.residual.length() != 1)
        return "expected one rho1bot_imp step and one rho4 residual, got " + show_trace(t) +
               " with " + std::to_string(s.residual.length()) + " rho4";
      return {};
  }
}

Report translation_step_dm(const SuiteOptions& o) {
  auto items = corpus_with_seeds(SystemId::Full, o);
  RuleSet rules = RuleSet::system(SystemId::Full);
  return run_items("thm-translation-step-dm", items.size(), o, [&](std::size_t i, ItemResult& r) {
    const Typed& it = items[i];
    for (const auto& rx : redexes(it.context, it.term, rules)) {
      ++r.cases;
      ++r.counts["rule:" + std::string(rule_name(rx.rule))];
      std::string in = show_step(it.context, it.term, rx.rule, rx.position);
      Step st = make_step(it.context, it.term, rx.position, rx.rule);
      try {
        SimStepResult s = simulate_step(it.context, st);
        if (s.item != expected_item_dm(rx.rule))
          r.fail(in, "item", "got item " + std::to_string(s.item));
        bool bot = infer(context_at(it.context, it.term, rx.position), subterm_at(it.term, rx.position))
                       .is_bottom();
        std::string why = dm_profile_problem(rx.rule, bot, s);
        if (!why.empty()) {
          ++r.counts["profile deviations that still replay and close"];
          r.fail(in, "step-count profile", why);
        }
      } catch (const Error& e) {
        r.fail(in, "replay", e.what());
      }
    }
  });
}

Report translation_seq(const SuiteOptions& o, bool demorgan) {
  SystemId sys = demorgan ? SystemId::Full : SystemId::DisjFree;
  auto items = corpus_with_seeds(sys, o);
  RuleSet rules = RuleSet::system(sys);
  return run_items(demorgan ? "thm-translation-seq-dm" : "thm-translation-seq-cf", items.size(), o,
                   [&](std::size_t i, ItemResult& r) {
                     const Typed& it = items[i];
                     bool cut = false;
                     auto traces = maximal_traces(it.context, it.term, rules, o.trace_len,
                                                  o.traces_per_term, &cut);
                     if (cut) ++r.cap_hits;
                     for (const auto& s : traces) {
                       ++r.cases;
                       std::string in = show(it.context, it.term) + " " + show_trace(s);
                       try {
                         SimCertificate c = demorgan ? simulate_sequence(it.context, s)
                                                     : simulate_sequence_cf(it.context, s);
                         r.maxima["longest source"] =
                             std::max(r.maxima["longest source"], s.length());
                         r.maxima["longest target"] =
                             std::max(r.maxima["longest target"], c.target.length());
                         r.maxima["longest rho4 chain"] =
                             std::max(r.maxima["longest rho4 chain"], c.rho4.length());
                         if (!c.ok) r.fail(in, "certificate", c.problem);
                       } catch (const Error& e) {
                         r.fail(in, "certificate construction", e.what());
                       }
                     }
                   });
}

Report commutation(const SuiteOptions& o) {
  auto items = corpus_with_seeds(SystemId::Full, o);
  // The images of the corpus are where rho4 steps are used.
  std::size_t base = items.size();
  for (std::size_t i = 0; i < base; ++i)
    items.push_back({dm_context(items[i].context), dm_term(items[i].context, items[i].term),
                     dm_formula(items[i].type)});
  RuleSet rules = RuleSet::system(SystemId::Full);
  RuleSet rho4{RuleId::Rho4};
  Report rep = run_items("lemma-commutation", items.size(), o, [&](std::size_t i, ItemResult& r) {
    const Typed& it = items[i];
    auto r4 = redexes(it.context, it.term, rho4);
    if (r4.empty()) return;
    auto others = redexes(it.context, it.term, rules);
    for (const auto& a : r4) {
      Step s4 = make_step(it.context, it.term, a.position, RuleId::Rho4);
      for (const auto& b : others) {
        ++r.cases;
        std::string in = show(it.context, it.term) + " rho4 " + a.position.str() + " vs " +
                         std::string(rule_name(b.rule)) + " " + b.position.str();
        Step sr = make_step(it.context, it.term, b.position, b.rule);
        try {
          Commutation c = commute_rho4(it.context, it.term, s4, sr);
          if (c.transported.length() > 1) r.fail(in, "at most one transported step", "");
          if (c.transported.length() == 0) {
            if (b.rule != RuleId::Rho2) r.fail(in, "only rho2 may be absorbed", "");
            ++r.counts["erasure cases"];
          } else if (c.transported.steps[0].rule != b.rule) {
            r.fail(in, "transported rule unchanged", "");
          }
          std::string why;
          if (!trace_is_valid(it.context, c.closing, rho4, &why)) r.fail(in, "closing uses rho4", why);
          if (!alpha_eq(c.closing.end(), c.transported.end()))
            r.fail(in, "diagram closes", print(c.closing.end()) + " vs " + print(c.transported.end()));
          r.maxima["longest closing"] = std::max(r.maxima["longest closing"], c.closing.length());
        } catch (const Error& e) {
          r.fail(in, "diagram closes", e.what());
        }
      }
    }
  });
  if (rep.stat("erasure cases") == 0)
    rep.failures.push_back({"corpus", "erasure case exercised", "no rho2 step was absorbed"});
  return rep;
}

std::string cf_profile_problem(RuleId rule, const SimStepResult& s) {
  if (rule != RuleId::Rho1Conj) {
    if (s.target.length() == 0 || s.residual.length() != 0)
      return "expected a nonempty trace without residual";
    for (const auto& st : s.target.steps)
      if (!small_with_rho1bot().contains(st.rule))
        return std::string(rule_name(st.rule)) + " outside the small system plus rho1bot_imp";
    return {};
  }
  if (s.target.length() != 1 || s.target.steps[0].rule != RuleId::Rho1BotImp ||
      s.residual.length() != 1)
    return "expected one rho1bot_imp step and one rho4 residual, got " + show_trace(s.target) +
           " with " + std::to_string(s.residual.length()) + " rho4";
  return {};
}

Report translation_step_cf(const SuiteOptions& o) {
  auto items = corpus_with_seeds(SystemId::DisjFree, o);
  RuleSet rules = RuleSet::system(SystemId::DisjFree);
  return run_items("thm-translation-step-cf", items.size(), o, [&](std::size_t i, ItemResult& r) {
    const Typed& it = items[i];
    for (const auto& rx : redexes(it.context, it.term, rules)) {
      ++r.cases;
      ++r.counts["rule:" + std::string(rule_name(rx.rule))];
      std::string in = show_step(it.context, it.term, rx.rule, rx.position);
      Step st = make_step(it.context, it.term, rx.position, rx.rule);
      try {
        SimStepResult s = simulate_step_cf(it.context, st);
        int want = rx.rule == RuleId::Rho1Conj ? 2 : 1;
        if (s.item != want) r.fail(in, "item", "got item " + std::to_string(s.item));
        std::string why = cf_profile_problem(rx.rule, s);
        if (!why.empty()) {
          ++r.counts["profile deviations that still replay and close"];
          r.fail(in, "step-count profile", why);
        }
      } catch (const Error& e) {
        r.fail(in, "replay", e.what());
      }
    }
  });
}

std::vector<Typed> postponement_terms(const SuiteOptions& o) {
  std::vector<Typed> items = corpus_with_seeds(SystemId::Small, o);
  for (const auto& it : corpus_with_seeds(SystemId::DisjFree, o)) {
    if (in_system(it.term, SystemId::Small)) continue;  // already present
    items.push_back({cf_context(it.context), cf_term(it.context, it.term), cf_formula(it.type)});
  }
  return items;
}

Report postponement(const SuiteOptions& o) {
  auto items = postponement_terms(o);
  RuleSet small = RuleSet::system(SystemId::Small);
  RuleSet after_rho3 = small | RuleSet{RuleId::Kappa};
  RuleSet after_kappa = small | RuleSet{RuleId::Rho3};
  return run_items("lemma-postponement", items.size(), o, [&](std::size_t i, ItemResult& r) {
    const Typed& it = items[i];
    const Context& g = it.context;
    auto check = [&](RuleId first_rule, const RuleSet& seconds) {
      for (const auto& a : redexes(g, it.term, RuleSet{first_rule})) {
        Step first = make_step(g, it.term, a.position, first_rule);
        for (const auto& b : redexes(g, first.after, seconds)) {
          ++r.cases;
          Step second = make_step(g, first.after, b.position, b.rule);
          std::string in = show(g, it.term) + " " + std::string(rule_name(first_rule)) + " " +
                           a.position.str() + " then " + std::string(rule_name(b.rule)) + " " +
                           b.position.str();
          try {
            Postponed pp = first_rule == RuleId::Rho3 ? postpone_rho3(g, first, second)
                                                      : postpone_kappa(g, first, second);
            bool rule_ok = pp.leading.rule == b.rule ||
                           (first_rule == RuleId::Rho3 && pp.leading.rule == RuleId::Kappa &&
                            is_iota_step(second));
            if (!rule_ok)
              r.fail(in, "leading rule", std::string(rule_name(pp.leading.rule)));
            if (pp.leading.rule == RuleId::Kappa && first_rule == RuleId::Rho3)
              ++r.counts["iota steps turned into kappa"];
            std::string why;
            if (!trace_is_valid(g, pp.trailing, RuleSet{first_rule}, &why))
              r.fail(in, "trailing steps use the postponed rule", why);
            if (!alpha_eq(pp.trailing.end(), second.after))
              r.fail(in, "diagram closes", print(pp.trailing.end()));
          } catch (const CannotClose& e) {
            r.fail(in, "postponement exists", e.what());
          }
        }
      }
    };
    check(RuleId::Rho3, after_rho3);
    check(RuleId::Kappa, after_kappa);
  });
}

Report purify(const SuiteOptions& o) {
  auto items = corpus_with_seeds(SystemId::DisjFree, o);
  RuleSet rules = RuleSet::system(SystemId::DisjFree);
  return run_items("purify", items.size(), o, [&](std::size_t i, ItemResult& r) {
    const Typed& it = items[i];
    bool cut = false;
    auto traces = maximal_traces(it.context, it.term, rules, o.trace_len, o.traces_per_term, &cut);
    if (cut) ++r.cap_hits;
    Context tg = cf_context(it.context);
    for (const auto& s : traces) {
      std::string in = show(it.context, it.term) + " " + show_trace(s);
      try {
        SimCertificate c = simulate_sequence_cf(it.context, s);
        if (!c.ok) continue;  // reported by thm-translation-seq-cf
        if (c.target.count(RuleId::Rho3) == 0) continue;
        ++r.cases;
        Purified p = purify_sequence(tg, c.target);
        r.counts["rho3 steps removed"] += p.rho3;
        r.counts["iota steps"] += p.iota;
        if (!p.ok) r.fail(in + " => " + show_trace(c.target), "purified length", p.problem);
      } catch (const Error& e) {
        r.fail(in, "purification", e.what());
      }
    }
  });
}

Report strong_normalization(const SuiteOptions& o, SystemId sys) {
  const auto& items = corpus(sys, o.size_bound, o);
  RuleSet rules = RuleSet::system(sys);
  std::string name = "sn-" + std::string(system_name(sys));
  return run_items(name, items.size(), o, [&](std::size_t i, ItemResult& r) {
    const Typed& it = items[i];
    auto judge = [&](const Context& g, const Term& t, const RuleSet& rs, const char* law) {
      ++r.cases;
      ReductionGraph gr = reduction_graph(g, t, rs, o.node_bound);
      if (gr.verdict != Verdict::ExhaustedAndAcyclic) {
        r.fail(show(g, t), law, std::string(verdict_name(gr.verdict)) + " after " +
                                    std::to_string(gr.nodes.size()) + " nodes");
        return;
      }
      r.maxima["largest graph"] = std::max(r.maxima["largest graph"], gr.nodes.size());
      r.maxima["longest reduction"] = std::max(r.maxima["longest reduction"], gr.longest_path());
    };
    judge(it.context, it.term, rules, "reduction graph finite and acyclic");
    if (sys == SystemId::Full)
      judge(dm_context(it.context), dm_term(it.context, it.term), RuleSet::system(SystemId::DisjFree),
            "image graph finite and acyclic");
    else if (sys == SystemId::DisjFree)
      judge(cf_context(it.context), cf_term(it.context, it.term), RuleSet::system(SystemId::Small),
            "image graph finite and acyclic");
  });
}

Report termination(const SuiteOptions& o, bool rho2) {
  const auto& items = corpus(o.system.value_or(SystemId::Full), o.size_bound, o);
  RuleSet rules = rho2 ? RuleSet{RuleId::Rho2} : RuleSet{RuleId::Rho3, RuleId::Iota};
  return run_items(rho2 ? "rho2-termination" : "rho3-iota-termination", items.size(), o,
                   [&](std::size_t i, ItemResult& r) {
                     const Typed& it = items[i];
                     ++r.cases;
                     ReductionGraph gr = reduction_graph(it.context, it.term, rules, o.node_bound);
                     if (gr.verdict != Verdict::ExhaustedAndAcyclic) {
                       r.fail(show(it.context, it.term), "terminates", std::string(verdict_name(gr.verdict)));
                       return;
                     }
                     std::size_t len = gr.longest_path();
                     r.maxima["longest trace"] = std::max(r.maxima["longest trace"], len);
                     if (len > it.term.size())
                       r.fail(show(it.context, it.term), "length at most size",
                              std::to_string(len) + " > " + std::to_string(it.term.size()));
                   });
}

Report derived_rule(const SuiteOptions& o) {
  auto items = corpus_with_seeds(o.system.value_or(SystemId::Full), o);
  RuleSet rules{RuleId::Rho1BotImp, RuleId::Rho1BotConj, RuleId::Rho1BotDisj};
  return run_items("derived-rule-expansion", items.size(), o, [&](std::size_t i, ItemResult& r) {
    const Typed& it = items[i];
    for (const auto& rx : redexes(it.context, it.term, rules)) {
      ++r.cases;
      std::string in = show_step(it.context, it.term, rx.rule, rx.position);
      try {
        Step st = make_step(it.context, it.term, rx.position, rx.rule);
        Trace ex = expand_rho1bot(it.context, st);
        r.maxima["longest expansion"] = std::max(r.maxima["longest expansion"], ex.length());
        if (ex.length() < 2 || ex.steps[1].rule != RuleId::Rho3)
          r.fail(in, "expansion shape", show_trace(ex));
      } catch (const Error& e) {
        r.fail(in, "expansion reaches the contractum", e.what());
      }
    }
  });
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{
      "subject-reduction",      "subst-lemma-dm",        "subst-lemma-cf",
      "soundness-dm",           "soundness-cf",          "thm-translation-step-dm",
      "thm-translation-seq-dm", "lemma-commutation",     "thm-translation-step-cf",
      "thm-translation-seq-cf", "lemma-postponement",    "purify",
      "sn-full",                "sn-disjfree",           "sn-small",
      "rho2-termination",       "rho3-iota-termination", "derived-rule-expansion",
  };
  return names;
}

Report run_suite(const std::string& name, const SuiteOptions& opts) {
  if (name == "subject-reduction") return subject_reduction(opts);
  if (name == "subst-lemma-dm") return subst_lemma(opts, true);
  if (name == "subst-lemma-cf") return subst_lemma(opts, false);
  if (name == "soundness-dm") return soundness(opts, true);
  if (name == "soundness-cf") return soundness(opts, false);
  if (name == "thm-translation-step-dm") return translation_step_dm(opts);
  if (name == "thm-translation-seq-dm") return translation_seq(opts, true);
  if (name == "lemma-commutation") return commutation(opts);
  if (name == "thm-translation-step-cf") return translation_step_cf(opts);
  if (name == "thm-translation-seq-cf") return translation_seq(opts, false);
  if (name == "lemma-postponement") return postponement(opts);
  if (name == "purify") return purify(opts);
  if (name == "sn-full") return strong_normalization(opts, SystemId::Full);
  if (name == "sn-disjfree") return strong_normalization(opts, SystemId::DisjFree);
  if (name == "sn-small") return strong_normalization(opts, SystemId::Small);
  if (name == "rho2-termination") return termination(opts, true);
  if (name == "rho3-iota-termination") return termination(opts, false);
  if (name == "derived-rule-expansion") return derived_rule(opts);
  throw std::invalid_argument("unknown suite " + name);
}

}  // namespace ldk
