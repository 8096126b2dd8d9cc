#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ldk/conjfree.hpp"
#include "ldk/demorgan.hpp"
#include "ldk/harness.hpp"
#include "ldk/rewrite.hpp"
#include "ldk/syntax.hpp"

namespace {

using namespace ldk;

enum Exit { kOk = 0, kViolation = 1, kUserError = 2, kResource = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

// --ctx takes either a file or the declarations themselves.
Context load_context(const std::string& arg) {
  if (arg.empty()) return {};
  std::error_code ec;
  if (std::filesystem::is_regular_file(arg, ec)) return parse_context(slurp(arg));
  return parse_context(arg);
}

SystemId load_system(const std::string& s) {
  auto sys = parse_system(s);
  if (!sys) throw UsageError("unknown system " + s);
  return *sys;
}

RuleSet load_rules(const std::string& system, const std::string& aux) {
  RuleSet rules = RuleSet::system(load_system(system));
  std::stringstream ss(aux);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto r = parse_rule(item);
    if (!r) throw UsageError("unknown rule " + item);
    rules.insert(*r);
  }
  return rules;
}

bool demorgan_map(const std::string& m) {
  if (m == "demorgan") return true;
  if (m == "conjfree") return false;
  throw UsageError("unknown map " + m);
}

void print_trace(const Trace& t) {
  std::cout << "0 start " << print(t.start) << "\n";
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const Step& s = t.steps[i];
    std::cout << i + 1 << " " << rule_name(s.rule) << " " << s.position.str() << " "
              << print(s.after) << "\n";
  }
}

struct Args {
  std::string file = "-";
  std::string ctx;
  std::string system = "full";
  std::string aux;
  std::string strategy = "lo";
  std::size_t fuel = 10000;
  std::string trace;
  std::string map = "demorgan";
  std::string out;
  std::size_t bound = 8;
  std::string type;
  std::string suite;
  std::size_t threads = 0;
};

int run_check(const Args& a) {
  Context g = load_context(a.ctx);
  Term t = parse_term(slurp(a.file), g);
  std::cout << infer(g, t).str() << "\n";
  return kOk;
}

int run_reduce(const Args& a) {
  Context g = load_context(a.ctx);
  Term t = parse_term(slurp(a.file), g);
  infer(g, t);
  Strategy st = a.strategy == "li" ? Strategy::LeftmostInnermost : Strategy::LeftmostOutermost;
  if (a.strategy != "lo" && a.strategy != "li") throw UsageError("strategy is lo or li");
  try {
    Trace tr = normalize(g, t, load_rules(a.system, a.aux), st, a.fuel);
    print_trace(tr);
    if (!a.trace.empty()) spit(a.trace, trace_to_jsonl(tr));
    return kOk;
  } catch (const FuelExhausted& e) {
    print_trace(e.trace);
    if (!a.trace.empty()) spit(a.trace, trace_to_jsonl(e.trace));
    std::cerr << e.what() << "\n";
    return kResource;
  }
}

int run_translate(const Args& a) {
  Context g = load_context(a.ctx);
  Term t = parse_term(slurp(a.file), g);
  Formula ty = infer(g, t);
  bool dm = demorgan_map(a.map);
  Term image = dm ? dm_term(g, t) : cf_term(g, t);
  Formula image_ty = dm ? dm_formula(ty) : cf_formula(ty);
  std::cout << print(image) << "\n" << image_ty.str() << "\n";
  return kOk;
}

int run_simulate(const Args& a) {
  if (a.trace.empty()) throw UsageError("--trace is required");
  Context g = load_context(a.ctx);
  Term t = parse_term(slurp(a.file), g);
  infer(g, t);
  Trace s = trace_from_jsonl(g, slurp(a.trace));
  if (!alpha_eq(s.start, t)) throw UsageError("trace does not start at the given term");
  bool dm = demorgan_map(a.map);
  SimCertificate c = dm ? simulate_sequence(g, s) : simulate_sequence_cf(g, s);
  std::string text = certificate_json(c).dump(2) + "\n";
  if (a.out.empty())
    std::cout << text;
  else
    spit(a.out, text);
  if (!c.ok) std::cerr << "certificate invalid: " << c.problem << "\n";
  return c.ok ? kOk : kViolation;
}

int run_replay(const Args& a) {
  if (a.trace.empty()) throw UsageError("--trace is required");
  Context g = load_context(a.ctx);
  Trace s = trace_from_jsonl(g, slurp(a.trace));
  std::string why;
  if (!trace_is_valid(g, s, load_rules(a.system, a.aux), &why)) {
    std::cerr << "invalid trace: " << why << "\n";
    return kViolation;
  }
  std::cout << print(s.end()) << "\n";
  return kOk;
}

int run_graph(const Args& a) {
  Context g = load_context(a.ctx);
  Term t = parse_term(slurp(a.file), g);
  infer(g, t);
  ReductionGraph gr = reduction_graph(g, t, load_rules(a.system, a.aux), a.bound);
  if (!a.out.empty()) spit(a.out, gr.to_dot());
  std::cout << verdict_name(gr.verdict) << " nodes=" << gr.nodes.size()
            << " edges=" << gr.edges.size();
  if (gr.verdict == Verdict::ExhaustedAndAcyclic) std::cout << " longest=" << gr.longest_path();
  std::cout << "\n";
  switch (gr.verdict) {
    case Verdict::ExhaustedAndAcyclic: return kOk;
    case Verdict::ExhaustedWithCycle: return kViolation;
    case Verdict::BoundExceeded: return kResource;
  }
  return kOk;
}

int run_enumerate(const Args& a) {
  GenSpec spec;
  spec.system = load_system(a.system);
  spec.size_bound = a.bound;
  if (!a.ctx.empty()) spec.context = load_context(a.ctx);
  if (!a.type.empty()) spec.type_filter = parse_formula(a.type);
  std::size_t n = 0;
  for_each_term(spec, [&](const Typed& t) {
    std::cout << print(t.term) << " : " << t.type.str() << "\n";
    ++n;
  });
  std::cerr << n << " terms\n";
  return kOk;
}

int run_verify(const Args& a) {
  SuiteOptions o;
  o.size_bound = a.bound;
  o.threads = a.threads;
  Report r = run_suite(a.suite, o);
  nlohmann::json j = report_json(r);
  if (!a.out.empty()) spit(a.out, j.dump(2) + "\n");
  std::cout << r.suite << ": " << (r.passed() ? "passed" : "FAILED") << ", " << r.cases_run
            << " cases, " << r.failures.size() << " failures, " << r.cap_hits << " cap hits, "
            << r.elapsed.count() << "s\n";
  for (std::size_t i = 0; i < r.failures.size() && i < 5; ++i)
    std::cout << "  " << r.failures[i].law << ": " << r.failures[i].input << "\n    "
              << r.failures[i].witness << "\n";
  return r.passed() ? kOk : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* seed = std::getenv("LDK_SEED")) set_fresh_base(std::strtoul(seed, nullptr, 10));

  CLI::App app{"Proof terms with reductio: typing, reduction and translations"};
  app.require_subcommand(1);
  Args a;

  auto file = [&](CLI::App* c) { c->add_option("file", a.file, "Term file, - for stdin"); };
  auto ctx = [&](CLI::App* c) {
    c->add_option("--ctx", a.ctx, "Context file or inline declarations");
  };
  auto system = [&](CLI::App* c) {
    c->add_option("--system", a.system, "full, disjfree or small");
  };
  auto aux = [&](CLI::App* c) {
    c->add_option("--aux", a.aux, "Extra rules, comma separated (rho3,rho4,kappa,iota)");
  };

  auto* check = app.add_subcommand("check", "Typecheck a term and print its formula");
  file(check);
  ctx(check);

  auto* reduce = app.add_subcommand("reduce", "Normalize a term and print the trace");
  file(reduce);
  ctx(reduce);
  system(reduce);
  aux(reduce);
  reduce->add_option("--strategy", a.strategy, "lo (leftmost-outermost) or li");
  reduce->add_option("--fuel", a.fuel, "Step limit");
  reduce->add_option("--trace", a.trace, "Write the trace as JSON lines");

  auto* translate = app.add_subcommand("translate", "Print the image of a term");
  file(translate);
  ctx(translate);
  translate->add_option("--map", a.map, "demorgan or conjfree");

  auto* simulate = app.add_subcommand("simulate", "Translate a reduction sequence");
  file(simulate);
  ctx(simulate);
  simulate->add_option("--map", a.map, "demorgan or conjfree");
  simulate->add_option("--trace", a.trace, "Source trace (JSON lines)")->required();
  simulate->add_option("--out", a.out, "Write the certificate here instead of stdout");

  auto* replay = app.add_subcommand("replay", "Replay a trace and print its endpoint");
  ctx(replay);
  system(replay);
  aux(replay);
  replay->add_option("--trace", a.trace, "Trace (JSON lines)")->required();

  auto* graph = app.add_subcommand("graph", "Build the reduction graph of a term");
  file(graph);
  ctx(graph);
  system(graph);
  aux(graph);
  graph->add_option("--bound", a.bound, "Node bound")->default_val(kDefaultNodeBound);
  graph->add_option("--dot", a.out, "Write the graph in DOT format");

  auto* enumerate = app.add_subcommand("enumerate", "List all well-typed terms up to a size");
  ctx(enumerate);
  system(enumerate);
  enumerate->add_option("--bound", a.bound, "Largest term size")->required();
  enumerate->add_option("--type", a.type, "Only terms of this formula");

  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  verify->add_option("--suite", a.suite, "Suite name")
      ->required()
      ->check(CLI::IsMember(suite_names()));
  verify->add_option("--bound", a.bound, "Corpus size bound");
  verify->add_option("--json", a.out, "Write the report as JSON");
  verify->add_option("--threads", a.threads, "Worker threads, 0 for all cores");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUserError;
  }

  try {
    if (*check) return run_check(a);
    if (*reduce) return run_reduce(a);
    if (*translate) return run_translate(a);
    if (*simulate) return run_simulate(a);
    if (*replay) return run_replay(a);
    if (*graph) return run_graph(a);
    if (*enumerate) return run_enumerate(a);
    if (*verify) return run_verify(a);
  } catch (const SyntaxError& e) {
    std::cerr << "syntax error: " << e.what() << "\n";
    return kUserError;
  } catch (const TypeError& e) {
    std::cerr << e.what() << "\n";
    return kUserError;
  } catch (const DisjPresent& e) {
    std::cerr << e.what() << "\n";
    return kUserError;
  } catch (const DuplicateBinding& e) {
    std::cerr << e.what() << "\n";
    return kUserError;
  } catch (const UsageError& e) {
    std::cerr << e.what() << "\n";
    return kUserError;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return kViolation;
  }
  return kUserError;
}
