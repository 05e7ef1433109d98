#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>

#include "canon/canonical.hpp"
#include "canon/canonical_eq.hpp"
#include "canon/canonise.hpp"
#include "canon/erdos_rado.hpp"
#include "canon/formats.hpp"
#include "canon/kos.hpp"
#include "canon/oracle.hpp"
#include "canon/params.hpp"
#include "canon/steppingup.hpp"

using namespace canon;

namespace {

enum Exit { kOk = 0, kNotFound = 1, kInvalid = 2, kUnknown = 3, kInternal = 4 };

// Raised for command lines that parse but make no sense together.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit(const std::string& out_path, const std::string& text)
{
  if (out_path.empty() || out_path == "-") std::cout << text;
  else write_file(out_path, text);
}

std::string read_input(const std::string& path)
{
  if (path == "-") return std::string(std::istreambuf_iterator<char>(std::cin), {});
  return read_file(path);
}

Ordering load_ordering(const std::string& path) { return read_ordering(read_input(path)); }
Equivalence load_equivalence(const std::string& path) { return read_kef(read_input(path)); }

std::string join(const std::vector<int>& xs)
{
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + std::to_string(xs[i]);
  return s;
}

int search_exit(const SearchResult& r)
{
  return r.found == Found::Yes ? kOk : r.found == Found::No ? kNotFound : kUnknown;
}

PairColouring resolve_witness(const std::string& w, int m)
{
  if (w.rfind("auto:", 0) == 0) {
    int r = 0, s = 0;
    if (std::sscanf(w.c_str() + 5, "R=%d,s=%d", &r, &s) != 2) throw UsageError("witness must look like auto:R=<r>,s=<s>");
    if (r != m) throw UsageError("auto witness needs R equal to --m");
    auto g = find_witness_colouring(r, s);
    if (!g) throw UsageError("no colouring of [" + std::to_string(r) + "] avoids monochromatic " + std::to_string(s) + "-sets");
    return *g;
  }
  if (w == "plus" || w == "minus") return PairColouring::constant(m, w == "plus" ? 1 : -1);
  PairColouring g = read_pcf(read_file(w));
  if (g.r != m) throw UsageError("witness colouring is on [" + std::to_string(g.r) + "], expected [" + std::to_string(m) + "]");
  return g;
}

SearchBudget budget_from(std::uint64_t node_cap, double time_cap)
{
  SearchBudget b = SearchBudget::from_env();
  if (node_cap) b.node_cap = node_cap;
  if (time_cap > 0) b.time_cap_s = time_cap;
  return b;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Canonical orderings and equivalence relations on k-subsets"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  int jobs = 1;
  app.add_option("--jobs", jobs, "worker threads (searches currently run on one)")->check(CLI::PositiveNumber);

  int k = 2, n = 0, m = 0, target = 0, classes = 2, r = 0, s = 0;
  std::string out, in, spec_text, witness, inner_path, index_text, mode = "pipeline";
  std::optional<std::uint64_t> seed;
  std::uint64_t node_cap = 0, stage_cap = 64;
  double time_cap = 0;
  bool er = false;

  auto add_out = [&](CLI::App* c) { c->add_option("-o,--output", out, "output file (default stdout)"); };
  auto add_in = [&](CLI::App* c) { c->add_option("input", in, "input file, - for stdin")->required(); };
  auto add_budget = [&](CLI::App* c) {
    c->add_option("--node-cap", node_cap, "search node cap (default CANON_NODE_CAP or 5e7)");
    c->add_option("--time-cap", time_cap, "search time cap in seconds (default CANON_TIME_CAP or 600)");
  };

  // gen
  auto* gen = app.add_subcommand("gen", "generate an ordering");
  gen->require_subcommand(1);
  auto* gen_canon = gen->add_subcommand("canonical", "the ordering associated with a spec");
  gen_canon->add_option("--k", k)->required();
  gen_canon->add_option("--n", n)->required();
  gen_canon->add_option("--spec", spec_text, "e.g. \"eps=+- sigma=2,1\"")->required();
  add_out(gen_canon);
  auto* gen_up2 = gen->add_subcommand("stepup2", "stepped-up pair ordering on [2^m]");
  gen_up2->add_option("--m", m)->required();
  gen_up2->add_option("--witness", witness, "auto:R=<r>,s=<s>, plus, minus, or a PCF file")->required();
  add_out(gen_up2);
  auto* gen_upk = gen->add_subcommand("stepupk", "stepped-up k-ordering from an ordering of [m]^(k-1)");
  gen_upk->add_option("--m", m)->required();
  gen_upk->add_option("--inner", inner_path, "KOF/KOS file of the inner ordering")->required();
  add_out(gen_upk);

  // check
  auto* check = app.add_subcommand("check", "recognise canonical objects");
  check->require_subcommand(1);
  auto* check_canon = check->add_subcommand("canonical", "is the ordering canonical");
  add_in(check_canon);
  auto* check_eq = check->add_subcommand("eq", "is the relation some canonical relation");
  add_in(check_eq);

  auto* extract = app.add_subcommand("extract", "extract the sign vector and permutation, or a disagreement");
  add_in(extract);

  auto* canonise = app.add_subcommand("canonise", "find a canonical n-subset constructively");
  add_in(canonise);
  canonise->add_option("--n", target)->required();
  canonise->add_option("--mode", mode)->check(CLI::IsMember({"pipeline", "baseline"}));
  canonise->add_option("--seed", seed, "seed for sampled verification")->required();
  canonise->add_option("--stage-cap", stage_cap);

  // er
  auto* erc = app.add_subcommand("er", "equivalence relations");
  erc->require_subcommand(1);
  auto* er_gen = erc->add_subcommand("gen", "canonical (--index) or random (--classes, --seed) relation");
  er_gen->add_option("--k", k)->required();
  er_gen->add_option("--n", n)->required();
  er_gen->add_option("--index", index_text, "index set such as I=1,3");
  er_gen->add_option("--classes", classes);
  er_gen->add_option("--seed", seed);
  add_out(er_gen);
  auto* er_check = erc->add_subcommand("check", "canonicity and purge witnesses");
  add_in(er_check);
  auto* er_canon = erc->add_subcommand("canonise", "find X of size n on which the relation is canonical");
  add_in(er_canon);
  er_canon->add_option("--n", target)->required();
  er_canon->add_option("--seed", seed)->required();
  er_canon->add_option("--stage-cap", stage_cap);

  // oracle
  auto* oracle = app.add_subcommand("oracle", "exhaustive searches");
  oracle->require_subcommand(1);
  auto* or_search = oracle->add_subcommand("search", "a canonical n-subset of an ordering");
  add_in(or_search);
  or_search->add_option("--n", target)->required();
  add_budget(or_search);
  auto* or_max = oracle->add_subcommand("max-canonical", "largest canonical subset of an ordering");
  add_in(or_max);
  add_budget(or_max);
  auto* or_search_eq = oracle->add_subcommand("search-eq", "an n-subset on which a relation is canonical");
  add_in(or_search_eq);
  or_search_eq->add_option("--n", target)->required();
  add_budget(or_search_eq);

  auto* params = app.add_subcommand("params", "parameter recursions");
  params->add_option("--k", k)->required();
  params->add_option("--n", n)->required();
  params->add_flag("--er", er, "equivalence-relation recursion");

  auto* wit = app.add_subcommand("witness", "Ramsey witnesses");
  wit->require_subcommand(1);
  auto* wit_r2 = wit->add_subcommand("ramsey2", "2-colouring of [r]^(2) without monochromatic s-sets");
  wit_r2->add_option("--r", r)->required();
  wit_r2->add_option("--s", s)->required();
  add_out(wit_r2);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }

  try {
    if (*gen_canon) {
      auto spec = CanonicalSpec::parse(spec_text);
      if (spec.k() != k) throw UsageError("spec has k=" + std::to_string(spec.k()));
      Ordering o = gen_canonical(k, n, spec);
      emit(out, binom(n, k) <= kDefaultMaterialiseCap ? write_kof(materialise(o)) : write_kos(o));
      return kOk;
    }
    if (*gen_up2) {
      emit(out, write_kos(build_pair_ordering(m, resolve_witness(witness, m))));
      return kOk;
    }
    if (*gen_upk) {
      Ordering inner = load_ordering(inner_path);
      emit(out, write_kos(build_k_ordering(m, inner.k() + 1, inner)));
      return kOk;
    }
    if (*check_canon) {
      Ordering o = load_ordering(in);
      auto spec = is_canonical(o);
      if (!spec) {
        std::cout << "not canonical\n";
        return kNotFound;
      }
      // Re-verify against a freshly generated table before claiming success.
      if (o.n() >= 2 * o.k() + 1 && !matches_spec(o, *spec)) throw std::logic_error("extracted spec failed re-verification");
      std::cout << spec->str() << "\n";
      return kOk;
    }
    if (*check_eq) {
      Equivalence e = load_equivalence(in);
      auto idx = is_canonical_eq(e);
      if (!idx || !agrees_with(e, *idx)) {
        std::cout << "not canonical\n";
        return kNotFound;
      }
      std::cout << idx->str() << "\n";
      return kOk;
    }
    if (*extract) {
      Ordering o = load_ordering(in);
      auto sr = extract_sign(o);
      if (!sr.eps) {
        std::cout << "DISAGREE " << sr.witness->str() << "\n";
        return kNotFound;
      }
      auto pr = extract_perm(o, *sr.eps, true);
      if (!pr.sigma) {
        std::cout << "DISAGREE " << pr.witness->str() << "\n";
        return kNotFound;
      }
      std::cout << CanonicalSpec{*sr.eps, *pr.sigma}.str() << "\n";
      return kOk;
    }
    if (*canonise) {
      Ordering o = load_ordering(in);
      CanoniseOptions opt;
      opt.stage_cap = stage_cap;
      opt.scan.seed = *seed;
      auto res = mode == "pipeline" ? canonise_pipeline(o, target, opt) : canonise_baseline(o, target, opt);
      std::cout << res.transcript.str();
      if (!res.ok()) {
        std::cout << "FAILED stage=" << res.failed_stage << "\n";
        return kNotFound;
      }
      if (!is_canonical(induce(o, *res.set))) throw std::logic_error("canonise output failed re-verification");
      std::cout << "RESULT set=" << join(*res.set) << " spec=\"" << res.spec->str() << "\"\n";
      return kOk;
    }
    if (*er_gen) {
      Equivalence e = [&] {
        if (!index_text.empty()) return canonical_eq(k, n, IndexSet::parse(k, index_text));
        if (!seed) throw UsageError("random relations need --seed");
        return random_equivalence(k, n, classes, *seed);
      }();
      emit(out, write_kef(e));
      return kOk;
    }
    if (*er_check) {
      Equivalence e = load_equivalence(in);
      auto idx = is_canonical_eq(e);
      for (int i = 1; i <= e.k(); ++i) {
        auto w = purge_check(e, i);
        std::cout << "purged i=" << i << " " << (w ? "no " + w->str() : std::string("yes")) << "\n";
      }
      if (!idx || !agrees_with(e, *idx)) {
        std::cout << "not canonical\n";
        return kNotFound;
      }
      std::cout << idx->str() << "\n";
      return kOk;
    }
    if (*er_canon) {
      Equivalence e = load_equivalence(in);
      ErOptions opt;
      opt.stage_cap = stage_cap;
      opt.scan.seed = *seed;
      opt.purge.seed = *seed;
      auto res = er_pipeline(e, target, opt);
      std::cout << res.transcript.str();
      if (!res.ok()) {
        std::cout << "FAILED stage=" << res.failed_stage << "\n";
        return kNotFound;
      }
      if (!agrees_with(restrict(e, *res.set), *res.index)) throw std::logic_error("er output failed re-verification");
      std::cout << "RESULT set=" << join(*res.set) << " index=" << res.index->str() << "\n";
      return kOk;
    }
    if (*or_search || *or_max) {
      Ordering o = load_ordering(in);
      auto b = budget_from(node_cap, time_cap);
      auto res = *or_search ? search_canonical_subset(o, target, b) : max_canonical_subset(o, b);
      if (res.found == Found::Yes && static_cast<int>(res.set.size()) > o.k() && !is_canonical(induce(o, res.set)))
        throw std::logic_error("oracle output failed re-verification");
      std::cout << res.line() << "\n";
      if (*or_max) std::cout << "size=" << res.set.size() << "\n";
      return search_exit(res);
    }
    if (*or_search_eq) {
      Equivalence e = load_equivalence(in);
      auto res = search_canonical_eq_subset(e, target, budget_from(node_cap, time_cap));
      if (res.found == Found::Yes && !agrees_with(restrict(e, res.set), *res.index))
        throw std::logic_error("oracle output failed re-verification");
      std::cout << res.line() << "\n";
      return search_exit(res);
    }
    if (*params) {
      std::cout << (er ? required_N_er(k, n) : required_N(k, n)).str();
      return kOk;
    }
    if (*wit_r2) {
      auto g = find_witness_colouring(r, s);
      if (!g) {
        std::cout << "none\n";
        return kNotFound;
      }
      emit(out, write_pcf(*g));
      return kOk;
    }
  } catch (const std::length_error& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return kUnknown;
  } catch (const std::logic_error& e) {
    // invalid_argument and domain_error derive from logic_error; plain logic_error is a bug.
    if (dynamic_cast<const std::invalid_argument*>(&e) || dynamic_cast<const std::domain_error*>(&e)) {
      std::cerr << "invalid input: " << e.what() << "\n";
      return kInvalid;
    }
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  } catch (const std::runtime_error& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInvalid;
  }
  return kInvalid;
}
