// Command-line front end: validate category files, build the lifted diagram
// CwA with its bundles, and run named check suites.  Exit codes: 0 all pass,
// 1 check failures, 2 usage or parse errors.
#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "models/finset.hpp"
#include "models/trivial.hpp"
#include "suites.hpp"

using namespace cwa;

namespace {

Val load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  Val j;
  in >> j;  // nlohmann parse errors carry positions
  return j;
}

InverseStructure ord_of(const FinCategory& cat, const Val& j) {
  if (!j.is_object() || !j.contains("ordering")) return default_ordering(cat);
  InverseStructure o;
  for (auto& [k, v] : j.at("ordering").items())
    for (auto& a : v) o.order[k].push_back(a.get<std::string>());
  return o;
}

HomotopicalMarking marking_of(const Val& j) {
  HomotopicalMarking w;
  if (j.is_object() && j.contains("equivalences"))
    for (auto& a : j.at("equivalences")) w.equivalences.insert(a.get<std::string>());
  return w;
}

void sort_entries(Report& rep) {
  std::stable_sort(rep.entries.begin(), rep.entries.end(),
                   [](const Report::Entry& a, const Report::Entry& b) {
                     return a.name < b.name;
                   });
}

int emit(Report& rep, const std::string& out, const Val& extra = Val()) {
  sort_entries(rep);
  for (auto& e : rep.entries) {
    std::string tag = e.verdict == "pass"          ? "PASS "
                      : e.verdict == "indeterminate" ? "INDET"
                                                     : "FAIL ";
    std::cout << tag << " " << e.name;
    if (e.verdict == "fail" && !e.witness.is_null())
      std::cout << "  " << e.witness.dump();
    std::cout << "\n";
  }
  std::cout << rep.summary() << "\n";
  if (!out.empty()) {
    Val j = rep.to_json();
    if (!extra.is_null()) j["artifacts"] = extra;
    std::ofstream os(out);
    if (!os) throw Error("cannot write " + out);
    os << j.dump(2) << "\n";
  }
  return rep.fails() > 0 ? 1 : 0;
}

int cmd_validate(const std::vector<std::string>& files,
                 const std::string& out) {
  Report rep;
  for (auto& path : files) {
    Val j = load_json(path);  // parse errors propagate -> exit 2
    try {
      FinCategory cat = FinCategory::from_json(j);
      ValidationReport vr = validate_inverse(cat);
      Val witness = Val{{"messages", vr.messages}, {"witness", vr.witness}};
      rep.add(path + ":inverse", vr.ok, witness);
      if (j.contains("ordering")) {
        try {
          ord_of(cat, j).validate(cat);
          rep.add(path + ":ordering", true);
        } catch (const Error& e) {
          rep.add(path + ":ordering", false, Val(e.what()));
        }
      }
      if (j.contains("equivalences"))
        rep.add(path + ":marking", marking_valid(cat, marking_of(j)));
    } catch (const Error& e) {
      rep.add(path + ":structure", false, Val(e.what()));
    }
  }
  return emit(rep, out);
}

int cmd_build(const std::string& model, const std::string& category,
              const std::string& marking, int bound, const std::string& out) {
  Val j = load_json(category);
  FinCategory cat = FinCategory::from_json(j);
  ModelPtr base = model == "finset"  ? make_finset_model()
                  : model == "trivial"
                      ? make_trivial_model(cat)
                      : ModelPtr();
  if (!base) throw Error("build supports --model finset or trivial");
  auto env = make_reedy_env(base, cat, ord_of(cat, j));
  ModelPtr dm = lifted_cwa(env);
  Report rep;
  Val dump;
  Val G = dm->terminal();
  dump["terminal"] = G;
  dump["unit"] = dm->unit_ty(G);
  rep.add("build.unit", true);

  if (model == "finset" && !cat.objects.empty()) {
    // a small sample pair: singleton fibers keep every input homotopical
    Val A = Val{{"components", Val::object()}};
    for (auto& i : env->topo) {
      Val tot = matching_total(*env, G, A, i);
      A["components"][i] =
          fs_ty(tot, [](const Val&) { return fs_obj({Val("a0")}); });
    }
    Val GA = dm->ext(G, A);
    Val B = Val{{"components", Val::object()}};
    for (auto& i : env->topo) {
      Val tot = matching_total(*env, GA, B, i);
      B["components"][i] =
          fs_ty(tot, [](const Val&) { return fs_obj({Val("b0")}); });
    }
    dump["sigma"] = dm->sigma_ty(G, A, B);
    rep.add("build.sigma", true);

    HomotopicalMarking w = marking_of(j);
    bool gate = marking == "use" && j.contains("equivalences");
    try {
      Val P;
      if (gate) {
        ModelPtr view = homotopical_view(env, w);
        P = view->pi_ty(G, A, B);
      } else {
        P = dm->pi_ty(G, A, B);
      }
      dump["pi"] = P.at("components");  // per-level components
      rep.add("build.pi", true);
    } catch (const Error& e) {
      rep.add("build.pi-gate", false, Val(e.what()));
    }
  }
  return emit(rep, out, dump);
}

int cmd_check(const std::vector<std::string>& suites, const SuiteConfig& cfg,
              const std::string& out) {
  auto known = suite_names();
  for (auto& s : suites)
    if (std::find(known.begin(), known.end(), s) == known.end()) {
      std::cerr << "unknown suite: " << s << "\n";
      return 2;
    }
  Report rep;
  for (auto& s : suites) {
    try {
      Report r = run_suite(s, cfg);
      for (auto& e : r.entries) {
        e.name = s + ":" + e.name;
        rep.entries.push_back(e);
      }
    } catch (const Error& e) {
      rep.add(s + ":error", false, Val(e.what()));
    }
  }
  return emit(rep, out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact computation with categories with attributes over finite "
               "inverse diagrams"};
  app.require_subcommand(1);

  auto* v = app.add_subcommand("validate", "validate category files");
  std::vector<std::string> files;
  std::string vout;
  v->add_option("files", files, "category JSON files")->required();
  v->add_option("--out", vout, "JSON report file");

  auto* b = app.add_subcommand("build", "build the lifted diagram CwA");
  std::string bmodel = "finset", bcat, bmark = "use", bout;
  int bbound = 2;
  b->add_option("--model", bmodel)->check(CLI::IsMember({"finset", "trivial"}));
  b->add_option("--category", bcat)->required();
  b->add_option("--marking", bmark)->check(CLI::IsMember({"use", "ignore"}));
  b->add_option("--bound", bbound)->check(CLI::PositiveNumber);
  b->add_option("--out", bout);

  auto* c = app.add_subcommand("check", "run named check suites");
  std::string cmodel = "finset", ccat, cmark = "use", cout_, csuites, csub;
  int cbound = 2;
  std::uint64_t cseed = 1;
  c->add_option("--model", cmodel)
      ->check(CLI::IsMember({"finset", "trivial", "groupoid"}));
  c->add_option("--category", ccat);
  c->add_option("--marking", cmark)->check(CLI::IsMember({"use", "ignore"}));
  c->add_option("--bound", cbound)->check(CLI::PositiveNumber);
  c->add_option("--suite", csuites, "comma-separated suite names")->required();
  c->add_option("--seed", cseed);
  c->add_option("--sub", csub, "comma-separated cosieve objects");
  c->add_option("--out", cout_);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (v->parsed()) return cmd_validate(files, vout);
    if (b->parsed()) return cmd_build(bmodel, bcat, bmark, bbound, bout);
    SuiteConfig cfg;
    cfg.model = cmodel;
    cfg.use_marking = cmark == "use";
    cfg.bound = cbound;
    cfg.seed = cseed;
    if (!ccat.empty()) cfg.category = load_json(ccat);
    auto split = [](const std::string& s) {
      std::vector<std::string> parts;
      std::stringstream ss(s);
      std::string item;
      while (std::getline(ss, item, ','))
        if (!item.empty()) parts.push_back(item);
      return parts;
    };
    cfg.sub = split(csub);
    return cmd_check(split(csuites), cfg, cout_);
  } catch (const Val::parse_error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
}
