// Command line front end: parsing, dispatch, reports and certificates.

#include <chrono>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hbdec/certificate.hpp"
#include "hbdec/verify.hpp"

namespace {

using hbdec::Answer;
using json = nlohmann::ordered_json;

constexpr int kExitYes = 0;
constexpr int kExitNo = 1;
constexpr int kExitPrecondition = 2;
constexpr int kExitInput = 3;

struct Job {
  std::vector<std::string> inputs;
  std::string cls;
  std::string target_cls;
  std::string reduct;
  std::vector<std::string> reducts;
  std::string relation;
  int arity = 0;
  std::string mode = "fo";
  int k = 0;
  int realize_cap = 0;
  int arity_cap = 0;
  int ap_cap = 0;
  int jobs = 1;
  std::uint64_t seed = 1;
  int probe_trials = 0;
  int probe_size = 8;
  bool injective = false;
  std::string witness_out;
  std::string format = "text";
  std::string dir;
};

std::vector<std::filesystem::path> paths(const Job& job) {
  return {job.inputs.begin(), job.inputs.end()};
}

// Text rendering of a report: `key: value`, nested objects indented,
// multi-line strings as indented blocks.
void render_text(const json& j, std::ostream& out, int indent = 0) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  for (const auto& [key, v] : j.items()) {
    if (v.is_object()) {
      out << pad << key << ":\n";
      render_text(v, out, indent + 2);
    } else if (v.is_array()) {
      out << pad << key << ":";
      if (v.empty()) out << " (none)";
      out << "\n";
      for (const auto& item : v) {
        if (item.is_object()) {
          out << pad << "  -\n";
          render_text(item, out, indent + 4);
        } else {
          out << pad << "  - " << (item.is_string() ? item.get<std::string>() : item.dump()) << "\n";
        }
      }
    } else if (v.is_string()) {
      const auto s = v.get<std::string>();
      if (s.find('\n') == std::string::npos) {
        out << pad << key << ": " << s << "\n";
      } else {
        out << pad << key << ":\n";
        std::istringstream lines(s);
        for (std::string l; std::getline(lines, l);) out << pad << "  " << l << "\n";
      }
    } else {
      out << pad << key << ": " << v.dump() << "\n";
    }
  }
}

void emit(const Job& job, const json& report) {
  if (job.format == "json") {
    std::cout << report.dump(2) << "\n";
  } else {
    render_text(report, std::cout);
  }
}

json caps_json(const hbdec::Caps& c) {
  return json{{"k", c.k},
              {"n", c.n},
              {"realize_cap_forward", c.realize_cap_forward},
              {"realize_cap_backward", c.realize_cap_backward},
              {"arity_cap", c.arity_cap},
              {"ap_cap", c.ap_cap}};
}

int run_check(const Job& job) {
  auto doc = hbdec::load_documents(paths(job));
  json r{{"command", "check"}};
  json classes = json::array();
  for (const auto& c : doc.classes) {
    classes.push_back(json{{"name", c.name},
                           {"bounds", c.bounds.size()},
                           {"homogeneous", c.homogeneous_asserted},
                           {"ramsey", c.ramsey_asserted},
                           {"text", hbdec::serialize_class(c)}});
  }
  json reducts = json::array();
  for (const auto& d : doc.reducts) {
    json rels = json::array();
    for (const auto& rel : d.relations) rels.push_back(rel.name + " = " + rel.orbits.to_string());
    reducts.push_back(json{{"name", d.name}, {"over", d.base.name}, {"relations", rels}});
  }
  r["classes"] = classes;
  r["reducts"] = reducts;
  emit(job, r);
  return kExitYes;
}

const hbdec::BoundedClass& pick_class(const hbdec::Document& doc, const std::string& name) {
  if (!name.empty()) return doc.cls(name);
  if (doc.classes.size() != 1) throw hbdec::InputError("several classes loaded; choose one with --class");
  return doc.classes.front();
}

int run_orbits(const Job& job) {
  auto doc = hbdec::load_documents(paths(job));
  const auto& cls = pick_class(doc, job.cls);
  const int k = job.k > 0 ? job.k : 2;
  json types = json::array();
  for (const auto& t : hbdec::enumerate_types(cls, k)) types.push_back(t.to_string());
  emit(job, json{{"command", "orbits"}, {"class", cls.name}, {"k", k}, {"count", types.size()}, {"types", types}});
  return kExitYes;
}

int run_behaviours(const Job& job) {
  auto doc = hbdec::load_documents(paths(job));
  const auto& src = pick_class(doc, job.cls);
  const auto& tgt = job.target_cls.empty() ? src : doc.cls(job.target_cls);
  const int k = std::max({job.k, 2, src.signature->max_arity(), tgt.signature->max_arity()});
  auto ss = hbdec::make_type_space(src, k);
  auto ts = hbdec::make_type_space(tgt, k);
  hbdec::BehaviourSearch search;
  search.injective_only = job.injective;
  search.realize_cap = job.realize_cap;
  search.jobs = job.jobs;
  auto list = hbdec::enumerate_behaviours(ss, ts, search);
  const int cap = job.realize_cap > 0 ? job.realize_cap : hbdec::default_realize_cap(k, tgt);
  json items = json::array();
  for (const auto& b : list) {
    json item{{"table", b.serialize()}};
    if (job.probe_trials > 0) {
      auto p = hbdec::greedy_extension_probe(b, job.probe_size, job.probe_trials, job.seed, job.realize_cap);
      item["probe"] = json{{"trials", p.trials}, {"max_size", p.max_size}, {"seed", p.seed}, {"failures", p.failures}};
    }
    items.push_back(item);
  }
  emit(job, json{{"command", "behaviours"},
                 {"source", src.name},
                 {"target", tgt.name},
                 {"k", k},
                 {"realize_cap", cap},
                 {"injective_only", job.injective},
                 {"count", list.size()},
                 {"behaviours", items}});
  return kExitYes;
}

int run_core(const Job& job) {
  auto doc = hbdec::load_documents(paths(job));
  const auto& c = doc.reduct(job.reduct);
  auto core = hbdec::compute_core(c, hbdec::CoreOptions{job.k, job.realize_cap, job.jobs});
  std::filesystem::path dir = job.witness_out.empty() ? std::filesystem::path(c.name + ".core") : std::filesystem::path(job.witness_out);
  hbdec::write_core_certificate(dir, c, core);
  hbdec::write_file(dir / "core.cls", hbdec::serialize_pair(core.reduct_out));
  json types = json::array();
  for (const auto& t : core.image_types) types.push_back(t.to_string());
  emit(job, json{{"command", "core"},
                 {"reduct", c.name},
                 {"k", core.level},
                 {"realize_cap", core.realize_cap},
                 {"scan_cap", core.scan_cap},
                 {"image_types", types},
                 {"witness", core.witness.serialize()},
                 {"core", hbdec::serialize_pair(core.reduct_out)},
                 {"written", dir.string()}});
  return kExitYes;
}

int run_definable(const Job& job) {
  auto doc = hbdec::load_documents(paths(job));
  const auto& c = doc.reduct(job.reduct);
  if (job.relation.empty() || job.arity < 1) throw hbdec::InputError("definable needs --relation and --arity");
  auto core = hbdec::compute_core(c, hbdec::CoreOptions{job.k, job.realize_cap, job.jobs});
  auto phi = hbdec::parse_formula(job.relation, *core.base_out.signature, job.arity);
  auto rel = hbdec::compile_formula(core.base_out, phi, job.arity);
  auto mode = hbdec::parse_mode(job.mode);
  json r{{"command", "definable"}, {"reduct", c.name}, {"mode", hbdec::to_string(mode)}, {"relation", rel.to_string()}, {"k", core.level}};
  bool definable = false;
  if (mode == hbdec::Mode::pp) {
    auto v = hbdec::pp_definable(core, rel, hbdec::PpOptions{job.arity_cap, job.realize_cap});
    definable = v.definable;
    r["arity_cap"] = v.arity_cap;
    r["realize_cap"] = v.realize_cap;
    r["verdict"] = definable ? "DEFINABLE up to arity " + std::to_string(v.arity_cap) + ", realize-cap " +
                                   std::to_string(v.realize_cap)
                             : std::string("NOT-DEFINABLE");
    if (v.witness) {
      r["witness"] = v.witness->serialize();
      if (!job.witness_out.empty()) {
        hbdec::write_pp_certificate(job.witness_out, core, "R", rel, *v.witness);
        r["written"] = job.witness_out;
      }
    }
  } else {
    auto kept = hbdec::invariant_unions(core, job.arity, job.realize_cap, job.jobs);
    definable = std::find(kept.begin(), kept.end(), rel) != kept.end();
    r["verdict"] = definable ? "DEFINABLE" : "NOT-DEFINABLE";
  }
  emit(job, r);
  return definable ? kExitYes : kExitNo;
}

int run_decide(const Job& job, bool biint) {
  auto doc = hbdec::load_documents(paths(job));
  if (job.reducts.size() != 2) throw hbdec::InputError("expected two reduct names after --reducts");
  const auto& a = doc.reduct(job.reducts[0]);
  const auto& b = doc.reduct(job.reducts[1]);
  hbdec::DecideOptions opts;
  opts.mode = hbdec::parse_mode(job.mode);
  opts.k = job.k;
  opts.realize_cap = job.realize_cap;
  opts.arity_cap = job.arity_cap;
  opts.ap_cap = job.ap_cap;
  opts.jobs = job.jobs;
  auto v = biint ? hbdec::decide_biint(a, b, opts) : hbdec::decide_bidef(a, b, opts);
  json r{{"command", biint ? "biint" : "bidef"},
         {"reducts", json::array({a.name, b.name})},
         {"mode", hbdec::to_string(v.mode)},
         {"answer", hbdec::to_string(v.answer)},
         {"reason", v.reason},
         {"caps", caps_json(v.caps)}};
  if (opts.mode == hbdec::Mode::pp) r["note"] = "pp expansions are relative to the arity cap";
  if (biint) r["precondition"] = "no algebraicity checked as strong amalgamation up to ap_cap (proxy)";
  if (v.amalgamation && v.amalgamation->counterexample) {
    const auto& d = *v.amalgamation->counterexample;
    r["counterexample"] = json{{"base", hbdec::to_literal(d.base)},
                               {"left", hbdec::to_literal(d.left)},
                               {"right", hbdec::to_literal(d.right)}};
  }
  if (v.witness) {
    json m = json::array();
    for (const auto& [x, y] : v.witness->matching) m.push_back(x + " -> " + y);
    r["witness"] = json{{"matching", m}, {"xi", v.witness->xi.serialize()}, {"eta", v.witness->eta.serialize()}};
    if (!job.witness_out.empty()) {
      hbdec::write_bidef_certificate(job.witness_out, v);
      r["written"] = job.witness_out;
    }
  }
  emit(job, r);
  switch (v.answer) {
    case Answer::yes:
      return kExitYes;
    case Answer::no:
      return kExitNo;
    case Answer::precondition_failed:
      return kExitPrecondition;
  }
  return kExitInput;
}

int run_verify(const Job& job) {
  auto res = hbdec::verify::check_directory(job.dir);
  json r{{"command", "verify"}, {"directory", job.dir}, {"result", res.ok ? "VALID" : "INVALID"}, {"checks", res.checks}};
  if (!res.ok) r["failure"] = res.failure;
  emit(job, r);
  return res.ok ? kExitYes : kExitNo;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decision procedures for reducts of finitely bounded homogeneous structures"};
  app.require_subcommand(1);
  Job job;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--k", job.k, "Level (tuple length of types)")->check(CLI::NonNegativeNumber);
    sub->add_option("--realize-cap", job.realize_cap, "Largest structure size for realizability checks")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--jobs", job.jobs, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--format", job.format, "Report format")->check(CLI::IsMember({"text", "json"}));
  };
  auto inputs = [&](CLI::App* sub) { sub->add_option("files", job.inputs, "Class/reduct files")->required(); };

  auto* check = app.add_subcommand("check", "Parse and normalize input files");
  inputs(check);
  common(check);

  auto* orbits = app.add_subcommand("orbits", "List the k-types of a class");
  inputs(orbits);
  common(orbits);
  orbits->add_option("--class", job.cls, "Class name");

  auto* behaviours = app.add_subcommand("behaviours", "List realizable canonical behaviours");
  inputs(behaviours);
  common(behaviours);
  behaviours->add_option("--class", job.cls, "Source class");
  behaviours->add_option("--target", job.target_cls, "Target class (default: source)");
  behaviours->add_flag("--injective", job.injective, "Only behaviours keeping distinct points distinct");
  behaviours->add_option("--probe", job.probe_trials, "Random probe trials per behaviour")->check(CLI::NonNegativeNumber);
  behaviours->add_option("--probe-size", job.probe_size, "Largest probe structure")->check(CLI::PositiveNumber);
  behaviours->add_option("--seed", job.seed, "Probe seed");

  auto* core = app.add_subcommand("core", "Compute the model-complete core of a reduct");
  inputs(core);
  common(core);
  core->add_option("--reduct", job.reduct, "Reduct name")->required();
  core->add_option("--witness-out", job.witness_out, "Output directory (default <reduct>.core)");

  auto* definable = app.add_subcommand("definable", "Decide definability of a relation in the core");
  inputs(definable);
  common(definable);
  definable->add_option("--reduct", job.reduct, "Reduct name")->required();
  definable->add_option("--relation", job.relation, "Quantifier-free formula over the base signature")->required();
  definable->add_option("--arity", job.arity, "Arity of the relation")->required()->check(CLI::PositiveNumber);
  definable->add_option("--mode", job.mode, "ep or pp")->check(CLI::IsMember({"fo", "ep", "pp"}));
  definable->add_option("--arity-cap", job.arity_cap, "Largest polymorphism arity (pp)")->check(CLI::NonNegativeNumber);
  definable->add_option("--witness-out", job.witness_out, "Certificate directory for refutations");

  auto decide_opts = [&](CLI::App* sub) {
    inputs(sub);
    common(sub);
    sub->add_option("--reducts", job.reducts, "The two reducts")->required()->expected(2);
    sub->add_option("--mode", job.mode, "fo, ep or pp")->check(CLI::IsMember({"fo", "ep", "pp"}));
    sub->add_option("--arity-cap", job.arity_cap, "Largest polymorphism arity (pp)")->check(CLI::NonNegativeNumber);
    sub->add_option("--ap-cap", job.ap_cap, "Strong amalgamation check size")->check(CLI::NonNegativeNumber);
    sub->add_option("--seed", job.seed, "Unused by the exhaustive search; recorded for reproducibility");
    sub->add_option("--witness-out", job.witness_out, "Certificate directory for YES answers");
  };
  auto* bidef = app.add_subcommand("bidef", "Decide bi-definability of the model-complete cores");
  decide_opts(bidef);
  auto* biint = app.add_subcommand("biint", "Decide bi-interpretability under its preconditions");
  decide_opts(biint);

  auto* verify = app.add_subcommand("verify", "Re-check a certificate directory");
  verify->add_option("dir", job.dir, "Certificate directory")->required();
  verify->add_option("--format", job.format, "Report format")->check(CLI::IsMember({"text", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  const auto start = std::chrono::steady_clock::now();
  int code = kExitInput;
  try {
    if (*check) code = run_check(job);
    else if (*orbits) code = run_orbits(job);
    else if (*behaviours) code = run_behaviours(job);
    else if (*core) code = run_core(job);
    else if (*definable) code = run_definable(job);
    else if (*bidef) code = run_decide(job, false);
    else if (*biint) code = run_decide(job, true);
    else if (*verify) code = run_verify(job);
  } catch (const hbdec::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInput;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cerr << "elapsed: " << secs << " s\n";
  return code;
}
