#include "cli.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <utility>

#include "hdfol/encoding.hpp"
#include "hdfol/io.hpp"
#include "hdfol/kripke.hpp"
#include "hdfol/omitting.hpp"
#include "hdfol/signature.hpp"
#include "hdfol/syntax.hpp"

namespace hdfolcli {

using json = nlohmann::ordered_json;
using namespace hdfol;

namespace {

const char* tri_str(Tri t) {
  switch (t) {
    case Tri::yes: return "yes";
    case Tri::no: return "no";
    default: return "exceeded";
  }
}

json theory_json(const std::vector<Sentence>& ts) {
  json out = json::array();
  for (const auto& g : ts) out.push_back(print_sentence(g));
  return out;
}

json derivation_json(const DerivationNode& n) {
  json out;
  out["goal"] = print_sentence(n.goal);
  out["rule"] = n.rule;
  out["premises"] = json::array();
  for (const auto& p : n.premises) out["premises"].push_back(derivation_json(p));
  return out;
}

struct Loaded {
  HDSignature sig;
  std::vector<Sentence> theory;  // empty when no --theory
};

Loaded load_base(const RunConfig& cfg, bool need_theory) {
  if (cfg.sig_path.empty()) throw InputError("--sig is required");
  Loaded l;
  l.sig = parse_signature(read_file(cfg.sig_path));
  ValidationReport rep = validate(l.sig);
  if (!rep.ok()) throw InputError("signature invalid: " + rep.joined());
  if (!cfg.theory_path.empty())
    l.theory = parse_theory(read_file(cfg.theory_path), l.sig);
  else if (need_theory)
    throw InputError("--theory is required");
  return l;
}

// Builds the forcing property of a forcing file: the pool is the closure of
// the labels (and the query sentence, when given) scoped at every nominal.
ForcingProperty property_of(const RunConfig& cfg, const HDSignature& sig,
                            const ForcingFile& f,
                            const std::optional<Sentence>& query) {
  std::vector<Sentence> seed;
  for (const auto& [c, g] : f.labels) seed.push_back(g);
  if (query) seed.push_back(*query);
  SentencePool pool = make_pool_at_all(sig, seed, cfg.star_bound, cfg.term_depth);
  return make_forcing_property(sig, f.conditions, f.leq, f.labels, pool);
}

void emit_model(const RunConfig& cfg, json& result, const KripkeStructure& m) {
  std::string text = print_model(m);
  result["model"] = text;
  if (!cfg.model_out.empty()) write_file(cfg.model_out, text);
}

int cmd_validate(const RunConfig& cfg, json& result) {
  Loaded l = load_base(cfg, false);
  result["signature_ok"] = true;
  result["theory_sentences"] = l.theory.size();
  bool ok = true;
  if (!cfg.model_path.empty()) {
    KripkeStructure m = parse_model(read_file(cfg.model_path), l.sig);
    ValidationReport rep = validate_model(m);
    result["model_ok"] = rep.ok();
    result["model_violations"] = rep.violations;
    ok = rep.ok();
  }
  return ok ? 0 : 1;
}

int cmd_check(const RunConfig& cfg, json& result) {
  Loaded l = load_base(cfg, false);
  if (cfg.model_path.empty()) throw InputError("--model is required");
  KripkeStructure m = parse_model(read_file(cfg.model_path), l.sig);
  std::vector<Sentence> goals = l.theory;
  if (!cfg.sentence.empty()) goals.push_back(parse_sentence(cfg.sentence, l.sig));
  if (goals.empty()) throw InputError("nothing to check: give --theory or --sentence");
  bool all = true;
  json rows = json::array();
  for (const auto& g : goals) {
    json row;
    row["sentence"] = print_sentence(g);
    json per_world = json::array();
    bool global = true;
    for (std::size_t w = 0; w < m.worlds.size(); ++w) {
      bool v = sat_local(m, w, g);
      global = global && v;
      per_world.push_back({{"world", m.worlds[w]}, {"holds", v}});
    }
    row["global"] = global;
    row["per_world"] = per_world;
    rows.push_back(row);
    all = all && global;
  }
  result["sentences"] = rows;
  result["all_hold"] = all;
  return all ? 0 : 1;
}

int cmd_translate(const RunConfig& cfg, json& result) {
  Loaded l = load_base(cfg, false);
  if (cfg.subst_path.empty()) throw InputError("--subst is required");
  SubstFile f = parse_substitution(read_file(cfg.subst_path), l.sig);
  HDSignature sig_c2 = extend(l.sig, f.codomain);
  check_substitution(sig_c2, f.domain, f.theta);
  HDSignature sig_c1 = extend(l.sig, f.domain);
  std::vector<Sentence> theory =
      cfg.theory_path.empty() ? std::vector<Sentence>{}
                              : parse_theory(read_file(cfg.theory_path), sig_c1);
  std::vector<Sentence> out;
  for (const auto& g : theory) out.push_back(substitute(f.theta, g));
  result["domain"] = f.domain.size();
  result["codomain"] = f.codomain.size();
  result["theory"] = theory_json(out);
  if (!cfg.theory_out.empty()) write_file(cfg.theory_out, print_theory(out));
  return 0;
}

int cmd_rigidify(const RunConfig& cfg, json& result) {
  Loaded l = load_base(cfg, true);
  if (cfg.at.empty()) throw InputError("--at <nominal> is required");
  if (!l.sig.is_nominal(cfg.at))
    throw InputError("'" + cfg.at + "' is not a nominal of the signature");
  std::vector<Sentence> out;
  for (const auto& g : l.theory) out.push_back(rigidify(l.sig, g, cfg.at));
  result["at"] = cfg.at;
  result["theory"] = theory_json(out);
  if (!cfg.theory_out.empty()) write_file(cfg.theory_out, print_theory(out));
  return 0;
}

int cmd_encode(const RunConfig& cfg, json& result) {
  Loaded l = load_base(cfg, false);
  PlusBundle b = build_plus(l.sig);
  result["world_sort"] = b.world_sort.base;
  result["z"] = b.z;
  result["signature"] = print_signature(b.plus);
  result["gamma"] = theory_json(b.gamma);
  if (!l.theory.empty()) {
    std::vector<Sentence> out;
    for (const auto& g : l.theory) out.push_back(encode(b, g));
    result["theory"] = theory_json(out);
    if (!cfg.theory_out.empty()) write_file(cfg.theory_out, print_theory(out));
  }
  if (!cfg.sig_out.empty()) write_file(cfg.sig_out, print_signature(b.plus));
  return 0;
}

int cmd_decode(const RunConfig& cfg, json& result) {
  Loaded l = load_base(cfg, false);
  if (cfg.model_path.empty()) throw InputError("--model is required");
  PlusBundle b = build_plus(l.sig);
  KripkeStructure mp = parse_model(read_file(cfg.model_path), b.plus);
  KripkeStructure m = decode(b, mp, cfg.world);
  result["world"] = cfg.world;
  result["worlds_decoded"] = m.worlds.size();
  emit_model(cfg, result, m);
  return 0;
}

int cmd_sat(const RunConfig& cfg, json& result) {
  Loaded l = load_base(cfg, true);
  auto m = bounded_sat(l.sig, l.theory, cfg.budget);
  result["found"] = m.has_value();
  if (m) {
    emit_model(cfg, result, *m);
    return 0;
  }
  result["note"] = "no model within budget; not a proof of unsatisfiability";
  return 2;
}

int cmd_force(const RunConfig& cfg, json& result) {
  Loaded l = load_base(cfg, false);
  if (cfg.forcing_path.empty()) throw InputError("--forcing is required");
  ForcingFile f = parse_forcing(read_file(cfg.forcing_path), l.sig);
  std::optional<Sentence> query;
  if (!cfg.sentence.empty()) query = parse_sentence(cfg.sentence, l.sig);
  ForcingProperty prop = property_of(cfg, l.sig, f, query);
  result["conditions"] = prop.size();
  result["pool"] = prop.pool.items.size();

  AxiomReport ax = check_forcing_axioms(prop, bounded_entail_oracle(l.sig, cfg.budget));
  result["axioms_ok"] = ax.ok();
  result["violations"] = ax.violations.violations;
  result["axiom_notes"] = ax.notes;

  if (!query) return ax.ok() ? 0 : 1;
  if (cfg.at.empty()) throw InputError("--at <nominal> is required with --sentence");
  std::size_t p = cfg.condition.empty() ? prop.least : prop.id_of(cfg.condition);
  if (p == SIZE_MAX) throw InputError("the property has no least condition; give --condition");
  Tri verdict = forces(prop, p, cfg.at, *query);
  json q;
  q["condition"] = prop.names[p];
  q["at"] = cfg.at;
  q["sentence"] = print_sentence(*query);
  q["forces"] = tri_str(verdict);
  result["query"] = q;
  if (verdict == Tri::exceeded) return 2;
  return verdict == Tri::yes ? 0 : 1;
}

int cmd_generic(const RunConfig& cfg, json& result) {
  Loaded l = load_base(cfg, false);
  if (cfg.forcing_path.empty()) throw InputError("--forcing is required");
  ForcingFile f = parse_forcing(read_file(cfg.forcing_path), l.sig);
  ForcingProperty prop = property_of(cfg, l.sig, f, std::nullopt);
  std::size_t start = cfg.condition.empty() ? prop.least : prop.id_of(cfg.condition);
  if (start == SIZE_MAX)
    throw InputError("the property has no least condition; give --condition");

  Forcer forcer(prop);
  GenericChain chain = build_generic(prop, start, &forcer);
  json names = json::array();
  for (std::size_t p : chain.chain) names.push_back(prop.names[p]);
  result["chain"] = names;
  result["all_decided"] = chain.all_decided;
  json log = json::array();
  for (const auto& d : chain.log)
    log.push_back({{"at", d.nominal},
                   {"sentence", print_sentence(d.gamma)},
                   {"decided", tri_str(d.decided)},
                   {"condition", prop.names[d.condition]}});
  result["decisions"] = log;

  GenericModelResult gm = generic_model(prop, chain, cfg.model_depth, &forcer);
  result["forced_atoms"] = theory_json(gm.forced_atoms);
  result["truncated"] = gm.basic.truncated;
  result["unverified"] = theory_json(gm.unverified);
  result["pool_checked"] = gm.pool_check.size();
  emit_model(cfg, result, gm.basic.model);
  return chain.all_decided && gm.unverified.empty() ? 0 : 2;
}

int cmd_omit(const RunConfig& cfg, json& result) {
  Loaded l = load_base(cfg, true);
  if (cfg.types_path.empty()) throw InputError("--types is required");
  std::vector<TypeBlock> blocks = parse_types(read_file(cfg.types_path), l.sig);
  if (blocks.empty()) throw InputError("no types in --types file");
  std::vector<TypeSpec> types;
  for (std::size_t i = 0; i < blocks.size(); ++i)
    types.push_back({"type" + std::to_string(i), blocks[i].vars, blocks[i].sentences,
                     std::nullopt});

  OmittingModelResult r =
      omitting_model(l.sig, l.theory, types, cfg.budget, cfg.term_depth);
  result["ok"] = r.ok;
  json steps = json::array();
  for (const auto& s : r.audit.steps) {
    json row;
    row["kind"] = s.kind == ChainStep::decide ? "decide" : "witness";
    row["sentence"] = print_sentence(s.sentence);
    row["added"] = s.added;
    if (s.kind == ChainStep::witness) {
      row["type"] = types[s.type_index].name;
      row["theta"] = s.theta_desc;
      row["gamma_index"] = s.gamma_index;
      row["constant"] = s.constant;
    }
    steps.push_back(row);
  }
  result["steps"] = steps;
  result["condition"] = theory_json(r.audit.condition);
  result["notes"] = r.audit.notes;
  if (r.ok) {
    result["sat_T"] = r.audit.sat_T;
    result["all_named"] = r.audit.all_named;
    result["omitted"] = r.audit.omitted;
    emit_model(cfg, result, *r.model);
    return 0;
  }
  if (r.failed_step) result["failed_step"] = *r.failed_step;
  result["failure"] = r.failure;
  return 2;
}

int cmd_entail(const RunConfig& cfg, json& result) {
  Loaded l = load_base(cfg, true);
  if (cfg.sentence.empty()) throw InputError("--sentence is required");
  Sentence goal = parse_sentence(cfg.sentence, l.sig);
  FOSignature ctors;
  for (const auto& name : cfg.constructors) {
    SymName n(name);
    auto it = l.sig.rigid.ops.find(n);
    if (it == l.sig.rigid.ops.end())
      throw InputError("constructor '" + name + "' is not a rigid operation");
    for (const auto& p : it->second) {
      ctors.add_sort(p.result);
      for (const auto& a : p.arity) ctors.add_sort(a);
      ctors.add_op(n, p);
    }
  }
  ConstructorPartition part = constructor_partition(l.sig, ctors);
  EntailVerdict v =
      constructor_entail(l.sig, part, l.theory, goal, cfg.budget, cfg.term_depth);
  result["goal"] = print_sentence(goal);
  result["derivable"] = v.derivable;
  if (v.derivable) {
    result["tree"] = derivation_json(*v.tree);
    return 0;
  }
  result["reason"] = v.reason;
  return 2;
}

}  // namespace

CliResult run(const RunConfig& cfg) {
  CliResult res;
  json& rep = res.report;
  rep["command"] = cfg.command;
  json inputs;
  if (!cfg.sig_path.empty()) inputs["sig"] = cfg.sig_path;
  if (!cfg.theory_path.empty()) inputs["theory"] = cfg.theory_path;
  if (!cfg.model_path.empty()) inputs["model"] = cfg.model_path;
  if (!cfg.subst_path.empty()) inputs["subst"] = cfg.subst_path;
  if (!cfg.forcing_path.empty()) inputs["forcing"] = cfg.forcing_path;
  if (!cfg.types_path.empty()) inputs["types"] = cfg.types_path;
  if (!cfg.sentence.empty()) inputs["sentence"] = cfg.sentence;
  rep["inputs"] = inputs;
  rep["budget"] = {{"max_worlds", cfg.budget.max_worlds},
                   {"max_carrier", cfg.budget.max_carrier},
                   {"max_constants", cfg.budget.max_constants},
                   {"star_bound", cfg.budget.star_bound}};
  rep["term_depth"] = cfg.term_depth;
  rep["seed"] = cfg.seed;
  json result;
  try {
    cfg.budget.check();
    if (cfg.star_bound <= 0 || cfg.term_depth <= 0)
      throw InputError("star bound and term depth must be positive");
    int code;
    if (cfg.command == "validate") code = cmd_validate(cfg, result);
    else if (cfg.command == "check") code = cmd_check(cfg, result);
    else if (cfg.command == "translate") code = cmd_translate(cfg, result);
    else if (cfg.command == "rigidify") code = cmd_rigidify(cfg, result);
    else if (cfg.command == "encode") code = cmd_encode(cfg, result);
    else if (cfg.command == "decode") code = cmd_decode(cfg, result);
    else if (cfg.command == "sat") code = cmd_sat(cfg, result);
    else if (cfg.command == "force") code = cmd_force(cfg, result);
    else if (cfg.command == "generic") code = cmd_generic(cfg, result);
    else if (cfg.command == "omit") code = cmd_omit(cfg, result);
    else if (cfg.command == "entail") code = cmd_entail(cfg, result);
    else throw InputError("unknown command '" + cfg.command + "'");
    rep["result"] = result;
    res.exit_code = code;
  } catch (const InputError& e) {
    rep["error"] = e.what();
    res.exit_code = 3;
  } catch (const std::exception& e) {
    rep["error"] = std::string("internal: ") + e.what();
    res.exit_code = 3;
  }
  rep["exit"] = res.exit_code;
  return res;
}

}  // namespace hdfolcli
