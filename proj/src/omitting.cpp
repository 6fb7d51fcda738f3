#include "hdfol/omitting.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "hdfol/io.hpp"

namespace hdfol {

namespace {

constexpr std::size_t kProbePoolCap = 12;  // probe subsets are enumerated as bitmasks

// Every identifier the signature owns, for freshness checks.
std::set<std::string> sig_names(const HDSignature& sig) {
  std::set<std::string> out;
  auto add_part = [&](const FOSignature& part) {
    for (const auto& s : part.sorts) out.insert(s.base);
    for (const auto& [name, profs] : part.ops) out.insert(name.base);
    for (const auto& [name, profs] : part.rels) out.insert(name.base);
  };
  add_part(sig.nominal);
  add_part(sig.body);
  out.insert(kAny);
  return out;
}

// Odometer over index tuples, last position varies fastest; empty limits
// yield the single empty tuple.
std::vector<std::vector<std::size_t>> index_tuples(const std::vector<std::size_t>& limits) {
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t l : limits)
    if (l == 0) return out;
  std::vector<std::size_t> idx(limits.size(), 0);
  while (true) {
    out.push_back(idx);
    std::size_t i = idx.size();
    while (i > 0) {
      --i;
      if (++idx[i] < limits[i]) break;
      idx[i] = 0;
      if (i == 0) return out;
    }
    if (limits.empty()) return out;
  }
}

std::string budget_str(const SatBudget& b) {
  return "worlds<=" + std::to_string(b.max_worlds) + ", carrier<=" + std::to_string(b.max_carrier);
}

std::string theta_desc_of(const std::vector<VarDecl>& vars, const Substitution& theta) {
  std::string out;
  for (const auto& v : vars) {
    if (!out.empty()) out += ", ";
    out += v.name + "<-";
    auto n = theta.nominal_map.find(v.name);
    if (n != theta.nominal_map.end())
      out += n->second;
    else {
      auto t = theta.term_map.find(v.name);
      out += t != theta.term_map.end() ? print_term(t->second) : "?";
    }
  }
  return out.empty() ? "(empty)" : out;
}

}  // namespace

// ---- types and realization -------------------------------------------------------------

void check_type(const HDSignature& sig, const TypeSpec& ts) {
  std::set<std::string> seen;
  for (const auto& v : ts.vars) {
    if (v.sort != SymName(kAny) && !sig.is_rigid_sort(v.sort))
      throw InputError("type variable '" + v.name + "' has sort '" + to_string(v.sort) +
                       "', which is neither 'any' nor rigid");
    if (!seen.insert(v.name).second)
      throw InputError("type variable '" + v.name + "' is declared twice");
  }
  HDSignature sig_x = extend(sig, ts.vars);
  for (const auto& g : ts.sentences) check_sentence(sig_x, g);
}

RealizeResult realizes(const KripkeStructure& m, const TypeSpec& ts) {
  check_type(m.sig, ts);
  RealizeResult out;
  for (const auto& exp : expansions(m, ts.vars)) {
    std::size_t bad = SIZE_MAX;
    for (std::size_t i = 0; i < ts.sentences.size(); ++i)
      if (!sat_global(exp, ts.sentences[i])) {
        bad = i;
        break;
      }
    if (bad == SIZE_MAX) {
      out.realized = true;
      out.witness = exp;
      return out;
    }
    out.falsified.push_back(bad);
  }
  return out;
}

bool omits(const KripkeStructure& m, const TypeSpec& ts) { return !realizes(m, ts).realized; }

// ---- local realization ----------------------------------------------------------------

std::vector<VarDecl> probe_constants(const HDSignature& sig, const TypeSpec& ts,
                                     const SatBudget& budget) {
  budget.check();
  check_type(sig, ts);
  std::set<std::string> taken = sig_names(sig);
  for (const auto& v : ts.vars) taken.insert(v.name);

  std::vector<SymName> sorts;
  for (const auto& v : ts.vars)
    if (std::find(sorts.begin(), sorts.end(), v.sort) == sorts.end()) sorts.push_back(v.sort);

  std::vector<VarDecl> out;
  for (const auto& s : sorts)
    for (std::size_t i = 0; i < budget.max_constants; ++i) {
      std::string base = "c_" + (s == SymName(kAny) ? std::string("any") : s.base) + "_" +
                         std::to_string(i);
      std::string name = fresh_name(base, taken);
      taken.insert(name);
      out.push_back(VarDecl{name, s});
    }
  return out;
}

namespace {

// Shared engine for the two local-realization shapes. `domain` are the
// constants thetas range over (grouped by sort); when `direct` the type's own
// variables join the signature and theta stays empty.
std::optional<LocalRealization> locally_realizes_impl(const HDSignature& sig,
                                                      const std::vector<Sentence>& T,
                                                      const TypeSpec& ts, const SatBudget& budget,
                                                      const std::vector<Sentence>& probe_pool,
                                                      bool direct) {
  budget.check();
  {
    auto rep = validate(sig);
    if (!rep.ok()) throw InputError("invalid signature: " + rep.joined());
  }
  check_type(sig, ts);

  auto base = bounded_sat(sig, T, budget);
  if (!base)
    throw InputError("the theory has no model within budget (" + budget_str(budget) + ")");

  if (ts.sentences.empty())
    return LocalRealization{{}, Substitution{}, {}, *base};

  std::vector<VarDecl> constants =
      direct ? ts.vars : probe_constants(sig, ts, budget);
  HDSignature sig_c = extend(sig, constants);
  for (const auto& g : probe_pool) check_sentence(sig_c, g);
  if (probe_pool.size() > kProbePoolCap)
    throw InputError("probe pool has " + std::to_string(probe_pool.size()) +
                     " sentences; the subset enumeration is capped at " +
                     std::to_string(kProbePoolCap));

  // Candidate values per type variable; empty in the direct shape.
  std::vector<std::vector<std::string>> cand;
  if (!direct)
    for (const auto& v : ts.vars) {
      std::vector<std::string> names;
      for (const auto& c : constants)
        if (c.sort == v.sort) names.push_back(c.name);
      cand.push_back(std::move(names));
    }

  std::vector<std::size_t> limits;
  for (const auto& c : cand) limits.push_back(c.size());
  auto thetas = index_tuples(direct ? std::vector<std::size_t>{} : limits);

  std::vector<KripkeStructure> cache;  // models over sig_c seen so far
  auto model_of = [&](const std::vector<Sentence>& set) -> std::optional<KripkeStructure> {
    for (const auto& m : cache)
      if (sat_theory(m, set)) return m;
    auto m = bounded_sat(sig_c, set, budget);
    if (m) cache.push_back(*m);
    return m;
  };

  std::vector<std::size_t> unsat_masks;
  for (std::size_t mask = 0; mask < (std::size_t{1} << probe_pool.size()); ++mask) {
    bool doomed = false;
    for (std::size_t u : unsat_masks)
      if ((mask & u) == u) {
        doomed = true;
        break;
      }
    if (doomed) continue;

    std::vector<Sentence> base_set(T.begin(), T.end());
    std::vector<Sentence> probe;
    for (std::size_t i = 0; i < probe_pool.size(); ++i)
      if (mask >> i & 1) {
        probe.push_back(probe_pool[i]);
        base_set.push_back(probe_pool[i]);
      }
    auto pm = model_of(base_set);
    if (!pm) {
      unsat_masks.push_back(mask);
      continue;
    }

    for (const auto& tv : thetas) {
      Substitution theta;
      if (!direct)
        for (std::size_t i = 0; i < ts.vars.size(); ++i) {
          const std::string& value = cand[i][tv[i]];
          if (ts.vars[i].sort == SymName(kAny))
            theta.nominal_map[ts.vars[i].name] = value;
          else
            theta.term_map[ts.vars[i].name] = Term::make(SymName(value));
        }

      bool all = true;
      for (const auto& gamma : ts.sentences) {
        Sentence target = direct ? gamma : substitute(theta, gamma);
        std::vector<Sentence> refute(base_set.begin(), base_set.end());
        refute.push_back(Sentence::neg(target));
        if (model_of(refute)) {  // countermodel: not entailed
          all = false;
          break;
        }
      }
      if (all) return LocalRealization{direct ? std::vector<VarDecl>{} : constants, theta, probe,
                                       *pm};
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<LocalRealization> locally_realizes(const HDSignature& sig,
                                                 const std::vector<Sentence>& T,
                                                 const TypeSpec& ts, const SatBudget& budget,
                                                 const std::vector<Sentence>& probe_pool) {
  return locally_realizes_impl(sig, T, ts, budget, probe_pool, false);
}

std::optional<LocalRealization> locally_realizes_direct(const HDSignature& sig,
                                                        const std::vector<Sentence>& T,
                                                        const TypeSpec& ts,
                                                        const SatBudget& budget,
                                                        const std::vector<Sentence>& probe_pool) {
  return locally_realizes_impl(sig, T, ts, budget, probe_pool, true);
}

// ---- omission witnesses -----------------------------------------------------------------

OmissionWitness omission_witness(const HDSignature& sig_c, const std::vector<Sentence>& T,
                                 const std::vector<Sentence>& p, const Substitution& theta,
                                 const TypeSpec& ts, const SatBudget& budget) {
  budget.check();
  if (ts.sentences.empty())
    throw InputError("the type has no sentences, so it is realized vacuously and cannot be "
                     "omitted");
  check_substitution(sig_c, ts.vars, theta);

  std::vector<Sentence> cond(T.begin(), T.end());
  cond.insert(cond.end(), p.begin(), p.end());
  if (!bounded_sat(sig_c, cond, budget))
    throw InputError("the theory with the probe has no model within budget (" +
                     budget_str(budget) + ")");

  std::set<std::string> taken = sig_names(sig_c);
  for (const auto& g : cond) collect_names(g, taken);
  std::string z = fresh_name("z", taken);
  HDSignature sig_cz = extend(sig_c, {VarDecl{z, SymName(kAny)}});

  for (std::size_t i = 0; i < ts.sentences.size(); ++i) {
    Sentence target = Sentence::at(z, Sentence::neg(substitute(theta, ts.sentences[i])));
    std::vector<Sentence> probe(cond.begin(), cond.end());
    probe.push_back(target);
    auto m = bounded_sat(sig_cz, probe, budget);
    if (m) return OmissionWitness{i, ts.sentences[i], z, *m};
  }
  throw InputError("no omission witness within budget (" + budget_str(budget) +
                   "): the condition entails every instantiated member of the type");
}

// ---- the omitting-types chain -----------------------------------------------------------

OmittingModelResult omitting_model(const HDSignature& sig, const std::vector<Sentence>& T,
                                   const std::vector<TypeSpec>& types, const SatBudget& budget,
                                   int term_depth) {
  budget.check();
  {
    auto rep = validate(sig);
    if (!rep.ok()) throw InputError("invalid signature: " + rep.joined());
  }
  for (const auto& g : T) check_sentence(sig, g);
  for (const auto& ts : types) check_type(sig, ts);

  OmittingModelResult out;
  out.audit.budget = budget;

  // Fresh nominal constants the construction may name worlds with.
  std::set<std::string> taken = sig_names(sig);
  for (const auto& g : T) collect_names(g, taken);
  for (const auto& ts : types) {
    for (const auto& v : ts.vars) taken.insert(v.name);
    for (const auto& g : ts.sentences) collect_names(g, taken);
  }
  std::vector<VarDecl> cdecls;
  std::vector<std::string> cnames;
  for (std::size_t i = 0; i < budget.max_constants; ++i) {
    std::string name = fresh_name("c" + std::to_string(i), taken);
    taken.insert(name);
    cnames.push_back(name);
    cdecls.push_back(VarDecl{name, SymName(kAny)});
  }
  HDSignature sig_c = extend(sig, cdecls);

  std::vector<KripkeStructure> cache;
  auto member_sat = [&](const std::vector<Sentence>& set) -> bool {
    for (const auto& m : cache)
      if (sat_theory(m, set)) return true;
    auto m = bounded_sat(sig_c, set, budget);
    if (!m) return false;
    cache.push_back(std::move(*m));
    return true;
  };

  if (!member_sat(T))
    throw InputError("the theory has no model within budget (" + budget_str(budget) + ")");

  // Ground substitutions per type: nominal variables over every nominal of
  // the extended signature, rigid variables over ground rigid terms.
  struct SubstItem {
    std::size_t type_index;
    std::size_t subst_index;
    Substitution theta;
    std::string desc;
  };
  std::vector<SubstItem> substs;
  std::vector<std::string> noms_c = sig_c.nominals();
  for (std::size_t ti = 0; ti < types.size(); ++ti) {
    const TypeSpec& ts = types[ti];
    if (ts.sentences.empty())
      throw InputError("type '" + ts.name +
                       "' has no sentences, so it is realized vacuously and cannot be omitted");
    std::vector<std::vector<std::string>> nom_cand(ts.vars.size());
    std::vector<std::vector<Term>> term_cand(ts.vars.size());
    std::vector<std::size_t> limits;
    for (std::size_t i = 0; i < ts.vars.size(); ++i) {
      if (ts.vars[i].sort == SymName(kAny)) {
        nom_cand[i] = noms_c;
        limits.push_back(nom_cand[i].size());
      } else {
        term_cand[i] = ground_rigid_terms(sig_c, ts.vars[i].sort, term_depth);
        if (term_cand[i].empty())
          throw InputError("no ground rigid terms of sort '" + to_string(ts.vars[i].sort) +
                           "' at depth " + std::to_string(term_depth) +
                           "; the substitution space for type '" + ts.name + "' is empty");
        limits.push_back(term_cand[i].size());
      }
    }
    std::size_t ordinal = 0;
    for (const auto& tv : index_tuples(limits)) {
      SubstItem item;
      item.type_index = ti;
      item.subst_index = ordinal++;
      for (std::size_t i = 0; i < ts.vars.size(); ++i) {
        if (ts.vars[i].sort == SymName(kAny))
          item.theta.nominal_map[ts.vars[i].name] = nom_cand[i][tv[i]];
        else
          item.theta.term_map[ts.vars[i].name] = term_cand[i][tv[i]];
      }
      item.desc = theta_desc_of(ts.vars, item.theta);
      substs.push_back(std::move(item));
    }
  }

  // Decision items: every theory member located at every nominal.
  std::vector<Sentence> decisions;
  for (const auto& g : T)
    for (const auto& k : noms_c) decisions.push_back(Sentence::at(k, g));

  std::vector<Sentence> p;
  auto with = [&](const Sentence& g) {
    std::vector<Sentence> set(T.begin(), T.end());
    set.insert(set.end(), p.begin(), p.end());
    set.push_back(g);
    return set;
  };

  std::size_t rounds = std::max(decisions.size(), substs.size());
  for (std::size_t j = 0; j < rounds; ++j) {
    if (j < decisions.size()) {
      ChainStep step;
      step.kind = ChainStep::decide;
      step.sentence = decisions[j];
      step.added = member_sat(with(decisions[j]));
      if (step.added) p.push_back(decisions[j]);
      out.audit.steps.push_back(std::move(step));
    }
    if (j < substs.size()) {
      const SubstItem& si = substs[j];
      const TypeSpec& ts = types[si.type_index];

      // Constants already touched by the condition or the substitution are
      // dispreferred; genuinely fresh ones first, then the rest in order.
      std::set<std::string> occupied;
      for (const auto& g : p) collect_names(g, occupied);
      for (const auto& [var, k] : si.theta.nominal_map) occupied.insert(k);
      for (const auto& [var, t] : si.theta.term_map) collect_nominals(t, occupied);
      std::vector<std::string> candidates;
      for (const auto& c : cnames)
        if (!occupied.count(c)) candidates.push_back(c);
      for (const auto& c : noms_c)
        if (std::find(candidates.begin(), candidates.end(), c) == candidates.end())
          candidates.push_back(c);

      bool placed = false;
      for (const auto& c : candidates) {
        for (std::size_t gi = 0; gi < ts.sentences.size() && !placed; ++gi) {
          Sentence w =
              Sentence::at(c, Sentence::neg(substitute(si.theta, ts.sentences[gi])));
          if (!member_sat(with(w))) continue;
          p.push_back(w);
          ChainStep step;
          step.kind = ChainStep::witness;
          step.sentence = w;
          step.added = true;
          step.type_index = si.type_index;
          step.subst_index = si.subst_index;
          step.theta_desc = si.desc;
          step.gamma_index = gi;
          step.constant = c;
          out.audit.steps.push_back(std::move(step));
          placed = true;
        }
        if (placed) break;
      }
      if (!placed) {
        out.failed_step = out.audit.steps.size();
        out.failure = "no omission witness for type '" + ts.name + "' under " + si.desc +
                      " within budget (" + budget_str(budget) +
                      "): the condition entails every instantiated member";
        break;
      }
    }
  }

  out.audit.condition = p;
  out.audit.notes.push_back("added constants: " +
                            (cnames.empty() ? std::string("(none)") : [&] {
                              std::string s;
                              for (const auto& c : cnames) s += (s.empty() ? "" : ", ") + c;
                              return s;
                            }()));
  out.audit.notes.push_back("ground substitutions at term depth " + std::to_string(term_depth));
  out.audit.notes.push_back("memberships tested by bounded search (" + budget_str(budget) +
                            "); 'not added' verdicts are relative to that budget");

  if (out.failed_step) return out;

  std::vector<Sentence> final_set(T.begin(), T.end());
  final_set.insert(final_set.end(), p.begin(), p.end());
  auto mc = bounded_sat(sig_c, final_set, budget);
  if (!mc)
    throw InputError("internal: the final chain condition lost satisfiability within budget");
  out.model_c = *mc;

  KripkeStructure m = *mc;
  m.sig = sig;
  for (const auto& c : cnames) m.nominals.erase(c);
  out.model = m;

  out.audit.sat_T = sat_theory(m, T);
  std::set<std::size_t> named;
  for (const auto& [k, w] : mc->nominals) named.insert(w);
  out.audit.all_named = named.size() == mc->worlds.size();
  bool all_omitted = true;
  for (std::size_t ti = 0; ti < types.size(); ++ti) {
    RealizeResult r = realizes(m, types[ti]);
    out.audit.omitted.push_back(!r.realized);
    if (r.realized) {
      out.audit.realized_by.emplace(ti, *r.witness);
      all_omitted = false;
    }
  }
  out.ok = out.audit.sat_T && out.audit.all_named && all_omitted;
  return out;
}

// ---- constructor-based entailment ---------------------------------------------------------

EntailVerdict constructor_entail(const HDSignature& sig, const ConstructorPartition& part,
                                 const std::vector<Sentence>& T, const Sentence& phi,
                                 const SatBudget& budget, int term_depth) {
  budget.check();
  {
    auto rep = validate(sig);
    if (!rep.ok()) throw InputError("invalid signature: " + rep.joined());
  }
  for (const auto& g : T) check_sentence(sig, g);
  check_sentence(sig, phi);

  EntailOracle oracle = bounded_entail_oracle(sig, budget);
  std::vector<std::string> noms = sig.nominals();
  std::map<Sentence, EntailVerdict> memo;

  std::function<EntailVerdict(const Sentence&, int)> derive = [&](const Sentence& goal,
                                                                  int fuel) -> EntailVerdict {
    auto hit = memo.find(goal);
    if (hit != memo.end()) return hit->second;

    EntailVerdict v;
    if (oracle(T, goal)) {
      v.derivable = true;
      v.tree = DerivationNode{goal, "R0", {}};
      memo[goal] = v;
      return v;
    }

    // Universal goals: forall X.g is represented as neg exists X neg g.
    bool is_forall = goal.kind() == SenKind::neg && goal.sub().kind() == SenKind::exists &&
                     !goal.sub().vars().empty();
    if (!is_forall) {
      v.reason = "not derivable within budget (" + budget_str(budget) +
                 "): no countermodel-free verdict and no closure rule applies";
      memo[goal] = v;
      return v;
    }
    if (fuel == 0) {
      v.reason = "variable peeling depth exhausted at " + print_sentence(goal);
      memo[goal] = v;
      return v;
    }

    const auto& vars = goal.sub().vars();
    const Sentence& body0 = goal.sub().sub();
    Sentence inner = body0.kind() == SenKind::neg ? body0.sub() : Sentence::neg(body0);
    VarDecl v0 = vars[0];
    std::vector<VarDecl> rest(vars.begin() + 1, vars.end());
    Sentence inner_full = rest.empty() ? inner : Sentence::forall(rest, inner);

    std::vector<Sentence> premises;
    std::string rule;
    if (v0.sort == SymName(kAny)) {
      rule = "R1";
      if (noms.empty()) {
        v.reason = "the signature has no nominals to instantiate '" + v0.name + "' with";
        memo[goal] = v;
        return v;
      }
      for (const auto& k1 : noms)
        for (const auto& k2 : noms)
          premises.push_back(Sentence::at(k1, rename_nominal(inner_full, v0.name, k2)));
    } else if (part.constrained.count(v0.sort)) {
      rule = "R2";
      auto terms = constructor_terms(sig, part, v0.sort, term_depth);
      if (terms.empty()) {
        v.reason = "no constructor terms of sort '" + to_string(v0.sort) + "' at depth " +
                   std::to_string(term_depth);
        memo[goal] = v;
        return v;
      }
      std::set<std::string> used;
      collect_names(inner_full, used);
      for (const auto& t : terms)
        for (const auto& tv : t.vars)
          if (used.count(tv.name))
            throw InputError("constructor variable '" + tv.name +
                             "' collides with a name in the goal; rename the goal's variables");
      if (noms.empty()) {
        v.reason = "the signature has no nominals to locate the instances at";
        memo[goal] = v;
        return v;
      }
      for (const auto& k : noms)
        for (const auto& t : terms) {
          Substitution theta;
          theta.term_map[v0.name] = t.term;
          Sentence psi = substitute(theta, inner_full);
          premises.push_back(
              Sentence::at(k, t.vars.empty() ? psi : Sentence::forall(t.vars, psi)));
        }
    } else {
      v.reason = "leading variable '" + v0.name + "' has sort '" + to_string(v0.sort) +
                 "', which is outside the constructor-constrained part; only direct bounded "
                 "entailment applies";
      memo[goal] = v;
      return v;
    }

    std::vector<DerivationNode> children;
    for (const auto& pr : premises) {
      EntailVerdict sub = derive(pr, fuel - 1);
      if (!sub.derivable) {
        v.reason = rule + " premise not derivable: " + print_sentence(pr) + " — " + sub.reason;
        memo[goal] = v;
        return v;
      }
      children.push_back(*sub.tree);
    }
    v.derivable = true;
    v.tree = DerivationNode{goal, rule, std::move(children)};
    memo[goal] = v;
    return v;
  };

  return derive(phi, 8);
}

// ---- the fixed type families ---------------------------------------------------------------

FixedTypes fixed_types(const HDSignature& sig, const ConstructorPartition& part, int term_depth) {
  {
    auto rep = validate(sig);
    if (!rep.ok()) throw InputError("invalid signature: " + rep.joined());
  }
  std::set<std::string> taken = sig_names(sig);
  std::string x = fresh_name("x", taken);
  std::string y = fresh_name("y", taken);

  FixedTypes out;
  out.gamma_n.name = "Gamma_n";
  out.gamma_n.vars = {VarDecl{x, SymName(kAny)}};
  for (const auto& k : sig.nominals())
    out.gamma_n.sentences.push_back(Sentence::neg(Sentence::at(k, Sentence::nominal(x))));

  for (const auto& s : part.constrained) {
    TypeSpec ts;
    ts.name = "Gamma_r(" + to_string(s) + ")";
    ts.vars = {VarDecl{y, s}};
    ts.index_bound = term_depth;
    for (const auto& t : constructor_terms(sig, part, s, term_depth))
      ts.sentences.push_back(Sentence::forall(
          t.vars, Sentence::neg(Sentence::eq(t.term, Term::make(SymName(y))))));
    out.gamma_r.emplace(s, std::move(ts));
  }

  for (const auto& s : sig.extended_rigid_sorts()) {
    TypeSpec ts;
    ts.name = "Gamma_s(" + to_string(s) + ")";
    ts.vars = {VarDecl{x, s}};
    if (s == SymName(kAny)) {
      for (const auto& c : sig.nominals())
        ts.sentences.push_back(Sentence::neg(Sentence::at(c, Sentence::nominal(x))));
    } else {
      for (const auto& c : sig.rigid.constants(s))
        ts.sentences.push_back(
            Sentence::neg(Sentence::eq(Term::make(c), Term::make(SymName(x)))));
    }
    out.gamma_s.emplace(s, std::move(ts));
  }
  return out;
}

// ---- the order-chain fixture ----------------------------------------------------------------

OrderFixture order_chain_fixture(const HDSignature& sig, const SymName& sort, std::size_t n) {
  if (n == 0) throw InputError("an order chain needs at least one constant");
  bool is_any = sort == SymName(kAny);
  if (!is_any && !sig.is_rigid_sort(sort))
    throw InputError("sort '" + to_string(sort) + "' is neither 'any' nor rigid");

  OrderFixture out;
  out.sig = sig;
  std::set<std::string> taken = sig_names(sig);
  std::string leq = fresh_name("leq", taken);
  taken.insert(leq);
  for (std::size_t i = 0; i < n; ++i) {
    std::string c = fresh_name("c" + std::to_string(i), taken);
    taken.insert(c);
    out.constants.push_back(c);
  }
  std::string u = fresh_name("u", taken);
  taken.insert(u);
  std::string v = fresh_name("v", taken);
  taken.insert(v);
  std::string w = fresh_name("w", taken);

  if (is_any) {
    out.sig.nominal.add_rel(SymName(leq), RelProfile{{SymName(kAny), SymName(kAny)}});
    for (const auto& c : out.constants)
      out.sig.nominal.add_op(SymName(c), OpProfile{{}, SymName(kAny)});

    auto le = [&](const std::string& a, const std::string& b) {
      return Sentence::at(a, Sentence::dia(Action::atom(leq), Sentence::nominal(b)));
    };
    VarDecl du{u, SymName(kAny)}, dv{v, SymName(kAny)}, dw{w, SymName(kAny)};
    out.sentences.push_back(Sentence::forall({du}, le(u, u)));
    out.sentences.push_back(Sentence::forall({du, dv}, Sentence::disj({le(u, v), le(v, u)})));
    out.sentences.push_back(Sentence::forall(
        {du, dv},
        Sentence::implies(Sentence::conj({le(u, v), le(v, u)}),
                          Sentence::at(u, Sentence::nominal(v)))));
    out.sentences.push_back(Sentence::forall(
        {du, dv, dw},
        Sentence::implies(Sentence::conj({le(u, v), le(v, w)}), le(u, w))));
    out.sentences.push_back(Sentence::forall(
        {du}, Sentence::exists({dv}, Sentence::conj({le(u, v),
                                                     Sentence::neg(Sentence::at(
                                                         u, Sentence::nominal(v)))}))));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        out.sentences.push_back(le(out.constants[i], out.constants[j]));
  } else {
    RelProfile rp{{sort, sort}};
    out.sig.body.add_rel(SymName(leq), rp);
    out.sig.rigid.add_rel(SymName(leq), rp);
    OpProfile cp{{}, sort};
    for (const auto& c : out.constants) {
      out.sig.body.add_op(SymName(c), cp);
      out.sig.rigid.add_op(SymName(c), cp);
    }

    auto le = [&](const std::string& a, const std::string& b) {
      return Sentence::rel(SymName(leq), {Term::make(SymName(a)), Term::make(SymName(b))});
    };
    VarDecl du{u, sort}, dv{v, sort}, dw{w, sort};
    auto eq = [&](const std::string& a, const std::string& b) {
      return Sentence::eq(Term::make(SymName(a)), Term::make(SymName(b)));
    };
    out.sentences.push_back(Sentence::forall({du}, le(u, u)));
    out.sentences.push_back(Sentence::forall({du, dv}, Sentence::disj({le(u, v), le(v, u)})));
    out.sentences.push_back(Sentence::forall(
        {du, dv}, Sentence::implies(Sentence::conj({le(u, v), le(v, u)}), eq(u, v))));
    out.sentences.push_back(Sentence::forall(
        {du, dv, dw},
        Sentence::implies(Sentence::conj({le(u, v), le(v, w)}), le(u, w))));
    out.sentences.push_back(Sentence::forall(
        {du},
        Sentence::exists({dv}, Sentence::conj({le(u, v), Sentence::neg(eq(u, v))}))));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        out.sentences.push_back(le(out.constants[i], out.constants[j]));
  }
  for (const auto& g : out.sentences) check_sentence(out.sig, g);
  return out;
}

}  // namespace hdfol
