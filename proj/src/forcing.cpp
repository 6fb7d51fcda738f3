#include "hdfol/forcing.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <memory>
#include <tuple>

namespace hdfol {

namespace {

constexpr std::size_t kPoolCap = 20000;        // closure size guard
constexpr std::size_t kTableCap = 1u << 22;    // per-table enumeration guard
constexpr std::size_t kSubsetCap = 12;         // pool size for subset enumeration

// All tuples under the given limits, last position varying fastest.
std::vector<std::vector<std::size_t>> all_tuples(const std::vector<std::size_t>& limits) {
  std::vector<std::vector<std::size_t>> out;
  if (limits.empty()) {
    out.push_back({});
    return out;
  }
  for (auto l : limits)
    if (l == 0) return out;
  std::vector<std::size_t> cur(limits.size(), 0);
  for (;;) {
    out.push_back(cur);
    std::size_t i = limits.size();
    while (i-- > 0) {
      if (++cur[i] < limits[i]) break;
      cur[i] = 0;
      if (i == 0) return out;
    }
  }
}

std::size_t checked_pow(std::size_t base, std::size_t exp, const std::string& what) {
  if (base <= 1) return base;
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && r > kTableCap / base)
      throw InputError("bounded search: enumeration space for " + what +
                       " exceeds the internal cap; shrink the budget");
    r *= base;
  }
  return r;
}

// ---- ground substitutions ----------------------------------------------------

struct SubstSpace {
  std::vector<Substitution> subs;
  bool truncated = false;  // the term enumeration was cut by the depth bound
};

// Every substitution of the variables by index nominals (any-sorted) and
// ground rigid terms up to term_depth (rigid-sorted). `truncated` is set when
// deeper terms would still appear, so an exhausted search is not definitive.
SubstSpace ground_substitutions(const HDSignature& sig, const std::vector<VarDecl>& vars,
                                const std::vector<std::string>& index, int term_depth) {
  SubstSpace out;
  bool any_rigid = false;
  for (const auto& v : vars)
    if (v.sort != SymName(kAny)) any_rigid = true;

  std::map<SymName, std::vector<Term>> uni;
  bool saturated = true;
  if (any_rigid) {
    uni = ground_rigid_universe(sig, term_depth);
    auto deeper = ground_rigid_universe(sig, term_depth + 1);
    for (const auto& [sort, terms] : deeper) {
      auto it = uni.find(sort);
      if (it == uni.end() ? !terms.empty() : it->second.size() != terms.size()) saturated = false;
    }
    if (!saturated) out.truncated = true;
  }

  std::vector<std::size_t> limits;
  for (const auto& v : vars) {
    if (v.sort == SymName(kAny)) {
      limits.push_back(index.size());
    } else {
      auto it = uni.find(v.sort);
      limits.push_back(it == uni.end() ? 0 : it->second.size());
    }
  }
  for (const auto& tup : all_tuples(limits)) {
    Substitution s;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (vars[i].sort == SymName(kAny))
        s.nominal_map[vars[i].name] = index[tup[i]];
      else
        s.term_map[vars[i].name] = uni.at(vars[i].sort)[tup[i]];
    }
    out.subs.push_back(std::move(s));
  }
  return out;
}

}  // namespace

// ---- SatBudget -----------------------------------------------------------------

void SatBudget::check() const {
  if (max_worlds == 0) throw InputError("budget: max worlds must be positive");
  if (max_carrier == 0) throw InputError("budget: max carrier size must be positive");
  if (max_constants == 0) throw InputError("budget: max added constants must be positive");
  if (star_bound <= 0) throw InputError("budget: star bound must be positive");
}

// ---- sentence pools --------------------------------------------------------------

bool SentencePool::contains(const Sentence& located) const {
  return std::find(items.begin(), items.end(), located) != items.end();
}

SentencePool make_pool(const HDSignature& sig, const std::vector<Sentence>& seed, int star_bound,
                       int term_depth) {
  if (star_bound <= 0) throw InputError("pool: star bound must be positive");
  if (term_depth <= 0) throw InputError("pool: term depth must be positive");
  SentencePool pool;
  pool.sig = sig;
  pool.index = sig.nominals();
  pool.star_bound = star_bound;
  pool.term_depth = term_depth;

  std::set<Sentence> seen;
  std::deque<Sentence> work;
  for (const auto& s : seed) {
    if (s.null() || s.kind() != SenKind::at)
      throw InputError("pool seeds must be located sentences: at k (...)");
    check_sentence(sig, s);
    work.push_back(s);
  }

  while (!work.empty()) {
    Sentence item = work.front();
    work.pop_front();
    if (!seen.insert(item).second) continue;
    pool.items.push_back(item);
    if (pool.items.size() > kPoolCap)
      throw InputError("pool closure exceeds " + std::to_string(kPoolCap) +
                       " items; lower the star bound or term depth");

    const std::string& k = item.label();
    const Sentence& g = item.sub();
    auto push = [&](const std::string& at, const Sentence& s) {
      work.push_back(Sentence::at(at, s));
    };
    switch (g.kind()) {
      case SenKind::nominal:
      case SenKind::eq:
      case SenKind::rel:
        break;
      case SenKind::at:
        push(g.label(), g.sub());
        break;
      case SenKind::neg:
        push(k, g.sub());
        break;
      case SenKind::disj:
        for (const auto& m : g.subs()) push(k, m);
        break;
      case SenKind::store:
        push(k, rename_nominal(g.sub(), g.label(), k));
        break;
      case SenKind::exists: {
        auto space = ground_substitutions(sig, g.vars(), pool.index, term_depth);
        for (const auto& th : space.subs) push(k, substitute(th, g.sub()));
        break;
      }
      case SenKind::dia: {
        const Action& a = g.action();
        const Sentence& s = g.sub();
        if (s.kind() == SenKind::nominal) {
          switch (a.kind()) {
            case Action::Kind::atom:
              break;  // extended atomic
            case Action::Kind::seq:
              for (const auto& kp : pool.index) {
                push(k, Sentence::dia(a.left(), Sentence::nominal(kp)));
                push(kp, Sentence::dia(a.right(), s));
              }
              break;
            case Action::Kind::alt:
              push(k, Sentence::dia(a.left(), s));
              push(k, Sentence::dia(a.right(), s));
              break;
            case Action::Kind::star:
              push(k, s);  // zero unfoldings: the nominal itself
              for (int n = 1; n <= star_bound; ++n)
                push(k, Sentence::dia(Action::power(a.left(), n), s));
              break;
          }
        } else {
          for (const auto& kp : pool.index) {
            push(k, Sentence::dia(a, Sentence::nominal(kp)));
            push(kp, s);
          }
        }
        break;
      }
    }
  }
  return pool;
}

SentencePool make_pool_at_all(const HDSignature& sig, const std::vector<Sentence>& seed,
                              int star_bound, int term_depth) {
  std::vector<Sentence> located;
  for (const auto& g : seed)
    for (const auto& k : sig.nominals()) located.push_back(Sentence::at(k, g));
  return make_pool(sig, located, star_bound, term_depth);
}

// ---- forcing properties -----------------------------------------------------------

std::vector<std::size_t> ForcingProperty::geq(std::size_t p) const {
  std::vector<std::size_t> out;
  for (std::size_t q = 0; q < size(); ++q)
    if (leq(p, q)) out.push_back(q);
  return out;
}

std::size_t ForcingProperty::id_of(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return i;
  throw InputError("unknown condition '" + name + "'");
}

namespace {

// Canonical located forms of a basic sentence: retrieve forms as-is, bare
// atoms scoped at every index nominal.
void canonical_atoms(const Sentence& b, const std::vector<std::string>& index,
                     std::set<Sentence>& out) {
  if (b.kind() == SenKind::at) {
    out.insert(b);
  } else {
    for (const auto& k : index) out.insert(Sentence::at(k, b));
  }
}

}  // namespace

ForcingProperty make_forcing_property(const HDSignature& sig,
                                      const std::vector<std::string>& conditions,
                                      const std::vector<std::pair<std::string, std::string>>& leq,
                                      const std::vector<std::pair<std::string, Sentence>>& labels,
                                      const SentencePool& pool) {
  if (!(pool.sig == sig)) throw InputError("pool signature differs from the property signature");
  if (conditions.empty()) throw InputError("a forcing property needs at least one condition");
  ForcingProperty prop;
  prop.sig = sig;
  prop.pool = pool;
  prop.names = conditions;

  std::map<std::string, std::size_t> id;
  for (std::size_t i = 0; i < conditions.size(); ++i)
    if (!id.emplace(conditions[i], i).second)
      throw InputError("duplicate condition '" + conditions[i] + "'");

  std::size_t n = conditions.size();
  std::vector<std::vector<bool>> le(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) le[i][i] = true;
  for (const auto& [a, b] : leq) {
    auto ia = id.find(a), ib = id.find(b);
    if (ia == id.end()) throw InputError("unknown condition '" + a + "' in the order");
    if (ib == id.end()) throw InputError("unknown condition '" + b + "' in the order");
    le[ia->second][ib->second] = true;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (le[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (le[k][j]) le[i][j] = true;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (le[i][j]) prop.order.insert({i, j});

  prop.least = SIZE_MAX;
  for (std::size_t i = 0; i < n && prop.least == SIZE_MAX; ++i) {
    bool below_all = true;
    for (std::size_t j = 0; j < n; ++j) below_all = below_all && le[i][j];
    if (below_all) prop.least = i;
  }

  prop.content.resize(n);
  prop.label_src.resize(n);
  prop.label.resize(n);
  for (const auto& [cond, b] : labels) {
    auto it = id.find(cond);
    if (it == id.end()) throw InputError("label names unknown condition '" + cond + "'");
    check_sentence(sig, b);
    if (!is_basic_sentence(b))
      throw InputError("label of '" + cond + "' is not a basic sentence: " + print_sentence(b));
    prop.label_src[it->second].push_back(b);
    canonical_atoms(b, pool.index, prop.label[it->second]);
  }
  prop.content = prop.label_src;
  return prop;
}

// ---- axiom checking -----------------------------------------------------------------

EntailOracle bounded_entail_oracle(const HDSignature& sig, const SatBudget& budget) {
  budget.check();
  auto cache =
      std::make_shared<std::map<std::pair<std::vector<Sentence>, Sentence>, bool>>();
  return [sig, budget, cache](const std::vector<Sentence>& premises,
                              const Sentence& conclusion) -> bool {
    std::vector<Sentence> key_prem = premises;
    std::sort(key_prem.begin(), key_prem.end());
    key_prem.erase(std::unique(key_prem.begin(), key_prem.end()), key_prem.end());
    auto key = std::make_pair(key_prem, conclusion);
    auto it = cache->find(key);
    if (it != cache->end()) return it->second;
    std::vector<Sentence> t = key_prem;
    t.push_back(Sentence::neg(conclusion));
    bool entailed = !bounded_sat(sig, t, budget).has_value();
    (*cache)[key] = entailed;
    return entailed;
  };
}

AxiomReport check_forcing_axioms(const ForcingProperty& prop, const EntailOracle& oracle) {
  AxiomReport rep;
  std::size_t n = prop.size();

  for (std::size_t p = 0; p < n; ++p)
    if (!prop.leq(p, p)) rep.violations.add("order is not reflexive at '" + prop.names[p] + "'");
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) {
      if (p != q && prop.leq(p, q) && prop.leq(q, p))
        rep.violations.add("order is not antisymmetric between '" + prop.names[p] + "' and '" +
                           prop.names[q] + "'");
      if (!prop.leq(p, q)) continue;
      for (std::size_t r = 0; r < n; ++r)
        if (prop.leq(q, r) && !prop.leq(p, r))
          rep.violations.add("order is not transitive: '" + prop.names[p] + "' <= '" +
                             prop.names[q] + "' <= '" + prop.names[r] + "'");
    }

  if (prop.least == SIZE_MAX || prop.least >= n) {
    rep.violations.add("no least condition");
  } else {
    for (std::size_t q = 0; q < n; ++q)
      if (!prop.leq(prop.least, q))
        rep.violations.add("least condition '" + prop.names[prop.least] + "' is not below '" +
                           prop.names[q] + "'");
  }

  for (std::size_t p = 0; p < n; ++p)
    for (const auto& b : prop.label_src[p])
      if (!is_basic_sentence(b))
        rep.violations.add("label of '" + prop.names[p] +
                           "' is not a basic sentence: " + print_sentence(b));

  for (const auto& [p, q] : prop.order) {
    if (p == q) continue;
    for (const auto& s : prop.label[p])
      if (prop.label[q].count(s) == 0)
        rep.violations.add("label monotonicity fails: '" + prop.names[p] + "' <= '" +
                           prop.names[q] + "' but f(" + prop.names[p] + ") carries " +
                           print_sentence(s) + " outside f(" + prop.names[q] + ")");
  }

  // Witness axiom: whenever f(p) entails a located atom, some q >= p carries
  // it. Candidates: the pool's atomic items plus every label atom.
  std::set<Sentence> candidates;
  for (const auto& item : prop.pool.items)
    if (is_extended_atom(item.sub())) candidates.insert(item);
  for (std::size_t p = 0; p < n; ++p)
    for (const auto& s : prop.label[p]) candidates.insert(s);

  bool used_oracle = false;
  for (std::size_t p = 0; p < n; ++p) {
    for (const auto& cand : candidates) {
      bool witnessed = false;
      for (std::size_t q = 0; q < n && !witnessed; ++q)
        witnessed = prop.leq(p, q) && prop.label[q].count(cand) != 0;
      if (witnessed) continue;
      used_oracle = true;
      if (oracle(prop.label_src[p], cand))
        rep.violations.add("witness axiom fails at '" + prop.names[p] + "': its label entails " +
                           print_sentence(cand) + " but no condition above carries it");
    }
  }
  if (used_oracle)
    rep.notes.push_back(
        "witness-axiom entailments are decided by a bounded search; a reported violation is "
        "relative to that budget");
  return rep;
}

// ---- the forcing relation -------------------------------------------------------------

Tri Forcer::forces(std::size_t p, const std::string& k, const Sentence& g) {
  if (p >= prop_.size()) throw InputError("condition id out of range");
  auto key = std::make_tuple(p, k, g);
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;

  Tri r = Tri::no;
  if (is_extended_atom(g)) {
    r = tri_of(prop_.label[p].count(Sentence::at(k, g)) != 0);
  } else {
    switch (g.kind()) {
      case SenKind::at:
        r = forces(p, g.label(), g.sub());
        break;
      case SenKind::neg: {
        bool cut = false;
        r = Tri::yes;
        for (std::size_t q : prop_.geq(p)) {
          Tri t = forces(q, k, g.sub());
          if (t == Tri::yes) {
            r = Tri::no;
            cut = false;
            break;
          }
          if (t == Tri::exceeded) cut = true;
        }
        if (r == Tri::yes && cut) r = Tri::exceeded;
        break;
      }
      case SenKind::disj: {
        r = Tri::no;
        for (const auto& m : g.subs()) {
          r = tri_or(r, forces(p, k, m));
          if (r == Tri::yes) break;
        }
        break;
      }
      case SenKind::store:
        r = forces(p, k, rename_nominal(g.sub(), g.label(), k));
        break;
      case SenKind::exists: {
        auto space =
            ground_substitutions(prop_.sig, g.vars(), prop_.pool.index, prop_.pool.term_depth);
        r = Tri::no;
        for (const auto& th : space.subs) {
          r = tri_or(r, forces(p, k, substitute(th, g.sub())));
          if (r == Tri::yes) break;
        }
        if (r == Tri::no && space.truncated) r = Tri::exceeded;
        break;
      }
      case SenKind::dia: {
        const Action& a = g.action();
        const Sentence& s = g.sub();
        if (s.kind() == SenKind::nominal) {
          switch (a.kind()) {
            case Action::Kind::atom:
              r = Tri::no;  // unreachable: extended atomic
              break;
            case Action::Kind::seq: {
              r = Tri::no;
              for (const auto& kp : prop_.pool.index) {
                Tri t = forces(p, k, Sentence::dia(a.left(), Sentence::nominal(kp)));
                if (t != Tri::no) t = tri_and(t, forces(p, kp, Sentence::dia(a.right(), s)));
                r = tri_or(r, t);
                if (r == Tri::yes) break;
              }
              break;
            }
            case Action::Kind::alt:
              r = tri_or(forces(p, k, Sentence::dia(a.left(), s)),
                         forces(p, k, Sentence::dia(a.right(), s)));
              break;
            case Action::Kind::star: {
              r = forces(p, k, s);  // zero steps
              for (int i = 1; i <= prop_.pool.star_bound && r != Tri::yes; ++i)
                r = tri_or(r, forces(p, k, Sentence::dia(Action::power(a.left(), i), s)));
              // A forced iteration has a witness of length < the index size
              // (repeated stops shorten), so a miss below that is final.
              if (r == Tri::no &&
                  prop_.pool.star_bound + 1 < static_cast<int>(prop_.pool.index.size()))
                r = Tri::exceeded;
              break;
            }
          }
        } else {
          r = Tri::no;
          for (const auto& kp : prop_.pool.index) {
            Tri t = forces(p, k, Sentence::dia(a, Sentence::nominal(kp)));
            if (t != Tri::no) t = tri_and(t, forces(p, kp, s));
            r = tri_or(r, t);
            if (r == Tri::yes) break;
          }
        }
        break;
      }
      case SenKind::nominal:
      case SenKind::eq:
      case SenKind::rel:
        r = Tri::no;  // unreachable: extended atomic
        break;
    }
  }
  memo_[key] = r;
  return r;
}

Tri Forcer::weak_forces(std::size_t p, const std::string& k, const Sentence& g) {
  Tri all = Tri::yes;
  for (std::size_t q : prop_.geq(p)) {
    Tri some = Tri::no;
    for (std::size_t r : prop_.geq(q)) {
      some = tri_or(some, forces(r, k, g));
      if (some == Tri::yes) break;
    }
    all = tri_and(all, some);
    if (all == Tri::no) break;
  }
  return all;
}

Tri forces(const ForcingProperty& prop, std::size_t p, const std::string& k, const Sentence& g) {
  Forcer f(prop);
  return f.forces(p, k, g);
}

Tri weak_forces(const ForcingProperty& prop, std::size_t p, const std::string& k,
                const Sentence& g) {
  Forcer f(prop);
  return f.weak_forces(p, k, g);
}

// ---- generic chains ----------------------------------------------------------------

GenericChain build_generic(const ForcingProperty& prop, std::size_t start, Forcer* forcer) {
  if (start >= prop.size()) throw InputError("condition id out of range");
  Forcer own(prop);
  Forcer& f = forcer ? *forcer : own;

  GenericChain out;
  out.chain.push_back(start);
  std::size_t cur = start;

  for (const auto& item : prop.pool.items) {
    const std::string& k = item.label();
    const Sentence& g = item.sub();
    std::size_t pick = SIZE_MAX;
    for (std::size_t q : prop.geq(cur)) {
      if (f.forces(q, k, g) == Tri::yes) {
        pick = q;
        break;
      }
    }
    Tri decided = Tri::yes;
    if (pick == SIZE_MAX) {
      for (std::size_t q : prop.geq(cur)) {
        if (f.forces(q, k, Sentence::neg(g)) == Tri::yes) {
          pick = q;
          break;
        }
      }
      decided = Tri::no;
    }
    if (pick == SIZE_MAX) {
      decided = Tri::exceeded;
      pick = cur;
      out.all_decided = false;
    }
    cur = pick;
    out.chain.push_back(cur);
    out.log.push_back(Decision{k, g, decided, cur});
  }

  for (std::size_t r = 0; r < prop.size(); ++r)
    if (prop.leq(r, cur)) out.generic.push_back(r);
  return out;
}

Tri g_forces(Forcer& forcer, const GenericChain& chain, const std::string& k, const Sentence& g) {
  Tri r = Tri::no;
  for (std::size_t member : chain.generic) {
    r = tri_or(r, forcer.forces(member, k, g));
    if (r == Tri::yes) break;
  }
  return r;
}

// ---- the generic model ----------------------------------------------------------------

GenericModelResult generic_model(const ForcingProperty& prop, const GenericChain& chain,
                                 int depth, Forcer* forcer) {
  if (chain.log.size() != prop.pool.items.size())
    throw InputError("the chain does not decide this property's pool");
  Forcer own(prop);
  Forcer& f = forcer ? *forcer : own;

  GenericModelResult out;
  std::set<Sentence> b;
  for (std::size_t r : chain.generic)
    for (const auto& s : prop.label[r]) b.insert(s);
  out.forced_atoms.assign(b.begin(), b.end());
  out.basic = basic_model(out.forced_atoms, prop.sig, depth);

  const KripkeStructure& m = out.basic.model;
  for (std::size_t i = 0; i < prop.pool.items.size(); ++i) {
    const Sentence& item = prop.pool.items[i];
    const std::string& k = item.label();
    const Sentence& g = item.sub();
    Tri gf = g_forces(f, chain, k, g);
    out.pool_check.emplace_back(item, gf);

    Tri decided = chain.log[i].decided;
    if (decided == Tri::exceeded) {
      out.unverified.push_back(item);
      continue;
    }
    bool sat = sat_local(m, m.world_of(k), g);
    bool expected = decided == Tri::yes;
    if (sat != expected)
      throw InputError("generic model check failed on " + print_sentence(item) + ": the chain " +
                       (expected ? "forces it but the model refutes it"
                                 : "forces its negation but the model satisfies it") +
                       (out.basic.truncated ? " (carrier depth was truncated)" : "") +
                       " — the pool is not witness-closed");
  }
  return out;
}

// ---- bounded satisfiability ---------------------------------------------------------

namespace {

// Everything a sentence reads from a candidate structure. The staged search
// uses this to run each check at the earliest point where its value is fixed.
struct ReadSpec {
  std::set<std::string> mods;                   // modalities read
  std::set<SymName> var_sorts;                  // carriers read by quantifiers
  std::set<std::string> rigid_ops, rigid_rels;  // base names (all profiles rigid)
  std::map<std::string, std::set<std::string>> flex_op_pins, flex_rel_pins;
  std::set<std::string> flex_op_all, flex_rel_all;  // read at every world

  bool trivial() const {
    return mods.empty() && var_sorts.empty() && rigid_ops.empty() && rigid_rels.empty() &&
           flex_op_pins.empty() && flex_rel_pins.empty() && flex_op_all.empty() &&
           flex_rel_all.empty();
  }
};

bool rigid_all_op(const HDSignature& sig, const SymName& b) {
  return sig.rigid.has_op(b) && sig.rigid.ops.at(b).size() == sig.body.ops.at(b).size();
}

bool rigid_all_rel(const HDSignature& sig, const SymName& b) {
  return sig.rigid.has_rel(b) && sig.rigid.rels.at(b).size() == sig.body.rels.at(b).size();
}

void scan_term(const HDSignature& sig, const Term& t, ReadSpec& rs) {
  const SymName& f = t.op();
  SymName b(f.base);
  if (sig.body.has_op(b)) {
    if (rigid_all_op(sig, b))
      rs.rigid_ops.insert(f.base);
    else if (f.pinned() && sig.is_nominal(f.at))
      rs.flex_op_pins[f.base].insert(f.at);
    else
      rs.flex_op_all.insert(f.base);
  }
  for (const auto& a : t.args()) scan_term(sig, a, rs);
}

void scan_action(const Action& a, ReadSpec& rs) {
  switch (a.kind()) {
    case Action::Kind::atom:
      rs.mods.insert(a.modality());
      return;
    case Action::Kind::seq:
    case Action::Kind::alt:
      scan_action(a.left(), rs);
      scan_action(a.right(), rs);
      return;
    case Action::Kind::star:
      scan_action(a.left(), rs);
      return;
  }
}

void scan_sentence(const HDSignature& sig, const Sentence& g, ReadSpec& rs) {
  switch (g.kind()) {
    case SenKind::nominal:
      return;
    case SenKind::eq:
      scan_term(sig, g.lhs(), rs);
      scan_term(sig, g.rhs(), rs);
      return;
    case SenKind::rel: {
      const SymName& r = g.rel_name();
      SymName b(r.base);
      if (sig.body.has_rel(b)) {
        if (rigid_all_rel(sig, b))
          rs.rigid_rels.insert(r.base);
        else if (r.pinned() && sig.is_nominal(r.at))
          rs.flex_rel_pins[r.base].insert(r.at);
        else
          rs.flex_rel_all.insert(r.base);
      }
      for (const auto& a : g.args()) scan_term(sig, a, rs);
      return;
    }
    case SenKind::at:
    case SenKind::neg:
    case SenKind::store:
      scan_sentence(sig, g.sub(), rs);
      return;
    case SenKind::disj:
      for (const auto& d : g.subs()) scan_sentence(sig, d, rs);
      return;
    case SenKind::exists:
      for (const auto& v : g.vars())
        if (v.sort != SymName(kAny)) rs.var_sorts.insert(v.sort);
      scan_sentence(sig, g.sub(), rs);
      return;
    case SenKind::dia:
      scan_action(g.action(), rs);
      scan_sentence(sig, g.sub(), rs);
      return;
  }
}

struct SlotD {
  enum Kind { mod, car, op, rel } kind;
  std::string mod_name;  // kind mod
  SymName sym;           // sort / op / rel name
  OpProfile opp;
  RelProfile rlp;
  bool rig = false;       // rigid site
  std::size_t world = 0;  // flexible site
  std::vector<std::size_t> checks;
};

// Saturating power, used only to order table slots cheapest-first.
std::size_t sat_pow(std::size_t base, std::size_t exp) {
  constexpr std::size_t cap = std::size_t{1} << 62;
  if (base <= 1) return base;
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (r > cap / base) return cap;
    r *= base;
  }
  return r;
}

// Zero/empty tables and first-option denotations for everything the search
// left unassigned (symbols that occur in no sentence of the theory).
void fill_defaults(KripkeStructure& m) {
  const HDSignature& sig = m.sig;
  for (const auto& k : sig.nominals()) m.nominals.try_emplace(k, 0);
  for (const auto& md : sig.modalities()) m.modalities.try_emplace(md, std::set<std::pair<std::size_t, std::size_t>>{});
  for (const auto& s : sig.body.sorts) {
    if (sig.is_rigid_sort(s))
      m.rigid.carriers.try_emplace(s, std::vector<std::string>{s.base + "0"});
    else
      for (auto& loc : m.local) loc.carriers.try_emplace(s, std::vector<std::string>{s.base + "0"});
  }
  auto fill_site = [&](Interp& site, std::size_t w, const SymName& name, const OpProfile& p) {
    auto key = std::make_pair(name, p);
    if (site.ops.count(key)) return;
    std::vector<std::size_t> limits;
    for (const auto& s : p.arity) limits.push_back(m.carrier_size(w, s));
    std::map<std::vector<std::size_t>, std::size_t> tbl;
    for (const auto& tup : all_tuples(limits)) tbl[tup] = 0;
    site.ops[key] = std::move(tbl);
  };
  for (const auto& [name, profs] : sig.body.ops)
    for (const auto& p : profs) {
      if (sig.is_rigid_op(name, p))
        fill_site(m.rigid, 0, name, p);
      else
        for (std::size_t w = 0; w < m.worlds.size(); ++w) fill_site(m.local[w], w, name, p);
    }
  for (const auto& [name, profs] : sig.body.rels)
    for (const auto& p : profs) {
      auto key = std::make_pair(name, p);
      if (sig.is_rigid_rel(name, p))
        m.rigid.rels.try_emplace(key, std::set<std::vector<std::size_t>>{});
      else
        for (auto& loc : m.local) loc.rels.try_emplace(key, std::set<std::vector<std::size_t>>{});
    }
}

}  // namespace

std::optional<KripkeStructure> bounded_sat(const HDSignature& sig,
                                           const std::vector<Sentence>& theory,
                                           const SatBudget& budget) {
  budget.check();
  {
    auto rep = validate(sig);
    if (!rep.ok()) throw InputError("invalid signature: " + rep.joined());
  }
  for (const auto& g : theory) check_sentence(sig, g);

  // Occurrence analysis: only symbols the theory mentions are enumerated.
  std::set<std::string> used;
  std::set<SymName> used_sorts;
  std::vector<ReadSpec> reads;
  for (const auto& g : theory) {
    collect_names(g, used);
    ReadSpec rs;
    scan_sentence(sig, g, rs);
    for (const auto& s : rs.var_sorts) used_sorts.insert(s);
    reads.push_back(std::move(rs));
  }

  std::vector<std::string> noms_used, mods_used;
  for (const auto& k : sig.nominals())
    if (used.count(k)) noms_used.push_back(k);
  for (const auto& md : sig.modalities())
    if (used.count(md)) mods_used.push_back(md);

  std::vector<std::tuple<SymName, OpProfile, bool>> ops_used;  // name, profile, rigid
  std::vector<std::tuple<SymName, RelProfile, bool>> rels_used;
  for (const auto& [name, profs] : sig.body.ops)
    if (used.count(name.base))
      for (const auto& p : profs) {
        ops_used.emplace_back(name, p, sig.is_rigid_op(name, p));
        for (const auto& s : p.arity) used_sorts.insert(s);
        used_sorts.insert(p.result);
      }
  for (const auto& [name, profs] : sig.body.rels)
    if (used.count(name.base))
      for (const auto& p : profs) {
        rels_used.emplace_back(name, p, sig.is_rigid_rel(name, p));
        for (const auto& s : p.arity) used_sorts.insert(s);
      }

  std::vector<SymName> rigid_sorts_used, flex_sorts_used;
  for (const auto& s : used_sorts) {
    if (sig.is_rigid_sort(s))
      rigid_sorts_used.push_back(s);
    else if (sig.is_flexible_sort(s))
      flex_sorts_used.push_back(s);
    else
      throw InputError("quantified sort '" + to_string(s) + "' is not a body sort");
  }

  std::optional<KripkeStructure> result;

  for (std::size_t n = 1; n <= budget.max_worlds && !result; ++n) {
    KripkeStructure m;
    m.sig = sig;
    for (std::size_t i = 0; i < n; ++i) m.worlds.push_back("w" + std::to_string(i));
    m.local.assign(n, Interp{});

    // Slot sequence for this world count: carriers first (they parameterize
    // every table), then tables ordered cheapest-first by worst-case option
    // count so that expensive tables branch only under already-checked ones.
    std::vector<SlotD> slots;
    for (const auto& srt : rigid_sorts_used) {
      SlotD s;
      s.kind = SlotD::car;
      s.sym = srt;
      s.rig = true;
      slots.push_back(std::move(s));
    }
    for (std::size_t w = 0; w < n; ++w)
      for (const auto& srt : flex_sorts_used) {
        SlotD s;
        s.kind = SlotD::car;
        s.sym = srt;
        s.world = w;
        slots.push_back(std::move(s));
      }

    struct Tabled {
      std::size_t worst;
      int rank;
      std::string name;
      std::size_t pidx, world;
      SlotD s;
    };
    std::vector<Tabled> tables;
    const std::size_t maxc = budget.max_carrier;
    for (const auto& md : mods_used) {
      Tabled t;
      t.worst = sat_pow(2, n * n);
      t.rank = 0;
      t.name = md;
      t.pidx = t.world = 0;
      t.s.kind = SlotD::mod;
      t.s.mod_name = md;
      tables.push_back(std::move(t));
    }
    for (std::size_t pi = 0; pi < ops_used.size(); ++pi) {
      const auto& [name, p, rig] = ops_used[pi];
      std::size_t worst = sat_pow(maxc, sat_pow(maxc, p.arity.size()));
      for (std::size_t w = 0; w < (rig ? 1 : n); ++w) {
        Tabled t;
        t.worst = worst;
        t.rank = rig ? 1 : 3;
        t.name = to_string(name);
        t.pidx = pi;
        t.world = w;
        t.s.kind = SlotD::op;
        t.s.sym = name;
        t.s.opp = p;
        t.s.rig = rig;
        t.s.world = w;
        tables.push_back(std::move(t));
      }
    }
    for (std::size_t pi = 0; pi < rels_used.size(); ++pi) {
      const auto& [name, p, rig] = rels_used[pi];
      std::size_t worst = sat_pow(2, sat_pow(maxc, p.arity.size()));
      for (std::size_t w = 0; w < (rig ? 1 : n); ++w) {
        Tabled t;
        t.worst = worst;
        t.rank = rig ? 2 : 4;
        t.name = to_string(name);
        t.pidx = pi;
        t.world = w;
        t.s.kind = SlotD::rel;
        t.s.sym = name;
        t.s.rlp = p;
        t.s.rig = rig;
        t.s.world = w;
        tables.push_back(std::move(t));
      }
    }
    std::stable_sort(tables.begin(), tables.end(), [](const Tabled& a, const Tabled& b) {
      return std::tie(a.worst, a.rank, a.name, a.pidx, a.world) <
             std::tie(b.worst, b.rank, b.name, b.pidx, b.world);
    });
    for (auto& t : tables) slots.push_back(std::move(t.s));

    // Attachment maps: for each readable resource, the last slot that fixes it.
    std::map<std::string, std::size_t> mod_slot;
    std::map<SymName, std::size_t> rcar_slot;
    std::map<SymName, std::vector<std::size_t>> fcar_slot;
    std::map<std::string, std::size_t> rop_slot, rrel_slot;
    std::map<std::string, std::vector<std::size_t>> fop_slot, frel_slot;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      const SlotD& s = slots[i];
      switch (s.kind) {
        case SlotD::mod:
          mod_slot[s.mod_name] = i;
          break;
        case SlotD::car:
          if (s.rig) {
            rcar_slot[s.sym] = i;
          } else {
            auto& v = fcar_slot.try_emplace(s.sym, std::vector<std::size_t>(n, 0)).first->second;
            v[s.world] = i;
          }
          break;
        case SlotD::op:
          if (s.rig) {
            auto [it, fresh] = rop_slot.try_emplace(s.sym.base, i);
            if (!fresh) it->second = std::max(it->second, i);
          } else {
            auto& v =
                fop_slot.try_emplace(s.sym.base, std::vector<std::size_t>(n, 0)).first->second;
            v[s.world] = std::max(v[s.world], i);
          }
          break;
        case SlotD::rel:
          if (s.rig) {
            auto [it, fresh] = rrel_slot.try_emplace(s.sym.base, i);
            if (!fresh) it->second = std::max(it->second, i);
          } else {
            auto& v =
                frel_slot.try_emplace(s.sym.base, std::vector<std::size_t>(n, 0)).first->second;
            v[s.world] = std::max(v[s.world], i);
          }
          break;
      }
    }

    for (const auto& nv : all_tuples(std::vector<std::size_t>(noms_used.size(), n))) {
      m.nominals.clear();
      for (std::size_t i = 0; i < noms_used.size(); ++i) m.nominals[noms_used[i]] = nv[i];

      // Checks that read nothing beyond worlds and nominals run right away.
      bool nom_ok = true;
      for (std::size_t i = 0; i < theory.size() && nom_ok; ++i)
        if (reads[i].trivial()) nom_ok = sat_global(m, theory[i]);
      if (!nom_ok) continue;

      // Attach every remaining check to the last slot it reads. Pins resolve
      // through the current nominal assignment, so this is per-assignment.
      for (auto& s : slots) s.checks.clear();
      for (std::size_t i = 0; i < theory.size(); ++i) {
        const ReadSpec& rs = reads[i];
        if (rs.trivial()) continue;
        std::size_t anchor = 0;
        auto upd = [&](std::size_t idx) { anchor = std::max(anchor, idx); };
        for (const auto& md : rs.mods) upd(mod_slot.at(md));
        for (const auto& s : rs.var_sorts) {
          if (sig.is_rigid_sort(s))
            upd(rcar_slot.at(s));
          else
            for (std::size_t idx : fcar_slot.at(s)) upd(idx);
        }
        for (const auto& b : rs.rigid_ops) upd(rop_slot.at(b));
        for (const auto& b : rs.rigid_rels) upd(rrel_slot.at(b));
        for (const auto& [b, pins] : rs.flex_op_pins)
          for (const auto& k : pins) upd(fop_slot.at(b)[m.nominals.at(k)]);
        for (const auto& [b, pins] : rs.flex_rel_pins)
          for (const auto& k : pins) upd(frel_slot.at(b)[m.nominals.at(k)]);
        for (const auto& b : rs.flex_op_all)
          for (std::size_t idx : fop_slot.at(b)) upd(idx);
        for (const auto& b : rs.flex_rel_all)
          for (std::size_t idx : frel_slot.at(b)) upd(idx);
        slots[anchor].checks.push_back(i);
      }

      auto option_count = [&](const SlotD& s) -> std::size_t {
        switch (s.kind) {
          case SlotD::mod:
            return checked_pow(2, n * n, "modality '" + s.mod_name + "'");
          case SlotD::car:
            return budget.max_carrier;
          case SlotD::op: {
            std::size_t tuples = 1;
            for (const auto& srt : s.opp.arity) {
              tuples *= m.carrier_size(s.world, srt);
              if (tuples > kTableCap)
                throw InputError("bounded search: enumeration space for op '" + to_string(s.sym) +
                                 "' exceeds the internal cap; shrink the budget");
            }
            std::size_t c = m.carrier_size(s.world, s.opp.result);
            return checked_pow(c, tuples, "op '" + to_string(s.sym) + "'");
          }
          case SlotD::rel: {
            std::size_t tuples = 1;
            for (const auto& srt : s.rlp.arity) tuples *= m.carrier_size(s.world, srt);
            return checked_pow(2, tuples, "relation '" + to_string(s.sym) + "'");
          }
        }
        return 0;
      };

      auto install = [&](const SlotD& s, std::size_t o) {
        switch (s.kind) {
          case SlotD::mod: {
            std::set<std::pair<std::size_t, std::size_t>> edges;
            for (std::size_t i = 0; i < n; ++i)
              for (std::size_t j = 0; j < n; ++j)
                if (o >> (i * n + j) & 1) edges.insert({i, j});
            m.modalities[s.mod_name] = std::move(edges);
            break;
          }
          case SlotD::car: {
            std::vector<std::string> names;
            for (std::size_t i = 0; i <= o; ++i) names.push_back(s.sym.base + std::to_string(i));
            (s.rig ? m.rigid : m.local[s.world]).carriers[s.sym] = std::move(names);
            break;
          }
          case SlotD::op: {
            std::vector<std::size_t> limits;
            for (const auto& srt : s.opp.arity) limits.push_back(m.carrier_size(s.world, srt));
            std::size_t c = m.carrier_size(s.world, s.opp.result);
            auto tuples = all_tuples(limits);
            std::map<std::vector<std::size_t>, std::size_t> tbl;
            std::size_t rest = o;
            for (std::size_t j = tuples.size(); j-- > 0;) {
              tbl[tuples[j]] = rest % c;
              rest /= c;
            }
            (s.rig ? m.rigid : m.local[s.world]).ops[{s.sym, s.opp}] = std::move(tbl);
            break;
          }
          case SlotD::rel: {
            std::vector<std::size_t> limits;
            for (const auto& srt : s.rlp.arity) limits.push_back(m.carrier_size(s.world, srt));
            auto tuples = all_tuples(limits);
            std::set<std::vector<std::size_t>> set;
            for (std::size_t j = 0; j < tuples.size(); ++j)
              if (o >> j & 1) set.insert(tuples[j]);
            (s.rig ? m.rigid : m.local[s.world]).rels[{s.sym, s.rlp}] = std::move(set);
            break;
          }
        }
      };

      std::function<bool(std::size_t)> dfs = [&](std::size_t si) -> bool {
        if (si == slots.size()) {
          KripkeStructure fin = m;
          fill_defaults(fin);
          auto rep = validate_model(fin);
          if (!rep.ok())
            throw InputError("internal: bounded search built an invalid structure: " +
                             rep.joined());
          if (!sat_theory(fin, theory)) return false;
          result = std::move(fin);
          return true;
        }
        const SlotD& s = slots[si];
        std::size_t count = option_count(s);
        for (std::size_t o = 0; o < count; ++o) {
          install(s, o);
          bool ok = true;
          for (std::size_t id : s.checks)
            if (!sat_global(m, theory[id])) {
              ok = false;
              break;
            }
          if (ok && dfs(si + 1)) return true;
        }
        return false;
      };

      if (dfs(0)) break;
    }
  }
  return result;
}

// ---- the semantic forcing property ---------------------------------------------------

SemanticForcingResult semantic_forcing(const HDSignature& sig_c,
                                       const std::vector<Sentence>& theory,
                                       const SatBudget& budget, const SentencePool& pool) {
  budget.check();
  if (!(pool.sig == sig_c)) throw InputError("pool signature differs from the forcing signature");
  for (const auto& g : theory) check_sentence(sig_c, g);
  std::size_t n = pool.items.size();
  if (n > kSubsetCap)
    throw InputError("pool too large for subset enumeration (" + std::to_string(n) + " > " +
                     std::to_string(kSubsetCap) + " items)");

  auto items_of = [&](std::uint32_t mask) {
    std::vector<Sentence> out;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) out.push_back(pool.items[i]);
    return out;
  };

  std::vector<std::uint32_t> sat_masks, unsat_masks;
  std::vector<KripkeStructure> witnesses;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    bool doomed = false;
    for (std::uint32_t u : unsat_masks)
      if ((mask & u) == u) {
        doomed = true;
        break;
      }
    if (doomed) continue;

    auto extra = items_of(mask);
    bool found = false;
    for (const auto& w : witnesses)
      if (sat_theory(w, extra)) {
        found = true;
        break;
      }
    if (!found) {
      std::vector<Sentence> t = theory;
      t.insert(t.end(), extra.begin(), extra.end());
      auto w = bounded_sat(sig_c, t, budget);
      if (w) {
        witnesses.push_back(std::move(*w));
        found = true;
      } else {
        unsat_masks.push_back(mask);
      }
    }
    if (found) sat_masks.push_back(mask);
  }

  if (sat_masks.empty() || sat_masks.front() != 0)
    throw InputError("the theory has no model within budget (worlds <= " +
                     std::to_string(budget.max_worlds) + ", carrier <= " +
                     std::to_string(budget.max_carrier) +
                     "): the semantic forcing property is empty");

  SemanticForcingResult out;
  ForcingProperty& prop = out.property;
  prop.sig = sig_c;
  prop.pool = pool;
  prop.budget = budget;
  prop.least = 0;

  for (std::uint32_t mask : sat_masks) {
    if (mask == 0) {
      prop.names.push_back("0");
    } else {
      std::string nm = "p";
      bool first = true;
      for (std::size_t i = 0; i < n; ++i)
        if (mask >> i & 1) {
          nm += (first ? "" : "_") + std::to_string(i);
          first = false;
        }
      prop.names.push_back(nm);
    }
    auto content = items_of(mask);
    std::vector<Sentence> basics;
    std::set<Sentence> canon;
    for (const auto& s : content)
      if (is_basic_sentence(s)) {
        basics.push_back(s);
        canonical_atoms(s, pool.index, canon);
      }
    prop.content.push_back(std::move(content));
    prop.label_src.push_back(std::move(basics));
    prop.label.push_back(std::move(canon));
  }
  for (std::size_t a = 0; a < sat_masks.size(); ++a)
    for (std::size_t b = 0; b < sat_masks.size(); ++b)
      if ((sat_masks[a] & sat_masks[b]) == sat_masks[a]) prop.order.insert({a, b});

  out.axioms = check_forcing_axioms(prop, bounded_entail_oracle(sig_c, budget));
  return out;
}

}  // namespace hdfol
