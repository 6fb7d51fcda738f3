#include "hdfol/kripke.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <numeric>

namespace hdfol {

namespace {

std::vector<SymName> pinned_arity(const HDSignature& sig, const std::vector<SymName>& arity,
                                  const std::string& at) {
  std::vector<SymName> out;
  out.reserve(arity.size());
  for (const auto& a : arity) out.push_back(at.empty() ? a : sig.pin_sort(a, at));
  return out;
}

// Declared profile of the op heading t, resolved against the argument sorts.
const OpProfile& resolve_op(const HDSignature& sig, const Term& t) {
  auto it = sig.body.ops.find(SymName(t.op().base));
  if (it == sig.body.ops.end()) throw InputError("unknown op '" + t.op().base + "'");
  std::vector<SymName> arg_sorts;
  for (const auto& a : t.args()) arg_sorts.push_back(sort_of(sig, a));
  for (const auto& p : it->second)
    if (p.arity.size() == arg_sorts.size() &&
        pinned_arity(sig, p.arity, t.op().at) == arg_sorts)
      return p;
  throw InputError("no profile of op '" + t.op().base + "' matches");
}

const RelProfile& resolve_rel(const HDSignature& sig, const SymName& r,
                              const std::vector<Term>& args) {
  auto it = sig.body.rels.find(SymName(r.base));
  if (it == sig.body.rels.end()) throw InputError("unknown relation '" + r.base + "'");
  std::vector<SymName> arg_sorts;
  for (const auto& a : args) arg_sorts.push_back(sort_of(sig, a));
  for (const auto& p : it->second)
    if (p.arity.size() == arg_sorts.size() && pinned_arity(sig, p.arity, r.at) == arg_sorts)
      return p;
  throw InputError("no profile of relation '" + r.base + "' matches");
}

// Iterate over all index tuples with the given limits; f returns void.
void for_each_tuple(const std::vector<std::size_t>& limits,
                    const std::function<void(const std::vector<std::size_t>&)>& f) {
  for (auto l : limits)
    if (l == 0) return;
  std::vector<std::size_t> idx(limits.size(), 0);
  while (true) {
    f(idx);
    std::size_t i = 0;
    for (; i < idx.size(); ++i) {
      if (++idx[i] < limits[i]) break;
      idx[i] = 0;
    }
    if (i == idx.size()) break;
  }
}

}  // namespace

std::size_t KripkeStructure::world_of(const std::string& nominal) const {
  auto it = nominals.find(nominal);
  if (it == nominals.end()) throw InputError("model interprets no nominal '" + nominal + "'");
  return it->second;
}

const std::vector<std::string>& KripkeStructure::carrier(std::size_t w, const SymName& sort) const {
  if (sort.pinned()) {
    std::size_t site = world_of(sort.at);
    return local[site].carriers.at(SymName(sort.base));
  }
  if (sig.is_rigid_sort(sort)) return rigid.carriers.at(sort);
  return local[w].carriers.at(sort);
}

std::size_t KripkeStructure::carrier_size(std::size_t w, const SymName& sort) const {
  return carrier(w, sort).size();
}

// ---- validation ----------------------------------------------------------------

ValidationReport validate_model(const KripkeStructure& m) {
  ValidationReport rep;
  if (m.worlds.empty()) rep.add("model has no worlds");
  if (m.local.size() != m.worlds.size())
    rep.add("per-world table count differs from world count");
  auto vr = validate(m.sig);
  for (auto& v : vr.violations) rep.add("signature: " + v);
  if (!rep.ok()) return rep;

  for (const auto& k : m.sig.nominals()) {
    auto it = m.nominals.find(k);
    if (it == m.nominals.end())
      rep.add("nominal '" + k + "' has no denotation");
    else if (it->second >= m.worlds.size())
      rep.add("nominal '" + k + "' denotes an invalid world");
  }
  for (const auto& [k, w] : m.nominals)
    if (!m.sig.is_nominal(k)) rep.add("denotation for undeclared nominal '" + k + "'");
  for (const auto& lam : m.sig.modalities())
    if (!m.modalities.count(lam)) rep.add("modality '" + lam + "' has no denotation");
  for (const auto& [lam, edges] : m.modalities) {
    if (!m.sig.is_modality(lam)) rep.add("denotation for undeclared modality '" + lam + "'");
    for (auto [a, b] : edges)
      if (a >= m.worlds.size() || b >= m.worlds.size())
        rep.add("modality '" + lam + "' has an out-of-range edge");
  }

  auto check_site = [&](const Interp& site, const FOSignature& expect_sorts_from,
                        bool rigid_site, const std::string& where) {
    // carriers: exactly the expected sorts, non-empty
    for (const auto& s : expect_sorts_from.sorts) {
      bool is_rigid = m.sig.is_rigid_sort(s);
      if (is_rigid != rigid_site) continue;
      auto it = site.carriers.find(s);
      if (it == site.carriers.end() || it->second.empty())
        rep.add(where + ": sort '" + s.base + "' has no (non-empty) carrier");
    }
    for (const auto& [s, c] : site.carriers) {
      bool declared = expect_sorts_from.sorts.count(s) && (m.sig.is_rigid_sort(s) == rigid_site);
      if (!declared) rep.add(where + ": carrier for unexpected sort '" + s.base + "'");
      (void)c;
    }
  };
  check_site(m.rigid, m.sig.body, true, "shared part");
  for (std::size_t w = 0; w < m.local.size(); ++w)
    check_site(m.local[w], m.sig.body, false, "world " + m.worlds[w]);
  if (!rep.ok()) return rep;

  // tables: right symbols, total, in range
  auto carrier_at = [&](std::size_t w, const SymName& s) -> const std::vector<std::string>& {
    return m.sig.is_rigid_sort(s) ? m.rigid.carriers.at(s) : m.local[w].carriers.at(s);
  };
  for (const auto& [name, profs] : m.sig.body.ops)
    for (const auto& p : profs) {
      bool rigid_sym = m.sig.is_rigid_op(name, p);
      std::size_t sites = rigid_sym ? 1 : m.worlds.size();
      for (std::size_t i = 0; i < sites; ++i) {
        std::size_t w = rigid_sym ? 0 : i;
        const Interp& site = rigid_sym ? m.rigid : m.local[i];
        const std::string where =
            (rigid_sym ? std::string("shared part") : "world " + m.worlds[i]) + ", op '" +
            name.base + "'";
        auto it = site.ops.find({name, p});
        if (it == site.ops.end()) {
          rep.add(where + ": no table");
          continue;
        }
        std::vector<std::size_t> limits;
        for (const auto& a : p.arity) limits.push_back(carrier_at(w, a).size());
        std::size_t expect = 1;
        for (auto l : limits) expect *= l;
        if (it->second.size() != expect) rep.add(where + ": table is not total");
        std::size_t res_size = carrier_at(w, p.result).size();
        for (const auto& [args, val] : it->second) {
          if (args.size() != p.arity.size()) rep.add(where + ": entry with wrong arity");
          for (std::size_t j = 0; j < args.size() && j < p.arity.size(); ++j)
            if (args[j] >= carrier_at(w, p.arity[j]).size())
              rep.add(where + ": argument out of range");
          if (val >= res_size) rep.add(where + ": value out of range");
        }
      }
    }
  for (const auto& [name, profs] : m.sig.body.rels)
    for (const auto& p : profs) {
      bool rigid_sym = m.sig.is_rigid_rel(name, p);
      std::size_t sites = rigid_sym ? 1 : m.worlds.size();
      for (std::size_t i = 0; i < sites; ++i) {
        std::size_t w = rigid_sym ? 0 : i;
        const Interp& site = rigid_sym ? m.rigid : m.local[i];
        auto it = site.rels.find({name, p});
        const std::string where =
            (rigid_sym ? std::string("shared part") : "world " + m.worlds[i]) + ", relation '" +
            name.base + "'";
        if (it == site.rels.end()) {
          rep.add(where + ": no table");
          continue;
        }
        for (const auto& tup : it->second) {
          if (tup.size() != p.arity.size()) rep.add(where + ": tuple with wrong arity");
          for (std::size_t j = 0; j < tup.size() && j < p.arity.size(); ++j)
            if (tup[j] >= carrier_at(w, p.arity[j]).size())
              rep.add(where + ": tuple element out of range");
        }
      }
    }
  // no stray tables
  auto stray = [&](const Interp& site, bool rigid_site, const std::string& where) {
    for (const auto& [key, tbl] : site.ops) {
      (void)tbl;
      if (!m.sig.body.has_op(key.first, key.second) ||
          m.sig.is_rigid_op(key.first, key.second) != rigid_site)
        rep.add(where + ": table for unexpected op '" + key.first.base + "'");
    }
    for (const auto& [key, tbl] : site.rels) {
      (void)tbl;
      if (!m.sig.body.has_rel(key.first, key.second) ||
          m.sig.is_rigid_rel(key.first, key.second) != rigid_site)
        rep.add(where + ": table for unexpected relation '" + key.first.base + "'");
    }
  };
  stray(m.rigid, true, "shared part");
  for (std::size_t w = 0; w < m.local.size(); ++w) stray(m.local[w], false, "world " + m.worlds[w]);
  return rep;
}

// ---- evaluation ------------------------------------------------------------------

std::size_t eval_term(const KripkeStructure& m, std::size_t w, const Term& t) {
  const SymName& op = t.op();
  const OpProfile& p = resolve_op(m.sig, t);
  std::vector<std::size_t> args;
  args.reserve(t.args().size());
  for (const auto& a : t.args()) args.push_back(eval_term(m, w, a));
  const Interp* site;
  if (op.pinned())
    site = &m.local[m.world_of(op.at)];
  else if (m.sig.is_rigid_op(SymName(op.base), p))
    site = &m.rigid;
  else
    site = &m.local[w];
  auto it = site->ops.find({SymName(op.base), p});
  if (it == site->ops.end()) throw InputError("model has no table for op '" + op.base + "'");
  auto jt = it->second.find(args);
  if (jt == it->second.end()) throw InputError("op table for '" + op.base + "' is not total");
  return jt->second;
}

std::set<std::pair<std::size_t, std::size_t>> eval_action(const KripkeStructure& m,
                                                          const Action& a) {
  using Rel = std::set<std::pair<std::size_t, std::size_t>>;
  switch (a.kind()) {
    case Action::Kind::atom: {
      auto it = m.modalities.find(a.modality());
      if (it == m.modalities.end())
        throw InputError("model interprets no modality '" + a.modality() + "'");
      return it->second;
    }
    case Action::Kind::seq: {
      Rel l = eval_action(m, a.left()), r = eval_action(m, a.right()), out;
      for (auto [x, y] : l)
        for (auto [y2, z] : r)
          if (y == y2) out.insert({x, z});
      return out;
    }
    case Action::Kind::alt: {
      Rel out = eval_action(m, a.left());
      Rel r = eval_action(m, a.right());
      out.insert(r.begin(), r.end());
      return out;
    }
    case Action::Kind::star: {
      std::size_t n = m.worlds.size();
      std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
      for (std::size_t i = 0; i < n; ++i) reach[i][i] = true;
      for (auto [x, y] : eval_action(m, a.left())) reach[x][y] = true;
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
          if (reach[i][k])
            for (std::size_t j = 0; j < n; ++j)
              if (reach[k][j]) reach[i][j] = true;
      Rel out;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (reach[i][j]) out.insert({i, j});
      return out;
    }
  }
  throw InputError("null action");
}

// ---- satisfaction -----------------------------------------------------------------

bool sat_local(const KripkeStructure& m, std::size_t w, const Sentence& g) {
  switch (g.kind()) {
    case SenKind::nominal:
      return m.world_of(g.label()) == w;
    case SenKind::eq:
      return eval_term(m, w, g.lhs()) == eval_term(m, w, g.rhs());
    case SenKind::rel: {
      const SymName& r = g.rel_name();
      const RelProfile& p = resolve_rel(m.sig, r, g.args());
      std::vector<std::size_t> tup;
      for (const auto& a : g.args()) tup.push_back(eval_term(m, w, a));
      const Interp* site;
      if (r.pinned())
        site = &m.local[m.world_of(r.at)];
      else if (m.sig.is_rigid_rel(SymName(r.base), p))
        site = &m.rigid;
      else
        site = &m.local[w];
      auto it = site->rels.find({SymName(r.base), p});
      if (it == site->rels.end())
        throw InputError("model has no table for relation '" + r.base + "'");
      return it->second.count(tup) != 0;
    }
    case SenKind::at:
      return sat_local(m, m.world_of(g.label()), g.sub());
    case SenKind::neg:
      return !sat_local(m, w, g.sub());
    case SenKind::disj:
      for (const auto& d : g.subs())
        if (sat_local(m, w, d)) return true;
      return false;
    case SenKind::store:
      return sat_local(expand_nominal(m, g.label(), w), w, g.sub());
    case SenKind::exists:
      for (const auto& e : expansions(m, g.vars()))
        if (sat_local(e, w, g.sub())) return true;
      return false;
    case SenKind::dia: {
      auto rel = eval_action(m, g.action());
      for (auto [x, y] : rel)
        if (x == w && sat_local(m, y, g.sub())) return true;
      return false;
    }
  }
  throw InputError("null sentence");
}

bool sat_global(const KripkeStructure& m, const Sentence& g) {
  for (std::size_t w = 0; w < m.worlds.size(); ++w)
    if (!sat_local(m, w, g)) return false;
  return true;
}

bool sat_theory(const KripkeStructure& m, const std::vector<Sentence>& ts) {
  for (const auto& g : ts)
    if (!sat_global(m, g)) return false;
  return true;
}

// ---- expansions --------------------------------------------------------------------

KripkeStructure expand_nominal(const KripkeStructure& m, const std::string& name, std::size_t w) {
  KripkeStructure out = m;
  out.sig = extend(m.sig, {{name, SymName(kAny)}});
  out.nominals[name] = w;
  return out;
}

KripkeStructure expand_rigid(const KripkeStructure& m, const std::string& name,
                             const SymName& sort, std::size_t elem) {
  KripkeStructure out = m;
  out.sig = extend(m.sig, {{name, sort}});
  out.rigid.ops[{SymName(name), OpProfile{{}, sort}}][{}] = elem;
  return out;
}

std::vector<KripkeStructure> expansions(const KripkeStructure& m,
                                        const std::vector<VarDecl>& vars) {
  std::vector<std::size_t> limits;
  for (const auto& v : vars) {
    if (v.sort == SymName(kAny))
      limits.push_back(m.worlds.size());
    else if (m.sig.is_rigid_sort(v.sort))
      limits.push_back(m.rigid.carriers.at(v.sort).size());
    else
      throw InputError("variable '" + v.name + "' has non-rigid sort");
  }
  std::vector<KripkeStructure> out;
  for_each_tuple(limits, [&](const std::vector<std::size_t>& idx) {
    KripkeStructure e = m;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (vars[i].sort == SymName(kAny)) {
        e.sig = extend(e.sig, {{vars[i].name, SymName(kAny)}});
        e.nominals[vars[i].name] = idx[i];
      } else {
        e.sig = extend(e.sig, {{vars[i].name, vars[i].sort}});
        e.rigid.ops[{SymName(vars[i].name), OpProfile{{}, vars[i].sort}}][{}] = idx[i];
      }
    }
    out.push_back(std::move(e));
  });
  return out;
}

// ---- reducts -------------------------------------------------------------------------

KripkeStructure reduct(const KripkeStructure& m, const SignatureMorphism& chi) {
  KripkeStructure out;
  out.sig = chi.source;
  out.worlds = m.worlds;
  for (const auto& k : chi.source.nominals()) out.nominals[k] = m.world_of(chi.map_nominal(k));
  for (const auto& lam : chi.source.modalities())
    out.modalities[lam] = m.modalities.at(chi.map_modality(lam));
  out.local.resize(m.worlds.size());

  auto carrier_at = [&](std::size_t w, const SymName& s) -> const std::vector<std::string>& {
    return m.sig.is_rigid_sort(s) ? m.rigid.carriers.at(s) : m.local[w].carriers.at(s);
  };
  for (const auto& s : chi.source.body.sorts) {
    SymName s2 = chi.map_sort(s);
    if (chi.source.is_rigid_sort(s)) {
      out.rigid.carriers[s] = m.rigid.carriers.at(s2);  // rigid maps to rigid
    } else {
      for (std::size_t w = 0; w < m.worlds.size(); ++w)
        out.local[w].carriers[s] = carrier_at(w, s2);
    }
  }
  for (const auto& [name, profs] : chi.source.body.ops)
    for (const auto& p : profs) {
      SymName name2 = chi.map_op(name, p);
      OpProfile p2 = chi.map_profile(p);
      bool src_rigid = chi.source.is_rigid_op(name, p);
      bool dst_rigid = chi.target.is_rigid_op(name2, p2);
      if (src_rigid) {
        out.rigid.ops[{name, p}] = m.rigid.ops.at({name2, p2});
      } else {
        for (std::size_t w = 0; w < m.worlds.size(); ++w)
          out.local[w].ops[{name, p}] =
              dst_rigid ? m.rigid.ops.at({name2, p2}) : m.local[w].ops.at({name2, p2});
      }
    }
  for (const auto& [name, profs] : chi.source.body.rels)
    for (const auto& p : profs) {
      SymName name2 = chi.map_rel(name, p);
      RelProfile p2 = chi.map_rel_profile(p);
      bool src_rigid = chi.source.is_rigid_rel(name, p);
      bool dst_rigid = chi.target.is_rigid_rel(name2, p2);
      if (src_rigid) {
        out.rigid.rels[{name, p}] = m.rigid.rels.at({name2, p2});
      } else {
        for (std::size_t w = 0; w < m.worlds.size(); ++w)
          out.local[w].rels[{name, p}] =
              dst_rigid ? m.rigid.rels.at({name2, p2}) : m.local[w].rels.at({name2, p2});
      }
    }
  return out;
}

KripkeStructure reduct_subst(const KripkeStructure& m, const HDSignature& sig_c1,
                             const Substitution& theta) {
  KripkeStructure out;
  out.sig = sig_c1;
  out.worlds = m.worlds;
  out.modalities = m.modalities;
  out.local = m.local;
  for (const auto& k : sig_c1.nominals()) {
    auto it = theta.nominal_map.find(k);
    if (it != theta.nominal_map.end())
      out.nominals[k] = m.world_of(it->second);
    else
      out.nominals[k] = m.world_of(k);
  }
  out.rigid.carriers = m.rigid.carriers;
  out.rigid.rels = m.rigid.rels;
  for (const auto& [name, profs] : sig_c1.body.ops)
    for (const auto& p : profs) {
      if (!sig_c1.is_rigid_op(name, p)) continue;
      auto it = theta.term_map.find(name.base);
      if (it != theta.term_map.end() && p.arity.empty()) {
        out.rigid.ops[{name, p}][{}] = eval_term(m, 0, it->second);
      } else {
        auto jt = m.rigid.ops.find({name, p});
        if (jt == m.rigid.ops.end())
          throw InputError("substitution leaves rigid op '" + name.base + "' without a value");
        out.rigid.ops[{name, p}] = jt->second;
      }
    }
  return out;
}

// ---- initial model ----------------------------------------------------------------------

namespace {

// Universe of ground rigid terms per sort, depth raised from `depth` until the
// listed sorts are all inhabited (possible iff the signature is non-void).
std::map<SymName, std::vector<Term>> universe_covering(const HDSignature& sig, int& depth,
                                                       const std::vector<SymName>& need) {
  int total_sorts = static_cast<int>(rigidify_signature(sig).at_sig.sorts.size());
  for (;; ++depth) {
    std::map<SymName, std::vector<Term>> uni = ground_rigid_universe(sig, depth);
    bool ok = true;
    for (const auto& s : need)
      if (uni[s].empty()) ok = false;
    if (ok) return uni;
    if (depth > total_sorts + 2)
      throw InputError("signature is void: some sort has no ground rigid term");
  }
}

}  // namespace

InitialModelResult initial_model(const HDSignature& sig, int depth) {
  if (!is_non_void(sig)) throw InputError("initial model requires a non-void signature");
  InitialModelResult res;
  KripkeStructure& m = res.model;
  m.sig = sig;
  for (const auto& k : sig.nominals()) {
    m.nominals[k] = m.worlds.size();
    m.worlds.push_back(k);
  }
  for (const auto& lam : sig.modalities()) m.modalities[lam] = {};
  m.local.resize(m.worlds.size());

  std::vector<SymName> need;
  for (const auto& s : sig.body.sorts) {
    if (sig.is_rigid_sort(s))
      need.push_back(s);
    else
      for (const auto& k : sig.nominals()) need.push_back(SymName(s.base, k));
  }
  res.depth_used = depth;
  auto uni = universe_covering(sig, res.depth_used, need);

  // carriers + index of each term
  std::map<SymName, std::map<Term, std::size_t>> index;
  auto install = [&](const SymName& sort, std::vector<std::string>& names) {
    const auto& ts = uni[sort];
    for (std::size_t i = 0; i < ts.size(); ++i) {
      index[sort][ts[i]] = i;
      names.push_back(print_term(ts[i]));
    }
  };
  for (const auto& s : sig.body.sorts) {
    if (sig.is_rigid_sort(s)) {
      install(s, m.rigid.carriers[s]);
    } else {
      for (const auto& k : sig.nominals())
        install(SymName(s.base, k), m.local[m.nominals.at(k)].carriers[s]);
    }
  }

  // op tables: apply the (possibly pinned) op to the carrier terms
  auto fill_op = [&](const SymName& pinned_name, const OpProfile& declared,
                     const std::string& at, Interp& site) {
    auto& table = site.ops[{SymName(pinned_name.base), declared}];
    std::vector<const std::vector<Term>*> pools;
    std::vector<SymName> psorts;
    for (const auto& a : declared.arity) {
      SymName pa = at.empty() ? a : sig.pin_sort(a, at);
      pools.push_back(&uni[pa]);
      psorts.push_back(pa);
    }
    SymName pres = at.empty() ? declared.result : sig.pin_sort(declared.result, at);
    std::vector<std::size_t> limits;
    for (auto* p : pools) limits.push_back(p->size());
    for_each_tuple(limits, [&](const std::vector<std::size_t>& idx) {
      std::vector<Term> args;
      for (std::size_t i = 0; i < idx.size(); ++i) args.push_back((*pools[i])[idx[i]]);
      Term t = Term::make(pinned_name, std::move(args));
      auto it = index[pres].find(t);
      std::vector<std::size_t> key(idx.begin(), idx.end());
      if (it != index[pres].end()) {
        table[key] = it->second;
      } else {
        table[key] = 0;  // depth bound cut this value off
        res.truncated = true;
      }
    });
  };
  for (const auto& [name, profs] : sig.body.ops)
    for (const auto& p : profs) {
      if (sig.is_rigid_op(name, p)) {
        fill_op(name, p, "", m.rigid);
      } else {
        for (const auto& k : sig.nominals())
          fill_op(SymName(name.base, k), p, k, m.local[m.nominals.at(k)]);
      }
    }
  // relations: all empty
  for (const auto& [name, profs] : sig.body.rels)
    for (const auto& p : profs) {
      if (sig.is_rigid_rel(name, p)) {
        m.rigid.rels[{name, p}] = {};
      } else {
        for (auto& site : m.local) site.rels[{name, p}] = {};
      }
    }
  return res;
}

// ---- basic model ------------------------------------------------------------------------

bool is_extended_atom(const Sentence& g) {
  switch (g.kind()) {
    case SenKind::nominal:
    case SenKind::eq:
    case SenKind::rel:
      return true;
    case SenKind::dia:
      return g.action().kind() == Action::Kind::atom && g.sub().kind() == SenKind::nominal;
    default:
      return false;
  }
}

bool is_basic_sentence(const Sentence& g) {
  if (g.kind() == SenKind::at) return is_extended_atom(g.sub());
  return is_extended_atom(g);
}

namespace {

// union-find over indices
struct UF {
  std::vector<std::size_t> parent;
  explicit UF(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);  // keep the smaller index as root: determinism
    parent[b] = a;
    return true;
  }
};

Term rename_pins(const Term& t, const std::map<std::string, std::string>& root) {
  std::vector<Term> args;
  for (const auto& a : t.args()) args.push_back(rename_pins(a, root));
  SymName op = t.op();
  if (op.pinned()) op.at = root.at(op.at);
  return Term::make(std::move(op), std::move(args));
}

void subterms(const Term& t, std::vector<Term>& out) {
  for (const auto& a : t.args()) subterms(a, out);
  out.push_back(t);
}

}  // namespace

BasicModelResult basic_model(const std::vector<Sentence>& b, const HDSignature& sig, int depth) {
  for (const auto& g : b) {
    if (!is_basic_sentence(g)) throw InputError("non-basic sentence: " + print_sentence(g));
    check_sentence(sig, g);
  }
  std::vector<std::string> noms = sig.nominals();
  if (noms.empty()) throw InputError("basic model requires at least one nominal");
  std::map<std::string, std::size_t> nom_idx;
  for (std::size_t i = 0; i < noms.size(); ++i) nom_idx[noms[i]] = i;

  // decompose: bare atoms are asserted at every nominal (the retrieve closure)
  std::vector<std::pair<std::string, Sentence>> items;
  for (const auto& g : b) {
    if (g.kind() == SenKind::at)
      items.push_back({g.label(), g.sub()});
    else
      for (const auto& k : noms) items.push_back({k, g});
  }

  // 1. world classes
  UF wuf(noms.size());
  for (const auto& [k, atom] : items)
    if (atom.kind() == SenKind::nominal) wuf.unite(nom_idx.at(k), nom_idx.at(atom.label()));

  BasicModelResult res;
  KripkeStructure& m = res.model;
  m.sig = sig;
  std::map<std::string, std::string> root;  // nominal -> root nominal
  std::map<std::string, std::size_t> root_world;
  for (std::size_t i = 0; i < noms.size(); ++i) {
    const std::string& r = noms[wuf.find(i)];
    root[noms[i]] = r;
    if (!root_world.count(r)) {
      root_world[r] = m.worlds.size();
      m.worlds.push_back(r);
    }
  }
  for (const auto& k : noms) {
    m.nominals[k] = root_world.at(root.at(k));
    res.world_class[k] = root.at(k);
  }
  m.local.resize(m.worlds.size());

  // 2. ground-term universe over root-pinned symbols
  HDSignature sigq = sig;
  sigq.nominal.ops.clear();
  for (const auto& [r, w] : root_world) {
    (void)w;
    sigq.nominal.add_op(SymName(r), OpProfile{{}, SymName(kAny)});
  }
  std::vector<SymName> need;
  for (const auto& s : sig.body.sorts) {
    if (sig.is_rigid_sort(s))
      need.push_back(s);
    else
      for (const auto& [r, w] : root_world) {
        (void)w;
        need.push_back(SymName(s.base, r));
      }
  }
  res.depth_used = depth;
  auto uni = universe_covering(sigq, res.depth_used, need);

  // rigidified, root-renamed assertions
  struct EqItem {
    Term lhs, rhs;
  };
  std::vector<EqItem> eqs;
  struct RelItem {
    SymName name;  // possibly root-pinned
    RelProfile declared;
    std::vector<Term> args;
  };
  std::vector<RelItem> rel_items;
  for (const auto& [k, atom] : items) {
    const std::string& r = root.at(k);
    switch (atom.kind()) {
      case SenKind::nominal:
        break;  // handled
      case SenKind::dia: {
        const std::string& k2 = root.at(atom.sub().label());
        m.modalities[atom.action().modality()].insert(
            {root_world.at(r), root_world.at(root.at(k2))});
        break;
      }
      case SenKind::eq:
        eqs.push_back({rename_pins(rigidify(sig, atom.lhs(), k), root),
                       rename_pins(rigidify(sig, atom.rhs(), k), root)});
        break;
      case SenKind::rel: {
        RelItem it;
        const SymName& rn = atom.rel_name();
        const RelProfile& declared = resolve_rel(sig, rn, atom.args());
        it.declared = declared;
        if (rn.pinned())
          it.name = SymName(rn.base, root.at(rn.at));
        else if (sig.is_rigid_rel(SymName(rn.base), declared))
          it.name = SymName(rn.base);
        else
          it.name = SymName(rn.base, r);
        for (const auto& a : atom.args())
          it.args.push_back(rename_pins(rigidify(sig, a, k), root));
        rel_items.push_back(std::move(it));
        break;
      }
      default:
        throw InputError("non-atomic sentence under retrieve in a basic set");
    }
  }
  for (const auto& lam : sig.modalities()) m.modalities.try_emplace(lam);

  // 3. congruence closure over the universe plus asserted terms
  std::map<Term, std::pair<SymName, std::size_t>> id_of;  // term -> (sort, id)
  std::vector<Term> terms_by_id;
  std::vector<SymName> sort_by_id;
  auto add_term = [&](const Term& t, const SymName& srt) {
    if (id_of.count(t)) return;
    id_of[t] = {srt, terms_by_id.size()};
    terms_by_id.push_back(t);
    sort_by_id.push_back(srt);
  };
  for (const auto& [srt, ts] : uni)
    for (const auto& t : ts) add_term(t, srt);
  RigidifiedSignature rsq = rigidify_signature(sigq);
  // sort of a ground at-signature term
  std::function<SymName(const Term&)> sort_in_at = [&](const Term& u) -> SymName {
    auto kt = rsq.at_sig.ops.find(u.op());
    if (kt == rsq.at_sig.ops.end()) throw InputError("term outside the rigid universe");
    std::vector<SymName> as;
    for (const auto& ua : u.args()) as.push_back(sort_in_at(ua));
    for (const auto& p : kt->second)
      if (p.arity == as) return p.result;
    throw InputError("term outside the rigid universe");
  };
  auto add_with_subterms = [&](const Term& t) {
    std::vector<Term> subs;
    subterms(t, subs);
    for (const auto& s : subs) add_term(s, sort_in_at(s));
  };
  for (const auto& e : eqs) {
    add_with_subterms(e.lhs);
    add_with_subterms(e.rhs);
  }
  for (const auto& ri : rel_items)
    for (const auto& a : ri.args) add_with_subterms(a);

  UF cc(terms_by_id.size());
  for (const auto& e : eqs) cc.unite(id_of.at(e.lhs).second, id_of.at(e.rhs).second);
  // congruence: iterate to fixpoint (desk-scale universes)
  bool changed = true;
  while (changed) {
    changed = false;
    // group terms by (op, arity size); compare argument classes
    std::map<std::pair<SymName, std::size_t>, std::vector<std::size_t>> by_op;
    for (std::size_t i = 0; i < terms_by_id.size(); ++i)
      by_op[{terms_by_id[i].op(), terms_by_id[i].args().size()}].push_back(i);
    for (const auto& [key, ids] : by_op) {
      if (key.second == 0) continue;
      for (std::size_t x = 0; x < ids.size(); ++x)
        for (std::size_t y = x + 1; y < ids.size(); ++y) {
          std::size_t a = ids[x], bq = ids[y];
          if (cc.find(a) == cc.find(bq)) continue;
          const auto& ta = terms_by_id[a].args();
          const auto& tb = terms_by_id[bq].args();
          bool same = true;
          for (std::size_t j = 0; j < ta.size() && same; ++j)
            same = cc.find(id_of.at(ta[j]).second) == cc.find(id_of.at(tb[j]).second);
          if (same) changed |= cc.unite(a, bq);
        }
    }
  }

  // 4. carriers: classes per pinned sort, ordered by least representative term
  std::map<SymName, std::vector<std::size_t>> class_reps;      // sort -> rep ids
  std::map<std::size_t, std::size_t> elem_of_class;            // rep id -> element index
  std::map<std::size_t, Term> least_term;  // class root -> least member term
  for (std::size_t i = 0; i < terms_by_id.size(); ++i) {
    std::size_t r = cc.find(i);
    auto it = least_term.find(r);
    if (it == least_term.end() || compare(terms_by_id[i], it->second) < 0)
      least_term[r] = terms_by_id[i];
  }
  // Classes are installed in universe discovery order (so an assertion-free B
  // reproduces the initial model verbatim); classes living only in asserted
  // terms beyond the depth bound follow, ordered by least member.
  auto install_sort = [&](const SymName& psort, std::vector<std::string>& names) {
    std::vector<std::size_t> roots;
    std::set<std::size_t> seen;
    auto push_root = [&](std::size_t id, const Term& display) {
      std::size_t r = cc.find(id);
      if (!seen.insert(r).second) return;
      elem_of_class[r] = roots.size();
      names.push_back(print_term(display));
      roots.push_back(r);
    };
    auto uit = uni.find(psort);
    if (uit != uni.end())
      for (const auto& t : uit->second) push_root(id_of.at(t).second, t);
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < terms_by_id.size(); ++i)
      if (sort_by_id[i] == psort && cc.find(i) == i && !seen.count(i)) rest.push_back(i);
    std::sort(rest.begin(), rest.end(), [&](std::size_t a, std::size_t c) {
      return compare(least_term.at(a), least_term.at(c)) < 0;
    });
    for (auto r : rest) push_root(r, least_term.at(r));
    class_reps[psort] = std::move(roots);
  };
  for (const auto& s : sig.body.sorts) {
    if (sig.is_rigid_sort(s)) {
      install_sort(s, m.rigid.carriers[s]);
    } else {
      for (const auto& [r, w] : root_world) install_sort(SymName(s.base, r), m.local[w].carriers[s]);
    }
  }

  // class of an arbitrary ground at-term, if representable in the universe
  auto class_of = [&](const Term& t) -> std::optional<std::size_t> {
    auto it = id_of.find(t);
    if (it != id_of.end()) return cc.find(it->second.second);
    // try congruence: same op, argument classes match some existing term
    for (std::size_t i = 0; i < terms_by_id.size(); ++i) {
      if (!(terms_by_id[i].op() == t.op()) ||
          terms_by_id[i].args().size() != t.args().size())
        continue;
      bool same = true;
      for (std::size_t j = 0; j < t.args().size() && same; ++j) {
        auto jt = id_of.find(t.args()[j]);
        if (jt == id_of.end()) return std::nullopt;
        same = cc.find(jt->second.second) ==
               cc.find(id_of.at(terms_by_id[i].args()[j]).second);
      }
      if (same) return cc.find(i);
    }
    return std::nullopt;
  };

  // 5. op tables over class representatives
  auto fill_op = [&](const SymName& pinned_name, const OpProfile& declared, const std::string& at,
                     Interp& site) {
    auto& table = site.ops[{SymName(pinned_name.base), declared}];
    std::vector<const std::vector<std::size_t>*> pools;
    for (const auto& a : declared.arity) {
      SymName pa = at.empty() ? a : sigq.pin_sort(a, at);
      pools.push_back(&class_reps.at(pa));
    }
    std::vector<std::size_t> limits;
    for (auto* p : pools) limits.push_back(p->size());
    for_each_tuple(limits, [&](const std::vector<std::size_t>& idx) {
      std::vector<Term> args;
      for (std::size_t i = 0; i < idx.size(); ++i)
        args.push_back(least_term.at((*pools[i])[idx[i]]));
      Term t = Term::make(pinned_name, std::move(args));
      std::vector<std::size_t> key(idx.begin(), idx.end());
      auto cls = class_of(t);
      if (cls) {
        table[key] = elem_of_class.at(*cls);
      } else {
        table[key] = 0;  // depth bound cut this value off
        res.truncated = true;
      }
    });
  };
  for (const auto& [name, profs] : sig.body.ops)
    for (const auto& p : profs) {
      if (sig.is_rigid_op(name, p)) {
        fill_op(name, p, "", m.rigid);
      } else {
        for (const auto& [r, w] : root_world) fill_op(SymName(name.base, r), p, r, m.local[w]);
      }
    }

  // 6. relations: asserted tuples, stored as classes
  for (const auto& [name, profs] : sig.body.rels)
    for (const auto& p : profs) {
      if (sig.is_rigid_rel(name, p)) {
        m.rigid.rels.try_emplace({name, p});
      } else {
        for (auto& site : m.local) site.rels.try_emplace({name, p});
      }
    }
  for (const auto& ri : rel_items) {
    std::vector<std::size_t> tup;
    bool ok = true;
    for (const auto& a : ri.args) {
      auto cls = class_of(a);
      if (!cls) {
        ok = false;
        res.truncated = true;
        break;
      }
      tup.push_back(elem_of_class.at(*cls));
    }
    if (!ok) continue;
    SymName base(ri.name.base);
    if (ri.name.pinned()) {
      m.local[root_world.at(ri.name.at)].rels[{base, ri.declared}].insert(tup);
    } else {
      m.rigid.rels[{base, ri.declared}].insert(tup);
    }
  }
  return res;
}

// ---- homomorphisms -------------------------------------------------------------------------

namespace {

struct HomSearch {
  const KripkeStructure& src;
  const KripkeStructure& dst;
  KripkeHom h;
  // assignment progress markers: SIZE_MAX = unassigned
  static constexpr std::size_t none = static_cast<std::size_t>(-1);

  bool world_ok(std::size_t w, std::size_t img) const {
    for (const auto& [k, sw] : src.nominals)
      if (sw == w && dst.nominals.at(k) != img) return false;
    // modalities checked once all worlds assigned (cheap at these sizes)
    return true;
  }

  bool frame_edges_ok() const {
    for (const auto& [lam, edges] : src.modalities) {
      const auto& dedges = dst.modalities.at(lam);
      for (auto [a, b] : edges)
        if (!dedges.count({h.world_map[a], h.world_map[b]})) return false;
    }
    return true;
  }

  const std::vector<std::size_t>* map_for(std::size_t w, const SymName& sort) const {
    if (src.sig.is_rigid_sort(sort)) return &h.rigid_map.at(sort);
    return &h.local_maps[w].at(sort);
  }

  // Check all op/rel constraints; maps are total by the time this runs.
  bool tables_ok() const {
    for (const auto& [name, profs] : src.sig.body.ops)
      for (const auto& p : profs) {
        bool rig = src.sig.is_rigid_op(name, p);
        std::size_t sites = rig ? 1 : src.worlds.size();
        for (std::size_t i = 0; i < sites; ++i) {
          const auto& table = rig ? src.rigid.ops.at({name, p}) : src.local[i].ops.at({name, p});
          std::size_t dw = rig ? 0 : h.world_map[i];
          const auto& dtable =
              rig ? dst.rigid.ops.at({name, p}) : dst.local[dw].ops.at({name, p});
          for (const auto& [args, val] : table) {
            std::vector<std::size_t> dargs;
            for (std::size_t j = 0; j < args.size(); ++j)
              dargs.push_back((*map_for(i, p.arity[j]))[args[j]]);
            if (dtable.at(dargs) != (*map_for(i, p.result))[val]) return false;
          }
        }
      }
    for (const auto& [name, profs] : src.sig.body.rels)
      for (const auto& p : profs) {
        bool rig = src.sig.is_rigid_rel(name, p);
        std::size_t sites = rig ? 1 : src.worlds.size();
        for (std::size_t i = 0; i < sites; ++i) {
          const auto& table = rig ? src.rigid.rels.at({name, p}) : src.local[i].rels.at({name, p});
          std::size_t dw = rig ? 0 : h.world_map[i];
          const auto& dtable =
              rig ? dst.rigid.rels.at({name, p}) : dst.local[dw].rels.at({name, p});
          for (const auto& tup : table) {
            std::vector<std::size_t> dtup;
            for (std::size_t j = 0; j < tup.size(); ++j)
              dtup.push_back((*map_for(i, p.arity[j]))[tup[j]]);
            if (!dtable.count(dtup)) return false;
          }
        }
      }
    return true;
  }

  // Assign element maps one sort at a time (rigid sorts first, then per world).
  bool assign_sorts(std::vector<std::pair<std::size_t, SymName>>::const_iterator it,
                    std::vector<std::pair<std::size_t, SymName>>::const_iterator end) {
    if (it == end) return tables_ok();
    auto [w, sort] = *it;
    bool rig = src.sig.is_rigid_sort(sort);
    std::size_t n = rig ? src.rigid.carriers.at(sort).size() : src.local[w].carriers.at(sort).size();
    std::size_t dn = rig ? dst.rigid.carriers.at(sort).size()
                         : dst.local[h.world_map[w]].carriers.at(sort).size();
    std::vector<std::size_t> map(n, 0);
    std::function<bool(std::size_t)> go = [&](std::size_t pos) -> bool {
      if (pos == n) {
        if (rig)
          h.rigid_map[sort] = map;
        else
          h.local_maps[w][sort] = map;
        if (assign_sorts(std::next(it), end)) return true;
        if (rig)
          h.rigid_map.erase(sort);
        else
          h.local_maps[w].erase(sort);
        return false;
      }
      for (std::size_t v = 0; v < dn; ++v) {
        map[pos] = v;
        if (go(pos + 1)) return true;
      }
      return false;
    };
    return go(0);
  }

  bool assign_worlds(std::size_t w) {
    if (w == src.worlds.size()) {
      if (!frame_edges_ok()) return false;
      std::vector<std::pair<std::size_t, SymName>> slots;
      for (const auto& s : src.sig.body.sorts)
        if (src.sig.is_rigid_sort(s)) slots.push_back({0, s});
      for (std::size_t i = 0; i < src.worlds.size(); ++i)
        for (const auto& s : src.sig.body.sorts)
          if (!src.sig.is_rigid_sort(s)) slots.push_back({i, s});
      h.local_maps.assign(src.worlds.size(), {});
      return assign_sorts(slots.begin(), slots.end());
    }
    for (std::size_t img = 0; img < dst.worlds.size(); ++img) {
      if (!world_ok(w, img)) continue;
      h.world_map[w] = img;
      if (assign_worlds(w + 1)) return true;
    }
    return false;
  }
};

}  // namespace

std::optional<KripkeHom> find_hom(const KripkeStructure& src, const KripkeStructure& dst) {
  if (!(src.sig == dst.sig)) throw InputError("homomorphism requires a shared signature");
  HomSearch s{src, dst, {}};
  s.h.world_map.assign(src.worlds.size(), HomSearch::none);
  if (s.assign_worlds(0)) return s.h;
  return std::nullopt;
}

bool is_surjective(const KripkeHom& h, const KripkeStructure& src, const KripkeStructure& dst) {
  std::set<std::size_t> hit(h.world_map.begin(), h.world_map.end());
  if (hit.size() != dst.worlds.size()) return false;
  for (const auto& [sort, map] : h.rigid_map) {
    std::set<std::size_t> v(map.begin(), map.end());
    if (v.size() != dst.rigid.carriers.at(sort).size()) return false;
  }
  // flexible sorts: surjective onto every dst world's carrier through some preimage world
  for (const auto& s : src.sig.body.sorts) {
    if (src.sig.is_rigid_sort(s)) continue;
    for (std::size_t dw = 0; dw < dst.worlds.size(); ++dw) {
      std::set<std::size_t> v;
      for (std::size_t w = 0; w < src.worlds.size(); ++w)
        if (h.world_map[w] == dw) {
          const auto& map = h.local_maps[w].at(s);
          v.insert(map.begin(), map.end());
        }
      if (v.size() != dst.local[dw].carriers.at(s).size()) return false;
    }
  }
  return true;
}

// ---- reachability ----------------------------------------------------------------------------

namespace {

struct Coverage {
  // (site, sort) -> covered element indices; site: SIZE_MAX = shared/rigid
  std::map<std::pair<std::size_t, SymName>, std::set<std::size_t>> covered;
  static constexpr std::size_t shared = static_cast<std::size_t>(-1);

  std::set<std::size_t>& at(std::size_t w, const HDSignature& sig, const SymName& sort) {
    return covered[{sig.is_rigid_sort(sort) ? shared : w, sort}];
  }
};

// Runs a coverage fixpoint; `apply_ops` performs one round (returns true on
// growth). Grades the result against the full carrier targets.
Tri coverage_fixpoint(int rounds, const std::function<bool()>& apply_ops,
                      const std::function<bool()>& all_covered) {
  for (int r = 0; r < rounds; ++r) {
    if (!apply_ops()) return all_covered() ? Tri::yes : Tri::no;  // stabilized
    if (all_covered()) return Tri::yes;
  }
  if (all_covered()) return Tri::yes;
  return Tri::exceeded;  // cap hit before stabilization
}

}  // namespace

Tri is_reachable(const KripkeStructure& m, int rounds) {
  std::set<std::size_t> named;
  for (const auto& [k, w] : m.nominals) {
    (void)k;
    named.insert(w);
  }
  if (named.size() != m.worlds.size()) return Tri::no;

  Coverage cov;
  auto apply_ops = [&]() -> bool {
    bool grew = false;
    for (const auto& [name, profs] : m.sig.body.ops)
      for (const auto& p : profs) {
        bool rig = m.sig.is_rigid_op(name, p);
        std::size_t sites = rig ? 1 : m.worlds.size();
        for (std::size_t i = 0; i < sites; ++i) {
          const auto& table = rig ? m.rigid.ops.at({name, p}) : m.local[i].ops.at({name, p});
          // argument pools: covered sets of the (site-resolved) argument sorts
          std::vector<std::vector<std::size_t>> pools;
          for (const auto& a : p.arity) {
            auto& c = cov.at(i, m.sig, a);
            pools.emplace_back(c.begin(), c.end());
          }
          auto& result_set = cov.at(i, m.sig, p.result);
          std::vector<std::size_t> limits;
          for (auto& pl : pools) limits.push_back(pl.size());
          for_each_tuple(limits, [&](const std::vector<std::size_t>& idx) {
            std::vector<std::size_t> args;
            for (std::size_t j = 0; j < idx.size(); ++j) args.push_back(pools[j][idx[j]]);
            std::size_t val = table.at(args);
            if (result_set.insert(val).second) grew = true;
          });
        }
      }
    return grew;
  };
  auto all_covered = [&]() -> bool {
    for (const auto& s : m.sig.body.sorts) {
      if (m.sig.is_rigid_sort(s)) {
        if (cov.at(0, m.sig, s).size() != m.rigid.carriers.at(s).size()) return false;
      } else {
        for (std::size_t w = 0; w < m.worlds.size(); ++w)
          if (cov.at(w, m.sig, s).size() != m.local[w].carriers.at(s).size()) return false;
      }
    }
    return true;
  };
  if (all_covered()) return Tri::yes;  // e.g. no body sorts at all
  return coverage_fixpoint(rounds, apply_ops, all_covered);
}

Tri is_constructor_based(const KripkeStructure& m, const ConstructorPartition& part, int rounds) {
  std::set<std::size_t> named;
  for (const auto& [k, w] : m.nominals) {
    (void)k;
    named.insert(w);
  }
  if (named.size() != m.worlds.size()) return Tri::no;

  Coverage cov;
  // loose rigid sorts: every element counts as a loose-variable value
  for (const auto& s : part.loose)
    if (m.sig.is_rigid_sort(s)) {
      auto& c = cov.at(0, m.sig, s);
      for (std::size_t e = 0; e < m.rigid.carriers.at(s).size(); ++e) c.insert(e);
    }
  auto apply_ops = [&]() -> bool {
    bool grew = false;
    for (const auto& [name, profs] : part.constructors.ops)
      for (const auto& p : profs) {
        if (!m.sig.is_rigid_op(name, p))
          throw InputError("constructor '" + name.base + "' is not a rigid op of the model");
        const auto& table = m.rigid.ops.at({name, p});
        std::vector<std::vector<std::size_t>> pools;
        for (const auto& a : p.arity) {
          auto& c = cov.at(0, m.sig, a);
          pools.emplace_back(c.begin(), c.end());
        }
        auto& result_set = cov.at(0, m.sig, p.result);
        std::vector<std::size_t> limits;
        for (auto& pl : pools) limits.push_back(pl.size());
        for_each_tuple(limits, [&](const std::vector<std::size_t>& idx) {
          std::vector<std::size_t> args;
          for (std::size_t j = 0; j < idx.size(); ++j) args.push_back(pools[j][idx[j]]);
          if (result_set.insert(table.at(args)).second) grew = true;
        });
      }
    return grew;
  };
  auto all_covered = [&]() -> bool {
    for (const auto& s : m.sig.body.sorts) {
      if (!m.sig.is_rigid_sort(s)) continue;
      if (cov.at(0, m.sig, s).size() != m.rigid.carriers.at(s).size()) return false;
    }
    return true;
  };
  if (all_covered()) return Tri::yes;
  return coverage_fixpoint(rounds, apply_ops, all_covered);
}

}  // namespace hdfol
