#include "hdfol/signature.hpp"

#include <algorithm>

namespace hdfol {

namespace {

std::string profile_string(const OpProfile& p) {
  std::string s = ":";
  for (const auto& a : p.arity) s += " " + to_string(a);
  s += " -> " + to_string(p.result);
  return s;
}

std::string profile_string(const RelProfile& p) {
  std::string s = ":";
  for (const auto& a : p.arity) s += " " + to_string(a);
  return s;
}

}  // namespace

void FOSignature::add_op(const SymName& name, OpProfile p) {
  auto& v = ops[name];
  if (std::find(v.begin(), v.end(), p) != v.end()) return;
  v.push_back(std::move(p));
  std::sort(v.begin(), v.end());
}

void FOSignature::add_rel(const SymName& name, RelProfile p) {
  auto& v = rels[name];
  if (std::find(v.begin(), v.end(), p) != v.end()) return;
  v.push_back(std::move(p));
  std::sort(v.begin(), v.end());
}

bool FOSignature::has_op(const SymName& name, const OpProfile& p) const {
  auto it = ops.find(name);
  if (it == ops.end()) return false;
  return std::find(it->second.begin(), it->second.end(), p) != it->second.end();
}

bool FOSignature::has_rel(const SymName& name, const RelProfile& p) const {
  auto it = rels.find(name);
  if (it == rels.end()) return false;
  return std::find(it->second.begin(), it->second.end(), p) != it->second.end();
}

std::vector<SymName> FOSignature::constants(const SymName& sort) const {
  std::vector<SymName> out;
  for (const auto& [name, profs] : ops)
    for (const auto& p : profs)
      if (p.arity.empty() && p.result == sort) out.push_back(name);
  return out;
}

bool FOSignature::subsignature_of(const FOSignature& big) const {
  for (const auto& s : sorts)
    if (!big.has_sort(s)) return false;
  for (const auto& [name, profs] : ops)
    for (const auto& p : profs)
      if (!big.has_op(name, p)) return false;
  for (const auto& [name, profs] : rels)
    for (const auto& p : profs)
      if (!big.has_rel(name, p)) return false;
  return true;
}

void FOSignature::check(ValidationReport& rep, const std::string& where) const {
  for (const auto& [name, profs] : ops) {
    if (profs.empty()) rep.add(where + ": op " + to_string(name) + " has no profile");
    for (const auto& p : profs) {
      for (const auto& a : p.arity)
        if (!has_sort(a))
          rep.add(where + ": op " + to_string(name) + " " + profile_string(p) +
                  " uses undeclared sort " + to_string(a));
      if (!has_sort(p.result))
        rep.add(where + ": op " + to_string(name) + " " + profile_string(p) +
                " uses undeclared result sort " + to_string(p.result));
    }
  }
  for (const auto& [name, profs] : rels) {
    if (profs.empty()) rep.add(where + ": rel " + to_string(name) + " has no profile");
    for (const auto& p : profs)
      for (const auto& a : p.arity)
        if (!has_sort(a))
          rep.add(where + ": rel " + to_string(name) + " " + profile_string(p) +
                  " uses undeclared sort " + to_string(a));
  }
}

std::vector<std::string> HDSignature::nominals() const {
  std::vector<std::string> out;
  for (const auto& [name, profs] : nominal.ops)
    for (const auto& p : profs)
      if (p.arity.empty() && p.result == SymName(kAny)) out.push_back(name.base);
  return out;
}

std::vector<std::string> HDSignature::modalities() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : nominal.rels) out.push_back(name.base);
  return out;
}

bool HDSignature::is_nominal(const std::string& k) const {
  return nominal.has_op(SymName(k), OpProfile{{}, SymName(kAny)});
}

bool HDSignature::is_modality(const std::string& m) const { return nominal.has_rel(SymName(m)); }

std::vector<SymName> HDSignature::extended_rigid_sorts() const {
  std::vector<SymName> out{SymName(kAny)};
  for (const auto& s : rigid.sorts) out.push_back(s);
  std::sort(out.begin(), out.end());
  return out;
}

bool HDSignature::is_hybrid_sort(const SymName& s) const {
  if (!s.pinned()) return body.has_sort(s);
  return is_nominal(s.at) && is_flexible_sort(SymName(s.base));
}

SymName HDSignature::pin_sort(const SymName& sort, const std::string& nominal_name) const {
  if (is_rigid_sort(sort)) return sort;
  return SymName(sort.base, nominal_name);
}

ValidationReport validate(const HDSignature& sig) {
  ValidationReport rep;

  // Nominal part: one sort "any", constants and binary relations over it.
  if (sig.nominal.sorts != std::set<SymName>{SymName(kAny)})
    rep.add("nominal part must have exactly the sort 'any'");
  for (const auto& [name, profs] : sig.nominal.ops) {
    if (name.pinned()) rep.add("nominal constant " + to_string(name) + " is pinned");
    for (const auto& p : profs)
      if (!p.arity.empty() || !(p.result == SymName(kAny)))
        rep.add("nominal symbol " + name.base + " is not a constant of sort any");
  }
  for (const auto& [name, profs] : sig.nominal.rels) {
    if (name.pinned()) rep.add("modality " + to_string(name) + " is pinned");
    for (const auto& p : profs)
      if (p.arity != std::vector<SymName>{SymName(kAny), SymName(kAny)})
        rep.add("modality " + name.base + " is not a binary relation on any");
  }

  // Body: no pinned names, "any" not among its sorts.
  if (sig.body.has_sort(SymName(kAny))) rep.add("body reuses the reserved sort 'any'");
  for (const auto& s : sig.body.sorts)
    if (s.pinned()) rep.add("body sort " + to_string(s) + " is pinned");
  for (const auto& [name, _] : sig.body.ops)
    if (name.pinned()) rep.add("body op " + to_string(name) + " is pinned");
  for (const auto& [name, _] : sig.body.rels)
    if (name.pinned()) rep.add("body rel " + to_string(name) + " is pinned");
  sig.body.check(rep, "body");
  sig.rigid.check(rep, "rigid part");

  if (!sig.rigid.subsignature_of(sig.body))
    rep.add("rigid part is not a subsignature of the body");

  // Name uniqueness across categories keeps parsing unambiguous: a name is a
  // nominal, a modality, a sort, an op or a relation, never two of these.
  std::map<std::string, std::string> seen;
  auto claim = [&](const std::string& n, const std::string& what) {
    auto [it, fresh] = seen.emplace(n, what);
    if (!fresh && it->second != what)
      rep.add("name '" + n + "' declared both as " + it->second + " and as " + what);
  };
  for (const auto& k : sig.nominals()) claim(k, "nominal");
  for (const auto& m : sig.modalities()) claim(m, "modality");
  for (const auto& s : sig.body.sorts) claim(s.base, "sort");
  for (const auto& [name, _] : sig.body.ops) claim(name.base, "op");
  for (const auto& [name, _] : sig.body.rels) claim(name.base, "rel");

  return rep;
}

HDSignature extend(const HDSignature& sig, const std::vector<VarDecl>& vars) {
  HDSignature out = sig;
  std::set<std::string> fresh;
  for (const auto& v : vars) {
    if (!fresh.insert(v.name).second)
      throw InputError("variable '" + v.name + "' declared twice in one extension");
    bool clash = sig.is_nominal(v.name) || sig.is_modality(v.name) ||
                 sig.body.has_sort(SymName(v.name)) || sig.body.has_op(SymName(v.name)) ||
                 sig.body.has_rel(SymName(v.name));
    if (clash) throw InputError("variable '" + v.name + "' clashes with a declared symbol");
    if (v.sort == SymName(kAny)) {
      out.nominal.add_op(SymName(v.name), OpProfile{{}, SymName(kAny)});
    } else if (sig.is_rigid_sort(v.sort)) {
      out.body.add_op(SymName(v.name), OpProfile{{}, v.sort});
      out.rigid.add_op(SymName(v.name), OpProfile{{}, v.sort});
    } else {
      throw InputError("variable '" + v.name + "' has non-rigid sort " + to_string(v.sort));
    }
  }
  return out;
}

RigidifiedSignature rigidify_signature(const HDSignature& sig) {
  RigidifiedSignature out;
  const auto noms = sig.nominals();

  // Pinned copies of the flexible part, one per nominal; rigid symbols are
  // their own pinned copies and appear once, unpinned.
  FOSignature& at = out.at_sig;
  for (const auto& s : sig.rigid.sorts) at.add_sort(s);
  for (const auto& s : sig.body.sorts)
    if (!sig.rigid.has_sort(s))
      for (const auto& k : noms) at.add_sort(SymName(s.base, k));

  auto pin_profile = [&](const OpProfile& p, const std::string& k) {
    OpProfile q;
    for (const auto& a : p.arity) q.arity.push_back(sig.pin_sort(a, k));
    q.result = sig.pin_sort(p.result, k);
    return q;
  };
  auto pin_rel_profile = [&](const RelProfile& p, const std::string& k) {
    RelProfile q;
    for (const auto& a : p.arity) q.arity.push_back(sig.pin_sort(a, k));
    return q;
  };

  for (const auto& [name, profs] : sig.body.ops)
    for (const auto& p : profs) {
      if (sig.rigid.has_op(name, p)) {
        at.add_op(name, p);
      } else {
        for (const auto& k : noms) at.add_op(SymName(name.base, k), pin_profile(p, k));
      }
    }
  for (const auto& [name, profs] : sig.body.rels)
    for (const auto& p : profs) {
      if (sig.rigid.has_rel(name, p)) {
        at.add_rel(name, p);
      } else {
        for (const auto& k : noms) at.add_rel(SymName(name.base, k), pin_rel_profile(p, k));
      }
    }

  // bar_sig: the body plus the pinned flexible symbols.
  out.bar_sig = sig.body;
  for (const auto& s : at.sorts) out.bar_sig.add_sort(s);
  for (const auto& [name, profs] : at.ops)
    for (const auto& p : profs) out.bar_sig.add_op(name, p);
  for (const auto& [name, profs] : at.rels)
    for (const auto& p : profs) out.bar_sig.add_rel(name, p);
  return out;
}

bool is_non_void(const HDSignature& sig) {
  const auto noms = sig.nominals();
  if (noms.empty()) return false;
  if (sig.body.sorts.empty()) return true;

  // Fixpoint marking over the sorts of the rigidified signature: a pinned or
  // rigid sort is inhabited once some op with inhabited argument sorts yields
  // it. Every body sort must be inhabited at every nominal.
  RigidifiedSignature rs = rigidify_signature(sig);
  std::set<SymName> inhabited;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& [name, profs] : rs.at_sig.ops)
      for (const auto& p : profs) {
        if (inhabited.count(p.result)) continue;
        bool all = true;
        for (const auto& a : p.arity)
          if (!inhabited.count(a)) {
            all = false;
            break;
          }
        if (all) {
          inhabited.insert(p.result);
          changed = true;
        }
      }
  }
  for (const auto& s : sig.body.sorts) {
    if (sig.is_rigid_sort(s)) {
      if (!inhabited.count(s)) return false;
    } else {
      for (const auto& k : noms)
        if (!inhabited.count(SymName(s.base, k))) return false;
    }
  }
  return true;
}

std::string ConstructorPartition::loose_var(const SymName& sort, int i) const {
  return var_prefix + sort.base + "_" + std::to_string(i);
}

ConstructorPartition constructor_partition(const HDSignature& sig, const FOSignature& ctors) {
  if (!ctors.subsignature_of(sig.rigid))
    throw InputError("constructors must form a subsignature of the rigid part");
  ConstructorPartition out;
  out.constructors = ctors;
  for (const auto& [name, profs] : ctors.ops)
    for (const auto& p : profs) out.constrained.insert(p.result);
  for (const auto& s : sig.body.sorts)
    if (!out.constrained.count(s)) out.loose.insert(s);
  // Pick a variable prefix no declared symbol starts with.
  out.var_prefix = "y_";
  auto taken = [&](const std::string& pre) {
    auto starts = [&](const std::string& n) { return n.rfind(pre, 0) == 0; };
    for (const auto& k : sig.nominals())
      if (starts(k)) return true;
    for (const auto& [name, _] : sig.body.ops)
      if (starts(name.base)) return true;
    return false;
  };
  while (taken(out.var_prefix)) out.var_prefix = "y" + out.var_prefix;
  return out;
}

OpProfile SignatureMorphism::map_profile(const OpProfile& p) const {
  OpProfile q;
  for (const auto& a : p.arity) q.arity.push_back(map_sort(a));
  q.result = map_sort(p.result);
  return q;
}

RelProfile SignatureMorphism::map_rel_profile(const RelProfile& p) const {
  RelProfile q;
  for (const auto& a : p.arity) q.arity.push_back(map_sort(a));
  return q;
}

std::string SignatureMorphism::map_nominal(const std::string& k) const {
  auto it = nominal_map.find(k);
  if (it == nominal_map.end()) throw InputError("morphism does not map nominal '" + k + "'");
  return it->second;
}

std::string SignatureMorphism::map_modality(const std::string& m) const {
  auto it = modality_map.find(m);
  if (it == modality_map.end()) throw InputError("morphism does not map modality '" + m + "'");
  return it->second;
}

SymName SignatureMorphism::map_sort(const SymName& s) const {
  if (s == SymName(kAny)) return s;
  auto it = sort_map.find(SymName(s.base));
  if (it == sort_map.end()) throw InputError("morphism does not map sort '" + s.base + "'");
  if (!s.pinned()) return it->second;
  return target.pin_sort(it->second, map_nominal(s.at));
}

SymName SignatureMorphism::map_op(const SymName& name, const OpProfile& p) const {
  auto it = op_map.find({SymName(name.base), p});
  if (it == op_map.end()) throw InputError("morphism does not map op '" + name.base + "'");
  if (!name.pinned()) return it->second;
  std::string k = map_nominal(name.at);
  if (target.is_rigid_op(it->second, map_profile(p))) return it->second;
  return SymName(it->second.base, k);
}

SymName SignatureMorphism::map_rel(const SymName& name, const RelProfile& p) const {
  auto it = rel_map.find({SymName(name.base), p});
  if (it == rel_map.end()) throw InputError("morphism does not map rel '" + name.base + "'");
  if (!name.pinned()) return it->second;
  std::string k = map_nominal(name.at);
  if (target.is_rigid_rel(it->second, map_rel_profile(p))) return it->second;
  return SymName(it->second.base, k);
}

ValidationReport SignatureMorphism::check() const {
  ValidationReport rep;
  for (const auto& k : source.nominals()) {
    auto it = nominal_map.find(k);
    if (it == nominal_map.end())
      rep.add("nominal '" + k + "' unmapped");
    else if (!target.is_nominal(it->second))
      rep.add("nominal '" + k + "' maps to non-nominal '" + it->second + "'");
  }
  for (const auto& m : source.modalities()) {
    auto it = modality_map.find(m);
    if (it == modality_map.end())
      rep.add("modality '" + m + "' unmapped");
    else if (!target.is_modality(it->second))
      rep.add("modality '" + m + "' maps to non-modality '" + it->second + "'");
  }
  for (const auto& s : source.body.sorts) {
    auto it = sort_map.find(s);
    if (it == sort_map.end()) {
      rep.add("sort '" + s.base + "' unmapped");
      continue;
    }
    if (!target.body.has_sort(it->second))
      rep.add("sort '" + s.base + "' maps outside the target body");
    if (source.is_rigid_sort(s) && !target.is_rigid_sort(it->second))
      rep.add("rigid sort '" + s.base + "' maps to a flexible sort");
  }
  auto check_op = [&](const SymName& name, const OpProfile& p) {
    auto it = op_map.find({name, p});
    if (it == op_map.end()) {
      rep.add("op '" + name.base + "' unmapped");
      return;
    }
    OpProfile q;
    try {
      q = map_profile(p);
    } catch (const InputError&) {
      return;  // reported via the sort loop
    }
    if (!target.body.has_op(it->second, q))
      rep.add("op '" + name.base + "' does not map profile-preservingly");
    if (source.is_rigid_op(name, p) && !target.is_rigid_op(it->second, q))
      rep.add("rigid op '" + name.base + "' maps to a flexible op");
  };
  for (const auto& [name, profs] : source.body.ops)
    for (const auto& p : profs) check_op(name, p);
  auto check_rel = [&](const SymName& name, const RelProfile& p) {
    auto it = rel_map.find({name, p});
    if (it == rel_map.end()) {
      rep.add("rel '" + name.base + "' unmapped");
      return;
    }
    RelProfile q;
    try {
      q = map_rel_profile(p);
    } catch (const InputError&) {
      return;
    }
    if (!target.body.has_rel(it->second, q))
      rep.add("rel '" + name.base + "' does not map profile-preservingly");
    if (source.is_rigid_rel(name, p) && !target.is_rigid_rel(it->second, q))
      rep.add("rigid rel '" + name.base + "' maps to a flexible rel");
  };
  for (const auto& [name, profs] : source.body.rels)
    for (const auto& p : profs) check_rel(name, p);
  return rep;
}

SignatureMorphism identity_morphism(const HDSignature& sig) {
  SignatureMorphism m;
  m.source = m.target = sig;
  for (const auto& k : sig.nominals()) m.nominal_map[k] = k;
  for (const auto& mo : sig.modalities()) m.modality_map[mo] = mo;
  for (const auto& s : sig.body.sorts) m.sort_map[s] = s;
  for (const auto& [name, profs] : sig.body.ops)
    for (const auto& p : profs) m.op_map[{name, p}] = name;
  for (const auto& [name, profs] : sig.body.rels)
    for (const auto& p : profs) m.rel_map[{name, p}] = name;
  return m;
}

SignatureMorphism compose(const SignatureMorphism& f, const SignatureMorphism& g) {
  if (!(f.target == g.source)) throw InputError("morphism composition: signatures do not chain");
  SignatureMorphism h;
  h.source = f.source;
  h.target = g.target;
  for (const auto& [a, b] : f.nominal_map) h.nominal_map[a] = g.map_nominal(b);
  for (const auto& [a, b] : f.modality_map) h.modality_map[a] = g.map_modality(b);
  for (const auto& [a, b] : f.sort_map) h.sort_map[a] = g.map_sort(b);
  for (const auto& [key, b] : f.op_map) h.op_map[key] = g.map_op(b, f.map_profile(key.second));
  for (const auto& [key, b] : f.rel_map)
    h.rel_map[key] = g.map_rel(b, f.map_rel_profile(key.second));
  return h;
}

}  // namespace hdfol
