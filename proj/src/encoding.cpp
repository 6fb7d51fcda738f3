#include "hdfol/encoding.hpp"

#include <algorithm>
#include <cassert>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace hdfol {

namespace {

// Every base name declared anywhere in `sig`.
void names_of(const HDSignature& sig, std::set<std::string>& out) {
  for (const FOSignature* part : {&sig.nominal, &sig.body, &sig.rigid}) {
    for (const auto& s : part->sorts) out.insert(s.base);
    for (const auto& [n, ps] : part->ops) out.insert(n.base);
    for (const auto& [n, ps] : part->rels) out.insert(n.base);
  }
  out.insert(kAny);
}

// A nominal-or-variable as a world-sorted term. Source nominals are flexible
// constants of the flattened signature and must be read at z; variables are
// rigid and stay bare.
Term world_term(const PlusBundle& b, const std::string& k, bool pin_at_z) {
  if (pin_at_z && b.source.is_nominal(k)) return Term::make(SymName(k, b.z));
  return Term::make(SymName(k));
}

std::string show(const Sentence& g) { return print_sentence(g); }

// Push "as seen from world k" into a term: pin every unpinned source
// operation at k. Unpinned 0-ary names outside the signature are variables.
// (Within the flattening restriction every operation ranges over the one
// rigid sort, so the name alone resolves the symbol.)
Term at_world(const PlusBundle& b, const Term& t, const std::string& k) {
  std::vector<Term> args;
  for (const Term& a : t.args()) args.push_back(at_world(b, a, k));
  const SymName& f = t.op();
  if (f.pinned()) return Term::make(f, std::move(args));
  if (b.source.body.has_op(SymName(f.base)))
    return Term::make(SymName(f.base, k), std::move(args));
  if (args.empty()) return t;  // a variable
  throw InputError("unknown operation '" + f.base + "' in term");
}

}  // namespace

PlusBundle build_plus(const HDSignature& source) {
  ValidationReport rep = validate(source);
  if (!rep.ok())
    throw InputError("flattening rejected: source signature invalid: " + rep.joined());

  if (source.rigid.sorts.size() != 1)
    throw InputError("flattening rejected: expected exactly one rigid sort, found " +
                     std::to_string(source.rigid.sorts.size()));
  const SymName s2 = *source.rigid.sorts.begin();
  for (const auto& s : source.body.sorts)
    if (!(s == s2))
      throw InputError("flattening rejected: flexible sort '" + s.base +
                       "' (the only body sort must be the rigid one)");
  if (!source.rigid.ops.empty())
    throw InputError("flattening rejected: rigid operation '" +
                     source.rigid.ops.begin()->first.base + "' is not supported");
  for (const auto& [n, ps] : source.body.ops)
    for (const auto& p : ps) {
      bool all_s2 = p.result == s2 &&
                    std::all_of(p.arity.begin(), p.arity.end(),
                                [&](const SymName& a) { return a == s2; });
      if (!all_s2)
        throw InputError("flattening rejected: operation '" + n.base +
                         "' does not range over the rigid sort");
    }
  for (const auto& [n, ps] : source.body.rels)
    for (const auto& p : ps) {
      if (p.arity.empty())
        throw InputError("flattening rejected: relation '" + n.base +
                         "' over no arguments is outside the supported shape");
      for (const auto& a : p.arity)
        if (!(a == s2))
          throw InputError("flattening rejected: relation '" + n.base +
                           "' does not range over the rigid sort");
    }
  for (const auto& k : source.nominals())
    if (source.body.has_op(SymName(k)) || source.body.has_rel(SymName(k)))
      throw InputError("flattening rejected: name '" + k +
                       "' is both a nominal and a body symbol");
  for (const auto& l : source.modalities())
    if (source.body.has_op(SymName(l)) || source.body.has_rel(SymName(l)))
      throw InputError("flattening rejected: name '" + l +
                       "' is both a modality and a body symbol");

  PlusBundle b;
  b.source = source;
  b.value_sort = s2;

  std::set<std::string> taken;
  names_of(source, taken);
  b.world_sort = SymName(fresh_name("World", taken));
  taken.insert(b.world_sort.base);
  b.z = fresh_name("z", taken);
  taken.insert(b.z);

  b.plus.nominal.add_sort(SymName(kAny));
  b.plus.body.add_sort(b.world_sort);
  b.plus.body.add_sort(s2);
  b.plus.rigid.add_sort(b.world_sort);
  b.plus.rigid.add_sort(s2);
  for (const auto& k : source.nominals())
    b.plus.body.add_op(SymName(k), OpProfile{{}, b.world_sort});
  for (const auto& l : source.modalities())
    b.plus.body.add_rel(SymName(l), RelProfile{{b.world_sort, b.world_sort}});
  for (const auto& [n, ps] : source.body.ops) {
    SymName flat(fresh_name(n.base + "_at", taken));
    taken.insert(flat.base);
    b.op_plus[n] = flat;
    for (const auto& p : ps) {
      std::vector<SymName> arity{b.world_sort};
      arity.insert(arity.end(), p.arity.begin(), p.arity.end());
      b.plus.body.add_op(flat, OpProfile{std::move(arity), s2});
    }
  }
  for (const auto& [n, ps] : source.body.rels) {
    SymName flat(fresh_name(n.base + "_at", taken));
    taken.insert(flat.base);
    b.rel_plus[n] = flat;
    for (const auto& p : ps) {
      std::vector<SymName> arity{b.world_sort};
      arity.insert(arity.end(), p.arity.begin(), p.arity.end());
      b.plus.body.add_rel(flat, RelProfile{std::move(arity)});
    }
  }

  // One axiom per rigid relation profile: the flattened table must not depend
  // on its world argument.
  for (const auto& [n, ps] : source.rigid.rels)
    for (const auto& p : ps) {
      std::string x1 = fresh_name("x1", taken);
      std::string x2 = fresh_name("x2", taken);
      std::vector<VarDecl> vars{{x1, b.world_sort}, {x2, b.world_sort}};
      std::vector<Term> args1{Term::make(SymName(x1))};
      std::vector<Term> args2{Term::make(SymName(x2))};
      std::set<std::string> local = taken;
      local.insert(x1);
      local.insert(x2);
      for (std::size_t i = 0; i < p.arity.size(); ++i) {
        std::string y = fresh_name("y" + std::to_string(i + 1), local);
        local.insert(y);
        vars.push_back({y, p.arity[i]});
        args1.push_back(Term::make(SymName(y)));
        args2.push_back(Term::make(SymName(y)));
      }
      const SymName& flat = b.rel_plus.at(n);
      b.gamma.push_back(Sentence::forall(
          std::move(vars), Sentence::iff(Sentence::rel(flat, std::move(args1)),
                                         Sentence::rel(flat, std::move(args2)))));
    }

  ValidationReport prep = validate(b.plus);
  if (!prep.ok()) throw InputError("internal: flattened signature invalid: " + prep.joined());
  return b;
}

Term encode_term(const PlusBundle& b, const Term& t) {
  const SymName& f = t.op();
  if (!f.pinned()) {
    if (t.args().empty() && !b.source.body.has_op(f)) return t;  // a variable
    throw InputError("term not rigid: operation '" + f.base +
                     "' is applied without a world");
  }
  auto it = b.op_plus.find(SymName(f.base));
  if (it == b.op_plus.end())
    throw InputError("unknown operation '" + f.base + "' in term");
  std::vector<Term> args{world_term(b, f.at, /*pin_at_z=*/true)};
  for (const Term& a : t.args()) args.push_back(encode_term(b, a));
  return Term::make(SymName(it->second.base, b.z), std::move(args));
}

Sentence encode_at(const PlusBundle& b, const std::string& k, const Sentence& g) {
  switch (g.kind()) {
    case SenKind::nominal:
      return Sentence::at(b.z, Sentence::eq(world_term(b, k, false),
                                            world_term(b, g.label(), false)));
    case SenKind::dia: {
      if (g.action().kind() != Action::Kind::atom)
        throw InputError("unsupported construct in encoding: structured action in " +
                         show(g));
      if (g.sub().kind() != SenKind::nominal)
        throw InputError(
            "unsupported construct in encoding: possibility over a non-nominal "
            "sentence in " +
            show(g));
      return Sentence::at(
          b.z, Sentence::rel(SymName(g.action().modality()),
                             {world_term(b, k, false),
                              world_term(b, g.sub().label(), false)}));
    }
    case SenKind::eq:
      return Sentence::eq(encode_term(b, at_world(b, g.lhs(), k)),
                          encode_term(b, at_world(b, g.rhs(), k)));
    case SenKind::rel: {
      const SymName& r = g.rel_name();
      auto it = b.rel_plus.find(SymName(r.base));
      if (it == b.rel_plus.end())
        throw InputError("unknown relation '" + r.base + "' in " + show(g));
      // A pinned relation is read at its own world; its arguments still at k.
      const std::string& kr = r.pinned() ? r.at : k;
      std::vector<Term> args{world_term(b, kr, /*pin_at_z=*/true)};
      for (const Term& a : g.args())
        args.push_back(encode_term(b, at_world(b, a, k)));
      return Sentence::rel(SymName(it->second.base, b.z), std::move(args));
    }
    case SenKind::disj: {
      SentenceVec out;
      for (const Sentence& s : g.subs()) out.push_back(encode_at(b, k, s));
      return Sentence::disj(std::move(out));
    }
    case SenKind::neg:
      return Sentence::neg(encode_at(b, k, g.sub()));
    case SenKind::exists: {
      std::vector<VarDecl> vars;
      for (const VarDecl& v : g.vars()) {
        if (v.name == b.z)
          throw InputError("bound variable '" + v.name +
                           "' collides with the distinguished nominal variable; "
                           "rename it");
        vars.push_back({v.name, v.sort == SymName(kAny) ? b.world_sort : v.sort});
      }
      return Sentence::exists(std::move(vars), encode_at(b, k, g.sub()));
    }
    case SenKind::at:
      return encode_at(b, g.label(), g.sub());
    case SenKind::store:
      return encode_at(b, k, rename_nominal(g.sub(), g.label(), k));
  }
  throw InputError("unsupported construct in encoding: " + show(g));
}

Sentence encode(const PlusBundle& b, const Sentence& g) {
  std::set<std::string> taken;
  names_of(b.source, taken);
  names_of(b.plus, taken);
  collect_names(g, taken);
  taken.insert(b.z);
  std::string x = fresh_name("x", taken);
  return Sentence::forall({{x, b.world_sort}}, encode_at(b, x, g));
}

KripkeStructure decode(const PlusBundle& b, const KripkeStructure& mp, std::size_t w) {
  if (!(mp.sig == b.plus))
    throw InputError("model is not over the flattened signature of this bundle");
  if (w >= mp.worlds.size()) throw InputError("world index out of range");
  for (const Sentence& g : b.gamma)
    if (!sat_global(mp, g))
      throw InputError("a rigid relation varies with the world argument; axiom fails: " +
                       show(g));

  const std::vector<std::string>& wcar = mp.rigid.carriers.at(b.world_sort);
  const Interp& at_w = mp.local[w];

  KripkeStructure r;
  r.sig = b.source;
  r.worlds = wcar;
  for (const auto& k : b.source.nominals())
    r.nominals[k] = at_w.ops.at({SymName(k), OpProfile{{}, b.world_sort}}).at({});
  for (const auto& l : b.source.modalities()) {
    auto& edges = r.modalities[l];
    for (const auto& tup :
         at_w.rels.at({SymName(l), RelProfile{{b.world_sort, b.world_sort}}}))
      edges.insert({tup[0], tup[1]});
  }
  r.rigid.carriers[b.value_sort] = mp.rigid.carriers.at(b.value_sort);

  auto flat_arity = [&](const std::vector<SymName>& a) {
    std::vector<SymName> out{b.world_sort};
    out.insert(out.end(), a.begin(), a.end());
    return out;
  };
  for (const auto& [n, ps] : b.source.rigid.rels)
    for (const auto& p : ps) {
      auto& out = r.rigid.rels[{n, p}];
      const auto& table =
          at_w.rels.at({b.rel_plus.at(n), RelProfile{flat_arity(p.arity)}});
      for (const auto& tup : table)
        if (tup[0] == 0)
          out.insert(std::vector<std::size_t>(tup.begin() + 1, tup.end()));
    }

  r.local.resize(wcar.size());
  for (std::size_t v = 0; v < wcar.size(); ++v) {
    Interp& li = r.local[v];
    for (const auto& [n, ps] : b.source.body.ops)
      for (const auto& p : ps) {
        auto& out = li.ops[{n, p}];
        const auto& table =
            at_w.ops.at({b.op_plus.at(n), OpProfile{flat_arity(p.arity), b.value_sort}});
        for (const auto& [key, val] : table)
          if (key[0] == v)
            out[std::vector<std::size_t>(key.begin() + 1, key.end())] = val;
      }
    for (const auto& [n, ps] : b.source.body.rels)
      for (const auto& p : ps) {
        if (b.source.is_rigid_rel(n, p)) continue;
        auto& out = li.rels[{n, p}];
        const auto& table =
            at_w.rels.at({b.rel_plus.at(n), RelProfile{flat_arity(p.arity)}});
        for (const auto& tup : table)
          if (tup[0] == v)
            out.insert(std::vector<std::size_t>(tup.begin() + 1, tup.end()));
      }
  }

  ValidationReport rep = validate_model(r);
  if (!rep.ok()) throw InputError("internal: decoded model invalid: " + rep.joined());
  return r;
}

KripkeStructure combine_models(const PlusBundle& b,
                               const std::vector<KripkeStructure>& family) {
  if (family.empty()) throw InputError("empty family");
  for (const auto& f : family) {
    if (!(f.sig == b.source))
      throw InputError("family member not over the source signature");
    if (!(f.worlds == family[0].worlds) ||
        !(f.rigid.carriers == family[0].rigid.carriers))
      throw InputError("family members must share worlds and rigid carriers");
  }

  KripkeStructure m;
  m.sig = b.plus;
  m.rigid.carriers[b.world_sort] = family[0].worlds;
  m.rigid.carriers[b.value_sort] = family[0].rigid.carriers.at(b.value_sort);

  auto flat_arity = [&](const std::vector<SymName>& a) {
    std::vector<SymName> out{b.world_sort};
    out.insert(out.end(), a.begin(), a.end());
    return out;
  };
  for (std::size_t i = 0; i < family.size(); ++i) {
    const KripkeStructure& f = family[i];
    m.worlds.push_back("w" + std::to_string(i));
    Interp li;
    for (const auto& [k, wid] : f.nominals)
      li.ops[{SymName(k), OpProfile{{}, b.world_sort}}][{}] = wid;
    for (const auto& [l, edges] : f.modalities) {
      auto& out = li.rels[{SymName(l), RelProfile{{b.world_sort, b.world_sort}}}];
      for (const auto& [a, c] : edges) out.insert({a, c});
    }
    for (const auto& [n, ps] : b.source.body.ops)
      for (const auto& p : ps) {
        auto& out = li.ops[{b.op_plus.at(n), OpProfile{flat_arity(p.arity), b.value_sort}}];
        for (std::size_t v = 0; v < f.worlds.size(); ++v)
          for (const auto& [key, val] : f.local[v].ops.at({n, p})) {
            std::vector<std::size_t> tup{v};
            tup.insert(tup.end(), key.begin(), key.end());
            out[std::move(tup)] = val;
          }
      }
    for (const auto& [n, ps] : b.source.body.rels)
      for (const auto& p : ps) {
        auto& out = li.rels[{b.rel_plus.at(n), RelProfile{flat_arity(p.arity)}}];
        bool rig = b.source.is_rigid_rel(n, p);
        for (std::size_t v = 0; v < f.worlds.size(); ++v) {
          const auto& table = rig ? f.rigid.rels.at({n, p}) : f.local[v].rels.at({n, p});
          for (const auto& key : table) {
            std::vector<std::size_t> tup{v};
            tup.insert(tup.end(), key.begin(), key.end());
            out.insert(std::move(tup));
          }
        }
      }
    m.local.push_back(std::move(li));
  }

  ValidationReport rep = validate_model(m);
  if (!rep.ok()) throw InputError("internal: combined model invalid: " + rep.joined());
  return m;
}

}  // namespace hdfol
