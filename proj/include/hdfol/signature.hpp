#pragma once
// Signatures of the hybrid-dynamic logic with rigid symbols.
//
// A signature couples a nominal part (one sort "any", constants = nominals,
// binary relations = modalities) with a many-sorted first-order body and a
// distinguished rigid subsignature: symbols whose interpretation is shared
// across worlds. Everything downstream (terms, models, forcing) is built on
// top of these three pieces.

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hdfol/base.hpp"

namespace hdfol {

struct OpProfile {
  std::vector<SymName> arity;
  SymName result;
  friend auto operator<=>(const OpProfile&, const OpProfile&) = default;
};

struct RelProfile {
  std::vector<SymName> arity;
  friend auto operator<=>(const RelProfile&, const RelProfile&) = default;
};

// Plain many-sorted first-order signature. Operation names may be overloaded
// across profiles; within one profile a name occurs at most once.
class FOSignature {
 public:
  std::set<SymName> sorts;
  std::map<SymName, std::vector<OpProfile>> ops;
  std::map<SymName, std::vector<RelProfile>> rels;

  void add_sort(SymName s) { sorts.insert(std::move(s)); }
  void add_op(const SymName& name, OpProfile p);
  void add_rel(const SymName& name, RelProfile p);

  bool has_sort(const SymName& s) const { return sorts.count(s) != 0; }
  bool has_op(const SymName& name) const { return ops.count(name) != 0; }
  bool has_op(const SymName& name, const OpProfile& p) const;
  bool has_rel(const SymName& name) const { return rels.count(name) != 0; }
  bool has_rel(const SymName& name, const RelProfile& p) const;

  // Names of 0-ary operations with the given result sort, sorted.
  std::vector<SymName> constants(const SymName& sort) const;

  // True if every symbol of *this occurs in `big` with the same profile.
  bool subsignature_of(const FOSignature& big) const;

  // Internal consistency: each sort mentioned in a profile is declared.
  void check(ValidationReport& rep, const std::string& where) const;

  friend bool operator==(const FOSignature&, const FOSignature&) = default;
};

// The full signature: nominal part, body, rigid subsignature of the body.
class HDSignature {
 public:
  FOSignature nominal;  // sorts = {any}; 0-ary ops = nominals; binary rels = modalities
  FOSignature body;
  FOSignature rigid;  // must be a subsignature of body

  std::vector<std::string> nominals() const;
  std::vector<std::string> modalities() const;
  bool is_nominal(const std::string& k) const;
  bool is_modality(const std::string& m) const;

  bool is_rigid_sort(const SymName& s) const { return !s.pinned() && rigid.has_sort(s); }
  bool is_flexible_sort(const SymName& s) const {
    return !s.pinned() && body.has_sort(s) && !rigid.has_sort(s);
  }
  bool is_rigid_op(const SymName& name, const OpProfile& p) const {
    return !name.pinned() && rigid.has_op(name, p);
  }
  bool is_rigid_rel(const SymName& name, const RelProfile& p) const {
    return !name.pinned() && rigid.has_rel(name, p);
  }

  // Rigid body sorts plus "any": the sorts variables may take.
  std::vector<SymName> extended_rigid_sorts() const;

  // Sorts hybrid terms may take: body sorts and pinned flexible sorts. The
  // pinning nominal must be declared.
  bool is_hybrid_sort(const SymName& s) const;

  // Normalize a pinned sort: pinning a rigid sort is the sort itself.
  SymName pin_sort(const SymName& sort, const std::string& nominal) const;

  friend bool operator==(const HDSignature&, const HDSignature&) = default;
};

// Structural validity: nominal part is single-sorted over "any" with 0-ary ops
// and binary relations only; rigid is a subsignature of body; profiles mention
// declared sorts only; "any" is not a body sort; no declared name is pinned.
ValidationReport validate(const HDSignature& sig);

// Adjoin variables as fresh constants: any-sorted ones become nominals,
// rigid-sorted ones become rigid constants. Throws InputError on sort or name
// clashes (a variable may not shadow an existing constant or nominal).
HDSignature extend(const HDSignature& sig, const std::vector<VarDecl>& vars);

// The two derived signatures of rigidification: at_sig has the pinned copies
// of flexible symbols next to the rigid ones (sorts @k s, ops @k f, rels @k r,
// with @k x = x for rigid x); bar_sig is the body united with the pinned
// flexible symbols. Hybrid terms are the terms of bar_sig.
struct RigidifiedSignature {
  FOSignature at_sig;
  FOSignature bar_sig;
};

RigidifiedSignature rigidify_signature(const HDSignature& sig);

// True if some ground hybrid term exists for every body sort at every nominal,
// and the signature has at least one nominal. Computed by fixpoint marking of
// inhabited sorts (rigid sorts and pinned flexible sorts), not by term search.
bool is_non_void(const HDSignature& sig);

// A choice of constructors among the rigid operations. Constrained sorts are
// those with at least one constructor result; the rest of the body sorts are
// loose. Each loose sort gets a countably indexed pool of variable names.
struct ConstructorPartition {
  FOSignature constructors;  // subsignature of the rigid part
  std::set<SymName> constrained;
  std::set<SymName> loose;
  std::string var_prefix;  // fresh vs. the signature's symbol names

  std::string loose_var(const SymName& sort, int i) const;
};

// Throws InputError if `ctors` is not a subsignature of the rigid part.
ConstructorPartition constructor_partition(const HDSignature& sig, const FOSignature& ctors);

// Profile-preserving symbol map between signatures; rigid symbols land on
// rigid symbols. Unlisted symbols are not mapped (check() reports them).
struct SignatureMorphism {
  HDSignature source;
  HDSignature target;
  std::map<std::string, std::string> nominal_map;
  std::map<std::string, std::string> modality_map;
  std::map<SymName, SymName> sort_map;                            // body sorts
  std::map<std::pair<SymName, OpProfile>, SymName> op_map;        // body ops
  std::map<std::pair<SymName, RelProfile>, SymName> rel_map;      // body rels

  // Mapped profile of a body op/rel under the sort map.
  OpProfile map_profile(const OpProfile& p) const;
  RelProfile map_rel_profile(const RelProfile& p) const;

  // Lookups; throw InputError when the symbol is unmapped. Pinned names map
  // to the pinned image (@k x -> @χ(k) χ(x)), normalized on rigid images.
  std::string map_nominal(const std::string& k) const;
  std::string map_modality(const std::string& m) const;
  SymName map_sort(const SymName& s) const;
  SymName map_op(const SymName& name, const OpProfile& p) const;
  SymName map_rel(const SymName& name, const RelProfile& p) const;

  ValidationReport check() const;
};

SignatureMorphism identity_morphism(const HDSignature& sig);

// Composition g after f; requires f.target == g.source.
SignatureMorphism compose(const SignatureMorphism& f, const SignatureMorphism& g);

}  // namespace hdfol
