#pragma once
// Flattening into a logic without flexible operations.
//
// For signatures with a single rigid body sort and no rigid operations, every
// flexible symbol can be traded for a rigid-sorted one that takes the world as
// an extra first argument. `build_plus` produces the flattened signature:
// nominals become constants of a fresh world sort, modalities binary relations
// over it, and each operation/relation gains a world-sorted first argument.
// Rigid relations of the source keep their world-independence through the
// `gamma` axioms (the flattened table must not depend on the world argument).
//
// `encode_at`/`encode` translate sentences so that satisfaction is preserved:
// the translated sentence mentions a distinguished nominal variable `z`, and
// holds in a flattened model at the world denoted by z exactly when the
// original holds in the model `decode` extracts at that world. `decode`
// reuses the carrier element names of its input, so the round-trip identities
// hold up to literal equality, not just isomorphism.

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "hdfol/base.hpp"
#include "hdfol/kripke.hpp"
#include "hdfol/signature.hpp"
#include "hdfol/syntax.hpp"

namespace hdfol {

// The flattening of one source signature: the target signature, the
// world-independence axioms of the source's rigid relations, the distinguished
// nominal variable, and the name maps used by the sentence translation.
struct PlusBundle {
  HDSignature source;  // one rigid body sort, no rigid/flexible-sorted extras
  HDSignature plus;    // flattened: rigid sorts {world_sort, value_sort} only
  std::vector<Sentence> gamma;  // world-independence of rigid relations
  std::string z;                // distinguished nominal variable of `plus`
  SymName world_sort;           // fresh rigid sort standing for source worlds
  SymName value_sort;           // the source's rigid sort, kept by name
  std::map<SymName, SymName> op_plus;   // source operation -> flattened name
  std::map<SymName, SymName> rel_plus;  // source relation  -> flattened name
};

// Build the flattened signature. The source must have exactly one rigid body
// sort, that sort must be its only body sort, it must have no rigid
// operations, every operation/relation must range over that sort with at
// least one relation argument, and nominal-part names must not collide with
// body names. Violations raise InputError naming the offending symbol.
PlusBundle build_plus(const HDSignature& source);

// Translate a rigid source term (variables and fully pinned applications):
// variables are fixed, and a pinned application (@k f)(ts) becomes the
// flattened operation pinned at z applied to (value of k at z, translated ts).
Term encode_term(const PlusBundle& b, const Term& t);

// Translate `g` as seen from the world named by `k` (a source nominal or an
// any-sorted variable). The result is a rigid sentence over the flattened
// signature extended by {z : any} (plus k as a world-sorted variable when k is
// not a source nominal). Supported shapes: nominals, possibility of a plain
// modality over a nominal, equations, relational atoms, disjunction,
// negation, quantification, retrieve, and store; anything else raises
// InputError("unsupported construct ...").
Sentence encode_at(const PlusBundle& b, const std::string& k, const Sentence& g);

// Translate a closed sentence: universally quantify encode_at over a fresh
// world-sorted variable.
Sentence encode(const PlusBundle& b, const Sentence& g);

// Extract the source-signature model seen at world `w` of a flattened model:
// worlds are the world-sort carrier elements, nominal/modality/operation/
// relation tables are read off the flattened tables at `w`. Requires
// mp |= gamma (otherwise the rigid relations would be ill-defined; rejected
// with InputError). Carrier element names are reused, not copied.
KripkeStructure decode(const PlusBundle& b, const KripkeStructure& mp, std::size_t w);

// Inverse direction, for tests and round-trips: pack a family of source
// models sharing their world list and rigid carriers into one flattened model
// with one world per family member, such that decode(combine(fam), i) equals
// fam[i] exactly.
KripkeStructure combine_models(const PlusBundle& b,
                               const std::vector<KripkeStructure>& family);

}  // namespace hdfol
