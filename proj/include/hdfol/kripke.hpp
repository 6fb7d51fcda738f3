#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hdfol/base.hpp"
#include "hdfol/signature.hpp"
#include "hdfol/syntax.hpp"

namespace hdfol {

// Tables for one interpretation site: the shared rigid part, or the flexible
// part of a single world. Elements are indices into the carrier of their sort.
struct Interp {
  std::map<SymName, std::vector<std::string>> carriers;  // sort -> element names
  std::map<std::pair<SymName, OpProfile>, std::map<std::vector<std::size_t>, std::size_t>> ops;
  std::map<std::pair<SymName, RelProfile>, std::set<std::vector<std::size_t>>> rels;

  friend bool operator==(const Interp&, const Interp&) = default;
};

// A finite Kripke structure. Rigid symbols are interpreted once (`rigid`);
// flexible symbols once per world (`local`), so the sharing condition holds by
// construction. Pinned-sort carriers alias the carrier at the pinning world.
struct KripkeStructure {
  HDSignature sig;
  std::vector<std::string> worlds;              // display names; index = world id
  std::map<std::string, std::size_t> nominals;  // nominal constant -> world id
  std::map<std::string, std::set<std::pair<std::size_t, std::size_t>>> modalities;
  Interp rigid;
  std::vector<Interp> local;  // one per world

  std::size_t world_of(const std::string& nominal) const;
  // Carrier of a (possibly pinned) sort as seen from world w.
  const std::vector<std::string>& carrier(std::size_t w, const SymName& sort) const;
  std::size_t carrier_size(std::size_t w, const SymName& sort) const;

  friend bool operator==(const KripkeStructure&, const KripkeStructure&) = default;
};

// Structural checks: every nominal/modality interpreted; carriers exactly the
// declared sorts, each non-empty; op tables total, values in range; no rigid
// symbol interpreted locally and vice versa.
ValidationReport validate_model(const KripkeStructure& m);

// ---- evaluation ---------------------------------------------------------------

// Ground hybrid-term value at w: flexible symbols read w's tables, pinned
// symbols the tables of the pinning world, rigid symbols the shared ones.
std::size_t eval_term(const KripkeStructure& m, std::size_t w, const Term& t);

// Accessibility relation of a structured action. Star is the exact
// reflexive-transitive closure (finite frame, no bound involved).
std::set<std::pair<std::size_t, std::size_t>> eval_action(const KripkeStructure& m,
                                                          const Action& a);

// ---- satisfaction -------------------------------------------------------------

// Local satisfaction at a world. Binders extend the structure: store adds a
// nominal constant denoting w; exists enumerates expansions.
bool sat_local(const KripkeStructure& m, std::size_t w, const Sentence& g);
// Satisfaction at every world / of every sentence at every world.
bool sat_global(const KripkeStructure& m, const Sentence& g);
bool sat_theory(const KripkeStructure& m, const std::vector<Sentence>& ts);

// ---- expansions ---------------------------------------------------------------

// Copy of m whose signature gains a nominal constant denoting world w.
KripkeStructure expand_nominal(const KripkeStructure& m, const std::string& name, std::size_t w);
// Copy of m whose signature gains a rigid constant of `sort` denoting element
// `elem` of the shared carrier.
KripkeStructure expand_rigid(const KripkeStructure& m, const std::string& name,
                             const SymName& sort, std::size_t elem);

// All expansions of m by the given variables (worlds for any-sorted, shared
// carrier elements for rigid-sorted), in odometer order.
std::vector<KripkeStructure> expansions(const KripkeStructure& m,
                                        const std::vector<VarDecl>& vars);

// ---- reducts ------------------------------------------------------------------

// Model reduct along a signature morphism: reinterprets every source symbol as
// its image. Worlds are unchanged.
KripkeStructure reduct(const KripkeStructure& m, const SignatureMorphism& chi);

// Substitution reduct: m is a model of the extended signature containing the
// substitution's value constants; the result interprets each constant c in the
// domain of theta as the value of theta(c) and carries `sig_c1` (the extended
// signature declaring the domain constants).
KripkeStructure reduct_subst(const KripkeStructure& m, const HDSignature& sig_c1,
                             const Substitution& theta);

// ---- term models ---------------------------------------------------------------

struct InitialModelResult {
  KripkeStructure model;
  bool truncated = false;  // an op application left the depth-bounded carrier
  int depth_used = 0;      // bound actually applied (raised until carriers non-empty)
};

// The term model: worlds = nominals, carriers = rigid terms up to a depth
// bound, all relations empty. Requires a non-void signature.
InitialModelResult initial_model(const HDSignature& sig, int depth);

// ---- basic sentences ------------------------------------------------------------

// Extended atom: nominal | <lambda>k | hybrid equation | hybrid relation.
bool is_extended_atom(const Sentence& g);
// Extended atom under at most one retrieve.
bool is_basic_sentence(const Sentence& g);

struct BasicModelResult {
  KripkeStructure model;
  bool truncated = false;
  int depth_used = 0;
  // nominal -> world class representative, for audit output
  std::map<std::string, std::string> world_class;
};

// Term-model quotient making every sentence of the retrieve-closure of B true:
// worlds are nominals modulo asserted @k k'; rigid carriers are ground rigid
// terms modulo congruence closure of the asserted equations (bare atoms are
// asserted at every nominal); relations are the least congruence-closed sets
// containing the asserted atoms. Throws InputError on non-basic input.
BasicModelResult basic_model(const std::vector<Sentence>& b, const HDSignature& sig, int depth);

// ---- homomorphisms ---------------------------------------------------------------

struct KripkeHom {
  std::vector<std::size_t> world_map;                      // src world -> dst world
  std::map<SymName, std::vector<std::size_t>> rigid_map;   // rigid sort -> element map
  std::vector<std::map<SymName, std::vector<std::size_t>>> local_maps;  // per src world
};

// Deterministic backtracking search for a homomorphism: preserves nominal
// denotations, modality edges, op values and relation membership; the maps on
// rigid sorts are world-independent.
std::optional<KripkeHom> find_hom(const KripkeStructure& src, const KripkeStructure& dst);

bool is_surjective(const KripkeHom& h, const KripkeStructure& src, const KripkeStructure& dst);

// ---- reachability -----------------------------------------------------------------

// Every world named by a nominal and every carrier element denoted by a rigid
// term. Computed as a least fixpoint over elements; `rounds` caps the fixpoint
// iterations, and a cap hit before stabilization yields `exceeded` rather than
// a definitive answer (rounds >= largest carrier size is always exact).
Tri is_reachable(const KripkeStructure& m, int rounds);

// Every world named, and every rigid element generated by constructor ops from
// loose-sort elements. Same fixpoint/rounds contract as is_reachable.
Tri is_constructor_based(const KripkeStructure& m, const ConstructorPartition& part, int rounds);

}  // namespace hdfol
