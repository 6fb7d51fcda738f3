#pragma once
// Forcing properties and the forcing relation, generic chains and their
// models, the semantic forcing property, and the bounded satisfiability
// search behind it.
//
// Everything here is finitized: the relation is evaluated against an explicit
// sentence pool (a finite, witness-closed stand-in for "all sentences"), a
// star bound caps the unfoldings of iteration, and a term depth caps the
// substitution search. Whenever one of those bounds -- and nothing else --
// blocks an answer, the result is Tri::exceeded rather than a boolean, so a
// truncated search is never mistaken for a refutation.

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hdfol/base.hpp"
#include "hdfol/kripke.hpp"
#include "hdfol/signature.hpp"
#include "hdfol/syntax.hpp"

namespace hdfol {

// Size limits for the bounded searches. All fields must be positive.
struct SatBudget {
  std::size_t max_worlds = 2;     // world counts tried by bounded_sat
  std::size_t max_carrier = 2;    // carrier size per sort and site
  std::size_t max_constants = 4;  // added constants a pool may draw from
  int star_bound = 3;             // iteration unfoldings (also pool default)

  void check() const;  // throws InputError when a field is non-positive
};

// A finite set of located sentences "at k (g)" closed under the witnesses the
// forcing clauses may demand: retrieve bodies, negation/disjunction members,
// composition and iteration splittings through every index nominal, and
// ground instances of existential bodies. `index` is the nominal index set
// the relation ranges over; `term_depth` bounds the ground terms used to
// instantiate rigid variables.
struct SentencePool {
  HDSignature sig;
  std::vector<std::string> index;  // nominal index set, sorted
  std::vector<Sentence> items;     // each of kind at; discovery order
  int star_bound = 3;
  int term_depth = 2;

  bool contains(const Sentence& located) const;
};

// Closes `seed` (located sentences, each of kind at) under subsentence
// witnesses. The index set is the full nominal set of `sig`. Throws
// InputError when the closure explodes past an internal safety cap or when a
// seed is not a located well-formed sentence.
SentencePool make_pool(const HDSignature& sig, const std::vector<Sentence>& seed, int star_bound,
                       int term_depth);
// Convenience: scope each bare sentence at every nominal of `sig` first.
SentencePool make_pool_at_all(const HDSignature& sig, const std::vector<Sentence>& seed,
                              int star_bound, int term_depth);

// A finite forcing property: conditions with a partial order (stored
// reflexive-transitively closed) with a least element, and a labeling taking
// each condition to a set of basic sentences. `label` holds the canonical
// located form (bare atoms scoped at every index nominal) used by the atomic
// clause of the relation; `label_src` keeps the basic sentences as given.
// `content` is what the condition *asserts* (for the semantic property, its
// pool subset); for explicitly listed properties it equals label_src.
struct ForcingProperty {
  HDSignature sig;
  SentencePool pool;
  std::vector<std::string> names;               // condition display names; index = id
  std::vector<std::vector<Sentence>> content;   // per condition
  std::vector<std::vector<Sentence>> label_src; // f(p) as provided (basic sentences)
  std::vector<std::set<Sentence>> label;        // f(p) canonicalized to located atoms
  std::set<std::pair<std::size_t, std::size_t>> order;  // reflexive-transitive <=
  std::size_t least = 0;                        // SIZE_MAX when no least exists
  std::optional<SatBudget> budget;              // recorded by semantic_forcing

  std::size_t size() const { return names.size(); }
  bool leq(std::size_t p, std::size_t q) const { return order.count({p, q}) != 0; }
  std::vector<std::size_t> geq(std::size_t p) const;  // ascending ids
  std::size_t id_of(const std::string& name) const;   // throws InputError
};

// Builds an explicitly listed property: `leq` edges are closed reflexively
// and transitively, the least element is computed (SIZE_MAX when absent --
// reported by check_forcing_axioms, not here), and labels are canonicalized.
// Label sentences must be basic over `sig`.
ForcingProperty make_forcing_property(const HDSignature& sig,
                                      const std::vector<std::string>& conditions,
                                      const std::vector<std::pair<std::string, std::string>>& leq,
                                      const std::vector<std::pair<std::string, Sentence>>& labels,
                                      const SentencePool& pool);

// ---- axioms ----------------------------------------------------------------

// Entailment test "premises entail conclusion" used by the witness axiom.
using EntailOracle = std::function<bool(const std::vector<Sentence>& premises,
                                        const Sentence& conclusion)>;

// Refutation-complete only up to the budget: true means "no countermodel
// within budget" (see AxiomReport::notes), false is a genuine countermodel.
EntailOracle bounded_entail_oracle(const HDSignature& sig, const SatBudget& budget);

struct AxiomReport {
  ValidationReport violations;     // poset axioms, label monotonicity, witness axiom
  std::vector<std::string> notes;  // budget caveats for entailment-based checks
  bool ok() const { return violations.ok(); }
};

// Checks the forcing-property axioms: partial order with a least element;
// labels are sets of basic sentences; p<=q implies f(p) subset of f(q); and
// whenever f(p) entails a located atom of the pool, some q>=p carries it.
// The last check quantifies the atom over the pool's atomic items plus all
// label atoms, with entailment decided by `oracle`.
AxiomReport check_forcing_axioms(const ForcingProperty& prop, const EntailOracle& oracle);

// ---- the forcing relation ----------------------------------------------------

// Memoized evaluator for "condition p forces g at nominal k". Clauses:
//   atoms        : at(k,g) in f(p)
//   <a1;a2> k''  : some index k' with <a1>k' at k and <a2>k'' at k'
//   <a1+a2> k''  : either branch
//   <a*> k''     : some unfolding <a^n>k'', n = 0..star_bound (n=0 is the
//                  sentence k''); a miss below the saturation point
//                  (index size - 1) is exceeded, not false
//   <a> g        : (g not a nominal) some index k' with <a>k' at k and g at k'
//   not g        : no q >= p forces g at k
//   or {...}     : some member
//   at k' g      : g at k'
//   store z . g  : g(z <- k) at k
//   exists X . g : some ground instance within the pool's term budget; a miss
//                  over a truncated instance space is exceeded
class Forcer {
 public:
  explicit Forcer(const ForcingProperty& prop) : prop_(prop) {}

  Tri forces(std::size_t p, const std::string& k, const Sentence& g);
  // for each q >= p there is r >= q forcing g at k
  Tri weak_forces(std::size_t p, const std::string& k, const Sentence& g);

  const ForcingProperty& property() const { return prop_; }

 private:
  const ForcingProperty& prop_;
  std::map<std::tuple<std::size_t, std::string, Sentence>, Tri> memo_;
};

// One-shot conveniences (fresh cache per call).
Tri forces(const ForcingProperty& prop, std::size_t p, const std::string& k, const Sentence& g);
Tri weak_forces(const ForcingProperty& prop, std::size_t p, const std::string& k,
                const Sentence& g);

// ---- generic chains ----------------------------------------------------------

struct Decision {
  std::string nominal;
  Sentence gamma;
  Tri decided;            // yes: gamma forced; no: not-gamma forced; exceeded: undecided
  std::size_t condition;  // chain member after this step
};

struct GenericChain {
  std::vector<std::size_t> chain;    // increasing; front = start condition
  std::vector<Decision> log;         // one entry per pool item, in pool order
  std::vector<std::size_t> generic;  // G: down-closure of the chain, ascending
  bool all_decided = true;           // no Decision carries exceeded
};

// Walks the pool in order; at each located item, extends the current
// condition to the least-indexed one forcing the sentence, else the
// least-indexed one forcing its negation (one exists over a finite property
// unless a bound interferes, which is recorded as an exceeded decision).
GenericChain build_generic(const ForcingProperty& prop, std::size_t start,
                           Forcer* forcer = nullptr);

// G forces g at k: some member does (exceeded when no member answers yes and
// some bound interfered).
Tri g_forces(Forcer& forcer, const GenericChain& chain, const std::string& k, const Sentence& g);

// ---- the generic model ---------------------------------------------------------

struct GenericModelResult {
  BasicModelResult basic;  // model of the forced atoms
  std::vector<Sentence> forced_atoms;  // the basic set handed to basic_model
  // per pool item: the value of "G forces it"; equivalence with satisfaction
  // in the model is enforced for every decided item
  std::vector<std::pair<Sentence, Tri>> pool_check;
  std::vector<Sentence> unverified;  // pool items undecided within bounds
};

// Builds the basic model of every located atom forced by G (the union of the
// labels over G) and checks that it satisfies a pool item exactly when G
// forces it. A decided mismatch throws InputError (the pool was not
// witness-closed); undecided items are listed, not failed.
GenericModelResult generic_model(const ForcingProperty& prop, const GenericChain& chain,
                                 int depth = 4, Forcer* forcer = nullptr);

// ---- bounded satisfiability ----------------------------------------------------

// Exhaustive deterministic search for a structure satisfying every sentence
// of `theory` within the budget: world counts ascending, then nominal
// assignments, modality tables, carrier sizes, rigid tables and per-world
// tables in a fixed lexicographic order, pruning a branch as soon as a
// sentence whose value is already determined fails. Returns the first model
// in that order, or nullopt, which means "no model within budget" -- never
// "unsatisfiable". Symbols that occur in no sentence are pinned to their
// first option (world 0, element 0, empty relation) rather than enumerated;
// the first model is unchanged by this.
std::optional<KripkeStructure> bounded_sat(const HDSignature& sig,
                                           const std::vector<Sentence>& theory,
                                           const SatBudget& budget);

// ---- the semantic forcing property ----------------------------------------------

struct SemanticForcingResult {
  ForcingProperty property;
  AxiomReport axioms;  // the axiom check runs as part of the construction
};

// The property whose conditions are the subsets of the pool jointly
// satisfiable with `theory` by a structure within budget, ordered by
// inclusion, labeled with their basic members. `sig_c` is the base signature
// already extended by the added constants the pool draws from; `theory` is
// over `sig_c`. Throws InputError when the theory itself has no model within
// budget (the property would be empty), or when the pool is too large to
// enumerate subsets.
SemanticForcingResult semantic_forcing(const HDSignature& sig_c,
                                       const std::vector<Sentence>& theory,
                                       const SatBudget& budget, const SentencePool& pool);

}  // namespace hdfol
