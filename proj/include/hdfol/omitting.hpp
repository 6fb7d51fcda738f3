#pragma once
// Types (sets of sentences with free variables treated as added constants),
// realization/omission checks on finite structures and on theories, omission
// witnesses, the omitting-types chain that steers a bounded model away from
// realizing any given type, and the constructor-based entailment closure.
//
// Every "satisfiable"/"entails" in this header is read within an explicit
// SatBudget; verdicts carry that caveat rather than silently overclaiming.
// Checks against a concrete finite structure (realizes/omits) are exact.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hdfol/base.hpp"
#include "hdfol/forcing.hpp"
#include "hdfol/kripke.hpp"
#include "hdfol/signature.hpp"
#include "hdfol/syntax.hpp"

namespace hdfol {

// A type: finitely many variables of extended rigid sorts (any or rigid) and
// finitely many sentences over the signature extended by those variables.
struct TypeSpec {
  std::string name;             // display name for audits
  std::vector<VarDecl> vars;    // X: sorts must be 'any' or rigid
  std::vector<Sentence> sentences;  // Gamma, over sig extended by vars
  std::optional<int> index_bound;   // set when Gamma is a truncated family
};

// Throws InputError unless every variable sort is extended rigid and every
// sentence is well-formed over sig extended by the variables.
void check_type(const HDSignature& sig, const TypeSpec& ts);

// ---- realization on a finite structure (exact) -----------------------------------

struct RealizeResult {
  bool realized = false;
  // when realized: the first expansion (odometer order) satisfying the type
  std::optional<KripkeStructure> witness;
  // when omitted: for each expansion in order, the index of the first
  // sentence of the type it falsifies
  std::vector<std::size_t> falsified;
};

// Does some expansion of m by the type's variables globally satisfy its
// sentences? Exact: expansions of a finite structure are enumerable.
RealizeResult realizes(const KripkeStructure& m, const TypeSpec& ts);
bool omits(const KripkeStructure& m, const TypeSpec& ts);

// ---- local realization of a theory (budget-bounded) --------------------------------

// The constants C a substitution-shaped probe may use: per distinct variable
// sort of the type, budget.max_constants fresh constants (deterministic
// names). Probes handed to locally_realizes are phrased over extend(sig, C).
std::vector<VarDecl> probe_constants(const HDSignature& sig, const TypeSpec& ts,
                                     const SatBudget& budget);

struct LocalRealization {
  std::vector<VarDecl> constants;   // C (empty for the direct shape)
  Substitution theta;               // X -> C (identity-empty for direct shape)
  std::vector<Sentence> probe;      // p, subset of the caller pool
  KripkeStructure model;            // a budget model of T with the probe
};

// Substitution shape: search theta : X -> C and a probe subset p (over
// sig[C]) such that T u p has a model within budget and T u p entails
// theta(Gamma) within budget. Returns the first hit (probe subsets ascending,
// then theta in odometer order) or nullopt = "not realized at this budget".
// Throws InputError when T itself has no model within budget.
std::optional<LocalRealization> locally_realizes(const HDSignature& sig,
                                                 const std::vector<Sentence>& T,
                                                 const TypeSpec& ts, const SatBudget& budget,
                                                 const std::vector<Sentence>& probe_pool);

// Variables-as-constants shape (no substitution): probes are over
// extend(sig, ts.vars) and the entailment target is Gamma itself. The two
// shapes must agree on shared budgets; kept for cross-validation.
std::optional<LocalRealization> locally_realizes_direct(const HDSignature& sig,
                                                        const std::vector<Sentence>& T,
                                                        const TypeSpec& ts,
                                                        const SatBudget& budget,
                                                        const std::vector<Sentence>& probe_pool);

// ---- omission witnesses ---------------------------------------------------------------

struct OmissionWitness {
  std::size_t gamma_index;  // which sentence of the type
  Sentence gamma;
  std::string z;            // the fresh nominal locating the counter-world
  KripkeStructure model;    // budget model of T u p u { at z neg theta(gamma) }
};

// When T locally omits the type, any satisfiable probe (p, theta) admits a
// sentence gamma of the type whose negation is satisfiable together with
// T u p at some world (named by a fresh nominal z). Searches gamma in order;
// throws InputError when T u p has no model within budget, when the type is
// empty (it is then realized vacuously), or when no witness exists within
// budget (the failure names the budget).
OmissionWitness omission_witness(const HDSignature& sig_c, const std::vector<Sentence>& T,
                                 const std::vector<Sentence>& p, const Substitution& theta,
                                 const TypeSpec& ts, const SatBudget& budget);

// ---- the omitting-types chain ------------------------------------------------------------

struct ChainStep {
  enum Kind { decide, witness } kind = decide;
  Sentence sentence;        // the located sentence handled at this step
  bool added = false;       // decide: joined the condition; witness: always true
  std::size_t type_index = 0;   // witness steps
  std::size_t subst_index = 0;  // witness steps: which ground substitution
  std::string theta_desc;       // printable theta
  std::size_t gamma_index = 0;  // witness steps
  std::string constant;         // witness steps: the locating constant c
};

struct OmitAudit {
  std::vector<ChainStep> steps;
  std::vector<Sentence> condition;  // the final chain condition over sig[C]
  SatBudget budget;
  bool sat_T = false;          // model |= T (exact)
  bool all_named = false;      // every world of the sig[C]-model is named
  std::vector<bool> omitted;   // per type, exact omission on the final model
  // per realized type (audit failure): the realizing expansion
  std::map<std::size_t, KripkeStructure> realized_by;
  std::vector<std::string> notes;  // bounds used, caveats
};

struct OmittingModelResult {
  bool ok = false;                  // chain completed and audit fully green
  std::optional<KripkeStructure> model;    // over sig (reduct)
  std::optional<KripkeStructure> model_c;  // over sig[C], as found
  OmitAudit audit;
  // set when the chain could not be extended: the step index and explanation
  std::optional<std::size_t> failed_step;
  std::string failure;
};

// Runs the omitting-types construction at desk scale: extends sig by
// budget.max_constants fresh nominal constants C; enumerates ground
// substitutions of each type's variables (nominal variables over all
// nominals of sig[C], rigid variables over ground rigid terms up to
// term_depth); walks a chain of conditions that (a) decides each member of T
// located at each nominal and (b) after each decision inserts an omission
// witness at(c, neg theta(gamma)) for the next substitution, preferring
// constants fresh to the condition. Membership of a condition in the
// semantic forcing property is tested by the bounded search (with a model
// cache). The result model is the first budget model of T plus the final
// condition, reduced to sig; the audit then checks exactly: T holds, every
// world is named, and every type is omitted (realizes on a finite model is
// complete, independent of how the chain went).
OmittingModelResult omitting_model(const HDSignature& sig, const std::vector<Sentence>& T,
                                   const std::vector<TypeSpec>& types, const SatBudget& budget,
                                   int term_depth = 2);

// ---- constructor-based entailment ---------------------------------------------------------

struct DerivationNode {
  Sentence goal;
  std::string rule;  // "R0" | "R1" | "R2"
  std::vector<DerivationNode> premises;
};

struct EntailVerdict {
  bool derivable = false;
  std::optional<DerivationNode> tree;
  std::string reason;  // for negatives: which premise failed, at which budget
};

// The least entailment closure of: R0 (bounded semantic entailment from T),
// R1 (from at(k1, phi(k2)) for all nominals k1, k2, infer forall x:any phi),
// R2 (from at(k, forall Y_t. psi(t)) for all nominals k and constructor
// terms t of the bound variable's sort up to term_depth, infer
// forall y:s psi). Universal goals are peeled one variable at a time; a goal
// whose leading variable has a loose or flexible sort only derives via R0.
// "derivable" carries the instantiation tree; the negative verdict is always
// "not derivable at this budget", never a refutation.
EntailVerdict constructor_entail(const HDSignature& sig, const ConstructorPartition& part,
                                 const std::vector<Sentence>& T, const Sentence& phi,
                                 const SatBudget& budget, int term_depth = 3);

// ---- the fixed type families ---------------------------------------------------------------

struct FixedTypes {
  TypeSpec gamma_n;                       // unnamed-world type, one nominal variable
  std::map<SymName, TypeSpec> gamma_r;    // per constrained sort: non-constructor-value type
  std::map<SymName, TypeSpec> gamma_s;    // per extended rigid sort: element unnamed by constants
};

// gamma_n = { neg at k x | k nominal }; gamma_r[s] = { forall Y_t. neg t = y
// | t constructor term of sort s, depth <= term_depth }; gamma_s[s] = { c /= x
// | c constant of sort s in sig } (for s = any: { neg at c x }). Omitting
// gamma_n forces every world to be named; omitting gamma_r[s] forces every
// s-element to be a constructor-term value (at the depth bound); omitting
// gamma_s[s] forces every s-element to be named by a constant.
FixedTypes fixed_types(const HDSignature& sig, const ConstructorPartition& part, int term_depth);

// Order-chain fixture over one extended rigid sort: a fresh binary relation
// "leq" on s (a modality when s = any), linear-order axioms without greatest
// element, and a chain c_0 <= c_1 <= ... of n fresh constants of sort s.
// Returns the extended signature and the sentences; for experiments only.
struct OrderFixture {
  HDSignature sig;                  // input sig + leq + the chain constants
  std::vector<Sentence> sentences;  // order axioms + chain
  std::vector<std::string> constants;
};
OrderFixture order_chain_fixture(const HDSignature& sig, const SymName& sort, std::size_t n);

}  // namespace hdfol
