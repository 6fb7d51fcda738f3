#pragma once
// Terms, actions and sentences. All values are immutable and shared; the
// constructors canonicalize where the design demands it (disjunctions are
// deduplicated and kept in a fixed total order, so a disjunction is a finite
// set). Variables are not a separate node kind: binders extend the signature
// with fresh constants, and a variable occurrence is a 0-ary application.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hdfol/base.hpp"
#include "hdfol/signature.hpp"

namespace hdfol {

// A hybrid term: application of a (possibly pinned) operation to hybrid
// terms. Constants and variables are 0-ary applications.
class Term {
 public:
  Term() = default;
  static Term make(SymName op, std::vector<Term> args = {});

  const SymName& op() const { return n_->op; }
  const std::vector<Term>& args() const { return n_->args; }
  bool null() const { return n_ == nullptr; }

 private:
  struct Node {
    SymName op;
    std::vector<Term> args;
  };
  std::shared_ptr<const Node> n_;
};

int compare(const Term& a, const Term& b);
inline bool operator==(const Term& a, const Term& b) { return compare(a, b) == 0; }
inline bool operator<(const Term& a, const Term& b) { return compare(a, b) < 0; }

// Structured actions over the modalities.
class Action {
 public:
  enum class Kind : uint8_t { atom, seq, alt, star };

  static Action atom(std::string modality);
  static Action seq(Action a, Action b);
  static Action alt(Action a, Action b);
  static Action star(Action a);

  Action() = default;
  Kind kind() const { return n_->kind; }
  const std::string& modality() const { return n_->modality; }  // atom
  const Action& left() const { return n_->subs[0]; }            // seq/alt/star
  const Action& right() const { return n_->subs[1]; }           // seq/alt
  bool null() const { return n_ == nullptr; }

  // a;a;...;a (n factors); n >= 1.
  static Action power(const Action& a, int n);

 private:
  struct Node {
    Kind kind;
    std::string modality;
    std::vector<Action> subs;
  };
  std::shared_ptr<const Node> n_;
};

int compare(const Action& a, const Action& b);
inline bool operator==(const Action& a, const Action& b) { return compare(a, b) == 0; }

int star_height(const Action& a);

class Sentence;
using SentenceVec = std::vector<Sentence>;

enum class SenKind : uint8_t {
  nominal,  // k
  eq,       // t1 = t2
  rel,      // r(t...) with r possibly pinned
  at,       // @ k g
  neg,      // not g
  disj,     // or {g...}; empty = falsity
  store,    // store z . g   (z a fresh nominal variable bound to the current world)
  exists,   // exists X . g  (X extends the signature)
  dia,      // <a> g
};

class Sentence {
 public:
  Sentence() = default;

  static Sentence nominal(std::string k);
  static Sentence eq(Term l, Term r);
  static Sentence rel(SymName r, std::vector<Term> args);
  static Sentence at(std::string k, Sentence g);
  static Sentence neg(Sentence g);
  static Sentence disj(SentenceVec gs);  // sorted + deduplicated
  static Sentence store(std::string z, Sentence g);
  static Sentence exists(std::vector<VarDecl> vars, Sentence g);
  static Sentence dia(Action a, Sentence g);

  // Derived forms, elaborated at construction (no separate node kinds).
  static Sentence falsum() { return disj({}); }
  static Sentence verum() { return neg(falsum()); }
  static Sentence conj(SentenceVec gs);
  static Sentence implies(Sentence a, Sentence b);
  static Sentence iff(Sentence a, Sentence b);
  static Sentence forall(std::vector<VarDecl> vars, Sentence g);
  static Sentence box(Action a, Sentence g);

  SenKind kind() const { return n_->kind; }
  const std::string& label() const { return n_->label; }   // nominal, at, store
  const Term& lhs() const { return n_->lhs; }              // eq
  const Term& rhs() const { return n_->rhs; }              // eq
  const SymName& rel_name() const { return n_->rel; }      // rel
  const std::vector<Term>& args() const { return n_->args; }
  const Sentence& sub() const { return n_->subs[0]; }      // at, neg, store, exists, dia
  const SentenceVec& subs() const { return n_->subs; }     // disj
  const std::vector<VarDecl>& vars() const { return n_->vars; }  // exists
  const Action& action() const { return n_->act; }         // dia
  bool null() const { return n_ == nullptr; }

 private:
  struct Node {
    SenKind kind;
    std::string label;
    Term lhs, rhs;
    SymName rel;
    std::vector<Term> args;
    SentenceVec subs;
    std::vector<VarDecl> vars;
    Action act;
  };
  std::shared_ptr<const Node> n_;
  static Sentence wrap(Node n);
};

int compare(const Sentence& a, const Sentence& b);
inline bool operator==(const Sentence& a, const Sentence& b) { return compare(a, b) == 0; }
inline bool operator<(const Sentence& a, const Sentence& b) { return compare(a, b) < 0; }

// ---- canonical text --------------------------------------------------------

std::string print_term(const Term& t);
std::string print_action(const Action& a);
std::string print_sentence(const Sentence& g);

// ---- well-sortedness -------------------------------------------------------

// Sort of a hybrid term over the given signature; throws InputError when the
// term does not resolve (unknown symbol, profile mismatch, bad pinning).
SymName sort_of(const HDSignature& sig, const Term& t);

// Full check of a sentence over sig. Binders extend the signature on the way
// down; bound names must be fresh (shadowing is rejected).
void check_sentence(const HDSignature& sig, const Sentence& g);

// ---- structural operations -------------------------------------------------

Term translate(const SignatureMorphism& m, const Term& t);
Action translate(const SignatureMorphism& m, const Action& a);
// Bound variables keep their names, retargeted along the sort map.
Sentence translate(const SignatureMorphism& m, const Sentence& g);

// A substitution of the constants C1 by values over an extension by C2:
// any-sorted constants go to nominals, rigid-sorted ones to ground rigid
// terms (terms of the rigidified signature, pinned symbols allowed).
struct Substitution {
  std::map<std::string, std::string> nominal_map;
  std::map<std::string, Term> term_map;

  bool maps(const std::string& c) const {
    return nominal_map.count(c) != 0 || term_map.count(c) != 0;
  }
};

// Totality and image check: every domain constant is mapped, any-sorted ones
// to nominals of sig_c2, rigid-sorted ones to ground rigid terms of the same
// sort over sig_c2.
void check_substitution(const HDSignature& sig_c2, const std::vector<VarDecl>& domain,
                        const Substitution& s);

Term substitute(const Substitution& s, const Term& t);
Action substitute(const Substitution& s, const Action& a);
Sentence substitute(const Substitution& s, const Sentence& g);

// Substitution replacing one nominal name by another (used by store and by
// the forcing clauses).
Sentence rename_nominal(const Sentence& g, const std::string& from, const std::string& to);

// s2 after s1 (apply s1, then s2 to its values).
Substitution compose(const Substitution& s1, const Substitution& s2);

// Rigidification at a nominal: push the world of evaluation into the symbols.
// Defined on terms and on the action-free fragment (atoms with possibility
// only over a plain modality applied to a nominal; no store). Throws
// InputError("unsupported construct ...") outside that domain.
Term rigidify(const HDSignature& sig, const Term& t, const std::string& k);
Sentence rigidify(const HDSignature& sig, const Sentence& g, const std::string& k);

// ---- fragments --------------------------------------------------------------

enum class Fragment {
  full,        // everything
  action_free, // no structured actions: possibility only over a plain modality
  propositional, // empty body: atoms are nominals and propositional relations;
                 // no store, no quantifier, no equations
  rigid_single,  // action_free over signatures with one modality, one body
                 // sort, no rigid ops and no rigid rels
  open_atoms,    // action_free, and atoms built from unpinned terms/relations
};

bool fragment_member(Fragment f, const HDSignature& sig, const Sentence& g);

// Accepts both the logic acronyms (HDFOLR, HFOLR, HDPL, RFOHL, HFOLS) and the
// descriptive names (full, action-free, propositional, rigid-single,
// open-atoms). Throws InputError on anything else.
Fragment fragment_from_name(const std::string& name);
std::string to_string(Fragment f);

// ---- until ------------------------------------------------------------------

// The temporal until over a single modality, elaborated to store/possibility
// form: store x . < m > store y . (phi and @ x not < m > not (< m > y implies psi)).
Sentence desugar_until(const HDSignature& sig, const std::string& modality, const Sentence& phi,
                       const Sentence& psi);

// ---- subsentences ----------------------------------------------------------

// The closure of g under the subsentence relation; star unfolds to the powers
// up to `star_bound` (plus the 0-step case, the operand itself). Sentences
// under binders live in the extended signature; each entry carries the
// variables added on the path to it.
struct ScopedSentence {
  std::vector<VarDecl> context;
  Sentence sentence;
};

bool operator<(const ScopedSentence& a, const ScopedSentence& b);
bool operator==(const ScopedSentence& a, const ScopedSentence& b);

std::vector<ScopedSentence> subsentences(const Sentence& g, int star_bound);

// ---- misc helpers -----------------------------------------------------------

// Ground rigid terms of the given sort, smallest first (by depth, then by the
// canonical order), over the rigidified signature: rigid symbols plus pinned
// flexible symbols. Bounded by term depth.
std::vector<Term> ground_rigid_terms(const HDSignature& sig, const SymName& sort, int max_depth);

// Same enumeration for every sort at once: sort -> terms, smallest first.
std::map<SymName, std::vector<Term>> ground_rigid_universe(const HDSignature& sig, int max_depth);

// Constructor terms of the given sort with loose variables, up to depth.
// Variables are drawn from the partition's indexed pools; at most
// `max_vars_per_sort` distinct variables per loose sort. Each result carries
// the variables it uses.
struct OpenTerm {
  Term term;
  std::vector<VarDecl> vars;
};
std::vector<OpenTerm> constructor_terms(const HDSignature& sig, const ConstructorPartition& part,
                                        const SymName& sort, int max_depth,
                                        int max_vars_per_sort = 2);

// All nominals named in a sentence (as atom, retrieve index or pin).
void collect_nominals(const Sentence& g, std::set<std::string>& out);
void collect_nominals(const Term& t, std::set<std::string>& out);

// Every identifier occurring in the sentence (symbols, labels, bound names).
void collect_names(const Sentence& g, std::set<std::string>& out);

// base, base1, base2, ... — first one not in `taken`.
std::string fresh_name(const std::string& base, const std::set<std::string>& taken);

}  // namespace hdfol
