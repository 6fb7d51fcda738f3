#pragma once
// Seeded random generators and independent oracles. Oracles recompute results
// by a different method than the library (path walking, direct quantifier
// loops, naive congruence closure) so agreement is evidence, not tautology.

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hdfol/kripke.hpp"
#include "hdfol/signature.hpp"
#include "hdfol/syntax.hpp"

namespace testutil {

using Rng = std::mt19937_64;
using namespace hdfol;

std::size_t pick(Rng& rng, std::size_t n);  // uniform 0..n-1, n >= 1
bool coin(Rng& rng);

// Random model over `sig`: world count 1..max_worlds, carrier sizes
// 1..max_carrier, uniform tables/edges/denotations.
KripkeStructure random_model(Rng& rng, const HDSignature& sig, std::size_t max_worlds,
                             std::size_t max_carrier);
// Same worlds and rigid carriers as `base`, fresh random everything else.
KripkeStructure random_model_like(Rng& rng, const KripkeStructure& base);

struct GenOpts {
  int depth = 4;                   // sentence depth budget
  int term_depth = 2;              // term depth budget
  bool structured_actions = true;  // seq/alt/star under possibility
  bool allow_store = true;
  bool dia_nominal_only = false;   // possibility bodies restricted to nominals
};

// Random closed sentence over `sig` within the options' shape. Bound
// variables are introduced by exists/store with generated names.
Sentence random_sentence(Rng& rng, const HDSignature& sig, const GenOpts& opts);

// Accessibility of an action computed by iterated pairwise composition
// (star = identity joined with up to |W| self-compositions).
std::set<std::pair<std::size_t, std::size_t>> action_paths(const KripkeStructure& m,
                                                           const Action& a);

// Direct "until" semantics: some lam-successor y of w satisfies phi while
// every v with w -> v -> y satisfies psi.
bool until_oracle(const KripkeStructure& m, std::size_t w, const std::string& modality,
                  const Sentence& phi, const Sentence& psi);

// Naive ground congruence closure over the depth-bounded rigid term universe:
// union-find seeded with the given ground equations, closed under the
// congruence rule by fixpoint. equal() answers for universe members.
class CongClosure {
 public:
  CongClosure(const HDSignature& sig, int depth,
              const std::vector<std::pair<Term, Term>>& eqs);
  bool equal(const Term& a, const Term& b) const;
  std::size_t classes(const SymName& sort) const;

 private:
  std::size_t find(std::size_t i) const;
  std::map<Term, std::size_t> index_;
  std::vector<Term> terms_;
  mutable std::vector<std::size_t> parent_;
  std::map<SymName, std::set<std::size_t>> by_sort_;
};

}  // namespace testutil
