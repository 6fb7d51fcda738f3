#pragma once
// Shared fixtures: small signatures, theories and models used across the test
// binaries and the sample-file generator.

#include <vector>

#include "hdfol/kripke.hpp"
#include "hdfol/signature.hpp"
#include "hdfol/syntax.hpp"

namespace fixtures {

using namespace hdfol;

// Propositional hybrid: one nominal k, one modality lam, one 0-ary flexible
// relation rho. K1 = a single reflexive world named k where rho holds.
// K2 = K1 plus an unnamed world where rho fails.
HDSignature hpl_sig();
KripkeStructure hpl_k1();
KripkeStructure hpl_k2();

// Three worlds named k0,k1,k2 in a lam-chain w0 -> w1 -> w2; empty body.
// The rho variant adds a 0-ary flexible relation holding only at w2.
HDSignature chain3_sig();
KripkeStructure chain3_model();
HDSignature chain3_rho_sig();
KripkeStructure chain3_rho_model();

// Lists with a world-dependent delete: nominals n0,n1,n2 in a lam-chain,
// rigid sorts Elt (constant e) and List (constructors empty, cons), flexible
// delete : List -> List. The theory pins delete to the identity at n0 and to
// "drop one element" moving from n2 to n1.
HDSignature list_sig();
std::vector<Sentence> list_theory();
// Variant: delete at n0 defined by structural recursion (identity on every
// constructor-generated list, unconstrained on junk elements).
std::vector<Sentence> list_rec_theory();
// The length-bounded model of list_theory(): lists of length <= 2, delete at
// n_i drops min(i, length) head elements.
KripkeStructure list_model();
// The constructor choice {empty, cons}: List constrained, Elt loose.
ConstructorPartition list_partition();

// Flattening source: nominals k0,k1, modality lam, one rigid sort D with
// flexible sig : D D -> D, flexible p : D, rigid r : D D. Models come in two
// variants sharing worlds {u0,u1} and carrier D = {d0,d1}.
HDSignature enc_sig();
KripkeStructure enc_model(int variant);

}  // namespace fixtures
