#pragma once
// Text formats: signatures, sentences, theories, models, substitutions,
// forcing properties and type families. Line-oriented, with an s-expression
// flavour inside sentences; '#' starts a comment. One canonical printer per
// kind; parse(print(x)) = x, and printing a parsed canonical file reproduces
// it byte for byte.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hdfol/kripke.hpp"
#include "hdfol/signature.hpp"
#include "hdfol/syntax.hpp"

namespace hdfol {

// ---- sentences / terms / actions -------------------------------------------

// Parsing is signature-directed: bare atoms resolve to nominals or 0-ary
// relations by lookup, and binder sorts are validated on the spot. Derived
// connectives (true, and, implies, iff, forall, [a]) are accepted and
// elaborated; the printer never emits them.
Term parse_term(const std::string& text, const HDSignature& sig);
Action parse_action(const std::string& text, const HDSignature& sig);
Sentence parse_sentence(const std::string& text, const HDSignature& sig);

// ---- signatures -------------------------------------------------------------

// Lines: nominal k | modality m | sort s [rigid] | op f : s1 .. sn -> s [rigid]
// | rel r : s1 .. sn [rigid].
HDSignature parse_signature(const std::string& text);
std::string print_signature(const HDSignature& sig);

// ---- theories ---------------------------------------------------------------

// One sentence per non-empty line.
std::vector<Sentence> parse_theory(const std::string& text, const HDSignature& sig);
std::string print_theory(const std::vector<Sentence>& ts);

// ---- models -----------------------------------------------------------------

// Lines: world w0 w1 .. | nominal k w | modality m w w' | carrier s e0 e1 ..
// (rigid sorts) / carrier s w e0 e1 .. (flexible sorts) | op f a* v / op f w a* v
// | rel r a* / rel r w a*. Rigid tables are stated once, with no world column:
// the sharing condition holds by construction, and a world column on a rigid
// symbol is a parse error. Totality and carrier non-emptiness are enforced.
KripkeStructure parse_model(const std::string& text, const HDSignature& sig);
std::string print_model(const KripkeStructure& m);

// ---- substitutions ----------------------------------------------------------

// Self-contained: the domain/codomain constants are declared in the file.
// Lines: domain c : s | codomain c : s | nominal c k | term c t.
struct SubstFile {
  std::vector<VarDecl> domain;    // C1
  std::vector<VarDecl> codomain;  // C2
  Substitution theta;
};
SubstFile parse_substitution(const std::string& text, const HDSignature& sig);
std::string print_substitution(const SubstFile& s);

// ---- forcing properties -------------------------------------------------------

// Lines: condition p | leq p q | label p <sentence>. Order pairs are the
// stated ones (the consumer takes the reflexive-transitive closure).
struct ForcingFile {
  std::vector<std::string> conditions;
  std::vector<std::pair<std::string, std::string>> leq;
  std::vector<std::pair<std::string, Sentence>> labels;
};
ForcingFile parse_forcing(const std::string& text, const HDSignature& sig);
std::string print_forcing(const ForcingFile& f);

// ---- type families -------------------------------------------------------------

// Blocks separated by 'type' lines; inside a block: var x : s lines first,
// then one sentence per line, parsed over the block's extended signature.
struct TypeBlock {
  std::vector<VarDecl> vars;
  std::vector<Sentence> sentences;
};
std::vector<TypeBlock> parse_types(const std::string& text, const HDSignature& sig);
std::string print_types(const std::vector<TypeBlock>& ts);

// ---- files ---------------------------------------------------------------------

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace hdfol
