#include "fixtures.hpp"

#include <cassert>

namespace fixtures {

namespace {

SymName any() { return SymName(kAny); }

Term T(const char* f) { return Term::make(SymName(f)); }
Term T(const char* f, const char* at, std::vector<Term> args) {
  return Term::make(SymName(f, at), std::move(args));
}

void check(const KripkeStructure& m) { assert(validate_model(m).ok()); }

}  // namespace

HDSignature hpl_sig() {
  HDSignature sig;
  sig.nominal.add_sort(any());
  sig.nominal.add_op(SymName("k"), OpProfile{{}, any()});
  sig.nominal.add_rel(SymName("lambda"), RelProfile{{any(), any()}});
  sig.body.add_rel(SymName("rho"), RelProfile{{}});
  return sig;
}

KripkeStructure hpl_k1() {
  KripkeStructure m;
  m.sig = hpl_sig();
  m.worlds = {"w0"};
  m.nominals = {{"k", 0}};
  m.modalities["lambda"] = {{0, 0}};
  m.local.resize(1);
  m.local[0].rels[{SymName("rho"), RelProfile{{}}}] = {{}};  // rho holds
  check(m);
  return m;
}

KripkeStructure hpl_k2() {
  KripkeStructure m = hpl_k1();
  m.worlds.push_back("w1");
  m.local.resize(2);
  m.local[1].rels[{SymName("rho"), RelProfile{{}}}] = {};  // rho fails
  check(m);
  return m;
}

HDSignature chain3_sig() {
  HDSignature sig;
  sig.nominal.add_sort(any());
  for (auto k : {"k0", "k1", "k2"}) sig.nominal.add_op(SymName(k), OpProfile{{}, any()});
  sig.nominal.add_rel(SymName("lambda"), RelProfile{{any(), any()}});
  return sig;
}

KripkeStructure chain3_model() {
  KripkeStructure m;
  m.sig = chain3_sig();
  m.worlds = {"w0", "w1", "w2"};
  m.nominals = {{"k0", 0}, {"k1", 1}, {"k2", 2}};
  m.modalities["lambda"] = {{0, 1}, {1, 2}};
  m.local.resize(3);
  check(m);
  return m;
}

HDSignature chain3_rho_sig() {
  HDSignature sig = chain3_sig();
  sig.body.add_rel(SymName("rho"), RelProfile{{}});
  return sig;
}

KripkeStructure chain3_rho_model() {
  KripkeStructure m = chain3_model();
  m.sig = chain3_rho_sig();
  for (int w = 0; w < 3; ++w)
    m.local[w].rels[{SymName("rho"), RelProfile{{}}}] = {};
  m.local[2].rels[{SymName("rho"), RelProfile{{}}}] = {{}};
  check(m);
  return m;
}

HDSignature list_sig() {
  HDSignature sig;
  sig.nominal.add_sort(any());
  for (auto k : {"n0", "n1", "n2"}) sig.nominal.add_op(SymName(k), OpProfile{{}, any()});
  sig.nominal.add_rel(SymName("lambda"), RelProfile{{any(), any()}});
  sig.body.add_sort(SymName("Elt"));
  sig.body.add_sort(SymName("List"));
  sig.rigid.add_sort(SymName("Elt"));
  sig.rigid.add_sort(SymName("List"));
  OpProfile empty_p{{}, SymName("List")}, e_p{{}, SymName("Elt")},
      cons_p{{SymName("Elt"), SymName("List")}, SymName("List")},
      del_p{{SymName("List")}, SymName("List")};
  sig.body.add_op(SymName("empty"), empty_p);
  sig.body.add_op(SymName("e"), e_p);
  sig.body.add_op(SymName("cons"), cons_p);
  sig.body.add_op(SymName("delete"), del_p);
  sig.rigid.add_op(SymName("empty"), empty_p);
  sig.rigid.add_op(SymName("e"), e_p);
  sig.rigid.add_op(SymName("cons"), cons_p);
  return sig;
}

static std::vector<Sentence> list_frame() {
  std::vector<Sentence> t;
  auto nom = [](const char* k) { return Sentence::nominal(k); };
  t.push_back(Sentence::at("n0", Sentence::dia(Action::atom("lambda"), nom("n1"))));
  t.push_back(Sentence::at("n1", Sentence::dia(Action::atom("lambda"), nom("n2"))));
  const char* ks[] = {"n0", "n1", "n2"};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) t.push_back(Sentence::at(ks[i], Sentence::neg(nom(ks[j]))));
  return t;
}

std::vector<Sentence> list_theory() {
  std::vector<Sentence> t = list_frame();
  t.push_back(Sentence::forall({VarDecl{"N", any()}},
                               Sentence::eq(T("delete", "N", {T("empty")}), T("empty"))));
  t.push_back(Sentence::forall({VarDecl{"L", SymName("List")}},
                               Sentence::eq(T("delete", "n0", {T("L")}), T("L"))));
  t.push_back(Sentence::forall(
      {VarDecl{"E", SymName("Elt")}, VarDecl{"L", SymName("List")}},
      Sentence::eq(T("delete", "n2", {Term::make(SymName("cons"), {T("E"), T("L")})}),
                   T("delete", "n1", {T("L")}))));
  return t;
}

std::vector<Sentence> list_rec_theory() {
  std::vector<Sentence> t = list_frame();
  t.push_back(Sentence::eq(T("delete", "n0", {T("empty")}), T("empty")));
  t.push_back(Sentence::forall(
      {VarDecl{"E", SymName("Elt")}, VarDecl{"L", SymName("List")}},
      Sentence::eq(T("delete", "n0", {Term::make(SymName("cons"), {T("E"), T("L")})}),
                   Term::make(SymName("cons"), {T("E"), T("delete", "n0", {T("L")})}))));
  return t;
}

KripkeStructure list_model() {
  HDSignature sig = list_sig();
  KripkeStructure m;
  m.sig = sig;
  m.worlds = {"n0", "n1", "n2"};
  m.nominals = {{"n0", 0}, {"n1", 1}, {"n2", 2}};
  m.modalities["lambda"] = {{0, 1}, {1, 2}};
  m.rigid.carriers[SymName("Elt")] = {"e"};
  m.rigid.carriers[SymName("List")] = {"nil", "le", "lee"};  // [], [e], [e,e]
  OpProfile empty_p{{}, SymName("List")}, e_p{{}, SymName("Elt")},
      cons_p{{SymName("Elt"), SymName("List")}, SymName("List")},
      del_p{{SymName("List")}, SymName("List")};
  m.rigid.ops[{SymName("empty"), empty_p}][{}] = 0;
  m.rigid.ops[{SymName("e"), e_p}][{}] = 0;
  // cons saturates at length 2: cons(e, lee) = lee.
  auto& cons = m.rigid.ops[{SymName("cons"), cons_p}];
  cons[{0, 0}] = 1;
  cons[{0, 1}] = 2;
  cons[{0, 2}] = 2;
  // delete at n0 is the identity; at n1/n2 everything reachable collapses to
  // nil (the truncation forces drop-counts past the carrier onto nil).
  m.local.resize(3);
  for (std::size_t w = 0; w < 3; ++w) {
    auto& del = m.local[w].ops[{SymName("delete"), del_p}];
    for (std::size_t l = 0; l < 3; ++l) del[{l}] = w == 0 ? l : 0;
  }
  check(m);
  return m;
}

ConstructorPartition list_partition() {
  FOSignature ctors;
  ctors.add_sort(SymName("Elt"));
  ctors.add_sort(SymName("List"));
  ctors.add_op(SymName("empty"), OpProfile{{}, SymName("List")});
  ctors.add_op(SymName("cons"), OpProfile{{SymName("Elt"), SymName("List")}, SymName("List")});
  return constructor_partition(list_sig(), ctors);
}

HDSignature enc_sig() {
  HDSignature s;
  s.nominal.add_sort(any());
  s.nominal.add_op(SymName("k0"), OpProfile{{}, any()});
  s.nominal.add_op(SymName("k1"), OpProfile{{}, any()});
  s.nominal.add_rel(SymName("lam"), RelProfile{{any(), any()}});
  s.body.add_sort(SymName("D"));
  s.rigid.add_sort(SymName("D"));
  s.body.add_op(SymName("sig"), OpProfile{{SymName("D"), SymName("D")}, SymName("D")});
  s.body.add_rel(SymName("p"), RelProfile{{SymName("D")}});
  s.body.add_rel(SymName("r"), RelProfile{{SymName("D"), SymName("D")}});
  s.rigid.add_rel(SymName("r"), RelProfile{{SymName("D"), SymName("D")}});
  return s;
}

KripkeStructure enc_model(int variant) {
  HDSignature s = enc_sig();
  KripkeStructure m;
  m.sig = s;
  m.worlds = {"u0", "u1"};
  m.nominals = {{"k0", 0}, {"k1", 1}};
  m.modalities["lam"] =
      variant == 0 ? std::set<std::pair<std::size_t, std::size_t>>{{0, 1}}
                   : std::set<std::pair<std::size_t, std::size_t>>{{0, 0}, {1, 0}};
  m.rigid.carriers[SymName("D")] = {"d0", "d1"};
  m.rigid.rels[{SymName("r"), RelProfile{{SymName("D"), SymName("D")}}}] = {{0, 0}, {1, 1}};
  for (std::size_t w = 0; w < 2; ++w) {
    Interp li;
    auto& table =
        li.ops[{SymName("sig"), OpProfile{{SymName("D"), SymName("D")}, SymName("D")}}];
    for (std::size_t a = 0; a < 2; ++a)
      for (std::size_t b = 0; b < 2; ++b)
        table[{a, b}] = variant == 0 ? (a + b + w) % 2 : (a * b) % 2;
    auto& pr = li.rels[{SymName("p"), RelProfile{{SymName("D")}}}];
    if (w == 0) pr.insert({variant == 0 ? 0u : 1u});
    m.local.push_back(li);
  }
  check(m);
  return m;
}

}  // namespace fixtures
