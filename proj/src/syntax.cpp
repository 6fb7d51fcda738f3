#include "hdfol/syntax.hpp"

#include <algorithm>
#include <cassert>
#include <functional>

namespace hdfol {

// ---- construction -----------------------------------------------------------

Term Term::make(SymName op, std::vector<Term> args) {
  Term t;
  t.n_ = std::make_shared<const Node>(Node{std::move(op), std::move(args)});
  return t;
}

int compare(const Term& a, const Term& b) {
  if (a.op() != b.op()) return a.op() < b.op() ? -1 : 1;
  size_t n = std::min(a.args().size(), b.args().size());
  for (size_t i = 0; i < n; ++i)
    if (int c = compare(a.args()[i], b.args()[i])) return c;
  if (a.args().size() != b.args().size()) return a.args().size() < b.args().size() ? -1 : 1;
  return 0;
}

Action Action::atom(std::string modality) {
  Action a;
  a.n_ = std::make_shared<const Node>(Node{Kind::atom, std::move(modality), {}});
  return a;
}
Action Action::seq(Action x, Action y) {
  Action a;
  a.n_ = std::make_shared<const Node>(Node{Kind::seq, {}, {std::move(x), std::move(y)}});
  return a;
}
Action Action::alt(Action x, Action y) {
  Action a;
  a.n_ = std::make_shared<const Node>(Node{Kind::alt, {}, {std::move(x), std::move(y)}});
  return a;
}
Action Action::star(Action x) {
  Action a;
  a.n_ = std::make_shared<const Node>(Node{Kind::star, {}, {std::move(x)}});
  return a;
}

Action Action::power(const Action& a, int n) {
  assert(n >= 1);
  Action out = a;
  for (int i = 1; i < n; ++i) out = Action::seq(out, a);
  return out;
}

int compare(const Action& a, const Action& b) {
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  if (a.kind() == Action::Kind::atom)
    return a.modality().compare(b.modality());
  if (int c = compare(a.left(), b.left())) return c;
  if (a.kind() == Action::Kind::star) return 0;
  return compare(a.right(), b.right());
}

int star_height(const Action& a) {
  switch (a.kind()) {
    case Action::Kind::atom: return 0;
    case Action::Kind::star: return 1 + star_height(a.left());
    default: return std::max(star_height(a.left()), star_height(a.right()));
  }
}

Sentence Sentence::wrap(Node n) {
  Sentence s;
  s.n_ = std::make_shared<const Node>(std::move(n));
  return s;
}

Sentence Sentence::nominal(std::string k) {
  Node n;
  n.kind = SenKind::nominal;
  n.label = std::move(k);
  return wrap(std::move(n));
}
Sentence Sentence::eq(Term l, Term r) {
  Node n;
  n.kind = SenKind::eq;
  n.lhs = std::move(l);
  n.rhs = std::move(r);
  return wrap(std::move(n));
}
Sentence Sentence::rel(SymName r, std::vector<Term> args) {
  Node n;
  n.kind = SenKind::rel;
  n.rel = std::move(r);
  n.args = std::move(args);
  return wrap(std::move(n));
}
Sentence Sentence::at(std::string k, Sentence g) {
  Node n;
  n.kind = SenKind::at;
  n.label = std::move(k);
  n.subs = {std::move(g)};
  return wrap(std::move(n));
}
Sentence Sentence::neg(Sentence g) {
  Node n;
  n.kind = SenKind::neg;
  n.subs = {std::move(g)};
  return wrap(std::move(n));
}
Sentence Sentence::disj(SentenceVec gs) {
  std::sort(gs.begin(), gs.end());
  gs.erase(std::unique(gs.begin(), gs.end()), gs.end());
  Node n;
  n.kind = SenKind::disj;
  n.subs = std::move(gs);
  return wrap(std::move(n));
}
Sentence Sentence::store(std::string z, Sentence g) {
  Node n;
  n.kind = SenKind::store;
  n.label = std::move(z);
  n.subs = {std::move(g)};
  return wrap(std::move(n));
}
Sentence Sentence::exists(std::vector<VarDecl> vars, Sentence g) {
  if (vars.empty()) return g;  // an empty prefix binds nothing
  Node n;
  n.kind = SenKind::exists;
  n.vars = std::move(vars);
  n.subs = {std::move(g)};
  return wrap(std::move(n));
}
Sentence Sentence::dia(Action a, Sentence g) {
  Node n;
  n.kind = SenKind::dia;
  n.act = std::move(a);
  n.subs = {std::move(g)};
  return wrap(std::move(n));
}

Sentence Sentence::conj(SentenceVec gs) {
  SentenceVec negs;
  negs.reserve(gs.size());
  for (auto& g : gs) negs.push_back(neg(std::move(g)));
  return neg(disj(std::move(negs)));
}
Sentence Sentence::implies(Sentence a, Sentence b) { return disj({neg(std::move(a)), std::move(b)}); }
Sentence Sentence::iff(Sentence a, Sentence b) {
  return conj({implies(a, b), implies(std::move(b), std::move(a))});
}
Sentence Sentence::forall(std::vector<VarDecl> vars, Sentence g) {
  if (vars.empty()) return g;
  return neg(exists(std::move(vars), neg(std::move(g))));
}
Sentence Sentence::box(Action a, Sentence g) { return neg(dia(std::move(a), neg(std::move(g)))); }

int compare(const Sentence& a, const Sentence& b) {
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  switch (a.kind()) {
    case SenKind::nominal:
      return a.label().compare(b.label());
    case SenKind::eq:
      if (int c = compare(a.lhs(), b.lhs())) return c;
      return compare(a.rhs(), b.rhs());
    case SenKind::rel: {
      if (a.rel_name() != b.rel_name()) return a.rel_name() < b.rel_name() ? -1 : 1;
      size_t n = std::min(a.args().size(), b.args().size());
      for (size_t i = 0; i < n; ++i)
        if (int c = compare(a.args()[i], b.args()[i])) return c;
      if (a.args().size() != b.args().size()) return a.args().size() < b.args().size() ? -1 : 1;
      return 0;
    }
    case SenKind::at:
      if (int c = a.label().compare(b.label())) return c;
      return compare(a.sub(), b.sub());
    case SenKind::neg:
      return compare(a.sub(), b.sub());
    case SenKind::disj: {
      size_t n = std::min(a.subs().size(), b.subs().size());
      for (size_t i = 0; i < n; ++i)
        if (int c = compare(a.subs()[i], b.subs()[i])) return c;
      if (a.subs().size() != b.subs().size()) return a.subs().size() < b.subs().size() ? -1 : 1;
      return 0;
    }
    case SenKind::store:
      if (int c = a.label().compare(b.label())) return c;
      return compare(a.sub(), b.sub());
    case SenKind::exists: {
      if (a.vars() != b.vars()) return a.vars() < b.vars() ? -1 : 1;
      return compare(a.sub(), b.sub());
    }
    case SenKind::dia:
      if (int c = compare(a.action(), b.action())) return c;
      return compare(a.sub(), b.sub());
  }
  return 0;
}

// ---- canonical text ---------------------------------------------------------

std::string print_term(const Term& t) {
  std::string head = t.op().pinned() ? "(at " + t.op().at + " " + t.op().base + ")" : t.op().base;
  if (t.args().empty()) return head;
  std::string s = head + "(";
  for (size_t i = 0; i < t.args().size(); ++i) {
    if (i) s += ", ";
    s += print_term(t.args()[i]);
  }
  return s + ")";
}

namespace {

// precedence: alt < seq < star/atom
std::string print_action_prec(const Action& a, int ctx) {
  std::string s;
  int prec;
  switch (a.kind()) {
    case Action::Kind::atom:
      return a.modality();
    case Action::Kind::star: {
      std::string inner = print_action_prec(a.left(), 2);
      if (a.left().kind() != Action::Kind::atom && a.left().kind() != Action::Kind::star)
        inner = "(" + inner + ")";
      return inner + "*";
    }
    case Action::Kind::seq:
      s = print_action_prec(a.left(), 1) + " ; " + print_action_prec(a.right(), 2);
      prec = 1;
      break;
    case Action::Kind::alt:
      s = print_action_prec(a.left(), 0) + " + " + print_action_prec(a.right(), 1);
      prec = 0;
      break;
    default:
      return "?";
  }
  if (prec < ctx) s = "(" + s + ")";
  return s;
}

}  // namespace

std::string print_action(const Action& a) { return print_action_prec(a, 0); }

std::string print_sentence(const Sentence& g) {
  switch (g.kind()) {
    case SenKind::nominal:
      return g.label();
    case SenKind::eq:
      return print_term(g.lhs()) + " = " + print_term(g.rhs());
    case SenKind::rel: {
      std::string head = g.rel_name().pinned()
                             ? "(at " + g.rel_name().at + " " + g.rel_name().base + ")"
                             : g.rel_name().base;
      if (g.args().empty()) return head;
      std::string s = head + "(";
      for (size_t i = 0; i < g.args().size(); ++i) {
        if (i) s += ", ";
        s += print_term(g.args()[i]);
      }
      return s + ")";
    }
    case SenKind::at:
      return "@ " + g.label() + " " + print_sentence(g.sub());
    case SenKind::neg:
      return "not " + print_sentence(g.sub());
    case SenKind::disj: {
      if (g.subs().empty()) return "false";
      std::string s = "(or";
      for (const auto& m : g.subs()) s += " " + print_sentence(m);
      return s + ")";
    }
    case SenKind::store:
      return "store " + g.label() + " . " + print_sentence(g.sub());
    case SenKind::exists: {
      std::string s = "exists ";
      for (size_t i = 0; i < g.vars().size(); ++i) {
        if (i) s += ", ";
        s += g.vars()[i].name + ":" + g.vars()[i].sort.base;
      }
      return s + " . " + print_sentence(g.sub());
    }
    case SenKind::dia:
      return "<" + print_action(g.action()) + "> " + print_sentence(g.sub());
  }
  return "?";
}

// ---- well-sortedness --------------------------------------------------------

namespace {

// Expected argument sorts of a (possibly pinned) op/rel profile.
std::vector<SymName> pinned_arity(const HDSignature& sig, const std::vector<SymName>& arity,
                                  const std::string& at) {
  std::vector<SymName> out;
  out.reserve(arity.size());
  for (const auto& a : arity) out.push_back(at.empty() ? a : sig.pin_sort(a, at));
  return out;
}

}  // namespace

SymName sort_of(const HDSignature& sig, const Term& t) {
  if (t.null()) throw InputError("null term");
  const SymName& op = t.op();
  if (op.pinned()) {
    if (!sig.is_nominal(op.at))
      throw InputError("term pins op '" + op.base + "' at unknown nominal '" + op.at + "'");
  }
  auto it = sig.body.ops.find(SymName(op.base));
  if (it == sig.body.ops.end()) throw InputError("unknown op '" + op.base + "' in term");
  std::vector<SymName> arg_sorts;
  arg_sorts.reserve(t.args().size());
  for (const auto& a : t.args()) arg_sorts.push_back(sort_of(sig, a));
  const OpProfile* found = nullptr;
  for (const auto& p : it->second) {
    if (p.arity.size() != arg_sorts.size()) continue;
    if (op.pinned() && sig.is_rigid_op(SymName(op.base), p))
      throw InputError("op '" + op.base + "' is rigid; pinning it is redundant and rejected");
    if (pinned_arity(sig, p.arity, op.at) != arg_sorts) continue;
    if (found) throw InputError("ambiguous op '" + op.base + "' in term");
    found = &p;
  }
  if (!found) throw InputError("no profile of op '" + op.base + "' matches its arguments");
  return op.pinned() ? sig.pin_sort(found->result, op.at) : found->result;
}

namespace {

void check_action(const HDSignature& sig, const Action& a) {
  if (a.null()) throw InputError("null action");
  switch (a.kind()) {
    case Action::Kind::atom:
      if (!sig.is_modality(a.modality()))
        throw InputError("unknown modality '" + a.modality() + "'");
      return;
    case Action::Kind::star:
      check_action(sig, a.left());
      return;
    default:
      check_action(sig, a.left());
      check_action(sig, a.right());
  }
}

void check_rec(const HDSignature& sig, const Sentence& g) {
  if (g.null()) throw InputError("null sentence");
  switch (g.kind()) {
    case SenKind::nominal:
      if (!sig.is_nominal(g.label())) throw InputError("unknown nominal '" + g.label() + "'");
      return;
    case SenKind::eq: {
      SymName ls = sort_of(sig, g.lhs());
      SymName rs = sort_of(sig, g.rhs());
      if (ls != rs)
        throw InputError("equation sides have different sorts " + to_string(ls) + " vs " +
                         to_string(rs));
      if (!sig.is_hybrid_sort(ls)) throw InputError("equation at non-hybrid sort " + to_string(ls));
      return;
    }
    case SenKind::rel: {
      const SymName& r = g.rel_name();
      if (r.pinned() && !sig.is_nominal(r.at))
        throw InputError("relation pinned at unknown nominal '" + r.at + "'");
      auto it = sig.body.rels.find(SymName(r.base));
      if (it == sig.body.rels.end()) throw InputError("unknown relation '" + r.base + "'");
      std::vector<SymName> arg_sorts;
      for (const auto& a : g.args()) arg_sorts.push_back(sort_of(sig, a));
      bool found = false;
      for (const auto& p : it->second) {
        if (p.arity.size() != arg_sorts.size()) continue;
        if (r.pinned() && sig.is_rigid_rel(SymName(r.base), p))
          throw InputError("relation '" + r.base + "' is rigid; pinning it is rejected");
        if (pinned_arity(sig, p.arity, r.at) == arg_sorts) {
          found = true;
          break;
        }
      }
      if (!found) throw InputError("no profile of relation '" + r.base + "' matches its arguments");
      return;
    }
    case SenKind::at:
      if (!sig.is_nominal(g.label()))
        throw InputError("retrieve at unknown nominal '" + g.label() + "'");
      check_rec(sig, g.sub());
      return;
    case SenKind::neg:
      check_rec(sig, g.sub());
      return;
    case SenKind::disj:
      for (const auto& m : g.subs()) check_rec(sig, m);
      return;
    case SenKind::store:
      check_rec(extend(sig, {{g.label(), SymName(kAny)}}), g.sub());
      return;
    case SenKind::exists:
      check_rec(extend(sig, g.vars()), g.sub());
      return;
    case SenKind::dia:
      check_action(sig, g.action());
      check_rec(sig, g.sub());
      return;
  }
}

}  // namespace

void check_sentence(const HDSignature& sig, const Sentence& g) { check_rec(sig, g); }

// ---- translation ------------------------------------------------------------

namespace {

struct Translator {
  const SignatureMorphism& m;

  Term term(const HDSignature& src, const std::set<std::string>& bound, const Term& t) const {
    const SymName& op = t.op();
    if (!op.pinned() && t.args().empty() && bound.count(op.base)) return t;  // variable
    std::vector<Term> args;
    std::vector<SymName> arg_sorts;
    for (const auto& a : t.args()) {
      args.push_back(term(src, bound, a));
      arg_sorts.push_back(sort_of(src, a));
    }
    // Resolve the declared (unpinned) profile in the source.
    auto it = src.body.ops.find(SymName(op.base));
    if (it == src.body.ops.end()) throw InputError("translate: unknown op '" + op.base + "'");
    const OpProfile* prof = nullptr;
    for (const auto& p : it->second)
      if (p.arity.size() == arg_sorts.size() &&
          pinned_arity(src, p.arity, op.at) == arg_sorts) {
        prof = &p;
        break;
      }
    if (!prof) throw InputError("translate: unresolvable op '" + op.base + "'");
    SymName image = op.pinned() && bound.count(op.at)
                        ? SymName(m.map_op(SymName(op.base), *prof).base, op.at)
                        : m.map_op(op, *prof);
    return Term::make(image, std::move(args));
  }

  Action action(const Action& a) const {
    switch (a.kind()) {
      case Action::Kind::atom: return Action::atom(m.map_modality(a.modality()));
      case Action::Kind::seq: return Action::seq(action(a.left()), action(a.right()));
      case Action::Kind::alt: return Action::alt(action(a.left()), action(a.right()));
      case Action::Kind::star: return Action::star(action(a.left()));
    }
    throw InputError("translate: null action");
  }

  std::string nominal(const std::set<std::string>& bound, const std::string& k) const {
    return bound.count(k) ? k : m.map_nominal(k);
  }

  Sentence sentence(const HDSignature& src, std::set<std::string> bound, const Sentence& g) const {
    switch (g.kind()) {
      case SenKind::nominal:
        return Sentence::nominal(nominal(bound, g.label()));
      case SenKind::eq:
        return Sentence::eq(term(src, bound, g.lhs()), term(src, bound, g.rhs()));
      case SenKind::rel: {
        const SymName& r = g.rel_name();
        std::vector<Term> args;
        std::vector<SymName> arg_sorts;
        for (const auto& a : g.args()) {
          args.push_back(term(src, bound, a));
          arg_sorts.push_back(sort_of(src, a));
        }
        auto it = src.body.rels.find(SymName(r.base));
        if (it == src.body.rels.end())
          throw InputError("translate: unknown relation '" + r.base + "'");
        const RelProfile* prof = nullptr;
        for (const auto& p : it->second)
          if (p.arity.size() == arg_sorts.size() &&
              pinned_arity(src, p.arity, r.at) == arg_sorts) {
            prof = &p;
            break;
          }
        if (!prof) throw InputError("translate: unresolvable relation '" + r.base + "'");
        SymName image = r.pinned() && bound.count(r.at)
                            ? SymName(m.map_rel(SymName(r.base), *prof).base, r.at)
                            : m.map_rel(r, *prof);
        return Sentence::rel(image, std::move(args));
      }
      case SenKind::at:
        return Sentence::at(nominal(bound, g.label()), sentence(src, bound, g.sub()));
      case SenKind::neg:
        return Sentence::neg(sentence(src, bound, g.sub()));
      case SenKind::disj: {
        SentenceVec subs;
        for (const auto& s : g.subs()) subs.push_back(sentence(src, bound, s));
        return Sentence::disj(std::move(subs));
      }
      case SenKind::store: {
        auto b2 = bound;
        b2.insert(g.label());
        return Sentence::store(g.label(),
                               sentence(extend(src, {{g.label(), SymName(kAny)}}), b2, g.sub()));
      }
      case SenKind::exists: {
        std::vector<VarDecl> vars2;
        auto b2 = bound;
        for (const auto& v : g.vars()) {
          vars2.push_back({v.name, m.map_sort(v.sort)});
          b2.insert(v.name);
        }
        return Sentence::exists(std::move(vars2), sentence(extend(src, g.vars()), b2, g.sub()));
      }
      case SenKind::dia:
        return Sentence::dia(action(g.action()), sentence(src, bound, g.sub()));
    }
    throw InputError("translate: null sentence");
  }
};

}  // namespace

Term translate(const SignatureMorphism& m, const Term& t) {
  return Translator{m}.term(m.source, {}, t);
}
Action translate(const SignatureMorphism& m, const Action& a) { return Translator{m}.action(a); }
Sentence translate(const SignatureMorphism& m, const Sentence& g) {
  return Translator{m}.sentence(m.source, {}, g);
}

// ---- substitution -----------------------------------------------------------

void check_substitution(const HDSignature& sig_c2, const std::vector<VarDecl>& domain,
                        const Substitution& s) {
  for (const auto& v : domain) {
    if (v.sort == SymName(kAny)) {
      auto it = s.nominal_map.find(v.name);
      if (it == s.nominal_map.end())
        throw InputError("substitution misses any-sorted constant '" + v.name + "'");
      if (!sig_c2.is_nominal(it->second))
        throw InputError("substitution sends '" + v.name + "' to non-nominal '" + it->second +
                         "'");
    } else {
      auto it = s.term_map.find(v.name);
      if (it == s.term_map.end())
        throw InputError("substitution misses constant '" + v.name + "'");
      SymName got = sort_of(sig_c2, it->second);
      if (got != v.sort)
        throw InputError("substitution sends '" + v.name + "' to a term of sort " +
                         to_string(got) + ", expected " + to_string(v.sort));
    }
  }
}

namespace {

struct Subst {
  const Substitution& s;

  std::string nominal(const std::set<std::string>& shadow, const std::string& k) const {
    if (shadow.count(k)) return k;
    auto it = s.nominal_map.find(k);
    return it == s.nominal_map.end() ? k : it->second;
  }

  Term term(const std::set<std::string>& shadow, const Term& t) const {
    const SymName& op = t.op();
    if (!op.pinned() && t.args().empty() && !shadow.count(op.base)) {
      auto it = s.term_map.find(op.base);
      if (it != s.term_map.end()) return it->second;
      auto in = s.nominal_map.find(op.base);
      // An any-sorted constant can also occur as a pin base only; as a term
      // position it never does, so nominal images do not apply here.
      (void)in;
    }
    std::vector<Term> args;
    for (const auto& a : t.args()) args.push_back(term(shadow, a));
    SymName op2 = op;
    if (op.pinned()) op2.at = nominal(shadow, op.at);
    return Term::make(std::move(op2), std::move(args));
  }

  Sentence sentence(std::set<std::string> shadow, const Sentence& g) const {
    switch (g.kind()) {
      case SenKind::nominal:
        return Sentence::nominal(nominal(shadow, g.label()));
      case SenKind::eq:
        return Sentence::eq(term(shadow, g.lhs()), term(shadow, g.rhs()));
      case SenKind::rel: {
        SymName r = g.rel_name();
        if (r.pinned()) r.at = nominal(shadow, r.at);
        std::vector<Term> args;
        for (const auto& a : g.args()) args.push_back(term(shadow, a));
        return Sentence::rel(std::move(r), std::move(args));
      }
      case SenKind::at:
        return Sentence::at(nominal(shadow, g.label()), sentence(shadow, g.sub()));
      case SenKind::neg:
        return Sentence::neg(sentence(shadow, g.sub()));
      case SenKind::disj: {
        SentenceVec subs;
        for (const auto& m : g.subs()) subs.push_back(sentence(shadow, m));
        return Sentence::disj(std::move(subs));
      }
      case SenKind::store: {
        shadow.insert(g.label());
        return Sentence::store(g.label(), sentence(shadow, g.sub()));
      }
      case SenKind::exists: {
        for (const auto& v : g.vars()) shadow.insert(v.name);
        return Sentence::exists(g.vars(), sentence(shadow, g.sub()));
      }
      case SenKind::dia:
        return Sentence::dia(g.action(), sentence(shadow, g.sub()));
    }
    throw InputError("substitute: null sentence");
  }
};

}  // namespace

Term substitute(const Substitution& s, const Term& t) { return Subst{s}.term({}, t); }
Action substitute(const Substitution&, const Action& a) { return a; }
Sentence substitute(const Substitution& s, const Sentence& g) { return Subst{s}.sentence({}, g); }

Sentence rename_nominal(const Sentence& g, const std::string& from, const std::string& to) {
  Substitution s;
  s.nominal_map[from] = to;
  return substitute(s, g);
}

Substitution compose(const Substitution& s1, const Substitution& s2) {
  Substitution out;
  for (const auto& [c, k] : s1.nominal_map) {
    auto it = s2.nominal_map.find(k);
    out.nominal_map[c] = it == s2.nominal_map.end() ? k : it->second;
  }
  for (const auto& [c, t] : s1.term_map) out.term_map[c] = substitute(s2, t);
  for (const auto& [c, k] : s2.nominal_map)
    if (!s1.nominal_map.count(c) && !s1.term_map.count(c)) out.nominal_map[c] = k;
  for (const auto& [c, t] : s2.term_map)
    if (!s1.nominal_map.count(c) && !s1.term_map.count(c)) out.term_map[c] = t;
  return out;
}

// ---- rigidification ---------------------------------------------------------

Term rigidify(const HDSignature& sig, const Term& t, const std::string& k) {
  std::vector<Term> args;
  for (const auto& a : t.args()) args.push_back(rigidify(sig, a, k));
  const SymName& op = t.op();
  if (op.pinned()) return Term::make(op, std::move(args));
  // Classify by resolving the profile: a symbol is flexible iff its resolved
  // profile is not in the rigid part.
  auto it = sig.body.ops.find(SymName(op.base));
  if (it == sig.body.ops.end()) throw InputError("rigidify: unknown op '" + op.base + "'");
  std::vector<SymName> arg_sorts;
  for (const auto& a : t.args()) arg_sorts.push_back(sort_of(sig, a));
  for (const auto& p : it->second) {
    if (p.arity.size() != arg_sorts.size()) continue;
    std::vector<SymName> unpinned(p.arity.begin(), p.arity.end());
    if (unpinned != arg_sorts) continue;
    if (sig.is_rigid_op(SymName(op.base), p)) return Term::make(op, std::move(args));
    return Term::make(SymName(op.base, k), std::move(args));
  }
  throw InputError("rigidify: unresolvable op '" + op.base + "'");
}

namespace {

Sentence rigidify_rec(const HDSignature& sig, const Sentence& g, const std::string& k) {
  switch (g.kind()) {
    case SenKind::nominal:
      return Sentence::at(k, g);
    case SenKind::eq:
      return Sentence::eq(rigidify(sig, g.lhs(), k), rigidify(sig, g.rhs(), k));
    case SenKind::rel: {
      std::vector<Term> args;
      for (const auto& a : g.args()) args.push_back(rigidify(sig, a, k));
      const SymName& r = g.rel_name();
      if (r.pinned()) return Sentence::rel(r, std::move(args));
      std::vector<SymName> arg_sorts;
      for (const auto& a : g.args()) arg_sorts.push_back(sort_of(sig, a));
      auto it = sig.body.rels.find(SymName(r.base));
      if (it == sig.body.rels.end()) throw InputError("rigidify: unknown relation '" + r.base + "'");
      for (const auto& p : it->second) {
        if (p.arity != arg_sorts) continue;
        if (sig.is_rigid_rel(SymName(r.base), p)) return Sentence::rel(r, std::move(args));
        return Sentence::rel(SymName(r.base, k), std::move(args));
      }
      throw InputError("rigidify: unresolvable relation '" + r.base + "'");
    }
    case SenKind::at:
      return rigidify_rec(sig, g.sub(), g.label());
    case SenKind::neg:
      return Sentence::neg(rigidify_rec(sig, g.sub(), k));
    case SenKind::disj: {
      SentenceVec subs;
      for (const auto& m : g.subs()) subs.push_back(rigidify_rec(sig, m, k));
      return Sentence::disj(std::move(subs));
    }
    case SenKind::exists:
      return Sentence::exists(g.vars(), rigidify_rec(extend(sig, g.vars()), g.sub(), k));
    case SenKind::dia:
      // The one possibility shape with its own clause: an atomic action applied
      // to a nominal sentence is an extended atom and is simply retrieved at k.
      if (g.action().kind() == Action::Kind::atom && g.sub().kind() == SenKind::nominal)
        return Sentence::at(k, g);
      throw InputError("unsupported construct under rigidification: possibility");
    case SenKind::store:
      throw InputError("unsupported construct under rigidification: store");
  }
  throw InputError("rigidify: null sentence");
}

}  // namespace

Sentence rigidify(const HDSignature& sig, const Sentence& g, const std::string& k) {
  return rigidify_rec(sig, g, k);
}

// ---- fragments ----------------------------------------------------------------

namespace {

bool action_is_atom(const Action& a) { return a.kind() == Action::Kind::atom; }

bool term_unpinned(const Term& t) {
  if (t.op().pinned()) return false;
  for (const auto& a : t.args())
    if (!term_unpinned(a)) return false;
  return true;
}

bool member_rec(Fragment f, const Sentence& g) {
  switch (g.kind()) {
    case SenKind::nominal:
      return true;
    case SenKind::eq:
      if (f == Fragment::propositional) return false;
      if (f == Fragment::open_atoms)
        return term_unpinned(g.lhs()) && term_unpinned(g.rhs());
      return true;
    case SenKind::rel: {
      if (f == Fragment::propositional) return g.args().empty() && !g.rel_name().pinned();
      if (f == Fragment::open_atoms) {
        if (g.rel_name().pinned()) return false;
        for (const auto& a : g.args())
          if (!term_unpinned(a)) return false;
      }
      return true;
    }
    case SenKind::at:
    case SenKind::neg:
      return member_rec(f, g.sub());
    case SenKind::disj:
      for (const auto& m : g.subs())
        if (!member_rec(f, m)) return false;
      return true;
    case SenKind::store:
      if (f == Fragment::propositional) return false;
      return member_rec(f, g.sub());
    case SenKind::exists:
      if (f == Fragment::propositional) return false;
      return member_rec(f, g.sub());
    case SenKind::dia:
      if (f != Fragment::full && f != Fragment::propositional && !action_is_atom(g.action()))
        return false;
      return member_rec(f, g.sub());
  }
  return false;
}

}  // namespace

Fragment fragment_from_name(const std::string& name) {
  if (name == "HDFOLR" || name == "full") return Fragment::full;
  if (name == "HFOLR" || name == "action-free") return Fragment::action_free;
  if (name == "HDPL" || name == "propositional") return Fragment::propositional;
  if (name == "RFOHL" || name == "rigid-single") return Fragment::rigid_single;
  if (name == "HFOLS" || name == "open-atoms") return Fragment::open_atoms;
  throw InputError("unknown fragment '" + name + "'");
}

std::string to_string(Fragment f) {
  switch (f) {
    case Fragment::full: return "HDFOLR";
    case Fragment::action_free: return "HFOLR";
    case Fragment::propositional: return "HDPL";
    case Fragment::rigid_single: return "RFOHL";
    case Fragment::open_atoms: return "HFOLS";
  }
  return "?";
}

bool fragment_member(Fragment f, const HDSignature& sig, const Sentence& g) {
  switch (f) {
    case Fragment::full:
    case Fragment::action_free:
    case Fragment::open_atoms:
      break;
    case Fragment::propositional:
      if (!sig.body.sorts.empty()) return false;
      break;
    case Fragment::rigid_single:
      if (sig.modalities().size() != 1 || sig.body.sorts.size() != 1 ||
          !sig.rigid.ops.empty() || !sig.rigid.rels.empty())
        return false;
      break;
  }
  return member_rec(f, g);
}

// ---- until -------------------------------------------------------------------

Sentence desugar_until(const HDSignature& sig, const std::string& modality, const Sentence& phi,
                       const Sentence& psi) {
  if (!sig.is_modality(modality)) throw InputError("until: unknown modality '" + modality + "'");
  std::set<std::string> taken;
  collect_names(phi, taken);
  collect_names(psi, taken);
  for (const auto& k : sig.nominals()) taken.insert(k);
  for (const auto& m : sig.modalities()) taken.insert(m);
  for (const auto& s : sig.body.sorts) taken.insert(s.base);
  for (const auto& [n, _] : sig.body.ops) taken.insert(n.base);
  for (const auto& [n, _] : sig.body.rels) taken.insert(n.base);
  std::string x = fresh_name("x", taken);
  taken.insert(x);
  std::string y = fresh_name("y", taken);

  Action step = Action::atom(modality);
  // store x . <m> store y . (phi  and  @ x [m](<m> y  implies  psi))
  Sentence guard = Sentence::at(
      x, Sentence::box(step, Sentence::implies(Sentence::dia(step, Sentence::nominal(y)), psi)));
  return Sentence::store(
      x, Sentence::dia(step, Sentence::store(y, Sentence::conj({phi, guard}))));
}

// ---- subsentences -------------------------------------------------------------

bool operator<(const ScopedSentence& a, const ScopedSentence& b) {
  if (a.context != b.context) return a.context < b.context;
  return compare(a.sentence, b.sentence) < 0;
}
bool operator==(const ScopedSentence& a, const ScopedSentence& b) {
  return a.context == b.context && compare(a.sentence, b.sentence) == 0;
}

std::vector<ScopedSentence> subsentences(const Sentence& g, int star_bound) {
  std::set<ScopedSentence> seen;
  std::vector<ScopedSentence> queue{{{}, g}};
  seen.insert(queue[0]);
  auto push = [&](std::vector<VarDecl> ctx, Sentence s) {
    ScopedSentence sc{std::move(ctx), std::move(s)};
    if (seen.insert(sc).second) queue.push_back(std::move(sc));
  };
  for (size_t i = 0; i < queue.size(); ++i) {
    ScopedSentence cur = queue[i];
    const Sentence& s = cur.sentence;
    switch (s.kind()) {
      case SenKind::nominal:
      case SenKind::eq:
      case SenKind::rel:
        break;
      case SenKind::at:
      case SenKind::neg:
        push(cur.context, s.sub());
        break;
      case SenKind::disj:
        for (const auto& m : s.subs()) push(cur.context, m);
        break;
      case SenKind::store: {
        auto ctx = cur.context;
        ctx.push_back({s.label(), SymName(kAny)});
        push(std::move(ctx), s.sub());
        break;
      }
      case SenKind::exists: {
        auto ctx = cur.context;
        for (const auto& v : s.vars()) ctx.push_back(v);
        push(std::move(ctx), s.sub());
        break;
      }
      case SenKind::dia: {
        push(cur.context, s.sub());
        const Action& a = s.action();
        switch (a.kind()) {
          case Action::Kind::seq:
          case Action::Kind::alt:
            push(cur.context, Sentence::dia(a.left(), s.sub()));
            push(cur.context, Sentence::dia(a.right(), s.sub()));
            break;
          case Action::Kind::star:
            for (int n = 1; n <= star_bound; ++n)
              push(cur.context, Sentence::dia(Action::power(a.left(), n), s.sub()));
            break;
          case Action::Kind::atom:
            break;
        }
        break;
      }
    }
  }
  std::vector<ScopedSentence> out(seen.begin(), seen.end());
  return out;
}

// ---- term enumeration ----------------------------------------------------------

std::map<SymName, std::vector<Term>> ground_rigid_universe(const HDSignature& sig,
                                                           int max_depth) {
  RigidifiedSignature rs = rigidify_signature(sig);
  std::map<SymName, std::vector<Term>> have;          // per sort, ordered as discovered
  std::map<SymName, std::set<Term, std::less<>>> had; // dedup

  for (int d = 1; d <= max_depth; ++d) {
    std::map<SymName, std::vector<Term>> fresh;
    for (const auto& [name, profs] : rs.at_sig.ops)
      for (const auto& p : profs) {
        if (d == 1 && !p.arity.empty()) continue;
        if (d > 1 && p.arity.empty()) continue;
        // All argument tuples over terms discovered so far.
        std::vector<std::vector<Term>*> pools;
        bool ok = true;
        for (const auto& a : p.arity) {
          auto it = have.find(a);
          if (it == have.end() || it->second.empty()) {
            ok = false;
            break;
          }
          pools.push_back(&it->second);
        }
        if (!ok) continue;
        std::vector<size_t> idx(pools.size(), 0);
        while (true) {
          std::vector<Term> args;
          for (size_t i = 0; i < pools.size(); ++i) args.push_back((*pools[i])[idx[i]]);
          Term t = Term::make(name, std::move(args));
          if (had[p.result].insert(t).second) fresh[p.result].push_back(t);
          // advance odometer
          size_t i = 0;
          for (; i < idx.size(); ++i) {
            if (++idx[i] < pools[i]->size()) break;
            idx[i] = 0;
          }
          if (i == idx.size()) break;
        }
      }
    for (auto& [srt, ts] : fresh) {
      std::sort(ts.begin(), ts.end());
      for (auto& t : ts) have[srt].push_back(t);
    }
    if (fresh.empty()) break;  // saturated early
  }
  return have;
}

std::vector<Term> ground_rigid_terms(const HDSignature& sig, const SymName& sort, int max_depth) {
  auto uni = ground_rigid_universe(sig, max_depth);
  auto it = uni.find(sort);
  return it == uni.end() ? std::vector<Term>{} : std::move(it->second);
}

std::vector<OpenTerm> constructor_terms(const HDSignature& sig, const ConstructorPartition& part,
                                        const SymName& sort, int max_depth,
                                        int max_vars_per_sort) {
  // Variables range over loose rigid sorts only (variables must be rigid).
  std::map<SymName, std::vector<Term>> have;
  std::map<SymName, std::set<Term, std::less<>>> had;
  std::map<Term, std::vector<VarDecl>> var_sets;
  std::vector<std::pair<int, Term>> result;

  auto note = [&](const SymName& srt, const Term& t, std::vector<VarDecl> vars, int d) {
    if (!had[srt].insert(t).second) return;
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    var_sets[t] = std::move(vars);
    have[srt].push_back(t);
    if (srt == sort) result.push_back({d, t});
  };

  for (const auto& ls : part.loose)
    if (sig.is_rigid_sort(ls))
      for (int i = 0; i < max_vars_per_sort; ++i) {
        std::string v = part.loose_var(ls, i);
        note(ls, Term::make(SymName(v), {}), {{v, ls}}, 1);
      }

  for (int d = 1; d <= max_depth; ++d) {
    std::vector<std::tuple<SymName, Term, std::vector<VarDecl>>> fresh;
    for (const auto& [name, profs] : part.constructors.ops)
      for (const auto& p : profs) {
        if (d == 1 && !p.arity.empty()) continue;
        if (d > 1 && p.arity.empty()) continue;
        if (p.arity.empty()) {
          fresh.push_back({p.result, Term::make(name, {}), {}});
          continue;
        }
        std::vector<std::vector<Term>*> pools;
        bool ok = true;
        for (const auto& a : p.arity) {
          auto it = have.find(a);
          if (it == have.end() || it->second.empty()) {
            ok = false;
            break;
          }
          pools.push_back(&it->second);
        }
        if (!ok) continue;
        std::vector<size_t> idx(pools.size(), 0);
        while (true) {
          std::vector<Term> args;
          std::vector<VarDecl> vars;
          for (size_t i = 0; i < pools.size(); ++i) {
            const Term& arg = (*pools[i])[idx[i]];
            args.push_back(arg);
            for (const auto& v : var_sets[arg]) vars.push_back(v);
          }
          fresh.push_back({p.result, Term::make(name, std::move(args)), std::move(vars)});
          size_t i = 0;
          for (; i < idx.size(); ++i) {
            if (++idx[i] < pools[i]->size()) break;
            idx[i] = 0;
          }
          if (i == idx.size()) break;
        }
      }
    bool any = false;
    std::sort(fresh.begin(), fresh.end(), [](const auto& a, const auto& b) {
      if (!(std::get<0>(a) == std::get<0>(b))) return std::get<0>(a) < std::get<0>(b);
      return std::get<1>(a) < std::get<1>(b);
    });
    for (auto& [srt, t, vars] : fresh) {
      size_t before = have[srt].size();
      note(srt, t, vars, d);
      any = any || have[srt].size() != before;
    }
    if (!any && d > 1) break;
  }
  std::stable_sort(result.begin(), result.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  // Variable names are interchangeable: rename each term's variables in
  // first-occurrence order to the lowest pool indices and keep one term per
  // renaming class.
  std::vector<OpenTerm> out;
  std::set<Term> seen;
  for (auto& [_, t] : result) {
    std::map<std::string, SymName> sort_of;
    for (const auto& v : var_sets[t]) sort_of[v.name] = v.sort;
    std::map<std::string, std::string> renamed;
    std::map<SymName, int> counter;
    std::vector<VarDecl> canon_vars;
    std::function<Term(const Term&)> canon = [&](const Term& u) -> Term {
      auto vs = sort_of.find(u.op().base);
      if (vs != sort_of.end() && u.args().empty() && !u.op().pinned()) {
        auto [it, fresh] = renamed.try_emplace(u.op().base);
        if (fresh) {
          it->second = part.loose_var(vs->second, counter[vs->second]++);
          canon_vars.push_back({it->second, vs->second});
        }
        return Term::make(SymName(it->second), {});
      }
      std::vector<Term> args;
      for (const auto& a : u.args()) args.push_back(canon(a));
      return Term::make(u.op(), std::move(args));
    };
    Term ct = canon(t);
    if (seen.insert(ct).second) out.push_back({ct, std::move(canon_vars)});
  }
  return out;
}

// ---- name collection -----------------------------------------------------------

void collect_nominals(const Term& t, std::set<std::string>& out) {
  if (t.op().pinned()) out.insert(t.op().at);
  for (const auto& a : t.args()) collect_nominals(a, out);
}

void collect_nominals(const Sentence& g, std::set<std::string>& out) {
  switch (g.kind()) {
    case SenKind::nominal:
      out.insert(g.label());
      return;
    case SenKind::eq:
      collect_nominals(g.lhs(), out);
      collect_nominals(g.rhs(), out);
      return;
    case SenKind::rel:
      if (g.rel_name().pinned()) out.insert(g.rel_name().at);
      for (const auto& a : g.args()) collect_nominals(a, out);
      return;
    case SenKind::at:
      out.insert(g.label());
      collect_nominals(g.sub(), out);
      return;
    case SenKind::neg:
      collect_nominals(g.sub(), out);
      return;
    case SenKind::disj:
      for (const auto& m : g.subs()) collect_nominals(m, out);
      return;
    case SenKind::store:
      out.insert(g.label());
      collect_nominals(g.sub(), out);
      return;
    case SenKind::exists:
      for (const auto& v : g.vars())
        if (v.sort == SymName(kAny)) out.insert(v.name);
      collect_nominals(g.sub(), out);
      return;
    case SenKind::dia:
      collect_nominals(g.sub(), out);
      return;
  }
}

namespace {

void collect_names_term(const Term& t, std::set<std::string>& out) {
  out.insert(t.op().base);
  if (t.op().pinned()) out.insert(t.op().at);
  for (const auto& a : t.args()) collect_names_term(a, out);
}

void collect_names_action(const Action& a, std::set<std::string>& out) {
  if (a.kind() == Action::Kind::atom) {
    out.insert(a.modality());
    return;
  }
  collect_names_action(a.left(), out);
  if (a.kind() != Action::Kind::star) collect_names_action(a.right(), out);
}

}  // namespace

void collect_names(const Sentence& g, std::set<std::string>& out) {
  switch (g.kind()) {
    case SenKind::nominal:
      out.insert(g.label());
      return;
    case SenKind::eq:
      collect_names_term(g.lhs(), out);
      collect_names_term(g.rhs(), out);
      return;
    case SenKind::rel:
      out.insert(g.rel_name().base);
      if (g.rel_name().pinned()) out.insert(g.rel_name().at);
      for (const auto& a : g.args()) collect_names_term(a, out);
      return;
    case SenKind::at:
    case SenKind::store:
      out.insert(g.label());
      collect_names(g.sub(), out);
      return;
    case SenKind::neg:
      collect_names(g.sub(), out);
      return;
    case SenKind::disj:
      for (const auto& m : g.subs()) collect_names(m, out);
      return;
    case SenKind::exists:
      for (const auto& v : g.vars()) out.insert(v.name);
      collect_names(g.sub(), out);
      return;
    case SenKind::dia:
      collect_names_action(g.action(), out);
      collect_names(g.sub(), out);
      return;
  }
}

std::string fresh_name(const std::string& base, const std::set<std::string>& taken) {
  if (!taken.count(base)) return base;
  for (int i = 1;; ++i) {
    std::string cand = base + std::to_string(i);
    if (!taken.count(cand)) return cand;
  }
}

}  // namespace hdfol
