#include "hdfol/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace hdfol {

namespace {

// ---- lexer -----------------------------------------------------------------

struct Tok {
  enum Kind : uint8_t { name, punct, end };
  Kind kind = end;
  std::string s;
  int line = 1, col = 1;
};

bool name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

struct Lexer {
  const std::string& text;
  std::size_t pos = 0;
  int line = 1, col = 1;
  Tok cur;

  explicit Lexer(const std::string& t, int start_line = 1) : text(t), line(start_line) {
    advance();
  }

  void bump(char c) {
    ++pos;
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }

  void advance() {
    while (pos < text.size()) {
      char c = text[pos];
      if (c == '#') {  // comment to end of line
        while (pos < text.size() && text[pos] != '\n') bump(text[pos]);
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        bump(c);
        continue;
      }
      break;
    }
    cur = Tok{Tok::end, "", line, col};
    if (pos >= text.size()) return;
    char c = text[pos];
    if (name_char(c) && c != '-') {
      std::string s;
      while (pos < text.size() && name_char(text[pos])) {
        s += text[pos];
        bump(text[pos]);
      }
      cur = Tok{Tok::name, std::move(s), cur.line, cur.col};
      return;
    }
    if (c == '-') {  // only '->' is legal
      bump(c);
      if (pos < text.size() && text[pos] == '>') {
        bump('>');
        cur = Tok{Tok::punct, "->", cur.line, cur.col};
        return;
      }
      throw InputError("stray '-'", cur.line, cur.col);
    }
    static const std::string punct = "()<>@.,:;+*=[]";
    if (punct.find(c) != std::string::npos) {
      bump(c);
      cur = Tok{Tok::punct, std::string(1, c), cur.line, cur.col};
      return;
    }
    throw InputError(std::string("unexpected character '") + c + "'", cur.line, cur.col);
  }

  bool at(const std::string& s) const { return cur.kind != Tok::end && cur.s == s; }
  bool at_name() const { return cur.kind == Tok::name; }

  std::string take_name(const std::string& what) {
    if (cur.kind != Tok::name)
      throw InputError("expected " + what + ", found '" + show() + "'", cur.line, cur.col);
    std::string s = cur.s;
    advance();
    return s;
  }

  void expect(const std::string& s) {
    if (!at(s))
      throw InputError("expected '" + s + "', found '" + show() + "'", cur.line, cur.col);
    advance();
  }

  bool eat(const std::string& s) {
    if (!at(s)) return false;
    advance();
    return true;
  }

  std::string show() const { return cur.kind == Tok::end ? "end of input" : cur.s; }

  [[noreturn]] void fail(const std::string& msg) const { throw InputError(msg, cur.line, cur.col); }
};

// ---- sentence / term / action parsing ---------------------------------------

struct SenParser {
  Lexer& lx;
  const HDSignature& sig;

  SymName parse_head() {
    // name | ( at k name )
    if (lx.eat("(")) {
      lx.expect("at");
      std::string k = lx.take_name("a nominal");
      std::string base = lx.take_name("an operation or relation name");
      lx.expect(")");
      return SymName(base, k);
    }
    return SymName(lx.take_name("a name"));
  }

  Term parse_term() {
    SymName head = parse_head();
    std::vector<Term> args;
    if (lx.eat("(")) {
      args.push_back(parse_term());
      while (lx.eat(",")) args.push_back(parse_term());
      lx.expect(")");
    }
    return Term::make(std::move(head), std::move(args));
  }

  Action parse_action() {  // alt level
    Action a = parse_seq();
    while (lx.eat("+")) a = Action::alt(a, parse_seq());
    return a;
  }
  Action parse_seq() {
    Action a = parse_star();
    while (lx.eat(";")) a = Action::seq(a, parse_star());
    return a;
  }
  Action parse_star() {
    Action a = parse_primary();
    while (lx.eat("*")) a = Action::star(a);
    return a;
  }
  Action parse_primary() {
    if (lx.eat("(")) {
      Action a = parse_action();
      lx.expect(")");
      return a;
    }
    Tok t = lx.cur;
    std::string m = lx.take_name("a modality");
    if (!sig.is_modality(m)) throw InputError("unknown modality '" + m + "'", t.line, t.col);
    return Action::atom(std::move(m));
  }

  std::vector<VarDecl> parse_binders() {
    std::vector<VarDecl> vars;
    do {
      std::string n = lx.take_name("a variable");
      lx.expect(":");
      Tok st = lx.cur;
      std::string s = lx.take_name("a sort");
      SymName sort = (s == kAny) ? SymName(kAny) : SymName(std::move(s));
      if (!(sort == SymName(kAny)) && !sig.is_rigid_sort(sort))
        throw InputError("variable sort '" + sort.base + "' is not 'any' or a rigid sort",
                         st.line, st.col);
      vars.push_back({std::move(n), std::move(sort)});
    } while (lx.eat(","));
    lx.expect(".");
    return vars;
  }

  Sentence parse_sentence() {
    if (lx.at("false")) {
      lx.advance();
      return Sentence::falsum();
    }
    if (lx.at("true")) {
      lx.advance();
      return Sentence::verum();
    }
    if (lx.at("not")) {
      lx.advance();
      return Sentence::neg(parse_sentence());
    }
    if (lx.eat("@")) {
      std::string k = lx.take_name("a nominal");
      return Sentence::at(std::move(k), parse_sentence());
    }
    if (lx.at("store")) {
      lx.advance();
      std::string z = lx.take_name("a variable");
      lx.expect(".");
      return Sentence::store(std::move(z), parse_sentence());
    }
    if (lx.at("exists")) {
      lx.advance();
      auto vars = parse_binders();
      return Sentence::exists(std::move(vars), parse_sentence());
    }
    if (lx.at("forall")) {
      lx.advance();
      auto vars = parse_binders();
      return Sentence::forall(std::move(vars), parse_sentence());
    }
    if (lx.eat("<")) {
      Action a = parse_action();
      lx.expect(">");
      return Sentence::dia(std::move(a), parse_sentence());
    }
    if (lx.eat("[")) {
      Action a = parse_action();
      lx.expect("]");
      return Sentence::box(std::move(a), parse_sentence());
    }
    if (lx.at("(")) {
      // the lexer has no lookahead, so step past '(' and dispatch on the head
      lx.advance();
      if (lx.at("or") || lx.at("and") || lx.at("implies") || lx.at("iff")) {
        std::string kw = lx.cur.s;
        lx.advance();
        SentenceVec gs;
        while (!lx.at(")")) gs.push_back(parse_sentence());
        lx.expect(")");
        if (kw == "or") return Sentence::disj(std::move(gs));
        if (kw == "and") return Sentence::conj(std::move(gs));
        if (gs.size() != 2) lx.fail("'" + kw + "' takes exactly two sentences");
        return kw == "implies" ? Sentence::implies(gs[0], gs[1]) : Sentence::iff(gs[0], gs[1]);
      }
      if (lx.at("at")) {  // pinned head of an atomic sentence
        lx.advance();
        std::string k = lx.take_name("a nominal");
        std::string base = lx.take_name("an operation or relation name");
        lx.expect(")");
        return parse_atom_from(SymName(std::move(base), std::move(k)));
      }
      Sentence g = parse_sentence();  // grouping parentheses
      lx.expect(")");
      return g;
    }
    Tok t = lx.cur;
    std::string name = lx.take_name("a sentence");
    if (!lx.at("(") && !lx.at("=")) {
      // bare atom: nominal or 0-ary relation
      bool nom = sig.is_nominal(name);
      bool rel = sig.body.has_rel(SymName(name));
      if (nom && rel)
        throw InputError("'" + name + "' is both a nominal and a relation", t.line, t.col);
      if (nom) return Sentence::nominal(std::move(name));
      if (rel) return Sentence::rel(SymName(std::move(name)), {});
      throw InputError("'" + name + "' is neither a nominal nor a relation", t.line, t.col);
    }
    return parse_atom_from(SymName(std::move(name)));
  }

  // Atomic sentence whose head (possibly pinned) has been read: a relation
  // application or an equation whose left side starts with that head.
  Sentence parse_atom_from(SymName head) {
    std::vector<Term> args;
    if (lx.eat("(")) {
      args.push_back(parse_term());
      while (lx.eat(",")) args.push_back(parse_term());
      lx.expect(")");
    }
    if (lx.eat("=")) {
      Term lhs = Term::make(std::move(head), std::move(args));
      Term rhs = parse_term();
      return Sentence::eq(std::move(lhs), std::move(rhs));
    }
    if (sig.body.has_rel(SymName(head.base)))
      return Sentence::rel(std::move(head), std::move(args));
    if (sig.body.has_op(SymName(head.base)))
      lx.fail("expected '=' after term headed by op '" + head.base + "'");
    lx.fail("'" + head.base + "' is not a relation");
  }
};

// Split a line into fields on whitespace, except inside parentheses (element
// names carry printed terms like "cons(e, empty)").
std::vector<std::string> split_fields(const std::string& line, int lineno) {
  std::vector<std::string> out;
  std::string curf;
  int depth = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (c == '#' && depth == 0) break;
    if (std::isspace(static_cast<unsigned char>(c)) && depth == 0) {
      if (!curf.empty()) out.push_back(std::move(curf)), curf.clear();
      continue;
    }
    if (c == '(') ++depth;
    if (c == ')') {
      --depth;
      if (depth < 0) throw InputError("unbalanced ')'", lineno, static_cast<int>(i) + 1);
    }
    curf += c;
  }
  if (depth != 0) throw InputError("unbalanced '('", lineno, 1);
  if (!curf.empty()) out.push_back(std::move(curf));
  return out;
}

// Iterate non-empty, de-commented lines with their 1-based numbers.
template <typename F>
void for_lines(const std::string& text, F f) {
  std::istringstream in(text);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    auto fields = split_fields(line, n);
    if (fields.empty()) continue;
    f(n, line, fields);
  }
}

[[noreturn]] void line_fail(int line, const std::string& msg) { throw InputError(msg, line, 1); }

}  // namespace

// ---- sentence-level entry points ----------------------------------------------

Term parse_term(const std::string& text, const HDSignature& sig) {
  Lexer lx(text);
  SenParser p{lx, sig};
  Term t = p.parse_term();
  if (lx.cur.kind != Tok::end) lx.fail("trailing input after term");
  sort_of(sig, t);  // well-sortedness
  return t;
}

Action parse_action(const std::string& text, const HDSignature& sig) {
  Lexer lx(text);
  SenParser p{lx, sig};
  Action a = p.parse_action();
  if (lx.cur.kind != Tok::end) lx.fail("trailing input after action");
  return a;
}

Sentence parse_sentence(const std::string& text, const HDSignature& sig) {
  Lexer lx(text);
  SenParser p{lx, sig};
  Sentence g = p.parse_sentence();
  if (lx.cur.kind != Tok::end) lx.fail("trailing input after sentence");
  check_sentence(sig, g);
  return g;
}

// ---- signatures ------------------------------------------------------------------

HDSignature parse_signature(const std::string& text) {
  HDSignature sig;
  sig.nominal.add_sort(SymName(kAny));  // implicit, never written by the printer
  std::istringstream in(text);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    Lexer lx(line, n);
    if (lx.cur.kind == Tok::end) continue;
    std::string kw = lx.take_name("a declaration keyword");
    if (kw == "nominal") {
      while (lx.at_name()) sig.nominal.add_op(SymName(lx.take_name("")), OpProfile{{}, SymName(kAny)});
    } else if (kw == "modality") {
      while (lx.at_name())
        sig.nominal.add_rel(SymName(lx.take_name("")), RelProfile{{SymName(kAny), SymName(kAny)}});
    } else if (kw == "sort") {
      SymName s(lx.take_name("a sort name"));
      sig.body.add_sort(s);
      if (lx.eat("rigid")) sig.rigid.add_sort(s);
    } else if (kw == "op") {
      SymName name(lx.take_name("an op name"));
      lx.expect(":");
      OpProfile p;
      while (lx.at_name()) p.arity.push_back(SymName(lx.take_name("")));
      lx.expect("->");
      p.result = SymName(lx.take_name("a result sort"));
      bool rigid = lx.eat("rigid");
      sig.body.add_op(name, p);
      if (rigid) sig.rigid.add_op(name, p);
    } else if (kw == "rel") {
      SymName name(lx.take_name("a relation name"));
      lx.expect(":");
      RelProfile p;
      while (lx.at_name()) p.arity.push_back(SymName(lx.take_name("")));
      bool rigid = lx.eat("rigid");
      sig.body.add_rel(name, p);
      if (rigid) sig.rigid.add_rel(name, p);
    } else {
      line_fail(n, "unknown declaration '" + kw + "'");
    }
    if (lx.cur.kind != Tok::end) line_fail(n, "trailing input after declaration");
  }
  // rigid sorts used by rigid ops/rels must be rigid themselves for the rigid
  // part to be a subsignature; validate() reports everything at once
  auto rep = validate(sig);
  if (!rep.ok()) throw InputError("invalid signature: " + rep.joined());
  return sig;
}

std::string print_signature(const HDSignature& sig) {
  std::string out;
  for (const auto& k : sig.nominals()) out += "nominal " + k + "\n";
  for (const auto& m : sig.modalities()) out += "modality " + m + "\n";
  for (const auto& s : sig.body.sorts) {
    out += "sort " + s.base;
    if (sig.is_rigid_sort(s)) out += " rigid";
    out += "\n";
  }
  for (const auto& [name, profs] : sig.body.ops)
    for (const auto& p : profs) {
      out += "op " + name.base + " :";
      for (const auto& a : p.arity) out += " " + a.base;
      out += " -> " + p.result.base;
      if (sig.is_rigid_op(name, p)) out += " rigid";
      out += "\n";
    }
  for (const auto& [name, profs] : sig.body.rels)
    for (const auto& p : profs) {
      out += "rel " + name.base + " :";
      for (const auto& a : p.arity) out += " " + a.base;
      if (sig.is_rigid_rel(name, p)) out += " rigid";
      out += "\n";
    }
  return out;
}

// ---- theories ----------------------------------------------------------------------

std::vector<Sentence> parse_theory(const std::string& text, const HDSignature& sig) {
  std::vector<Sentence> out;
  std::istringstream in(text);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    Lexer lx(line, n);
    if (lx.cur.kind == Tok::end) continue;
    SenParser p{lx, sig};
    Sentence g = p.parse_sentence();
    if (lx.cur.kind != Tok::end) lx.fail("trailing input after sentence");
    try {
      check_sentence(sig, g);
    } catch (const InputError& e) {
      line_fail(n, e.what());
    }
    out.push_back(std::move(g));
  }
  return out;
}

std::string print_theory(const std::vector<Sentence>& ts) {
  std::string out;
  for (const auto& g : ts) out += print_sentence(g) + "\n";
  return out;
}

// ---- models -------------------------------------------------------------------------

namespace {

struct ModelLoader {
  const HDSignature& sig;
  KripkeStructure m;
  std::map<std::string, std::size_t> world_idx;
  bool have_worlds = false;

  std::size_t world(const std::string& w, int line) {
    auto it = world_idx.find(w);
    if (it == world_idx.end()) line_fail(line, "unknown world '" + w + "'");
    return it->second;
  }

  const std::vector<std::string>* carrier_ptr(std::size_t w, const SymName& s) const {
    const auto& site = sig.is_rigid_sort(s) ? m.rigid : m.local[w];
    auto it = site.carriers.find(s);
    return it == site.carriers.end() ? nullptr : &it->second;
  }

  std::size_t elem(std::size_t w, const SymName& s, const std::string& name, int line) {
    const auto* c = carrier_ptr(w, s);
    if (!c) line_fail(line, "no carrier declared for sort '" + s.base + "'");
    auto it = std::find(c->begin(), c->end(), name);
    if (it == c->end())
      line_fail(line, "'" + name + "' is not an element of sort '" + s.base + "'");
    return static_cast<std::size_t>(it - c->begin());
  }

  void worlds_line(const std::vector<std::string>& f, int line) {
    if (have_worlds) line_fail(line, "duplicate world line");
    have_worlds = true;
    for (std::size_t i = 1; i < f.size(); ++i) {
      if (world_idx.count(f[i])) line_fail(line, "duplicate world '" + f[i] + "'");
      world_idx[f[i]] = m.worlds.size();
      m.worlds.push_back(f[i]);
    }
    if (m.worlds.empty()) line_fail(line, "world line lists no worlds");
    m.local.resize(m.worlds.size());
  }

  void nominal_line(const std::vector<std::string>& f, int line) {
    if (f.size() != 3) line_fail(line, "nominal line needs: nominal <k> <world>");
    if (!sig.is_nominal(f[1])) line_fail(line, "unknown nominal '" + f[1] + "'");
    if (m.nominals.count(f[1])) line_fail(line, "duplicate denotation for nominal '" + f[1] + "'");
    m.nominals[f[1]] = world(f[2], line);
  }

  void modality_line(const std::vector<std::string>& f, int line) {
    if (f.size() != 4) line_fail(line, "modality line needs: modality <m> <w> <w'>");
    if (!sig.is_modality(f[1])) line_fail(line, "unknown modality '" + f[1] + "'");
    m.modalities[f[1]].insert({world(f[2], line), world(f[3], line)});
  }

  void carrier_line(const std::vector<std::string>& f, int line) {
    if (f.size() < 2) line_fail(line, "carrier line needs a sort");
    SymName s(f[1]);
    bool rigid = sig.is_rigid_sort(s);
    if (!rigid && !sig.is_flexible_sort(s)) line_fail(line, "unknown sort '" + f[1] + "'");
    std::size_t first = rigid ? 2 : 3;
    std::size_t w = 0;
    if (!rigid) {
      if (f.size() < 3) line_fail(line, "flexible carrier line needs a world");
      w = world(f[2], line);
    }
    auto& c = rigid ? m.rigid.carriers[s] : m.local[w].carriers[s];
    if (!c.empty()) line_fail(line, "duplicate carrier for sort '" + f[1] + "'");
    for (std::size_t i = first; i < f.size(); ++i) {
      if (std::find(c.begin(), c.end(), f[i]) != c.end())
        line_fail(line, "duplicate element '" + f[i] + "'");
      c.push_back(f[i]);
    }
    if (c.empty()) line_fail(line, "empty carrier for sort '" + f[1] + "'");
  }

  // Candidate profiles of name with the given entry shape; exactly one must fit.
  void op_line(const std::vector<std::string>& f, int line) {
    if (f.size() < 2) line_fail(line, "op line needs a name");
    SymName name(f[1]);
    auto it = sig.body.ops.find(name);
    if (it == sig.body.ops.end()) line_fail(line, "unknown op '" + f[1] + "'");
    struct Fit {
      const OpProfile* p;
      bool rigid;
      std::size_t w;
      std::vector<std::size_t> args;
      std::size_t val;
    };
    std::vector<Fit> fits;
    for (const auto& p : it->second) {
      bool rigid = sig.is_rigid_op(name, p);
      std::size_t expect = 2 + (rigid ? 0 : 1) + p.arity.size() + 1;
      if (f.size() != expect) continue;
      std::size_t pos = 2;
      std::size_t w = 0;
      if (!rigid) {
        if (!world_idx.count(f[pos])) continue;
        w = world_idx.at(f[pos++]);
      }
      Fit fit{&p, rigid, w, {}, 0};
      bool ok = true;
      for (const auto& a : p.arity) {
        const auto* c = carrier_ptr(w, a);
        if (!c) {
          ok = false;
          break;
        }
        auto jt = std::find(c->begin(), c->end(), f[pos]);
        if (jt == c->end()) {
          ok = false;
          break;
        }
        fit.args.push_back(static_cast<std::size_t>(jt - c->begin()));
        ++pos;
      }
      if (!ok) continue;
      const auto* rc = carrier_ptr(w, p.result);
      if (!rc) continue;
      auto jt = std::find(rc->begin(), rc->end(), f[pos]);
      if (jt == rc->end()) continue;
      fit.val = static_cast<std::size_t>(jt - rc->begin());
      fits.push_back(std::move(fit));
    }
    if (fits.empty()) line_fail(line, "op entry fits no profile of '" + f[1] + "'");
    if (fits.size() > 1) line_fail(line, "ambiguous op entry for '" + f[1] + "'");
    auto& fit = fits[0];
    auto& table = fit.rigid ? m.rigid.ops[{name, *fit.p}] : m.local[fit.w].ops[{name, *fit.p}];
    auto [jt, fresh] = table.try_emplace(fit.args, fit.val);
    if (!fresh && jt->second != fit.val)
      line_fail(line, "conflicting entries for op '" + f[1] + "'");
  }

  void rel_line(const std::vector<std::string>& f, int line) {
    if (f.size() < 2) line_fail(line, "rel line needs a name");
    SymName name(f[1]);
    auto it = sig.body.rels.find(name);
    if (it == sig.body.rels.end()) line_fail(line, "unknown relation '" + f[1] + "'");
    struct Fit {
      const RelProfile* p;
      bool rigid;
      std::size_t w;
      std::vector<std::size_t> args;
    };
    std::vector<Fit> fits;
    for (const auto& p : it->second) {
      bool rigid = sig.is_rigid_rel(name, p);
      std::size_t expect = 2 + (rigid ? 0 : 1) + p.arity.size();
      if (f.size() != expect) continue;
      std::size_t pos = 2;
      std::size_t w = 0;
      if (!rigid) {
        if (!world_idx.count(f[pos])) continue;
        w = world_idx.at(f[pos++]);
      }
      Fit fit{&p, rigid, w, {}};
      bool ok = true;
      for (const auto& a : p.arity) {
        const auto* c = carrier_ptr(w, a);
        if (!c) {
          ok = false;
          break;
        }
        auto jt = std::find(c->begin(), c->end(), f[pos]);
        if (jt == c->end()) {
          ok = false;
          break;
        }
        fit.args.push_back(static_cast<std::size_t>(jt - c->begin()));
        ++pos;
      }
      if (ok) fits.push_back(std::move(fit));
    }
    if (fits.empty()) line_fail(line, "rel entry fits no profile of '" + f[1] + "'");
    if (fits.size() > 1) line_fail(line, "ambiguous rel entry for '" + f[1] + "'");
    auto& fit = fits[0];
    auto& table = fit.rigid ? m.rigid.rels[{name, *fit.p}] : m.local[fit.w].rels[{name, *fit.p}];
    table.insert(fit.args);
  }
};

}  // namespace

KripkeStructure parse_model(const std::string& text, const HDSignature& sig) {
  {
    auto rep = validate(sig);
    if (!rep.ok()) throw InputError("invalid signature: " + rep.joined());
  }
  ModelLoader ld{sig, {}, {}, false};
  ld.m.sig = sig;
  // two passes so that carriers may appear in any order relative to tables
  std::vector<std::tuple<int, std::vector<std::string>>> table_lines;
  for_lines(text, [&](int n, const std::string&, const std::vector<std::string>& f) {
    const std::string& kw = f[0];
    if (kw == "world") {
      ld.worlds_line(f, n);
    } else if (kw == "nominal" || kw == "modality" || kw == "op" || kw == "rel") {
      table_lines.push_back({n, f});
    } else if (kw == "carrier") {
      if (!ld.have_worlds) line_fail(n, "carrier line before world line");
      ld.carrier_line(f, n);
    } else {
      line_fail(n, "unknown model line '" + kw + "'");
    }
  });
  if (!ld.have_worlds) throw InputError("model file has no world line");
  for (auto& [n, f] : table_lines) {
    const std::string& kw = f[0];
    if (kw == "nominal")
      ld.nominal_line(f, n);
    else if (kw == "modality")
      ld.modality_line(f, n);
    else if (kw == "op")
      ld.op_line(f, n);
    else
      ld.rel_line(f, n);
  }
  // empty tables for declared symbols never mentioned
  for (const auto& lam : sig.modalities()) ld.m.modalities.try_emplace(lam);
  for (const auto& [name, profs] : sig.body.ops)
    for (const auto& p : profs) {
      if (sig.is_rigid_op(name, p))
        ld.m.rigid.ops.try_emplace({name, p});
      else
        for (auto& site : ld.m.local) site.ops.try_emplace({name, p});
    }
  for (const auto& [name, profs] : sig.body.rels)
    for (const auto& p : profs) {
      if (sig.is_rigid_rel(name, p))
        ld.m.rigid.rels.try_emplace({name, p});
      else
        for (auto& site : ld.m.local) site.rels.try_emplace({name, p});
    }
  auto rep = validate_model(ld.m);
  if (!rep.ok()) throw InputError("invalid model: " + rep.joined());
  return ld.m;
}

std::string print_model(const KripkeStructure& m) {
  std::string out = "world";
  for (const auto& w : m.worlds) out += " " + w;
  out += "\n";
  for (const auto& [k, w] : m.nominals) out += "nominal " + k + " " + m.worlds[w] + "\n";
  for (const auto& [lam, edges] : m.modalities)
    for (auto [a, b] : edges)
      out += "modality " + lam + " " + m.worlds[a] + " " + m.worlds[b] + "\n";
  for (const auto& [s, c] : m.rigid.carriers) {
    out += "carrier " + s.base;
    for (const auto& e : c) out += " " + e;
    out += "\n";
  }
  for (std::size_t w = 0; w < m.local.size(); ++w)
    for (const auto& [s, c] : m.local[w].carriers) {
      out += "carrier " + s.base + " " + m.worlds[w];
      for (const auto& e : c) out += " " + e;
      out += "\n";
    }
  auto carrier_at = [&](std::size_t w, const SymName& s) -> const std::vector<std::string>& {
    return m.sig.is_rigid_sort(s) ? m.rigid.carriers.at(s) : m.local[w].carriers.at(s);
  };
  auto print_ops = [&](const Interp& site, bool rigid, std::size_t w) {
    for (const auto& [key, table] : site.ops)
      for (const auto& [args, val] : table) {
        out += "op " + key.first.base;
        if (!rigid) out += " " + m.worlds[w];
        for (std::size_t i = 0; i < args.size(); ++i)
          out += " " + carrier_at(w, key.second.arity[i])[args[i]];
        out += " " + carrier_at(w, key.second.result)[val] + "\n";
      }
  };
  auto print_rels = [&](const Interp& site, bool rigid, std::size_t w) {
    for (const auto& [key, table] : site.rels)
      for (const auto& tup : table) {
        out += "rel " + key.first.base;
        if (!rigid) out += " " + m.worlds[w];
        for (std::size_t i = 0; i < tup.size(); ++i)
          out += " " + carrier_at(w, key.second.arity[i])[tup[i]];
        out += "\n";
      }
  };
  print_ops(m.rigid, true, 0);
  for (std::size_t w = 0; w < m.local.size(); ++w) print_ops(m.local[w], false, w);
  print_rels(m.rigid, true, 0);
  for (std::size_t w = 0; w < m.local.size(); ++w) print_rels(m.local[w], false, w);
  return out;
}

// ---- substitutions -----------------------------------------------------------------

SubstFile parse_substitution(const std::string& text, const HDSignature& sig) {
  SubstFile out;
  std::vector<std::tuple<int, std::string, std::string>> assigns;  // line, kind, rest
  std::istringstream in(text);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    auto f = split_fields(line, n);
    if (f.empty()) continue;
    if (f[0] == "domain" || f[0] == "codomain") {
      Lexer lx(line, n);
      lx.advance();  // keyword
      std::string name = lx.take_name("a constant name");
      lx.expect(":");
      std::string s = lx.take_name("a sort");
      SymName sort = (s == kAny) ? SymName(kAny) : SymName(std::move(s));
      (f[0] == "domain" ? out.domain : out.codomain).push_back({std::move(name), std::move(sort)});
    } else if (f[0] == "nominal" || f[0] == "term") {
      std::size_t at = line.find(f[0]);
      assigns.push_back({n, f[0], line.substr(at + f[0].size())});
    } else {
      line_fail(n, "unknown substitution line '" + f[0] + "'");
    }
  }
  HDSignature sig_c2 = extend(sig, out.codomain);
  for (auto& [ln, kind, rest] : assigns) {
    Lexer lx(rest, ln);
    SenParser p{lx, sig_c2};
    std::string c = lx.take_name("a domain constant");
    if (kind == "nominal") {
      std::string k = lx.take_name("a nominal");
      if (lx.cur.kind != Tok::end) lx.fail("trailing input");
      out.theta.nominal_map[c] = k;
    } else {
      Term t = p.parse_term();
      if (lx.cur.kind != Tok::end) lx.fail("trailing input");
      out.theta.term_map[c] = t;
    }
  }
  check_substitution(sig_c2, out.domain, out.theta);
  return out;
}

std::string print_substitution(const SubstFile& s) {
  std::string out;
  for (const auto& v : s.domain) out += "domain " + v.name + " : " + v.sort.base + "\n";
  for (const auto& v : s.codomain) out += "codomain " + v.name + " : " + v.sort.base + "\n";
  for (const auto& [c, k] : s.theta.nominal_map) out += "nominal " + c + " " + k + "\n";
  for (const auto& [c, t] : s.theta.term_map) out += "term " + c + " " + print_term(t) + "\n";
  return out;
}

// ---- forcing properties ---------------------------------------------------------

ForcingFile parse_forcing(const std::string& text, const HDSignature& sig) {
  ForcingFile out;
  std::set<std::string> known;
  std::istringstream in(text);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    auto f = split_fields(line, n);
    if (f.empty()) continue;
    if (f[0] == "condition") {
      if (f.size() != 2) line_fail(n, "condition line needs exactly one name");
      if (!known.insert(f[1]).second) line_fail(n, "duplicate condition '" + f[1] + "'");
      out.conditions.push_back(f[1]);
    } else if (f[0] == "leq") {
      if (f.size() != 3) line_fail(n, "leq line needs: leq <p> <q>");
      if (!known.count(f[1])) line_fail(n, "unknown condition '" + f[1] + "'");
      if (!known.count(f[2])) line_fail(n, "unknown condition '" + f[2] + "'");
      out.leq.push_back({f[1], f[2]});
    } else if (f[0] == "label") {
      if (f.size() < 3) line_fail(n, "label line needs: label <p> <sentence>");
      if (!known.count(f[1])) line_fail(n, "unknown condition '" + f[1] + "'");
      std::size_t at = line.find(f[1], line.find("label") + 5);
      Lexer lx(line.substr(at + f[1].size()), n);
      SenParser p{lx, sig};
      Sentence g = p.parse_sentence();
      if (lx.cur.kind != Tok::end) lx.fail("trailing input after sentence");
      try {
        check_sentence(sig, g);
      } catch (const InputError& e) {
        line_fail(n, e.what());
      }
      out.labels.push_back({f[1], std::move(g)});
    } else {
      line_fail(n, "unknown forcing line '" + f[0] + "'");
    }
  }
  return out;
}

std::string print_forcing(const ForcingFile& f) {
  std::string out;
  for (const auto& c : f.conditions) out += "condition " + c + "\n";
  for (const auto& [a, b] : f.leq) out += "leq " + a + " " + b + "\n";
  for (const auto& [c, g] : f.labels) out += "label " + c + " " + print_sentence(g) + "\n";
  return out;
}

// ---- type families -----------------------------------------------------------------

std::vector<TypeBlock> parse_types(const std::string& text, const HDSignature& sig) {
  std::vector<TypeBlock> out;
  std::istringstream in(text);
  std::string line;
  int n = 0;
  bool in_block = false;
  std::vector<std::tuple<int, std::string>> pending;  // sentence lines of the block
  auto flush = [&]() {
    if (!in_block) return;
    TypeBlock& b = out.back();
    HDSignature ext = extend(sig, b.vars);
    for (auto& [ln, s] : pending) {
      Lexer lx(s, ln);
      SenParser p{lx, ext};
      Sentence g = p.parse_sentence();
      if (lx.cur.kind != Tok::end) lx.fail("trailing input after sentence");
      try {
        check_sentence(ext, g);
      } catch (const InputError& e) {
        line_fail(ln, e.what());
      }
      b.sentences.push_back(std::move(g));
    }
    pending.clear();
  };
  while (std::getline(in, line)) {
    ++n;
    auto f = split_fields(line, n);
    if (f.empty()) continue;
    if (f[0] == "type" && f.size() == 1) {
      flush();
      out.push_back({});
      in_block = true;
    } else if (!in_block) {
      line_fail(n, "content before the first 'type' line");
    } else if (f[0] == "var") {
      if (!pending.empty()) line_fail(n, "var line after sentences in the same type");
      Lexer lx(line, n);
      lx.advance();
      std::string name = lx.take_name("a variable");
      lx.expect(":");
      std::string s = lx.take_name("a sort");
      SymName sort = (s == kAny) ? SymName(kAny) : SymName(std::move(s));
      out.back().vars.push_back({std::move(name), std::move(sort)});
    } else {
      pending.push_back({n, line});
    }
  }
  flush();
  return out;
}

std::string print_types(const std::vector<TypeBlock>& ts) {
  std::string out;
  for (const auto& b : ts) {
    out += "type\n";
    for (const auto& v : b.vars) out += "var " + v.name + " : " + v.sort.base + "\n";
    for (const auto& g : b.sentences) out += print_sentence(g) + "\n";
  }
  return out;
}

// ---- files ------------------------------------------------------------------------------

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream outf(path, std::ios::binary);
  if (!outf) throw InputError("cannot write '" + path + "'");
  outf << content;
}

}  // namespace hdfol
