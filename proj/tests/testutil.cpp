#include "testutil.hpp"

#include <algorithm>
#include <cassert>
#include <functional>

namespace testutil {

std::size_t pick(Rng& rng, std::size_t n) {
  assert(n > 0);
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

bool coin(Rng& rng) { return pick(rng, 2) == 0; }

namespace {

std::vector<std::vector<std::size_t>> tuples(const std::vector<std::size_t>& limits) {
  std::vector<std::vector<std::size_t>> out{{}};
  for (std::size_t l : limits) {
    std::vector<std::vector<std::size_t>> next;
    for (const auto& t : out)
      for (std::size_t v = 0; v < l; ++v) {
        auto c = t;
        c.push_back(v);
        next.push_back(std::move(c));
      }
    out = std::move(next);
  }
  return out;
}

// Fills nominal/modality/table data of a model whose worlds and carriers are
// already chosen.
void fill_tables(Rng& rng, KripkeStructure& m) {
  const HDSignature& sig = m.sig;
  std::size_t nw = m.worlds.size();
  for (const auto& k : sig.nominals()) m.nominals[k] = pick(rng, nw);
  for (const auto& l : sig.modalities()) {
    auto& edges = m.modalities[l];
    edges.clear();
    for (std::size_t i = 0; i < nw; ++i)
      for (std::size_t j = 0; j < nw; ++j)
        if (coin(rng)) edges.insert({i, j});
  }
  auto size_at = [&](std::size_t w, const SymName& s) {
    return sig.is_rigid_sort(s) ? m.rigid.carriers.at(s).size()
                                : m.local[w].carriers.at(s).size();
  };
  for (const auto& [n, ps] : sig.body.ops)
    for (const auto& p : ps) {
      bool rigid = sig.is_rigid_op(n, p);
      for (std::size_t w = 0; w < (rigid ? 1 : nw); ++w) {
        std::vector<std::size_t> limits;
        for (const auto& s : p.arity) limits.push_back(size_at(w, s));
        auto& table = (rigid ? m.rigid : m.local[w]).ops[{n, p}];
        table.clear();
        for (auto& t : tuples(limits)) table[t] = pick(rng, size_at(w, p.result));
      }
    }
  for (const auto& [n, ps] : sig.body.rels)
    for (const auto& p : ps) {
      bool rigid = sig.is_rigid_rel(n, p);
      for (std::size_t w = 0; w < (rigid ? 1 : nw); ++w) {
        std::vector<std::size_t> limits;
        for (const auto& s : p.arity) limits.push_back(size_at(w, s));
        auto& table = (rigid ? m.rigid : m.local[w]).rels[{n, p}];
        table.clear();
        for (auto& t : tuples(limits))
          if (coin(rng)) table.insert(t);
      }
    }
}

std::vector<std::string> elems(const SymName& s, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(s.base + std::to_string(i));
  return out;
}

}  // namespace

KripkeStructure random_model(Rng& rng, const HDSignature& sig, std::size_t max_worlds,
                             std::size_t max_carrier) {
  KripkeStructure m;
  m.sig = sig;
  std::size_t nw = 1 + pick(rng, max_worlds);
  for (std::size_t i = 0; i < nw; ++i) m.worlds.push_back("w" + std::to_string(i));
  m.local.resize(nw);
  for (const auto& s : sig.body.sorts) {
    if (sig.is_rigid_sort(s))
      m.rigid.carriers[s] = elems(s, 1 + pick(rng, max_carrier));
    else
      for (std::size_t w = 0; w < nw; ++w)
        m.local[w].carriers[s] = elems(s, 1 + pick(rng, max_carrier));
  }
  fill_tables(rng, m);
  assert(validate_model(m).ok());
  return m;
}

KripkeStructure random_model_like(Rng& rng, const KripkeStructure& base) {
  KripkeStructure m;
  m.sig = base.sig;
  m.worlds = base.worlds;
  m.rigid.carriers = base.rigid.carriers;
  m.local.resize(base.worlds.size());
  for (std::size_t w = 0; w < base.worlds.size(); ++w)
    m.local[w].carriers = base.local[w].carriers;
  fill_tables(rng, m);
  assert(validate_model(m).ok());
  return m;
}

namespace {

struct SentenceGenerator {
  Rng& rng;
  const HDSignature& sig;
  const GenOpts& opts;
  int var_counter = 0;

  std::vector<std::string> scope_noms(const std::vector<VarDecl>& scope) {
    std::vector<std::string> out = sig.nominals();
    for (const auto& v : scope)
      if (v.sort == SymName(kAny)) out.push_back(v.name);
    return out;
  }

  // Whether a closed term of `sort` can be built from the scope within depth.
  bool term_possible(const std::vector<VarDecl>& scope, const SymName& sort, int depth) {
    for (const auto& v : scope)
      if (v.sort == sort) return true;
    for (const auto& [n, ps] : sig.body.ops)
      for (const auto& p : ps) {
        if (!(p.result == sort)) continue;
        if (p.arity.empty()) return true;
        if (depth <= 0) continue;
        bool all = true;
        for (const auto& s : p.arity)
          if (!term_possible(scope, s, depth - 1)) all = false;
        if (all) return true;
      }
    return false;
  }

  Term term(const std::vector<VarDecl>& scope, const SymName& sort, int depth) {
    // Candidate heads: in-scope variables, then ops with the right result.
    std::vector<Term> ready;
    for (const auto& v : scope)
      if (v.sort == sort) ready.push_back(Term::make(SymName(v.name)));
    struct Head {
      SymName op;
      OpProfile p;
      bool rigid;
    };
    std::vector<Head> heads;
    for (const auto& [n, ps] : sig.body.ops)
      for (const auto& p : ps) {
        if (!(p.result == sort) || (!p.arity.empty() && depth <= 0)) continue;
        bool feasible = true;
        for (const auto& s : p.arity)
          if (!term_possible(scope, s, depth - 1)) feasible = false;
        if (feasible) heads.push_back({n, p, sig.is_rigid_op(n, p)});
      }
    std::size_t total = ready.size() + heads.size();
    assert(total > 0);
    std::size_t c = pick(rng, total);
    if (c < ready.size()) return ready[c];
    const Head& h = heads[c - ready.size()];
    std::vector<Term> args;
    for (const auto& s : h.p.arity) args.push_back(term(scope, s, depth - 1));
    SymName op = h.op;
    if (!h.rigid && coin(rng)) {  // pin flexible ops half the time
      auto noms = scope_noms(scope);
      op = SymName(h.op.base, noms[pick(rng, noms.size())]);
    }
    return Term::make(op, std::move(args));
  }

  Action action(int depth) {
    auto mods = sig.modalities();
    if (!opts.structured_actions || depth <= 0 || pick(rng, 3) == 0)
      return Action::atom(mods[pick(rng, mods.size())]);
    switch (pick(rng, 3)) {
      case 0: return Action::seq(action(depth - 1), action(depth - 1));
      case 1: return Action::alt(action(depth - 1), action(depth - 1));
      default: return Action::star(action(depth - 1));
    }
  }

  Sentence atom(const std::vector<VarDecl>& scope) {
    std::vector<SymName> eq_sorts;
    for (const auto& s : sig.body.sorts)
      if (sig.is_rigid_sort(s) && term_possible(scope, s, opts.term_depth))
        eq_sorts.push_back(s);
    std::vector<std::pair<SymName, RelProfile>> rels;
    for (const auto& [n, ps] : sig.body.rels)
      for (const auto& p : ps) {
        bool feasible = true;
        for (const auto& s : p.arity)
          if (!term_possible(scope, s, opts.term_depth)) feasible = false;
        if (feasible) rels.push_back({n, p});
      }
    for (int attempt = 0; attempt < 8; ++attempt) {
      switch (pick(rng, 3)) {
        case 0: {
          auto noms = scope_noms(scope);
          return Sentence::nominal(noms[pick(rng, noms.size())]);
        }
        case 1: {
          if (eq_sorts.empty()) break;
          const SymName& s = eq_sorts[pick(rng, eq_sorts.size())];
          return Sentence::eq(term(scope, s, opts.term_depth),
                              term(scope, s, opts.term_depth));
        }
        default: {
          if (rels.empty()) break;
          auto& [n, p] = rels[pick(rng, rels.size())];
          std::vector<Term> args;
          for (const auto& s : p.arity) args.push_back(term(scope, s, opts.term_depth));
          SymName r = n;
          if (!sig.is_rigid_rel(n, p) && coin(rng)) {
            auto noms = scope_noms(scope);
            r = SymName(n.base, noms[pick(rng, noms.size())]);
          }
          return Sentence::rel(r, std::move(args));
        }
      }
    }
    auto noms = scope_noms(scope);
    return Sentence::nominal(noms[pick(rng, noms.size())]);
  }

  Sentence gen(std::vector<VarDecl>& scope, int depth) {
    if (depth <= 0) return atom(scope);
    switch (pick(rng, 8)) {
      case 0: return atom(scope);
      case 1: return Sentence::neg(gen(scope, depth - 1));
      case 2: {
        SentenceVec gs;
        std::size_t n = pick(rng, 4);
        for (std::size_t i = 0; i < n; ++i) gs.push_back(gen(scope, depth - 1));
        return Sentence::disj(std::move(gs));
      }
      case 3: {
        auto noms = scope_noms(scope);
        return Sentence::at(noms[pick(rng, noms.size())], gen(scope, depth - 1));
      }
      case 4: {
        auto sorts = sig.extended_rigid_sorts();
        VarDecl v{"q" + std::to_string(var_counter++), sorts[pick(rng, sorts.size())]};
        scope.push_back(v);
        Sentence body = gen(scope, depth - 1);
        scope.pop_back();
        return Sentence::exists({v}, std::move(body));
      }
      case 5: {
        if (!opts.allow_store) return gen(scope, depth - 1);
        VarDecl v{"q" + std::to_string(var_counter++), SymName(kAny)};
        scope.push_back(v);
        Sentence body = gen(scope, depth - 1);
        scope.pop_back();
        return Sentence::store(v.name, std::move(body));
      }
      case 6: {
        if (sig.modalities().empty()) return atom(scope);
        Sentence body;
        if (opts.dia_nominal_only) {
          auto noms = scope_noms(scope);
          body = Sentence::nominal(noms[pick(rng, noms.size())]);
        } else {
          body = gen(scope, depth - 1);
        }
        return Sentence::dia(action(2), std::move(body));
      }
      default: return atom(scope);
    }
  }
};

}  // namespace

Sentence random_sentence(Rng& rng, const HDSignature& sig, const GenOpts& opts) {
  SentenceGenerator g{rng, sig, opts};
  std::vector<VarDecl> scope;
  return g.gen(scope, opts.depth);
}

std::set<std::pair<std::size_t, std::size_t>> action_paths(const KripkeStructure& m,
                                                           const Action& a) {
  using Edges = std::set<std::pair<std::size_t, std::size_t>>;
  auto compose = [](const Edges& x, const Edges& y) {
    Edges out;
    for (const auto& [i, j] : x)
      for (const auto& [j2, l] : y)
        if (j == j2) out.insert({i, l});
    return out;
  };
  switch (a.kind()) {
    case Action::Kind::atom: return m.modalities.at(a.modality());
    case Action::Kind::seq: return compose(action_paths(m, a.left()), action_paths(m, a.right()));
    case Action::Kind::alt: {
      Edges out = action_paths(m, a.left());
      for (const auto& e : action_paths(m, a.right())) out.insert(e);
      return out;
    }
    default: {  // star: identity joined with |W| rounds of composition
      Edges base = action_paths(m, a.left());
      Edges out;
      for (std::size_t w = 0; w < m.worlds.size(); ++w) out.insert({w, w});
      for (std::size_t round = 0; round < m.worlds.size(); ++round) {
        Edges next = out;
        for (const auto& e : compose(out, base)) next.insert(e);
        if (next == out) break;
        out = std::move(next);
      }
      return out;
    }
  }
}

bool until_oracle(const KripkeStructure& m, std::size_t w, const std::string& modality,
                  const Sentence& phi, const Sentence& psi) {
  const auto& edges = m.modalities.at(modality);
  for (std::size_t y = 0; y < m.worlds.size(); ++y) {
    if (edges.count({w, y}) == 0 || !sat_local(m, y, phi)) continue;
    bool between_ok = true;
    for (std::size_t v = 0; v < m.worlds.size(); ++v)
      if (edges.count({w, v}) != 0 && edges.count({v, y}) != 0 && !sat_local(m, v, psi))
        between_ok = false;
    if (between_ok) return true;
  }
  return false;
}

CongClosure::CongClosure(const HDSignature& sig, int depth,
                         const std::vector<std::pair<Term, Term>>& eqs) {
  auto universe = ground_rigid_universe(sig, depth);
  for (const auto& [sort, ts] : universe)
    for (const auto& t : ts) {
      index_[t] = terms_.size();
      by_sort_[sort].insert(terms_.size());
      terms_.push_back(t);
    }
  parent_.resize(terms_.size());
  for (std::size_t i = 0; i < parent_.size(); ++i) parent_[i] = i;
  auto unite = [&](std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[a] = b;
  };
  for (const auto& [a, b] : eqs) unite(index_.at(a), index_.at(b));
  // Congruence rule by fixpoint: same head, equivalent args -> equivalent.
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < terms_.size(); ++i)
      for (std::size_t j = i + 1; j < terms_.size(); ++j) {
        if (find(i) == find(j)) continue;
        const Term& a = terms_[i];
        const Term& b = terms_[j];
        if (!(a.op() == b.op()) || a.args().size() != b.args().size()) continue;
        bool all = true;
        for (std::size_t x = 0; x < a.args().size(); ++x)
          if (find(index_.at(a.args()[x])) != find(index_.at(b.args()[x]))) all = false;
        if (all) {
          unite(i, j);
          changed = true;
        }
      }
  }
}

std::size_t CongClosure::find(std::size_t i) const {
  while (parent_[i] != i) {
    parent_[i] = parent_[parent_[i]];
    i = parent_[i];
  }
  return i;
}

bool CongClosure::equal(const Term& a, const Term& b) const {
  return find(index_.at(a)) == find(index_.at(b));
}

std::size_t CongClosure::classes(const SymName& sort) const {
  std::set<std::size_t> roots;
  for (std::size_t i : by_sort_.at(sort)) roots.insert(find(i));
  return roots.size();
}

}  // namespace testutil
