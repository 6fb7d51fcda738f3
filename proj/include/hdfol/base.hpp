#pragma once
// Shared basic types: symbol names (with optional world pinning), three-valued
// verdicts and positioned input errors.

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hdfol {

// Reserved sort of nominals.
inline const std::string kAny = "any";

// A symbol or sort name, optionally pinned to a nominal: the pair (k, x).
// Pinned names never occur in user declarations; they arise from rigidification
// and from "(at k x)" references. Pinning is a pair, never a spelling trick.
struct SymName {
  std::string base;
  std::string at;  // pinning nominal; empty means unpinned

  SymName() = default;
  SymName(const char* b) : base(b) {}
  SymName(std::string b) : base(std::move(b)) {}
  SymName(std::string b, std::string a) : base(std::move(b)), at(std::move(a)) {}

  bool pinned() const { return !at.empty(); }
  friend auto operator<=>(const SymName&, const SymName&) = default;
};

std::string to_string(const SymName& s);

// A typed variable; sorts of variables range over the extended rigid sorts
// (rigid body sorts plus "any").
struct VarDecl {
  std::string name;
  SymName sort;
  friend auto operator<=>(const VarDecl&, const VarDecl&) = default;
};

// Verdict of a budget-bounded check. `exceeded` means the search space was cut
// by a budget before a witness was found; it is distinct from a definitive no.
enum class Tri : uint8_t { no, yes, exceeded };

inline Tri tri_of(bool b) { return b ? Tri::yes : Tri::no; }
inline Tri tri_or(Tri a, Tri b) {
  if (a == Tri::yes || b == Tri::yes) return Tri::yes;
  if (a == Tri::exceeded || b == Tri::exceeded) return Tri::exceeded;
  return Tri::no;
}
inline Tri tri_and(Tri a, Tri b) {
  if (a == Tri::no || b == Tri::no) return Tri::no;
  if (a == Tri::exceeded || b == Tri::exceeded) return Tri::exceeded;
  return Tri::yes;
}
inline Tri tri_not(Tri a) {
  if (a == Tri::exceeded) return Tri::exceeded;
  return a == Tri::yes ? Tri::no : Tri::yes;
}
const char* to_string(Tri t);

// Error on malformed textual input (bad syntax, unknown symbol, ill-sorted
// sentence, divergent model table, ...). Carries a 1-based position when the
// source is a file; 0/0 for programmatic input.
class InputError : public std::runtime_error {
 public:
  InputError(std::string msg, int line = 0, int col = 0)
      : std::runtime_error(line > 0 ? std::to_string(line) + ":" + std::to_string(col) + ": " + msg
                                    : msg),
        line_(line),
        col_(col) {}
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_, col_;
};

// Result of a structural validity check; empty = valid.
struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
  void add(std::string v) { violations.push_back(std::move(v)); }
  std::string joined() const {
    std::string out;
    for (const auto& v : violations) {
      if (!out.empty()) out += "; ";
      out += v;
    }
    return out;
  }
};

}  // namespace hdfol
