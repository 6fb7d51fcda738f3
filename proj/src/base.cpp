#include "hdfol/base.hpp"

namespace hdfol {

std::string to_string(const SymName& s) {
  if (!s.pinned()) return s.base;
  return "(at " + s.at + " " + s.base + ")";
}

const char* to_string(Tri t) {
  switch (t) {
    case Tri::no: return "no";
    case Tri::yes: return "yes";
    case Tri::exceeded: return "exceeded";
  }
  return "?";
}

}  // namespace hdfol
