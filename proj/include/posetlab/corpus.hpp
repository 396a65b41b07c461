#pragma once

// Named posets used by the acceptance run and the CLI. Ranks stay at or
// below 5; order complexes grow too fast beyond that.

#include <string>
#include <vector>

#include "posetlab/constructions.hpp"
#include "posetlab/error.hpp"
#include "posetlab/poset.hpp"

namespace posetlab {

enum class CorpusGroup { Base, Pyramid, Product };

struct CorpusEntry {
  std::string name;
  CorpusGroup group;
  GradedPoset poset;
  bool lattice;     // declared; tests recompute it
  bool gorenstein;  // declared Gorenstein*
};

namespace detail {

inline std::vector<CorpusEntry> build_corpus() {
  std::vector<CorpusEntry> c;
  auto add = [&](std::string name, CorpusGroup g, GradedPoset p, bool lattice) {
    c.push_back({std::move(name), g, std::move(p), lattice, true});
  };
  for (int m = 2; m <= 8; ++m) add("polygon" + std::to_string(m), CorpusGroup::Base, polygon(m), m >= 3);
  for (int k = 2; k <= 5; ++k) add("boolean" + std::to_string(k), CorpusGroup::Base, boolean_algebra(k), true);
  add("cube3", CorpusGroup::Base, cube(3), true);
  add("cross3", CorpusGroup::Base, cross_polytope(3), true);

  for (int m = 2; m <= 8; ++m)
    add("pyr(polygon" + std::to_string(m) + ")", CorpusGroup::Pyramid, pyr_poset(polygon(m)), m >= 3);
  add("pyr(boolean3)", CorpusGroup::Pyramid, pyr_poset(boolean_algebra(3)), true);
  add("pyr(boolean4)", CorpusGroup::Pyramid, pyr_poset(boolean_algebra(4)), true);
  add("pyr(cube3)", CorpusGroup::Pyramid, pyr_poset(cube(3)), true);
  add("pyr(cross3)", CorpusGroup::Pyramid, pyr_poset(cross_polytope(3)), true);
  add("pyr(pyr(polygon4))", CorpusGroup::Pyramid, pyr_poset(pyr_poset(polygon(4))), true);

  add("sum(boolean2,polygon4)", CorpusGroup::Product, product(boolean_algebra(2), polygon(4)), true);
  add("sum(boolean2,polygon5)", CorpusGroup::Product, product(boolean_algebra(2), polygon(5)), true);
  add("sum(polygon3,polygon4)", CorpusGroup::Product, product(polygon(3), polygon(4)), true);
  add("join(polygon2,boolean2)", CorpusGroup::Product, cartesian_product(polygon(2), boolean_algebra(2)), false);
  add("join(polygon3,polygon4)", CorpusGroup::Product, cartesian_product(polygon(3), polygon(4)), true);
  add("star(boolean2,polygon5)", CorpusGroup::Product, star_product(boolean_algebra(2), polygon(5)), false);
  add("star(polygon3,polygon4)", CorpusGroup::Product, star_product(polygon(3), polygon(4)), false);
  add("star(polygon2,boolean3)", CorpusGroup::Product, star_product(polygon(2), boolean_algebra(3)), false);
  return c;
}

}  // namespace detail

inline const std::vector<CorpusEntry>& corpus() {
  static const std::vector<CorpusEntry> c = detail::build_corpus();
  return c;
}

inline const CorpusEntry& corpus_entry(std::string_view name) {
  for (const auto& e : corpus())
    if (e.name == name) return e;
  throw Error(Errc::UnknownElement, "no corpus entry '" + std::string(name) + "'");
}

/// Lattices for the inequality and decomposition checks: polygons 3..8,
/// boolean 3..5, cube, cross, and their pyramids of rank at most 4.
inline std::vector<const CorpusEntry*> inequality_corpus() {
  std::vector<const CorpusEntry*> out;
  for (const auto& e : corpus()) {
    if (!e.lattice || e.group == CorpusGroup::Product || e.name == "boolean2") continue;
    if (e.poset.rank() > 4 || e.name == "pyr(pyr(polygon4))") continue;
    out.push_back(&e);
  }
  return out;
}

}  // namespace posetlab
