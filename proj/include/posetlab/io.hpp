#pragma once

// JSON and text formats for posets, polynomials and maps.

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "posetlab/constructions.hpp"
#include "posetlab/error.hpp"
#include "posetlab/ncpoly.hpp"
#include "posetlab/poset.hpp"

namespace posetlab::io {

using Json = nlohmann::ordered_json;

inline Json to_json(const GradedPoset& p) {
  Json elems = Json::array();
  for (std::size_t i = 0; i < p.size(); ++i)
    elems.push_back({{"id", i}, {"rank", p.rank_of(i)}, {"label", p.label(i)}});
  Json covers = Json::array();
  for (auto [lo, hi] : p.covers()) covers.push_back({lo, hi});
  return {{"n", p.rank()}, {"elements", std::move(elems)}, {"covers", std::move(covers)}};
}

namespace detail {

template <class T>
T field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(Errc::ParseError, std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ParseError, std::string("field '") + key + "': " + e.what());
  }
}

}  // namespace detail

/// Accepts a bare poset, or a document carrying one under "poset" or
/// "target" (so build outputs chain into any consumer).
inline GradedPoset poset_from_json(const Json& j) {
  if (j.is_object() && !j.contains("elements")) {
    if (j.contains("poset")) return poset_from_json(j.at("poset"));
    if (j.contains("target")) return poset_from_json(j.at("target"));
  }
  const int n = detail::field<int>(j, "n");
  const Json& elems = j.at("elements");
  if (!elems.is_array()) throw Error(Errc::ParseError, "'elements' must be an array");
  const std::size_t m = elems.size();
  std::vector<int> ranks(m, -1);
  std::vector<std::string> labels(m);
  std::vector<bool> seen(m, false);
  for (const auto& e : elems) {
    const auto id = detail::field<long>(e, "id");
    if (id < 0 || static_cast<std::size_t>(id) >= m || seen[id])
      throw Error(Errc::ParseError, "element ids must be 0..m-1 without repeats");
    seen[id] = true;
    ranks[id] = detail::field<int>(e, "rank");
    labels[id] = e.contains("label") ? e.at("label").get<std::string>() : std::to_string(id);
  }
  CoverList covers;
  for (const auto& c : j.value("covers", Json::array())) {
    if (!c.is_array() || c.size() != 2) throw Error(Errc::ParseError, "a cover is a pair [lo, hi]");
    covers.emplace_back(c[0].get<ElementId>(), c[1].get<ElementId>());
  }
  return GradedPoset::from_covers(n, std::move(ranks), covers, std::move(labels));
}

template <Alphabet A>
Json to_json(const NcPoly<A>& p) {
  Json terms = Json::array();
  for (const auto& [w, c] : p.terms()) terms.push_back({{"word", w.str()}, {"coeff", c.get_str()}});
  return {{"alphabet", A == Alphabet::AB ? "ab" : "cd"}, {"terms", std::move(terms)}};
}

template <Alphabet A>
NcPoly<A> poly_from_json(const Json& j) {
  const auto alpha = detail::field<std::string>(j, "alphabet");
  if (alpha != (A == Alphabet::AB ? "ab" : "cd")) throw Error(Errc::ParseError, "unexpected alphabet " + alpha);
  NcPoly<A> out;
  for (const auto& t : j.at("terms")) {
    Integer c;
    if (c.set_str(detail::field<std::string>(t, "coeff"), 10) != 0) throw Error(Errc::ParseError, "bad coefficient");
    out.add_term(Word<A>::from_string(detail::field<std::string>(t, "word")), c);
  }
  return out;
}

inline Json to_json(const PosetMap& f) {
  Json assignment = Json::array();
  for (std::size_t i = 0; i < f.assignment.size(); ++i) assignment.push_back({i, f.assignment[i]});
  return {{"source", to_json(f.source)}, {"target", to_json(f.target)}, {"assignment", std::move(assignment)}};
}

inline PosetMap map_from_json(const Json& j) {
  PosetMap f{poset_from_json(j.at("source")), poset_from_json(j.at("target")), {}};
  f.assignment.assign(f.source.size(), f.target.size());
  for (const auto& pr : j.at("assignment")) {
    const auto s = pr.at(0).get<ElementId>(), t = pr.at(1).get<ElementId>();
    if (s >= f.source.size()) throw Error(Errc::UnknownElement, "assignment source " + std::to_string(s));
    f.assignment[s] = t;
  }
  for (auto t : f.assignment)
    if (t >= f.target.size()) throw Error(Errc::UnknownElement, "assignment is incomplete or leaves the target");
  return f;
}

/// Reads a whole file; "-" is stdin.
inline std::string slurp(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
  std::ifstream in(path);
  if (!in) throw Error(Errc::ParseError, "cannot open " + path);
  return {std::istreambuf_iterator<char>(in), {}};
}

inline Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ParseError, e.what());
  }
}

inline GradedPoset read_poset(const std::string& path) { return poset_from_json(parse(slurp(path))); }
inline PosetMap read_map(const std::string& path) { return map_from_json(parse(slurp(path))); }

}  // namespace posetlab::io
