#include <gtest/gtest.h>

#include "posetlab/constructions.hpp"
#include "posetlab/corpus.hpp"
#include "posetlab/flag_enum.hpp"
#include "posetlab/io.hpp"

using namespace posetlab;
using io::Json;

TEST(Io, PosetRoundTripIsByteStable) {
  for (const auto& e : corpus()) {
    const std::string once = io::to_json(e.poset).dump();
    const auto back = io::poset_from_json(Json::parse(once));
    EXPECT_EQ(io::to_json(back).dump(), once) << e.name;
    EXPECT_EQ(back.labels(), e.poset.labels());
  }
}

TEST(Io, PosetSchema) {
  const auto j = io::to_json(polygon(3));
  EXPECT_EQ(j.at("n"), 2);
  EXPECT_EQ(j.at("elements").size(), 7u);
  EXPECT_EQ(j.at("elements")[0].at("rank"), 0);
  EXPECT_EQ(j.at("covers").size(), 9u);
}

TEST(Io, ElementOrderAndLabelsAreOptional) {
  const auto j = Json::parse(R"({"n":1,"elements":[{"id":2,"rank":1},{"id":0,"rank":0},{"id":1,"rank":1}],
                                 "covers":[[0,1],[0,2]]})");
  const auto p = io::poset_from_json(j);
  EXPECT_EQ(p.size(), 3u);
  EXPECT_EQ(p.label(2), "2");
  EXPECT_EQ(cd_index(p), cd_c());
}

TEST(Io, MalformedPosets) {
  auto code = [](const char* text) {
    try {
      io::poset_from_json(Json::parse(text));
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::BadBase;
  };
  EXPECT_EQ(code(R"({"elements":[]})"), Errc::ParseError);
  EXPECT_EQ(code(R"({"n":1,"elements":[{"id":0,"rank":0},{"id":0,"rank":1}],"covers":[]})"), Errc::ParseError);
  EXPECT_EQ(code(R"({"n":1,"elements":[{"id":0,"rank":1},{"id":1,"rank":0}],"covers":[[1,0]]})"), Errc::NoBottom);
  EXPECT_EQ(code(R"({"n":1,"elements":[{"id":0,"rank":0},{"id":1,"rank":1}],"covers":[[0]]})"), Errc::ParseError);
  EXPECT_THROW(io::parse("{not json"), Error);
}

TEST(Io, WrappedPosets) {
  const auto pair = remove_upset(polygon(4), 1);
  const Json doc{{"poset", io::to_json(pair.poset)}, {"boundary", pair.boundary}};
  EXPECT_EQ(io::poset_from_json(doc).size(), pair.poset.size());
  const auto f = subdivision_target_and_map(polygon(4), 1);
  EXPECT_TRUE(isomorphic(io::poset_from_json(io::to_json(f)), f.target));
}

TEST(Io, PolynomialJson) {
  const auto q = parse_cd("c^3 + 6*cd + 4*dc");
  const auto j = io::to_json(q);
  EXPECT_EQ(j.dump(), R"({"alphabet":"cd","terms":[{"word":"ccc","coeff":"1"},{"word":"cd","coeff":"6"},{"word":"dc","coeff":"4"}]})");
  EXPECT_EQ(io::poly_from_json<Alphabet::CD>(j), q);
  const auto a = parse_ab("-3*ab + 123456789012345678901234567890*ba");
  EXPECT_EQ(io::poly_from_json<Alphabet::AB>(io::to_json(a)), a);
  EXPECT_THROW(io::poly_from_json<Alphabet::AB>(j), Error);
}

TEST(Io, MapRoundTrip) {
  const auto f = collapse_map(polygon(5), 1);
  const auto text = io::to_json(f).dump();
  const auto g = io::map_from_json(Json::parse(text));
  EXPECT_EQ(g.assignment, f.assignment);
  EXPECT_EQ(io::to_json(g).dump(), text);
  auto broken = Json::parse(text);
  broken["assignment"].erase(0);
  EXPECT_THROW(io::map_from_json(broken), Error);
}
