#include <gtest/gtest.h>

#include <sstream>

#include <nlohmann/json.hpp>

#include "hybridpir/errors.hpp"
#include "hybridpir/serialization.hpp"

namespace hybridpir {
namespace {

QuerySet random_query(Rng& rng) {
  QuerySet q;
  q.database = static_cast<int>(uniform_below(rng, 8));
  const auto atoms = uniform_below(rng, 20);
  for (std::uint64_t i = 0; i < atoms; ++i) {
    std::vector<RowRef> refs;
    const auto arity = 1 + uniform_below(rng, 4);
    for (std::uint64_t j = 0; j < arity; ++j) {
      refs.push_back({static_cast<int>(uniform_below(rng, 5)),
                      static_cast<std::int64_t>(uniform_below(rng, 1000))});
    }
    q.atoms.push_back(refs);
  }
  return q;
}

TEST(Serialization, QueryRoundTrips) {
  Rng rng(21);
  for (int i = 0; i < 200; ++i) {
    const auto q = random_query(rng);
    EXPECT_EQ(query_from_json(query_to_json(q)), q);
    EXPECT_EQ(query_from_binary(query_to_binary(q)), q);
  }
}

TEST(Serialization, QueryIdsAreOneBased) {
  const QuerySet q{2, {{RowRef{0, 4}, RowRef{1, 0}}}};
  const auto j = nlohmann::json::parse(query_to_json(q));
  EXPECT_EQ(j["database"], 3);
  EXPECT_EQ(j["atoms"][0][0][0], 1);
  EXPECT_EQ(j["atoms"][0][0][1], 5);
  EXPECT_THROW(query_from_json(R"({"database": 0, "atoms": []})"), ParseError);
  EXPECT_THROW(query_from_json("{"), ParseError);
}

TEST(Serialization, BinaryRejectsCorruptInput) {
  auto bytes = query_to_binary(QuerySet{1, {{RowRef{0, 1}}}});
  auto bad_magic = bytes;
  bad_magic[0] ^= 0xff;
  EXPECT_THROW(query_from_binary(bad_magic), ParseError);
  bytes.pop_back();
  EXPECT_THROW(query_from_binary(bytes), ParseError);
}

TEST(Serialization, MessagesRoundTrip) {
  const auto p = plan(6, 2, 5, 2);
  const Field f;
  Rng rng(1);
  const auto m = random_messages(p, f, rng);
  std::stringstream buf;
  write_messages(buf, m);
  const auto back = read_messages(buf, f);
  EXPECT_EQ(back.messages, m.messages);
}

TEST(Serialization, CodebookRoundTrip) {
  const auto cb = build_codebook(Field(FieldConfig::binary_extension(8)), 6, 3);
  const auto back = codebook_from_json(codebook_to_json(cb));
  EXPECT_EQ(back.field(), cb.field());
  for (std::size_t n = 0; n < 6; ++n) EXPECT_EQ(back.column(n), cb.column(n));
}

TEST(Serialization, CurveCsvRoundTrip) {
  for (int n = 1; n <= 7; ++n) {
    const auto pts = hybrid_corner_points(n, 3);
    EXPECT_EQ(curve_from_csv(curve_to_csv(pts)), pts);
    const auto hull = lower_convex_hull(pts);
    EXPECT_EQ(curve_from_csv(curve_to_csv(hull.points)), hull.points);
  }
  EXPECT_THROW(curve_from_csv("nonsense\n1,2\n"), ParseError);
}

TEST(Serialization, PlanJsonShape) {
  const auto p = plan(6, 2, 5, 2);
  const auto j = nlohmann::json::parse(plan_to_json(p, build_partition_map(p)));
  EXPECT_EQ(j["mu"], "5/12");
  EXPECT_EQ(j["R"], 30);
  EXPECT_EQ(j["partitions"][0]["rows"], (std::vector<int>{1, 7, 13, 19, 25}));
  EXPECT_EQ(j["partitions"][0]["databases"], (std::vector<int>{1, 2, 3, 4, 5}));
}

}  // namespace
}  // namespace hybridpir
