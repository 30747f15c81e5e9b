#include <gtest/gtest.h>

#include <map>
#include <set>
#include <regex>
#include <sstream>

#include "hybridpir/transcript.hpp"

namespace hybridpir {
namespace {

std::vector<std::vector<std::string>> table_cells(const std::string& table) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(table);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] != '|') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line.substr(1));
    std::string cell;
    while (std::getline(ss, cell, '|')) {
      const auto b = cell.find_first_not_of(' ');
      const auto e = cell.find_last_not_of(' ');
      cells.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
    }
    rows.push_back(cells);
  }
  return rows;
}

RetrievalSchedule golden_schedule(std::uint64_t seed) {
  const auto p = plan(6, 2, 5, 2);
  const auto pmap = build_partition_map(p);
  Rng rng(seed);
  return build_schedule(p, pmap, 0, PermutationState::random(p, pmap, rng));
}

TEST(Transcript, GoldenTableLayout) {
  const auto rows = table_cells(render_query_table(golden_schedule(1)));
  ASSERT_EQ(rows.size(), 15u);  // header + 14
  EXPECT_EQ(rows[0], (std::vector<std::string>{"DB1", "DB2", "DB3", "DB4", "DB5", "DB6"}));
  const std::regex single(R"(h\d'x\d+\[\d\])");
  const std::regex pair(R"(h\d'\(x\d+\[1\]\+x\d+\[2\]\))");
  for (std::size_t i = 1; i <= 14; ++i) {
    for (const auto& cell : rows[i]) {
      EXPECT_TRUE(std::regex_match(cell, i <= 8 ? single : pair)) << cell;
    }
  }
}

TEST(Transcript, RoundTwoDesiredRowsAppearInKColumns) {
  const auto rows = table_cells(render_query_table(golden_schedule(4)));
  std::map<std::string, std::set<std::size_t>> columns;
  const std::regex first(R"(\((x\d+\[1\])\+)");
  for (std::size_t i = 9; i <= 14; ++i) {
    for (std::size_t c = 0; c < rows[i].size(); ++c) {
      std::smatch m;
      ASSERT_TRUE(std::regex_search(rows[i][c], m, first));
      columns[m[1]].insert(c);
    }
  }
  EXPECT_EQ(columns.size(), 18u);
  for (const auto& [label, cols] : columns) EXPECT_EQ(cols.size(), 2u) << label;
}

TEST(Transcript, SameSeedSameTable) {
  EXPECT_EQ(render_query_table(golden_schedule(9)), render_query_table(golden_schedule(9)));
}

}  // namespace
}  // namespace hybridpir
