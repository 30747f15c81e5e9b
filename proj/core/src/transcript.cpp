#include "hybridpir/transcript.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hybridpir/serialization.hpp"

namespace hybridpir {

using nlohmann::json;

std::string render_query_table(const RetrievalSchedule& schedule) {
  const auto databases = schedule.atoms.size();
  std::map<RowRef, std::int64_t> label;
  std::vector<std::int64_t> next(schedule.params.messages, 1);
  const auto name = [&](const RowRef& r) {
    auto [it, inserted] = label.try_emplace(r, 0);
    if (inserted) it->second = next[r.message]++;
    return "x" + std::to_string(it->second) + "[" + std::to_string(r.message + 1) + "]";
  };

  // Label in (round, database, position) order so round-one rows get the
  // smallest labels, as in the usual presentation.
  std::vector<std::vector<std::string>> cells(databases);
  std::vector<std::vector<int>> rounds(databases);
  for (int r = 1; r <= schedule.params.messages; ++r) {
    for (std::size_t n = 0; n < databases; ++n) {
      for (const auto& atom : schedule.atoms[n]) {
        if (atom.round != r) continue;
        // Desired row first, then side information.
        auto rows = atom.rows;
        std::stable_partition(rows.begin(), rows.end(),
                              [&](const RowRef& x) { return x.message == schedule.desired; });
        std::string cell = "h" + std::to_string(n + 1) + "'";
        if (rows.size() == 1) {
          cell += name(rows.front());
        } else {
          cell += "(";
          for (std::size_t i = 0; i < rows.size(); ++i) cell += (i ? "+" : "") + name(rows[i]);
          cell += ")";
        }
        cells[n].push_back(cell);
        rounds[n].push_back(r);
      }
    }
  }

  std::size_t width = 4;
  std::size_t height = 0;
  for (const auto& col : cells) {
    height = std::max(height, col.size());
    for (const auto& c : col) width = std::max(width, c.size());
  }
  std::ostringstream out;
  const auto rule = [&] {
    for (std::size_t n = 0; n < databases; ++n) out << '+' << std::string(width + 2, '-');
    out << "+\n";
  };
  rule();
  for (std::size_t n = 0; n < databases; ++n) {
    const auto head = "DB" + std::to_string(n + 1);
    out << "| " << head << std::string(width - head.size() + 1, ' ');
  }
  out << "|\n";
  rule();
  for (std::size_t i = 0; i < height; ++i) {
    if (i > 0 && !rounds.empty() && i < rounds[0].size() && rounds[0][i] != rounds[0][i - 1]) rule();
    for (std::size_t n = 0; n < databases; ++n) {
      const auto cell = i < cells[n].size() ? cells[n][i] : std::string();
      out << "| " << cell << std::string(width - cell.size() + 1, ' ');
    }
    out << "|\n";
  }
  rule();
  return out.str();
}

std::string transcript_to_json(const RetrievalSchedule& schedule, const QueryBundle& bundle,
                               const std::vector<AnswerSet>& answers,
                               const std::vector<DecodeStep>& trace, const TranscriptInfo& info) {
  const auto& p = schedule.params;
  json j;
  j["seed"] = info.seed;
  j["field"] = info.field;
  j["params"] = {{"N", p.databases}, {"M", p.messages},   {"t", p.span},
                 {"K", p.dimension}, {"c", p.multiplier}, {"R", p.rows_per_message},
                 {"L", p.message_length}, {"mu", to_string(p.storage_ratio())}};
  j["desired"] = schedule.desired + 1;

  json dbs = json::array();
  for (std::size_t n = 0; n < bundle.queries.size(); ++n) {
    json values = json::array();
    if (n < answers.size()) {
      for (const auto& v : answers[n].values) values.push_back(v.value());
    }
    dbs.push_back({{"query", json::parse(query_to_json(bundle.queries[n]))}, {"answers", values}});
  }
  j["databases"] = dbs;

  json steps = json::array();
  for (const auto& s : trace) {
    json dbs_used = json::array();
    json cancelled = json::array();
    for (std::size_t i = 0; i < s.databases.size(); ++i) {
      dbs_used.push_back(s.databases[i] + 1);
      cancelled.push_back(s.cancelled[i] ? json(*s.cancelled[i]) : json(nullptr));
    }
    steps.push_back({{"instance", s.instance},
                     {"round", s.round},
                     {"kind", s.kind == InstanceKind::kDesired ? "desired" : "undesired"},
                     {"databases", dbs_used},
                     {"cancelled_instances", cancelled}});
  }
  j["decode_trace"] = steps;
  j["decode_ok"] = info.decode_ok;
  j["answers_total"] = schedule.total_atoms();
  j["cost"] = to_string(normalized_download_cost(schedule));
  j["table"] = render_query_table(schedule);
  return j.dump(2);
}

}  // namespace hybridpir
