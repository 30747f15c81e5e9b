#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "hybridpir/pir_engine.hpp"

namespace hybridpir {

namespace {

bool stores_all(const PartitionMap& pmap, int database, const std::vector<RowRef>& rows) {
  return std::all_of(rows.begin(), rows.end(), [&](const RowRef& ref) {
    return pmap.stores(pmap.partition_of_row.at(ref.row), database);
  });
}

bool distinct(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  return std::adjacent_find(v.begin(), v.end()) == v.end();
}

std::uint32_t message_mask(const std::vector<RowRef>& rows) {
  std::uint32_t mask = 0;
  for (const auto& r : rows) mask |= std::uint32_t{1} << r.message;
  return mask;
}

}  // namespace

std::vector<std::string> check_schedule_invariants(const RetrievalSchedule& schedule,
                                                   const PartitionMap& pmap) {
  std::vector<std::string> v;
  const auto& params = schedule.params;
  const int k = params.dimension;
  const int t = params.span;
  const auto tag = [](const SumInstance& inst) {
    return "instance " + std::to_string(inst.id) + " (round " + std::to_string(inst.round) + ")";
  };

  // Atoms per instance and side-information uses per instance.
  std::vector<std::vector<const QueryAtom*>> atoms_of(schedule.instances.size());
  std::vector<std::vector<int>> reused_at(schedule.instances.size());
  for (const auto& per_db : schedule.atoms) {
    for (const auto& atom : per_db) {
      if (atom.instance >= schedule.instances.size()) {
        v.push_back("atom references unknown instance");
        continue;
      }
      atoms_of[atom.instance].push_back(&atom);
      if (atom.side_instance) reused_at.at(*atom.side_instance).push_back(atom.database);
    }
  }

  std::set<std::int64_t> desired_rows;
  for (const auto& inst : schedule.instances) {
    const auto& dl = inst.download_databases;
    if (static_cast<int>(dl.size()) != k || !distinct(dl)) {
      v.push_back(tag(inst) + " is not downloaded at exactly K distinct databases");
    }
    for (int n : dl) {
      if (!stores_all(pmap, n, inst.rows)) {
        v.push_back(tag(inst) + " downloaded at database " + std::to_string(n + 1) +
                    " which lacks some of its rows");
      }
    }
    std::vector<int> atom_dbs;
    for (const auto* atom : atoms_of[inst.id]) {
      atom_dbs.push_back(atom->database);
      const bool carries = std::all_of(inst.rows.begin(), inst.rows.end(), [&](const RowRef& r) {
        return std::find(atom->rows.begin(), atom->rows.end(), r) != atom->rows.end();
      });
      if (!carries) v.push_back(tag(inst) + " has an atom that does not carry its rows");
      if (inst.kind == InstanceKind::kUndesired && atom->rows != inst.rows) {
        v.push_back(tag(inst) + " is not the same sum at every download database");
      }
    }
    std::sort(atom_dbs.begin(), atom_dbs.end());
    auto sorted_dl = dl;
    std::sort(sorted_dl.begin(), sorted_dl.end());
    if (atom_dbs != sorted_dl) v.push_back(tag(inst) + " atoms disagree with its download set");

    if (inst.kind == InstanceKind::kDesired) {
      if (inst.rows.size() != 1 || inst.rows.front().message != schedule.desired) {
        v.push_back(tag(inst) + " is not a single desired row");
      } else if (!desired_rows.insert(inst.rows.front().row).second) {
        v.push_back(tag(inst) + " repeats desired row " + std::to_string(inst.rows.front().row + 1));
      }
      if (!reused_at[inst.id].empty()) v.push_back(tag(inst) + " is desired but used as side information");
      continue;
    }

    if (message_mask(inst.rows) != inst.subset || inst.rows.size() != static_cast<std::size_t>(inst.round)) {
      v.push_back(tag(inst) + " rows do not match its message subset");
    }
    if ((inst.subset >> schedule.desired) & 1u) v.push_back(tag(inst) + " contains the desired message");
    const auto& reuse = inst.reuse_databases;
    if (static_cast<int>(reuse.size()) != t - k || !distinct(reuse)) {
      v.push_back(tag(inst) + " is not reused at exactly t-K distinct databases");
    }
    for (int n : reuse) {
      if (std::find(dl.begin(), dl.end(), n) != dl.end()) {
        v.push_back(tag(inst) + " reused at one of its download databases");
      }
      if (!stores_all(pmap, n, inst.rows)) {
        v.push_back(tag(inst) + " reused at database " + std::to_string(n + 1) +
                    " which lacks some of its rows");
      }
    }
    auto used = reused_at[inst.id];
    auto planned = reuse;
    std::sort(used.begin(), used.end());
    std::sort(planned.begin(), planned.end());
    if (used != planned) {
      v.push_back(tag(inst) + " side-information uses differ from its reuse set");
    }
  }
  if (static_cast<std::int64_t>(desired_rows.size()) != params.rows_per_message) {
    v.push_back("desired rows decoded: " + std::to_string(desired_rows.size()) + " of " +
                std::to_string(params.rows_per_message));
  }

  // Per-database checks: storage, repeated rows, counts per (round, subset).
  for (std::size_t n = 0; n < schedule.atoms.size(); ++n) {
    const auto db = std::to_string(n + 1);
    std::set<RowRef> seen;
    std::map<std::pair<int, std::uint32_t>, std::int64_t> per_subset;
    std::map<std::pair<int, int>, std::int64_t> per_message;
    for (const auto& atom : schedule.atoms[n]) {
      if (atom.database != static_cast<int>(n)) v.push_back("atom filed under the wrong database " + db);
      if (message_mask(atom.rows) != atom.subset ||
          atom.rows.size() != static_cast<std::size_t>(atom.round)) {
        v.push_back("atom at database " + db + " does not reference one row per message of its subset");
      }
      if (!stores_all(pmap, static_cast<int>(n), atom.rows)) {
        v.push_back("atom at database " + db + " references a row not stored there");
      }
      for (const auto& r : atom.rows) {
        if (!seen.insert(r).second) {
          v.push_back("database " + db + " is asked for row " + std::to_string(r.row + 1) +
                      " of message " + std::to_string(r.message + 1) + " twice");
        }
        ++per_message[{atom.round, r.message}];
      }
      ++per_subset[{atom.round, atom.subset}];
    }
    for (int r = 1; r <= params.messages; ++r) {
      const auto expected = params.atoms_per_round[r - 1];
      const auto subsets = binomial(params.messages, r);
      std::int64_t found_subsets = 0;
      for (const auto& [key, count] : per_subset) {
        if (key.first != r) continue;
        ++found_subsets;
        if (count != expected) {
          v.push_back("database " + db + " round " + std::to_string(r) + " has " +
                      std::to_string(count) + " atoms for a subset, expected " +
                      std::to_string(expected));
        }
      }
      if (expected > 0 && found_subsets != subsets) {
        v.push_back("database " + db + " round " + std::to_string(r) + " covers " +
                    std::to_string(found_subsets) + " subsets, expected " + std::to_string(subsets));
      }
      const auto per_msg = binomial(params.messages - 1, r - 1) * expected;
      for (int m = 0; m < params.messages; ++m) {
        const auto it = per_message.find({r, m});
        const auto count = it == per_message.end() ? 0 : it->second;
        if (count != per_msg) {
          v.push_back("database " + db + " round " + std::to_string(r) + " message " +
                      std::to_string(m + 1) + " appears " + std::to_string(count) +
                      " times, expected " + std::to_string(per_msg));
        }
      }
    }
  }
  return v;
}

}  // namespace hybridpir
