#include "hybridpir/pir_engine.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <string>
#include <tuple>

#include "hybridpir/errors.hpp"

namespace hybridpir {

namespace {

std::uint32_t bit(int message) { return std::uint32_t{1} << message; }

// r-subsets of the messages as bitmasks, lexicographic in the sorted members.
std::vector<std::uint32_t> message_subsets(int messages, int size) {
  std::vector<std::uint32_t> out;
  for (const auto& members : enumerate_subsets(messages, size)) {
    std::uint32_t mask = 0;
    for (int m : members) mask |= bit(m);
    out.push_back(mask);
  }
  return out;
}

std::vector<int> members_of(std::uint32_t mask) {
  std::vector<int> out;
  for (int m = 0; mask != 0; ++m, mask >>= 1) {
    if (mask & 1u) out.push_back(m);
  }
  return out;
}

// Instance i is downloaded at grid[i]. Databases are laid out with their load
// as multiplicity and read column-major, so a database with load <= I never
// lands twice in one instance.
std::vector<std::vector<int>> assign_download_databases(const std::vector<int>& subset,
                                                        const std::vector<std::int64_t>& load,
                                                        std::int64_t instances, int dimension) {
  std::vector<int> sequence;
  for (int n : subset) {
    if (load[n] > instances) {
      throw FeasibilityError("database " + std::to_string(n + 1) + " load " +
                             std::to_string(load[n]) + " exceeds " + std::to_string(instances) +
                             " instances");
    }
    sequence.insert(sequence.end(), static_cast<std::size_t>(load[n]), n);
  }
  if (static_cast<std::int64_t>(sequence.size()) != instances * dimension) {
    throw FeasibilityError("partition loads do not sum to K * I");
  }
  std::vector<std::vector<int>> grid(instances);
  for (int k = 0; k < dimension; ++k) {
    for (std::int64_t i = 0; i < instances; ++i) grid[i].push_back(sequence[k * instances + i]);
  }
  return grid;
}

}  // namespace

PermutationState PermutationState::identity(const SystemParams& params, const PartitionMap& pmap) {
  PermutationState s;
  s.order.resize(params.messages);
  for (auto& per_message : s.order) {
    per_message.resize(pmap.size());
    for (std::size_t p = 0; p < pmap.size(); ++p) {
      per_message[p].resize(pmap.rows[p].size());
      std::iota(per_message[p].begin(), per_message[p].end(), 0);
    }
  }
  return s;
}

PermutationState PermutationState::random(const SystemParams& params, const PartitionMap& pmap,
                                          Rng& rng) {
  auto s = identity(params, pmap);
  for (auto& per_message : s.order) {
    for (auto& perm : per_message) shuffle(std::span(perm), rng);
  }
  return s;
}

std::int64_t RetrievalSchedule::total_atoms() const {
  std::int64_t total = 0;
  for (const auto& per_db : atoms) total += static_cast<std::int64_t>(per_db.size());
  return total;
}

RetrievalSchedule build_schedule(const SystemParams& params, const PartitionMap& pmap,
                                 int desired, const PermutationState& perms) {
  validate_parameters(params.databases, params.messages, params.span, params.dimension);
  return build_schedule(params, pmap, compute_round_loads(params, pmap.subsets), desired, perms);
}

RetrievalSchedule build_schedule(const SystemParams& params, const PartitionMap& pmap,
                                 const RoundLoads& loads, int desired,
                                 const PermutationState& perms) {
  validate_parameters(params.databases, params.messages, params.span, params.dimension);
  if (desired < 0 || desired >= params.messages) {
    throw DomainError("desired message " + std::to_string(desired + 1) + " outside [1, " +
                      std::to_string(params.messages) + "]");
  }
  const auto partitions = static_cast<int>(pmap.size());
  if (static_cast<int>(perms.order.size()) != params.messages) {
    throw ConfigurationError("permutation state does not cover every message");
  }
  for (const auto& per_message : perms.order) {
    if (static_cast<int>(per_message.size()) != partitions) {
      throw ConfigurationError("permutation state does not cover every partition");
    }
  }

  RetrievalSchedule s;
  s.params = params;
  s.desired = desired;
  s.atoms.resize(params.databases);

  std::vector<std::vector<std::size_t>> next_slot(params.messages,
                                                  std::vector<std::size_t>(partitions, 0));
  auto fresh_row = [&](int m, int p) {
    auto& slot = next_slot[m][p];
    const auto& perm = perms.order[m][p];
    if (slot >= perm.size()) {
      throw FeasibilityError("partition " + std::to_string(p) + " of message " +
                             std::to_string(m + 1) + " has no fresh rows left");
    }
    return RowRef{m, pmap.rows[p].at(perm[slot++])};
  };

  // Undesired instances by (round, subset, partition), for next-round reuse.
  std::map<std::tuple<int, std::uint32_t, int>, std::vector<std::size_t>> undesired_by_key;

  for (int r = 1; r <= params.messages; ++r) {
    const auto instances = params.instances_per_round[r - 1];
    if (instances == 0) continue;
    for (const auto subset : message_subsets(params.messages, r)) {
      const bool has_desired = (subset & bit(desired)) != 0;
      for (int p = 0; p < partitions; ++p) {
        const auto& members = pmap.subsets[p];
        const auto grid =
            assign_download_databases(members, loads.at(r - 1).at(p), instances, params.dimension);

        if (!has_desired) {
          auto& list = undesired_by_key[{r, subset, p}];
          for (std::int64_t i = 0; i < instances; ++i) {
            SumInstance inst;
            inst.id = s.instances.size();
            inst.round = r;
            inst.kind = InstanceKind::kUndesired;
            inst.subset = subset;
            inst.partition = p;
            for (int m : members_of(subset)) inst.rows.push_back(fresh_row(m, p));
            inst.download_databases = grid[i];
            for (int n : members) {
              if (std::find(grid[i].begin(), grid[i].end(), n) == grid[i].end()) {
                inst.reuse_databases.push_back(n);
              }
            }
            for (int n : grid[i]) {
              s.atoms[n].push_back(QueryAtom{n, r, subset, p, inst.id, std::nullopt, inst.rows});
            }
            list.push_back(inst.id);
            s.instances.push_back(std::move(inst));
          }
          continue;
        }

        std::vector<std::deque<std::size_t>> side(params.databases);
        if (r >= 2) {
          const auto it = undesired_by_key.find({r - 1, subset & ~bit(desired), p});
          if (it != undesired_by_key.end()) {
            for (auto id : it->second) {
              for (int n : s.instances[id].reuse_databases) side[n].push_back(id);
            }
          }
        }
        for (std::int64_t i = 0; i < instances; ++i) {
          SumInstance inst;
          inst.id = s.instances.size();
          inst.round = r;
          inst.kind = InstanceKind::kDesired;
          inst.subset = subset;
          inst.partition = p;
          inst.rows.push_back(fresh_row(desired, p));
          inst.download_databases = grid[i];
          for (int n : grid[i]) {
            QueryAtom atom{n, r, subset, p, inst.id, std::nullopt, inst.rows};
            if (r >= 2) {
              if (side[n].empty()) {
                throw FeasibilityError("database " + std::to_string(n + 1) +
                                       " has no side information left in round " +
                                       std::to_string(r));
              }
              const auto sid = side[n].front();
              side[n].pop_front();
              atom.side_instance = sid;
              const auto& extra = s.instances[sid].rows;
              atom.rows.insert(atom.rows.end(), extra.begin(), extra.end());
              std::sort(atom.rows.begin(), atom.rows.end());
            }
            s.atoms[n].push_back(std::move(atom));
          }
          s.instances.push_back(std::move(inst));
        }
        for (int n = 0; n < params.databases; ++n) {
          if (!side[n].empty()) {
            throw FeasibilityError("side information left unused at database " +
                                   std::to_string(n + 1) + " in round " + std::to_string(r));
          }
        }
      }
    }
  }
  return s;
}

QueryBundle queries_from_schedule(const RetrievalSchedule& schedule, Rng& rng) {
  QueryBundle bundle;
  const auto databases = schedule.atoms.size();
  bundle.queries.resize(databases);
  bundle.origin.resize(databases);
  for (std::size_t n = 0; n < databases; ++n) {
    const auto& atoms = schedule.atoms[n];
    std::vector<std::size_t> order(atoms.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](auto a, auto b) { return atoms[a].rows < atoms[b].rows; });
    shuffle(std::span(order), rng);
    auto& q = bundle.queries[n];
    q.database = static_cast<int>(n);
    q.atoms.reserve(order.size());
    for (auto i : order) q.atoms.push_back(atoms[i].rows);
    bundle.origin[n] = std::move(order);
  }
  return bundle;
}

AnswerSet answer(const DatabaseContent& content, const QuerySet& query, const MdsCodebook& cb) {
  if (query.database != content.database()) {
    throw ConfigurationError("query for database " + std::to_string(query.database + 1) +
                             " sent to database " + std::to_string(content.database() + 1));
  }
  AnswerSet out;
  out.database = content.database();
  out.values.reserve(query.atoms.size());
  for (const auto& atom : query.atoms) {
    if (atom.empty()) throw ProtocolViolationError("empty query atom");
    auto acc = cb.field().zero();
    for (const auto& ref : atom) acc = add(acc, content.symbol(ref.message, ref.row));
    out.values.push_back(acc);
  }
  return out;
}

std::vector<MessageRow> decode(const RetrievalSchedule& schedule, const QueryBundle& bundle,
                               const std::vector<AnswerSet>& answers, const MdsCodebook& cb,
                               std::vector<DecodeStep>* trace) {
  const auto databases = schedule.atoms.size();
  if (answers.size() != databases || bundle.origin.size() != databases) {
    throw DecodingIntegrityError("expected answers from " + std::to_string(databases) +
                                 " databases, got " + std::to_string(answers.size()));
  }

  // value[n][k]: answer to schedule atom k at database n.
  std::vector<std::vector<std::optional<FieldElement>>> value(databases);
  for (std::size_t n = 0; n < databases; ++n) {
    const auto& a = answers[n];
    const auto expected = schedule.atoms[n].size();
    if (a.database != static_cast<int>(n) || a.values.size() != expected ||
        bundle.origin[n].size() != expected) {
      throw DecodingIntegrityError("answer set for database " + std::to_string(n + 1) +
                                   " does not match its query");
    }
    value[n].resize(expected);
    for (std::size_t i = 0; i < expected; ++i) {
      const auto k = bundle.origin[n][i];
      if (k >= expected || value[n][k]) {
        throw DecodingIntegrityError("query order map is not a permutation");
      }
      if (!(a.values[i].field() == cb.field())) {
        throw DecodingIntegrityError("answer symbol from a different field");
      }
      value[n][k] = a.values[i];
    }
  }

  std::vector<std::vector<std::pair<int, std::size_t>>> atoms_of(schedule.instances.size());
  for (std::size_t n = 0; n < databases; ++n) {
    for (std::size_t k = 0; k < schedule.atoms[n].size(); ++k) {
      atoms_of.at(schedule.atoms[n][k].instance).push_back({static_cast<int>(n), k});
    }
  }

  const auto rows = static_cast<std::size_t>(schedule.params.rows_per_message);
  std::vector<std::optional<MessageRow>> message(rows);
  std::vector<std::optional<MessageRow>> sums(schedule.instances.size());

  try {
    for (const auto& inst : schedule.instances) {
      std::vector<Share> shares;
      DecodeStep step{inst.id, inst.round, inst.kind, {}, {}};
      for (auto [n, k] : atoms_of[inst.id]) {
        const auto& atom = schedule.atoms[n][k];
        auto v = *value[n][k];
        if (atom.side_instance) {
          const auto& known = sums.at(*atom.side_instance);
          if (!known) throw DecodingIntegrityError("side information used before it was decoded");
          v = sub(v, encode_symbol(cb, static_cast<std::size_t>(n), *known));
        }
        shares.push_back({static_cast<std::size_t>(n), v});
        step.databases.push_back(n);
        step.cancelled.push_back(atom.side_instance);
      }
      auto row = decode_row(cb, shares);
      if (inst.kind == InstanceKind::kUndesired) {
        sums[inst.id] = std::move(row);
      } else {
        auto& slot = message.at(static_cast<std::size_t>(inst.rows.front().row));
        if (slot) throw DecodingIntegrityError("desired row decoded twice");
        slot = std::move(row);
      }
      if (trace != nullptr) trace->push_back(std::move(step));
    }
  } catch (const InsufficientSharesError& e) {
    throw DecodingIntegrityError(e.what());
  } catch (const CorruptionError& e) {
    throw DecodingIntegrityError(e.what());
  }

  std::vector<MessageRow> out;
  out.reserve(rows);
  for (std::size_t j = 0; j < rows; ++j) {
    if (!message[j]) {
      throw DecodingIntegrityError("row " + std::to_string(j + 1) + " of the desired message was not recovered");
    }
    out.push_back(std::move(*message[j]));
  }
  return out;
}

Rational normalized_download_cost(const RetrievalSchedule& schedule) {
  return Rational(schedule.total_atoms(), schedule.params.message_length);
}

}  // namespace hybridpir
