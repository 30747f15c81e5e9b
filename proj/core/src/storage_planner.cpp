#include "hybridpir/storage_planner.hpp"

#include <algorithm>
#include <string>

#include "hybridpir/errors.hpp"
#include "hybridpir/partition_loads.hpp"

namespace hybridpir {

Rational SystemParams::storage_ratio() const {
  return Rational(span, static_cast<std::int64_t>(dimension) * databases);
}

Rational storage_ratio(const SystemParams& params) { return params.storage_ratio(); }

void validate_parameters(int databases, int messages, int span, int dimension) {
  const auto describe = [&] {
    return "(N=" + std::to_string(databases) + ", M=" + std::to_string(messages) +
           ", t=" + std::to_string(span) + ", K=" + std::to_string(dimension) + ")";
  };
  if (databases < 1 || messages < 1) {
    throw InfeasibleParametersError("need N >= 1 and M >= 1, got " + describe());
  }
  if (span < 1 || span > databases || dimension < 1 || dimension > databases) {
    throw InfeasibleParametersError("need t, K in [1, N], got " + describe());
  }
  if (span < dimension) {
    throw InfeasibleParametersError("need t >= K, got " + describe());
  }
  if (messages > 30) {
    throw InfeasibleParametersError("at most 30 messages are supported, got " + describe());
  }
}

std::optional<SystemParams> params_for_multiplier(int databases, int messages, int span,
                                                  int dimension, std::int64_t multiplier) {
  validate_parameters(databases, messages, span, dimension);
  if (multiplier < 1) return std::nullopt;

  const std::int64_t n = databases, t = span, k = dimension;
  const std::int64_t partitions = binomial(databases, span);

  std::vector<std::int64_t> atoms(messages);
  std::int64_t power_k = 1;
  for (int i = 0; i < messages - 1; ++i) power_k *= k;
  // delta_r = c K^(M-r) (t-K)^(r-1)
  std::int64_t term = multiplier * power_k;
  for (int r = 0; r < messages; ++r) {
    atoms[r] = term;
    if (r + 1 < messages) term = term / k * (t - k);
  }

  // Round-one instances per partition: N delta_1 / (K P).
  const std::int64_t numerator = n * atoms[0];
  if (numerator % (k * partitions) != 0) return std::nullopt;
  std::vector<std::int64_t> instances(messages);
  instances[0] = numerator / (k * partitions);
  for (int r = 1; r < messages; ++r) {
    const std::int64_t scaled = instances[r - 1] * (t - k);
    if (scaled % k != 0) return std::nullopt;
    instances[r] = scaled / k;
  }

  SystemParams p;
  p.databases = databases;
  p.messages = messages;
  p.span = span;
  p.dimension = dimension;
  p.multiplier = multiplier;
  p.partitions = partitions;
  p.rows_per_partition = 0;
  for (int r = 0; r < messages; ++r) {
    p.rows_per_partition += binomial(messages - 1, r) * instances[r];
  }
  p.rows_per_message = partitions * p.rows_per_partition;
  p.message_length = p.rows_per_message * k;
  p.instances_per_round = std::move(instances);
  p.atoms_per_round = std::move(atoms);
  return p;
}

SystemParams plan(int databases, int messages, int span, int dimension,
                  std::int64_t max_multiplier) {
  validate_parameters(databases, messages, span, dimension);
  const auto subsets = enumerate_subsets(databases, span);
  for (std::int64_t c = 1; c <= max_multiplier; ++c) {
    auto p = params_for_multiplier(databases, messages, span, dimension, c);
    if (!p) continue;
    try {
      compute_round_loads(*p, subsets);
    } catch (const FeasibilityError&) {
      continue;
    }
    return *p;
  }
  throw FeasibilityError("no feasible subpacketization up to c = " +
                         std::to_string(max_multiplier));
}

std::vector<std::vector<int>> enumerate_subsets(int databases, int span) {
  std::vector<std::vector<int>> out;
  if (span < 0 || span > databases) return out;
  std::vector<int> current(span);
  for (int i = 0; i < span; ++i) current[i] = i;
  while (true) {
    out.push_back(current);
    int i = span - 1;
    while (i >= 0 && current[i] == databases - span + i) --i;
    if (i < 0) break;
    ++current[i];
    for (int j = i + 1; j < span; ++j) current[j] = current[j - 1] + 1;
  }
  return out;
}

bool PartitionMap::stores(int partition, int database) const {
  const auto& s = subsets.at(partition);
  return std::binary_search(s.begin(), s.end(), database);
}

std::vector<int> PartitionMap::partitions_at(int database) const {
  std::vector<int> out;
  for (std::size_t p = 0; p < subsets.size(); ++p) {
    if (stores(static_cast<int>(p), database)) out.push_back(static_cast<int>(p));
  }
  return out;
}

PartitionMap build_partition_map(const SystemParams& params) {
  PartitionMap map;
  map.databases = params.databases;
  map.subsets = enumerate_subsets(params.databases, params.span);
  const auto count = static_cast<std::int64_t>(map.subsets.size());
  map.rows.assign(map.subsets.size(), {});
  map.partition_of_row.resize(params.rows_per_message);
  for (std::int64_t j = 0; j < params.rows_per_message; ++j) {
    map.rows[j % count].push_back(j);
    map.partition_of_row[j] = static_cast<int>(j % count);
  }
  return map;
}

std::size_t MessageSet::row_length() const {
  if (messages.empty() || messages.front().empty()) return 0;
  return messages.front().front().size();
}

MessageSet random_messages(const SystemParams& params, const Field& field, Rng& rng) {
  MessageSet set;
  set.messages.resize(params.messages);
  for (auto& message : set.messages) {
    message.resize(params.rows_per_message);
    for (auto& row : message) {
      row.reserve(params.dimension);
      for (int i = 0; i < params.dimension; ++i) {
        row.push_back(field.element(uniform_below(rng, field.order())));
      }
    }
  }
  return set;
}

MessageSet zero_messages(const SystemParams& params, const Field& field) {
  MessageSet set;
  set.messages.assign(params.messages,
                      std::vector<MessageRow>(params.rows_per_message,
                                              MessageRow(params.dimension, field.zero())));
  return set;
}

DatabaseContent::DatabaseContent(int database, std::vector<std::int64_t> rows,
                                 std::int64_t total_rows, std::vector<FieldVector> symbols)
    : database_(database),
      rows_(std::move(rows)),
      slot_of_row_(total_rows, -1),
      symbols_(std::move(symbols)) {
  for (std::size_t i = 0; i < rows_.size(); ++i) slot_of_row_.at(rows_[i]) = static_cast<std::int64_t>(i);
  for (const auto& s : symbols_) {
    if (s.size() != rows_.size()) {
      throw ConfigurationError("database content symbol count does not match stored rows");
    }
  }
}

bool DatabaseContent::stores(std::int64_t row) const {
  return row >= 0 && row < static_cast<std::int64_t>(slot_of_row_.size()) && slot_of_row_[row] >= 0;
}

const FieldElement& DatabaseContent::symbol(int message, std::int64_t row) const {
  if (message < 0 || message >= static_cast<int>(symbols_.size()) || !stores(row)) {
    throw ProtocolViolationError("database " + std::to_string(database_ + 1) +
                                 " does not store row " + std::to_string(row + 1) +
                                 " of message " + std::to_string(message + 1));
  }
  return symbols_[message][slot_of_row_[row]];
}

std::int64_t DatabaseContent::symbol_count() const {
  return static_cast<std::int64_t>(symbols_.size() * rows_.size());
}

std::vector<DatabaseContent> materialize(const SystemParams& params, const PartitionMap& pmap,
                                         const MessageSet& messages, const MdsCodebook& cb) {
  if (static_cast<int>(messages.count()) != params.messages ||
      static_cast<std::int64_t>(messages.rows()) != params.rows_per_message ||
      static_cast<int>(messages.row_length()) != params.dimension) {
    throw ConfigurationError("message set shape does not match the storage plan");
  }
  for (const auto& m : messages.messages) {
    if (static_cast<std::int64_t>(m.size()) != params.rows_per_message) {
      throw ConfigurationError("messages have different numbers of rows");
    }
  }
  if (static_cast<int>(cb.databases()) != params.databases ||
      static_cast<int>(cb.dimension()) != params.dimension) {
    throw ConfigurationError("codebook (N, K) does not match the storage plan");
  }
  if (static_cast<std::int64_t>(pmap.partition_of_row.size()) != params.rows_per_message) {
    throw ConfigurationError("partition map does not cover R rows");
  }

  std::vector<DatabaseContent> out;
  out.reserve(params.databases);
  for (int n = 0; n < params.databases; ++n) {
    std::vector<std::int64_t> rows;
    for (int p : pmap.partitions_at(n)) {
      rows.insert(rows.end(), pmap.rows[p].begin(), pmap.rows[p].end());
    }
    std::sort(rows.begin(), rows.end());
    std::vector<FieldVector> symbols(params.messages);
    for (int m = 0; m < params.messages; ++m) {
      symbols[m].reserve(rows.size());
      for (auto j : rows) symbols[m].push_back(encode_symbol(cb, n, messages.messages[m][j]));
    }
    out.emplace_back(n, std::move(rows), params.rows_per_message, std::move(symbols));
  }
  return out;
}

}  // namespace hybridpir
