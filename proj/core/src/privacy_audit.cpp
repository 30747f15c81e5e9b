#include "hybridpir/privacy_audit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>

#include "hybridpir/errors.hpp"
#include "hybridpir/partition_loads.hpp"
#include "hybridpir/pir_engine.hpp"

namespace hybridpir {

namespace {

using Histogram = std::map<std::string, std::uint64_t>;

std::string canonical_key(std::vector<std::vector<RowRef>> atoms) {
  std::sort(atoms.begin(), atoms.end());
  std::string key;
  for (const auto& atom : atoms) {
    key += '[';
    for (const auto& r : atom) {
      key += std::to_string(r.message);
      key += ':';
      key += std::to_string(r.row);
      key += ',';
    }
    key += ']';
  }
  return key;
}

double total_variation(const Histogram& a, const Histogram& b) {
  const auto total = [](const Histogram& h) {
    std::uint64_t s = 0;
    for (const auto& [_, c] : h) s += c;
    return static_cast<double>(s);
  };
  const double ta = total(a), tb = total(b);
  if (ta == 0 || tb == 0) return ta == tb ? 0.0 : 1.0;
  double sum = 0;
  for (const auto& [key, c] : a) {
    const auto it = b.find(key);
    const double q = it == b.end() ? 0.0 : static_cast<double>(it->second) / tb;
    sum += std::abs(static_cast<double>(c) / ta - q);
  }
  for (const auto& [key, c] : b) {
    if (!a.contains(key)) sum += static_cast<double>(c) / tb;
  }
  return sum / 2;
}

std::vector<int> audited_databases(const SystemParams& params, const AuditOptions& options) {
  if (options.database) {
    if (*options.database < 0 || *options.database >= params.databases) {
      throw DomainError("database " + std::to_string(*options.database + 1) + " out of range");
    }
    return {*options.database};
  }
  std::vector<int> all(params.databases);
  std::iota(all.begin(), all.end(), 0);
  return all;
}

// Advances a vector of permutations like an odometer; false after the last.
bool next_outcome(PermutationState& state) {
  for (auto& per_message : state.order) {
    for (auto& perm : per_message) {
      if (std::next_permutation(perm.begin(), perm.end())) return true;
    }
  }
  return false;
}

PrivacyReport exhaustive(const SystemParams& params, const PartitionMap& pmap,
                         const AuditOptions& options, const std::vector<int>& dbs) {
  const auto outcomes = options.disable_permutations ? 1 : permutation_outcomes(params, pmap);
  if (outcomes > options.enumeration_bound) {
    throw EnumerationBoundError("exhaustive audit needs " +
                                (outcomes == std::numeric_limits<std::uint64_t>::max()
                                     ? std::string("more than 2^64")
                                     : std::to_string(outcomes)) +
                                " permutation outcomes, bound is " +
                                std::to_string(options.enumeration_bound));
  }
  const auto loads = compute_round_loads(params, pmap.subsets);
  // counts[theta][db] over canonical queries.
  std::vector<std::vector<Histogram>> counts(params.messages,
                                             std::vector<Histogram>(params.databases));
  auto state = PermutationState::identity(params, pmap);
  std::uint64_t enumerated = 0;
  do {
    ++enumerated;
    for (int theta = 0; theta < params.messages; ++theta) {
      const auto schedule = build_schedule(params, pmap, loads, theta, state);
      for (int n : dbs) {
        std::vector<std::vector<RowRef>> atoms;
        for (const auto& a : schedule.atoms[n]) atoms.push_back(a.rows);
        ++counts[theta][n][canonical_key(std::move(atoms))];
      }
    }
  } while (!options.disable_permutations && next_outcome(state));

  PrivacyReport report;
  report.mode = AuditMode::kExhaustive;
  report.outcomes = enumerated;
  report.threshold = 0.0;
  for (int n : dbs) {
    for (int a = 0; a < params.messages; ++a) {
      for (int b = a + 1; b < params.messages; ++b) {
        const auto& ha = counts[a][n];
        const auto& hb = counts[b][n];
        std::int64_t diff = 0;
        for (const auto& [key, c] : ha) {
          const auto it = hb.find(key);
          const auto other = it == hb.end() ? 0 : it->second;
          diff += std::abs(static_cast<std::int64_t>(c) - static_cast<std::int64_t>(other));
        }
        for (const auto& [key, c] : hb) {
          if (!ha.contains(key)) diff += static_cast<std::int64_t>(c);
        }
        PrivacyPair pair;
        pair.database = n;
        pair.desired_a = a;
        pair.desired_b = b;
        pair.exact_distance = Rational(diff, 2 * static_cast<std::int64_t>(enumerated));
        pair.distance = to_double(*pair.exact_distance);
        pair.pass = diff == 0;
        report.pairs.push_back(pair);
      }
    }
  }
  return report;
}

PrivacyReport sampled(const SystemParams& params, const PartitionMap& pmap,
                      const AuditOptions& options, const std::vector<int>& dbs) {
  const auto loads = compute_round_loads(params, pmap.subsets);
  Rng rng(options.seed);
  // [theta][db] histograms of the two projections.
  std::vector<std::vector<Histogram>> incidence(params.messages,
                                                std::vector<Histogram>(params.databases));
  std::vector<std::vector<Histogram>> signature(params.messages,
                                                std::vector<Histogram>(params.databases));
  const auto identity = PermutationState::identity(params, pmap);
  for (int theta = 0; theta < params.messages; ++theta) {
    for (std::uint64_t trial = 0; trial < options.trials; ++trial) {
      const auto perms = options.disable_permutations
                             ? identity
                             : PermutationState::random(params, pmap, rng);
      const auto schedule = build_schedule(params, pmap, loads, theta, perms);
      const auto bundle = queries_from_schedule(schedule, rng);
      for (int n : dbs) {
        for (const auto& atom : bundle.queries[n].atoms) {
          const auto arity = std::to_string(atom.size());
          std::string sig = arity + "|";
          for (const auto& r : atom) {
            ++incidence[theta][n][arity + "|" + std::to_string(r.message) + ":" +
                                  std::to_string(r.row)];
            sig += std::to_string(r.message) + ":" +
                   std::to_string(pmap.partition_of_row[r.row]) + ",";
          }
          ++signature[theta][n][sig];
        }
      }
    }
  }

  PrivacyReport report;
  report.mode = AuditMode::kSampled;
  report.outcomes = options.trials;
  report.threshold = options.threshold;
  for (int n : dbs) {
    for (int a = 0; a < params.messages; ++a) {
      for (int b = a + 1; b < params.messages; ++b) {
        PrivacyPair pair;
        pair.database = n;
        pair.desired_a = a;
        pair.desired_b = b;
        pair.distance = std::max(total_variation(incidence[a][n], incidence[b][n]),
                                 total_variation(signature[a][n], signature[b][n]));
        pair.pass = pair.distance <= options.threshold;
        report.pairs.push_back(pair);
      }
    }
  }
  return report;
}

}  // namespace

std::uint64_t permutation_outcomes(const SystemParams& params, const PartitionMap& pmap) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t total = 1;
  for (int m = 0; m < params.messages; ++m) {
    for (const auto& rows : pmap.rows) {
      for (std::uint64_t i = 2; i <= rows.size(); ++i) {
        if (total > kMax / i) return kMax;
        total *= i;
      }
    }
  }
  return total;
}

PrivacyReport audit_privacy(const SystemParams& params, const PartitionMap& pmap,
                            const AuditOptions& options) {
  validate_parameters(params.databases, params.messages, params.span, params.dimension);
  const auto dbs = audited_databases(params, options);
  auto report = options.mode == AuditMode::kExhaustive ? exhaustive(params, pmap, options, dbs)
                                                       : sampled(params, pmap, options, dbs);
  report.pass = true;
  report.max_distance = 0;
  for (const auto& p : report.pairs) {
    report.pass = report.pass && p.pass;
    report.max_distance = std::max(report.max_distance, p.distance);
  }
  return report;
}

}  // namespace hybridpir
