#include "hybridpir/partition_loads.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>
#include <string>

#include "hybridpir/errors.hpp"
#include "hybridpir/storage_planner.hpp"

namespace hybridpir {

namespace {

using Matrix = std::vector<std::vector<std::int64_t>>;

// 0/1 extras on top of the base load: partition p takes `demand` extras from
// its members, database n accepts at most capacity[n].
bool greedy_extras(const std::vector<std::vector<int>>& subsets, std::int64_t demand,
                   std::vector<std::int64_t> capacity, Matrix& extra) {
  for (std::size_t p = 0; p < subsets.size(); ++p) {
    std::vector<int> members = subsets[p];
    std::stable_sort(members.begin(), members.end(),
                     [&](int a, int b) { return capacity[a] > capacity[b]; });
    std::int64_t taken = 0;
    for (int n : members) {
      if (taken == demand) break;
      if (capacity[n] == 0) break;
      extra[p][n] = 1;
      --capacity[n];
      ++taken;
    }
    if (taken < demand) return false;
  }
  return std::all_of(capacity.begin(), capacity.end(), [](auto c) { return c == 0; });
}

struct FlowEdge {
  int to;
  std::int64_t capacity;
  std::size_t reverse;
};

class FlowNetwork {
 public:
  explicit FlowNetwork(int nodes) : adj_(nodes) {}

  std::size_t add_edge(int from, int to, std::int64_t capacity) {
    adj_[from].push_back({to, capacity, adj_[to].size()});
    adj_[to].push_back({from, 0, adj_[from].size() - 1});
    return adj_[from].size() - 1;
  }

  const FlowEdge& edge(int from, std::size_t index) const { return adj_[from][index]; }

  // Edmonds-Karp.
  std::int64_t max_flow(int source, int sink) {
    std::int64_t total = 0;
    const auto nodes = static_cast<int>(adj_.size());
    while (true) {
      std::vector<std::pair<int, std::size_t>> parent(nodes, {-1, 0});
      std::queue<int> frontier;
      frontier.push(source);
      parent[source] = {source, 0};
      while (!frontier.empty() && parent[sink].first == -1) {
        const int u = frontier.front();
        frontier.pop();
        for (std::size_t i = 0; i < adj_[u].size(); ++i) {
          const auto& e = adj_[u][i];
          if (e.capacity > 0 && parent[e.to].first == -1) {
            parent[e.to] = {u, i};
            frontier.push(e.to);
          }
        }
      }
      if (parent[sink].first == -1) return total;
      std::int64_t push = std::numeric_limits<std::int64_t>::max();
      for (int v = sink; v != source; v = parent[v].first) {
        push = std::min(push, adj_[parent[v].first][parent[v].second].capacity);
      }
      for (int v = sink; v != source; v = parent[v].first) {
        auto& e = adj_[parent[v].first][parent[v].second];
        e.capacity -= push;
        adj_[v][e.reverse].capacity += push;
      }
      total += push;
    }
  }

 private:
  std::vector<std::vector<FlowEdge>> adj_;
};

bool augmenting_extras(const std::vector<std::vector<int>>& subsets, int databases,
                       std::int64_t demand, const std::vector<std::int64_t>& capacity,
                       Matrix& extra) {
  const int partitions = static_cast<int>(subsets.size());
  const int source = 0;
  const int sink = partitions + databases + 1;
  FlowNetwork net(sink + 1);
  std::vector<std::vector<std::pair<int, std::size_t>>> member_edges(partitions);
  for (int p = 0; p < partitions; ++p) {
    net.add_edge(source, 1 + p, demand);
    for (int n : subsets[p]) {
      member_edges[p].push_back({n, net.add_edge(1 + p, 1 + partitions + n, 1)});
    }
  }
  for (int n = 0; n < databases; ++n) net.add_edge(1 + partitions + n, sink, capacity[n]);

  if (net.max_flow(source, sink) != demand * partitions) return false;
  for (int p = 0; p < partitions; ++p) {
    for (auto [n, index] : member_edges[p]) {
      extra[p][n] = net.edge(1 + p, index).capacity == 0 ? 1 : 0;
    }
  }
  return true;
}

}  // namespace

std::optional<Matrix> balance_loads(const std::vector<std::vector<int>>& subsets, int databases,
                                    std::int64_t per_partition, std::int64_t per_database,
                                    LoadStrategy strategy) {
  if (subsets.empty() || databases <= 0) return std::nullopt;
  const auto span = static_cast<std::int64_t>(subsets.front().size());
  const std::int64_t base = per_partition / span;
  const std::int64_t demand = per_partition - base * span;

  std::vector<std::int64_t> membership(databases, 0);
  for (const auto& s : subsets) {
    if (static_cast<std::int64_t>(s.size()) != span) return std::nullopt;
    for (int n : s) ++membership[n];
  }
  std::vector<std::int64_t> capacity(databases);
  std::int64_t total_capacity = 0;
  for (int n = 0; n < databases; ++n) {
    capacity[n] = per_database - membership[n] * base;
    if (capacity[n] < 0 || capacity[n] > membership[n]) return std::nullopt;
    total_capacity += capacity[n];
  }
  if (total_capacity != demand * static_cast<std::int64_t>(subsets.size())) return std::nullopt;

  Matrix extra(subsets.size(), std::vector<std::int64_t>(databases, 0));
  bool ok = demand == 0;
  if (!ok && strategy == LoadStrategy::kGreedyThenAugment) {
    ok = greedy_extras(subsets, demand, capacity, extra);
  }
  if (!ok) {
    for (auto& row : extra) std::fill(row.begin(), row.end(), 0);
    ok = augmenting_extras(subsets, databases, demand, capacity, extra);
  }
  if (!ok) return std::nullopt;

  Matrix loads(subsets.size(), std::vector<std::int64_t>(databases, 0));
  for (std::size_t p = 0; p < subsets.size(); ++p) {
    for (int n : subsets[p]) loads[p][n] = base + extra[p][n];
  }
  return loads;
}

RoundLoads compute_round_loads(const SystemParams& params,
                               const std::vector<std::vector<int>>& subsets,
                               LoadStrategy strategy) {
  const auto& instances = params.instances_per_round;
  auto first = balance_loads(subsets, params.databases, instances.at(0) * params.dimension,
                             params.atoms_per_round.at(0), strategy);
  if (!first) {
    throw FeasibilityError("round-one loads cannot be balanced at c = " +
                           std::to_string(params.multiplier));
  }
  RoundLoads loads;
  loads.push_back(std::move(*first));
  for (int r = 1; r < params.messages; ++r) {
    auto next = loads.back();
    for (std::size_t p = 0; p < subsets.size(); ++p) {
      for (int n : subsets[p]) {
        next[p][n] = instances[r - 1] - loads.back()[p][n];
        if (next[p][n] < 0 || next[p][n] > instances[r]) {
          throw FeasibilityError("round " + std::to_string(r + 1) +
                                 " load outside [0, I_r] at partition " + std::to_string(p));
        }
      }
    }
    loads.push_back(std::move(next));
  }
  return loads;
}

}  // namespace hybridpir
