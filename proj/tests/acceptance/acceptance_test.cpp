// One PASS/FAIL line per acceptance criterion. Exit status is nonzero if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hybridpir/pir_engine.hpp"
#include "hybridpir/privacy_audit.hpp"
#include "hybridpir/tradeoff.hpp"

namespace {

using namespace hybridpir;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

// Written out term by term rather than through the library's cost helper.
Rational expected_cost(int t, int k, int m) {
  Rational sum(0);
  Rational term(1);
  for (int i = 0; i < m; ++i) {
    sum += term;
    term *= Rational(k, t);
  }
  return sum;
}

struct Retrieval {
  SystemParams params;
  PartitionMap pmap;
  RetrievalSchedule schedule;
  std::vector<AnswerSet> answers;
  std::vector<DatabaseContent> contents;
  bool exact = false;
};

Retrieval retrieve(int n, int m, int t, int k, int desired, Rng& rng) {
  Retrieval r;
  r.params = plan(n, m, t, k);
  r.pmap = build_partition_map(r.params);
  const Field field;
  const auto cb = build_codebook(field, n, k);
  const auto messages = random_messages(r.params, field, rng);
  r.contents = materialize(r.params, r.pmap, messages, cb);
  r.schedule = build_schedule(r.params, r.pmap, desired,
                              PermutationState::random(r.params, r.pmap, rng));
  const auto bundle = queries_from_schedule(r.schedule, rng);
  for (int db = 0; db < n; ++db) {
    r.answers.push_back(answer(r.contents[db], bundle.queries[db], cb));
  }
  r.exact = decode(r.schedule, bundle, r.answers, cb) == messages.messages[desired];
  return r;
}

template <typename Fn>
void for_each_sweep_instance(Fn&& fn) {
  for (int n = 1; n <= 5; ++n)
    for (int m = 1; m <= 3; ++m)
      for (int t = 1; t <= n; ++t)
        for (int k = 1; k <= t; ++k) fn(n, m, t, k);
}

std::string tag(int n, int m, int t, int k) {
  std::ostringstream s;
  s << "(" << n << "," << m << "," << t << "," << k << ")";
  return s.str();
}

Outcome golden_example() {
  Outcome o;
  Rng rng(20240601);
  double worst_ms = 0;
  for (int seed = 0; seed < 100; ++seed) {
    const auto start = std::chrono::steady_clock::now();
    const auto r = retrieve(6, 2, 5, 2, 0, rng);
    worst_ms = std::max(worst_ms, std::chrono::duration<double, std::milli>(
                                      std::chrono::steady_clock::now() - start).count());
    o.require(r.params.storage_ratio() == Rational(5, 12), "mu != 5/12");
    for (const auto& a : r.answers) o.require(a.values.size() == 14, "answers per db != 14");
    o.require(r.schedule.total_atoms() == 84, "total answers != 84");
    o.require(normalized_download_cost(r.schedule) == Rational(7, 5), "cost != 7/5");
    o.require(r.exact, "W_1 not reconstructed exactly");
  }
  o.require(worst_ms < 1000.0, "run slower than 1 s");
  if (o.pass) o.detail = "100 runs, mu=5/12, 14x6=84 answers, cost 7/5, worst run " +
                         std::to_string(worst_ms) + " ms";
  return o;
}

Outcome formula_conformance() {
  Outcome o;
  Rng rng(7);
  int instances = 0;
  for_each_sweep_instance([&](int n, int m, int t, int k) {
    for (int d = 0; d < m; ++d) {
      const auto r = retrieve(n, m, t, k, d, rng);
      o.require(normalized_download_cost(r.schedule) == expected_cost(t, k, m),
                "cost mismatch at " + tag(n, m, t, k));
      o.require(r.exact, "decode mismatch at " + tag(n, m, t, k));
    }
    ++instances;
  });
  if (o.pass) o.detail = std::to_string(instances) + " instances, every message decoded";
  return o;
}

Outcome specialization() {
  Outcome o;
  using Pair = std::pair<Rational, Rational>;
  for (int n = 2; n <= 8; ++n) {
    for (int m = 1; m <= 3; ++m) {
      std::set<Pair> uncoded, mds, k1, tn;
      for (const auto& p : uncoded_baseline(n, m)) uncoded.insert({p.mu, p.cost});
      for (const auto& p : mds_baseline(n, m)) mds.insert({p.mu, p.cost});
      for (int t = 1; t <= n; ++t) {
        // Baseline shapes: (t/N, sum (1/t)^i) and (1/K, sum (K/N)^i).
        o.require(uncoded.count({Rational(t, n), expected_cost(t, 1, m)}) == 1,
                  "uncoded baseline shape");
        o.require(mds.count({Rational(1, t), expected_cost(n, t, m)}) == 1, "mds baseline shape");
      }
      for (int t = 1; t <= n; ++t) {
        for (int k = 1; k <= t; ++k) {
          const Pair p{Rational(t, k * n), hybrid_download_cost(t, k, m)};
          if (k == 1) k1.insert(p);
          if (t == n) tn.insert(p);
        }
      }
      o.require(k1 == uncoded, "K=1 corners differ from uncoded baseline");
      o.require(tn == mds, "t=N corners differ from MDS baseline");
    }
  }
  if (o.pass) o.detail = "N in 2..8, M in 1..3";
  return o;
}

Outcome figure_reproduction() {
  Outcome o;
  auto base = uncoded_baseline(6, 2);
  const auto mds = mds_baseline(6, 2);
  base.insert(base.end(), mds.begin(), mds.end());
  const auto baseline = lower_convex_hull(base);
  const auto hybrid = lower_convex_hull(hybrid_corner_points(6, 2));
  o.require(cost_at(baseline, Rational(5, 12)) == Rational(17, 12), "baseline hull at 5/12");
  o.require(cost_at(hybrid, Rational(5, 12)) == Rational(7, 5), "hybrid hull at 5/12");
  const std::vector<std::pair<Rational, Rational>> points{{Rational(5, 24), Rational(9, 5)},
                                                          {Rational(5, 18), Rational(8, 5)},
                                                          {Rational(5, 12), Rational(7, 5)},
                                                          {Rational(2, 9), Rational(7, 4)}};
  const auto contains = [](const TradeoffCurve& c, const std::pair<Rational, Rational>& p) {
    for (const auto& q : c.points)
      if (q.mu == p.first && q.cost == p.second) return true;
    return false;
  };
  for (const auto& p : points) {
    o.require(contains(hybrid, p), "point missing from hybrid hull");
    o.require(!contains(baseline, p), "point present in baseline hull");
    o.require(cost_at(baseline, p.first) > p.second, "point not a strict improvement");
  }
  if (o.pass) o.detail = "baseline 17/12, hybrid 7/5 at mu=5/12; 4 strict improvements";
  return o;
}

Outcome relaxed_curve_consistency() {
  Outcome o;
  int points = 0;
  for (int n = 1; n <= 8; ++n) {
    for (int m = 1; m <= 4; ++m) {
      for (const auto& p : hybrid_corner_points(n, m)) {
        Rational sum(0), term(1);
        const auto ratio = Rational(1) / (Rational(n) * p.mu);
        for (int i = 0; i < m; ++i) {
          sum += term;
          term *= ratio;
        }
        o.require(p.cost == sum, "corner off the relaxed curve");
        ++points;
      }
    }
  }
  if (o.pass) o.detail = std::to_string(points) + " corner points";
  return o;
}

Outcome privacy() {
  Outcome o;
  std::ostringstream detail;
  for (const int k : {1, 2}) {
    const auto p = plan(3, 2, 2, k);
    AuditOptions opt;
    opt.mode = AuditMode::kExhaustive;
    const auto r = audit_privacy(p, build_partition_map(p), opt);
    for (const auto& pair : r.pairs) {
      o.require(pair.exact_distance && *pair.exact_distance == Rational(0),
                "nonzero exact TV at (3,2,2," + std::to_string(k) + ")");
    }
    o.require(!r.pairs.empty(), "exhaustive audit produced no pairs");
    detail << "exhaustive K=" << k << " TV=0 over " << r.outcomes << " outcomes; ";
  }
  const auto p = plan(6, 2, 5, 2);
  const auto pmap = build_partition_map(p);
  AuditOptions sampled;
  sampled.trials = 10000;
  sampled.seed = 11;
  const auto r = audit_privacy(p, pmap, sampled);
  o.require(r.max_distance < 0.05, "sampled TV >= 0.05");
  auto mutated = sampled;
  mutated.disable_permutations = true;
  const auto m = audit_privacy(p, pmap, mutated);
  o.require(m.max_distance > 0.1, "mutation not detected");
  detail << "sampled max TV " << r.max_distance << "; mutation TV " << m.max_distance;
  if (o.pass) o.detail = detail.str();
  return o;
}

Outcome structural_invariants() {
  Outcome o;
  Rng rng(99);
  int schedules = 0;
  for_each_sweep_instance([&](int n, int m, int t, int k) {
    for (int d = 0; d < m; ++d) {
      const auto r = retrieve(n, m, t, k, d, rng);
      const auto violations = check_schedule_invariants(r.schedule, r.pmap);
      o.require(violations.empty(), tag(n, m, t, k) + ": " +
                                        (violations.empty() ? "" : violations.front()));
      // Message symmetry of per-database atom counts, recounted here.
      for (const auto& atoms : r.schedule.atoms) {
        std::vector<std::int64_t> per_message(m, 0);
        for (const auto& a : atoms)
          for (const auto& row : a.rows) ++per_message[row.message];
        for (int x = 1; x < m; ++x) {
          o.require(per_message[x] == per_message[0], "asymmetric atom counts " + tag(n, m, t, k));
        }
      }
      for (const auto& inst : r.schedule.instances) {
        std::set<int> dbs(inst.download_databases.begin(), inst.download_databases.end());
        o.require(static_cast<int>(dbs.size()) == k && inst.download_databases.size() ==
                                                          static_cast<std::size_t>(k),
                  "instance not at K distinct databases " + tag(n, m, t, k));
        for (int db : dbs)
          for (const auto& row : inst.rows)
            o.require(r.contents[db].stores(row.row), "instance row not stored " + tag(n, m, t, k));
        if (inst.kind == InstanceKind::kUndesired) {
          o.require(static_cast<int>(inst.reuse_databases.size()) == t - k,
                    "undesired instance reuse != t-K " + tag(n, m, t, k));
        }
      }
      ++schedules;
    }
  });
  if (o.pass) o.detail = std::to_string(schedules) + " schedules, 0 violations";
  return o;
}

Outcome storage_constraint() {
  Outcome o;
  Rng rng(5);
  int instances = 0;
  for_each_sweep_instance([&](int n, int m, int t, int k) {
    const auto r = retrieve(n, m, t, k, 0, rng);
    const auto target = Rational(t, k * n) * Rational(m * r.params.message_length);
    for (const auto& c : r.contents) {
      o.require(Rational(c.symbol_count()) == target, "symbol count != mu*M*L " + tag(n, m, t, k));
    }
    ++instances;
  });
  if (o.pass) o.detail = std::to_string(instances) + " instances";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 golden example", golden_example},
      {"2 formula conformance sweep", formula_conformance},
      {"3 baseline specializations", specialization},
      {"4 six-database tradeoff figure", figure_reproduction},
      {"5 relaxed curve consistency", relaxed_curve_consistency},
      {"6 privacy audit", privacy},
      {"7 schedule structural invariants", structural_invariants},
      {"8 storage constraint", storage_constraint},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const auto secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %s [%.2f s]: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), secs,
                o.detail.c_str());
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
