#pragma once

#include <string>
#include <vector>

#include "hybridpir/rational.hpp"

namespace hybridpir {

// Which scheme a (storage, cost) point comes from.
struct Provenance {
  enum class Kind { kHybrid, kUncoded, kMds, kHullInterpolation };

  Kind kind = Kind::kHybrid;
  int span = 0;       // t; hybrid and uncoded
  int dimension = 0;  // K; hybrid and mds

  static Provenance hybrid(int span, int dimension) { return {Kind::kHybrid, span, dimension}; }
  static Provenance uncoded(int span) { return {Kind::kUncoded, span, 1}; }
  static Provenance mds(int dimension) { return {Kind::kMds, 0, dimension}; }
  static Provenance interpolation() { return {Kind::kHullInterpolation, 0, 0}; }

  // "hybrid(t=5,K=2)", "uncoded(t=3)", "mds(K=2)", "hull-interpolation".
  std::string to_string() const;
  // Throws ParseError.
  static Provenance parse(const std::string& text);

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct TradeoffPoint {
  Rational mu;    // storage ratio
  Rational cost;  // normalized download cost
  Provenance provenance;

  friend bool operator==(const TradeoffPoint&, const TradeoffPoint&) = default;
};

struct TradeoffCurve {
  std::vector<TradeoffPoint> points;  // strictly increasing mu
  bool hull = false;

  friend bool operator==(const TradeoffCurve&, const TradeoffCurve&) = default;
};

// 1 + K/t + (K/t)^2 + ... + (K/t)^(M-1).
Rational hybrid_download_cost(int span, int dimension, int messages);

// (t/(KN), D(t,K)) for all 1 <= K <= t <= N, one point per distinct mu
// (ties keep the smallest K), sorted by mu.
std::vector<TradeoffPoint> hybrid_corner_points(int databases, int messages);

// (t/N, sum (1/t)^i) for t = 1..N.
std::vector<TradeoffPoint> uncoded_baseline(int databases, int messages);

// (1/K, sum (K/N)^i) for K = 1..N, sorted by mu.
std::vector<TradeoffPoint> mds_baseline(int databases, int messages);

// Lower convex hull by monotone chain on exact cross products. Duplicate mu
// keeps the minimum cost; collinear interior points are dropped. Throws
// DomainError on empty input.
TradeoffCurve lower_convex_hull(std::vector<TradeoffPoint> points);

// Memory sharing between the hull neighbours enclosing mu. Throws DomainError
// outside [first mu, last mu].
Rational cost_at(const TradeoffCurve& curve, const Rational& mu);

// sum_{i<M} (1/(N mu))^i. Throws DomainError unless 1/N <= mu <= 1.
Rational relaxed_curve(int databases, int messages, const Rational& mu);

// Points of `candidate` whose cost is strictly below `reference` at the same
// mu (points outside the reference range are skipped).
std::vector<TradeoffPoint> strict_improvements(const TradeoffCurve& candidate,
                                               const TradeoffCurve& reference);

// Number of distinct storage ratios t/(KN), 1 <= K <= t <= N.
std::size_t distinct_storage_ratios(int databases);

}  // namespace hybridpir
