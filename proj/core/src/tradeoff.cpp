#include "hybridpir/tradeoff.hpp"

#include <algorithm>
#include <map>
#include <regex>

#include "hybridpir/errors.hpp"

namespace hybridpir {

std::string Provenance::to_string() const {
  switch (kind) {
    case Kind::kHybrid:
      return "hybrid(t=" + std::to_string(span) + ",K=" + std::to_string(dimension) + ")";
    case Kind::kUncoded:
      return "uncoded(t=" + std::to_string(span) + ")";
    case Kind::kMds:
      return "mds(K=" + std::to_string(dimension) + ")";
    case Kind::kHullInterpolation:
      return "hull-interpolation";
  }
  return "unknown";
}

Provenance Provenance::parse(const std::string& text) {
  static const std::regex hybrid_re(R"(hybrid\(t=(\d+),K=(\d+)\))");
  static const std::regex uncoded_re(R"(uncoded\(t=(\d+)\))");
  static const std::regex mds_re(R"(mds\(K=(\d+)\))");
  std::smatch m;
  if (std::regex_match(text, m, hybrid_re)) return hybrid(std::stoi(m[1]), std::stoi(m[2]));
  if (std::regex_match(text, m, uncoded_re)) return uncoded(std::stoi(m[1]));
  if (std::regex_match(text, m, mds_re)) return mds(std::stoi(m[1]));
  if (text == "hull-interpolation") return interpolation();
  throw ParseError("unknown provenance '" + text + "'");
}

Rational hybrid_download_cost(int span, int dimension, int messages) {
  return geometric_sum(Rational(dimension, span), messages);
}

namespace {

void sort_by_mu(std::vector<TradeoffPoint>& points) {
  std::stable_sort(points.begin(), points.end(),
                   [](const auto& a, const auto& b) { return a.mu < b.mu; });
}

}  // namespace

std::vector<TradeoffPoint> hybrid_corner_points(int databases, int messages) {
  std::map<Rational, TradeoffPoint> best;
  for (int k = 1; k <= databases; ++k) {
    for (int t = k; t <= databases; ++t) {
      TradeoffPoint p{Rational(t, static_cast<std::int64_t>(k) * databases),
                      hybrid_download_cost(t, k, messages), Provenance::hybrid(t, k)};
      auto it = best.find(p.mu);
      if (it == best.end() || p.cost < it->second.cost) best.insert_or_assign(p.mu, p);
    }
  }
  std::vector<TradeoffPoint> out;
  for (auto& [_, p] : best) out.push_back(p);
  return out;
}

std::vector<TradeoffPoint> uncoded_baseline(int databases, int messages) {
  std::vector<TradeoffPoint> out;
  for (int t = 1; t <= databases; ++t) {
    out.push_back({Rational(t, databases), geometric_sum(Rational(1, t), messages),
                   Provenance::uncoded(t)});
  }
  return out;
}

std::vector<TradeoffPoint> mds_baseline(int databases, int messages) {
  std::vector<TradeoffPoint> out;
  for (int k = 1; k <= databases; ++k) {
    out.push_back({Rational(1, k), geometric_sum(Rational(k, databases), messages),
                   Provenance::mds(k)});
  }
  sort_by_mu(out);
  return out;
}

TradeoffCurve lower_convex_hull(std::vector<TradeoffPoint> points) {
  if (points.empty()) throw DomainError("convex hull of no points");
  sort_by_mu(points);
  std::vector<TradeoffPoint> unique;
  for (const auto& p : points) {
    if (!unique.empty() && unique.back().mu == p.mu) {
      if (p.cost < unique.back().cost) unique.back() = p;
      continue;
    }
    unique.push_back(p);
  }
  // (b - a) x (c - a) <= 0 means b is on or above segment ac.
  const auto cross = [](const TradeoffPoint& a, const TradeoffPoint& b, const TradeoffPoint& c) {
    return (b.mu - a.mu) * (c.cost - a.cost) - (b.cost - a.cost) * (c.mu - a.mu);
  };
  TradeoffCurve hull;
  hull.hull = true;
  for (const auto& p : unique) {
    while (hull.points.size() >= 2 &&
           cross(hull.points[hull.points.size() - 2], hull.points.back(), p) <= 0) {
      hull.points.pop_back();
    }
    hull.points.push_back(p);
  }
  return hull;
}

Rational cost_at(const TradeoffCurve& curve, const Rational& mu) {
  const auto& pts = curve.points;
  if (pts.empty() || mu < pts.front().mu || mu > pts.back().mu) {
    throw DomainError("storage ratio " + to_string(mu) + " outside the curve range");
  }
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].mu == mu) return pts[i].cost;
    if (pts[i].mu > mu) {
      const auto& a = pts[i - 1];
      const auto& b = pts[i];
      const auto weight = (mu - a.mu) / (b.mu - a.mu);
      return a.cost + weight * (b.cost - a.cost);
    }
  }
  return pts.back().cost;
}

Rational relaxed_curve(int databases, int messages, const Rational& mu) {
  if (databases < 1 || mu < Rational(1, databases) || mu > Rational(1)) {
    throw DomainError("storage ratio " + to_string(mu) + " outside [1/N, 1]");
  }
  return geometric_sum(Rational(1) / (mu * databases), messages);
}

std::vector<TradeoffPoint> strict_improvements(const TradeoffCurve& candidate,
                                               const TradeoffCurve& reference) {
  std::vector<TradeoffPoint> out;
  if (reference.points.empty()) return out;
  for (const auto& p : candidate.points) {
    if (p.mu < reference.points.front().mu || p.mu > reference.points.back().mu) continue;
    if (p.cost < cost_at(reference, p.mu)) out.push_back(p);
  }
  return out;
}

std::size_t distinct_storage_ratios(int databases) {
  return hybrid_corner_points(databases, 1).size();
}

}  // namespace hybridpir
