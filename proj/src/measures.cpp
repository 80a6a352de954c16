#include "nasgraph/measures.hpp"

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "nasgraph/error.hpp"
#include "nasgraph/graphify.hpp"

namespace nasgraph::measures {

std::string_view to_string(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::AvgDeg: return "avg_deg";
    case MeasureKind::Density: return "density";
    case MeasureKind::Resilience: return "resilience";
    case MeasureKind::WedgeCount: return "wedge";
  }
  return "?";
}

MeasureKind measure_from_name(std::string_view name) {
  if (name == "avg_deg") return MeasureKind::AvgDeg;
  if (name == "density") return MeasureKind::Density;
  if (name == "resilience") return MeasureKind::Resilience;
  if (name == "wedge") return MeasureKind::WedgeCount;
  fail(ErrorKind::UnknownOperation, "unknown measure '" + std::string(name) + "'");
}

namespace {

// Unique directed (src, dst) pairs; self-loops dropped. Converted graphs are
// already simple, but hand-built test graphs need not be.
std::vector<std::pair<int, int>> directed_edge_set(
    const graphify::ArchGraph& g) {
  std::vector<std::pair<int, int>> edges;
  edges.reserve(g.edges.size());
  for (const graphify::GraphEdge& e : g.edges) {
    if (e.src != e.dst) edges.emplace_back(e.src, e.dst);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

std::vector<int> undirected_degrees(const graphify::ArchGraph& g) {
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(g.edges.size());
  for (const graphify::GraphEdge& e : g.edges) {
    if (e.src != e.dst) {
      pairs.emplace_back(std::min(e.src, e.dst), std::max(e.src, e.dst));
    }
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  std::vector<int> degree(g.node_count, 0);
  for (const auto& [a, b] : pairs) {
    ++degree[a];
    ++degree[b];
  }
  return degree;
}

}  // namespace

double average_degree(const graphify::ArchGraph& g) {
  if (g.node_count < 1) fail(ErrorKind::EmptyGraph, "graph has no nodes");
  const std::vector<int> degree = undirected_degrees(g);
  long long total = 0;
  for (int d : degree) total += d;
  return static_cast<double>(total) / static_cast<double>(g.node_count);
}

double density(const graphify::ArchGraph& g) {
  if (g.node_count < 2) {
    fail(ErrorKind::DegenerateGraph, "density needs at least 2 nodes");
  }
  const auto edges = directed_edge_set(g);
  const double n = static_cast<double>(g.node_count);
  return static_cast<double>(edges.size()) / (n * (n - 1.0));
}

double resilience(const graphify::ArchGraph& g) {
  const auto edges = directed_edge_set(g);
  if (edges.empty()) fail(ErrorKind::EmptyEdgeSet, "graph has no edges");
  std::vector<long long> in_degree(g.node_count, 0);
  for (const auto& [src, dst] : edges) ++in_degree[dst];
  long long numerator = 0;
  for (const auto& [src, dst] : edges) numerator += in_degree[dst];
  return static_cast<double>(numerator) / static_cast<double>(edges.size());
}

std::int64_t wedge_count(const graphify::ArchGraph& g) {
  const std::vector<int> degree = undirected_degrees(g);
  std::int64_t wedges = 0;
  for (int d : degree) {
    wedges += static_cast<std::int64_t>(d) * (d - 1) / 2;
  }
  return wedges;
}

double compute(MeasureKind kind, const graphify::ArchGraph& g) {
  switch (kind) {
    case MeasureKind::AvgDeg: return average_degree(g);
    case MeasureKind::Density: return density(g);
    case MeasureKind::Resilience: return resilience(g);
    case MeasureKind::WedgeCount:
      return static_cast<double>(wedge_count(g));
  }
  fail(ErrorKind::UnknownOperation, "bad measure kind");
}

}  // namespace nasgraph::measures
