#pragma once

#include <cstdint>
#include <string_view>

namespace nasgraph::graphify {
struct ArchGraph;
}

namespace nasgraph::measures {

enum class MeasureKind { AvgDeg, Density, Resilience, WedgeCount };

std::string_view to_string(MeasureKind kind);       // avg_deg | density | resilience | wedge
MeasureKind measure_from_name(std::string_view name);

/// Mean undirected degree 2*m_u/n; parallel directed pairs collapse to one
/// undirected edge.
double average_degree(const graphify::ArchGraph& g);

/// Directed edge count over n(n-1).
double density(const graphify::ArchGraph& g);

/// Sum over directed edges (i, j) of in_degree(j), divided by edge count.
double resilience(const graphify::ArchGraph& g);

/// Sum over nodes of C(undirected degree, 2).
std::int64_t wedge_count(const graphify::ArchGraph& g);

double compute(MeasureKind kind, const graphify::ArchGraph& g);

}  // namespace nasgraph::measures
