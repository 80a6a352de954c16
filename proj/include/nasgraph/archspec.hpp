#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace nasgraph::archspec {

/// Cell-edge operations of the NB201-style space. Closed set at runtime;
/// adding a variant means touching the alias table and the expansion rules.
enum class OperationKind : int {
  None = 0,
  SkipConnect = 1,
  Conv1x1 = 2,
  Conv3x3 = 3,
  AvgPool3x3 = 4,
};

inline constexpr int kOperationCount = 5;

std::string_view to_string(OperationKind op);             // canonical alias
OperationKind operation_from_name(std::string_view name); // throws UnknownOperation

struct CellEdge {
  int src = 0;
  int dst = 0;
  OperationKind op = OperationKind::None;

  bool operator==(const CellEdge&) const = default;
};

/// Cell-internal DAG on nodes {0..node_count-1}; src < dst for every edge.
/// Node 0 is the cell input, node node_count-1 the cell output.
struct CellSpec {
  int node_count = 0;
  std::vector<CellEdge> edges;

  void validate() const;
  bool operator==(const CellSpec&) const = default;
};

/// Reduced-size instantiation used for probing: h channels, c cells per
/// module, m modules, and the stem input resolution.
struct SurrogateConfig {
  int channels = 16;
  int cells_per_module = 1;
  int modules = 3;
  int probe_resolution = 32;

  void validate() const;
  bool operator==(const SurrogateConfig&) const = default;
};

enum class BlockKind { Stem, CellOp, Reduction, Head };
enum class CombineMode { Sum, Concat };

/// One forward unit of the expanded architecture. `preds` are indices of
/// earlier blocks in the plan; an empty list means the network input.
struct BlockDescriptor {
  BlockKind kind = BlockKind::CellOp;
  OperationKind op = OperationKind::None;  // meaningful for CellOp only
  int in_channels = 0;
  int out_channels = 0;
  int in_height = 0;
  int in_width = 0;
  int out_height = 0;
  int out_width = 0;
  CombineMode combine = CombineMode::Sum;
  std::vector<int> preds;

  bool operator==(const BlockDescriptor&) const = default;
};

struct ArchitectureSpec {
  CellSpec cell;
  SurrogateConfig surrogate;
  std::vector<BlockDescriptor> block_plan;

  bool operator==(const ArchitectureSpec&) const = default;
};

/// Parse the NB201 string form `|op~0|+|op~0|op~1|+|op~0|op~1|op~2|`.
/// Token `op~k` in group g becomes edge (k, g+1, op).
CellSpec parse_nb201_arch(std::string_view encoding);

/// Inverse of parse_nb201_arch for 4-node cells with the full 6-edge set.
std::string render_nb201(const CellSpec& cell);

/// NB101-like encoding: strictly upper-triangular 0/1 adjacency plus one
/// label per node. Each 1-entry (i, j) becomes an edge carrying node j's
/// label. Labels `input` (node 0 only) and `output` are structural; an edge
/// into an `output`-labeled node carries the identity operation.
CellSpec parse_adjacency_cell(const std::vector<std::vector<int>>& adjacency,
                              const std::vector<std::string>& labels);

/// JSON form of the adjacency encoding: {"matrix": [[...]], "ops": ["..."]}.
CellSpec parse_adjacency_json(std::string_view json_text);

/// Uniform i.i.d. operation per NB201 edge slot; deterministic in the seed.
CellSpec sample_random_cell(std::uint64_t seed);

/// Lay out stem, m modules of c cell copies at widths h, 2h, 4h, ... with a
/// reduction block (AvgPool s2 + Conv1x1 doubling width) between modules,
/// and a global-average-pool head. Pure function of its inputs. Cell-edge
/// blocks whose source node is unreachable are omitted.
ArchitectureSpec expand(const CellSpec& cell, const SurrogateConfig& surrogate);

}  // namespace nasgraph::archspec
