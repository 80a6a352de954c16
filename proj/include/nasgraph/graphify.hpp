#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nasgraph/archspec.hpp"
#include "nasgraph/measures.hpp"
#include "nasgraph/tensorlite.hpp"

namespace nasgraph::graphify {

enum class KernelKind { Conv, ReLU, AvgPool, GlobalAvgPool, Identity, Zero };

struct Kernel {
  KernelKind kind = KernelKind::Identity;
  tensorlite::ConvParams conv;  // Conv only
  int pool_kernel = 0;          // AvgPool only
  int pool_stride = 0;
  int pool_padding = 0;
};

enum class GraphBlockKind { VirtualInput, Stem, CellOp, Reduction, Head };

struct PredecessorLink {
  int block_id = 0;
  int channels = 0;        // the predecessor's output channel count
  int channel_offset = 0;  // position of its channels under Concat
};

/// One fused forward unit with seeded parameters. The kernel list always
/// ends in an operation that keeps probe outputs non-negative (ReLU,
/// pooling of a non-negative input, or identity).
struct GraphBlock {
  int block_id = 0;
  GraphBlockKind kind = GraphBlockKind::CellOp;
  archspec::OperationKind op = archspec::OperationKind::None;  // CellOp only
  int in_channels = 0;
  int out_channels = 0;
  int in_height = 0;
  int in_width = 0;
  archspec::CombineMode combine = archspec::CombineMode::Sum;
  std::vector<PredecessorLink> preds;  // empty = probed over raw input channels
  std::vector<Kernel> ops;
};

struct NodeRef {
  int block_id = 0;
  int channel = 0;

  bool operator==(const NodeRef&) const = default;
};

struct GraphEdge {
  int src = 0;
  int dst = 0;
  double score = 0.0;  // omega; strictly positive for stored edges

  bool operator==(const GraphEdge&) const = default;
};

/// Converted DAG: one node per (block, output channel), edges sorted by
/// (src, dst). Node index = node_offset(block) + channel.
struct ArchGraph {
  int node_count = 0;
  std::vector<NodeRef> nodes;
  std::vector<GraphEdge> edges;
};

/// One probe of the plan: activate `input_channel` of the block input on
/// behalf of channel `pred_channel` of predecessor `pred_index` (-1 when the
/// block has no predecessor links).
struct ProbePlanEntry {
  int pred_index = -1;
  int pred_channel = 0;
  int input_channel = 0;
};

/// Probe order: one entry per (predecessor, channel). Under Sum every
/// predecessor is swept in full (two 4-channel predecessors = 8 probes);
/// under Concat only the real channels of each predecessor are activated,
/// never the virtually padded ones (two 2-channel predecessors = 4 probes).
std::vector<ProbePlanEntry> probe_plan(const GraphBlock& block);

/// All-ones in `channel`, zero elsewhere.
tensorlite::Tensor3 probe_mask(int channels, int height, int width,
                               int channel);

/// Forward pass of the block on the probe mask for `channel`.
tensorlite::Tensor3 probe_block(const GraphBlock& block, int channel);

/// All probes of the plan evaluated through one batched sweep per kernel.
/// Bit-identical to calling probe_block per entry.
std::vector<tensorlite::Tensor3> probe_block_batched(const GraphBlock& block);

struct EdgeScores {
  int in_channels = 0;
  int out_channels = 0;
  std::vector<double> omega;  // [in][out]

  double at(int i, int j) const {
    return omega[static_cast<std::size_t>(i) * out_channels + j];
  }
};

/// omega[i][j] = spatial sum of output channel j under the probe of input
/// channel i. Non-negative; an edge exists iff the entry is > 0.
EdgeScores edge_scores(const GraphBlock& block);

/// Probe-invocation counter (each forward of one masked input counts once).
std::uint64_t probe_invocations();
void reset_probe_invocations();

/// Expanded plan -> topologically ordered blocks with parameters drawn from
/// gaussian_init keyed by (seed, block_id). Block 0 is the virtual input,
/// sized to the first plan block's input channels.
std::vector<GraphBlock> decompose(const archspec::ArchitectureSpec& arch,
                                  std::uint64_t seed);

/// Probe every non-virtual block and keep the edges with omega > 0.
/// block_id of the i-th entry must be i.
ArchGraph build_graph(std::span<const GraphBlock> blocks);

ArchGraph convert(const archspec::ArchitectureSpec& arch, std::uint64_t seed);

/// Mean of the measure over one conversion per seed.
double score_architecture(const archspec::ArchitectureSpec& arch,
                          measures::MeasureKind measure,
                          std::span<const std::uint64_t> seeds);

/// `src_block:src_ch TAB dst_block:dst_ch TAB score` rows, 9 significant
/// digits, sorted by (src, dst).
std::string to_edge_list_tsv(const ArchGraph& g);

/// DOT digraph with node ids b<block>_c<channel>.
std::string to_dot(const ArchGraph& g);

}  // namespace nasgraph::graphify
