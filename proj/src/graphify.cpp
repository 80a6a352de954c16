#include "nasgraph/graphify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <string>

#include "nasgraph/error.hpp"
#include "nasgraph/rng.hpp"

namespace nasgraph::graphify {

namespace {

std::atomic<std::uint64_t> g_probe_invocations{0};

tensorlite::Tensor3 run_kernel(const Kernel& k, const tensorlite::Tensor3& x) {
  switch (k.kind) {
    case KernelKind::Conv:
      return tensorlite::conv2d(x, k.conv);
    case KernelKind::ReLU:
      return tensorlite::relu(x);
    case KernelKind::AvgPool:
      return tensorlite::avg_pool(x, k.pool_kernel, k.pool_stride,
                                  k.pool_padding);
    case KernelKind::GlobalAvgPool:
      return tensorlite::global_avg_pool(x);
    case KernelKind::Identity:
      return x;
    case KernelKind::Zero:
      return tensorlite::Tensor3(x.channels, x.height, x.width);
  }
  fail(ErrorKind::ShapeMismatch, "unknown kernel");
}

tensorlite::Tensor3 run_block(const GraphBlock& block,
                              tensorlite::Tensor3 x) {
  for (const Kernel& k : block.ops) x = run_kernel(k, x);
  return x;
}

}  // namespace

std::uint64_t probe_invocations() { return g_probe_invocations.load(); }
void reset_probe_invocations() { g_probe_invocations.store(0); }

std::vector<ProbePlanEntry> probe_plan(const GraphBlock& block) {
  std::vector<ProbePlanEntry> plan;
  if (block.preds.empty()) {
    plan.reserve(block.in_channels);
    for (int c = 0; c < block.in_channels; ++c) plan.push_back({-1, c, c});
    return plan;
  }
  if (block.combine == archspec::CombineMode::Sum) {
    for (std::size_t p = 0; p < block.preds.size(); ++p) {
      if (block.preds[p].channels != block.in_channels) {
        fail(ErrorKind::ShapeMismatch,
             "sum predecessor has " + std::to_string(block.preds[p].channels) +
                 " channels, block expects " +
                 std::to_string(block.in_channels));
      }
      for (int c = 0; c < block.in_channels; ++c) {
        plan.push_back({static_cast<int>(p), c, c});
      }
    }
    return plan;
  }
  // Concat: predecessor channel ranges must partition [0, in_channels).
  int expect_offset = 0;
  for (std::size_t p = 0; p < block.preds.size(); ++p) {
    const PredecessorLink& link = block.preds[p];
    if (link.channel_offset != expect_offset || link.channels < 1) {
      fail(ErrorKind::ShapeMismatch, "concat offsets do not partition input");
    }
    for (int c = 0; c < link.channels; ++c) {
      plan.push_back({static_cast<int>(p), c, link.channel_offset + c});
    }
    expect_offset += link.channels;
  }
  if (expect_offset != block.in_channels) {
    fail(ErrorKind::ShapeMismatch,
         "concat predecessors cover " + std::to_string(expect_offset) +
             " of " + std::to_string(block.in_channels) + " input channels");
  }
  return plan;
}

tensorlite::Tensor3 probe_mask(int channels, int height, int width,
                               int channel) {
  tensorlite::Tensor3 t(channels, height, width);
  double* p = t.channel(channel);
  const std::size_t n = static_cast<std::size_t>(height) * width;
  for (std::size_t i = 0; i < n; ++i) p[i] = 1.0;
  return t;
}

tensorlite::Tensor3 probe_block(const GraphBlock& block, int channel) {
  if (channel < 0 || channel >= block.in_channels) {
    fail(ErrorKind::ChannelOutOfRange,
         "channel " + std::to_string(channel) + " of " +
             std::to_string(block.in_channels));
  }
  g_probe_invocations.fetch_add(1, std::memory_order_relaxed);
  return run_block(block, probe_mask(block.in_channels, block.in_height,
                                     block.in_width, channel));
}

std::vector<tensorlite::Tensor3> probe_block_batched(const GraphBlock& block) {
  const std::vector<ProbePlanEntry> plan = probe_plan(block);
  std::vector<tensorlite::Tensor3> batch;
  batch.reserve(plan.size());
  for (const ProbePlanEntry& e : plan) {
    batch.push_back(probe_mask(block.in_channels, block.in_height,
                               block.in_width, e.input_channel));
  }
  g_probe_invocations.fetch_add(batch.size(), std::memory_order_relaxed);
  // Kernel-major sweep; per-sample arithmetic identical to probe_block.
  for (const Kernel& k : block.ops) {
    for (tensorlite::Tensor3& t : batch) t = run_kernel(k, t);
  }
  return batch;
}

namespace {

std::vector<double> spatial_sums(const tensorlite::Tensor3& y) {
  std::vector<double> sums(y.channels, 0.0);
  const std::size_t n = static_cast<std::size_t>(y.height) * y.width;
  for (int c = 0; c < y.channels; ++c) {
    const double* p = y.channel(c);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += p[i];
    sums[c] = s;
  }
  return sums;
}

struct ProbeRow {
  ProbePlanEntry entry;
  std::vector<double> omega;  // per output channel
};

std::vector<ProbeRow> compute_probe_rows(const GraphBlock& block) {
  std::vector<ProbeRow> rows;
  for (const ProbePlanEntry& e : probe_plan(block)) {
    rows.push_back({e, spatial_sums(probe_block(block, e.input_channel))});
  }
  return rows;
}

}  // namespace

EdgeScores edge_scores(const GraphBlock& block) {
  EdgeScores scores;
  scores.in_channels = block.in_channels;
  scores.out_channels = block.out_channels;
  scores.omega.assign(
      static_cast<std::size_t>(block.in_channels) * block.out_channels, 0.0);
  for (const ProbeRow& row : compute_probe_rows(block)) {
    if (static_cast<int>(row.omega.size()) != block.out_channels) {
      fail(ErrorKind::ShapeMismatch, "block produced unexpected channel count");
    }
    for (int j = 0; j < block.out_channels; ++j) {
      scores.omega[static_cast<std::size_t>(row.entry.input_channel) *
                       block.out_channels + j] = row.omega[j];
    }
  }
  return scores;
}

namespace {

Kernel make_conv(int in_ch, int out_ch, int kernel, int stride, int padding,
                 std::uint64_t seed, int block_id) {
  Kernel k;
  k.kind = KernelKind::Conv;
  k.conv.out_channels = out_ch;
  k.conv.in_channels = in_ch;
  k.conv.kernel_h = kernel;
  k.conv.kernel_w = kernel;
  k.conv.stride = stride;
  k.conv.padding = padding;
  const std::size_t count =
      static_cast<std::size_t>(out_ch) * in_ch * kernel * kernel;
  const double fan_in = static_cast<double>(in_ch) * kernel * kernel;
  k.conv.weights = tensorlite::gaussian_init(
      count, rng::derive_stream(seed, static_cast<std::uint64_t>(block_id)),
      1.0 / std::sqrt(fan_in));
  k.conv.bias.assign(out_ch, 0.0);  // zero bias keeps edge topology scale-free
  return k;
}

Kernel make_relu() { return Kernel{KernelKind::ReLU, {}, 0, 0, 0}; }

Kernel make_pool(int kernel, int stride, int padding) {
  return Kernel{KernelKind::AvgPool, {}, kernel, stride, padding};
}

}  // namespace

std::vector<GraphBlock> decompose(const archspec::ArchitectureSpec& arch,
                                  std::uint64_t seed) {
  using archspec::BlockKind;
  using archspec::OperationKind;

  std::vector<GraphBlock> blocks;
  blocks.reserve(arch.block_plan.size() + 1);

  GraphBlock virtual_input;
  virtual_input.block_id = 0;
  virtual_input.kind = GraphBlockKind::VirtualInput;
  const int input_channels =
      arch.block_plan.empty() ? 0 : arch.block_plan.front().in_channels;
  virtual_input.in_channels = input_channels;
  virtual_input.out_channels = input_channels;
  if (!arch.block_plan.empty()) {
    virtual_input.in_height = arch.block_plan.front().in_height;
    virtual_input.in_width = arch.block_plan.front().in_width;
  }
  virtual_input.ops = {Kernel{KernelKind::Identity, {}, 0, 0, 0}};
  blocks.push_back(std::move(virtual_input));

  for (std::size_t p = 0; p < arch.block_plan.size(); ++p) {
    const archspec::BlockDescriptor& d = arch.block_plan[p];
    GraphBlock b;
    b.block_id = static_cast<int>(p) + 1;
    b.op = d.op;
    b.in_channels = d.in_channels;
    b.out_channels = d.out_channels;
    b.in_height = d.in_height;
    b.in_width = d.in_width;
    b.combine = d.combine;
    if (d.preds.empty()) {
      b.preds = {{0, input_channels, 0}};  // the virtual input block
    } else {
      int offset = 0;
      for (int pred_plan_index : d.preds) {
        const int pred_channels =
            arch.block_plan[pred_plan_index].out_channels;
        b.preds.push_back({pred_plan_index + 1, pred_channels, offset});
        if (d.combine == archspec::CombineMode::Concat) offset += pred_channels;
      }
    }

    switch (d.kind) {
      case BlockKind::Stem:
        b.kind = GraphBlockKind::Stem;
        b.ops = {make_conv(d.in_channels, d.out_channels, 3, 1, 1, seed,
                           b.block_id),
                 make_relu()};
        break;
      case BlockKind::Reduction:
        b.kind = GraphBlockKind::Reduction;
        b.ops = {make_pool(2, 2, 0),
                 make_conv(d.in_channels, d.out_channels, 1, 1, 0, seed,
                           b.block_id),
                 make_relu()};
        break;
      case BlockKind::Head:
        b.kind = GraphBlockKind::Head;
        b.ops = {Kernel{KernelKind::GlobalAvgPool, {}, 0, 0, 0}};
        break;
      case BlockKind::CellOp:
        b.kind = GraphBlockKind::CellOp;
        switch (d.op) {
          case OperationKind::None:
            b.ops = {Kernel{KernelKind::Zero, {}, 0, 0, 0}};
            break;
          case OperationKind::SkipConnect:
            b.ops = {Kernel{KernelKind::Identity, {}, 0, 0, 0}};
            break;
          case OperationKind::Conv1x1:
            b.ops = {make_conv(d.in_channels, d.out_channels, 1, 1, 0, seed,
                               b.block_id),
                     make_relu()};
            break;
          case OperationKind::Conv3x3:
            b.ops = {make_conv(d.in_channels, d.out_channels, 3, 1, 1, seed,
                               b.block_id),
                     make_relu()};
            break;
          case OperationKind::AvgPool3x3:
            b.ops = {make_pool(3, 1, 1)};
            break;
        }
        break;
    }
    blocks.push_back(std::move(b));
  }
  return blocks;
}

ArchGraph build_graph(std::span<const GraphBlock> blocks) {
  ArchGraph g;
  std::vector<int> node_offset(blocks.size(), 0);
  for (const GraphBlock& b : blocks) {
    node_offset[b.block_id] = static_cast<int>(g.nodes.size());
    for (int c = 0; c < b.out_channels; ++c) {
      g.nodes.push_back({b.block_id, c});
    }
  }
  g.node_count = static_cast<int>(g.nodes.size());

  for (const GraphBlock& b : blocks) {
    if (b.kind == GraphBlockKind::VirtualInput) continue;
    const int dst_base = node_offset[b.block_id];
    for (const ProbeRow& row : compute_probe_rows(b)) {
      const PredecessorLink& link = b.preds[row.entry.pred_index];
      const int src = node_offset[link.block_id] + row.entry.pred_channel;
      for (int j = 0; j < b.out_channels; ++j) {
        if (row.omega[j] > 0.0) {
          g.edges.push_back({src, dst_base + j, row.omega[j]});
        }
      }
    }
  }
  std::sort(g.edges.begin(), g.edges.end(),
            [](const GraphEdge& a, const GraphEdge& b) {
              return a.src != b.src ? a.src < b.src : a.dst < b.dst;
            });
  return g;
}

ArchGraph convert(const archspec::ArchitectureSpec& arch, std::uint64_t seed) {
  return build_graph(decompose(arch, seed));
}

double score_architecture(const archspec::ArchitectureSpec& arch,
                          measures::MeasureKind measure,
                          std::span<const std::uint64_t> seeds) {
  if (seeds.empty()) fail(ErrorKind::EmptyInput, "no conversion seeds given");
  double total = 0.0;
  for (std::uint64_t s : seeds) {
    total += measures::compute(measure, convert(arch, s));
  }
  return total / static_cast<double>(seeds.size());
}

std::string to_edge_list_tsv(const ArchGraph& g) {
  std::string out;
  char buf[128];
  for (const GraphEdge& e : g.edges) {
    const NodeRef& s = g.nodes[e.src];
    const NodeRef& d = g.nodes[e.dst];
    std::snprintf(buf, sizeof(buf), "%d:%d\t%d:%d\t%.9g\n", s.block_id,
                  s.channel, d.block_id, d.channel, e.score);
    out += buf;
  }
  return out;
}

std::string to_dot(const ArchGraph& g) {
  std::string out = "digraph nasgraph {\n";
  char buf[160];
  for (const NodeRef& n : g.nodes) {
    std::snprintf(buf, sizeof(buf), "  b%d_c%d;\n", n.block_id, n.channel);
    out += buf;
  }
  for (const GraphEdge& e : g.edges) {
    const NodeRef& s = g.nodes[e.src];
    const NodeRef& d = g.nodes[e.dst];
    std::snprintf(buf, sizeof(buf), "  b%d_c%d -> b%d_c%d [label=\"%.9g\"];\n",
                  s.block_id, s.channel, d.block_id, d.channel, e.score);
    out += buf;
  }
  out += "}\n";
  return out;
}

}  // namespace nasgraph::graphify
