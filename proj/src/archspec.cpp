#include "nasgraph/archspec.hpp"

#include <algorithm>
#include <random>
#include <set>

#include <json.hpp>

#include "nasgraph/error.hpp"
#include "nasgraph/rng.hpp"

namespace nasgraph::archspec {

std::string_view to_string(OperationKind op) {
  switch (op) {
    case OperationKind::None: return "none";
    case OperationKind::SkipConnect: return "skip_connect";
    case OperationKind::Conv1x1: return "nor_conv_1x1";
    case OperationKind::Conv3x3: return "nor_conv_3x3";
    case OperationKind::AvgPool3x3: return "avg_pool_3x3";
  }
  return "?";
}

OperationKind operation_from_name(std::string_view name) {
  if (name == "none") return OperationKind::None;
  if (name == "skip_connect") return OperationKind::SkipConnect;
  if (name == "nor_conv_1x1") return OperationKind::Conv1x1;
  if (name == "nor_conv_3x3") return OperationKind::Conv3x3;
  if (name == "avg_pool_3x3") return OperationKind::AvgPool3x3;
  fail(ErrorKind::UnknownOperation, "'" + std::string(name) + "'");
}

void CellSpec::validate() const {
  if (node_count < 1) fail(ErrorKind::MalformedEncoding, "cell has no nodes");
  for (const CellEdge& e : edges) {
    if (e.src < 0 || e.dst >= node_count || e.src >= e.dst) {
      fail(ErrorKind::MalformedEncoding,
           "cell edge (" + std::to_string(e.src) + ", " +
               std::to_string(e.dst) + ") out of order");
    }
  }
}

void SurrogateConfig::validate() const {
  if (channels < 1 || cells_per_module < 1 || modules < 1 ||
      probe_resolution < 1) {
    fail(ErrorKind::MalformedEncoding, "surrogate config fields must be >= 1");
  }
}

CellSpec parse_nb201_arch(std::string_view encoding) {
  // Split on '+' into node groups.
  std::vector<std::string_view> groups;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = encoding.find('+', start);
    if (pos == std::string_view::npos) {
      groups.push_back(encoding.substr(start));
      break;
    }
    groups.push_back(encoding.substr(start, pos - start));
    start = pos + 1;
  }
  if (groups.size() != 3) {
    fail(ErrorKind::MalformedEncoding,
         "expected 3 '+'-separated groups, got " +
             std::to_string(groups.size()));
  }

  CellSpec cell;
  cell.node_count = 4;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    std::string_view body = groups[g];
    if (body.size() < 2 || body.front() != '|' || body.back() != '|') {
      fail(ErrorKind::MalformedEncoding,
           "group " + std::to_string(g) + " is not '|'-delimited");
    }
    body.remove_prefix(1);
    body.remove_suffix(1);

    std::vector<std::string_view> tokens;
    std::size_t tstart = 0;
    while (true) {
      const std::size_t pos = body.find('|', tstart);
      if (pos == std::string_view::npos) {
        tokens.push_back(body.substr(tstart));
        break;
      }
      tokens.push_back(body.substr(tstart, pos - tstart));
      tstart = pos + 1;
    }
    if (tokens.size() != g + 1) {
      fail(ErrorKind::MalformedEncoding,
           "group " + std::to_string(g) + " has " +
               std::to_string(tokens.size()) + " tokens, expected " +
               std::to_string(g + 1));
    }

    const int dst = static_cast<int>(g) + 1;
    for (std::size_t t = 0; t < tokens.size(); ++t) {
      const std::string_view tok = tokens[t];
      const std::size_t tilde = tok.rfind('~');
      if (tilde == std::string_view::npos || tilde + 1 >= tok.size()) {
        fail(ErrorKind::MalformedEncoding,
             "token '" + std::string(tok) + "' lacks '~index'");
      }
      const std::string_view op_name = tok.substr(0, tilde);
      const std::string_view idx_text = tok.substr(tilde + 1);
      int k = 0;
      for (char ch : idx_text) {
        if (ch < '0' || ch > '9') {
          fail(ErrorKind::MalformedEncoding,
               "non-numeric predecessor index in '" + std::string(tok) + "'");
        }
        k = k * 10 + (ch - '0');
      }
      if (k >= dst) {
        fail(ErrorKind::BadPredecessorIndex,
             "index " + std::to_string(k) + " >= destination node " +
                 std::to_string(dst));
      }
      if (k != static_cast<int>(t)) {
        fail(ErrorKind::MalformedEncoding,
             "predecessor indices must appear in order 0.." +
                 std::to_string(g) + ", got " + std::to_string(k));
      }
      cell.edges.push_back({k, dst, operation_from_name(op_name)});
    }
  }
  return cell;
}

std::string render_nb201(const CellSpec& cell) {
  if (cell.node_count != 4 || cell.edges.size() != 6) {
    fail(ErrorKind::MalformedEncoding,
         "render requires a 4-node cell with 6 edges");
  }
  std::string out;
  for (int dst = 1; dst <= 3; ++dst) {
    if (dst > 1) out += '+';
    for (int src = 0; src < dst; ++src) {
      const auto it = std::find_if(
          cell.edges.begin(), cell.edges.end(),
          [&](const CellEdge& e) { return e.src == src && e.dst == dst; });
      if (it == cell.edges.end()) {
        fail(ErrorKind::MalformedEncoding,
             "missing edge (" + std::to_string(src) + ", " +
                 std::to_string(dst) + ")");
      }
      out += '|';
      out += to_string(it->op);
      out += '~';
      out += std::to_string(src);
    }
    out += '|';
  }
  return out;
}

CellSpec parse_adjacency_cell(const std::vector<std::vector<int>>& adjacency,
                              const std::vector<std::string>& labels) {
  const std::size_t n = adjacency.size();
  if (n == 0) fail(ErrorKind::DimensionMismatch, "empty adjacency matrix");
  if (labels.size() != n) {
    fail(ErrorKind::DimensionMismatch,
         "matrix is " + std::to_string(n) + "x" + std::to_string(n) + " but " +
             std::to_string(labels.size()) + " labels given");
  }

  // Resolve node labels. `input`/`output` mark the boundary nodes; edges
  // into an `output` node route data unchanged.
  std::vector<OperationKind> node_op(n, OperationKind::SkipConnect);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string& label = labels[i];
    if (label == "input") {
      if (i != 0) {
        fail(ErrorKind::MalformedEncoding, "'input' label on non-first node");
      }
    } else if (label == "output") {
      node_op[i] = OperationKind::SkipConnect;
    } else {
      node_op[i] = operation_from_name(label);
    }
  }

  CellSpec cell;
  cell.node_count = static_cast<int>(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (adjacency[i].size() != n) {
      fail(ErrorKind::DimensionMismatch, "adjacency matrix is not square");
    }
    for (std::size_t j = 0; j < n; ++j) {
      const int v = adjacency[i][j];
      if (v == 0) continue;
      if (v != 1) {
        fail(ErrorKind::MalformedEncoding, "adjacency entries must be 0/1");
      }
      if (j <= i) {
        fail(ErrorKind::NotUpperTriangular,
             "entry (" + std::to_string(i) + ", " + std::to_string(j) + ")");
      }
      cell.edges.push_back(
          {static_cast<int>(i), static_cast<int>(j), node_op[j]});
    }
  }
  return cell;
}

CellSpec parse_adjacency_json(std::string_view json_text) {
  nlohmann::json doc = nlohmann::json::parse(json_text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object() || !doc.contains("matrix") ||
      !doc.contains("ops")) {
    fail(ErrorKind::MalformedEncoding,
         "expected JSON object with 'matrix' and 'ops'");
  }
  std::vector<std::vector<int>> matrix;
  std::vector<std::string> labels;
  try {
    matrix = doc["matrix"].get<std::vector<std::vector<int>>>();
    labels = doc["ops"].get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::MalformedEncoding, e.what());
  }
  return parse_adjacency_cell(matrix, labels);
}

CellSpec sample_random_cell(std::uint64_t seed) {
  std::mt19937_64 gen(rng::derive_stream(seed, 0xce11));
  CellSpec cell;
  cell.node_count = 4;
  for (int dst = 1; dst <= 3; ++dst) {
    for (int src = 0; src < dst; ++src) {
      const auto op =
          static_cast<OperationKind>(rng::bounded(gen, kOperationCount));
      cell.edges.push_back({src, dst, op});
    }
  }
  return cell;
}

ArchitectureSpec expand(const CellSpec& cell, const SurrogateConfig& cfg) {
  cell.validate();
  cfg.validate();

  ArchitectureSpec arch;
  arch.cell = cell;
  arch.surrogate = cfg;
  auto& plan = arch.block_plan;

  int width = cfg.channels;
  int spatial = cfg.probe_resolution;
  plan.push_back({BlockKind::Stem, OperationKind::None, 3, width, spatial,
                  spatial, spatial, spatial, CombineMode::Sum, {}});

  // Cell edges in canonical (dst, src) order, matching the NB201 grammar.
  std::vector<CellEdge> edges = cell.edges;
  std::sort(edges.begin(), edges.end(), [](const CellEdge& a, const CellEdge& b) {
    return a.dst != b.dst ? a.dst < b.dst : a.src < b.src;
  });

  std::vector<int> carry = {0};  // blocks feeding the next consumer
  for (int mod = 0; mod < cfg.modules; ++mod) {
    if (mod > 0 && !carry.empty()) {
      if (spatial < 2) {
        fail(ErrorKind::ShapeMismatch,
             "probe resolution too small for " + std::to_string(cfg.modules) +
                 " modules");
      }
      const int rid = static_cast<int>(plan.size());
      const int out_spatial = (spatial - 2) / 2 + 1;
      plan.push_back({BlockKind::Reduction, OperationKind::None, width,
                      width * 2, spatial, spatial, out_spatial, out_spatial,
                      CombineMode::Sum, carry});
      carry = {rid};
      width *= 2;
      spatial = out_spatial;
    }
    for (int rep = 0; rep < cfg.cells_per_module; ++rep) {
      std::vector<std::vector<int>> node_src(cell.node_count);
      node_src[0] = carry;
      for (const CellEdge& e : edges) {
        if (node_src[e.src].empty()) continue;  // no signal reaches e.src
        const int bid = static_cast<int>(plan.size());
        plan.push_back({BlockKind::CellOp, e.op, width, width, spatial,
                        spatial, spatial, spatial, CombineMode::Sum,
                        node_src[e.src]});
        node_src[e.dst].push_back(bid);
      }
      carry = node_src[cell.node_count - 1];
    }
  }

  if (!carry.empty()) {
    plan.push_back({BlockKind::Head, OperationKind::None, width, width,
                    spatial, spatial, 1, 1, CombineMode::Sum, carry});
  }
  return arch;
}

}  // namespace nasgraph::archspec
