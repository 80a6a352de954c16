// Definition-level reference implementations used to check the library.
// Everything here recomputes results from first principles (dense matrices,
// explicit pair enumeration, quadruple loops) and must stay independent of
// the code paths under test.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "nasgraph/graphify.hpp"
#include "nasgraph/tensorlite.hpp"

namespace oracles {

// ---------------------------------------------------------------------------
// Convolution: per output element, accumulate taps in (kh, kw, ci) order over
// the zero-padded input, bias added last.
inline nasgraph::tensorlite::Tensor3 conv_reference(
    const nasgraph::tensorlite::Tensor3& x,
    const nasgraph::tensorlite::ConvParams& p) {
  const int oh = (x.height + 2 * p.padding - p.kernel_h) / p.stride + 1;
  const int ow = (x.width + 2 * p.padding - p.kernel_w) / p.stride + 1;
  nasgraph::tensorlite::Tensor3 y(p.out_channels, oh, ow);
  for (int co = 0; co < p.out_channels; ++co) {
    for (int oy = 0; oy < oh; ++oy) {
      for (int ox = 0; ox < ow; ++ox) {
        double acc = 0.0;
        for (int kh = 0; kh < p.kernel_h; ++kh) {
          for (int kw = 0; kw < p.kernel_w; ++kw) {
            for (int ci = 0; ci < p.in_channels; ++ci) {
              const int iy = oy * p.stride - p.padding + kh;
              const int ix = ox * p.stride - p.padding + kw;
              const double xv =
                  (iy >= 0 && iy < x.height && ix >= 0 && ix < x.width)
                      ? x.at(ci, iy, ix)
                      : 0.0;
              acc += p.weight(co, ci, kh, kw) * xv;
            }
          }
        }
        y.at(co, oy, ox) = acc + p.bias[co];
      }
    }
  }
  return y;
}

// ---------------------------------------------------------------------------
// Graph measures from a dense adjacency matrix.
struct DenseDigraph {
  int n = 0;
  std::vector<std::vector<int>> adj;  // 0/1

  explicit DenseDigraph(int nodes)
      : n(nodes), adj(nodes, std::vector<int>(nodes, 0)) {}
};

inline DenseDigraph densify(const nasgraph::graphify::ArchGraph& g) {
  DenseDigraph d(g.node_count);
  for (const auto& e : g.edges) {
    if (e.src != e.dst) d.adj[e.src][e.dst] = 1;
  }
  return d;
}

inline std::vector<int> undirected_degree_reference(const DenseDigraph& d) {
  std::vector<int> degree(d.n, 0);
  for (int i = 0; i < d.n; ++i) {
    for (int j = 0; j < d.n; ++j) {
      if (i < j && (d.adj[i][j] || d.adj[j][i])) {
        ++degree[i];
        ++degree[j];
      }
    }
  }
  return degree;
}

inline double average_degree_reference(const DenseDigraph& d) {
  const std::vector<int> degree = undirected_degree_reference(d);
  double total = 0.0;
  for (int k : degree) total += k;
  return total / d.n;
}

inline double density_reference(const DenseDigraph& d) {
  double m = 0.0;
  for (const auto& row : d.adj) {
    for (int v : row) m += v;
  }
  return m / (static_cast<double>(d.n) * (d.n - 1));
}

// 1^T A s_in / 1^T A 1 with explicit matrix-vector arithmetic.
inline double resilience_reference(const DenseDigraph& d) {
  std::vector<double> s_in(d.n, 0.0);
  for (int j = 0; j < d.n; ++j) {
    for (int i = 0; i < d.n; ++i) s_in[j] += d.adj[i][j];
  }
  double numerator = 0.0, denominator = 0.0;
  for (int i = 0; i < d.n; ++i) {
    for (int j = 0; j < d.n; ++j) {
      numerator += d.adj[i][j] * s_in[j];
      denominator += d.adj[i][j];
    }
  }
  return numerator / denominator;
}

inline std::int64_t wedge_count_reference(const DenseDigraph& d) {
  const std::vector<int> degree = undirected_degree_reference(d);
  std::int64_t wedges = 0;
  for (int k : degree) wedges += static_cast<std::int64_t>(k) * (k - 1) / 2;
  return wedges;
}

// Random DAG over n nodes; every (i < j) pair becomes an edge with
// probability p, score drawn positive.
inline nasgraph::graphify::ArchGraph random_dag(int n, double p,
                                                std::mt19937_64& gen) {
  nasgraph::graphify::ArchGraph g;
  g.node_count = n;
  for (int i = 0; i < n; ++i) g.nodes.push_back({0, i});
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
      if (u < p) {
        g.edges.push_back({i, j, 0.25 + u});
      }
    }
  }
  return g;
}

// ---------------------------------------------------------------------------
// Rank statistics.

// rank(i) = 1 + #{j : x_j > x_i} + (#{j : x_j == x_i} - 1) / 2
inline std::vector<double> rank_reference(const std::vector<double>& x) {
  std::vector<double> ranks(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    int greater = 0, equal = 0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (x[j] > x[i]) ++greater;
      if (x[j] == x[i]) ++equal;
    }
    ranks[i] = 1.0 + greater + (equal - 1) * 0.5;
  }
  return ranks;
}

// Pearson moments of the two tied-rank vectors, all terms spelled out.
inline double spearman_reference(const std::vector<double>& x,
                                 const std::vector<double>& y) {
  const std::vector<double> rx = rank_reference(x);
  const std::vector<double> ry = rank_reference(y);
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (double v : rx) mx += v;
  for (double v : ry) my += v;
  mx /= n;
  my /= n;
  double cov = 0.0, vx = 0.0, vy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    cov += (rx[i] - mx) * (ry[i] - my);
    vx += (rx[i] - mx) * (rx[i] - mx);
    vy += (ry[i] - my) * (ry[i] - my);
  }
  return cov / std::sqrt(vx * vy);
}

// tau-b by full pair enumeration.
inline double kendall_reference(const std::vector<double>& x,
                                const std::vector<double>& y) {
  std::int64_t concordant = 0, discordant = 0;
  std::int64_t tied_x_only = 0, tied_y_only = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const double dx = x[i] - x[j];
      const double dy = y[i] - y[j];
      if (dx == 0.0 && dy == 0.0) continue;
      if (dx == 0.0) {
        ++tied_x_only;
      } else if (dy == 0.0) {
        ++tied_y_only;
      } else if (dx * dy > 0.0) {
        ++concordant;
      } else {
        ++discordant;
      }
    }
  }
  const double orderable_in_x =
      static_cast<double>(concordant + discordant + tied_y_only);
  const double orderable_in_y =
      static_cast<double>(concordant + discordant + tied_x_only);
  return static_cast<double>(concordant - discordant) /
         std::sqrt(orderable_in_x * orderable_in_y);
}

}  // namespace oracles
