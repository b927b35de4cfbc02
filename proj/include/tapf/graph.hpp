#ifndef TAPF_GRAPH_HPP
#define TAPF_GRAPH_HPP

#include <algorithm>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tapf {

using VertexId = std::int32_t;

/// Sentinel position for an agent that is not on the graph at some time step
/// (before it is released at a shared start, or after it was absorbed at a
/// funnel target).
inline constexpr VertexId kAbsent = -1;

inline constexpr int kUnreachable = -1;

struct Edge {
  VertexId u;  // u < v
  VertexId v;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Cell layout of a 4-neighbor grid graph. Free cells map to vertex ids in
/// row-major order.
struct GridInfo {
  int width = 0;
  int height = 0;
  std::vector<bool> blocked;          // width*height, row-major
  std::vector<int> cell_of_vertex;    // vertex -> cell index
  std::vector<VertexId> vertex_of_cell;  // cell index -> vertex or kAbsent

  friend bool operator==(const GridInfo&, const GridInfo&) = default;
};

/// Undirected simple graph with stable edge ids.
class Graph {
 public:
  Graph() = default;

  static Graph from_edges(int vertex_count,
                          std::span<const std::pair<VertexId, VertexId>> edges) {
    if (vertex_count <= 0) {
      throw std::invalid_argument("graph needs at least one vertex");
    }
    Graph g;
    g.vertex_count_ = vertex_count;
    g.edges_.reserve(edges.size());
    for (auto [a, b] : edges) {
      if (a < 0 || b < 0 || a >= vertex_count || b >= vertex_count) {
        throw std::invalid_argument("edge endpoint out of range: " +
                                    std::to_string(a) + " " + std::to_string(b));
      }
      if (a == b) {
        throw std::invalid_argument("self-loop at vertex " + std::to_string(a));
      }
      g.edges_.push_back(Edge{std::min(a, b), std::max(a, b)});
    }
    std::sort(g.edges_.begin(), g.edges_.end(), [](const Edge& x, const Edge& y) {
      return std::pair(x.u, x.v) < std::pair(y.u, y.v);
    });
    for (std::size_t i = 1; i < g.edges_.size(); ++i) {
      if (g.edges_[i] == g.edges_[i - 1]) {
        throw std::invalid_argument("duplicate edge " + std::to_string(g.edges_[i].u) +
                                    " " + std::to_string(g.edges_[i].v));
      }
    }
    g.build_adjacency();
    return g;
  }

  static Graph from_edges(int vertex_count,
                          const std::vector<std::pair<VertexId, VertexId>>& edges) {
    return from_edges(vertex_count,
                      std::span<const std::pair<VertexId, VertexId>>(edges));
  }

  /// 4-neighbor grid over the free cells of `blocked` (row-major, width*height).
  static Graph grid(int width, int height, std::vector<bool> blocked) {
    if (width <= 0 || height <= 0) {
      throw std::invalid_argument("grid dimensions must be positive");
    }
    if (blocked.size() != static_cast<std::size_t>(width) * height) {
      throw std::invalid_argument("blocked mask size does not match grid");
    }
    GridInfo info;
    info.width = width;
    info.height = height;
    info.vertex_of_cell.assign(blocked.size(), kAbsent);
    for (int c = 0; c < width * height; ++c) {
      if (!blocked[c]) {
        info.vertex_of_cell[c] = static_cast<VertexId>(info.cell_of_vertex.size());
        info.cell_of_vertex.push_back(c);
      }
    }
    if (info.cell_of_vertex.empty()) {
      throw std::invalid_argument("grid has no free cells");
    }
    std::vector<std::pair<VertexId, VertexId>> edges;
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        VertexId a = info.vertex_of_cell[y * width + x];
        if (a == kAbsent) continue;
        if (x + 1 < width) {
          VertexId b = info.vertex_of_cell[y * width + x + 1];
          if (b != kAbsent) edges.emplace_back(a, b);
        }
        if (y + 1 < height) {
          VertexId b = info.vertex_of_cell[(y + 1) * width + x];
          if (b != kAbsent) edges.emplace_back(a, b);
        }
      }
    }
    info.blocked = std::move(blocked);
    Graph g = from_edges(static_cast<int>(info.cell_of_vertex.size()), edges);
    g.grid_ = std::move(info);
    return g;
  }

  int vertex_count() const { return vertex_count_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int id) const { return edges_[id]; }

  std::span<const VertexId> neighbors(VertexId v) const {
    return {adj_.data() + adj_begin_[v], adj_.data() + adj_begin_[v + 1]};
  }
  /// Edge ids parallel to neighbors(v).
  std::span<const int> incident_edges(VertexId v) const {
    return {adj_edge_.data() + adj_begin_[v], adj_edge_.data() + adj_begin_[v + 1]};
  }

  bool contains(VertexId v) const { return v >= 0 && v < vertex_count_; }

  /// Edge id of {a, b}, if present.
  std::optional<int> edge_id(VertexId a, VertexId b) const {
    if (!contains(a) || !contains(b)) return std::nullopt;
    auto nb = neighbors(a);
    auto it = std::lower_bound(nb.begin(), nb.end(), b);
    if (it == nb.end() || *it != b) return std::nullopt;
    return adj_edge_[adj_begin_[a] + (it - nb.begin())];
  }
  bool adjacent(VertexId a, VertexId b) const { return edge_id(a, b).has_value(); }

  const std::optional<GridInfo>& grid_info() const { return grid_; }

  /// Breadth-first hop distances from a set of sources (kUnreachable where
  /// no source reaches).
  std::vector<int> distances_from(std::span<const VertexId> sources) const {
    std::vector<int> dist(vertex_count_, kUnreachable);
    std::deque<VertexId> queue;
    for (VertexId s : sources) {
      if (dist[s] != 0) {
        dist[s] = 0;
        queue.push_back(s);
      }
    }
    while (!queue.empty()) {
      VertexId v = queue.front();
      queue.pop_front();
      for (VertexId w : neighbors(v)) {
        if (dist[w] == kUnreachable) {
          dist[w] = dist[v] + 1;
          queue.push_back(w);
        }
      }
    }
    return dist;
  }
  std::vector<int> distances_from(VertexId source) const {
    return distances_from(std::span<const VertexId>(&source, 1));
  }

  /// Connected component label per vertex, labels in order of lowest vertex.
  std::vector<int> components() const {
    std::vector<int> label(vertex_count_, -1);
    int next = 0;
    for (VertexId s = 0; s < vertex_count_; ++s) {
      if (label[s] != -1) continue;
      std::vector<VertexId> stack{s};
      label[s] = next;
      while (!stack.empty()) {
        VertexId v = stack.back();
        stack.pop_back();
        for (VertexId w : neighbors(v)) {
          if (label[w] == -1) {
            label[w] = next;
            stack.push_back(w);
          }
        }
      }
      ++next;
    }
    return label;
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.vertex_count_ == b.vertex_count_ && a.edges_ == b.edges_ && a.grid_ == b.grid_;
  }

 private:
  void build_adjacency() {
    std::vector<int> degree(vertex_count_, 0);
    for (const Edge& e : edges_) {
      ++degree[e.u];
      ++degree[e.v];
    }
    adj_begin_.assign(vertex_count_ + 1, 0);
    for (int v = 0; v < vertex_count_; ++v) adj_begin_[v + 1] = adj_begin_[v] + degree[v];
    adj_.assign(adj_begin_.back(), 0);
    adj_edge_.assign(adj_begin_.back(), 0);
    std::vector<int> fill(adj_begin_.begin(), adj_begin_.end() - 1);
    for (int id = 0; id < edge_count(); ++id) {
      const Edge& e = edges_[id];
      adj_[fill[e.u]] = e.v;
      adj_edge_[fill[e.u]++] = id;
      adj_[fill[e.v]] = e.u;
      adj_edge_[fill[e.v]++] = id;
    }
    // Edges are sorted by (u, v), so each adjacency slice is sorted except
    // where lower neighbors were appended after higher ones; sort explicitly.
    for (int v = 0; v < vertex_count_; ++v) {
      std::vector<std::pair<VertexId, int>> slice;
      for (int k = adj_begin_[v]; k < adj_begin_[v + 1]; ++k) slice.emplace_back(adj_[k], adj_edge_[k]);
      std::sort(slice.begin(), slice.end());
      for (int k = adj_begin_[v]; k < adj_begin_[v + 1]; ++k) {
        adj_[k] = slice[k - adj_begin_[v]].first;
        adj_edge_[k] = slice[k - adj_begin_[v]].second;
      }
    }
  }

  int vertex_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<int> adj_begin_{0};
  std::vector<VertexId> adj_;
  std::vector<int> adj_edge_;
  std::optional<GridInfo> grid_;
};

}  // namespace tapf

#endif  // TAPF_GRAPH_HPP
