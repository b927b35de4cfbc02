#ifndef TAPF_GENERATORS_HPP
#define TAPF_GENERATORS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "tapf/graph.hpp"
#include "tapf/instance.hpp"

namespace tapf {

struct GridGenSpec {
  int width = 30;
  int height = 30;
  double blocked_fraction = 0.1;
  int team_count = 2;
  int team_size = 5;
  std::uint64_t seed = 1;
};

class GeneratorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Random 4-neighbor grid with floor(fraction * cells) blocked cells and
/// distinct start and target cells. The blocked mask is redrawn (up to 100
/// times) until every team's starts and targets share one component.
inline TapfInstance gen_grid(const GridGenSpec& spec) {
  if (spec.width <= 0 || spec.height <= 0 || spec.team_count <= 0 || spec.team_size <= 0 ||
      spec.blocked_fraction < 0 || spec.blocked_fraction >= 1) {
    throw GeneratorError("invalid grid spec");
  }
  const int cells = spec.width * spec.height;
  const int blocked_count = static_cast<int>(std::floor(spec.blocked_fraction * cells));
  const int agents = spec.team_count * spec.team_size;
  if (2 * agents > cells - blocked_count) {
    throw GeneratorError("grid too small for " + std::to_string(agents) + " agents");
  }
  std::mt19937_64 rng(spec.seed);
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::vector<int> order(cells);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<bool> blocked(cells, false);
    for (int k = 0; k < blocked_count; ++k) blocked[order[k]] = true;
    Graph g = Graph::grid(spec.width, spec.height, blocked);

    std::vector<VertexId> picks(g.vertex_count());
    std::iota(picks.begin(), picks.end(), 0);
    std::shuffle(picks.begin(), picks.end(), rng);
    const auto comp = g.components();
    TapfInstance inst;
    bool connected = true;
    for (int i = 0; i < spec.team_count; ++i) {
      Team team;
      for (int j = 0; j < spec.team_size; ++j) {
        team.starts.push_back(picks[i * spec.team_size + j]);
        team.targets.push_back(picks[agents + i * spec.team_size + j]);
      }
      for (VertexId v : team.starts) connected = connected && comp[v] == comp[team.targets[0]];
      for (VertexId v : team.targets) connected = connected && comp[v] == comp[team.targets[0]];
      inst.teams.push_back(std::move(team));
    }
    if (!connected) continue;
    inst.graph = std::move(g);
    return inst;
  }
  throw GeneratorError("no connected grid sample after 100 attempts");
}

struct WarehouseGenSpec {
  int station_count = 3;
  int units_per_station = 4;  // incoming units per station
  /// Outgoing units; < 0 means as many as incoming units. Fewer outgoing
  /// units than vacated storage cells gives the surplus-storage variant.
  int outgoing_units = -1;
  int corridor_width = 2;
  int shelf_length = 4;  // storage cells per shelf row
  int shelf_columns = 0;  // 0: enough for 1.6 storage cells per incoming unit, at least 3
  int shelf_rows = 0;     // 0: one per station, at least 3; each shelf is two storage rows
  std::uint64_t seed = 1;

  static WarehouseGenSpec desk() { return {}; }
  static WarehouseGenSpec large() {
    WarehouseGenSpec s;
    s.station_count = 7;
    s.units_per_station = 30;
    s.corridor_width = 3;
    return s;
  }
};

struct WarehouseLayout {
  std::vector<VertexId> entrances;  // one per station
  std::vector<VertexId> exits;
  std::vector<VertexId> storage;
};

namespace detail {

inline WarehouseGenSpec resolve_layout(WarehouseGenSpec spec) {
  if (spec.shelf_rows == 0) spec.shelf_rows = std::max(3, spec.station_count);
  if (spec.shelf_columns == 0) {
    const int incoming = spec.station_count * spec.units_per_station;
    const int per_column = spec.shelf_rows * 2 * spec.shelf_length;
    spec.shelf_columns = std::max(3, (16 * incoming + 10 * per_column - 1) / (10 * per_column));
  }
  return spec;
}

inline Graph warehouse_graph(const WarehouseGenSpec& spec, WarehouseLayout& layout) {
  const int storage_x0 = 1 + spec.corridor_width;
  const int width = storage_x0 + spec.shelf_columns * (spec.shelf_length + 1) + 1;
  const int storage_height = spec.shelf_rows * 3 + 1;
  const int height = std::max(storage_height, 3 * spec.station_count + 1);
  std::vector<bool> blocked(static_cast<std::size_t>(width) * height, false);
  std::vector<int> entrance_cells, exit_cells, storage_cells;
  for (int y = 0; y < height; ++y) blocked[y * width] = true;
  for (int k = 0; k < spec.station_count; ++k) {
    const int y = 3 * k + 1;
    blocked[y * width] = false;
    blocked[(y + 1) * width] = false;
    entrance_cells.push_back(y * width);
    exit_cells.push_back((y + 1) * width);
  }
  // Storage block: shelves of two rows separated by one-row aisles, and
  // one-column aisles between shelves. Everything is traversable; storage
  // cells are where pods rest.
  for (int r = 0; r < spec.shelf_rows; ++r) {
    for (int c = 0; c < spec.shelf_columns; ++c) {
      for (int dy = 1; dy <= 2; ++dy) {
        for (int dx = 0; dx < spec.shelf_length; ++dx) {
          const int x = storage_x0 + c * (spec.shelf_length + 1) + 1 + dx;
          const int y = r * 3 + dy;
          if (y < height && x < width) storage_cells.push_back(y * width + x);
        }
      }
    }
  }
  std::sort(storage_cells.begin(), storage_cells.end());
  Graph g = Graph::grid(width, height, blocked);
  const auto& info = *g.grid_info();
  for (int c : entrance_cells) layout.entrances.push_back(info.vertex_of_cell[c]);
  for (int c : exit_cells) layout.exits.push_back(info.vertex_of_cell[c]);
  for (int c : storage_cells) layout.storage.push_back(info.vertex_of_cell[c]);
  return g;
}

}  // namespace detail

/// Warehouse instance: inventory stations on the left edge (entrance above
/// exit), a free corridor, and a storage block to the right. Incoming units
/// start on random storage cells and form one funnel team per station
/// (absorbed at its entrance); outgoing units leave the station exits one per
/// time step and form one team whose targets are the vacated storage cells.
inline TapfInstance gen_warehouse(const WarehouseGenSpec& requested,
                                  WarehouseLayout* layout_out = nullptr) {
  const WarehouseGenSpec spec = detail::resolve_layout(requested);
  if (spec.station_count <= 0 || spec.units_per_station <= 0 || spec.shelf_length <= 0 ||
      spec.shelf_columns <= 0 || spec.shelf_rows <= 0 || spec.corridor_width <= 0) {
    throw GeneratorError("invalid warehouse spec");
  }
  WarehouseLayout layout;
  Graph g = detail::warehouse_graph(spec, layout);
  const int incoming = spec.station_count * spec.units_per_station;
  const int outgoing = spec.outgoing_units < 0 ? incoming : spec.outgoing_units;
  if (incoming > static_cast<int>(layout.storage.size())) {
    throw GeneratorError("layout has " + std::to_string(layout.storage.size()) +
                         " storage cells for " + std::to_string(incoming) + " incoming units");
  }
  if (outgoing <= 0 || outgoing > incoming) {
    throw GeneratorError("outgoing units must be between 1 and the incoming units");
  }
  std::mt19937_64 rng(spec.seed);
  std::vector<VertexId> storage = layout.storage;
  std::shuffle(storage.begin(), storage.end(), rng);

  TapfInstance inst;
  inst.graph = std::move(g);
  std::vector<VertexId> vacated;
  for (int k = 0; k < spec.station_count; ++k) {
    Team team;
    for (int j = 0; j < spec.units_per_station; ++j) {
      const VertexId s = storage[k * spec.units_per_station + j];
      team.starts.push_back(s);
      vacated.push_back(s);
    }
    team.targets = {layout.entrances[k]};
    team.flags.funnel_target = true;
    inst.teams.push_back(std::move(team));
  }
  Team out;
  for (int j = 0; j < outgoing; ++j) out.starts.push_back(layout.exits[j % spec.station_count]);
  std::sort(out.starts.begin(), out.starts.end());
  out.targets = vacated;
  std::sort(out.targets.begin(), out.targets.end());
  out.flags.shared_start_spread = true;
  out.flags.surplus_targets = outgoing < incoming;
  inst.teams.push_back(std::move(out));
  if (layout_out) *layout_out = std::move(layout);
  return inst;
}

}  // namespace tapf

#endif  // TAPF_GENERATORS_HPP
