#include "manetsim/mobility/mobility.hpp"

#include <algorithm>
#include <cassert>

namespace manet::mobility {
namespace {

Position draw_position(Area area, sim::RandomStream& rng) {
  Position p;
  p.x = rng.uniform(0.0, area.width);
  p.y = rng.uniform(0.0, area.height);
  return p;
}

void draw_leg(WaypointState& st, Area area, SpeedRange speed, sim::RandomStream& rng) {
  st.waypoint = draw_position(area, rng);
  st.speed_mps = rng.uniform(speed.min_mps, speed.max_mps);
}

}  // namespace

std::vector<Position> init_positions(std::uint32_t count, Area area,
                                     sim::RandomStream& rng) {
  std::vector<Position> out;
  out.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) out.push_back(draw_position(area, rng));
  return out;
}

WaypointState waypoint_init(Position start, Area area, SpeedRange speed,
                            sim::RandomStream& rng) {
  WaypointState st;
  st.pos = start;
  draw_leg(st, area, speed, rng);
  return st;
}

WaypointState waypoint_step(WaypointState st, sim::SimTime now, sim::SimTime dt,
                            Area area, SpeedRange speed, sim::SimTime pause,
                            sim::RandomStream& rng) {
  double remaining_s = dt.as_seconds();
  sim::SimTime t = now;

  // Bounded loop: every iteration either consumes time or replaces a
  // degenerate (zero-length) leg, which a fresh draw ends with
  // probability one.
  for (int guard = 0; guard < 100000 && remaining_s > 1e-12; ++guard) {
    if (t < st.pause_until) {
      const double wait_s = (st.pause_until - t).as_seconds();
      const double used = std::min(wait_s, remaining_s);
      t += sim::SimTime::seconds(used);
      remaining_s -= used;
      continue;
    }
    if (st.speed_mps <= 0.0) return st;  // zero-speed fixed point

    const double dist = distance(st.pos, st.waypoint);
    const double travel_s = dist / st.speed_mps;
    if (travel_s <= remaining_s) {
      st.pos = st.waypoint;
      t += sim::SimTime::seconds(travel_s);
      remaining_s -= travel_s;
      st.pause_until = t + pause;
      draw_leg(st, area, speed, rng);
    } else {
      const double frac = remaining_s / travel_s;
      st.pos.x += (st.waypoint.x - st.pos.x) * frac;
      st.pos.y += (st.waypoint.y - st.pos.y) * frac;
      remaining_s = 0.0;
    }
  }
  return st;
}

std::vector<std::vector<NodeId>> adjacency(const std::vector<Position>& positions,
                                           double range) {
  const std::size_t n = positions.size();
  std::vector<std::vector<NodeId>> adj(n);
  if (n == 0 || range <= 0.0) return adj;

  // Bucket nodes into a grid of range-sized cells; candidate pairs only
  // come from the same or adjacent cells.
  double max_x = 0.0, max_y = 0.0;
  for (const auto& p : positions) {
    max_x = std::max(max_x, p.x);
    max_y = std::max(max_y, p.y);
  }
  const int cols = static_cast<int>(max_x / range) + 1;
  const int rows = static_cast<int>(max_y / range) + 1;
  std::vector<std::vector<NodeId>> cells(static_cast<std::size_t>(cols) * rows);
  auto cell_of = [&](Position p) {
    int cx = std::min(cols - 1, static_cast<int>(p.x / range));
    int cy = std::min(rows - 1, static_cast<int>(p.y / range));
    return cy * cols + cx;
  };
  for (std::size_t i = 0; i < n; ++i)
    cells[cell_of(positions[i])].push_back(static_cast<NodeId>(i));

  for (std::size_t i = 0; i < n; ++i) {
    const int cx = std::min(cols - 1, static_cast<int>(positions[i].x / range));
    const int cy = std::min(rows - 1, static_cast<int>(positions[i].y / range));
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const int nx = cx + dx, ny = cy + dy;
        if (nx < 0 || ny < 0 || nx >= cols || ny >= rows) continue;
        for (NodeId j : cells[static_cast<std::size_t>(ny) * cols + nx]) {
          if (j == i) continue;
          if (distance(positions[i], positions[j]) <= range)
            adj[i].push_back(j);
        }
      }
    }
    std::sort(adj[i].begin(), adj[i].end());
  }
  return adj;
}

}  // namespace manet::mobility
