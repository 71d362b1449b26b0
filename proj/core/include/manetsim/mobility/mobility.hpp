#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "manetsim/sim/random.hpp"
#include "manetsim/sim/time.hpp"
#include "manetsim/types.hpp"

namespace manet::mobility {

struct Position {
  double x = 0.0;
  double y = 0.0;
};

struct Area {
  double width = 0.0;
  double height = 0.0;

  bool contains(Position p) const {
    return p.x >= 0.0 && p.x <= width && p.y >= 0.0 && p.y <= height;
  }
};

inline double distance(Position a, Position b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

struct SpeedRange {
  double min_mps = 0.0;
  double max_mps = 0.0;
};

/// Random waypoint state for one node. The node moves in a straight line
/// toward `waypoint` at `speed_mps`; on arrival it pauses until
/// `pause_until`, then draws a fresh waypoint and speed.
struct WaypointState {
  Position pos;
  Position waypoint;
  double speed_mps = 0.0;
  sim::SimTime pause_until{};
};

/// Uniform positions inside the area, one draw pair per node in order.
std::vector<Position> init_positions(std::uint32_t count, Area area,
                                     sim::RandomStream& rng);

/// Initial waypoint state: first leg target and speed drawn immediately.
WaypointState waypoint_init(Position start, Area area, SpeedRange speed,
                            sim::RandomStream& rng);

/// Advances a waypoint state by dt starting at `now`. Handles multiple
/// leg completions and pauses inside one step. Waypoints are drawn inside
/// the area, so positions never need clamping. A zero-speed leg is a
/// fixed point: the position never changes.
WaypointState waypoint_step(WaypointState st, sim::SimTime now, sim::SimTime dt,
                            Area area, SpeedRange speed, sim::SimTime pause,
                            sim::RandomStream& rng);

/// Adjacency lists under the disk connectivity model: i and j are
/// neighbors iff distance <= range (boundary inclusive). Lists come back
/// sorted by node id. Grid-bucketed; the quadratic reference used to
/// validate it lives in the test suite.
std::vector<std::vector<NodeId>> adjacency(const std::vector<Position>& positions,
                                           double range);

}  // namespace manet::mobility
