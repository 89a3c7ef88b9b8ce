#pragma once

#include <optional>
#include <span>

#include "treelight/core.hpp"

namespace treelight {

using Vertex = std::int64_t;

// Cayley tree with implicit breadth-first indexing; vertex 0 is the origin.
// Unrooted: the origin has z children, every other interior vertex z - 1.
// Rooted: every interior vertex, the root included, has z - 1 children.
class CayleyTree {
 public:
  CayleyTree(int z, int depth, bool rooted);

  int z() const { return z_; }
  int depth() const { return depth_; }
  bool rooted() const { return rooted_; }
  Vertex size() const { return level_start_.back(); }

  int depth_of(Vertex v) const;
  Vertex parent(Vertex v) const;  // -1 for the origin
  int child_slot(Vertex v) const;
  int child_count(Vertex v) const;  // 0 at maximal depth
  Vertex child(Vertex v, int slot) const;
  std::vector<Vertex> neighbors(Vertex v) const;
  Vertex level_start(int d) const { return level_start_.at(d); }

  std::vector<Vertex> path(Vertex from, Vertex to) const;
  int distance(Vertex a, Vertex b) const;

  // Child slots from the origin, e.g. "0.2.1"; the origin is "".
  std::string id(Vertex v) const;
  Vertex from_id(const std::string& id) const;

 private:
  int max_children(Vertex v) const;
  void check(Vertex v) const;

  int z_;
  int depth_;
  bool rooted_;
  std::vector<Vertex> level_start_;
};

// Edge colors of the 2-coloring. ColorA is the color of the origin's single
// (slot 0) edge on the unrooted tree; the root's edges are all ColorB.
enum class Color : std::uint8_t { A = 0, B = 1 };
inline Color other(Color c) { return c == Color::A ? Color::B : Color::A; }
inline char color_name(Color c) { return c == Color::A ? 'A' : 'B'; }
// Alternating layer colors starting from first.
inline Color layer_color(Color first, int layer) { return (layer % 2 == 1) ? first : other(first); }

// A star of same-colored edges: the hub is adjacent to every spoke. Leg 1 is
// the hub, legs 2..z the spokes in increasing vertex order.
struct Cluster {
  Vertex hub = -1;
  Color color = Color::A;
  std::vector<Vertex> members;  // members[0] = hub
  bool complete = false;        // false when truncated at the tree boundary

  int leg_of(Vertex v) const;
};

class TwoColoring {
 public:
  explicit TwoColoring(CayleyTree tree);

  const CayleyTree& tree() const { return tree_; }
  Color edge_color(Vertex child) const;  // color of the edge to the parent
  Color edge_color(Vertex a, Vertex b) const;
  // Color of the clusters this vertex is the hub of (std::nullopt never occurs
  // on interior vertices; leaves have no hub color).
  Color hub_color(Vertex v) const;
  Color spoke_color(Vertex v) const { return other(hub_color(v)); }
  std::optional<Cluster> cluster_of(Vertex v, Color c) const;
  Cluster cluster_at(Vertex hub) const;
  // True for vertices on the origin's slot-0 ray of the unrooted tree, where
  // a hub sits one level below one of its spokes.
  bool on_anomalous_ray(Vertex v) const;

 private:
  CayleyTree tree_;
};

struct PathStep {
  int layer = 0;
  Color color = Color::A;
  Vertex hub = -1;
  Vertex from = -1;
  Vertex to = -1;
  int in_leg = 0;   // e
  int out_leg = 0;  // e~; both 0 on an identity wait step
  bool wait = false;
};

struct LightConePath {
  std::vector<Vertex> vertices;
  std::vector<PathStep> steps;
  Color first_layer_color = Color::A;

  int turns() const;  // steps with both legs on spokes
};

int arrival_time(const TwoColoring& c, Vertex i, Vertex j, Color first_layer_color);
LightConePath path_to_channel_sequence(const TwoColoring& c, Vertex i, Vertex j, Color first_layer_color);

// Layer-by-layer spreading of the support from origin.
struct LightCone {
  std::vector<std::vector<Vertex>> support;            // support after each layer, sorted
  std::vector<std::vector<Cluster>> gates;             // clusters applied per layer
  std::vector<std::vector<Vertex>> front;              // sites first reached at each layer
};
LightCone spread(const TwoColoring& c, Vertex origin, int layers, Color first_layer_color);
// Arrival time of every vertex (or -1 if unreached within max_layers).
std::vector<int> arrival_times_bfs(const TwoColoring& c, Vertex origin, Color first_layer_color, int max_layers);

// n_LC(r) = z((z-1)^r - 1)/(z-2); 2r for z = 2.
std::int64_t light_cone_size(int z, int r);

// Proper edge coloring with z colors for 2-site gate circuits.
class ZColoring {
 public:
  explicit ZColoring(CayleyTree tree);
  const CayleyTree& tree() const { return tree_; }
  int edge_color(Vertex child) const;
  int edge_color(Vertex a, Vertex b) const;
  // Vertex reached from v along the edge of color c, or -1.
  Vertex neighbor_by_color(Vertex v, int c) const;

 private:
  CayleyTree tree_;
};

struct TwoSiteStep {
  Vertex from = -1;
  Vertex to = -1;
  int waits = 0;   // layers spent before the hop
  int layer = 0;   // layer of the hop
};

// Layer tau (1-based) uses color (offset + tau - 1) mod z.
std::vector<TwoSiteStep> classify_path(const ZColoring& c, std::span<const Vertex> path, int offset);
std::vector<Vertex> fastest_path(const ZColoring& c, Vertex origin, int steps, int offset);
std::vector<Vertex> slowest_path(const ZColoring& c, Vertex origin, int steps, int offset);

}  // namespace treelight
