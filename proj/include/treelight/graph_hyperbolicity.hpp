#pragma once

#include <array>
#include <iosfwd>
#include <span>

#include "treelight/tree_geometry.hpp"

namespace treelight {

// Undirected graph whose edges join sites acted on by a common gate.
// Edge lengths are positive integers (1 unless stated).
class GateGraph {
 public:
  struct Edge {
    int to;
    int length;
  };

  explicit GateGraph(int vertices = 0);
  int size() const { return static_cast<int>(adj_.size()); }
  int add_vertex();
  void add_edge(int a, int b, int length = 1);
  void add_clique(std::span<const int> members);
  const std::vector<Edge>& neighbors(int v) const { return adj_.at(v); }
  std::int64_t edge_count() const;
  bool unit_lengths() const { return unit_; }

  // Shortest-path distances from v (-1 when unreachable).
  std::vector<int> distances(int v) const;
  bool connected() const;

 private:
  std::vector<std::vector<Edge>> adj_;
  bool unit_ = true;
};

// Plain tree edges, one per bond.
GateGraph tree_graph(const CayleyTree& tree);
// Every cluster of the 2-coloring (truncated at the boundary) becomes a clique.
GateGraph cluster_graph(const TwoColoring& c);
// n x n square lattice, vertex (x, y) = x * n + y. Plaquette gates add both
// diagonals of every square.
GateGraph square_lattice(int n, bool plaquette);
// Hypercubic grid with the given side lengths, row-major coordinates.
GateGraph grid(std::span<const int> sides);
int grid_index(std::span<const int> sides, std::span<const int> coords);

// Patch of the {p,q} tiling: faces within face distance `radius` of a
// central face, built by reflecting faces across their edges in the
// Poincare disk. Vertices are the tiling vertices, edges the polygon edges.
struct TilingPatch {
  GateGraph graph;
  int faces = 0;
  int p = 7;
  int q = 3;
  int radius = 0;
  std::vector<std::array<double, 2>> positions;
  int center_vertex = 0;  // a vertex of the central face
};
TilingPatch hyperbolic_tiling(int p, int q, int radius);

std::vector<int> level_set(const GateGraph& g, int i, int t);

struct LevelSetReport {
  int i = 0;
  int j = 0;
  int t = 0;  // d(i, j)
  std::vector<std::vector<int>> intersections;  // I(i, j, s), s = 0..t
  int max_intersection = 0;                     // D_t
  std::vector<int> sizes() const;
};
LevelSetReport intersections(const GateGraph& g, int i, int j);

struct HyperbolicityReport {
  double delta = 0;
  std::array<int, 4> witness{0, 0, 0, 0};
  int vertices = 0;
  bool approximate = false;
  std::string definition = "four-point";
};
// Exact four-point delta over all quadruples. Throws CapExceeded above cap.
HyperbolicityReport four_point_delta(const GateGraph& g, int cap = 300);

struct IntersectionCheck {
  int pairs = 0;
  int max_diameter = 0;  // largest distance between two points of one I(i, j, s)
  double bound = 0;      // 2 delta
  bool passed = true;
  std::array<int, 3> worst{0, 0, 0};  // i, j, s
};
IntersectionCheck bounded_intersection_check(const GateGraph& g, std::span<const std::pair<int, int>> pairs,
                                             double delta);

// Edge list text: "a b" or "a b length" per line; '#' starts a comment.
GateGraph read_edge_list(std::istream& in);
void write_edge_list(const GateGraph& g, std::ostream& out);

}  // namespace treelight
