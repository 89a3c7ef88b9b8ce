#include "treelight/graph_hyperbolicity.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <deque>
#include <istream>
#include <map>
#include <ostream>
#include <queue>
#include <set>
#include <sstream>
#include <unordered_map>

namespace treelight {

GateGraph::GateGraph(int vertices) : adj_(vertices) {
  if (vertices < 0) throw InvalidArgument("GateGraph: negative vertex count");
}

int GateGraph::add_vertex() {
  adj_.emplace_back();
  return size() - 1;
}

void GateGraph::add_edge(int a, int b, int length) {
  if (a < 0 || b < 0 || a >= size() || b >= size()) throw InvalidArgument("GateGraph: edge endpoint out of range");
  if (length < 1) throw InvalidArgument("GateGraph: edge lengths must be positive");
  if (a == b) return;
  for (auto& e : adj_[a])
    if (e.to == b) {
      if (length < e.length) {
        e.length = length;
        for (auto& f : adj_[b])
          if (f.to == a) f.length = length;
      }
      return;
    }
  adj_[a].push_back({b, length});
  adj_[b].push_back({a, length});
  if (length != 1) unit_ = false;
}

void GateGraph::add_clique(std::span<const int> members) {
  for (std::size_t a = 0; a < members.size(); ++a)
    for (std::size_t b = a + 1; b < members.size(); ++b) add_edge(members[a], members[b]);
}

std::int64_t GateGraph::edge_count() const {
  std::int64_t n = 0;
  for (const auto& list : adj_) n += static_cast<std::int64_t>(list.size());
  return n / 2;
}

std::vector<int> GateGraph::distances(int v) const {
  if (v < 0 || v >= size()) throw InvalidArgument("GateGraph: vertex out of range");
  std::vector<int> d(size(), -1);
  d[v] = 0;
  if (unit_) {
    std::deque<int> queue{v};
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      for (const auto& e : adj_[u])
        if (d[e.to] < 0) {
          d[e.to] = d[u] + 1;
          queue.push_back(e.to);
        }
    }
    return d;
  }
  using Item = std::pair<int, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  heap.push({0, v});
  while (!heap.empty()) {
    auto [du, u] = heap.top();
    heap.pop();
    if (du > d[u] && d[u] >= 0) continue;
    for (const auto& e : adj_[u]) {
      const int nd = du + e.length;
      if (d[e.to] < 0 || nd < d[e.to]) {
        d[e.to] = nd;
        heap.push({nd, e.to});
      }
    }
  }
  return d;
}

bool GateGraph::connected() const {
  if (size() == 0) return true;
  const auto d = distances(0);
  return std::none_of(d.begin(), d.end(), [](int x) { return x < 0; });
}

GateGraph tree_graph(const CayleyTree& tree) {
  if (tree.size() > (1 << 24)) throw CapExceeded("tree_graph: tree too large");
  GateGraph g(static_cast<int>(tree.size()));
  for (Vertex v = 1; v < tree.size(); ++v) g.add_edge(static_cast<int>(v), static_cast<int>(tree.parent(v)));
  return g;
}

GateGraph cluster_graph(const TwoColoring& c) {
  const CayleyTree& tree = c.tree();
  if (tree.size() > (1 << 24)) throw CapExceeded("cluster_graph: tree too large");
  GateGraph g(static_cast<int>(tree.size()));
  for (Vertex v = 0; v < tree.size(); ++v) {
    const Cluster k = c.cluster_at(v);
    std::vector<int> members;
    for (Vertex m : k.members)
      if (m < tree.size()) members.push_back(static_cast<int>(m));
    g.add_clique(members);
  }
  return g;
}

GateGraph square_lattice(int n, bool plaquette) {
  if (n < 1) throw InvalidArgument("square_lattice: n must be >= 1");
  GateGraph g(n * n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (x + 1 < n) g.add_edge(x * n + y, (x + 1) * n + y);
      if (y + 1 < n) g.add_edge(x * n + y, x * n + y + 1);
      if (plaquette && x + 1 < n && y + 1 < n) {
        g.add_edge(x * n + y, (x + 1) * n + y + 1);
        g.add_edge(x * n + y + 1, (x + 1) * n + y);
      }
    }
  return g;
}

int grid_index(std::span<const int> sides, std::span<const int> coords) {
  if (sides.size() != coords.size()) throw InvalidArgument("grid_index: dimension mismatch");
  int idx = 0;
  for (std::size_t k = 0; k < sides.size(); ++k) {
    if (coords[k] < 0 || coords[k] >= sides[k]) throw InvalidArgument("grid_index: coordinate out of range");
    idx = idx * sides[k] + coords[k];
  }
  return idx;
}

GateGraph grid(std::span<const int> sides) {
  if (sides.empty()) throw InvalidArgument("grid: need at least one dimension");
  std::int64_t total = 1;
  for (int s : sides) {
    if (s < 1) throw InvalidArgument("grid: side lengths must be >= 1");
    total *= s;
    if (total > (1 << 24)) throw CapExceeded("grid: too many vertices");
  }
  GateGraph g(static_cast<int>(total));
  std::vector<int> stride(sides.size(), 1);
  for (int k = static_cast<int>(sides.size()) - 2; k >= 0; --k) stride[k] = stride[k + 1] * sides[k + 1];
  for (int v = 0; v < total; ++v)
    for (std::size_t k = 0; k < sides.size(); ++k)
      if ((v / stride[k]) % sides[k] + 1 < sides[k]) g.add_edge(v, v + stride[k]);
  return g;
}

namespace {

using Point = std::complex<double>;

// Reflection across the hyperbolic geodesic through a and b.
Point reflect(Point p, Point a, Point b) {
  const double cross = a.real() * b.imag() - a.imag() * b.real();
  if (std::abs(cross) < 1e-14) {  // diameter: Euclidean reflection across the line
    const Point dir = (std::abs(a) > std::abs(b) ? a : b) / std::max(std::abs(a), std::abs(b));
    return dir * dir * std::conj(p);
  }
  // Circle orthogonal to the unit circle: 2 c.a = |a|^2 + 1, 2 c.b = |b|^2 + 1.
  const double ra = (std::norm(a) + 1) / 2, rb = (std::norm(b) + 1) / 2;
  const double det = a.real() * b.imag() - a.imag() * b.real();
  const Point c((ra * b.imag() - rb * a.imag()) / det, (a.real() * rb - b.real() * ra) / det);
  const double r2 = std::norm(c) - 1;
  const Point d = p - c;
  return c + r2 * d / std::norm(d);
}

// Deduplicates points up to a tolerance using a grid hash.
class PointIndex {
 public:
  explicit PointIndex(double tol) : tol_(tol) {}
  // Returns the id of p, inserting it if new; `fresh` reports insertion.
  int find_or_add(Point p, bool& fresh) {
    const auto kx = static_cast<std::int64_t>(std::floor(p.real() / tol_ / 4));
    const auto ky = static_cast<std::int64_t>(std::floor(p.imag() / tol_ / 4));
    for (std::int64_t dx = -1; dx <= 1; ++dx)
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        auto it = cells_.find({kx + dx, ky + dy});
        if (it == cells_.end()) continue;
        for (int id : it->second)
          if (std::abs(points_[id] - p) < tol_) {
            fresh = false;
            return id;
          }
      }
    fresh = true;
    points_.push_back(p);
    cells_[{kx, ky}].push_back(static_cast<int>(points_.size()) - 1);
    return static_cast<int>(points_.size()) - 1;
  }
  const std::vector<Point>& points() const { return points_; }

 private:
  double tol_;
  std::vector<Point> points_;
  std::map<std::pair<std::int64_t, std::int64_t>, std::vector<int>> cells_;
};

}  // namespace

TilingPatch hyperbolic_tiling(int p, int q, int radius) {
  if (p < 3 || q < 3 || (p - 2) * (q - 2) <= 4) throw InvalidArgument("hyperbolic_tiling: {p,q} must satisfy (p-2)(q-2) > 4");
  if (radius < 0 || radius > 8) throw InvalidArgument("hyperbolic_tiling: radius must be in 0..8");
  const double r0 = std::sqrt(std::cos(kPi / p + kPi / q) / std::cos(kPi / p - kPi / q));
  struct Face {
    Point center;
    std::vector<Point> corners;
    int distance;
  };
  std::vector<Face> faces;
  Face first{Point(0, 0), {}, 0};
  for (int k = 0; k < p; ++k) first.corners.push_back(std::polar(r0, 2 * kPi * k / p));
  faces.push_back(first);
  PointIndex centers(1e-9);
  bool fresh = false;
  centers.find_or_add(first.center, fresh);
  for (std::size_t f = 0; f < faces.size(); ++f) {
    if (faces[f].distance >= radius) continue;
    for (int k = 0; k < p; ++k) {
      const Point a = faces[f].corners[k], b = faces[f].corners[(k + 1) % p];
      Face next{reflect(faces[f].center, a, b), {}, faces[f].distance + 1};
      centers.find_or_add(next.center, fresh);
      if (!fresh) continue;
      for (const Point& c : faces[f].corners) next.corners.push_back(reflect(c, a, b));
      faces.push_back(std::move(next));
    }
  }
  PointIndex corners(1e-9);
  std::vector<std::vector<int>> face_ids;
  for (const auto& face : faces) {
    std::vector<int> ids;
    for (const Point& c : face.corners) ids.push_back(corners.find_or_add(c, fresh));
    face_ids.push_back(std::move(ids));
  }
  TilingPatch patch;
  patch.p = p;
  patch.q = q;
  patch.radius = radius;
  patch.faces = static_cast<int>(faces.size());
  patch.graph = GateGraph(static_cast<int>(corners.points().size()));
  for (const auto& ids : face_ids)
    for (int k = 0; k < p; ++k) patch.graph.add_edge(ids[k], ids[(k + 1) % p]);
  for (const Point& c : corners.points()) patch.positions.push_back({c.real(), c.imag()});
  patch.center_vertex = face_ids[0][0];
  return patch;
}

std::vector<int> level_set(const GateGraph& g, int i, int t) {
  const auto d = g.distances(i);
  std::vector<int> out;
  for (int v = 0; v < g.size(); ++v)
    if (d[v] == t) out.push_back(v);
  return out;
}

std::vector<int> LevelSetReport::sizes() const {
  std::vector<int> s;
  for (const auto& set : intersections) s.push_back(static_cast<int>(set.size()));
  return s;
}

LevelSetReport intersections(const GateGraph& g, int i, int j) {
  const auto di = g.distances(i);
  const auto dj = g.distances(j);
  if (di[j] < 0) throw InvalidArgument("intersections: vertices are not connected");
  LevelSetReport rep;
  rep.i = i;
  rep.j = j;
  rep.t = di[j];
  rep.intersections.resize(rep.t + 1);
  for (int x = 0; x < g.size(); ++x)
    if (di[x] >= 0 && dj[x] >= 0 && di[x] + dj[x] == rep.t) rep.intersections[di[x]].push_back(x);
  for (const auto& set : rep.intersections) rep.max_intersection = std::max(rep.max_intersection, int(set.size()));
  return rep;
}

HyperbolicityReport four_point_delta(const GateGraph& g, int cap) {
  const int n = g.size();
  if (n > cap)
    throw CapExceeded("four_point_delta: " + std::to_string(n) + " vertices exceed the brute-force cap " +
                      std::to_string(cap) + "; use a smaller patch or raise the cap");
  std::vector<int> d(std::size_t(n) * n);
  for (int v = 0; v < n; ++v) {
    const auto row = g.distances(v);
    for (int u = 0; u < n; ++u) {
      if (row[u] < 0) throw InvalidArgument("four_point_delta: graph is not connected");
      d[std::size_t(v) * n + u] = row[u];
    }
  }
  HyperbolicityReport rep;
  rep.vertices = n;
  int best = 0;  // twice delta
  for (int a = 0; a < n; ++a) {
    const int* da = &d[std::size_t(a) * n];
    for (int b = a + 1; b < n; ++b) {
      const int* db = &d[std::size_t(b) * n];
      const int dab = da[b];
      for (int c = b + 1; c < n; ++c) {
        const int* dc = &d[std::size_t(c) * n];
        const int dac = da[c], dbc = db[c];
        for (int e = c + 1; e < n; ++e) {
          const int s1 = dab + dc[e], s2 = dac + db[e], s3 = da[e] + dbc;
          const int hi = std::max({s1, s2, s3});
          const int mid = s1 + s2 + s3 - hi - std::min({s1, s2, s3});
          if (hi - mid > best) {
            best = hi - mid;
            rep.witness = {a, b, c, e};
          }
        }
      }
    }
  }
  rep.delta = best / 2.0;
  return rep;
}

IntersectionCheck bounded_intersection_check(const GateGraph& g, std::span<const std::pair<int, int>> pairs,
                                             double delta) {
  IntersectionCheck rep;
  rep.bound = 2 * delta;
  std::unordered_map<int, std::vector<int>> cache;
  auto dist = [&](int a) -> const std::vector<int>& {
    auto it = cache.find(a);
    if (it == cache.end()) it = cache.emplace(a, g.distances(a)).first;
    return it->second;
  };
  for (auto [i, j] : pairs) {
    const LevelSetReport lr = intersections(g, i, j);
    ++rep.pairs;
    for (int s = 0; s <= lr.t; ++s) {
      const auto& set = lr.intersections[s];
      for (std::size_t a = 0; a < set.size(); ++a) {
        const auto& da = dist(set[a]);
        for (std::size_t b = a + 1; b < set.size(); ++b)
          if (da[set[b]] > rep.max_diameter) {
            rep.max_diameter = da[set[b]];
            rep.worst = {i, j, s};
          }
      }
    }
  }
  rep.passed = rep.max_diameter <= rep.bound + 1e-12;
  return rep;
}

GateGraph read_edge_list(std::istream& in) {
  std::vector<std::array<int, 3>> edges;
  int declared = 0, max_vertex = -1;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream head(line);
    std::string first;
    if (!(head >> first)) continue;
    if (first[0] == '#') {
      std::string key;
      if (first == "#" && head >> key && key == "vertices") head >> declared;
      continue;
    }
    std::istringstream fields(line);
    int a, b, len = 1;
    if (!(fields >> a >> b)) throw InvalidArgument("edge list line " + std::to_string(lineno) + ": expected 'a b [length]'");
    fields >> len;
    if (a < 0 || b < 0) throw InvalidArgument("edge list line " + std::to_string(lineno) + ": negative vertex");
    edges.push_back({a, b, len});
    max_vertex = std::max({max_vertex, a, b});
  }
  GateGraph g(std::max(declared, max_vertex + 1));
  for (auto [a, b, len] : edges) g.add_edge(a, b, len);
  return g;
}

void write_edge_list(const GateGraph& g, std::ostream& out) {
  out << "# vertices " << g.size() << '\n';
  for (int v = 0; v < g.size(); ++v)
    for (const auto& e : g.neighbors(v))
      if (v < e.to) {
        out << v << ' ' << e.to;
        if (!g.unit_lengths()) out << ' ' << e.length;
        out << '\n';
      }
}

}  // namespace treelight
