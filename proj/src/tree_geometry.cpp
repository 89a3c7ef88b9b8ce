#include "treelight/tree_geometry.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_set>

namespace treelight {

namespace {

Color single_color(int depth) { return depth % 2 == 0 ? Color::A : Color::B; }

}  // namespace

CayleyTree::CayleyTree(int z, int depth, bool rooted) : z_(z), depth_(depth), rooted_(rooted) {
  if (z < 2) throw InvalidArgument("CayleyTree: z must be >= 2");
  if (depth < 1) throw InvalidArgument("CayleyTree: depth must be >= 1");
  level_start_.push_back(0);
  std::int64_t width = 1;
  for (int d = 0; d <= depth; ++d) {
    level_start_.push_back(level_start_.back() + width);
    if (level_start_.back() > (std::int64_t(1) << 40)) throw CapExceeded("CayleyTree: too many vertices");
    width = (d == 0 && !rooted) ? z : width * (z - 1);
  }
}

void CayleyTree::check(Vertex v) const {
  if (v < 0 || v >= size()) throw InvalidArgument("vertex " + std::to_string(v) + " not in tree");
}

int CayleyTree::depth_of(Vertex v) const {
  if (v < 0) throw InvalidArgument("negative vertex");
  auto it = std::upper_bound(level_start_.begin(), level_start_.end(), v);
  if (it == level_start_.end()) {
    // Beyond the stored depth: keep extending widths implicitly.
    int d = depth_;
    std::int64_t start = level_start_[depth_], width = level_start_[depth_ + 1] - start;
    while (v >= start + width) {
      start += width;
      width *= (z_ - 1);
      ++d;
    }
    return d;
  }
  return static_cast<int>(it - level_start_.begin()) - 1;
}

int CayleyTree::max_children(Vertex v) const { return (v == 0 && !rooted_) ? z_ : z_ - 1; }

Vertex CayleyTree::parent(Vertex v) const {
  if (v == 0) return -1;
  if (rooted_) return (v - 1) / (z_ - 1);
  if (v <= z_) return 0;
  return (v - z_ - 1) / (z_ - 1) + 1;
}

int CayleyTree::child_slot(Vertex v) const {
  if (v == 0) throw InvalidArgument("origin has no child slot");
  if (rooted_) return static_cast<int>((v - 1) % (z_ - 1));
  if (v <= z_) return static_cast<int>(v - 1);
  return static_cast<int>((v - z_ - 1) % (z_ - 1));
}

int CayleyTree::child_count(Vertex v) const {
  check(v);
  return depth_of(v) < depth_ ? max_children(v) : 0;
}

Vertex CayleyTree::child(Vertex v, int slot) const {
  if (slot < 0 || slot >= max_children(v)) throw InvalidArgument("child slot out of range");
  if (rooted_) return 1 + v * (z_ - 1) + slot;
  if (v == 0) return 1 + slot;
  return z_ + 1 + (v - 1) * (z_ - 1) + slot;
}

std::vector<Vertex> CayleyTree::neighbors(Vertex v) const {
  check(v);
  std::vector<Vertex> out;
  if (v != 0) out.push_back(parent(v));
  for (int k = 0; k < child_count(v); ++k) out.push_back(child(v, k));
  return out;
}

std::vector<Vertex> CayleyTree::path(Vertex from, Vertex to) const {
  check(from);
  check(to);
  std::vector<Vertex> up, down;
  Vertex a = from, b = to;
  int da = depth_of(a), db = depth_of(b);
  while (da > db) {
    up.push_back(a);
    a = parent(a);
    --da;
  }
  while (db > da) {
    down.push_back(b);
    b = parent(b);
    --db;
  }
  while (a != b) {
    up.push_back(a);
    down.push_back(b);
    a = parent(a);
    b = parent(b);
  }
  up.push_back(a);
  up.insert(up.end(), down.rbegin(), down.rend());
  return up;
}

int CayleyTree::distance(Vertex a, Vertex b) const { return static_cast<int>(path(a, b).size()) - 1; }

std::string CayleyTree::id(Vertex v) const {
  check(v);
  std::vector<int> slots;
  while (v != 0) {
    slots.push_back(child_slot(v));
    v = parent(v);
  }
  std::string s;
  for (auto it = slots.rbegin(); it != slots.rend(); ++it) {
    if (!s.empty()) s += '.';
    s += std::to_string(*it);
  }
  return s;
}

Vertex CayleyTree::from_id(const std::string& text) const {
  Vertex v = 0;
  if (text.empty()) return v;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, '.')) {
    int slot = 0;
    try {
      slot = std::stoi(part);
    } catch (const std::exception&) {
      throw InvalidArgument("bad vertex id '" + text + "'");
    }
    if (depth_of(v) >= depth_) throw InvalidArgument("vertex id '" + text + "' deeper than tree");
    v = child(v, slot);
  }
  return v;
}

int Cluster::leg_of(Vertex v) const {
  for (std::size_t k = 0; k < members.size(); ++k)
    if (members[k] == v) return static_cast<int>(k) + 1;
  throw InvalidArgument("vertex " + std::to_string(v) + " not in cluster");
}

TwoColoring::TwoColoring(CayleyTree tree) : tree_(std::move(tree)) {}

bool TwoColoring::on_anomalous_ray(Vertex v) const {
  if (tree_.rooted() || v == 0) return false;
  while (v != 0) {
    if (tree_.child_slot(v) != 0) return false;
    v = tree_.parent(v);
  }
  return true;
}

Color TwoColoring::edge_color(Vertex child) const {
  if (child == 0) throw InvalidArgument("origin has no parent edge");
  const Color s = single_color(tree_.depth_of(child));
  return on_anomalous_ray(child) ? other(s) : s;
}

Color TwoColoring::edge_color(Vertex a, Vertex b) const {
  if (tree_.parent(b) == a) return edge_color(b);
  if (tree_.parent(a) == b) return edge_color(a);
  throw InvalidArgument("vertices are not adjacent");
}

Color TwoColoring::hub_color(Vertex v) const { return other(single_color(tree_.depth_of(v))); }

Cluster TwoColoring::cluster_at(Vertex hub) const {
  Cluster k;
  k.hub = hub;
  k.color = hub_color(hub);
  k.members.push_back(hub);
  if (hub != 0 && edge_color(hub) == k.color) k.members.push_back(tree_.parent(hub));
  const int slots = (hub == 0 && !tree_.rooted()) ? tree_.z() : tree_.z() - 1;
  for (int s = 0; s < slots; ++s) {
    const Vertex c = tree_.child(hub, s);
    if (edge_color(c) == k.color) k.members.push_back(c);
  }
  std::sort(k.members.begin() + 1, k.members.end());
  k.complete = static_cast<int>(k.members.size()) == tree_.z();
  for (Vertex m : k.members)
    if (m >= tree_.size()) k.complete = false;
  return k;
}

std::optional<Cluster> TwoColoring::cluster_of(Vertex v, Color c) const {
  if (c == hub_color(v)) return cluster_at(v);
  if (v != 0 && edge_color(v) == c) return cluster_at(tree_.parent(v));
  const int slots = (v == 0 && !tree_.rooted()) ? tree_.z() : tree_.z() - 1;
  for (int s = 0; s < slots; ++s) {
    const Vertex ch = tree_.child(v, s);
    if (edge_color(ch) == c) return cluster_at(ch);
  }
  return std::nullopt;
}

int LightConePath::turns() const {
  int n = 0;
  for (const auto& s : steps)
    if (!s.wait && s.in_leg >= 2 && s.out_leg >= 2) ++n;
  return n;
}

namespace {

struct Block {
  std::size_t begin;
  std::size_t end;  // vertex positions in the path
  Color color;
};

std::vector<Block> color_blocks(const TwoColoring& c, const std::vector<Vertex>& path) {
  std::vector<Block> blocks;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    const Color col = c.edge_color(path[k], path[k + 1]);
    if (!blocks.empty() && blocks.back().color == col && blocks.back().end == k) {
      blocks.back().end = k + 1;
    } else {
      blocks.push_back({k, k + 1, col});
    }
  }
  return blocks;
}

}  // namespace

int arrival_time(const TwoColoring& c, Vertex i, Vertex j, Color first_layer_color) {
  if (i == j) throw InvalidArgument("arrival_time: need distinct vertices");
  const auto p = c.tree().path(i, j);
  const auto blocks = color_blocks(c, p);
  return static_cast<int>(blocks.size()) + (blocks.front().color != first_layer_color ? 1 : 0);
}

LightConePath path_to_channel_sequence(const TwoColoring& c, Vertex i, Vertex j, Color first_layer_color) {
  if (i == j) throw InvalidArgument("path_to_channel_sequence: need distinct vertices");
  LightConePath out;
  out.vertices = c.tree().path(i, j);
  out.first_layer_color = first_layer_color;
  const auto blocks = color_blocks(c, out.vertices);
  int layer = 1;
  if (blocks.front().color != first_layer_color) {
    const auto k = c.cluster_of(i, first_layer_color);
    PathStep s;
    s.layer = layer++;
    s.color = first_layer_color;
    s.from = s.to = i;
    s.wait = true;
    if (k) {  // otherwise no gate touches i (the root of a rooted tree): identity step, legs 0
      s.hub = k->hub;
      s.in_leg = s.out_leg = k->leg_of(i);
    }
    out.steps.push_back(s);
  }
  for (const auto& b : blocks) {
    const Vertex from = out.vertices[b.begin], to = out.vertices[b.end];
    const auto k = c.cluster_of(from, b.color);
    PathStep s;
    s.layer = layer++;
    s.color = b.color;
    s.hub = k->hub;
    s.from = from;
    s.to = to;
    s.in_leg = k->leg_of(from);
    s.out_leg = k->leg_of(to);
    out.steps.push_back(s);
  }
  return out;
}

LightCone spread(const TwoColoring& c, Vertex origin, int layers, Color first_layer_color) {
  LightCone cone;
  std::vector<Vertex> support{origin};
  std::unordered_set<Vertex> in_support{origin};
  for (int layer = 1; layer <= layers; ++layer) {
    const Color col = layer_color(first_layer_color, layer);
    std::vector<Cluster> gates;
    std::unordered_set<Vertex> hubs;
    for (Vertex v : support) {
      auto k = c.cluster_of(v, col);
      if (!k || !hubs.insert(k->hub).second) continue;
      if (!k->complete)
        throw CapExceeded("light cone from " + std::to_string(origin) + " leaves the tree after " +
                          std::to_string(layer - 1) + " layers; increase depth");
      gates.push_back(*k);
    }
    std::vector<Vertex> front;
    for (const auto& k : gates)
      for (Vertex m : k.members)
        if (in_support.insert(m).second) front.push_back(m);
    support.insert(support.end(), front.begin(), front.end());
    std::sort(support.begin(), support.end());
    std::sort(front.begin(), front.end());
    std::sort(gates.begin(), gates.end(), [](const Cluster& a, const Cluster& b) { return a.hub < b.hub; });
    cone.support.push_back(support);
    cone.gates.push_back(std::move(gates));
    cone.front.push_back(std::move(front));
  }
  return cone;
}

std::vector<int> arrival_times_bfs(const TwoColoring& c, Vertex origin, Color first_layer_color, int max_layers) {
  const auto& tree = c.tree();
  std::vector<int> t(tree.size(), -1);
  t[origin] = 0;
  std::vector<Vertex> support{origin};
  for (int layer = 1; layer <= max_layers; ++layer) {
    const Color col = layer_color(first_layer_color, layer);
    std::vector<Vertex> added;
    std::unordered_set<Vertex> hubs;
    for (Vertex v : support) {
      auto k = c.cluster_of(v, col);
      if (!k || !hubs.insert(k->hub).second) continue;
      for (Vertex m : k->members)
        if (m < tree.size() && t[m] < 0) {
          t[m] = layer;
          added.push_back(m);
        }
    }
    support.insert(support.end(), added.begin(), added.end());
  }
  return t;
}

std::int64_t light_cone_size(int z, int r) {
  if (z == 2) return 2 * r;
  return z * (ipow(z - 1, r) - 1) / (z - 2);
}

ZColoring::ZColoring(CayleyTree tree) : tree_(std::move(tree)) {}

int ZColoring::edge_color(Vertex child) const {
  if (child == 0) throw InvalidArgument("origin has no parent edge");
  const Vertex p = tree_.parent(child);
  const int slot = tree_.child_slot(child);
  int parent_color;
  if (p == 0) {
    if (!tree_.rooted()) return slot;
    parent_color = tree_.z() - 1;  // the root's missing color
  } else {
    parent_color = edge_color(p);
  }
  return slot < parent_color ? slot : slot + 1;
}

int ZColoring::edge_color(Vertex a, Vertex b) const {
  if (tree_.parent(b) == a) return edge_color(b);
  if (tree_.parent(a) == b) return edge_color(a);
  throw InvalidArgument("vertices are not adjacent");
}

Vertex ZColoring::neighbor_by_color(Vertex v, int c) const {
  if (v != 0 && edge_color(v) == c) return tree_.parent(v);
  int parent_color;
  if (v == 0) {
    if (!tree_.rooted()) return tree_.child_count(0) ? tree_.child(0, c) : -1;
    parent_color = tree_.z() - 1;
    if (c == parent_color) return -1;
  } else {
    parent_color = edge_color(v);
  }
  if (tree_.child_count(v) == 0) return -1;
  return tree_.child(v, c < parent_color ? c : c - 1);
}

std::vector<TwoSiteStep> classify_path(const ZColoring& c, std::span<const Vertex> path, int offset) {
  const int z = c.tree().z();
  std::vector<TwoSiteStep> steps;
  int layer = 1, waits = 0;
  for (std::size_t k = 0; k + 1 < path.size();) {
    const int active = (offset + layer - 1) % z;
    if (c.edge_color(path[k], path[k + 1]) == active) {
      steps.push_back({path[k], path[k + 1], waits, layer});
      waits = 0;
      ++k;
    } else {
      ++waits;
    }
    ++layer;
  }
  return steps;
}

std::vector<Vertex> fastest_path(const ZColoring& c, Vertex origin, int steps, int offset) {
  const int z = c.tree().z();
  std::vector<Vertex> path{origin};
  for (int layer = 1; layer <= steps; ++layer) {
    const Vertex next = c.neighbor_by_color(path.back(), (offset + layer - 1) % z);
    if (next < 0 || (path.size() > 1 && next == path[path.size() - 2]))
      throw InvalidArgument("fastest_path: no outward edge of the active color");
    path.push_back(next);
  }
  return path;
}

std::vector<Vertex> slowest_path(const ZColoring& c, Vertex origin, int steps, int offset) {
  const int z = c.tree().z();
  std::vector<Vertex> path{origin};
  int layer = 1 + (z - 2);  // first hop after the maximal allowed wait
  for (int s = 0; s < steps; ++s) {
    const Vertex next = c.neighbor_by_color(path.back(), (offset + layer - 1) % z);
    if (next < 0 || (path.size() > 1 && next == path[path.size() - 2]))
      throw InvalidArgument("slowest_path: no outward edge of the required color");
    path.push_back(next);
    layer += z - 1;
  }
  return path;
}

}  // namespace treelight
