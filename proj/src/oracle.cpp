#include "treelight/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_set>

namespace treelight {

namespace {

std::int64_t stride_of(int q, int n, int site) { return ipow(q, n - 1 - site); }

// Offsets of the q^k sub-indices on the given sites, leg 1 most significant.
std::vector<std::int64_t> sub_offsets(int q, int n, std::span<const int> sites) {
  const int k = static_cast<int>(sites.size());
  std::vector<std::int64_t> off(ipow(q, k), 0);
  for (std::int64_t m = 0; m < static_cast<std::int64_t>(off.size()); ++m) {
    auto d = digits(m, q, k);
    for (int l = 0; l < k; ++l) off[m] += d[l] * stride_of(q, n, sites[l]);
  }
  return off;
}

// Indices whose digits on the given sites are all zero.
std::vector<std::int64_t> base_indices(int q, int n, std::span<const int> sites) {
  std::vector<bool> fixed(n, false);
  for (int s : sites) fixed[s] = true;
  std::vector<std::int64_t> bases{0};
  for (int s = 0; s < n; ++s) {
    if (fixed[s]) continue;
    const std::int64_t st = stride_of(q, n, s);
    std::vector<std::int64_t> next;
    next.reserve(bases.size() * q);
    for (auto b : bases)
      for (int d = 0; d < q; ++d) next.push_back(b + d * st);
    bases = std::move(next);
  }
  return bases;
}

// Applies a q^2 x q^2 map to the basis label of one site of a string
// coefficient vector.
void apply_on_site(Vector& c, int q, int n, int site, const Matrix& map) {
  const int q2 = q * q;
  const std::int64_t st = ipow(q2, n - 1 - site);
  const std::int64_t block = st * q2;
  Vector tmp(q2), out(q2);
  for (std::int64_t hi = 0; hi < c.size(); hi += block)
    for (std::int64_t lo = 0; lo < st; ++lo) {
      for (int a = 0; a < q2; ++a) tmp(a) = c(hi + lo + a * st);
      out.noalias() = map * tmp;
      for (int a = 0; a < q2; ++a) c(hi + lo + a * st) = out(a);
    }
}

void check_limits(int q, int n, const OracleLimits& limits) {
  const double dim = std::pow(double(q), n);
  if (dim > double(limits.dimension_cap))
    throw CapExceeded("dense region of " + std::to_string(n) + " sites needs dimension " +
                      std::to_string(static_cast<std::int64_t>(dim)) + ", above the cap " +
                      std::to_string(limits.dimension_cap));
  const double bytes = 16.0 * dim * dim;
  if (bytes > double(limits.memory_bytes))
    throw CapExceeded("dense region of " + std::to_string(n) + " sites needs " +
                      std::to_string(static_cast<std::int64_t>(bytes / double(1 << 20))) +
                      " MiB per operator, above the memory budget");
}

}  // namespace

DenseRegion::DenseRegion(int q, std::vector<Vertex> vertices, std::vector<std::vector<PlacedGate>> layers,
                         const OracleLimits& limits)
    : q_(q), vertices_(std::move(vertices)), layers_(std::move(layers)) {
  if (q < 2) throw InvalidArgument("DenseRegion: q must be >= 2");
  if (!std::is_sorted(vertices_.begin(), vertices_.end()) ||
      std::adjacent_find(vertices_.begin(), vertices_.end()) != vertices_.end())
    throw InvalidArgument("DenseRegion: vertices must be sorted and distinct");
  check_limits(q, sites(), limits);
  dim_ = ipow(q, sites());
  for (const auto& layer : layers_) {
    std::unordered_set<int> used;
    for (const auto& g : layer) {
      if (g.gate.q() != q || static_cast<int>(g.sites.size()) != g.gate.z())
        throw InvalidArgument("DenseRegion: gate shape does not match its sites");
      for (int s : g.sites)
        if (s < 0 || s >= sites() || !used.insert(s).second)
          throw InvalidArgument("DenseRegion: gates of one layer must act on distinct region sites");
    }
  }
}

int DenseRegion::local(Vertex v) const {
  auto it = std::lower_bound(vertices_.begin(), vertices_.end(), v);
  return (it != vertices_.end() && *it == v) ? static_cast<int>(it - vertices_.begin()) : -1;
}

DenseRegion cluster_region(const TwoColoring& c, Vertex origin, int t, Color first_layer_color,
                           const GateAssignment& gates, const OracleLimits& limits) {
  if (t < 0) throw InvalidArgument("cluster_region: t must be >= 0");
  const LightCone cone = spread(c, origin, t, first_layer_color);
  std::vector<Vertex> vertices = t > 0 ? cone.support[t - 1] : std::vector<Vertex>{origin};
  std::vector<std::vector<PlacedGate>> layers;
  auto local = [&](Vertex v) {
    return static_cast<int>(std::lower_bound(vertices.begin(), vertices.end(), v) - vertices.begin());
  };
  int q = 2;
  bool have_q = false;
  for (int tau = 1; tau <= t; ++tau) {
    std::vector<PlacedGate> layer;
    for (const Cluster& k : cone.gates[tau - 1]) {
      Gate g = gates(k, tau);
      if (g.z() != static_cast<int>(k.members.size()))
        throw InvalidArgument("cluster_region: gate has " + std::to_string(g.z()) + " legs, cluster has " +
                              std::to_string(k.members.size()) + " sites");
      if (have_q && g.q() != q) throw InvalidArgument("cluster_region: gates disagree on q");
      q = g.q();
      have_q = true;
      std::vector<int> sites;
      for (Vertex m : k.members) sites.push_back(local(m));
      layer.push_back({std::move(g), std::move(sites)});
    }
    layers.push_back(std::move(layer));
  }
  return DenseRegion(q, std::move(vertices), std::move(layers), limits);
}

DenseRegion cluster_region(const TwoColoring& c, Vertex origin, int t, Color first_layer_color, const Gate& gate,
                           const OracleLimits& limits) {
  return cluster_region(c, origin, t, first_layer_color, [&](const Cluster&, int) { return gate; }, limits);
}

DenseRegion bond_region(const ZColoring& c, Vertex origin, int t, int offset, const Gate& v,
                        const OracleLimits& limits) {
  if (v.z() != 2) throw InvalidArgument("bond_region: gate must act on 2 sites");
  const CayleyTree& tree = c.tree();
  const int z = tree.z();
  std::vector<Vertex> support{origin};
  std::vector<std::vector<std::pair<Vertex, Vertex>>> bonds;  // (parent, child)
  for (int tau = 1; tau <= t; ++tau) {
    const int col = (offset + tau - 1) % z;
    std::map<Vertex, Vertex> layer;  // child -> parent
    for (Vertex s : support) {
      const Vertex u = c.neighbor_by_color(s, col);
      if (u < 0) {
        const bool parent_edge = s != 0 && c.edge_color(s) == col;
        const bool missing_root_color = s == 0 && tree.rooted() && col == z - 1;
        if (!parent_edge && !missing_root_color)
          throw CapExceeded("bond_region: light cone leaves the tree; increase depth");
        continue;
      }
      if (tree.parent(u) == s)
        layer[u] = s;
      else
        layer[s] = u;
    }
    std::vector<std::pair<Vertex, Vertex>> list;
    for (auto [child, parent] : layer) {
      list.emplace_back(parent, child);
      for (Vertex x : {parent, child})
        if (std::find(support.begin(), support.end(), x) == support.end()) support.push_back(x);
    }
    bonds.push_back(std::move(list));
  }
  std::sort(support.begin(), support.end());
  auto local = [&](Vertex x) {
    return static_cast<int>(std::lower_bound(support.begin(), support.end(), x) - support.begin());
  };
  check_limits(v.q(), static_cast<int>(support.size()), limits);
  std::vector<std::vector<PlacedGate>> layers;
  for (const auto& list : bonds) {
    std::vector<PlacedGate> layer;
    for (auto [parent, child] : list) layer.push_back({v, {local(parent), local(child)}});
    layers.push_back(std::move(layer));
  }
  return DenseRegion(v.q(), std::move(support), std::move(layers), limits);
}

DenseRegion gate_region(const Gate& u) {
  std::vector<Vertex> vertices(u.z());
  std::vector<int> sites(u.z());
  for (int k = 0; k < u.z(); ++k) vertices[k] = sites[k] = k;
  return DenseRegion(u.q(), std::move(vertices), {{PlacedGate{u, sites}}});
}

Matrix embed_site(const DenseRegion& region, const Matrix& sigma, Vertex v) {
  const int s = region.local(v);
  if (s < 0) throw InvalidArgument("embed_site: vertex " + std::to_string(v) + " is outside the region");
  const int q = region.q(), n = region.sites();
  if (sigma.rows() != q || sigma.cols() != q) throw InvalidArgument("embed_site: operator must be q x q");
  Matrix a = Matrix::Zero(region.dim(), region.dim());
  const std::int64_t st = stride_of(q, n, s);
  const int site[] = {s};
  for (auto b : base_indices(q, n, site))
    for (int r = 0; r < q; ++r)
      for (int c = 0; c < q; ++c) a(b + r * st, b + c * st) = sigma(r, c);
  return a;
}

void conjugate_in_place(Matrix& a, int q, int n, const Matrix& u, std::span<const int> sites) {
  const auto off = sub_offsets(q, n, sites);
  const auto bases = base_indices(q, n, sites);
  const auto k = static_cast<Eigen::Index>(off.size());
  const Eigen::Index dim = a.rows();
  Matrix cols(dim, k), prod(dim, k);
  for (auto b : bases) {
    for (Eigen::Index m = 0; m < k; ++m) cols.col(m) = a.col(b + off[m]);
    prod.noalias() = cols * u;
    for (Eigen::Index m = 0; m < k; ++m) a.col(b + off[m]) = prod.col(m);
  }
  const Matrix ud = u.adjoint();
  Matrix rows(k, dim), rprod(k, dim);
  for (auto b : bases) {
    for (Eigen::Index m = 0; m < k; ++m) rows.row(m) = a.row(b + off[m]);
    rprod.noalias() = ud * rows;
    for (Eigen::Index m = 0; m < k; ++m) a.row(b + off[m]) = rprod.row(m);
  }
}

Matrix heisenberg_evolve(const DenseRegion& region, Matrix op, int t) {
  if (t < 0 || t > region.layers())
    throw InvalidArgument("heisenberg_evolve: region holds " + std::to_string(region.layers()) + " layers, asked " +
                          std::to_string(t));
  if (op.rows() != region.dim() || op.cols() != region.dim())
    throw InvalidArgument("heisenberg_evolve: operator dimension does not match the region");
  for (int tau = 1; tau <= t; ++tau)
    for (const auto& g : region.layer(tau)) conjugate_in_place(op, region.q(), region.sites(), g.gate.matrix(), g.sites);
  return op;
}

Matrix heisenberg_evolve(const DenseRegion& region, const Matrix& sigma, Vertex site, int t) {
  return heisenberg_evolve(region, embed_site(region, sigma, site), t);
}

cplx correlator_with(const DenseRegion& region, const Matrix& evolved, const Matrix& sigma_beta, Vertex j) {
  const int q = region.q(), n = region.sites();
  const double dim = double(region.dim());
  const int s = region.local(j);
  if (s < 0) return sigma_beta.trace() / double(q) * evolved.trace() / dim;
  const std::int64_t st = stride_of(q, n, s);
  const int site[] = {s};
  cplx acc = 0;
  for (auto b : base_indices(q, n, site))
    for (int r = 0; r < q; ++r)
      for (int c = 0; c < q; ++c) acc += sigma_beta(r, c) * evolved(b + c * st, b + r * st);
  return acc / dim;
}

double otoc_with(const DenseRegion& region, const Matrix& evolved, const Matrix& sigma_beta, Vertex j) {
  const int q = region.q(), n = region.sites();
  const double dim = double(region.dim());
  const int s = region.local(j);
  if (s < 0) {
    const cplx b2 = (sigma_beta * sigma_beta).trace() / double(q);
    const cplx a2 = (evolved.cwiseProduct(evolved.transpose())).sum() / dim;
    return (b2 * a2).real();
  }
  const int site[] = {s};
  const Matrix ba_local = sigma_beta;
  Matrix ba = Matrix::Zero(evolved.rows(), evolved.cols());
  const std::int64_t st = stride_of(q, n, s);
  for (auto b : base_indices(q, n, site))
    for (int r = 0; r < q; ++r)
      for (int m = 0; m < q; ++m)
        if (ba_local(r, m) != cplx(0)) ba.row(b + r * st) += ba_local(r, m) * evolved.row(b + m * st);
  return (ba.cwiseProduct(ba.transpose())).sum().real() / dim;
}

cplx correlator_exact(const DenseRegion& region, const Matrix& sigma_alpha, Vertex i, const Matrix& sigma_beta,
                      Vertex j, int t) {
  return correlator_with(region, heisenberg_evolve(region, sigma_alpha, i, t), sigma_beta, j);
}

double otoc_exact(const DenseRegion& region, const Matrix& sigma_alpha, Vertex i, const Matrix& sigma_beta, Vertex j,
                  int t) {
  return otoc_with(region, heisenberg_evolve(region, sigma_alpha, i, t), sigma_beta, j);
}

Vector pauli_decompose(const DenseRegion& region, const Matrix& op, const OperatorBasis& basis) {
  if (basis.q != region.q()) throw InvalidArgument("pauli_decompose: basis q does not match the region");
  return string_coefficients(op, basis, region.sites());
}

WeightReport lightcone_weight(const Vector& coefficients, int q, int n, std::span<const int> region_sites) {
  const int q2 = q * q;
  if (coefficients.size() != ipow(q2, n)) throw InvalidArgument("lightcone_weight: coefficient count mismatch");
  for (int s : region_sites)
    if (s < 0 || s >= n) throw InvalidArgument("lightcone_weight: region site out of range");
  WeightReport rep;
  rep.region_size = static_cast<int>(region_sites.size());
  rep.w_n.assign(region_sites.size() + 1, 0.0);
  std::vector<std::int64_t> strides;
  for (int s : region_sites) strides.push_back(ipow(q2, n - 1 - s));
  for (Eigen::Index k = 0; k < coefficients.size(); ++k) {
    const double p = std::norm(coefficients(k));
    if (p == 0) continue;
    int support = 0;
    for (auto st : strides) support += (k / st) % q2 != 0;
    rep.w_n[support] += p;
  }
  for (std::size_t m = 1; m < rep.w_n.size(); ++m) rep.w += rep.w_n[m];
  return rep;
}

BoundReport otoc_average_and_bound(const DenseRegion& region, const Matrix& evolved, std::span<const Vertex> r,
                                   const OperatorBasis& basis) {
  const int q = region.q(), n = region.sites(), q2 = q * q;
  if (q != 2) throw Unsupported("otoc_average_and_bound: the coefficient route needs q = 2");
  if (basis.q != q) throw InvalidArgument("otoc_average_and_bound: basis q does not match the region");
  if (r.empty()) throw InvalidArgument("otoc_average_and_bound: empty region");
  std::vector<int> local;
  for (Vertex v : r) {
    const int s = region.local(v);
    if (s < 0) throw InvalidArgument("otoc_average_and_bound: vertex " + std::to_string(v) + " outside the region");
    local.push_back(s);
  }
  BoundReport rep;
  rep.region_size = static_cast<int>(r.size());

  double direct = 0;
  for (Vertex v : r)
    for (int beta = 1; beta < q2; ++beta) direct += otoc_with(region, evolved, basis[beta], v);
  rep.o_direct = direct / (rep.region_size * (q2 - 1));

  const Vector c = pauli_decompose(region, evolved, basis);
  const double total = c.squaredNorm();
  double from_coeffs = 0;
  for (int s : local) {
    std::vector<double> p(q2, 0.0);  // weight by the basis label on site s
    const std::int64_t st = ipow(q2, n - 1 - s);
    for (Eigen::Index k = 0; k < c.size(); ++k) p[(k / st) % q2] += std::norm(c(k));
    for (int beta = 1; beta < q2; ++beta) {
      const double commuting = p[0] + p[beta];
      from_coeffs += commuting - (total - commuting);
    }
  }
  rep.o_coefficients = from_coeffs / (rep.region_size * (q2 - 1));
  rep.w = lightcone_weight(c, q, n, local).w;
  rep.lhs = 1 - rep.o_direct;
  rep.rhs = 2 * rep.w / rep.region_size * double(q2 - 2) / double(q2 - 1);
  return rep;
}

double front_weight_at(const TwoColoring& c, Vertex origin, int t, Color first_layer_color,
                       const GateAssignment& gates, const Matrix& sigma, const OperatorBasis& basis,
                       const OracleLimits& limits) {
  if (t < 1) throw InvalidArgument("front_weight_at: t must be >= 1");
  const DenseRegion prev = cluster_region(c, origin, t - 1, first_layer_color, gates, limits);
  const int q = prev.q(), n = prev.sites(), q2 = q * q;
  if (basis.q != q) throw InvalidArgument("front_weight_at: basis q does not match the gates");
  Matrix a = heisenberg_evolve(prev, sigma, origin, t - 1);
  const LightCone cone = spread(c, origin, t, first_layer_color);

  std::vector<std::pair<int, Matrix>> site_maps;
  for (const Cluster& k : cone.gates[t - 1]) {
    const Gate g = gates(k, t);
    std::vector<int> old_legs, old_sites;
    for (int leg = 0; leg < static_cast<int>(k.members.size()); ++leg)
      if (prev.contains(k.members[leg])) {
        old_legs.push_back(leg);
        old_sites.push_back(prev.local(k.members[leg]));
      }
    if (old_legs.size() == k.members.size()) {
      conjugate_in_place(a, q, n, g.matrix(), old_sites);
    } else if (old_legs.size() == 1) {
      // X -> tr_{new}[G^dagger X(e) G] / q^{z-1} in the operator basis.
      const int e = old_legs[0] + 1, z = g.z();
      Matrix map(q2, q2);
      for (int alpha = 0; alpha < q2; ++alpha) {
        const Matrix reduced = partial_trace_keep(g.matrix().adjoint() * embed_on_leg(basis[alpha], e, z) * g.matrix(),
                                                  q, z, e) / double(ipow(q, z - 1));
        for (int beta = 0; beta < q2; ++beta) map(beta, alpha) = overlap(basis[beta], reduced);
      }
      site_maps.emplace_back(old_sites[0], std::move(map));
    } else {
      throw Unsupported("front_weight_at: cluster with several old and some new sites");
    }
  }
  Vector coeffs = string_coefficients(a, basis, n);
  const double total = coeffs.squaredNorm();
  for (const auto& [site, map] : site_maps) apply_on_site(coeffs, q, n, site, map);
  return total - coeffs.squaredNorm();
}

}  // namespace treelight
