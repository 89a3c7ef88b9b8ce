#include "treelight/stabilizer_sim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>
#include <unordered_map>

namespace treelight {

namespace {

std::uint32_t local_bits(const SignedPauli& p) {
  std::uint32_t w = 0;
  for (std::size_t k = 0; k < p.x.size(); ++k) w |= (std::uint32_t(p.x[k]) << (2 * k)) | (std::uint32_t(p.z[k]) << (2 * k + 1));
  return w;
}

// Pauli as i^phase X^x Z^z on a few sites.
struct PhasedPauli {
  int phase = 0;
  std::uint32_t x = 0;
  std::uint32_t z = 0;
};

PhasedPauli phased(const SignedPauli& p) {
  PhasedPauli out;
  for (std::size_t k = 0; k < p.x.size(); ++k) {
    out.x |= std::uint32_t(p.x[k]) << k;
    out.z |= std::uint32_t(p.z[k]) << k;
  }
  out.phase = (p.negative ? 2 : 0) + std::popcount(out.x & out.z);
  return out;
}

PhasedPauli multiply(const PhasedPauli& a, const PhasedPauli& b) {
  return {(a.phase + b.phase + 2 * std::popcount(a.z & b.x)) % 4, a.x ^ b.x, a.z ^ b.z};
}

// GF(2) row space with pivots at the lowest set bit.
class PivotBasis {
 public:
  explicit PivotBasis(std::int64_t bits) : words_((bits + 63) / 64), pivot_row_(bits, -1) {}
  int words() const { return static_cast<int>(words_); }
  int rank() const { return static_cast<int>(rows_.size() / std::max<std::int64_t>(words_, 1)); }

  bool insert(std::vector<std::uint64_t>& row) {
    std::int64_t w = 0;
    while (true) {
      while (w < words_ && row[w] == 0) ++w;
      if (w == words_) return false;
      const std::int64_t bit = w * 64 + std::countr_zero(row[w]);
      const std::int64_t p = pivot_row_[bit];
      if (p < 0) {
        pivot_row_[bit] = rank();
        rows_.insert(rows_.end(), row.begin(), row.end());
        return true;
      }
      const std::uint64_t* src = rows_.data() + p * words_;
      for (std::int64_t k = w; k < words_; ++k) row[k] ^= src[k];
    }
  }

 private:
  std::int64_t words_;
  std::vector<std::int64_t> pivot_row_;
  std::vector<std::uint64_t> rows_;
};

void set_bit(std::vector<std::uint64_t>& row, std::int64_t bit) { row[bit / 64] |= std::uint64_t(1) << (bit % 64); }
void flip_bit(std::vector<std::uint64_t>& row, std::int64_t bit) { row[bit / 64] ^= std::uint64_t(1) << (bit % 64); }

}  // namespace

static SymplecticTable heisenberg_table(const Gate& gate);

SymplecticTable::SymplecticTable(const CliffordMap& map) : z_(map.z), table_(std::size_t(1) << (2 * map.z)) {
  std::vector<std::uint32_t> xs, zs;
  for (int k = 0; k < z_; ++k) {
    xs.push_back(local_bits(map.x_images[k]));
    zs.push_back(local_bits(map.z_images[k]));
  }
  for (std::uint32_t w = 0; w < table_.size(); ++w) {
    std::uint32_t out = 0;
    for (int k = 0; k < z_; ++k) {
      if ((w >> (2 * k)) & 1u) out ^= xs[k];
      if ((w >> (2 * k + 1)) & 1u) out ^= zs[k];
    }
    table_[w] = out;
  }
}

StabilizerTableau::StabilizerTableau(int qubits)
    : n_(qubits), words_((qubits + 63) / 64), x_(std::size_t(qubits) * words_, 0), z_(std::size_t(qubits) * words_, 0),
      sign_(qubits, false) {
  if (qubits < 1) throw InvalidArgument("StabilizerTableau: need at least one qubit");
  for (int r = 0; r < n_; ++r) z_[r * words_ + r / 64] |= std::uint64_t(1) << (r % 64);
}

SignedPauli StabilizerTableau::generator(int row) const {
  SignedPauli p;
  p.x.resize(n_);
  p.z.resize(n_);
  for (int q = 0; q < n_; ++q) {
    p.x[q] = x(row, q);
    p.z[q] = z(row, q);
  }
  p.negative = sign_[row];
  return p;
}

void StabilizerTableau::set_generator(int row, const SignedPauli& p) {
  if (row < 0 || row >= n_ || static_cast<int>(p.x.size()) != n_ || static_cast<int>(p.z.size()) != n_)
    throw InvalidArgument("set_generator: shape mismatch");
  for (int q = 0; q < n_; ++q) {
    const std::uint64_t bit = std::uint64_t(1) << (q % 64);
    auto& xw = x_[row * words_ + q / 64];
    auto& zw = z_[row * words_ + q / 64];
    xw = p.x[q] ? (xw | bit) : (xw & ~bit);
    zw = p.z[q] ? (zw | bit) : (zw & ~bit);
  }
  sign_[row] = p.negative;
}

void StabilizerTableau::apply(const CliffordMap& forward, std::span<const int> qubits) {
  const int k = static_cast<int>(qubits.size());
  if (k != forward.z) throw InvalidArgument("StabilizerTableau::apply: map acts on " + std::to_string(forward.z) + " qubits");
  std::vector<PhasedPauli> xi, zi;
  for (int l = 0; l < k; ++l) {
    xi.push_back(phased(forward.x_images[l]));
    zi.push_back(phased(forward.z_images[l]));
  }
  for (int r = 0; r < n_; ++r) {
    std::uint32_t xs = 0, zs = 0;
    for (int l = 0; l < k; ++l) {
      xs |= std::uint32_t(x(r, qubits[l])) << l;
      zs |= std::uint32_t(z(r, qubits[l])) << l;
    }
    if ((xs | zs) == 0) continue;
    PhasedPauli img{std::popcount(xs & zs) % 4, 0, 0};
    for (int l = 0; l < k; ++l) {
      if ((xs >> l) & 1u) img = multiply(img, xi[l]);
      if ((zs >> l) & 1u) img = multiply(img, zi[l]);
    }
    const int hermitian_phase = ((img.phase - std::popcount(img.x & img.z)) % 4 + 4) % 4;
    if (hermitian_phase % 2 != 0) throw NumericalFailure("Clifford image is not Hermitian");
    if (hermitian_phase == 2) sign_[r] = !sign_[r];
    for (int l = 0; l < k; ++l) {
      const int q = qubits[l];
      const std::uint64_t bit = std::uint64_t(1) << (q % 64);
      auto& xw = x_[r * words_ + q / 64];
      auto& zw = z_[r * words_ + q / 64];
      xw = ((img.x >> l) & 1u) ? (xw | bit) : (xw & ~bit);
      zw = ((img.z >> l) & 1u) ? (zw | bit) : (zw & ~bit);
    }
  }
}

bool StabilizerTableau::valid() const {
  for (int a = 0; a < n_; ++a)
    for (int b = a + 1; b < n_; ++b) {
      int parity = 0;
      for (int w = 0; w < words_; ++w)
        parity ^= std::popcount((x_[a * words_ + w] & z_[b * words_ + w]) ^ (z_[a * words_ + w] & x_[b * words_ + w])) & 1;
      if (parity) return false;
    }
  PivotBasis basis(2 * std::int64_t(n_));
  std::vector<std::uint64_t> row(basis.words());
  for (int r = 0; r < n_; ++r) {
    std::fill(row.begin(), row.end(), 0);
    for (int q = 0; q < n_; ++q) {
      if (x(r, q)) set_bit(row, 2 * q);
      if (z(r, q)) set_bit(row, 2 * q + 1);
    }
    if (!basis.insert(row)) return false;
  }
  return true;
}

int StabilizerTableau::entropy(std::span<const int> region) const {
  PivotBasis basis(2 * std::int64_t(region.size()));
  std::vector<std::uint64_t> row(basis.words());
  for (int r = 0; r < n_; ++r) {
    std::fill(row.begin(), row.end(), 0);
    for (std::size_t k = 0; k < region.size(); ++k) {
      if (x(r, region[k])) set_bit(row, 2 * k);
      if (z(r, region[k])) set_bit(row, 2 * k + 1);
    }
    basis.insert(row);
  }
  return basis.rank() - static_cast<int>(region.size());
}

static SymplecticTable heisenberg_table(const Gate& gate) {
  auto map = is_clifford(gate);
  if (!map) throw Unsupported("gate is not Clifford");
  return SymplecticTable(*map);
}

CliffordMap forward_clifford(const Gate& u) {
  auto map = is_clifford(u.adjoint());
  if (!map) throw Unsupported("gate is not Clifford");
  return *map;
}

StabilizerTableau init_ghz(const TwoColoring& c, Color state_color) {
  const CayleyTree& tree = c.tree();
  if (tree.size() > (std::int64_t(1) << 16)) throw CapExceeded("init_ghz: dense tableau limited to 65536 qubits");
  const int n = static_cast<int>(tree.size());
  StabilizerTableau t(n);
  std::vector<bool> done(n, false);
  int row = 0;
  for (Vertex v = 0; v < n; ++v) {
    if (done[v]) continue;
    std::vector<int> members;
    if (auto k = c.cluster_of(v, state_color))
      for (Vertex m : k->members)
        if (m < n) members.push_back(static_cast<int>(m));
    if (members.empty()) members.push_back(static_cast<int>(v));
    for (int m : members) done[m] = true;
    SignedPauli p;
    p.x.assign(n, 0);
    p.z.assign(n, 0);
    if (members.size() == 1) {
      p.z[members[0]] = 1;
      t.set_generator(row++, p);
      continue;
    }
    for (int m : members) p.x[m] = 1;
    t.set_generator(row++, p);
    for (std::size_t k = 0; k + 1 < members.size(); ++k) {
      std::fill(p.x.begin(), p.x.end(), 0);
      std::fill(p.z.begin(), p.z.end(), 0);
      p.z[members[k]] = p.z[members[k + 1]] = 1;
      t.set_generator(row++, p);
    }
  }
  return t;
}

std::vector<StabilizerTableau> run_kim_circuit(const StabilizerTableau& initial, const TwoColoring& c,
                                               const CliffordMap& forward, int layers, Color first_layer_color) {
  if (forward.z != c.tree().z()) throw InvalidArgument("run_kim_circuit: map size does not match z");
  std::vector<StabilizerTableau> out{initial};
  const Vertex n = initial.qubits();
  for (int tau = 1; tau <= layers; ++tau) {
    StabilizerTableau t = out.back();
    const Color col = layer_color(first_layer_color, tau);
    for (Vertex v = 0; v < n; ++v) {
      if (c.hub_color(v) != col) continue;
      const Cluster k = c.cluster_at(v);
      if (!k.complete) continue;
      std::vector<int> qubits(k.members.begin(), k.members.end());
      t.apply(forward, qubits);
    }
    out.push_back(std::move(t));
  }
  return out;
}

int entropy_region(const StabilizerTableau& t, std::span<const Vertex> region) {
  std::vector<int> q;
  for (Vertex v : region) {
    if (v < 0 || v >= t.qubits()) throw InvalidArgument("entropy_region: vertex outside the tableau");
    q.push_back(static_cast<int>(v));
  }
  return t.entropy(q);
}

std::int64_t heisenberg_entropy(const CircuitSpec& circuit, std::span<const Vertex> region, int t) {
  const std::int64_t columns = 2 * std::int64_t(region.size());
  struct Entry {
    Vertex site;
    std::int32_t column;
    std::uint8_t bits;  // bit 0 x, bit 1 z
  };
  std::vector<Entry> entries;
  std::vector<std::pair<Vertex, std::uint8_t>> support, next;
  std::unordered_map<Vertex, int> instance_of;
  std::vector<std::vector<Vertex>> instance_members;
  std::vector<std::uint32_t> instance_word;
  std::vector<Vertex> members;
  const int z = circuit.table.z();

  for (std::size_t a = 0; a < region.size(); ++a)
    for (std::uint8_t kind : {std::uint8_t(1), std::uint8_t(2)}) {
      support.assign(1, {region[a], kind});
      for (int tau = t; tau >= 1; --tau) {
        instance_of.clear();
        instance_members.clear();
        instance_word.clear();
        next.clear();
        for (auto [v, bits] : support) {
          circuit.gate_at(v, tau, members);
          if (members.empty()) {
            next.emplace_back(v, bits);
            continue;
          }
          auto [it, fresh] = instance_of.try_emplace(members[0], static_cast<int>(instance_members.size()));
          if (fresh) {
            if (static_cast<int>(members.size()) != z) throw InvalidArgument("heisenberg_entropy: gate size mismatch");
            instance_members.push_back(members);
            instance_word.push_back(0);
          }
          const auto& mem = instance_members[it->second];
          const int leg = static_cast<int>(std::find(mem.begin(), mem.end(), v) - mem.begin());
          instance_word[it->second] |= std::uint32_t(bits) << (2 * leg);
        }
        for (std::size_t g = 0; g < instance_members.size(); ++g) {
          const std::uint32_t img = circuit.table.apply(instance_word[g]);
          for (int leg = 0; leg < z; ++leg) {
            const auto b = static_cast<std::uint8_t>((img >> (2 * leg)) & 3u);
            if (b) next.emplace_back(instance_members[g][leg], b);
          }
        }
        std::swap(support, next);
      }
      const auto column = static_cast<std::int32_t>(2 * a + (kind == 2 ? 1 : 0));
      for (auto [v, bits] : support) entries.push_back({v, column, bits});
    }

  // Group by initial stabilizer cluster; one syndrome row per generator.
  std::unordered_map<Vertex, std::vector<std::size_t>> by_cluster;
  std::unordered_map<Vertex, Vertex> key_of_site;
  for (std::size_t e = 0; e < entries.size(); ++e) {
    const Vertex v = entries[e].site;
    auto it = key_of_site.find(v);
    if (it == key_of_site.end()) {
      circuit.state_cluster_at(v, members);
      it = key_of_site.emplace(v, members.empty() ? v : members[0]).first;
    }
    by_cluster[it->second].push_back(e);
  }
  std::vector<Vertex> keys;
  keys.reserve(by_cluster.size());
  for (const auto& kv : by_cluster) keys.push_back(kv.first);
  std::sort(keys.begin(), keys.end(), std::greater<>());  // outermost clusters first

  PivotBasis basis(columns);
  std::vector<std::vector<std::uint64_t>> rows;
  for (Vertex key : keys) {
    const auto& list = by_cluster[key];
    circuit.state_cluster_at(entries[list[0]].site, members);
    if (members.empty()) members.push_back(entries[list[0]].site);
    const std::size_t k = members.size();
    // Singleton: Z. Otherwise row 0 is X...X, row j the Z pair (j-1, j).
    rows.assign(k, std::vector<std::uint64_t>(basis.words(), 0));
    for (std::size_t e : list) {
      const Entry& en = entries[e];
      const auto leg = static_cast<std::size_t>(std::find(members.begin(), members.end(), en.site) - members.begin());
      const bool x = en.bits & 1u, zb = en.bits & 2u;
      if (k == 1) {
        if (x) flip_bit(rows[0], en.column);
        continue;
      }
      if (zb) flip_bit(rows[0], en.column);
      if (x) {
        if (leg >= 1) flip_bit(rows[leg], en.column);
        if (leg + 1 < k) flip_bit(rows[leg + 1], en.column);
      }
    }
    for (auto& row : rows) basis.insert(row);
  }
  return basis.rank() - static_cast<std::int64_t>(region.size());
}

CircuitSpec cluster_circuit(const TwoColoring& c, const Gate& gate, Color first_layer_color, Color state_color) {
  if (gate.z() != c.tree().z()) throw InvalidArgument("cluster_circuit: gate size does not match z");
  CircuitSpec spec;
  spec.table = heisenberg_table(gate);
  spec.gate_at = [&c, first_layer_color](Vertex v, int tau, std::vector<Vertex>& members) {
    members.clear();
    auto k = c.cluster_of(v, layer_color(first_layer_color, tau));
    if (!k) return;
    if (!k->complete) throw CapExceeded("cluster_circuit: light cone leaves the tree; increase depth");
    members = std::move(k->members);
  };
  spec.state_cluster_at = [&c, state_color](Vertex v, std::vector<Vertex>& members) {
    members.clear();
    auto k = c.cluster_of(v, state_color);
    if (k) members = std::move(k->members);
  };
  return spec;
}

CircuitSpec bond_circuit(const ZColoring& c, const Gate& gate, int offset, int state_color) {
  if (gate.z() != 2) throw InvalidArgument("bond_circuit: gate must act on 2 sites");
  const int z = c.tree().z();
  CircuitSpec spec;
  spec.table = heisenberg_table(gate);
  auto bond = [&c](Vertex v, int color, std::vector<Vertex>& members) {
    members.clear();
    if (v != 0 && c.edge_color(v) == color) {
      members = {c.tree().parent(v), v};
      return;
    }
    if (c.tree().depth_of(v) >= c.tree().depth()) throw CapExceeded("bond_circuit: light cone leaves the tree");
    const Vertex u = c.neighbor_by_color(v, color);
    if (u >= 0) members = {v, u};
  };
  spec.gate_at = [bond, offset, z](Vertex v, int tau, std::vector<Vertex>& members) {
    bond(v, (offset + tau - 1) % z, members);
  };
  spec.state_cluster_at = [bond, state_color](Vertex v, std::vector<Vertex>& members) { bond(v, state_color, members); };
  return spec;
}

std::string EntropyCurve::descriptor() const {
  std::ostringstream s;
  s << (kind == TreeKind::Rooted ? "rooted" : "unrooted") << (bond_gates ? "-2site" : "") << ":z=" << z
    << ":center=" << center << ":r=" << r;
  if (bond_gates)
    s << ":bell_color=" << z - 1;
  else
    s << ":shift=" << shift << ":state=" << color_name(state_color) << ":first=" << color_name(first_layer_color);
  return s.str();
}

bool EntropyCurve::matches() const {
  if (simulated.size() != formula.size()) return false;
  for (std::size_t t = 0; t < simulated.size(); ++t)
    if (double(simulated[t]) != formula[t]) return false;
  return true;
}

double entropy_formula(TreeKind kind, int z, int r, int shift, int t) {
  if (z < 3) throw InvalidArgument("entropy_formula: z must be >= 3");
  const double b = z - 1;
  const double lead = kind == TreeKind::Rooted ? std::pow(b, r + 1) / (z - 2) : z * std::pow(b, r) / (z - 2);
  const double saturated = kind == TreeKind::Rooted ? (std::pow(b, r + 1) - 1) / (z - 2) : z * (std::pow(b, r) - 1) / (z - 2);
  if (t >= r) return saturated;
  auto even_rule = [&](int s) { return lead * (1 - std::pow(b, -s)); };
  // Unshifted: even t follows the closed form, odd t copies t + 1. The
  // shifted boundary swaps the parities.
  const bool direct = (t % 2 == 0) == (shift == 0);
  return direct ? even_rule(t) : even_rule(t + 1);
}

double entropy_formula_2site(int z, int r, int t) {
  if (z < 3) throw InvalidArgument("entropy_formula_2site: z must be >= 3");
  const double b = z - 1;
  const int s = std::min(t, r);
  return std::pow(b, r) + 2 * std::pow(b, r) / (z - 2) * (1 - std::pow(b, -s));
}

EntropyCurve entanglement_curve(TreeKind kind, int z, int r, int max_t, int shift, const Gate& gate) {
  if (r < 1 || max_t < 0) throw InvalidArgument("entanglement_curve: need r >= 1 and max_t >= 0");
  if (shift != 0 && shift != 1) throw InvalidArgument("entanglement_curve: shift must be 0 or 1");
  if (gate.q() != 2 || gate.z() != z) throw InvalidArgument("entanglement_curve: gate must be a z-qubit gate");
  const bool rooted = kind == TreeKind::Rooted;
  const TwoColoring c(CayleyTree(z, r + max_t + 2, rooted));
  EntropyCurve curve;
  curve.kind = kind;
  curve.z = z;
  curve.r = r;
  curve.shift = shift;
  std::vector<Vertex> region;
  Color inside;  // color whose clusters lie inside the region
  if (rooted) {
    for (Vertex v = 0; v < c.tree().level_start(r + 1); ++v) region.push_back(v);
    inside = other(c.edge_color(c.tree().level_start(r + 1)));
  } else {
    region = spread(c, 0, r, Color::A).support.back();
    inside = layer_color(Color::A, r);
  }
  curve.state_color = shift == 0 ? inside : other(inside);
  curve.first_layer_color = other(curve.state_color);
  curve.region_size = static_cast<std::int64_t>(region.size());
  const CircuitSpec spec = cluster_circuit(c, gate, curve.first_layer_color, curve.state_color);
  for (int t = 0; t <= max_t; ++t) {
    curve.simulated.push_back(heisenberg_entropy(spec, region, t));
    curve.formula.push_back(entropy_formula(kind, z, r, shift, t));
  }
  return curve;
}

EntropyCurve entanglement_curve_2site(int z, int r, int max_t, const Gate& gate) {
  if (r < 1 || max_t < 0) throw InvalidArgument("entanglement_curve_2site: need r >= 1 and max_t >= 0");
  if (gate.q() != 2 || gate.z() != 2) throw InvalidArgument("entanglement_curve_2site: gate must act on 2 qubits");
  const ZColoring c(CayleyTree(z, r + max_t + 2, false));
  EntropyCurve curve;
  curve.kind = TreeKind::Unrooted;
  curve.bond_gates = true;
  curve.z = z;
  curve.r = r;
  std::vector<Vertex> region;
  for (Vertex v = 0; v < c.tree().level_start(r + 1); ++v) region.push_back(v);
  curve.region_size = static_cast<std::int64_t>(region.size());
  const CircuitSpec spec = bond_circuit(c, gate, 0, z - 1);
  for (int t = 0; t <= max_t; ++t) {
    curve.simulated.push_back(heisenberg_entropy(spec, region, t));
    curve.formula.push_back(entropy_formula_2site(z, r, t));
  }
  return curve;
}

}  // namespace treelight
