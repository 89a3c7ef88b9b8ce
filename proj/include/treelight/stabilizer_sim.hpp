#pragma once

#include <functional>
#include <span>

#include "treelight/gate_algebra.hpp"
#include "treelight/tree_geometry.hpp"

namespace treelight {

// Binary symplectic action of a z-qubit Clifford on local Pauli bits. Bit
// 2k of a local word is x on leg k + 1, bit 2k + 1 is z. Signs are dropped.
class SymplecticTable {
 public:
  SymplecticTable() = default;
  explicit SymplecticTable(const CliffordMap& map);
  int z() const { return z_; }
  std::uint32_t apply(std::uint32_t local) const { return table_[local]; }

 private:
  int z_ = 0;
  std::vector<std::uint32_t> table_;
};

// Stabilizer generators of an N-qubit pure state as bit-packed symplectic
// rows with sign bits.
class StabilizerTableau {
 public:
  explicit StabilizerTableau(int qubits);  // |0...0>

  int qubits() const { return n_; }
  int words() const { return words_; }
  bool x(int row, int q) const { return (x_[row * words_ + q / 64] >> (q % 64)) & 1u; }
  bool z(int row, int q) const { return (z_[row * words_ + q / 64] >> (q % 64)) & 1u; }
  bool negative(int row) const { return sign_[row]; }
  SignedPauli generator(int row) const;
  void set_generator(int row, const SignedPauli& p);

  // Forward conjugation P -> U P U^dagger; the map holds the images
  // U X_k U^dagger and U Z_k U^dagger.
  void apply(const CliffordMap& forward, std::span<const int> qubits);

  // Generators commute pairwise and are independent.
  bool valid() const;
  // rank(generators restricted to region) - |region|, in units of ln 2.
  int entropy(std::span<const int> region) const;

 private:
  int n_;
  int words_;
  std::vector<std::uint64_t> x_;
  std::vector<std::uint64_t> z_;
  std::vector<bool> sign_;
};

// Images U P U^dagger of the single-site generators (the inverse of the
// Heisenberg map returned by is_clifford).
CliffordMap forward_clifford(const Gate& u);

// GHZ on every cluster of state_color; truncated clusters at the tree
// boundary hold GHZ on their present members, singletons |0>.
StabilizerTableau init_ghz(const TwoColoring& c, Color state_color);

// Layer tau acts with the gate on every complete cluster of color
// layer_color(first, tau). Returns the tableau after each layer, entry 0
// the initial one.
std::vector<StabilizerTableau> run_kim_circuit(const StabilizerTableau& initial, const TwoColoring& c,
                                               const CliffordMap& forward, int layers, Color first_layer_color);

int entropy_region(const StabilizerTableau& t, std::span<const Vertex> region);

enum class TreeKind { Unrooted, Rooted };

struct EntropyCurve {
  TreeKind kind = TreeKind::Unrooted;
  bool bond_gates = false;  // 2-site brickwork with Bell pairs
  int z = 3;
  int r = 0;
  int shift = 0;
  Vertex center = 0;
  Color state_color = Color::A;
  Color first_layer_color = Color::B;
  std::int64_t region_size = 0;
  std::vector<std::int64_t> simulated;  // S(t) in ln 2, t = 0..T
  std::vector<double> formula;

  std::string descriptor() const;
  bool matches() const;
};

// Closed-form curves (ln 2 units). Saturation applies for t >= r.
double entropy_formula(TreeKind kind, int z, int r, int shift, int t);
double entropy_formula_2site(int z, int r, int t);

// GHZ quench on a z-site Clifford tree-unitary circuit. The unrooted region
// is the light cone of the origin after r layers (first color A); the rooted
// region is generations 0..r. shift 0 puts GHZ states on the color whose
// clusters do not cross the region boundary, shift 1 on the other color.
// The first circuit layer uses the color without GHZ states.
EntropyCurve entanglement_curve(TreeKind kind, int z, int r, int max_t, int shift, const Gate& gate);

// Bell pairs on color z - 1 of the z-coloring of the unrooted tree, layers
// in color order 0, 1, ..., region generations 0..r.
EntropyCurve entanglement_curve_2site(int z, int r, int max_t, const Gate& gate);

// Layered Clifford circuit on a tree with a product initial stabilizer state.
struct CircuitSpec {
  // Gate instance containing v at layer tau (members, leg order), or empty.
  std::function<void(Vertex v, int tau, std::vector<Vertex>& members)> gate_at;
  SymplecticTable table;
  // Initial stabilizer cluster containing v (members); a singleton means |0>.
  std::function<void(Vertex v, std::vector<Vertex>& members)> state_cluster_at;
};

// Entropy of a region at time t from Heisenberg images: each region Pauli is
// evolved backward through t layers and tested against the initial
// stabilizers; S = rank(syndromes) - |A|. Exposed for cross-checks.
std::int64_t heisenberg_entropy(const CircuitSpec& circuit, std::span<const Vertex> region, int t);

CircuitSpec cluster_circuit(const TwoColoring& c, const Gate& gate, Color first_layer_color, Color state_color);
CircuitSpec bond_circuit(const ZColoring& c, const Gate& gate, int offset, int state_color);

}  // namespace treelight
