#pragma once

#include <functional>
#include <span>

#include "treelight/gate_algebra.hpp"
#include "treelight/pauli_algebra.hpp"
#include "treelight/tree_geometry.hpp"

namespace treelight {

// A gate acting on region-local sites; sites[k] carries leg k + 1.
struct PlacedGate {
  Gate gate;
  std::vector<int> sites;
};

struct OracleLimits {
  std::int64_t dimension_cap = std::int64_t(1) << 14;
  std::int64_t memory_bytes = std::int64_t(2) << 30;  // one dense operator must fit
};

// Truncated set of sites with the gates of each layer. Layer 1 is the first
// to conjugate an operator: A_t = L_t^dagger A_{t-1} L_t.
class DenseRegion {
 public:
  DenseRegion(int q, std::vector<Vertex> vertices, std::vector<std::vector<PlacedGate>> layers,
              const OracleLimits& limits = {});

  int q() const { return q_; }
  int sites() const { return static_cast<int>(vertices_.size()); }
  std::int64_t dim() const { return dim_; }
  int layers() const { return static_cast<int>(layers_.size()); }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<PlacedGate>& layer(int tau) const { return layers_.at(tau - 1); }
  int local(Vertex v) const;  // -1 when v is outside the region
  bool contains(Vertex v) const { return local(v) >= 0; }

 private:
  int q_;
  std::vector<Vertex> vertices_;
  std::vector<std::vector<PlacedGate>> layers_;
  std::int64_t dim_;
};

using GateAssignment = std::function<Gate(const Cluster&, int layer)>;

// Light-cone region of origin after t layers on a 2-colored z-site circuit.
// Only clusters touching the support are kept, which is exact for every
// observable by causality.
DenseRegion cluster_region(const TwoColoring& c, Vertex origin, int t, Color first_layer_color,
                           const GateAssignment& gates, const OracleLimits& limits = {});
DenseRegion cluster_region(const TwoColoring& c, Vertex origin, int t, Color first_layer_color, const Gate& gate,
                           const OracleLimits& limits = {});

// Light-cone region of a 2-site brickwork circuit with z colors; layer tau
// uses color (offset + tau - 1) mod z and leg 1 of v sits on the parent.
DenseRegion bond_region(const ZColoring& c, Vertex origin, int t, int offset, const Gate& v,
                        const OracleLimits& limits = {});

// Region of a single gate acting once, sites 0..z-1 as legs 1..z.
DenseRegion gate_region(const Gate& u);

Matrix embed_site(const DenseRegion& region, const Matrix& sigma, Vertex v);
// In-place U^dagger A U for a gate on the given local sites.
void conjugate_in_place(Matrix& a, int q, int n, const Matrix& u, std::span<const int> sites);
Matrix heisenberg_evolve(const DenseRegion& region, Matrix op, int t);
Matrix heisenberg_evolve(const DenseRegion& region, const Matrix& sigma, Vertex site, int t);

// tr(sigma_beta(j) A) / q^N and tr(B A B A) / q^N with B = sigma_beta(j).
cplx correlator_with(const DenseRegion& region, const Matrix& evolved, const Matrix& sigma_beta, Vertex j);
double otoc_with(const DenseRegion& region, const Matrix& evolved, const Matrix& sigma_beta, Vertex j);
cplx correlator_exact(const DenseRegion& region, const Matrix& sigma_alpha, Vertex i, const Matrix& sigma_beta,
                      Vertex j, int t);
double otoc_exact(const DenseRegion& region, const Matrix& sigma_alpha, Vertex i, const Matrix& sigma_beta,
                  Vertex j, int t);

// Coefficients over basis strings of the region (string_coefficients).
Vector pauli_decompose(const DenseRegion& region, const Matrix& op, const OperatorBasis& basis);

struct WeightReport {
  double w = 0;
  std::vector<double> w_n;  // index n = number of non-identity sites on R
  int region_size = 0;
  double o_bar = 1;
};

// Weight of the string coefficients on the local sites in R.
WeightReport lightcone_weight(const Vector& coefficients, int q, int n, std::span<const int> region_sites);

struct BoundReport {
  double o_direct = 1;        // averaged dense OTOCs
  double o_coefficients = 1;  // the same average from the string weights
  double w = 0;
  int region_size = 0;
  double lhs = 0;  // 1 - O
  double rhs = 0;  // (2w/|R|)(q^2-2)/(q^2-1)
  double residual() const { return lhs - rhs; }
};

// Requires q = 2 for the coefficient route (Paulis commute or anticommute).
BoundReport otoc_average_and_bound(const DenseRegion& region, const Matrix& evolved, std::span<const Vertex> r,
                                   const OperatorBasis& basis);

// Weight on front[t] of sigma at the origin after t layers. The operator is
// evolved densely for t - 1 layers; the clusters of layer t then trace out
// their new sites, acting as single-site maps on their one old site.
double front_weight_at(const TwoColoring& c, Vertex origin, int t, Color first_layer_color,
                       const GateAssignment& gates, const Matrix& sigma, const OperatorBasis& basis,
                       const OracleLimits& limits = {});

}  // namespace treelight
