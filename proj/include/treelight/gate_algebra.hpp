#pragma once

#include <optional>
#include <span>
#include <string>

#include "treelight/core.hpp"

namespace treelight {

// A z-site gate on q-level sites. Rows index outputs, columns inputs, both
// as composite indices with site 1 most significant. Leg 1 is the hub
// (root-side) site of a cluster; legs 2..z are its spokes.
class Gate {
 public:
  Gate(int q, int z, Matrix matrix);

  int q() const { return q_; }
  int z() const { return z_; }
  std::int64_t dim() const { return matrix_.rows(); }
  const Matrix& matrix() const { return matrix_; }
  Gate adjoint() const { return Gate(q_, z_, matrix_.adjoint()); }

 private:
  int q_;
  int z_;
  Matrix matrix_;
};

struct PredicateReport {
  bool passed = false;
  std::vector<std::string> labels;
  std::vector<double> residuals;
  double tolerance = kDefaultTol;

  double max_residual() const;
};

// Tree reshuffle for leg p: rows (outputs != p, inputs != p), columns
// (output p, input p). Shape q^{2(z-1)} x q^2.
Matrix reshuffle_tree(const Matrix& u, int q, int z, int p);
Matrix unshuffle_tree(const Matrix& r, int q, int z, int p);

// Square reshuffle exchanging input leg i with output leg j. Rows are
// (output i, inputs != j), columns (outputs != i, input j).
Matrix reshuffle_swap(const Matrix& u, int q, int z, int i, int j);
Matrix unshuffle_swap(const Matrix& w, int q, int z, int i, int j);

// Generic regrouping: legs 0..z-1 are outputs, z..2z-1 are inputs. The listed
// legs form the row index (in order); the rest form the column index.
Matrix reshuffle_legs(const Matrix& u, int q, int z, std::span<const int> row_legs);
Matrix unshuffle_legs(const Matrix& r, int q, int z, std::span<const int> row_legs);

PredicateReport is_unitary(const Gate& u, double tol = kDefaultTol);
PredicateReport is_tree_unitary(const Gate& u, double tol = kDefaultTol);
PredicateReport is_max_velocity(const Gate& u, int i, int j, double tol = kDefaultTol);
PredicateReport is_perfect_tensor(const Gate& u, double tol = kDefaultTol);

// Hermitian Pauli string with sign. Per site: (x,z) = (1,0) X, (1,1) Y, (0,1) Z.
struct SignedPauli {
  std::vector<std::uint8_t> x;
  std::vector<std::uint8_t> z;
  bool negative = false;

  std::string label() const;
  bool operator==(const SignedPauli&) const = default;
};

// Heisenberg images U^dagger P U of the single-site generators.
struct CliffordMap {
  int z = 0;
  std::vector<SignedPauli> x_images;
  std::vector<SignedPauli> z_images;
};

Matrix pauli_matrix(const SignedPauli& p);
std::optional<CliffordMap> is_clifford(const Gate& u, double tol = 1e-10);

struct KimParams {
  int z = 3;
  double J = kPi / 4;
  double b = kPi / 4;
  std::vector<double> h;  // empty means all zero
};

Gate kim_gate(const KimParams& p);
Gate hadamard_construction_gate(const KimParams& p);

// Composite constructions.
Gate swap_gate(int q);
Gate permutation_gate(int q, std::span<const int> perm);  // output leg k carries input leg perm[k]
Gate embed_gate(const Matrix& v, int q, int z, std::span<const int> legs);
Gate compose(const Gate& later, const Gate& earlier);

// Two dual-unitary 2-site gates on bonds (1,2) and (1,3): V1 acts first.
Gate dual_pair(const Gate& v1, const Gate& v2);
// Controlled unitary on leg 1 with open controls on legs 2..z, followed by a
// cyclic leg permutation.
Gate controlled_swap(int z, std::span<const Matrix> targets);
Gate controlled_swap(int z);
enum class SwapChoice { Legs12, Legs23 };
Gate triunitary_derived(const Gate& tri, SwapChoice choice);
// Single-site dressings on outputs and inputs (empty spans mean identity).
Gate dress(const Gate& u, std::span<const Matrix> out_sites, std::span<const Matrix> in_sites);
// One 2-site unitary on two legs, applied after the gate.
Gate dress_two_site(const Gate& u, const Matrix& v, int leg_a, int leg_b);

// Unitary checks for the three hexagon bipartitions of a 3-site gate.
PredicateReport is_triunitary(const Gate& u, double tol = kDefaultTol);

Matrix random_unitary(int dim, std::uint64_t seed);
Matrix random_ginibre(int rows, int cols, std::uint64_t seed);

}  // namespace treelight
