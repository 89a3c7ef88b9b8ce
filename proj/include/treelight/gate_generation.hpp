#pragma once

#include <span>

#include "treelight/gate_algebra.hpp"

namespace treelight {

struct Direction {
  int in_leg = 1;   // output-side leg of the gate carrying the operator
  int out_leg = 2;  // input-side leg it is read on
};

// One reshuffle constraint: the legs forming the row index must give a matrix
// with R^dagger R = scale_sq * 1. Legs 0..z-1 are outputs, z..2z-1 inputs.
struct ReshuffleConstraint {
  std::string label;
  std::vector<int> row_legs;
  double scale_sq = 1.0;
};

std::vector<ReshuffleConstraint> unitarity_constraints(int q, int z);
// Unitarity plus the z tree conditions. A max-velocity direction i->j
// replaces the tree condition of leg i by unitarity of the swapped reshuffle.
std::vector<ReshuffleConstraint> tree_unitary_constraints(int q, int z,
                                                          std::span<const Direction> max_velocity = {});
// Unitarity across the three hexagon bipartitions (z = 3).
std::vector<ReshuffleConstraint> triunitary_constraints(int q);

struct GenerationConfig {
  int q = 2;
  int z = 3;
  std::uint64_t seed = 0;
  int max_iterations = 5000;
  double convergence_tol = 1e-12;
  int stagnation_window = 50;
  double stagnation_eps = 1e-15;
  std::vector<Direction> max_velocity;
};

struct GenerationResult {
  Gate gate;
  std::vector<double> trace;  // max residual after each projection sweep
  int iterations = 0;
};

struct DimensionReport {
  int dimension = 0;
  int rank = 0;
  int parameters = 0;
  std::vector<double> singular_values;
  double gap_ratio = 0;
  double fd_step = 1e-6;
  double rank_tol = 1e-6;
};

// scale * polar factor of m.
Matrix nearest_isometry(const Matrix& m, double scale);

std::vector<double> constraint_residuals(const Matrix& u, int q, int z,
                                         std::span<const ReshuffleConstraint> constraints);
Matrix project_constraints(const Matrix& m, int q, int z, std::span<const ReshuffleConstraint> constraints);

// One sweep of the tree-unitary projection: nearest unitary, then every leg.
Matrix project_tc(const Matrix& m, int q, int z, std::span<const Direction> max_velocity = {});

GenerationResult generate_with_constraints(int q, int z, std::span<const ReshuffleConstraint> constraints,
                                           const GenerationConfig& cfg);
GenerationResult generate_tree_unitary(const GenerationConfig& cfg);

DimensionReport manifold_dimension(const Gate& u, std::span<const ReshuffleConstraint> constraints,
                                   double fd_step = 1e-6, double rank_tol = 1e-6);
DimensionReport manifold_dimension(const Gate& u, double fd_step = 1e-6, double rank_tol = 1e-6);

}  // namespace treelight
