#include "treelight/gate_generation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace treelight {

std::vector<ReshuffleConstraint> unitarity_constraints(int /*q*/, int z) {
  ReshuffleConstraint c{"unitary", {}, 1.0};
  for (int k = 0; k < z; ++k) c.row_legs.push_back(k);
  return {c};
}

std::vector<ReshuffleConstraint> tree_unitary_constraints(int q, int z, std::span<const Direction> max_velocity) {
  auto out = unitarity_constraints(q, z);
  const double scale_sq = std::pow(double(q), z - 2);
  for (int p = 1; p <= z; ++p) {
    auto dir = std::find_if(max_velocity.begin(), max_velocity.end(),
                            [p](const Direction& d) { return d.in_leg == p; });
    ReshuffleConstraint c;
    if (dir != max_velocity.end()) {
      if (dir->out_leg == p || dir->out_leg < 1 || dir->out_leg > z)
        throw InvalidArgument("max-velocity constraint needs a distinct out-leg in 1..z");
      c.label = "maxvel" + std::to_string(p) + "->" + std::to_string(dir->out_leg);
      c.row_legs.push_back(p - 1);
      for (int k = 0; k < z; ++k)
        if (k != dir->out_leg - 1) c.row_legs.push_back(z + k);
      c.scale_sq = 1.0;
    } else {
      c.label = "leg" + std::to_string(p);
      for (int k = 0; k < z; ++k)
        if (k != p - 1) c.row_legs.push_back(k);
      for (int k = 0; k < z; ++k)
        if (k != p - 1) c.row_legs.push_back(z + k);
      c.scale_sq = scale_sq;
    }
    out.push_back(std::move(c));
  }
  for (const auto& d : max_velocity)
    if (d.in_leg < 1 || d.in_leg > z) throw InvalidArgument("max-velocity constraint: in-leg out of range");
  return out;
}

std::vector<ReshuffleConstraint> triunitary_constraints(int /*q*/) {
  return {{"in123", {3, 4, 5}, 1.0}, {"in23-out3", {4, 5, 2}, 1.0}, {"in3-out32", {5, 2, 1}, 1.0}};
}

Matrix nearest_isometry(const Matrix& m, double scale) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const double smallest = s.size() ? s[s.size() - 1] : 0.0;
  if (smallest < 1e-14)
    throw DegeneratePolar("nearest_isometry: rank-deficient input, smallest singular value " +
                              std::to_string(smallest),
                          smallest);
  return scale * svd.matrixU() * svd.matrixV().adjoint();
}

std::vector<double> constraint_residuals(const Matrix& u, int q, int z,
                                         std::span<const ReshuffleConstraint> constraints) {
  std::vector<double> out;
  for (const auto& c : constraints) {
    const Matrix r = reshuffle_legs(u, q, z, c.row_legs);
    out.push_back((r.adjoint() * r - c.scale_sq * Matrix::Identity(r.cols(), r.cols())).norm());
  }
  return out;
}

Matrix project_constraints(const Matrix& m, int q, int z, std::span<const ReshuffleConstraint> constraints) {
  Matrix u = m;
  for (const auto& c : constraints) {
    const Matrix r = reshuffle_legs(u, q, z, c.row_legs);
    u = unshuffle_legs(nearest_isometry(r, std::sqrt(c.scale_sq)), q, z, c.row_legs);
  }
  return u;
}

Matrix project_tc(const Matrix& m, int q, int z, std::span<const Direction> max_velocity) {
  const auto constraints = tree_unitary_constraints(q, z, max_velocity);
  return project_constraints(m, q, z, constraints);
}

namespace {

double max_of(const std::vector<double>& v) { return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end()); }

}  // namespace

GenerationResult generate_with_constraints(int q, int z, std::span<const ReshuffleConstraint> constraints,
                                           const GenerationConfig& cfg) {
  if (cfg.convergence_tol <= 0 || cfg.stagnation_eps <= 0)
    throw InvalidArgument("generation: tolerances must be positive");
  const int dim = static_cast<int>(ipow(q, z));
  Matrix u = random_ginibre(dim, dim, cfg.seed);
  std::vector<double> trace;
  for (int it = 1; it <= cfg.max_iterations; ++it) {
    u = project_constraints(u, q, z, constraints);
    const double res = max_of(constraint_residuals(u, q, z, constraints));
    trace.push_back(res);
    if (res < cfg.convergence_tol) return {Gate(q, z, u), std::move(trace), it};
    const int w = cfg.stagnation_window;
    if (it > w && trace[it - 1 - w] - res < cfg.stagnation_eps)
      throw Diverged("generation stagnated at residual " + std::to_string(res) + " after " +
                         std::to_string(it) + " iterations",
                     std::move(trace));
  }
  throw Diverged("generation did not converge in " + std::to_string(cfg.max_iterations) + " iterations",
                 std::move(trace));
}

GenerationResult generate_tree_unitary(const GenerationConfig& cfg) {
  const auto constraints = tree_unitary_constraints(cfg.q, cfg.z, cfg.max_velocity);
  return generate_with_constraints(cfg.q, cfg.z, constraints, cfg);
}

namespace {

Eigen::VectorXd constraint_vector(const Matrix& u, int q, int z, std::span<const ReshuffleConstraint> constraints) {
  std::vector<double> f;
  for (const auto& c : constraints) {
    const Matrix r = reshuffle_legs(u, q, z, c.row_legs);
    const Matrix dev = r.adjoint() * r - c.scale_sq * Matrix::Identity(r.cols(), r.cols());
    for (Eigen::Index k = 0; k < dev.size(); ++k) {
      f.push_back(dev.data()[k].real());
      f.push_back(dev.data()[k].imag());
    }
  }
  return Eigen::Map<Eigen::VectorXd>(f.data(), static_cast<Eigen::Index>(f.size()));
}

}  // namespace

DimensionReport manifold_dimension(const Gate& u, std::span<const ReshuffleConstraint> constraints, double fd_step,
                                   double rank_tol) {
  const int q = u.q(), z = u.z();
  const double res = max_of(constraint_residuals(u.matrix(), q, z, constraints));
  if (res > 1e-10)
    throw InvalidArgument("manifold_dimension: gate violates the constraints (residual " + std::to_string(res) + ")");
  const Eigen::Index entries = u.matrix().size();
  const Eigen::Index params = 2 * entries;
  const Eigen::Index rows = constraint_vector(u.matrix(), q, z, constraints).size();
  Eigen::MatrixXd jac(rows, params);
  for (Eigen::Index a = 0; a < params; ++a) {
    const cplx step = (a % 2 == 0) ? cplx(fd_step, 0) : cplx(0, fd_step);
    Matrix plus = u.matrix(), minus = u.matrix();
    plus.data()[a / 2] += step;
    minus.data()[a / 2] -= step;
    jac.col(a) = (constraint_vector(plus, q, z, constraints) - constraint_vector(minus, q, z, constraints)) /
                 (2 * fd_step);
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(jac);
  const Eigen::VectorXd s = svd.singularValues();
  DimensionReport rep;
  rep.parameters = static_cast<int>(params);
  rep.fd_step = fd_step;
  rep.rank_tol = rank_tol;
  rep.singular_values.assign(s.data(), s.data() + s.size());
  const double cut = rank_tol * s[0];
  int rank = 0;
  while (rank < s.size() && s[rank] > cut) ++rank;
  rep.rank = rank;
  rep.dimension = static_cast<int>(params) - rank;
  if (rank < s.size()) {
    rep.gap_ratio = s[rank] > 0 ? s[rank - 1] / s[rank] : std::numeric_limits<double>::infinity();
    if (rep.gap_ratio < 10)
      throw AmbiguousRank("manifold_dimension: no clear singular-value gap at rank " + std::to_string(rank) +
                              " (ratio " + std::to_string(rep.gap_ratio) + ")",
                          rep.singular_values);
  } else {
    rep.gap_ratio = std::numeric_limits<double>::infinity();
  }
  return rep;
}

DimensionReport manifold_dimension(const Gate& u, double fd_step, double rank_tol) {
  const auto constraints = tree_unitary_constraints(u.q(), u.z());
  return manifold_dimension(u, constraints, fd_step, rank_tol);
}

}  // namespace treelight
