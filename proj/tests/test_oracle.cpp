#include <doctest.h>

#include "treelight/channels.hpp"
#include "treelight/oracle.hpp"

using namespace treelight;

TEST_CASE("single gate region conjugates like the matrix") {
  const OperatorBasis basis = build_basis(2);
  const Gate u(2, 3, random_unitary(8, 13));
  const DenseRegion region = gate_region(u);
  const Matrix op = embed_on_leg(basis[1], 2, 3);
  const Matrix evolved = heisenberg_evolve(region, op, 1);
  CHECK((evolved - u.matrix().adjoint() * op * u.matrix()).norm() < 1e-12);
}

TEST_CASE("channel products match the dense oracle") {
  const OperatorBasis basis = build_basis(2);
  const TwoColoring c(CayleyTree(3, 5, false));
  const Gate u = kim_gate({3, kPi / 4, kPi / 4, {0.3, 0.5, 0.7}});
  const Matrix sigma = (basis[1] + basis[3]) / std::sqrt(2.0);
  const OperatorVector alpha = vectorize(basis, sigma);
  for (Color first : {Color::A, Color::B})
    for (int t = 1; t <= 2; ++t) {
      const DenseRegion region = cluster_region(c, 0, t, first, u);
      const Matrix evolved = heisenberg_evolve(region, sigma, 0, t);
      const LightCone cone = spread(c, 0, t, first);
      for (Vertex j : cone.front[t - 1]) {
        const auto steps = steps_for_path(path_to_channel_sequence(c, 0, j, first), u);
        for (int b = 1; b < 4; ++b) {
          const OperatorVector beta = vectorize(basis, basis[b]);
          CHECK(std::abs(correlator_path(steps, alpha, beta, basis).values.back() -
                         correlator_with(region, evolved, basis[b], j)) < 1e-10);
          CHECK(std::abs(otoc_path(steps, alpha, beta, basis).values.back() -
                         otoc_with(region, evolved, basis[b], j)) < 1e-10);
        }
      }
    }
}

TEST_CASE("tree-unitary gates have vanishing interior correlators") {
  const OperatorBasis basis = build_basis(2);
  const TwoColoring c(CayleyTree(3, 5, false));
  const Gate u = kim_gate({3, kPi / 4, kPi / 4, {}});
  const int t = 2;
  const DenseRegion region = cluster_region(c, 0, t, Color::B, u);
  const Matrix evolved = heisenberg_evolve(region, basis[1], 0, t);
  const LightCone cone = spread(c, 0, t, Color::B);
  const auto& front = cone.front[t - 1];
  for (Vertex j : region.vertices()) {
    if (std::find(front.begin(), front.end(), j) != front.end()) continue;
    for (int b = 1; b < 4; ++b) CHECK(std::abs(correlator_with(region, evolved, basis[b], j)) < 1e-10);
  }
}

TEST_CASE("light-cone weight and the averaged otoc") {
  const OperatorBasis basis = build_basis(2);
  const TwoColoring c(CayleyTree(3, 5, false));
  const Gate u = kim_gate({3, kPi / 4, kPi / 4, {}});
  const Matrix sigma = (basis[1] + basis[2]) / std::sqrt(2.0);
  for (int t = 1; t <= 2; ++t) {
    const DenseRegion region = cluster_region(c, 0, t, Color::A, u);
    const Matrix evolved = heisenberg_evolve(region, sigma, 0, t);
    const LightCone cone = spread(c, 0, t, Color::A);
    std::vector<int> local;
    for (Vertex v : cone.front[t - 1]) local.push_back(region.local(v));
    const WeightReport w = lightcone_weight(pauli_decompose(region, evolved, basis), 2, region.sites(), local);
    CHECK(w.w == doctest::Approx(1.0).epsilon(1e-10));
    const BoundReport b = otoc_average_and_bound(region, evolved, cone.front[t - 1], basis);
    CHECK(std::abs(b.o_direct - b.o_coefficients) < 1e-10);
    CHECK(b.residual() >= -1e-10);
  }
  const GateAssignment gates = [&](const Cluster&, int) { return u; };
  CHECK(front_weight_at(c, 0, 3, Color::A, gates, sigma, basis) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("oracle refuses oversized regions") {
  const TwoColoring c(CayleyTree(3, 6, false));
  OracleLimits tight;
  tight.dimension_cap = 16;
  CHECK_THROWS_AS(cluster_region(c, 0, 2, Color::A, kim_gate({3, kPi / 4, kPi / 4, {}}), tight), CapExceeded);
}
