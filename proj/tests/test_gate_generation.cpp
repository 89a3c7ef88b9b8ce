#include <doctest.h>

#include "treelight/gate_generation.hpp"

using namespace treelight;

TEST_CASE("projection converges to a tree-unitary fixed point") {
  GenerationConfig cfg;
  cfg.seed = 42;
  const GenerationResult r = generate_tree_unitary(cfg);
  CHECK(is_tree_unitary(r.gate, 1e-10).passed);
  CHECK(r.iterations <= cfg.max_iterations);
  CHECK(static_cast<int>(r.trace.size()) == r.iterations);
  CHECK((project_tc(r.gate.matrix(), 2, 3) - r.gate.matrix()).norm() < 1e-10);
}

TEST_CASE("generation is deterministic in the seed") {
  GenerationConfig cfg;
  cfg.seed = 7;
  const Gate a = generate_tree_unitary(cfg).gate;
  const Gate b = generate_tree_unitary(cfg).gate;
  CHECK((a.matrix().array() == b.matrix().array()).all());
}

TEST_CASE("nearest isometry of a scaled unitary is itself") {
  const Matrix u = random_unitary(4, 2);
  CHECK((nearest_isometry(3.0 * u, 1.0) - u).norm() < 1e-12);
}

TEST_CASE("tangent space dimension of the generic manifold") {
  GenerationConfig cfg;
  cfg.seed = 42;
  const Gate g = generate_tree_unitary(cfg).gate;
  const DimensionReport d = manifold_dimension(g);
  CHECK(d.dimension == 37);
  CHECK(d.gap_ratio >= 10);
  CHECK(manifold_dimension(g, unitarity_constraints(2, 3)).dimension == 64);
  GenerationConfig two;
  two.z = 2;
  CHECK(manifold_dimension(generate_tree_unitary(two).gate).dimension == 12);
}

TEST_CASE("max-velocity generation imposes the direction") {
  GenerationConfig cfg;
  cfg.seed = 7;
  cfg.max_velocity = {{2, 3}};
  const Gate g = generate_tree_unitary(cfg).gate;
  CHECK(is_tree_unitary(g).passed);
  CHECK(is_max_velocity(g, 2, 3).passed);
}

TEST_CASE("non-convergence reports the residual trace") {
  GenerationConfig cfg;
  cfg.seed = 14;
  cfg.max_iterations = 200;
  try {
    generate_tree_unitary(cfg);
    FAIL("expected divergence");
  } catch (const Diverged& e) {
    CHECK(!e.trace.empty());
  }
}

TEST_CASE("triunitary gates give tree-unitary derived gates") {
  GenerationConfig cfg;
  cfg.seed = 42;
  const Gate tri = generate_with_constraints(2, 3, triunitary_constraints(2), cfg).gate;
  CHECK(is_triunitary(tri).passed);
  for (auto choice : {SwapChoice::Legs12, SwapChoice::Legs23})
    CHECK(is_tree_unitary(triunitary_derived(tri, choice)).passed);
}
