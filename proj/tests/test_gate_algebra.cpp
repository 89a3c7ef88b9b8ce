#include <doctest.h>

#include <json.hpp>

#include "treelight/gate_algebra.hpp"
#include "treelight/gate_io.hpp"
#include "treelight/pauli_algebra.hpp"

using namespace treelight;

namespace {

Gate dressed_dual_unitary(int s) {
  const Gate core = kim_gate({2, kPi / 4, kPi / 4, {0.3 * s, 0.7}});
  const std::vector<Matrix> out{random_unitary(2, s * 10 + 1), random_unitary(2, s * 10 + 2)};
  const std::vector<Matrix> in{random_unitary(2, s * 10 + 3), random_unitary(2, s * 10 + 4)};
  return dress(core, out, in);
}

int max_velocity_count(const Gate& g) {
  int n = 0;
  for (int i = 1; i <= g.z(); ++i)
    for (int j = 1; j <= g.z(); ++j)
      if (i != j && is_max_velocity(g, i, j, 1e-8).passed) ++n;
  return n;
}

}  // namespace

TEST_CASE("kicked Ising at the self-dual point is tree-unitary") {
  for (int z : {2, 3, 4}) {
    const Gate g = kim_gate({z, kPi / 4, kPi / 4, {}});
    CHECK(is_unitary(g).passed);
    const PredicateReport r = is_tree_unitary(g);
    CHECK(r.passed);
    CHECK(r.max_residual() < 1e-12);
    CHECK(static_cast<int>(r.labels.size()) == z + 1);
  }
  CHECK_FALSE(is_tree_unitary(kim_gate({3, kPi / 3, kPi / 4, {}})).passed);
}

TEST_CASE("Haar gates are unitary but not tree-unitary") {
  const Gate g(2, 3, random_unitary(8, 11));
  CHECK(is_unitary(g).passed);
  CHECK_FALSE(is_tree_unitary(g).passed);
}

TEST_CASE("reshuffles are invertible") {
  const Matrix u = random_unitary(8, 3);
  for (int p = 1; p <= 3; ++p) CHECK((unshuffle_tree(reshuffle_tree(u, 2, 3, p), 2, 3, p) - u).norm() < 1e-13);
  CHECK((unshuffle_swap(reshuffle_swap(u, 2, 3, 1, 2), 2, 3, 1, 2) - u).norm() < 1e-13);
  const std::vector<int> legs{0, 4, 2};
  CHECK((unshuffle_legs(reshuffle_legs(u, 2, 3, legs), 2, 3, legs) - u).norm() < 1e-13);
}

TEST_CASE("Clifford detection") {
  CHECK(is_clifford(kim_gate({3, kPi / 4, kPi / 4, {}})).has_value());
  CHECK_FALSE(is_clifford(kim_gate({3, kPi / 4, kPi / 4, {0.3, 0.5, 0.7}})).has_value());
  const auto map = is_clifford(swap_gate(2));
  REQUIRE(map.has_value());
  CHECK(map->x_images[0].label() == "+IX");
}

TEST_CASE("composite constructions are tree-unitary") {
  const Gate pair = dual_pair(dressed_dual_unitary(1), dressed_dual_unitary(2));
  CHECK(is_tree_unitary(pair, 1e-9).passed);
  CHECK(max_velocity_count(pair) == 3);
  const Gate cs = controlled_swap(3);
  CHECK(is_tree_unitary(cs).passed);
  CHECK(max_velocity_count(cs) == 3);
  const Gate hc = hadamard_construction_gate({3, kPi / 4, kPi / 4, {}});
  CHECK(is_tree_unitary(hc).passed);
}

TEST_CASE("swap is dual-unitary and every max-velocity direction holds") {
  const Gate s = swap_gate(2);
  CHECK(is_tree_unitary(s).passed);
  CHECK(is_max_velocity(s, 1, 2).passed);
}

TEST_CASE("gate JSON round trip is bit exact") {
  const Gate g(2, 3, random_unitary(8, 5));
  const Gate back = gate_from_json(nlohmann::json::parse(gate_to_json(g, {{"seed", 5}}).dump()));
  CHECK(back.q() == 2);
  CHECK(back.z() == 3);
  CHECK((back.matrix().array() == g.matrix().array()).all());
  auto j = gate_to_json(g);
  j["layout"] = "column-major";
  CHECK_THROWS_AS(gate_from_json(j), InvalidArgument);
  j = gate_to_json(g);
  j["entries"].erase(0);
  CHECK_THROWS_AS(gate_from_json(j), InvalidArgument);
}
