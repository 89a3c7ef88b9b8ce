#include <doctest.h>

#include "treelight/stabilizer_sim.hpp"

using namespace treelight;

TEST_CASE("GHZ initial state entropies") {
  const TwoColoring c(CayleyTree(3, 3, false));
  const StabilizerTableau t = init_ghz(c, Color::A);
  CHECK(t.valid());
  const Cluster k = c.cluster_at(1);
  std::vector<Vertex> one{k.members[0]};
  CHECK(entropy_region(t, one) == (k.members.size() > 1 ? 1 : 0));
  CHECK(entropy_region(t, k.members) == 0);
}

TEST_CASE("forward Clifford conjugation keeps the tableau valid") {
  const Gate g = kim_gate({3, kPi / 4, kPi / 4, {}});
  const CliffordMap forward = forward_clifford(g);
  StabilizerTableau t(3);
  const std::vector<int> qubits{0, 1, 2};
  t.apply(forward, qubits);
  CHECK(t.valid());
  // The Heisenberg and forward maps are mutually inverse on Pauli bits.
  const SymplecticTable heis(*is_clifford(g)), fwd(forward);
  for (std::uint32_t w = 0; w < 64; ++w) CHECK(heis.apply(fwd.apply(w)) == w);
}

TEST_CASE("tableau and Heisenberg entropies agree") {
  const Gate g = kim_gate({3, kPi / 4, kPi / 4, {}});
  const TwoColoring c(CayleyTree(3, 9, false));
  const auto region = spread(c, 0, 2, Color::A).support.back();
  const Color inside = layer_color(Color::A, 2);
  for (Color state : {inside, other(inside)}) {
    const auto trajectory = run_kim_circuit(init_ghz(c, state), c, forward_clifford(g), 5, other(state));
    const CircuitSpec spec = cluster_circuit(c, g, other(state), state);
    for (int t = 0; t <= 5; ++t) CHECK(entropy_region(trajectory[t], region) == heisenberg_entropy(spec, region, t));
  }
}

TEST_CASE("entropy curves follow the closed forms") {
  const Gate g = kim_gate({3, kPi / 4, kPi / 4, {}});
  for (int shift : {0, 1}) CHECK(entanglement_curve(TreeKind::Unrooted, 3, 4, 6, shift, g).matches());
  CHECK(entanglement_curve(TreeKind::Rooted, 3, 5, 7, 0, g).matches());
  CHECK(entropy_formula(TreeKind::Unrooted, 3, 7, 0, 2) == 288);
  CHECK(entropy_formula(TreeKind::Unrooted, 3, 7, 0, 4) == 360);
  const EntropyCurve two = entanglement_curve_2site(3, 4, 5, kim_gate({2, kPi / 4, kPi / 4, {}}));
  CHECK(two.matches());
  CHECK(two.simulated.back() == static_cast<std::int64_t>(entropy_formula_2site(3, 4, 5)));
}

TEST_CASE("non-Clifford gates are rejected") {
  CHECK_THROWS(entanglement_curve(TreeKind::Unrooted, 3, 2, 3, 0, kim_gate({3, kPi / 4, kPi / 4, {0.3, 0.3, 0.3}})));
}
