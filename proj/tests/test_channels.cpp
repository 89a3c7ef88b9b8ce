#include <doctest.h>

#include "treelight/channels.hpp"

using namespace treelight;

namespace {

cplx dense_two_point(const Gate& u, const Matrix& a, int e, const Matrix& b, int ee) {
  const Matrix evolved = u.matrix().adjoint() * embed_on_leg(a, e, u.z()) * u.matrix();
  return overlap(embed_on_leg(b, ee, u.z()), evolved);
}

}  // namespace

TEST_CASE("correlation channel entries are single-gate correlators") {
  const OperatorBasis basis = build_basis(2);
  const Gate u(2, 3, random_unitary(8, 9));
  const CorrChannel m = correlation_channel(u, 1, 3, basis);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      CHECK(std::abs(m.matrix(b, a) - dense_two_point(u, basis[a], 1, basis[b], 3)) < 1e-12);
  CHECK(std::abs(m.matrix(0, 0) - cplx(1)) < 1e-12);
  const CorrChannel w = wait_channel(u, 2, basis);
  for (int a = 0; a < 4; ++a)
    CHECK(std::abs(w.matrix(a, a) - dense_two_point(u, basis[a], 2, basis[a], 2)) < 1e-12);
}

TEST_CASE("otoc channel fixes the replica identity") {
  const OperatorBasis basis = build_basis(2);
  const Gate u(2, 3, random_unitary(8, 4));
  const OtocChannel t = otoc_channel(u, 2, 1, basis);
  CHECK((t.matrix * replica_R(basis) - replica_R(basis)).norm() < 1e-12);
  CHECK((replica_L(basis) * t.matrix - replica_L(basis)).norm() < 1e-12);
}

TEST_CASE("one-step otoc matches the dense value") {
  const OperatorBasis basis = build_basis(2);
  const Gate u(2, 3, random_unitary(8, 21));
  const Matrix a = embed_on_leg(basis[1], 2, 3), b = embed_on_leg(basis[2], 3, 3);
  const Matrix y = u.matrix().adjoint() * a * u.matrix();
  const double dense = ((b * y * b * y).trace() / 8.0).real();
  const OtocSeries s = otoc_power(otoc_channel(u, 2, 3, basis), vectorize(basis, basis[1]), vectorize(basis, basis[2]), basis, 1);
  CHECK(s.values[1] == doctest::Approx(dense).epsilon(1e-12));
}

TEST_CASE("kicked Ising otoc limits with generic fields") {
  const OperatorBasis basis = build_basis(2);
  const OperatorVector alpha = vectorize(basis, (basis[1] + basis[3]) / std::sqrt(2.0));
  const Gate u = kim_gate({3, kPi / 4, kPi / 4, {0.3, 0.5, 0.7}});
  const OtocChannel t = otoc_channel(u, 1, 3, basis);
  CHECK(otoc_asymptote(t, alpha, vectorize(basis, basis[2]), basis).value == doctest::Approx(-0.5).epsilon(1e-8));
  CHECK(otoc_asymptote(t, alpha, vectorize(basis, (basis[2] + basis[3]) / std::sqrt(2.0)), basis).value ==
        doctest::Approx(-0.25).epsilon(1e-8));
}

TEST_CASE("path products reduce to powers on a straight path") {
  const OperatorBasis basis = build_basis(2);
  const Gate u = kim_gate({3, kPi / 4, kPi / 4, {0.2, 0.4, 0.6}});
  const CorrChannel m = correlation_channel(u, 1, 3, basis);
  std::vector<ChannelStep> steps(5, ChannelStep{&u, 1, 3});
  const OperatorVector a = vectorize(basis, basis[3]), b = vectorize(basis, basis[1]);
  const auto path = correlator_path(steps, a, b, basis);
  const auto power = correlator_power(m, a, b, 5);
  for (int k = 0; k <= 5; ++k) CHECK(std::abs(path.values[k] - power.values[k]) < 1e-13);
}

TEST_CASE("two-site channels of a dual-unitary gate") {
  const OperatorBasis basis = build_basis(2);
  const TwoSiteChannels ch = twosite_channels(kim_gate({2, kPi / 4, kPi / 4, {0.3, 0.1}}), basis);
  // Dual-unitarity makes the hop channel unital and trace preserving.
  CHECK(std::abs(ch.m1.matrix(0, 0) - cplx(1)) < 1e-12);
  CHECK(count_unit_eigenvalues(ch.t1.matrix) >= 1);
}
