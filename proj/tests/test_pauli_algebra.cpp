#include <doctest.h>

#include "treelight/pauli_algebra.hpp"

using namespace treelight;

TEST_CASE("basis is orthonormal under tr(a b)/q") {
  for (int q : {2, 3, 4}) {
    const OperatorBasis b = build_basis(q);
    REQUIRE(static_cast<int>(b.elements.size()) == q * q);
    CHECK((b[0] - identity(q)).norm() < 1e-14);
    for (int a = 0; a < b.size(); ++a) {
      CHECK((b[a] - b[a].adjoint()).norm() < 1e-14);
      for (int c = 0; c < b.size(); ++c) CHECK(std::abs(overlap(b[a], b[c]) - cplx(a == c ? 1 : 0)) < 1e-13);
    }
  }
}

TEST_CASE("qubit basis order is I X Y Z") {
  const OperatorBasis b = build_basis(2);
  CHECK(std::abs(b[1](0, 1) - cplx(1)) < 1e-15);
  CHECK(std::abs(b[2](0, 1) - cplx(0, -1)) < 1e-15);
  CHECK(std::abs(b[3](1, 1) - cplx(-1)) < 1e-15);
}

TEST_CASE("vectorize and devectorize are inverse") {
  const OperatorBasis b = build_basis(3);
  Matrix m = Matrix::Random(3, 3);
  const OperatorVector v = vectorize(b, m);
  CHECK((devectorize(b, v) - m).norm() < 1e-13);
}

TEST_CASE("string coefficients round trip and label order") {
  const OperatorBasis b = build_basis(2);
  Matrix op = kron(b[1], b[3]) + 0.5 * kron(b[0], b[2]);
  const Vector c = string_coefficients(op, b, 2);
  CHECK(std::abs(c(1 * 4 + 3) - cplx(1)) < 1e-14);
  CHECK(std::abs(c(0 * 4 + 2) - cplx(0.5)) < 1e-14);
  CHECK((from_string_coefficients(c, b, 2) - op).norm() < 1e-13);
  CHECK(string_label(1 * 4 + 3, 2, 2) == "XZ");
}

TEST_CASE("embedding and partial trace") {
  const OperatorBasis b = build_basis(2);
  const Matrix e = embed_on_leg(b[1], 2, 3);
  CHECK((e - kron(kron(b[0], b[1]), b[0])).norm() < 1e-14);
  CHECK((partial_trace_keep(e, 2, 3, 2) - 4.0 * b[1]).norm() < 1e-13);
  CHECK(partial_trace_keep(e, 2, 3, 1).norm() < 1e-13);
}

TEST_CASE("digits and compose agree") {
  for (std::int64_t i = 0; i < 27; ++i) CHECK(compose(digits(i, 3, 3), 3) == i);
  CHECK(digits(5, 2, 3) == std::vector<int>{1, 0, 1});
}
