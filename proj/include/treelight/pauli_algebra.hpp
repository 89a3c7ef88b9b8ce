#pragma once

#include <span>

#include "treelight/core.hpp"

namespace treelight {

// Hermitian single-site basis with tr(a b)/q = delta. Index 0 is the identity.
// q = 2: I, X, Y, Z. q > 2: Gell-Mann matrices scaled by sqrt(q/2), ordered
// identity, symmetric off-diagonal, antisymmetric off-diagonal, diagonal.
struct OperatorBasis {
  int q = 2;
  std::vector<Matrix> elements;

  int size() const { return q * q; }
  const Matrix& operator[](int a) const { return elements.at(a); }
};

struct OperatorVector {
  int q = 2;
  Vector coefficients;
};

OperatorBasis build_basis(int q);

// tr(a^dagger b) / dim.
cplx overlap(const Matrix& a, const Matrix& b);
cplx overlap(const OperatorVector& a, const OperatorVector& b);

OperatorVector vectorize(const OperatorBasis& basis, const Matrix& op);
Matrix devectorize(const OperatorBasis& basis, const OperatorVector& v);

Matrix kron(const Matrix& a, const Matrix& b);
Matrix identity(std::int64_t dim);

// sigma on leg e (1-based) of z sites, identity elsewhere.
Matrix embed_on_leg(const Matrix& sigma, int e, int z);

// Reduced operator on one leg: tr over all other legs (not normalized).
Matrix partial_trace_keep(const Matrix& op, int q, int z, int keep_leg);

// Coefficients c_S = tr(S^dagger A)/q^n over all basis strings on n sites.
// String index: digit k (site k, most significant first) is the basis label.
Vector string_coefficients(const Matrix& op, const OperatorBasis& basis, int n);

// Inverse of string_coefficients.
Matrix from_string_coefficients(const Vector& coeffs, const OperatorBasis& basis, int n);

// Basis labels on n sites as text, e.g. "XIZ" for q = 2.
std::string string_label(std::int64_t index, int q, int n);

}  // namespace treelight
