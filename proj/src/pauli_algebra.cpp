#include "treelight/pauli_algebra.hpp"

#include <cmath>

namespace treelight {

namespace {

// Multiply every fibre along one axis of a flat tensor by m.
// The axis has extent m.cols() and the given stride.
void apply_axis(Vector& data, std::int64_t stride, const Matrix& m) {
  const std::int64_t d = m.cols();
  const std::int64_t block = stride * d;
  Vector fibre(d);
  for (std::int64_t outer = 0; outer < data.size(); outer += block) {
    for (std::int64_t inner = 0; inner < stride; ++inner) {
      const std::int64_t base = outer + inner;
      for (std::int64_t a = 0; a < d; ++a) fibre[a] = data[base + a * stride];
      Vector out = m * fibre;
      for (std::int64_t a = 0; a < d; ++a) data[base + a * stride] = out[a];
    }
  }
}

std::int64_t spread(std::int64_t x, int q, int n) {
  const std::int64_t qq = static_cast<std::int64_t>(q) * q;
  std::int64_t out = 0, weight = 1;
  for (int k = 0; k < n; ++k) {
    out += (x % q) * weight;
    x /= q;
    weight *= qq;
  }
  return out;
}

}  // namespace

OperatorBasis build_basis(int q) {
  if (q < 2) throw InvalidArgument("build_basis: q must be >= 2, got " + std::to_string(q));
  OperatorBasis b;
  b.q = q;
  const double scale = std::sqrt(q / 2.0);
  b.elements.push_back(Matrix::Identity(q, q));
  for (int j = 0; j < q; ++j)
    for (int k = j + 1; k < q; ++k) {
      Matrix m = Matrix::Zero(q, q);
      m(j, k) = m(k, j) = scale;
      b.elements.push_back(m);
    }
  for (int j = 0; j < q; ++j)
    for (int k = j + 1; k < q; ++k) {
      Matrix m = Matrix::Zero(q, q);
      m(j, k) = cplx(0, -scale);
      m(k, j) = cplx(0, scale);
      b.elements.push_back(m);
    }
  for (int l = 1; l < q; ++l) {
    Matrix m = Matrix::Zero(q, q);
    const double norm = scale * std::sqrt(2.0 / (l * (l + 1.0)));
    for (int j = 0; j < l; ++j) m(j, j) = norm;
    m(l, l) = -l * norm;
    b.elements.push_back(m);
  }
  return b;
}

cplx overlap(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols())
    throw InvalidArgument("overlap: dimension mismatch");
  return (a.adjoint() * b).trace() / static_cast<double>(a.rows());
}

cplx overlap(const OperatorVector& a, const OperatorVector& b) {
  if (a.q != b.q || a.coefficients.size() != b.coefficients.size())
    throw InvalidArgument("overlap: dimension mismatch");
  return a.coefficients.dot(b.coefficients);
}

OperatorVector vectorize(const OperatorBasis& basis, const Matrix& op) {
  if (op.rows() != basis.q || op.cols() != basis.q)
    throw InvalidArgument("vectorize: operator is not q x q");
  OperatorVector v{basis.q, Vector(basis.size())};
  for (int a = 0; a < basis.size(); ++a) v.coefficients[a] = overlap(basis[a], op);
  return v;
}

Matrix devectorize(const OperatorBasis& basis, const OperatorVector& v) {
  if (v.q != basis.q || v.coefficients.size() != basis.size())
    throw InvalidArgument("devectorize: dimension mismatch");
  Matrix m = Matrix::Zero(basis.q, basis.q);
  for (int a = 0; a < basis.size(); ++a) m += v.coefficients[a] * basis[a];
  return m;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix identity(std::int64_t dim) { return Matrix::Identity(dim, dim); }

Matrix embed_on_leg(const Matrix& sigma, int e, int z) {
  if (z < 1 || e < 1 || e > z)
    throw InvalidArgument("embed_on_leg: leg " + std::to_string(e) + " out of range 1.." +
                          std::to_string(z));
  const std::int64_t q = sigma.rows();
  return kron(kron(identity(ipow(q, e - 1)), sigma), identity(ipow(q, z - e)));
}

Matrix partial_trace_keep(const Matrix& op, int q, int z, int keep_leg) {
  if (keep_leg < 1 || keep_leg > z) throw InvalidArgument("partial_trace_keep: leg out of range");
  const std::int64_t inner = ipow(q, z - keep_leg);
  const std::int64_t outer = ipow(q, keep_leg - 1);
  if (op.rows() != outer * q * inner) throw InvalidArgument("partial_trace_keep: dimension mismatch");
  Matrix out = Matrix::Zero(q, q);
  for (int a = 0; a < q; ++a)
    for (int b = 0; b < q; ++b) {
      cplx s = 0;
      for (std::int64_t o = 0; o < outer; ++o)
        for (std::int64_t i = 0; i < inner; ++i)
          s += op((o * q + a) * inner + i, (o * q + b) * inner + i);
      out(a, b) = s;
    }
  return out;
}

Vector string_coefficients(const Matrix& op, const OperatorBasis& basis, int n) {
  const int q = basis.q;
  const std::int64_t dim = ipow(q, n);
  if (op.rows() != dim || op.cols() != dim)
    throw InvalidArgument("string_coefficients: operator dimension is not q^n");
  const std::int64_t qq = static_cast<std::int64_t>(q) * q;
  std::vector<std::int64_t> sp(dim);
  for (std::int64_t x = 0; x < dim; ++x) sp[x] = spread(x, q, n);
  Vector data(dim * dim);
  for (std::int64_t c = 0; c < dim; ++c)
    for (std::int64_t r = 0; r < dim; ++r) data[q * sp[r] + sp[c]] = op(r, c);
  Matrix project(qq, qq);
  for (int a = 0; a < qq; ++a)
    for (int r = 0; r < q; ++r)
      for (int c = 0; c < q; ++c) project(a, r * q + c) = std::conj(basis[a](r, c)) / double(q);
  std::int64_t stride = 1;
  for (int k = n - 1; k >= 0; --k) {
    apply_axis(data, stride, project);
    stride *= qq;
  }
  return data;
}

Matrix from_string_coefficients(const Vector& coeffs, const OperatorBasis& basis, int n) {
  const int q = basis.q;
  const std::int64_t dim = ipow(q, n);
  const std::int64_t qq = static_cast<std::int64_t>(q) * q;
  if (coeffs.size() != dim * dim) throw InvalidArgument("from_string_coefficients: size mismatch");
  Vector data = coeffs;
  Matrix lift(qq, qq);
  for (int a = 0; a < qq; ++a)
    for (int r = 0; r < q; ++r)
      for (int c = 0; c < q; ++c) lift(r * q + c, a) = basis[a](r, c);
  std::int64_t stride = 1;
  for (int k = n - 1; k >= 0; --k) {
    apply_axis(data, stride, lift);
    stride *= qq;
  }
  std::vector<std::int64_t> sp(dim);
  for (std::int64_t x = 0; x < dim; ++x) sp[x] = spread(x, q, n);
  Matrix op(dim, dim);
  for (std::int64_t c = 0; c < dim; ++c)
    for (std::int64_t r = 0; r < dim; ++r) op(r, c) = data[q * sp[r] + sp[c]];
  return op;
}

std::string string_label(std::int64_t index, int q, int n) {
  static const char* pauli = "IXYZ";
  const auto d = digits(index, q * q, n);
  std::string s;
  for (int a : d) {
    if (q == 2) {
      s += pauli[a];
    } else {
      if (!s.empty()) s += '.';
      s += std::to_string(a);
    }
  }
  return s;
}

}  // namespace treelight
