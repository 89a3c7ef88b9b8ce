#include "treelight/gate_algebra.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <mutex>

#include "treelight/pauli_algebra.hpp"
#include "treelight/rng.hpp"

namespace treelight {

namespace {

void check_leg(int leg, int z, const char* what) {
  if (leg < 1 || leg > z)
    throw InvalidArgument(std::string(what) + ": leg " + std::to_string(leg) + " out of range 1.." +
                          std::to_string(z));
}

struct LegMap {
  std::int64_t rows = 0;
  std::int64_t cols = 0;
  // target[r + c * dim] = flat (row, col) in the reshuffled matrix, column-major.
  std::vector<std::int64_t> target;
};

const LegMap& leg_map(int q, int z, std::span<const int> row_legs) {
  static std::mutex mutex;
  static std::map<std::vector<int>, LegMap> cache;
  std::vector<int> key{q, z};
  key.insert(key.end(), row_legs.begin(), row_legs.end());
  std::lock_guard lock(mutex);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  std::vector<int> col_legs;
  for (int leg = 0; leg < 2 * z; ++leg)
    if (std::find(row_legs.begin(), row_legs.end(), leg) == row_legs.end()) col_legs.push_back(leg);
  if (col_legs.size() + row_legs.size() != static_cast<std::size_t>(2 * z))
    throw InvalidArgument("reshuffle: repeated or out-of-range leg");

  const std::int64_t dim = ipow(q, z);
  LegMap m;
  m.rows = ipow(q, static_cast<int>(row_legs.size()));
  m.cols = ipow(q, static_cast<int>(col_legs.size()));
  m.target.resize(dim * dim);
  std::vector<int> legs(2 * z);
  for (std::int64_t c = 0; c < dim; ++c)
    for (std::int64_t r = 0; r < dim; ++r) {
      auto out = digits(r, q, z);
      auto in = digits(c, q, z);
      std::copy(out.begin(), out.end(), legs.begin());
      std::copy(in.begin(), in.end(), legs.begin() + z);
      std::int64_t row = 0, col = 0;
      for (int leg : row_legs) row = row * q + legs[leg];
      for (int leg : col_legs) col = col * q + legs[leg];
      m.target[r + c * dim] = row + col * m.rows;
    }
  return cache.emplace(std::move(key), std::move(m)).first->second;
}

std::vector<int> tree_row_legs(int z, int p) {
  std::vector<int> legs;
  for (int k = 0; k < z; ++k)
    if (k != p - 1) legs.push_back(k);
  for (int k = 0; k < z; ++k)
    if (k != p - 1) legs.push_back(z + k);
  return legs;
}

std::vector<int> swap_row_legs(int z, int i, int j) {
  std::vector<int> legs{i - 1};
  for (int k = 0; k < z; ++k)
    if (k != j - 1) legs.push_back(z + k);
  return legs;
}

}  // namespace

Matrix unshuffle_legs(const Matrix& r, int q, int z, std::span<const int> row_legs) {
  const LegMap& m = leg_map(q, z, row_legs);
  if (r.rows() != m.rows || r.cols() != m.cols) throw InvalidArgument("unshuffle: shape mismatch");
  const std::int64_t dim = ipow(q, z);
  Matrix u(dim, dim);
  const cplx* src = r.data();
  cplx* dst = u.data();
  for (std::int64_t k = 0; k < dim * dim; ++k) dst[k] = src[m.target[k]];
  return u;
}

namespace {

double isometry_residual(const Matrix& m, double scale_sq) {
  const Eigen::Index n = m.cols();
  return (m.adjoint() * m - scale_sq * Matrix::Identity(n, n)).norm();
}

PredicateReport finish(PredicateReport r) {
  r.passed = r.max_residual() < r.tolerance;
  return r;
}

}  // namespace

Gate::Gate(int q, int z, Matrix matrix) : q_(q), z_(z), matrix_(std::move(matrix)) {
  if (q < 2 || z < 1) throw InvalidArgument("Gate: need q >= 2 and z >= 1");
  const std::int64_t d = ipow(q, z);
  if (matrix_.rows() != d || matrix_.cols() != d)
    throw InvalidArgument("Gate: matrix is " + std::to_string(matrix_.rows()) + "x" +
                          std::to_string(matrix_.cols()) + ", expected q^z = " + std::to_string(d));
  if (!matrix_.allFinite()) throw InvalidArgument("Gate: non-finite entries");
}

double PredicateReport::max_residual() const {
  double m = 0;
  for (double r : residuals) m = std::max(m, r);
  return m;
}

Matrix reshuffle_legs(const Matrix& u, int q, int z, std::span<const int> row_legs) {
  const LegMap& m = leg_map(q, z, row_legs);
  const std::int64_t dim = ipow(q, z);
  if (u.rows() != dim || u.cols() != dim) throw InvalidArgument("reshuffle: gate shape mismatch");
  Matrix r(m.rows, m.cols);
  const cplx* src = u.data();
  cplx* dst = r.data();
  for (std::int64_t k = 0; k < dim * dim; ++k) dst[m.target[k]] = src[k];
  return r;
}

Matrix reshuffle_tree(const Matrix& u, int q, int z, int p) {
  check_leg(p, z, "reshuffle_tree");
  return reshuffle_legs(u, q, z, tree_row_legs(z, p));
}

Matrix unshuffle_tree(const Matrix& r, int q, int z, int p) {
  check_leg(p, z, "unshuffle_tree");
  return unshuffle_legs(r, q, z, tree_row_legs(z, p));
}

Matrix reshuffle_swap(const Matrix& u, int q, int z, int i, int j) {
  check_leg(i, z, "reshuffle_swap");
  check_leg(j, z, "reshuffle_swap");
  if (i == j) throw InvalidArgument("max-velocity direction needs i != j");
  return reshuffle_legs(u, q, z, swap_row_legs(z, i, j));
}

Matrix unshuffle_swap(const Matrix& w, int q, int z, int i, int j) {
  check_leg(i, z, "unshuffle_swap");
  check_leg(j, z, "unshuffle_swap");
  if (i == j) throw InvalidArgument("max-velocity direction needs i != j");
  return unshuffle_legs(w, q, z, swap_row_legs(z, i, j));
}

PredicateReport is_unitary(const Gate& u, double tol) {
  PredicateReport r;
  r.tolerance = tol;
  r.labels = {"unitary"};
  r.residuals = {isometry_residual(u.matrix(), 1.0)};
  return finish(r);
}

PredicateReport is_tree_unitary(const Gate& u, double tol) {
  PredicateReport r = is_unitary(u, tol);
  const double scale_sq = std::pow(double(u.q()), u.z() - 2);
  for (int p = 1; p <= u.z(); ++p) {
    r.labels.push_back("leg" + std::to_string(p));
    r.residuals.push_back(isometry_residual(reshuffle_tree(u.matrix(), u.q(), u.z(), p), scale_sq));
  }
  return finish(r);
}

PredicateReport is_max_velocity(const Gate& u, int i, int j, double tol) {
  PredicateReport r;
  r.tolerance = tol;
  r.labels = {std::to_string(i) + "->" + std::to_string(j)};
  r.residuals = {isometry_residual(reshuffle_swap(u.matrix(), u.q(), u.z(), i, j), 1.0)};
  return finish(r);
}

PredicateReport is_perfect_tensor(const Gate& u, double tol) {
  PredicateReport r;
  r.tolerance = tol;
  const int z = u.z();
  // Balanced subsets containing leg 0; the complement gives the same check.
  for (std::uint32_t mask = 0; mask < (1u << (2 * z)); ++mask) {
    if (!(mask & 1u) || std::popcount(mask) != z) continue;
    std::vector<int> rows;
    std::string label;
    for (int leg = 0; leg < 2 * z; ++leg)
      if (mask & (1u << leg)) {
        rows.push_back(leg);
        label += (leg < z ? "o" : "i") + std::to_string(leg % z + 1);
      }
    r.labels.push_back(label);
    r.residuals.push_back(isometry_residual(reshuffle_legs(u.matrix(), u.q(), z, rows), 1.0));
  }
  return finish(r);
}

PredicateReport is_triunitary(const Gate& u, double tol) {
  if (u.z() != 3) throw InvalidArgument("is_triunitary: needs z = 3");
  PredicateReport r;
  r.tolerance = tol;
  // Hexagon order in1, in2, in3, out3, out2, out1; outputs are legs 0..2.
  const std::vector<std::vector<int>> cuts{{3, 4, 5}, {4, 5, 2}, {5, 2, 1}};
  const std::vector<std::string> names{"in123", "in23-out3", "in3-out32"};
  for (std::size_t k = 0; k < cuts.size(); ++k) {
    r.labels.push_back(names[k]);
    r.residuals.push_back(isometry_residual(reshuffle_legs(u.matrix(), u.q(), 3, cuts[k]), 1.0));
  }
  return finish(r);
}

std::string SignedPauli::label() const {
  std::string s = negative ? "-" : "+";
  for (std::size_t k = 0; k < x.size(); ++k) s += "IZXY"[x[k] * 2 + z[k]];
  return s;
}

Matrix pauli_matrix(const SignedPauli& p) {
  const OperatorBasis basis = build_basis(2);
  Matrix m = Matrix::Identity(1, 1);
  for (std::size_t k = 0; k < p.x.size(); ++k) {
    const int a = p.x[k] ? (p.z[k] ? 2 : 1) : (p.z[k] ? 3 : 0);
    m = kron(m, basis[a]);
  }
  return p.negative ? Matrix(-m) : m;
}

std::optional<CliffordMap> is_clifford(const Gate& u, double tol) {
  if (u.q() != 2) throw Unsupported("is_clifford: only q = 2 is supported");
  const int z = u.z();
  const OperatorBasis basis = build_basis(2);
  const Matrix& U = u.matrix();
  auto image = [&](const Matrix& generator) -> std::optional<SignedPauli> {
    const Vector c = string_coefficients(U.adjoint() * generator * U, basis, z);
    Eigen::Index best = 0;
    c.cwiseAbs().maxCoeff(&best);
    for (Eigen::Index k = 0; k < c.size(); ++k) {
      const double mag = std::abs(c[k]);
      const double expected = k == best ? 1.0 : 0.0;
      if (std::abs(mag - expected) > tol) return std::nullopt;
    }
    if (std::abs(c[best].imag()) > tol) return std::nullopt;
    SignedPauli p;
    p.negative = c[best].real() < 0;
    for (int a : digits(best, 4, z)) {
      p.x.push_back(a == 1 || a == 2);
      p.z.push_back(a == 2 || a == 3);
    }
    return p;
  };
  CliffordMap map;
  map.z = z;
  for (int k = 1; k <= z; ++k) {
    auto xi = image(embed_on_leg(basis[1], k, z));
    auto zi = image(embed_on_leg(basis[3], k, z));
    if (!xi || !zi) return std::nullopt;
    map.x_images.push_back(*xi);
    map.z_images.push_back(*zi);
  }
  return map;
}

namespace {

Gate ising_kick_gate(const KimParams& p, const std::vector<std::pair<int, int>>& bonds) {
  const int z = p.z;
  if (z < 2) throw InvalidArgument("kim_gate: z must be >= 2");
  std::vector<double> h = p.h;
  if (h.empty()) h.assign(z, 0.0);
  if (static_cast<int>(h.size()) != z) throw InvalidArgument("kim_gate: need z field values");
  const std::int64_t dim = ipow(2, z);
  // Diagonal Ising layer: product of exp(-iJ Z_i Z_j - i(h_i Z_i + h_j Z_j)/2).
  Vector ising(dim);
  for (std::int64_t s = 0; s < dim; ++s) {
    const auto bits = digits(s, 2, z);
    double phase = 0;
    for (auto [i, j] : bonds) {
      const double zi = 1 - 2 * bits[i], zj = 1 - 2 * bits[j];
      phase += p.J * zi * zj + (h[i] * zi + h[j] * zj) / 2;
    }
    ising[s] = std::polar(1.0, -phase);
  }
  Matrix kick1(2, 2);
  kick1 << std::cos(p.b), -std::sin(p.b), std::sin(p.b), std::cos(p.b);  // exp(-ib Y)
  Matrix kick = Matrix::Identity(1, 1);
  for (int k = 0; k < z; ++k) kick = kron(kick, kick1);
  return Gate(2, z, ising.asDiagonal() * kick * ising.asDiagonal());
}

}  // namespace

Gate kim_gate(const KimParams& p) {
  std::vector<std::pair<int, int>> bonds;
  for (int k = 1; k < p.z; ++k) bonds.emplace_back(0, k);
  return ising_kick_gate(p, bonds);
}

Gate hadamard_construction_gate(const KimParams& p) {
  std::vector<std::pair<int, int>> bonds;
  for (int i = 0; i < p.z; ++i)
    for (int j = i + 1; j < p.z; ++j) bonds.emplace_back(i, j);
  return ising_kick_gate(p, bonds);
}

Gate swap_gate(int q) {
  const std::vector<int> perm{1, 0};
  return permutation_gate(q, perm);
}

Gate permutation_gate(int q, std::span<const int> perm) {
  const int z = static_cast<int>(perm.size());
  const std::int64_t dim = ipow(q, z);
  Matrix m = Matrix::Zero(dim, dim);
  for (std::int64_t c = 0; c < dim; ++c) {
    const auto in = digits(c, q, z);
    std::vector<int> out(z);
    for (int k = 0; k < z; ++k) out[k] = in[perm[k]];
    m(compose(out, q), c) = 1.0;
  }
  return Gate(q, z, m);
}

Gate embed_gate(const Matrix& v, int q, int z, std::span<const int> legs) {
  const int k = static_cast<int>(legs.size());
  if (v.rows() != ipow(q, k) || v.cols() != v.rows()) throw InvalidArgument("embed_gate: shape mismatch");
  for (int leg : legs) check_leg(leg, z, "embed_gate");
  const std::int64_t dim = ipow(q, z);
  Matrix m = Matrix::Zero(dim, dim);
  for (std::int64_t c = 0; c < dim; ++c) {
    const auto in = digits(c, q, z);
    std::vector<int> sub(k);
    for (int a = 0; a < k; ++a) sub[a] = in[legs[a] - 1];
    const std::int64_t sc = compose(sub, q);
    for (std::int64_t sr = 0; sr < v.rows(); ++sr) {
      if (v(sr, sc) == cplx(0)) continue;
      auto out = in;
      const auto od = digits(sr, q, k);
      for (int a = 0; a < k; ++a) out[legs[a] - 1] = od[a];
      m(compose(out, q), c) += v(sr, sc);
    }
  }
  return Gate(q, z, m);
}

Gate compose(const Gate& later, const Gate& earlier) {
  if (later.q() != earlier.q() || later.z() != earlier.z()) throw InvalidArgument("compose: shape mismatch");
  return Gate(later.q(), later.z(), later.matrix() * earlier.matrix());
}

namespace {

void require(const PredicateReport& r, const std::string& what) {
  if (!r.passed)
    throw InvalidArgument(what + " (residual " + std::to_string(r.max_residual()) + ")");
}

}  // namespace

Gate dual_pair(const Gate& v1, const Gate& v2) {
  if (v1.z() != 2 || v2.z() != 2 || v1.q() != v2.q()) throw InvalidArgument("dual_pair: need two 2-site gates");
  require(is_tree_unitary(v1, 1e-9), "dual_pair: first gate is not dual-unitary");
  require(is_tree_unitary(v2, 1e-9), "dual_pair: second gate is not dual-unitary");
  const int q = v1.q();
  const std::vector<int> first{1, 2}, second{1, 3};
  return compose(embed_gate(v2.matrix(), q, 3, second), embed_gate(v1.matrix(), q, 3, first));
}

Gate controlled_swap(int z, std::span<const Matrix> targets) {
  if (z < 2) throw InvalidArgument("controlled_swap: z must be >= 2");
  if (targets.empty()) throw InvalidArgument("controlled_swap: need at least one target unitary");
  const int q = static_cast<int>(targets.front().rows());
  const std::int64_t branches = ipow(q, z - 1);
  if (static_cast<std::int64_t>(targets.size()) != branches)
    throw InvalidArgument("controlled_swap: need q^(z-1) target unitaries");
  for (const auto& t : targets)
    require(is_unitary(Gate(q, 1, t), 1e-9), "controlled_swap: target is not unitary");
  const std::int64_t dim = ipow(q, z);
  // Controls on legs 2..z select the unitary applied to leg 1.
  Matrix c = Matrix::Zero(dim, dim);
  for (std::int64_t ctrl = 0; ctrl < branches; ++ctrl)
    for (int a = 0; a < q; ++a)
      for (int b = 0; b < q; ++b) c(a * branches + ctrl, b * branches + ctrl) = targets[ctrl](a, b);
  std::vector<int> perm(z);
  for (int k = 0; k < z; ++k) perm[k] = (k + z - 1) % z;
  return compose(permutation_gate(q, perm), Gate(q, z, c));
}

Gate controlled_swap(int z) {
  // Fixed Clifford choice for q = 2: X when all controls are open (|0>), identity otherwise.
  const std::int64_t branches = ipow(2, z - 1);
  std::vector<Matrix> targets(branches, Matrix::Identity(2, 2));
  targets[0] << 0, 1, 1, 0;
  return controlled_swap(z, targets);
}

Gate triunitary_derived(const Gate& tri, SwapChoice choice) {
  require(is_triunitary(tri, 1e-9), "triunitary_derived: input is not tri-unitary");
  const std::vector<int> legs = choice == SwapChoice::Legs12 ? std::vector<int>{1, 2} : std::vector<int>{2, 3};
  // The SWAP acts on the inputs, before the tri-unitary gate.
  return compose(tri, embed_gate(swap_gate(tri.q()).matrix(), tri.q(), 3, legs));
}

Gate dress(const Gate& u, std::span<const Matrix> out_sites, std::span<const Matrix> in_sites) {
  Matrix out = Matrix::Identity(1, 1), in = Matrix::Identity(1, 1);
  for (int k = 0; k < u.z(); ++k) {
    out = kron(out, out_sites.empty() ? Matrix::Identity(u.q(), u.q()) : out_sites[k]);
    in = kron(in, in_sites.empty() ? Matrix::Identity(u.q(), u.q()) : in_sites[k]);
  }
  return Gate(u.q(), u.z(), out * u.matrix() * in);
}

Gate dress_two_site(const Gate& u, const Matrix& v, int leg_a, int leg_b) {
  const std::vector<int> legs{leg_a, leg_b};
  return compose(embed_gate(v, u.q(), u.z(), legs), u);
}

Matrix random_ginibre(int rows, int cols, std::uint64_t seed) {
  Rng rng(seed);
  Matrix m(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) {
      const double re = rng.normal(), im = rng.normal();
      m(r, c) = cplx(re, im) / std::sqrt(2.0);
    }
  return m;
}

Matrix random_unitary(int dim, std::uint64_t seed) {
  const Matrix g = random_ginibre(dim, dim, seed);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR();
  for (int k = 0; k < dim; ++k) {
    const cplx d = r(k, k);
    q.col(k) *= std::abs(d) > 0 ? d / std::abs(d) : cplx(1);
  }
  return q;
}

}  // namespace treelight
