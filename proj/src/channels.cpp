#include "treelight/channels.hpp"

#include <cmath>
#include <map>

namespace treelight {

namespace {

void check_legs(const Gate& u, int e, int ee) {
  if (e < 1 || e > u.z() || ee < 1 || ee > u.z())
    throw InvalidArgument("channel legs out of range 1.." + std::to_string(u.z()));
}

// Composite index of (value x on leg ee, remaining legs k in order).
std::vector<std::vector<std::int64_t>> split_index(int q, int z, int ee) {
  const std::int64_t rest = ipow(q, z - 1);
  std::vector<std::vector<std::int64_t>> idx(q, std::vector<std::int64_t>(rest));
  for (int x = 0; x < q; ++x)
    for (std::int64_t k = 0; k < rest; ++k) {
      auto d = digits(k, q, z - 1);
      d.insert(d.begin() + (ee - 1), x);
      idx[x][k] = compose(d, q);
    }
  return idx;
}

CorrChannel build_corr(const Gate& u, int e, int ee, const OperatorBasis& basis) {
  check_legs(u, e, ee);
  if (basis.q != u.q()) throw InvalidArgument("channel: basis and gate have different q");
  const int q = u.q(), z = u.z(), n = basis.size();
  const double norm = std::pow(double(q), z - 1);
  CorrChannel ch{q, z, e, ee, Matrix(n, n)};
  for (int a = 0; a < n; ++a) {
    const Matrix y = u.matrix().adjoint() * embed_on_leg(basis[a], e, z) * u.matrix();
    const Matrix reduced = partial_trace_keep(y, q, z, ee) / norm;
    for (int b = 0; b < n; ++b) ch.matrix(b, a) = overlap(basis[b], reduced);
  }
  return ch;
}

OtocChannel build_otoc(const Gate& u, int e, int ee, const OperatorBasis& basis) {
  check_legs(u, e, ee);
  if (basis.q != u.q()) throw InvalidArgument("channel: basis and gate have different q");
  const int q = u.q(), z = u.z(), n = basis.size();
  const std::int64_t rest = ipow(q, z - 1);
  const double norm = std::pow(double(q), z - 1);
  const auto idx = split_index(q, z, ee);
  std::vector<Matrix> conj(n);
  for (int a = 0; a < n; ++a) conj[a] = u.matrix().adjoint() * embed_on_leg(basis[a], e, z) * u.matrix();
  OtocChannel ch{q, z, e, ee, Matrix::Zero(n * n, n * n)};
  // Z[(r1,r2),(c1,c2)] = sum_{k,l} Y1[(r1,k),(c1,l)] Y2[(r2,l),(c2,k)] / q^{z-1}
  std::vector<cplx> zmat(static_cast<std::size_t>(q) * q * q * q);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const Matrix& y1 = conj[a];
      const Matrix& y2 = conj[b];
      for (int r1 = 0; r1 < q; ++r1)
        for (int c1 = 0; c1 < q; ++c1)
          for (int r2 = 0; r2 < q; ++r2)
            for (int c2 = 0; c2 < q; ++c2) {
              cplx s = 0;
              for (std::int64_t k = 0; k < rest; ++k)
                for (std::int64_t l = 0; l < rest; ++l)
                  s += y1(idx[r1][k], idx[c1][l]) * y2(idx[r2][l], idx[c2][k]);
              zmat[((r1 * q + r2) * q + c1) * q + c2] = s / norm;
            }
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          cplx s = 0;
          for (int r1 = 0; r1 < q; ++r1)
            for (int c1 = 0; c1 < q; ++c1)
              for (int r2 = 0; r2 < q; ++r2)
                for (int c2 = 0; c2 < q; ++c2)
                  s += std::conj(basis[c](r1, c1)) * std::conj(basis[d](r2, c2)) *
                       zmat[((r1 * q + r2) * q + c1) * q + c2];
          ch.matrix(c * n + d, a * n + b) = s / double(q * q);
        }
    }
  return ch;
}

}  // namespace

CorrChannel correlation_channel(const Gate& u, int e, int ee, const OperatorBasis& basis) {
  if (e == ee) throw InvalidArgument("correlation_channel: e == ee never occurs on the light cone");
  return build_corr(u, e, ee, basis);
}

CorrChannel wait_channel(const Gate& u, int e, const OperatorBasis& basis) { return build_corr(u, e, e, basis); }

OtocChannel otoc_channel(const Gate& u, int e, int ee, const OperatorBasis& basis) {
  if (e == ee) throw InvalidArgument("otoc_channel: e == ee never occurs on the light cone");
  return build_otoc(u, e, ee, basis);
}

OtocChannel otoc_wait_channel(const Gate& u, int e, const OperatorBasis& basis) {
  return build_otoc(u, e, e, basis);
}

Vector otoc_ket(const OperatorVector& sigma) {
  const Eigen::Index n = sigma.coefficients.size();
  Vector v(n * n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) v[a * n + b] = sigma.coefficients[a] * sigma.coefficients[b];
  return v;
}

Eigen::RowVectorXcd otoc_bra(const Matrix& sigma, const OperatorBasis& basis) {
  const int n = basis.size();
  Eigen::RowVectorXcd r(n * n);
  for (int c = 0; c < n; ++c)
    for (int d = 0; d < n; ++d) r[c * n + d] = (sigma * basis[c] * sigma * basis[d]).trace() / double(basis.q);
  return r;
}

Vector replica_R(const OperatorBasis& basis) {
  Vector v = Vector::Zero(basis.size() * basis.size());
  v[0] = 1.0;
  return v;
}

Eigen::RowVectorXcd replica_L(const OperatorBasis& basis) {
  const int n = basis.size();
  Eigen::RowVectorXcd r(n * n);
  for (int c = 0; c < n; ++c)
    for (int d = 0; d < n; ++d) r[c * n + d] = (basis[c] * basis[d]).trace() / double(basis.q);
  return r;
}

std::vector<ChannelStep> steps_for_path(const LightConePath& path, const Gate& gate) {
  std::vector<ChannelStep> out;
  for (const auto& s : path.steps) {
    if (s.in_leg == 0)
      out.push_back({nullptr, 0, 0});
    else
      out.push_back({&gate, s.in_leg, s.out_leg});
  }
  return out;
}

namespace {

template <class Channel, class Build>
class ChannelCache {
 public:
  explicit ChannelCache(Build build) : build_(build) {}
  const Matrix& get(const ChannelStep& s) {
    auto key = std::make_tuple(s.gate, s.e, s.ee);
    auto it = cache_.find(key);
    if (it == cache_.end()) it = cache_.emplace(key, build_(*s.gate, s.e, s.ee).matrix).first;
    return it->second;
  }

 private:
  Build build_;
  std::map<std::tuple<const Gate*, int, int>, Matrix> cache_;
};

}  // namespace

CorrelatorSeries correlator_path(std::span<const ChannelStep> steps, const OperatorVector& alpha,
                                 const OperatorVector& beta, const OperatorBasis& basis) {
  if (alpha.q != basis.q || beta.q != basis.q) throw InvalidArgument("correlator_path: mismatched q");
  auto build = [&basis](const Gate& g, int e, int ee) { return build_corr(g, e, ee, basis); };
  ChannelCache<CorrChannel, decltype(build)> cache(build);
  CorrelatorSeries out;
  Vector v = alpha.coefficients;
  out.values.push_back(beta.coefficients.dot(v));
  for (const auto& s : steps) {
    if (s.gate) v = cache.get(s) * v;
    out.values.push_back(beta.coefficients.dot(v));
  }
  return out;
}

OtocSeries otoc_path(std::span<const ChannelStep> steps, const OperatorVector& alpha, const OperatorVector& beta,
                     const OperatorBasis& basis) {
  if (alpha.q != basis.q || beta.q != basis.q) throw InvalidArgument("otoc_path: mismatched q");
  auto build = [&basis](const Gate& g, int e, int ee) { return build_otoc(g, e, ee, basis); };
  ChannelCache<OtocChannel, decltype(build)> cache(build);
  const auto bra = otoc_bra(devectorize(basis, beta), basis);
  OtocSeries out;
  Vector v = otoc_ket(alpha);
  out.values.push_back((bra * v)(0).real());
  for (const auto& s : steps) {
    if (s.gate) v = cache.get(s) * v;
    out.values.push_back((bra * v)(0).real());
  }
  return out;
}

CorrelatorSeries correlator_power(const CorrChannel& m, const OperatorVector& alpha, const OperatorVector& beta,
                                  int steps) {
  CorrelatorSeries out;
  Vector v = alpha.coefficients;
  out.values.push_back(beta.coefficients.dot(v));
  for (int t = 0; t < steps; ++t) {
    v = m.matrix * v;
    out.values.push_back(beta.coefficients.dot(v));
  }
  return out;
}

OtocSeries otoc_power(const OtocChannel& t, const OperatorVector& alpha, const OperatorVector& beta,
                      const OperatorBasis& basis, int steps) {
  const auto bra = otoc_bra(devectorize(basis, beta), basis);
  OtocSeries out;
  Vector v = otoc_ket(alpha);
  out.values.push_back((bra * v)(0).real());
  for (int k = 0; k < steps; ++k) {
    v = t.matrix * v;
    out.values.push_back((bra * v)(0).real());
  }
  return out;
}

std::vector<cplx> eigenvalues(const Matrix& m) {
  Eigen::ComplexEigenSolver<Matrix> es(m, false);
  const auto& ev = es.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

int count_unit_eigenvalues(const Matrix& m, double tol) {
  int n = 0;
  for (const auto& l : eigenvalues(m))
    if (std::abs(l) > 1 - tol) ++n;
  return n;
}

OtocAsymptote otoc_asymptote(const OtocChannel& t, const OperatorVector& alpha, const OperatorVector& beta,
                             const OperatorBasis& basis) {
  const auto bra = otoc_bra(devectorize(basis, beta), basis);
  const Vector ket = otoc_ket(alpha);
  Eigen::ComplexEigenSolver<Matrix> es(t.matrix);
  const Matrix& vecs = es.eigenvectors();
  const auto& vals = es.eigenvalues();
  OtocAsymptote out;
  bool oscillating = false;
  for (Eigen::Index k = 0; k < vals.size(); ++k)
    if (std::abs(vals[k]) > 1 - 1e-8) {
      ++out.unit_eigenvalues;
      if (std::abs(vals[k] - cplx(1)) > 1e-8) oscillating = true;
    }
  Eigen::JacobiSVD<Matrix> svd(vecs);
  const auto& s = svd.singularValues();
  const double cond = s[0] / s[s.size() - 1];
  if (oscillating || !std::isfinite(cond) || cond > 1e10) {
    out.fallback = true;
    Vector v = ket;
    for (int k = 0; k < 200; ++k) v = t.matrix * v;
    out.value = (bra * v)(0).real();
    return out;
  }
  const Matrix inv = vecs.inverse();
  Vector coeff = inv * ket;
  for (Eigen::Index k = 0; k < vals.size(); ++k)
    if (std::abs(vals[k]) <= 1 - 1e-8) coeff[k] = 0;
  out.value = (bra * (vecs * coeff))(0).real();
  return out;
}

TwoSiteChannels twosite_channels(const Gate& v, const OperatorBasis& basis) {
  if (v.z() != 2) throw InvalidArgument("twosite_channels: need a 2-site gate");
  if (!is_unitary(v, 1e-9).passed) throw InvalidArgument("twosite_channels: gate is not unitary");
  return {build_corr(v, 1, 2, basis), build_corr(v, 1, 1, basis), build_otoc(v, 1, 2, basis),
          build_otoc(v, 1, 1, basis)};
}

std::vector<ChannelStep> steps_for_twosite_path(const ZColoring& c, std::span<const Vertex> path, int offset,
                                                const Gate& v) {
  const auto& tree = c.tree();
  const int z = tree.z();
  std::vector<ChannelStep> out;
  std::size_t pos = 0;
  for (int layer = 1; pos + 1 < path.size(); ++layer) {
    const Vertex u = path[pos];
    const Vertex w = c.neighbor_by_color(u, (offset + layer - 1) % z);
    if (w < 0) {
      out.push_back({nullptr, 0, 0});
      continue;
    }
    const int leg_u = tree.parent(w) == u ? 1 : 2;
    if (w == path[pos + 1]) {
      out.push_back({&v, leg_u, 3 - leg_u});
      ++pos;
    } else {
      out.push_back({&v, leg_u, leg_u});
    }
  }
  return out;
}

}  // namespace treelight
