#pragma once

#include <span>

#include "treelight/gate_algebra.hpp"
#include "treelight/pauli_algebra.hpp"
#include "treelight/tree_geometry.hpp"

namespace treelight {

// Entries (sigma_b | M | sigma_a) over an OperatorBasis.
struct CorrChannel {
  int q = 2;
  int z = 3;
  int e = 1;
  int ee = 2;
  Matrix matrix;
};

// Doubled-replica channel over the basis sigma_a (x) sigma_b, flattened as
// a * q^2 + b.
struct OtocChannel {
  int q = 2;
  int z = 3;
  int e = 1;
  int ee = 2;
  Matrix matrix;
};

// M(s) = tr_{legs != ee}[U^dagger s(e) U] / q^{z-1}; requires e != ee.
CorrChannel correlation_channel(const Gate& u, int e, int ee, const OperatorBasis& basis);
// Same map with the operator read back on its own leg (a wait step).
CorrChannel wait_channel(const Gate& u, int e, const OperatorBasis& basis);

// Replica channel: both copies conjugated, legs != ee contracted crosswise
// (copy 1 column to copy 2 row and back), divided by q^{z-1}.
OtocChannel otoc_channel(const Gate& u, int e, int ee, const OperatorBasis& basis);
OtocChannel otoc_wait_channel(const Gate& u, int e, const OperatorBasis& basis);

// |s) = s (x) s as a doubled vector.
Vector otoc_ket(const OperatorVector& sigma);
// (s| : X -> tr(s X_1 s X_2)/q for X = X_1 (x) X_2.
Eigen::RowVectorXcd otoc_bra(const Matrix& sigma, const OperatorBasis& basis);
// |R) = identity (x) identity and (L| : X -> tr(X_1 X_2)/q.
Vector replica_R(const OperatorBasis& basis);
Eigen::RowVectorXcd replica_L(const OperatorBasis& basis);

// One step of a channel product. An identity step has no gate.
struct ChannelStep {
  const Gate* gate = nullptr;
  int e = 0;
  int ee = 0;
};

// Steps of a z-site tree path with one gate for every cluster.
std::vector<ChannelStep> steps_for_path(const LightConePath& path, const Gate& gate);

// Series over prefixes: entry tau is the value after tau steps (entry 0 is
// the overlap of the two operators).
struct CorrelatorSeries {
  std::vector<cplx> values;
};
struct OtocSeries {
  std::vector<double> values;
};

CorrelatorSeries correlator_path(std::span<const ChannelStep> steps, const OperatorVector& alpha,
                                 const OperatorVector& beta, const OperatorBasis& basis);
OtocSeries otoc_path(std::span<const ChannelStep> steps, const OperatorVector& alpha,
                     const OperatorVector& beta, const OperatorBasis& basis);

// Repeated single channel, t = 0..steps.
CorrelatorSeries correlator_power(const CorrChannel& m, const OperatorVector& alpha, const OperatorVector& beta,
                                  int steps);
OtocSeries otoc_power(const OtocChannel& t, const OperatorVector& alpha, const OperatorVector& beta,
                      const OperatorBasis& basis, int steps);

struct OtocAsymptote {
  double value = 0;
  int unit_eigenvalues = 0;
  bool fallback = false;  // long product used instead of the spectral projection
};
OtocAsymptote otoc_asymptote(const OtocChannel& t, const OperatorVector& alpha, const OperatorVector& beta,
                             const OperatorBasis& basis);

std::vector<cplx> eigenvalues(const Matrix& m);
int count_unit_eigenvalues(const Matrix& m, double tol = 1e-8);

// 2-site channels with the operator entering on leg 1: M1 hops to leg 2, M2
// stays on leg 1.
struct TwoSiteChannels {
  CorrChannel m1;
  CorrChannel m2;
  OtocChannel t1;
  OtocChannel t2;
};
TwoSiteChannels twosite_channels(const Gate& v, const OperatorBasis& basis);

// Steps of a path on a 2-site circuit. Every bond carries v with leg 1 on the
// vertex nearer the origin; waits use the bond of the active color at the
// current vertex (identity if there is none).
std::vector<ChannelStep> steps_for_twosite_path(const ZColoring& c, std::span<const Vertex> path, int offset,
                                                const Gate& v);

}  // namespace treelight
