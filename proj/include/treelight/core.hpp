#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace treelight {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kDefaultTol = 1e-10;

// Error taxonomy. The CLI maps these onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class InvalidArgument : public Error {
 public:
  using Error::Error;
};
class Unsupported : public Error {
 public:
  using Error::Error;
};
class CapExceeded : public Error {
 public:
  using Error::Error;
};
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

inline std::int64_t ipow(std::int64_t base, int exp) {
  std::int64_t r = 1;
  for (int k = 0; k < exp; ++k) r *= base;
  return r;
}

// Digits of a composite index, site 0 most significant.
inline std::vector<int> digits(std::int64_t index, int q, int n) {
  std::vector<int> d(n);
  for (int k = n - 1; k >= 0; --k) {
    d[k] = static_cast<int>(index % q);
    index /= q;
  }
  return d;
}

inline std::int64_t compose(const std::vector<int>& d, int q) {
  std::int64_t idx = 0;
  for (int v : d) idx = idx * q + v;
  return idx;
}

}  // namespace treelight

namespace treelight {

class DegeneratePolar : public NumericalFailure {
 public:
  DegeneratePolar(const std::string& what, double sigma_min)
      : NumericalFailure(what), smallest_singular_value(sigma_min) {}
  double smallest_singular_value;
};

class Diverged : public NumericalFailure {
 public:
  Diverged(const std::string& what, std::vector<double> residual_trace)
      : NumericalFailure(what), trace(std::move(residual_trace)) {}
  std::vector<double> trace;
};

class AmbiguousRank : public NumericalFailure {
 public:
  AmbiguousRank(const std::string& what, std::vector<double> singular_values)
      : NumericalFailure(what), spectrum(std::move(singular_values)) {}
  std::vector<double> spectrum;
};

}  // namespace treelight
