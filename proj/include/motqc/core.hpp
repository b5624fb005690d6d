// core.hpp
#ifndef MOTQC_CORE_HPP
#define MOTQC_CORE_HPP

#include <complex>
#include <compare>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace motqc {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using SparseMatrix = Eigen::SparseMatrix<Complex>;

/// Topological charge, referenced by its index in the owning model.
/// Index 0 is always the vacuum.
struct Charge {
  int index = 0;
  friend constexpr auto operator<=>(Charge, Charge) = default;
};

inline constexpr Charge kVacuum{0};

// Errors. Everything derives from Error so callers can catch one type.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnknownCharge : Error {
  using Error::Error;
};
struct InvalidArgument : Error {
  using Error::Error;
};
struct ModelError : Error {
  using Error::Error;
};
struct ParseError : Error {
  using Error::Error;
};
struct BasisMismatch : Error {
  using Error::Error;
};
struct ZeroProbabilityOutcome : Error {
  using Error::Error;
};
struct MaxAttemptsExceeded : Error {
  using Error::Error;
};
struct NotPhaseEquivalent : Error {
  using Error::Error;
};
struct PreconditionViolation : Error {
  using Error::Error;
};

/// Largest entry of |M M^† - 1|.
template <typename Derived>
double unitarity_residual(const Eigen::MatrixBase<Derived>& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  using Scalar = typename Derived::Scalar;
  const auto n = m.rows();
  if (n == 0) return 0.0;
  return (m * m.adjoint() - Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Identity(n, n))
      .cwiseAbs()
      .maxCoeff();
}

}  // namespace motqc

#endif  // MOTQC_CORE_HPP
