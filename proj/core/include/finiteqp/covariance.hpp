#pragma once

#include "finiteqp/operators.hpp"
#include "finiteqp/states.hpp"

#include <span>

namespace finiteqp {

/// Hermitian covariance matrix Gamma = sym + i*skew with the non-symmetric
/// convention [Gamma]_jk = <A_j A_k> - <A_j><A_k>.
struct CovMatrix {
  int m = 0;
  Matrix entries;      // m x m Hermitian
  RealMatrix sym;      // Re Gamma, symmetric
  RealMatrix skew;     // Im Gamma, antisymmetric
  double trace = 0.0;
  double det = 0.0;
};

Complex covariance(const QuantumState& state, const HermitianOperator& a,
                   const HermitianOperator& b);

CovMatrix cov_matrix(const QuantumState& state,
                     std::span<const HermitianOperator> obs);

CovMatrix cov_matrix(const QuantumState& state, const HermitianOperator& a,
                     const HermitianOperator& b);

/// Var(A)Var(B) - (|<[A,B]>|^2 + |<{A,B}> - 2<A><B>|^2) / 4.
/// Equals det of the 2x2 covariance matrix; nonnegative up to tolerance.
double rs_inequality_gap(const QuantumState& state, const HermitianOperator& a,
                         const HermitianOperator& b);

/// L Gamma L^T for a real m' x m matrix L.
CovMatrix transform(const CovMatrix& cov, const RealMatrix& l);

/// Gamma(p rho1 + (1-p) rho2) - p Gamma(rho1) - (1-p) Gamma(rho2), PSD.
RealMatrix concavity_gap(const QuantumState& rho1, const QuantumState& rho2,
                         double p, std::span<const HermitianOperator> obs);

namespace detail {
CovMatrix finalize_cov(const Matrix& gamma);
}

}  // namespace finiteqp
