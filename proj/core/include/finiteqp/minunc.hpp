#pragma once

#include "finiteqp/operators.hpp"
#include "finiteqp/states.hpp"

#include <vector>

namespace finiteqp {

/// Eigenpair of L(lambda) = lambda*A + i*B together with the covariance data
/// of its state. Every accepted solution has det Gamma = 0 for the pair
/// (A, B): Var(A) = <C>/Re lambda, Var(B) = |lambda|^2 Var(A),
/// Cov(A, B) = -<C> Im lambda / Re lambda, with C = -(i/2)[A, B].
struct MinUncSolution {
  Complex lambda;
  Complex eigenvalue_z;
  QuantumState state;
  double var_a = 0.0;
  double var_b = 0.0;
  double cov_ab = 0.0;
  double commutator_expectation = 0.0;
  double residual = 0.0;
};

struct MinUncReport {
  std::vector<MinUncSolution> solutions;
  /// True when fewer than dim independent eigenvectors pass the residual
  /// test (Jordan blocks; L(1) = Q + iP at d = 3 is nilpotent).
  bool defective = false;
  /// Candidates rejected because <C> Re lambda < 0.
  int discarded_negative_commutator = 0;
};

/// All eigenpairs of the non-normal matrix lambda*A + i*B, each polished by
/// one inverse-iteration step and accepted when the eigen-residual is below
/// 1e-9. Requires Re lambda > 0; the Re lambda <= 0 boundary cases are the
/// eigenstates of A or B and are not produced here.
MinUncReport solve_minunc(const HermitianOperator& a,
                          const HermitianOperator& b, Complex lambda);

/// || lambda (A - <A>) psi + i (B - <B>) psi ||: distance of the state from
/// the parallelism condition defining the saturating family.
double verify_parallelism(const HermitianOperator& a,
                          const HermitianOperator& b, Complex lambda,
                          const QuantumState& state);

}  // namespace finiteqp
