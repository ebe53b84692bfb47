#pragma once

#include "finiteqp/operators.hpp"
#include "finiteqp/states.hpp"

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace finiteqp {

/// Measured observables commute with every generator on the probe, so their
/// moments carry no first-order signal.
class InsensitiveMeasurement : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Symmetric covariance of the measured set is numerically singular; a
/// different measured set is needed.
class IllConditionedMoments : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct AccuracyOptimum {
  double value = 0.0;
  QuantumState state;
  /// Largest |entry| of the skew covariance part on the optimal state.
  double saturability_residual = 0.0;
  bool converged = false;
};

struct AccuracyReport {
  int dim = 0;
  double a_d = 0.0;    // unconstrained trace bound optimum
  double a_d_c = 0.0;  // optimum with the weak-commutativity constraint
  double a_d_m = 0.0;  // second-moment measurement bound on the a_d state
  double gap_delta = 0.0;  // a_d_m - a_d
  QuantumState state_a_d;
  QuantumState state_a_d_c;
  double saturability_residual = 0.0;
  bool converged = false;
};

struct AccuracyScan {
  std::vector<AccuracyReport> reports;
  /// Least-squares slope of log(a_d) against log(d).
  double slope = 0.0;
};

struct MomSimResult {
  long long nu = 0;
  double empirical_mse = 0.0;
  double predicted_mse = 0.0;
  double ratio = 0.0;
};

/// Fisher information matrix of a pure probe under unitary generators:
/// 4 * (symmetric covariance of the generators). Rejects mixed inputs.
RealMatrix qfim_pure(const QuantumState& state,
                     std::span<const HermitianOperator> generators);

/// J with J_{mu nu} = -2i <[H_mu, H_nu]>; the bound 4 Gamma^s is attainable
/// by a single measurement only when J vanishes. For the pair (Q, P) this is
/// four times the skew covariance part.
RealMatrix saturability_matrix(const QuantumState& state,
                               std::span<const HermitianOperator> generators);

/// Minimizes (1/4) tr Gamma^s / det Gamma^s over pure states for the pair
/// (Q, P); with `constrained`, adds an escalating penalty driving the skew
/// part below 1e-6.
AccuracyOptimum optimize_a_d(const CanonicalPair& pair, int restarts,
                             std::uint64_t seed, bool constrained);

/// C^T Gamma^s(measured)^{-1} C with C_{ij} = -i <[M_i, H_j]>. When every
/// commutator expectation vanishes the result is the zero matrix and
/// *insensitive (if given) is set.
RealMatrix moment_matrix(const QuantumState& state,
                         std::span<const HermitianOperator> measured,
                         std::span<const HermitianOperator> generators,
                         bool* insensitive = nullptr);

/// Per-dimension accuracy bounds plus the log-log scaling slope.
AccuracyScan accuracy_scan(std::span<const int> d_list, int restarts,
                           std::uint64_t seed);

/// Monte-Carlo moment estimation: nu projective measurements of M on the
/// evolved probe per trial, mean inverted through mu(theta) by bracketing;
/// squared error averaged over trials against Var(M)/(nu <i[M,H]>^2).
MomSimResult mom_simulate_single(const QuantumState& probe,
                                 const HermitianOperator& m,
                                 const HermitianOperator& h, double theta_true,
                                 long long nu, int trials, std::uint64_t seed);

}  // namespace finiteqp
