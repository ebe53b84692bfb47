#pragma once

#include "finiteqp/operators.hpp"

#include <array>
#include <optional>

namespace finiteqp {

/// Density matrix with unit trace; optionally carries bipartite local
/// dimensions (dim = d_A * d_B). Pure states are rank one.
class QuantumState {
 public:
  /// Empty placeholder; every accessor expects a factory-built state.
  QuantumState() = default;

  static QuantumState from_density(const Matrix& rho);
  /// rho = A A^dagger / tr(A A^dagger); rank bounded by the column count of A.
  static QuantumState from_factor(const Matrix& a);
  static QuantumState from_vector(const Vector& psi);

  int dim() const { return static_cast<int>(rho_.rows()); }
  const Matrix& density() const { return rho_; }
  bool is_pure(double tol = 1e-10) const;
  double purity() const;
  /// Defined for pure states; the dominant eigenvector otherwise.
  Vector state_vector() const;

  void set_local_dims(int da, int db);
  std::optional<std::array<int, 2>> local_dims() const { return local_dims_; }

 private:
  explicit QuantumState(Matrix rho) : rho_(std::move(rho)) {}
  Matrix rho_;
  std::optional<std::array<int, 2>> local_dims_;
};

/// Zero eigenvector of Q + iP at d = 3, normalized (1, 1+sqrt3, 1).
QuantumState vacuum_d3();

/// Closed-form squeezed family exp(-i xi K)|vacuum> at d = 3.
QuantumState squeezed_d3(double xi);

/// Bipartite state with amplitudes proportional to
/// exp(-(pi/d)(a (n1-n2)^2 + (n1+n2)^2 / b)) over the symmetric label set.
QuantumState two_mode_squeezed(int d, double a, double b);

/// (1/sqrt d) sum_n |n,n>.
QuantumState max_entangled(int d);

/// exp(-H/T)/Z via spectral exponentiation with max-eigenvalue shift.
QuantumState thermal_state(const HermitianOperator& h, double temperature);

/// Uhlmann fidelity F(rho, sigma) in [0, 1].
double fidelity(const QuantumState& a, const QuantumState& b);

double trace_distance(const QuantumState& a, const QuantumState& b);

double expectation(const QuantumState& state, const Matrix& op);

}  // namespace finiteqp
