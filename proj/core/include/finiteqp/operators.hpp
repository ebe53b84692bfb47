#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <vector>

namespace finiteqp {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Dense Hermitian matrix. Construction symmetrizes so that
/// entries(j,k) == conj(entries(k,j)) holds exactly.
class HermitianOperator {
 public:
  explicit HermitianOperator(const Matrix& m);
  int dim() const { return static_cast<int>(mat_.rows()); }
  const Matrix& matrix() const { return mat_; }

  RealVector eigenvalues() const;
  std::pair<RealVector, Matrix> eigensystem() const;  // ascending

 private:
  Matrix mat_;
};

/// Dense unitary matrix; U U^dagger = 1 within 1e-12 max-entry norm.
class UnitaryOperator {
 public:
  explicit UnitaryOperator(const Matrix& m);
  int dim() const { return static_cast<int>(mat_.rows()); }
  const Matrix& matrix() const { return mat_; }

 private:
  Matrix mat_;
};

/// Position/momentum pair related by the finite Fourier transform,
/// P = F Q F^dagger, over the zero-centered label set
/// {-(d-1)/2, ..., (d-1)/2} (half-integers when d is even).
struct CanonicalPair {
  int dim;
  HermitianOperator q;
  HermitianOperator p;
  UnitaryOperator fourier;
  std::vector<double> index_offsets;
};

/// (T, G1, G2, G3) = (Q^2+P^2, {Q,P}, -i[Q,P], Q^2-P^2).
struct Quadratics {
  HermitianOperator t;
  HermitianOperator g1;
  HermitianOperator g2;
  HermitianOperator g3;
};

CanonicalPair build_canonical_pair(int d);

/// -i[Q,P] as a Hermitian operator.
HermitianOperator commutator_qp(const CanonicalPair& pair);

Quadratics build_quadratics(const CanonicalPair& pair);

/// Heisenberg-Weyl operator omega_d^l X^n Z^m with
/// X = exp(sqrt(2pi/d) i P), Z = exp(-sqrt(2pi/d) i Q).
UnitaryOperator build_displacement(const CanonicalPair& pair, int l, int n, int m);

/// exp(-i xi K) with K = (QP + PQ)/2.
UnitaryOperator squeezing_unitary(const CanonicalPair& pair, double xi);

/// exp(scale * H) for Hermitian H via eigendecomposition.
Matrix hermitian_exp(const Matrix& h, Complex scale);

/// Closed-form momentum matrix entries (the FQF^dagger product written out).
Matrix momentum_closed_form(int d);

/// Closed-form commutator [Q,P] entries.
Matrix commutator_closed_form(int d);

}  // namespace finiteqp
