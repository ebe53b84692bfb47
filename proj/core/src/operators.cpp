#include "finiteqp/operators.hpp"

#include <cmath>

namespace finiteqp {

namespace {
constexpr double kUnitaryTol = 1e-12;
}

HermitianOperator::HermitianOperator(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() < 2) {
    throw std::invalid_argument("HermitianOperator: need square matrix with dim >= 2");
  }
  mat_ = 0.5 * (m + m.adjoint());
  // make conjugate symmetry bit-exact
  for (int j = 0; j < mat_.rows(); ++j) {
    mat_(j, j) = Complex(mat_(j, j).real(), 0.0);
    for (int k = j + 1; k < mat_.cols(); ++k) {
      mat_(k, j) = std::conj(mat_(j, k));
    }
  }
}

RealVector HermitianOperator::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Matrix> es(mat_, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

std::pair<RealVector, Matrix> HermitianOperator::eigensystem() const {
  Eigen::SelfAdjointEigenSolver<Matrix> es(mat_);
  return {es.eigenvalues(), es.eigenvectors()};
}

UnitaryOperator::UnitaryOperator(const Matrix& m) : mat_(m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("UnitaryOperator: need square matrix");
  }
  Matrix defect = m * m.adjoint() - Matrix::Identity(m.rows(), m.cols());
  if (defect.cwiseAbs().maxCoeff() > kUnitaryTol) {
    throw std::invalid_argument("UnitaryOperator: U U^dagger deviates from identity");
  }
}

CanonicalPair build_canonical_pair(int d) {
  if (d < 2) {
    throw std::invalid_argument("build_canonical_pair: d must be >= 2");
  }
  std::vector<double> offsets(d);
  for (int n = 0; n < d; ++n) {
    offsets[n] = n - 0.5 * (d - 1);
  }
  const double scale = std::sqrt(2.0 * M_PI / d);
  Matrix q = Matrix::Zero(d, d);
  for (int n = 0; n < d; ++n) {
    q(n, n) = scale * offsets[n];
  }
  Matrix f(d, d);
  for (int j = 0; j < d; ++j) {
    for (int k = 0; k < d; ++k) {
      const double phase = 2.0 * M_PI * offsets[j] * offsets[k] / d;
      f(j, k) = std::polar(1.0 / std::sqrt(double(d)), phase);
    }
  }
  Matrix p = f * q * f.adjoint();
  return CanonicalPair{d, HermitianOperator(q), HermitianOperator(p),
                       UnitaryOperator(f), offsets};
}

HermitianOperator commutator_qp(const CanonicalPair& pair) {
  const Matrix& q = pair.q.matrix();
  const Matrix& p = pair.p.matrix();
  Matrix c = Complex(0, -1) * (q * p - p * q);
  return HermitianOperator(c);
}

Quadratics build_quadratics(const CanonicalPair& pair) {
  const Matrix& q = pair.q.matrix();
  const Matrix& p = pair.p.matrix();
  Matrix q2 = q * q;
  Matrix p2 = p * p;
  return Quadratics{HermitianOperator(q2 + p2),
                    HermitianOperator(q * p + p * q),
                    commutator_qp(pair),
                    HermitianOperator(q2 - p2)};
}

Matrix hermitian_exp(const Matrix& h, Complex scale) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h + h.adjoint()));
  const RealVector& ev = es.eigenvalues();
  const Matrix& v = es.eigenvectors();
  Vector expd(ev.size());
  for (int i = 0; i < ev.size(); ++i) {
    expd(i) = std::exp(scale * ev(i));
  }
  return v * expd.asDiagonal() * v.adjoint();
}

UnitaryOperator build_displacement(const CanonicalPair& pair, int l, int n, int m) {
  const int d = pair.dim;
  if (l < 0 || l >= d || n < 0 || n >= d || m < 0 || m >= d) {
    throw std::invalid_argument("build_displacement: indices must lie in [0, d-1]");
  }
  const double c = std::sqrt(2.0 * M_PI / d);
  Matrix x = hermitian_exp(pair.p.matrix(), Complex(0, c));
  Matrix z = hermitian_exp(pair.q.matrix(), Complex(0, -c));
  Matrix xn = Matrix::Identity(d, d);
  for (int i = 0; i < n; ++i) xn = xn * x;
  Matrix zm = Matrix::Identity(d, d);
  for (int i = 0; i < m; ++i) zm = zm * z;
  const Complex omega_l = std::polar(1.0, 2.0 * M_PI * l / d);
  return UnitaryOperator(omega_l * xn * zm);
}

UnitaryOperator squeezing_unitary(const CanonicalPair& pair, double xi) {
  if (!std::isfinite(xi)) {
    throw std::invalid_argument("squeezing_unitary: xi must be finite");
  }
  const Matrix& q = pair.q.matrix();
  const Matrix& p = pair.p.matrix();
  Matrix k = 0.5 * (q * p + p * q);
  return UnitaryOperator(hermitian_exp(k, Complex(0, -xi)));
}

Matrix momentum_closed_form(int d) {
  const double scale = std::sqrt(2.0 * M_PI / d);
  Matrix p = Matrix::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    for (int l = 0; l < d; ++l) {
      if (k == l) continue;
      const int diff = k - l;
      const double sign = (diff % 2 == 0) ? 1.0 : -1.0;
      p(k, l) = -scale * Complex(0, 0.5) * sign / std::sin(M_PI * diff / d);
    }
  }
  return p;
}

Matrix commutator_closed_form(int d) {
  Matrix c = Matrix::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    for (int l = 0; l < d; ++l) {
      if (k == l) continue;
      const int diff = k - l;
      const double sign = (diff % 2 == 0) ? 1.0 : -1.0;
      c(k, l) = Complex(0, -1) * (M_PI / d) * sign * double(diff) / std::sin(M_PI * diff / d);
    }
  }
  return c;
}

}  // namespace finiteqp
