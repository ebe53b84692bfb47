#include "finiteqp/states.hpp"

#include <cmath>

namespace finiteqp {

namespace {
constexpr double kPsdTol = -1e-10;
constexpr double kTraceTol = 1e-12;
}

QuantumState QuantumState::from_density(const Matrix& rho) {
  if (rho.rows() != rho.cols() || rho.rows() < 2) {
    throw std::invalid_argument("QuantumState: need square matrix with dim >= 2");
  }
  Matrix h = 0.5 * (rho + rho.adjoint());
  const double tr = h.trace().real();
  if (std::abs(tr - 1.0) > 1e-9) {
    if (tr <= 0.0) throw std::invalid_argument("QuantumState: non-positive trace");
    h /= tr;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < kPsdTol) {
    throw std::invalid_argument("QuantumState: density matrix not PSD");
  }
  if (std::abs(h.trace().real() - 1.0) > kTraceTol) {
    h /= h.trace().real();
  }
  return QuantumState(std::move(h));
}

QuantumState QuantumState::from_factor(const Matrix& a) {
  const double norm2 = a.squaredNorm();
  if (!(norm2 > 0.0) || !std::isfinite(norm2)) {
    throw std::invalid_argument("from_factor: factor must be nonzero and finite");
  }
  Matrix rho = (a * a.adjoint()) / norm2;
  return QuantumState(0.5 * (rho + rho.adjoint()));
}

QuantumState QuantumState::from_vector(const Vector& psi) {
  return from_factor(psi);
}

bool QuantumState::is_pure(double tol) const {
  return std::abs(purity() - 1.0) < tol;
}

double QuantumState::purity() const {
  return (rho_ * rho_).trace().real();
}

Vector QuantumState::state_vector() const {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho_);
  return es.eigenvectors().col(rho_.rows() - 1);
}

void QuantumState::set_local_dims(int da, int db) {
  if (da * db != dim()) {
    throw std::invalid_argument("set_local_dims: d_A * d_B must equal dim");
  }
  local_dims_ = {da, db};
}

QuantumState vacuum_d3() {
  Vector v(3);
  const double s3 = std::sqrt(3.0);
  v << 1.0, 1.0 + s3, 1.0;
  v /= std::sqrt(6.0 + 2.0 * s3);
  return QuantumState::from_vector(v);
}

QuantumState squeezed_d3(double xi) {
  if (!std::isfinite(xi)) {
    throw std::invalid_argument("squeezed_d3: xi must be finite");
  }
  const double s2 = std::sqrt(2.0), s3 = std::sqrt(3.0);
  const double alpha = s2 * M_PI * xi / (3.0 * s3);
  const double x = std::cos(alpha) + 0.5 * s2 * (1.0 + s3) * std::sin(alpha);
  const double y = (1.0 + s3) * std::cos(alpha) - s2 * std::sin(alpha);
  Vector v(3);
  v << x, y, x;
  v /= std::sqrt(6.0 + 2.0 * s3);
  return QuantumState::from_vector(v);
}

QuantumState two_mode_squeezed(int d, double a, double b) {
  if (d < 2) throw std::invalid_argument("two_mode_squeezed: d must be >= 2");
  if (b == 0.0) throw std::invalid_argument("two_mode_squeezed: b must be nonzero");
  Vector psi(d * d);
  for (int i1 = 0; i1 < d; ++i1) {
    const double n1 = i1 - 0.5 * (d - 1);
    for (int i2 = 0; i2 < d; ++i2) {
      const double n2 = i2 - 0.5 * (d - 1);
      const double diff = n1 - n2, sum = n1 + n2;
      psi(i1 * d + i2) =
          std::exp(-(M_PI / d) * (a * diff * diff + sum * sum / b));
    }
  }
  QuantumState st = QuantumState::from_vector(psi);
  st.set_local_dims(d, d);
  return st;
}

QuantumState max_entangled(int d) {
  if (d < 2) throw std::invalid_argument("max_entangled: d must be >= 2");
  Vector psi = Vector::Zero(d * d);
  for (int n = 0; n < d; ++n) psi(n * d + n) = 1.0 / std::sqrt(double(d));
  QuantumState st = QuantumState::from_vector(psi);
  st.set_local_dims(d, d);
  return st;
}

QuantumState thermal_state(const HermitianOperator& h, double temperature) {
  if (!(temperature > 0.0)) {
    throw std::invalid_argument("thermal_state: temperature must be positive");
  }
  auto [ev, v] = h.eigensystem();
  const double e0 = ev.minCoeff();
  RealVector w(ev.size());
  for (int i = 0; i < ev.size(); ++i) {
    w(i) = std::exp(-(ev(i) - e0) / temperature);
  }
  w /= w.sum();
  Matrix rho = v * w.cast<Complex>().asDiagonal() * v.adjoint();
  return QuantumState::from_density(rho);
}

namespace {
Matrix matrix_sqrt(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  RealVector ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.cast<Complex>().asDiagonal() *
         es.eigenvectors().adjoint();
}
}  // namespace

double fidelity(const QuantumState& a, const QuantumState& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("fidelity: dimension mismatch");
  Matrix sa = matrix_sqrt(a.density());
  Matrix inner = matrix_sqrt(sa * b.density() * sa);
  double f = inner.trace().real();
  return std::min(1.0, std::max(0.0, f));
}

double trace_distance(const QuantumState& a, const QuantumState& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("trace_distance: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.density() - b.density(),
                                           Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double expectation(const QuantumState& state, const Matrix& op) {
  return (state.density() * op).trace().real();
}

}  // namespace finiteqp
