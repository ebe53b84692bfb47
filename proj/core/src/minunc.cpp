#include "finiteqp/minunc.hpp"

#include <cmath>
#include <stdexcept>

namespace finiteqp {

namespace {

constexpr double kResidualTol = 1e-9;

double real_expect(const Matrix& m, const Vector& psi) {
  return (psi.adjoint() * m * psi)(0).real();
}

}  // namespace

MinUncReport solve_minunc(const HermitianOperator& a,
                          const HermitianOperator& b, Complex lambda) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("solve_minunc: operator dimensions differ");
  }
  if (!(lambda.real() > 0.0)) {
    throw std::invalid_argument(
        "solve_minunc: Re(lambda) must be positive; the Re(lambda) <= 0 "
        "boundary is covered by eigenstates of A or B directly");
  }
  const int d = a.dim();
  const Matrix& ma = a.matrix();
  const Matrix& mb = b.matrix();
  const Matrix l = lambda * ma + Complex(0, 1) * mb;
  const Matrix c = Complex(0, -0.5) * (ma * mb - mb * ma);
  const double scale = std::max(1.0, l.cwiseAbs().maxCoeff());

  Eigen::ComplexEigenSolver<Matrix> es(l);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("solve_minunc: eigen-solver failed");
  }

  MinUncReport report;
  for (int k = 0; k < d; ++k) {
    Vector psi = es.eigenvectors().col(k);
    Complex z = es.eigenvalues()(k);

    // one inverse-iteration step sharpens clustered/defective candidates
    Matrix shifted = l;
    shifted.diagonal().array() -= z;
    Eigen::FullPivLU<Matrix> lu(shifted);
    lu.setThreshold(1e-14);
    if (lu.isInvertible()) {
      Vector refined = lu.solve(psi);
      const double n = refined.norm();
      if (std::isfinite(n) && n > 1e-12) psi = refined / n;
    }
    z = (psi.adjoint() * l * psi)(0);

    const double residual = (l * psi - z * psi).norm() / scale;
    if (residual >= kResidualTol) continue;

    const double ec = real_expect(c, psi);
    if (ec * lambda.real() < 0.0) {
      ++report.discarded_negative_commutator;
      continue;
    }

    bool duplicate = false;
    for (const auto& sol : report.solutions) {
      if (std::abs((sol.state.state_vector().adjoint() * psi)(0)) >
          1.0 - 1e-8) {
        duplicate = true;
        break;
      }
    }
    if (duplicate) continue;

    MinUncSolution sol;
    sol.lambda = lambda;
    sol.eigenvalue_z = z;
    sol.state = QuantumState::from_vector(psi);
    const double eaa = real_expect(ma, psi);
    const double ebb = real_expect(mb, psi);
    sol.var_a = real_expect(ma * ma, psi) - eaa * eaa;
    sol.var_b = real_expect(mb * mb, psi) - ebb * ebb;
    sol.cov_ab =
        0.5 * real_expect(ma * mb + mb * ma, psi) - eaa * ebb;
    sol.commutator_expectation = ec;
    sol.residual = residual;
    report.solutions.push_back(std::move(sol));
  }
  report.defective = static_cast<int>(report.solutions.size()) +
                         report.discarded_negative_commutator <
                     d;
  return report;
}

double verify_parallelism(const HermitianOperator& a,
                          const HermitianOperator& b, Complex lambda,
                          const QuantumState& state) {
  if (a.dim() != b.dim() || a.dim() != state.dim()) {
    throw std::invalid_argument("verify_parallelism: dimension mismatch");
  }
  Vector psi = state.state_vector();
  const Matrix& ma = a.matrix();
  const Matrix& mb = b.matrix();
  const double ea = real_expect(ma, psi);
  const double eb = real_expect(mb, psi);
  Vector va = ma * psi - ea * psi;
  Vector vb = mb * psi - eb * psi;
  return (lambda * va + Complex(0, 1) * vb).norm();
}

}  // namespace finiteqp
