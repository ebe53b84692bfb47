#include "finiteqp/covariance.hpp"

#include <cmath>

namespace finiteqp {

namespace detail {

CovMatrix finalize_cov(const Matrix& gamma) {
  CovMatrix cov;
  cov.m = static_cast<int>(gamma.rows());
  cov.entries = 0.5 * (gamma + gamma.adjoint());
  cov.sym = cov.entries.real();
  cov.skew = cov.entries.imag();
  cov.trace = cov.sym.trace();
  if (cov.m == 2) {
    // closed form avoids cancellation noise near the zero-determinant boundary
    cov.det = cov.entries(0, 0).real() * cov.entries(1, 1).real() -
              std::norm(cov.entries(0, 1));
  } else {
    cov.det = cov.entries.determinant().real();
  }
  return cov;
}

}  // namespace detail

Complex covariance(const QuantumState& state, const HermitianOperator& a,
                   const HermitianOperator& b) {
  if (a.dim() != state.dim() || b.dim() != state.dim()) {
    throw std::invalid_argument("covariance: dimension mismatch");
  }
  const Matrix& rho = state.density();
  const Complex ea = (rho * a.matrix()).trace();
  const Complex eb = (rho * b.matrix()).trace();
  const Complex eab = (rho * a.matrix() * b.matrix()).trace();
  return eab - ea * eb;
}

CovMatrix cov_matrix(const QuantumState& state,
                     std::span<const HermitianOperator> obs) {
  if (obs.empty()) {
    throw std::invalid_argument("cov_matrix: need at least one observable");
  }
  const int m = static_cast<int>(obs.size());
  const Matrix& rho = state.density();
  std::vector<double> means(m);
  for (int j = 0; j < m; ++j) {
    if (obs[j].dim() != state.dim()) {
      throw std::invalid_argument("cov_matrix: dimension mismatch");
    }
    means[j] = (rho * obs[j].matrix()).trace().real();
  }
  Matrix gamma(m, m);
  for (int j = 0; j < m; ++j) {
    for (int k = 0; k < m; ++k) {
      const Complex ejk = (rho * obs[j].matrix() * obs[k].matrix()).trace();
      gamma(j, k) = ejk - means[j] * means[k];
    }
  }
  return detail::finalize_cov(gamma);
}

CovMatrix cov_matrix(const QuantumState& state, const HermitianOperator& a,
                     const HermitianOperator& b) {
  std::vector<HermitianOperator> obs{a, b};
  return cov_matrix(state, std::span<const HermitianOperator>(obs));
}

double rs_inequality_gap(const QuantumState& state, const HermitianOperator& a,
                         const HermitianOperator& b) {
  return cov_matrix(state, a, b).det;
}

CovMatrix transform(const CovMatrix& cov, const RealMatrix& l) {
  if (l.cols() != cov.m) {
    throw std::invalid_argument("transform: column count must match observable count");
  }
  Matrix gamma = l.cast<Complex>() * cov.entries * l.transpose().cast<Complex>();
  return detail::finalize_cov(gamma);
}

RealMatrix concavity_gap(const QuantumState& rho1, const QuantumState& rho2,
                         double p, std::span<const HermitianOperator> obs) {
  if (p < 0.0 || p > 1.0) {
    throw std::invalid_argument("concavity_gap: p must lie in [0, 1]");
  }
  if (rho1.dim() != rho2.dim()) {
    throw std::invalid_argument("concavity_gap: states must share dimension");
  }
  QuantumState mixed = QuantumState::from_density(
      p * rho1.density() + (1.0 - p) * rho2.density());
  CovMatrix gm = cov_matrix(mixed, obs);
  CovMatrix g1 = cov_matrix(rho1, obs);
  CovMatrix g2 = cov_matrix(rho2, obs);
  Matrix gap = gm.entries - p * g1.entries - (1.0 - p) * g2.entries;
  // the gap matrix is Hermitian; report its real symmetric part
  return (0.5 * (gap + gap.adjoint())).real();
}

}  // namespace finiteqp
