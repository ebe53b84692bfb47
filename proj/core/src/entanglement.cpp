#include "finiteqp/entanglement.hpp"

#include "finiteqp/regions.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace finiteqp {

namespace {

constexpr double kVerdictTol = 1e-9;

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

struct LocalOps {
  Matrix q1, p1, q2, p2;
  Matrix qm, pp;  // Q1 - Q2 and P1 + P2
};

LocalOps local_ops(const CanonicalPair& pair) {
  const int d = pair.dim;
  const Matrix id = Matrix::Identity(d, d);
  LocalOps ops;
  ops.q1 = kron(pair.q.matrix(), id);
  ops.p1 = kron(pair.p.matrix(), id);
  ops.q2 = kron(id, pair.q.matrix());
  ops.p2 = kron(id, pair.p.matrix());
  ops.qm = ops.q1 - ops.q2;
  ops.pp = ops.p1 + ops.p2;
  return ops;
}

void check_bipartite(const QuantumState& state, const CanonicalPair& pair) {
  if (state.dim() != pair.dim * pair.dim) {
    throw std::invalid_argument(
        "entanglement: state dimension must equal dim(pair)^2");
  }
}

}  // namespace

BipartiteCov bipartite_cov(const QuantumState& state,
                           const CanonicalPair& pair) {
  check_bipartite(state, pair);
  LocalOps ops = local_ops(pair);
  const Matrix* a[4] = {&ops.q1, &ops.p1, &ops.q2, &ops.p2};
  const Matrix& rho = state.density();

  Complex mean[4];
  for (int i = 0; i < 4; ++i) mean[i] = (rho * *a[i]).trace();

  BipartiteCov cov;
  cov.gamma_full.resize(4, 4);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      cov.gamma_full(i, j) =
          (rho * (*a[i] * *a[j])).trace() - mean[i] * mean[j];
    }
  }
  cov.block_a = cov.gamma_full.block(0, 0, 2, 2);
  cov.block_b = cov.gamma_full.block(2, 2, 2, 2);
  cov.cross = cov.gamma_full.block(0, 2, 2, 2);
  return cov;
}

double duan_bound(const CanonicalPair& pair) {
  static std::mutex mutex;
  static std::map<int, double> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(pair.dim);
  if (it == cache.end()) {
    it = cache.emplace(pair.dim, 2.0 * min_sum_variances(pair).value).first;
  }
  return it->second;
}

WitnessResult duan_witness(const QuantumState& state,
                           const CanonicalPair& pair) {
  check_bipartite(state, pair);
  LocalOps ops = local_ops(pair);
  const Matrix& rho = state.density();

  auto variance = [&](const Matrix& op) {
    const double e = (rho * op).trace().real();
    return (rho * op * op).trace().real() - e * e;
  };

  WitnessResult result;
  result.lhs = variance(ops.qm) + variance(ops.pp);
  result.bound = duan_bound(pair);
  result.delta_tilde = result.lhs - result.bound;
  result.verdict = result.delta_tilde < -kVerdictTol ? Verdict::Entangled
                                                     : Verdict::Undetected;
  return result;
}

ThermalScanResult thermal_threshold(const CanonicalPair& pair, double t_min,
                                    double t_max, double step) {
  if (!(step > 0.0) || !(t_min > 0.0) || t_max < t_min) {
    throw std::invalid_argument("thermal_threshold: invalid temperature grid");
  }
  LocalOps ops = local_ops(pair);
  const Matrix h = ops.qm * ops.qm + ops.pp * ops.pp;
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const RealVector& energy = es.eigenvalues();
  const Matrix& basis = es.eigenvectors();
  const int n = static_cast<int>(energy.size());

  // eigenbasis diagonals of the witness operators and their squares; each
  // temperature then costs O(n)
  RealVector dqm(n), dqm2(n), dpp(n), dpp2(n);
  const Matrix qm2 = ops.qm * ops.qm;
  const Matrix pp2 = ops.pp * ops.pp;
  for (int k = 0; k < n; ++k) {
    const Vector v = basis.col(k);
    dqm(k) = (v.adjoint() * ops.qm * v)(0).real();
    dqm2(k) = (v.adjoint() * qm2 * v)(0).real();
    dpp(k) = (v.adjoint() * ops.pp * v)(0).real();
    dpp2(k) = (v.adjoint() * pp2 * v)(0).real();
  }
  const double e0 = energy.minCoeff();
  const double bound = duan_bound(pair);

  ThermalScanResult result;
  const int steps = static_cast<int>(std::floor((t_max - t_min) / step + 1e-9));
  for (int i = 0; i <= steps; ++i) {
    const double t = t_min + i * step;
    RealVector w = (-(energy.array() - e0) / t).exp();
    w /= w.sum();
    const double eqm = w.dot(dqm);
    const double epp = w.dot(dpp);
    const double lhs =
        (w.dot(dqm2) - eqm * eqm) + (w.dot(dpp2) - epp * epp);
    ThermalScanPoint pt;
    pt.temperature = t;
    pt.delta_tilde = lhs - bound;
    pt.entangled = pt.delta_tilde < -kVerdictTol;
    if (pt.entangled) result.threshold = t;
    result.points.push_back(pt);
  }
  return result;
}

}  // namespace finiteqp
