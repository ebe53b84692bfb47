#include "finiteqp/regions.hpp"

#include "finiteqp/optim.hpp"
#include "finiteqp/parallel.hpp"
#include "finiteqp/rng.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace finiteqp {

namespace {

constexpr double kConstraintTol = 1e-8;
constexpr double kBigPenalty = 1e12;

struct PairOps {
  int d = 0;
  Matrix q, p, q2, p2, qp, t;
};

PairOps make_ops(const CanonicalPair& pair) {
  PairOps ops;
  ops.d = pair.dim;
  ops.q = pair.q.matrix();
  ops.p = pair.p.matrix();
  ops.q2 = ops.q * ops.q;
  ops.p2 = ops.p * ops.p;
  ops.qp = ops.q * ops.p;
  ops.t = ops.q2 + ops.p2;
  return ops;
}

Matrix factor_from_vec(const Eigen::VectorXd& x, int d, int rank) {
  Matrix a(d, rank);
  for (int j = 0; j < rank; ++j) {
    for (int i = 0; i < d; ++i) {
      const int base = 2 * (j * d + i);
      a(i, j) = Complex(x(base), x(base + 1));
    }
  }
  return a;
}

Eigen::VectorXd vec_from_factor(const Matrix& a) {
  const int d = static_cast<int>(a.rows());
  const int rank = static_cast<int>(a.cols());
  Eigen::VectorXd x(2 * d * rank);
  for (int j = 0; j < rank; ++j) {
    for (int i = 0; i < d; ++i) {
      const int base = 2 * (j * d + i);
      x(base) = a(i, j).real();
      x(base + 1) = a(i, j).imag();
    }
  }
  return x;
}

Complex expect_factor(const Matrix& m, const Matrix& a, double n2) {
  return ((a.adjoint() * (m * a)).trace()) / n2;
}

struct TwoObsStats {
  bool ok = false;
  double eq = 0, ep = 0, vq = 0, vp = 0;
  Complex cov;
  double trace = 0, det = 0;
};

TwoObsStats stats_from_factor(const PairOps& ops, const Matrix& a) {
  TwoObsStats st;
  const double n2 = a.squaredNorm();
  if (!(n2 > 1e-16) || !std::isfinite(n2)) return st;
  st.eq = expect_factor(ops.q, a, n2).real();
  st.ep = expect_factor(ops.p, a, n2).real();
  st.vq = expect_factor(ops.q2, a, n2).real() - st.eq * st.eq;
  st.vp = expect_factor(ops.p2, a, n2).real() - st.ep * st.ep;
  st.cov = expect_factor(ops.qp, a, n2) - st.eq * st.ep;
  st.trace = st.vq + st.vp;
  st.det = st.vq * st.vp - std::norm(st.cov);
  st.ok = std::isfinite(st.trace) && std::isfinite(st.det);
  return st;
}

double lambda_min_shifted(const PairOps& ops, double q, double p,
                          Vector* ground = nullptr) {
  Matrix m = ops.t - 2.0 * q * ops.q - 2.0 * p * ops.p;
  m.diagonal().array() += q * q + p * p;
  Eigen::SelfAdjointEigenSolver<Matrix> es(
      m, ground ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (ground) *ground = es.eigenvectors().col(0);
  return es.eigenvalues()(0);
}

std::vector<std::pair<double, double>> center_orbit(double q, double p) {
  if (std::max(std::abs(q), std::abs(p)) < 1e-6) {
    return {{q, p}};
  }
  // pi/2 rotation generated by Fourier conjugation: (q, p) -> (-p, q)
  return {{q, p}, {-p, q}, {-q, -p}, {p, -q}};
}

}  // namespace

VarianceExtremum min_sum_variances(const CanonicalPair& pair, int grid_n,
                                   double refine_tol) {
  if (grid_n < 8) {
    throw std::invalid_argument("min_sum_variances: grid_n must be >= 8");
  }
  PairOps ops = make_ops(pair);
  const double radius = pair.q.eigenvalues().cwiseAbs().maxCoeff();

  double best = std::numeric_limits<double>::infinity();
  double bq = 0, bp = 0;
  for (int i = 0; i < grid_n; ++i) {
    const double q = -radius + 2.0 * radius * i / (grid_n - 1);
    for (int j = 0; j < grid_n; ++j) {
      const double p = -radius + 2.0 * radius * j / (grid_n - 1);
      const double v = lambda_min_shifted(ops, q, p);
      if (v < best) {
        best = v;
        bq = q;
        bp = p;
      }
    }
  }

  NelderMeadOptions opts;
  opts.x_tol = refine_tol;
  opts.f_tol = refine_tol;
  opts.initial_step = 2.0 * radius / (grid_n - 1);
  opts.max_iter = 2000;
  Eigen::Vector2d x0(bq, bp);
  auto res = nelder_mead(
      [&](const Eigen::VectorXd& x) {
        return lambda_min_shifted(ops, x(0), x(1));
      },
      x0, opts);

  VarianceExtremum ext;
  ext.value = res.value;
  ext.q_center = res.x(0);
  ext.p_center = res.x(1);
  ext.converged = res.converged;
  Vector ground;
  lambda_min_shifted(ops, ext.q_center, ext.p_center, &ground);
  ext.state = QuantumState::from_vector(ground);
  ext.orbit = center_orbit(ext.q_center, ext.p_center);
  return ext;
}

VarianceExtremum max_sum_variances(const CanonicalPair& pair) {
  Quadratics quad = build_quadratics(pair);
  auto [ev, v] = quad.t.eigensystem();
  VarianceExtremum ext;
  ext.value = ev(ev.size() - 1);
  ext.state = QuantumState::from_vector(v.col(v.cols() - 1));
  ext.orbit = {{0.0, 0.0}};
  return ext;
}

namespace {

struct RestartOutcome {
  bool feasible = false;
  double objective = 0.0;  // signed det, lower is better
  double residual = 0.0;
  Matrix a;
  TwoObsStats st;
};

Matrix initial_factor(const PairOps& ops, int rank, int restart_index,
                      std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix a(ops.d, rank);
  for (int j = 0; j < rank; ++j) {
    for (int i = 0; i < ops.d; ++i) {
      a(i, j) = Complex(gauss(rng), gauss(rng));
    }
  }
  // spread some restarts around the T eigenbasis; the extremal states of the
  // region cluster near it
  if (restart_index % 2 == 0) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(ops.t);
    const int idx = (restart_index / 2) % ops.d;
    a.col(0) = es.eigenvectors().col(idx) + 0.3 * a.col(0);
    for (int j = 1; j < rank; ++j) a.col(j) *= 0.3;
  }
  return a;
}

RestartOutcome run_restart(const PairOps& ops, double t, int rank, double sign,
                           int restart_index, std::uint64_t seed) {
  auto rng = make_rng(seed, static_cast<std::uint64_t>(restart_index));
  Matrix a0 = initial_factor(ops, rank, restart_index, rng);
  Eigen::VectorXd x = vec_from_factor(a0);

  double lam = 0.0;
  NelderMeadOptions opts;
  opts.max_iter = 3000;
  opts.initial_step = 0.4;
  for (double w = 1e2; w <= kBigPenalty; w *= 1e2) {
    auto objective = [&](const Eigen::VectorXd& v) {
      TwoObsStats st = stats_from_factor(ops, factor_from_vec(v, ops.d, rank));
      if (!st.ok) return 1e12;
      const double g = st.trace - t;
      return sign * st.det + lam * g + w * g * g;
    };
    for (int pass = 0; pass < 2; ++pass) {
      auto res = nelder_mead(objective, x, opts);
      x = res.x;
      opts.initial_step = 0.05;
    }
    TwoObsStats st = stats_from_factor(ops, factor_from_vec(x, ops.d, rank));
    if (st.ok) lam += 2.0 * w * (st.trace - t);
    opts.initial_step = 0.02;
  }

  RestartOutcome out;
  out.a = factor_from_vec(x, ops.d, rank);
  out.st = stats_from_factor(ops, out.a);
  out.residual = std::abs(out.st.trace - t);
  out.feasible = out.st.ok && out.residual < kConstraintTol;
  out.objective = sign * out.st.det;
  return out;
}

}  // namespace

RegionSample extremize_det_at_trace(const CanonicalPair& pair, double t,
                                    int rank, ExtremizeDirection direction,
                                    int restarts, std::uint64_t seed) {
  if (rank < 1 || rank > pair.dim) {
    throw std::invalid_argument("extremize_det_at_trace: rank must lie in [1, d]");
  }
  if (restarts < 1) {
    throw std::invalid_argument("extremize_det_at_trace: restarts must be >= 1");
  }
  const double tau_min = min_sum_variances(pair).value;
  const double tau_max = max_sum_variances(pair).value;
  constexpr double kRangeEps = 1e-6;
  if (t < tau_min - kRangeEps || t > tau_max + kRangeEps) {
    throw InfeasibleTrace("extremize_det_at_trace: trace target outside [tau_min, tau_max]");
  }
  t = std::clamp(t, tau_min, tau_max);

  PairOps ops = make_ops(pair);
  const double sign = direction == ExtremizeDirection::Min ? 1.0 : -1.0;

  std::vector<RestartOutcome> outcomes(restarts);
  parallel_for(restarts, [&](std::size_t i) {
    outcomes[i] = run_restart(ops, t, rank, sign, static_cast<int>(i), seed);
  });

  int best = -1;
  for (int i = 0; i < restarts; ++i) {
    if (!outcomes[i].st.ok) continue;
    if (best < 0) {
      best = i;
      continue;
    }
    const bool bf = outcomes[best].feasible, cf = outcomes[i].feasible;
    if (cf != bf) {
      if (cf) best = i;
      continue;
    }
    if (cf) {
      if (outcomes[i].objective < outcomes[best].objective) best = i;
    } else {
      if (outcomes[i].residual < outcomes[best].residual) best = i;
    }
  }
  if (best < 0) {
    throw std::runtime_error("extremize_det_at_trace: all restarts failed");
  }

  RegionSample sample;
  sample.t_target = t;
  sample.trace = outcomes[best].st.trace;
  sample.det = outcomes[best].st.det;
  sample.state = QuantumState::from_factor(outcomes[best].a);
  sample.rank = rank;
  sample.maximize = direction == ExtremizeDirection::Max;
  sample.converged = outcomes[best].feasible;
  sample.restarts_used = restarts;
  return sample;
}

std::vector<RegionSample> trace_det_region(const CanonicalPair& pair,
                                           int n_trace_samples, int rank,
                                           int restarts, std::uint64_t seed) {
  if (n_trace_samples < 2) {
    throw std::invalid_argument("trace_det_region: need at least 2 trace samples");
  }
  const double tau_min = min_sum_variances(pair).value;
  const double tau_max = max_sum_variances(pair).value;
  std::vector<RegionSample> samples;
  samples.reserve(2 * n_trace_samples);
  for (int i = 0; i < n_trace_samples; ++i) {
    const double t =
        tau_min + (tau_max - tau_min) * i / (n_trace_samples - 1);
    const std::uint64_t s = split_seed(seed, 1000 + i);
    samples.push_back(extremize_det_at_trace(pair, t, rank,
                                             ExtremizeDirection::Min, restarts, s));
    samples.push_back(extremize_det_at_trace(pair, t, rank,
                                             ExtremizeDirection::Max, restarts,
                                             split_seed(s, 1)));
  }
  return samples;
}

JnrPoint jnr_support(std::span<const HermitianOperator> operators,
                     const RealVector& direction) {
  if (operators.empty()) {
    throw std::invalid_argument("jnr_support: need at least one operator");
  }
  if (direction.size() != static_cast<Eigen::Index>(operators.size())) {
    throw std::invalid_argument("jnr_support: direction size mismatch");
  }
  const int d = operators[0].dim();
  Matrix combo = Matrix::Zero(d, d);
  for (std::size_t i = 0; i < operators.size(); ++i) {
    combo += direction(static_cast<Eigen::Index>(i)) * operators[i].matrix();
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(combo);
  const RealVector& ev = es.eigenvalues();
  const int top = d - 1;
  JnrPoint pt;
  pt.direction = direction;
  pt.degenerate = d >= 2 && (ev(top) - ev(top - 1)) <
                              1e-9 * std::max(1.0, std::abs(ev(top)));
  Vector psi = es.eigenvectors().col(top);
  pt.state = QuantumState::from_vector(psi);
  pt.expectation.resize(static_cast<Eigen::Index>(operators.size()));
  for (std::size_t i = 0; i < operators.size(); ++i) {
    pt.expectation(static_cast<Eigen::Index>(i)) =
        (psi.adjoint() * operators[i].matrix() * psi)(0).real();
  }
  return pt;
}

namespace {

struct SliceStats {
  bool ok = false;
  double et = 0, eq = 0, ep = 0;
  Eigen::Vector3d g;
};

SliceStats slice_stats(const PairOps& ops, const Matrix& g1, const Matrix& g2,
                       const Matrix& g3, const Matrix& a) {
  SliceStats st;
  const double n2 = a.squaredNorm();
  if (!(n2 > 1e-16) || !std::isfinite(n2)) return st;
  st.et = expect_factor(ops.t, a, n2).real();
  st.eq = expect_factor(ops.q, a, n2).real();
  st.ep = expect_factor(ops.p, a, n2).real();
  st.g(0) = expect_factor(g1, a, n2).real();
  st.g(1) = expect_factor(g2, a, n2).real();
  st.g(2) = expect_factor(g3, a, n2).real();
  st.ok = st.g.allFinite();
  return st;
}

// maximizes `score` over rank-2 factor states subject to
// <T> = t, <Q> = <P> = 0; returns the slice point if constraints close.
std::optional<Eigen::Vector3d> slice_optimize(
    const PairOps& ops, const Matrix& g1, const Matrix& g2, const Matrix& g3,
    double t, const std::function<double(const Eigen::Vector3d&)>& score,
    std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd x(4 * ops.d);
  for (int i = 0; i < x.size(); ++i) x(i) = gauss(rng);

  Eigen::Vector3d lam = Eigen::Vector3d::Zero();
  NelderMeadOptions opts;
  opts.max_iter = 2500;
  opts.initial_step = 0.4;
  for (double w = 1e2; w <= 1e8; w *= 1e2) {
    auto objective = [&](const Eigen::VectorXd& v) {
      SliceStats st = slice_stats(ops, g1, g2, g3, factor_from_vec(v, ops.d, 2));
      if (!st.ok) return 1e12;
      Eigen::Vector3d c(st.et - t, st.eq, st.ep);
      return -score(st.g) + lam.dot(c) + w * c.squaredNorm();
    };
    auto res = nelder_mead(objective, x, opts);
    x = res.x;
    SliceStats st = slice_stats(ops, g1, g2, g3, factor_from_vec(x, ops.d, 2));
    if (st.ok) {
      Eigen::Vector3d c(st.et - t, st.eq, st.ep);
      lam += 2.0 * w * c;
    }
    opts.initial_step = 0.05;
  }
  SliceStats st = slice_stats(ops, g1, g2, g3, factor_from_vec(x, ops.d, 2));
  if (!st.ok) return std::nullopt;
  Eigen::Vector3d c(st.et - t, st.eq, st.ep);
  if (c.cwiseAbs().maxCoeff() > 1e-6) return std::nullopt;
  return st.g;
}

}  // namespace

CrossSection jnr_cross_section(const CanonicalPair& pair, double t,
                               int n_directions, std::uint64_t seed) {
  if (n_directions < 20) {
    throw std::invalid_argument("jnr_cross_section: need at least 20 directions");
  }
  CrossSection cs;
  cs.t = t;
  Quadratics quad = build_quadratics(pair);
  RealVector tev = quad.t.eigenvalues();
  if (t < tev.minCoeff() - 1e-9 || t > tev.maxCoeff() + 1e-9) {
    cs.feasible = false;
    return cs;
  }
  cs.feasible = true;

  PairOps ops = make_ops(pair);
  const Matrix& g1 = quad.g1.matrix();
  const Matrix& g2 = quad.g2.matrix();
  const Matrix& g3 = quad.g3.matrix();

  std::vector<std::optional<Eigen::Vector3d>> found(n_directions + 2);
  parallel_for(found.size(), [&](std::size_t i) {
    auto rng = make_rng(seed, i);
    if (i < static_cast<std::size_t>(n_directions)) {
      std::normal_distribution<double> gauss(0.0, 1.0);
      Eigen::Vector3d n(gauss(rng), gauss(rng), gauss(rng));
      if (n.norm() < 1e-12) n = Eigen::Vector3d::UnitX();
      n.normalize();
      found[i] = slice_optimize(ops, g1, g2, g3, t,
                                [n](const Eigen::Vector3d& g) { return n.dot(g); },
                                rng);
    } else if (i == static_cast<std::size_t>(n_directions)) {
      // farthest point from the origin: minimal determinant
      found[i] = slice_optimize(ops, g1, g2, g3, t,
                                [](const Eigen::Vector3d& g) { return g.squaredNorm(); },
                                rng);
    } else {
      // closest point to the origin: maximal determinant
      found[i] = slice_optimize(ops, g1, g2, g3, t,
                                [](const Eigen::Vector3d& g) { return -g.squaredNorm(); },
                                rng);
    }
  });

  double r2_max = 0.0;
  double r2_min = std::numeric_limits<double>::infinity();
  for (const auto& g : found) {
    if (!g) continue;
    cs.points.push_back(*g);
    r2_max = std::max(r2_max, g->squaredNorm());
    r2_min = std::min(r2_min, g->squaredNorm());
  }
  if (cs.points.empty()) {
    cs.feasible = false;
    return cs;
  }
  cs.det_min = 0.25 * (t * t - r2_max);
  cs.det_max = 0.25 * (t * t - r2_min);
  return cs;
}

}  // namespace finiteqp
