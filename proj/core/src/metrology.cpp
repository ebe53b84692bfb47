#include "finiteqp/metrology.hpp"

#include "finiteqp/covariance.hpp"
#include "finiteqp/optim.hpp"
#include "finiteqp/parallel.hpp"
#include "finiteqp/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace finiteqp {

namespace {

constexpr double kDetFloor = 1e-12;

double real_expect(const Matrix& m, const Vector& psi) {
  return (psi.adjoint() * m * psi)(0).real();
}

Vector psi_from_vec(const Eigen::VectorXd& x, int d) {
  Vector psi(d);
  for (int i = 0; i < d; ++i) psi(i) = Complex(x(2 * i), x(2 * i + 1));
  return psi;
}

struct PureQpStats {
  bool ok = false;
  double vq = 0, vp = 0, cre = 0, cim = 0;
  double tr = 0, det_s = 0;
};

PureQpStats qp_stats(const Matrix& q, const Matrix& p, const Matrix& q2,
                     const Matrix& p2, const Matrix& qp, const Vector& psi_raw) {
  PureQpStats st;
  const double n2 = psi_raw.squaredNorm();
  if (!(n2 > 1e-16) || !std::isfinite(n2)) return st;
  const Vector psi = psi_raw / std::sqrt(n2);
  const double eq = real_expect(q, psi);
  const double ep = real_expect(p, psi);
  st.vq = real_expect(q2, psi) - eq * eq;
  st.vp = real_expect(p2, psi) - ep * ep;
  const Complex c = (psi.adjoint() * qp * psi)(0) - eq * ep;
  st.cre = c.real();
  st.cim = c.imag();
  st.tr = st.vq + st.vp;
  st.det_s = st.vq * st.vp - st.cre * st.cre;
  st.ok = std::isfinite(st.tr) && std::isfinite(st.det_s);
  return st;
}

}  // namespace

RealMatrix qfim_pure(const QuantumState& state,
                     std::span<const HermitianOperator> generators) {
  if (!state.is_pure()) {
    throw std::invalid_argument("qfim_pure: probe must be pure");
  }
  return 4.0 * cov_matrix(state, generators).sym;
}

RealMatrix saturability_matrix(const QuantumState& state,
                               std::span<const HermitianOperator> generators) {
  const int n = static_cast<int>(generators.size());
  RealMatrix j = RealMatrix::Zero(n, n);
  const Matrix& rho = state.density();
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const Matrix comm = generators[a].matrix() * generators[b].matrix() -
                          generators[b].matrix() * generators[a].matrix();
      const Complex e = (rho * comm).trace();
      // <[H_a, H_b]> is purely imaginary; -2i times it is real
      j(a, b) = 2.0 * e.imag();
      j(b, a) = -j(a, b);
    }
  }
  return j;
}

AccuracyOptimum optimize_a_d(const CanonicalPair& pair, int restarts,
                             std::uint64_t seed, bool constrained) {
  if (restarts < 1) {
    throw std::invalid_argument("optimize_a_d: restarts must be >= 1");
  }
  const int d = pair.dim;
  const Matrix q = pair.q.matrix();
  const Matrix p = pair.p.matrix();
  const Matrix q2 = q * q;
  const Matrix p2 = p * p;
  const Matrix qp = q * p;

  struct Outcome {
    double value = std::numeric_limits<double>::infinity();
    double residual = std::numeric_limits<double>::infinity();
    Eigen::VectorXd x;
    bool ok = false;
  };
  std::vector<Outcome> outcomes(restarts);

  auto base_value = [&](const Eigen::VectorXd& x) {
    PureQpStats st = qp_stats(q, p, q2, p2, qp, psi_from_vec(x, d));
    if (!st.ok) return 1e12;
    return 0.25 * st.tr / std::max(st.det_s, kDetFloor);
  };

  parallel_for(restarts, [&](std::size_t r) {
    auto rng = make_rng(seed, r);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd x(2 * d);
    for (int i = 0; i < x.size(); ++i) x(i) = gauss(rng);

    NelderMeadOptions opts;
    opts.max_iter = 6000;
    opts.initial_step = 0.4;
    if (!constrained) {
      auto res = nelder_mead(base_value, x, opts);
      // second pass from the optimum escapes simplex collapse
      opts.initial_step = 0.02;
      res = nelder_mead(base_value, res.x, opts);
      PureQpStats st = qp_stats(q, p, q2, p2, qp, psi_from_vec(res.x, d));
      outcomes[r] = {res.value, st.ok ? std::abs(st.cim) : 1e12, res.x, st.ok};
      return;
    }
    for (double w = 1e2; w <= 1e10; w *= 1e2) {
      auto objective = [&](const Eigen::VectorXd& v) {
        PureQpStats st = qp_stats(q, p, q2, p2, qp, psi_from_vec(v, d));
        if (!st.ok) return 1e12;
        return 0.25 * st.tr / std::max(st.det_s, kDetFloor) +
               w * st.cim * st.cim;
      };
      auto res = nelder_mead(objective, x, opts);
      x = res.x;
      opts.initial_step = 0.03;
    }
    PureQpStats st = qp_stats(q, p, q2, p2, qp, psi_from_vec(x, d));
    outcomes[r] = {base_value(x), st.ok ? std::abs(st.cim) : 1e12, x, st.ok};
  });

  const double residual_cap = constrained ? 1e-6 : 1e12;
  int best = -1;
  for (int r = 0; r < restarts; ++r) {
    if (!outcomes[r].ok) continue;
    const bool feasible = outcomes[r].residual < residual_cap;
    if (best < 0) {
      best = r;
      continue;
    }
    const bool best_feasible = outcomes[best].residual < residual_cap;
    if (feasible != best_feasible) {
      if (feasible) best = r;
    } else if (feasible || !constrained) {
      if (outcomes[r].value < outcomes[best].value) best = r;
    } else if (outcomes[r].residual < outcomes[best].residual) {
      best = r;
    }
  }
  if (best < 0) {
    throw std::runtime_error("optimize_a_d: all restarts failed");
  }

  AccuracyOptimum opt;
  opt.value = outcomes[best].value;
  opt.state = QuantumState::from_vector(
      psi_from_vec(outcomes[best].x, d).normalized());
  opt.saturability_residual = outcomes[best].residual;
  opt.converged = !constrained || outcomes[best].residual < 1e-6;
  return opt;
}

RealMatrix moment_matrix(const QuantumState& state,
                         std::span<const HermitianOperator> measured,
                         std::span<const HermitianOperator> generators,
                         bool* insensitive) {
  const int nm = static_cast<int>(measured.size());
  const int ng = static_cast<int>(generators.size());
  if (nm == 0 || ng == 0) {
    throw std::invalid_argument("moment_matrix: empty operator list");
  }
  if (insensitive) *insensitive = false;

  const Matrix& rho = state.density();
  RealMatrix c(nm, ng);
  for (int i = 0; i < nm; ++i) {
    for (int j = 0; j < ng; ++j) {
      const Matrix comm = measured[i].matrix() * generators[j].matrix() -
                          generators[j].matrix() * measured[i].matrix();
      c(i, j) = (rho * comm).trace().imag();  // -i <[M_i, H_j]>
    }
  }
  if (c.cwiseAbs().maxCoeff() < 1e-10) {
    if (insensitive) *insensitive = true;
    return RealMatrix::Zero(ng, ng);
  }

  RealMatrix gs = cov_matrix(state, measured).sym;
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(gs);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (!(lo > 1e-12 * std::max(1.0, hi))) {
    throw IllConditionedMoments(
        "moment_matrix: covariance of the measured set is numerically "
        "singular; choose a measured set whose moments respond to the "
        "parameters");
  }
  return c.transpose() * gs.llt().solve(c);
}

AccuracyScan accuracy_scan(std::span<const int> d_list, int restarts,
                           std::uint64_t seed) {
  if (d_list.empty()) {
    throw std::invalid_argument("accuracy_scan: empty dimension list");
  }
  AccuracyScan scan;
  scan.reports.reserve(d_list.size());
  for (std::size_t i = 0; i < d_list.size(); ++i) {
    const int d = d_list[i];
    CanonicalPair pair = build_canonical_pair(d);
    const std::uint64_t s = split_seed(seed, 7000 + i);
    AccuracyOptimum unc = optimize_a_d(pair, restarts, s, false);
    AccuracyOptimum con = optimize_a_d(pair, restarts, split_seed(s, 1), true);

    std::vector<HermitianOperator> ops{pair.q, pair.p};
    RealMatrix mm = moment_matrix(unc.state, ops, ops);

    AccuracyReport rep;
    rep.dim = d;
    rep.a_d = unc.value;
    rep.a_d_c = con.value;
    rep.a_d_m = mm.inverse().trace();
    rep.gap_delta = rep.a_d_m - rep.a_d;
    rep.state_a_d = unc.state;
    rep.state_a_d_c = con.state;
    rep.saturability_residual = con.saturability_residual;
    rep.converged = unc.converged && con.converged;
    scan.reports.push_back(std::move(rep));
  }

  // least-squares slope of log(a_d) on log(d)
  const auto n = static_cast<double>(scan.reports.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& rep : scan.reports) {
    const double x = std::log(static_cast<double>(rep.dim));
    const double y = std::log(rep.a_d);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  scan.slope = denom > 0 ? (n * sxy - sx * sy) / denom : 0.0;
  return scan;
}

MomSimResult mom_simulate_single(const QuantumState& probe,
                                 const HermitianOperator& m,
                                 const HermitianOperator& h, double theta_true,
                                 long long nu, int trials, std::uint64_t seed) {
  if (nu < 100 || trials < 1) {
    throw std::invalid_argument("mom_simulate_single: need nu >= 100, trials >= 1");
  }
  const int d = probe.dim();
  const Matrix& rho = probe.density();
  const Matrix& mm = m.matrix();
  const Matrix& mh = h.matrix();

  auto [hev, hvec] = h.eigensystem();
  auto evolved = [&](double theta) {
    Vector phase(d);
    for (int i = 0; i < d; ++i) phase(i) = std::polar(1.0, theta * hev(i));
    Matrix u = hvec * phase.asDiagonal() * hvec.adjoint();
    return Matrix(u * rho * u.adjoint());
  };
  auto mu = [&](double theta) {
    return (evolved(theta) * mm).trace().real();
  };

  const Matrix rho_t = evolved(theta_true);
  const Matrix comm = mm * mh - mh * mm;
  const double slope = -(rho_t * comm).trace().imag();  // d mu / d theta
  if (std::abs(slope) < 1e-8) {
    throw InsensitiveMeasurement(
        "mom_simulate_single: <[M, H]> vanishes on the evolved probe");
  }
  const double em = (rho_t * mm).trace().real();
  const double em2 = (rho_t * mm * mm).trace().real();
  const double var_m = em2 - em * em;

  // outcome distribution of M on the evolved probe
  Eigen::SelfAdjointEigenSolver<Matrix> mes(mm);
  std::vector<double> prob(d), outcome(d);
  for (int k = 0; k < d; ++k) {
    outcome[k] = mes.eigenvalues()(k);
    Vector v = mes.eigenvectors().col(k);
    prob[k] = std::max(0.0, (v.adjoint() * rho_t * v)(0).real());
  }
  double psum = 0;
  for (double pk : prob) psum += pk;
  for (double& pk : prob) pk /= psum;

  // mu must be monotone across the inversion window
  const double window = 0.45;
  const double lo = theta_true - window, hi = theta_true + window;
  {
    double prev = mu(lo);
    bool increasing = mu(hi) > prev;
    for (int i = 1; i <= 24; ++i) {
      const double v = mu(lo + (hi - lo) * i / 24.0);
      if ((v > prev) != increasing) {
        throw std::domain_error(
            "mom_simulate_single: mu(theta) is not monotone around theta_true");
      }
      prev = v;
    }
  }

  std::vector<double> sq_err(trials);
  parallel_for(trials, [&](std::size_t t) {
    auto rng = make_rng(seed, t);
    // multinomial draw by chained binomials
    long long remaining = nu;
    double prem = 1.0;
    double sum = 0.0;
    for (int k = 0; k < d && remaining > 0; ++k) {
      long long nk;
      if (k == d - 1 || prob[k] >= prem) {
        nk = remaining;
      } else {
        std::binomial_distribution<long long> bin(remaining, prob[k] / prem);
        nk = bin(rng);
      }
      sum += static_cast<double>(nk) * outcome[k];
      remaining -= nk;
      prem -= prob[k];
    }
    const double mean = sum / static_cast<double>(nu);

    double a = lo, b = hi;
    double fa = mu(a) - mean, fb = mu(b) - mean;
    if (fa * fb > 0) {
      // mean fell outside the window; clamp to the nearer edge
      sq_err[t] = std::abs(fa) < std::abs(fb)
                      ? (a - theta_true) * (a - theta_true)
                      : (b - theta_true) * (b - theta_true);
      return;
    }
    for (int it = 0; it < 80; ++it) {
      const double c = 0.5 * (a + b);
      const double fc = mu(c) - mean;
      if (fa * fc <= 0) {
        b = c;
        fb = fc;
      } else {
        a = c;
        fa = fc;
      }
    }
    const double est = 0.5 * (a + b);
    sq_err[t] = (est - theta_true) * (est - theta_true);
  });

  MomSimResult result;
  result.nu = nu;
  double total = 0;
  for (double e : sq_err) total += e;
  result.empirical_mse = total / trials;
  result.predicted_mse =
      var_m / (static_cast<double>(nu) * slope * slope);
  result.ratio = result.empirical_mse / result.predicted_mse;
  return result;
}

}  // namespace finiteqp
