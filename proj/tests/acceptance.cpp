// End-to-end acceptance checks. Each case prints exactly one
// "CRITERION n: PASS/FAIL" line with the measured quantities.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "finiteqp/covariance.hpp"
#include "finiteqp/entanglement.hpp"
#include "finiteqp/metrology.hpp"
#include "finiteqp/operators.hpp"
#include "finiteqp/regions.hpp"
#include "finiteqp/rng.hpp"
#include "finiteqp/states.hpp"
#include "test_util.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <string>
#include <vector>

using namespace finiteqp;

namespace {

constexpr double kPi = std::numbers::pi;

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("CRITERION %d: %s - %s\n", criterion, pass ? "PASS" : "FAIL",
              detail.c_str());
  std::fflush(stdout);
  CHECK_MESSAGE(pass, "criterion ", criterion, ": ", detail);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

TEST_CASE("criterion-1 minimal variance sum at d=3") {
  Stopwatch watch;
  auto pair = build_canonical_pair(3);
  const double tau = min_sum_variances(pair).value;
  const double target = (2.0 / 9.0) * (3.0 - std::sqrt(3.0)) * kPi;
  const double err = std::abs(tau - target);
  const double secs = watch.seconds();
  report(1, err < 1e-8 && secs < 1.0,
         "tau_min=" + fmt(tau) + " |err|=" + fmt(err) + " time=" + fmt(secs) +
             "s (limit 1s)");
}

TEST_CASE("criterion-2 d=3 zero-determinant family trace curve") {
  Stopwatch watch;
  auto pair = build_canonical_pair(3);
  auto rng = make_rng(2026, 0);
  std::uniform_real_distribution<double> xi_dist(-4.0, 4.0);
  double max_det = 0.0, max_trace_err = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double xi = xi_dist(rng);
    auto cov = cov_matrix(squeezed_d3(xi), pair.q, pair.p);
    const double expected =
        (2.0 * kPi / 3.0) *
        (1.0 - std::cos(std::sqrt(8.0 / 27.0) * kPi * xi) / std::sqrt(3.0));
    max_det = std::max(max_det, std::abs(cov.det));
    max_trace_err = std::max(max_trace_err, std::abs(cov.trace - expected));
  }
  const double secs = watch.seconds();
  report(2, max_det < 1e-9 && max_trace_err < 1e-8 && secs < 1.0,
         "max|det|=" + fmt(max_det) + " max trace err=" + fmt(max_trace_err) +
             " time=" + fmt(secs) + "s (limit 1s)");
}

TEST_CASE("criterion-3 d=5 determinant lift at the minimal trace") {
  Stopwatch watch;
  auto pair = build_canonical_pair(5);
  const double tau_min = min_sum_variances(pair).value;
  auto sample = extremize_det_at_trace(pair, tau_min, 1,
                                       ExtremizeDirection::Min, 64, 42);
  const double closed =
      -(-146925.0 + 64903.0 * std::sqrt(5.0) +
        5.0 * std::sqrt(6442.0 * (210475.0 - 94119.0 * std::sqrt(5.0)))) *
      kPi * kPi / 322100.0;
  const double err = std::abs(sample.det - closed);
  const double secs = watch.seconds();
  report(3, sample.converged && err < 5e-5 && secs < 120.0,
         "det=" + fmt(sample.det) + " closed form=" + fmt(closed) +
             " |err|=" + fmt(err) + " time=" + fmt(secs) + "s (limit 120s)");
}

TEST_CASE("criterion-4 pure region contained in the mixed region at d=3") {
  Stopwatch watch;
  auto pair = build_canonical_pair(3);
  const int samples = 40;
  auto pure = trace_det_region(pair, samples, 1, 24, 11);
  auto mixed = trace_det_region(pair, samples, 3, 24, 12);

  bool contained = true;
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const auto& pure_min = pure[2 * i];
    const auto& pure_max = pure[2 * i + 1];
    const auto& mixed_min = mixed[2 * i];
    const auto& mixed_max = mixed[2 * i + 1];
    contained = contained && pure_min.converged && pure_max.converged &&
                mixed_min.converged && mixed_max.converged;
    const double below = mixed_min.det - pure_min.det;  // mixed floor lower
    const double above = pure_max.det - mixed_max.det;  // mixed ceiling higher
    worst = std::max({worst, below, above});
  }
  contained = contained && worst < 1e-6;
  const double secs = watch.seconds();
  report(4, contained && secs < 600.0,
         "40 traces, worst containment violation=" + fmt(worst) +
             " time=" + fmt(secs) + "s (limit 600s)");
}

TEST_CASE("criterion-5 even/odd extremal structure") {
  auto p5 = build_canonical_pair(5);
  auto lo5 = min_sum_variances(p5, 32);
  const bool odd_on_axis =
      std::abs(lo5.q_center) < 1e-6 && std::abs(lo5.p_center) < 1e-6;

  auto p4 = build_canonical_pair(4);
  auto lo4 = min_sum_variances(p4);
  bool orbit_ok = lo4.orbit.size() == 4;
  double orbit_worst = 0.0;
  for (const auto& [q, p] : lo4.orbit) {
    Matrix m = p4.q.matrix() * p4.q.matrix() + p4.p.matrix() * p4.p.matrix() -
               2.0 * q * p4.q.matrix() - 2.0 * p * p4.p.matrix();
    m.diagonal().array() += q * q + p * p;
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    orbit_worst = std::max(orbit_worst, std::abs(es.eigenvalues()(0) - lo4.value));
  }
  orbit_ok = orbit_ok && orbit_worst < 1e-6 &&
             std::max(std::abs(lo4.q_center), std::abs(lo4.p_center)) > 1e-3;

  bool max_ok = true;
  for (int d : {4, 5}) {
    auto pair = build_canonical_pair(d);
    auto hi = max_sum_variances(pair);
    auto quad = build_quadratics(pair);
    auto cov = cov_matrix(hi.state, pair.q, pair.p);
    max_ok = max_ok &&
             std::abs(hi.value - quad.t.eigenvalues()(d - 1)) < 1e-8 &&
             std::abs(cov.trace - hi.value) < 1e-8;
  }

  report(5, odd_on_axis && orbit_ok && max_ok,
         "d=5 center=(" + fmt(lo5.q_center) + "," + fmt(lo5.p_center) +
             "), d=4 orbit size=" + std::to_string(lo4.orbit.size()) +
             " closure err=" + fmt(orbit_worst) +
             ", top states match lambda_max(T)");
}

TEST_CASE("criterion-6 accuracy scaling over d=3..12") {
  Stopwatch watch;
  std::vector<int> dims;
  for (int d = 3; d <= 12; ++d) dims.push_back(d);
  auto scan = accuracy_scan(dims, 32, 2718);

  bool ordered = true;
  double worst_residual = 0.0;
  for (const auto& r : scan.reports) {
    ordered = ordered && r.converged && r.a_d_c >= r.a_d - 1e-8;
    worst_residual = std::max(worst_residual, r.saturability_residual);
  }
  const bool slope_ok = scan.slope > -2.0 && scan.slope < -1.0;
  const double secs = watch.seconds();
  report(6,
         ordered && slope_ok && worst_residual < 1e-6 && secs < 1800.0,
         "slope=" + fmt(scan.slope) + " (window (-2,-1)), worst residual=" +
             fmt(worst_residual) + " time=" + fmt(secs) + "s (limit 1800s)");
}

TEST_CASE("criterion-7 measurement-bound gap shrinks with dimension") {
  std::vector<int> dims;
  for (int d = 3; d <= 12; ++d) dims.push_back(d);
  auto scan = accuracy_scan(dims, 32, 3141);

  bool dominated = true, shrinking = true;
  for (std::size_t i = 0; i < scan.reports.size(); ++i) {
    dominated = dominated && scan.reports[i].a_d_m >= scan.reports[i].a_d - 1e-8;
    if (i > 0) {
      shrinking = shrinking && scan.reports[i].gap_delta <
                                   scan.reports[i - 1].gap_delta + 1e-6;
    }
  }
  std::string deltas;
  for (const auto& r : scan.reports) deltas += fmt(r.gap_delta) + " ";
  report(7, dominated && shrinking, "gap sequence: " + deltas);
}

TEST_CASE("criterion-8 thermal temperature thresholds on the 0.05 grid") {
  Stopwatch watch;
  const std::map<int, double> expected = {{3, 2.05}, {5, 2.05},  {7, 2.05},
                                          {9, 1.05}, {11, 1.05}, {13, 1.05},
                                          {15, 1.05}};
  bool all_match = true;
  std::string found;
  std::string coarse;
  for (const auto& [d, want] : expected) {
    auto pair = build_canonical_pair(d);
    auto scan = thermal_threshold(pair, 0.05, 4.0, 0.05);
    const double got = scan.threshold.value_or(-1.0);
    found += "d=" + std::to_string(d) + ":" + fmt(got) + " ";
    all_match = all_match && std::abs(got - want) < 1e-9;

    // diagnostic: the published values sit on a unit-step grid
    auto unit = thermal_threshold(pair, 0.05, 4.0, 1.0);
    coarse += fmt(unit.threshold.value_or(-1.0)) + " ";
  }
  const double secs = watch.seconds();
  std::printf("CRITERION 8 diagnostic: step-1.0 grid thresholds are %s\n",
              coarse.c_str());
  report(8, all_match && secs < 1200.0,
         "step 0.05 thresholds " + found + "(expected 2.05 x3, 1.05 x4), time=" +
             fmt(secs) + "s");
}

TEST_CASE("criterion-9 witness sanity on entangled and separable states") {
  bool lhs_ok = true;
  for (int d = 2; d <= 8; ++d) {
    auto pair = build_canonical_pair(d);
    lhs_ok = lhs_ok && duan_witness(max_entangled(d), pair).lhs < 1e-10;
  }

  int false_positives = 0;
  for (int d : {3, 5}) {
    auto pair = build_canonical_pair(d);
    for (int i = 0; i < 200; ++i) {
      auto rng = make_rng(900 + d, i);
      QuantumState st = [&] {
        auto product = [&] {
          Vector a = testutil::random_unit_vector(d, rng);
          Vector b = testutil::random_unit_vector(d, rng);
          Vector psi(d * d);
          for (int x = 0; x < d; ++x) {
            for (int y = 0; y < d; ++y) psi(x * d + y) = a(x) * b(y);
          }
          return QuantumState::from_vector(psi.normalized());
        };
        if (i % 2 == 0) return product();
        Matrix rho = Matrix::Zero(d * d, d * d);
        std::uniform_real_distribution<double> u(0.1, 1.0);
        double total = 0.0;
        for (int k = 0; k < 4; ++k) {
          const double w = u(rng);
          rho += w * product().density();
          total += w;
        }
        return QuantumState::from_density(rho / total);
      }();
      if (duan_witness(st, pair).delta_tilde < -1e-9) ++false_positives;
    }
  }
  report(9, lhs_ok && false_positives == 0,
         "max-entangled lhs < 1e-10 for d=2..8; false positives=" +
             std::to_string(false_positives) + "/400");
}

TEST_CASE("criterion-10 moment-estimation Monte Carlo matches the prediction") {
  auto pair = build_canonical_pair(3);
  auto probe = vacuum_d3();
  const std::uint64_t seed = 777;
  auto base = mom_simulate_single(probe, pair.q, pair.p, 0.1, 100000, 200, seed);
  auto doubled =
      mom_simulate_single(probe, pair.q, pair.p, 0.1, 200000, 200, seed + 1);
  const double halving = base.empirical_mse / (2.0 * doubled.empirical_mse);
  const bool ok = base.ratio >= 0.9 && base.ratio <= 1.1 && halving >= 0.85 &&
                  halving <= 1.15;
  report(10, ok,
         "mse/prediction=" + fmt(base.ratio) +
             " (window [0.9,1.1]); halving factor=" + fmt(halving) +
             " (window [0.85,1.15])");
}

TEST_CASE("criterion-11 d=2 optimizer boundary matches the exhaustive grid") {
  auto pair = build_canonical_pair(2);
  const Matrix& q = pair.q.matrix();
  const Matrix& p = pair.p.matrix();
  const Matrix q2 = q * q;
  const Matrix p2 = p * p;
  const Matrix qp = q * p;

  const double tau_min = min_sum_variances(pair).value;
  const double tau_max = max_sum_variances(pair).value;
  const int bins = 250;
  std::vector<double> grid_min(bins, 1e100), grid_max(bins, -1e100);
  const int nt = 1000, nph = 1000;  // 10^6 pure states
  for (int it = 0; it <= nt; ++it) {
    const double theta = kPi * it / nt;
    for (int ip = 0; ip < nph; ++ip) {
      const double phi = 2.0 * kPi * ip / nph;
      Vector psi(2);
      psi << std::cos(theta / 2), std::polar(std::sin(theta / 2), phi);
      auto ev = [&](const Matrix& m) { return (psi.adjoint() * m * psi)(0); };
      const double eq = ev(q).real(), ep = ev(p).real();
      const double vq = ev(q2).real() - eq * eq;
      const double vp = ev(p2).real() - ep * ep;
      const Complex c = ev(qp) - eq * ep;
      const double tr = vq + vp;
      const double det = vq * vp - std::norm(c);
      int bin = static_cast<int>((tr - tau_min) / (tau_max - tau_min) * bins);
      bin = std::clamp(bin, 0, bins - 1);
      grid_min[bin] = std::min(grid_min[bin], det);
      grid_max[bin] = std::max(grid_max[bin], det);
    }
  }

  auto samples = trace_det_region(pair, 40, 1, 24, 77);
  double worst = 0.0;
  bool all_converged = true;
  for (const auto& s : samples) {
    all_converged = all_converged && s.converged;
    int bin = static_cast<int>((s.trace - tau_min) / (tau_max - tau_min) * bins);
    bin = std::clamp(bin, 0, bins - 1);
    // compare against the matching grid envelope, allowing the neighbor bins
    double closest = 1e100;
    for (int b = std::max(0, bin - 1); b <= std::min(bins - 1, bin + 1); ++b) {
      const double env = s.maximize ? grid_max[b] : grid_min[b];
      if (env < 1e99 && env > -1e99) {
        closest = std::min(closest, std::abs(s.det - env));
      }
    }
    worst = std::max(worst, closest);
  }
  report(11, all_converged && worst < 1e-3,
         "worst boundary discrepancy=" + fmt(worst) + " over 80 samples vs "
         "10^6-state grid (tolerance 1e-3)");
}
