#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "finiteqp/covariance.hpp"
#include "finiteqp/operators.hpp"
#include "finiteqp/states.hpp"
#include "test_util.hpp"

#include <cmath>
#include <numbers>

using namespace finiteqp;
using testutil::max_abs_diff;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("covariance: convention and basic identities") {
  auto pair = build_canonical_pair(3);
  auto rng = make_rng(21, 0);

  auto st = testutil::random_pure(3, rng);
  const Complex var = covariance(st, pair.q, pair.q);
  CHECK(std::abs(var.imag()) < 1e-12);
  CHECK(var.real() >= -1e-12);

  // eigenstate of Q: covariance with anything vanishes
  Vector e0 = Vector::Zero(3);
  e0(0) = 1.0;
  auto eig = QuantumState::from_vector(e0);
  CHECK(std::abs(covariance(eig, pair.q, pair.p)) < 1e-13);

  // vacuum: <QP> covariance purely imaginary
  CHECK(std::abs(covariance(vacuum_d3(), pair.q, pair.p).real()) < 1e-12);
  CHECK(covariance(vacuum_d3(), pair.q, pair.p).imag() != 0.0);
}

TEST_CASE("cov_matrix: structure on named and random states") {
  auto pair = build_canonical_pair(3);
  auto cov = cov_matrix(vacuum_d3(), pair.q, pair.p);
  CHECK(cov.m == 2);
  CHECK(std::abs(cov.det) < 1e-12);
  CHECK(cov.trace ==
        doctest::Approx((2.0 / 9.0) * (3.0 - std::sqrt(3.0)) * kPi)
            .epsilon(1e-12));
  CHECK(max_abs_diff(cov.entries,
                     cov.sym.cast<Complex>() +
                         Complex(0, 1) * cov.skew.cast<Complex>()) == 0.0);

  Vector e0 = Vector::Zero(3);
  e0(0) = 1.0;
  auto qeig = cov_matrix(QuantumState::from_vector(e0), pair.q, pair.p);
  CHECK(std::abs(qeig.sym(0, 0)) < 1e-13);
  CHECK(std::abs(qeig.sym(0, 1)) < 1e-13);
  CHECK(std::abs(qeig.sym(1, 0)) < 1e-13);

  auto pair4 = build_canonical_pair(4);
  auto quad4 = build_quadratics(pair4);
  auto rng = make_rng(22, 0);
  for (int i = 0; i < 20; ++i) {
    auto st = testutil::random_pure(4, rng);
    std::vector<HermitianOperator> obs{pair4.q, pair4.p, quad4.t, quad4.g1};
    auto c = cov_matrix(st, obs);
    Eigen::SelfAdjointEigenSolver<Matrix> es(c.entries);
    CHECK(es.eigenvalues().minCoeff() > -1e-9);
    CHECK(c.trace >= 0.0);
  }
}

TEST_CASE("Robertson-Schrodinger gap") {
  auto pair = build_canonical_pair(3);
  CHECK(rs_inequality_gap(vacuum_d3(), pair.q, pair.p) < 1e-10);

  Vector e1 = Vector::Zero(3);
  e1(1) = 1.0;
  CHECK(std::abs(rs_inequality_gap(QuantumState::from_vector(e1), pair.q,
                                   pair.p)) < 1e-13);

  int ok = 0;
  for (int i = 0; i < 500; ++i) {
    auto rng = make_rng(23, i);
    const int d = 2 + i % 5;  // 2..6
    auto p = build_canonical_pair(d);
    auto st = testutil::random_pure(d, rng);
    const double gap = rs_inequality_gap(st, p.q, p.p);
    if (gap < -1e-10) break;
    if (std::abs(gap - cov_matrix(st, p.q, p.p).det) > 1e-12) break;
    ++ok;
  }
  CHECK(ok == 500);
}

TEST_CASE("transform: congruence action on the covariance matrix") {
  auto pair = build_canonical_pair(4);
  auto rng = make_rng(24, 0);
  auto st = testutil::random_pure(4, rng);
  auto cov = cov_matrix(st, pair.q, pair.p);

  auto same = transform(cov, RealMatrix::Identity(2, 2));
  CHECK(max_abs_diff(same.entries, cov.entries) < 1e-14);

  RealMatrix rot(2, 2);
  const double c = std::cos(kPi / 4), s = std::sin(kPi / 4);
  rot << c, -s, s, c;
  CHECK(transform(cov, rot).trace == doctest::Approx(cov.trace).epsilon(1e-12));

  RealMatrix scale = RealMatrix::Zero(2, 2);
  scale(0, 0) = 2.0;
  scale(1, 1) = 1.0;
  CHECK(transform(cov, scale).det ==
        doctest::Approx(4.0 * cov.det).epsilon(1e-10));

  // matches recomputation from transformed observables
  HermitianOperator a(rot(0, 0) * pair.q.matrix() + rot(0, 1) * pair.p.matrix());
  HermitianOperator b(rot(1, 0) * pair.q.matrix() + rot(1, 1) * pair.p.matrix());
  auto direct = cov_matrix(st, a, b);
  CHECK(max_abs_diff(transform(cov, rot).entries, direct.entries) < 1e-10);

  CHECK_THROWS_AS(transform(cov, RealMatrix::Identity(3, 3)),
                  std::invalid_argument);
}

TEST_CASE("concavity under mixing") {
  auto pair = build_canonical_pair(3);
  auto rng = make_rng(25, 0);
  auto r1 = testutil::random_pure(3, rng);
  auto r2 = testutil::random_pure(3, rng);
  std::vector<HermitianOperator> obs{pair.q, pair.p};

  CHECK(concavity_gap(r1, r2, 0.0, obs).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(concavity_gap(r1, r1, 0.4, obs).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_THROWS_AS(concavity_gap(r1, r2, 1.5, obs), std::invalid_argument);

  for (int i = 0; i < 25; ++i) {
    auto a = testutil::random_pure(3, rng);
    auto b = testutil::random_pure(3, rng);
    RealMatrix gap = concavity_gap(a, b, 0.5, obs);
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(gap);
    CHECK(es.eigenvalues().minCoeff() > -1e-10);
  }
}

TEST_CASE("determinant from the quadratic-expectation radius on zero-mean states") {
  auto pair = build_canonical_pair(4);
  auto quad = build_quadratics(pair);
  // parity averaging produces zero-mean mixed states: F^2 flips Q and P
  const Matrix parity = pair.fourier.matrix() * pair.fourier.matrix();
  int ok = 0;
  for (int i = 0; i < 200; ++i) {
    auto rng = make_rng(26, i);
    auto psi = testutil::random_unit_vector(4, rng);
    Matrix rho = 0.5 * (psi * psi.adjoint() +
                        parity * psi * psi.adjoint() * parity.adjoint());
    auto st = QuantumState::from_density(rho);
    auto cov = cov_matrix(st, pair.q, pair.p);
    const Matrix& r = st.density();
    const double t = (r * quad.t.matrix()).trace().real();
    const double g1 = (r * quad.g1.matrix()).trace().real();
    const double g2 = (r * quad.g2.matrix()).trace().real();
    const double g3 = (r * quad.g3.matrix()).trace().real();
    const double radius2 = g1 * g1 + g2 * g2 + g3 * g3;
    if (std::abs((r * pair.q.matrix()).trace()) > 1e-10) break;
    if (std::abs(cov.det - 0.25 * (t * t - radius2)) > 1e-10) break;
    ++ok;
  }
  CHECK(ok == 200);
}
