#pragma once

#include "finiteqp/covariance.hpp"
#include "finiteqp/operators.hpp"
#include "finiteqp/rng.hpp"
#include "finiteqp/states.hpp"

#include <random>

namespace testutil {

inline double max_abs_diff(const finiteqp::Matrix& a, const finiteqp::Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

inline finiteqp::Vector random_unit_vector(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  finiteqp::Vector v(d);
  for (int i = 0; i < d; ++i) v(i) = finiteqp::Complex(gauss(rng), gauss(rng));
  return v.normalized();
}

inline finiteqp::QuantumState random_pure(int d, std::mt19937_64& rng) {
  return finiteqp::QuantumState::from_vector(random_unit_vector(d, rng));
}

inline finiteqp::Matrix random_factor(int d, int k, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  finiteqp::Matrix a(d, k);
  for (int j = 0; j < k; ++j) {
    for (int i = 0; i < d; ++i) {
      a(i, j) = finiteqp::Complex(gauss(rng), gauss(rng));
    }
  }
  return a;
}

}  // namespace testutil
