#pragma once

#include "finiteqp/covariance.hpp"
#include "finiteqp/operators.hpp"
#include "finiteqp/states.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace finiteqp {

/// Requested trace target lies outside [tau_min, tau_max].
class InfeasibleTrace : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct VarianceExtremum {
  double value = 0.0;
  double q_center = 0.0;
  double p_center = 0.0;
  QuantumState state;
  /// Optimal (q, p) centers; a 4-element orbit under the pi/2 symmetry
  /// when the optimum sits off the <Q> = <P> = 0 axis.
  std::vector<std::pair<double, double>> orbit;
  bool converged = true;
};

struct RegionSample {
  double t_target = 0.0;
  double trace = 0.0;
  double det = 0.0;
  QuantumState state;
  int rank = 1;
  bool maximize = false;
  bool converged = false;
  int restarts_used = 0;
};

struct JnrPoint {
  RealVector direction;
  RealVector expectation;
  QuantumState state;
  bool degenerate = false;
};

struct CrossSection {
  double t = 0.0;
  std::vector<Eigen::Vector3d> points;  // (<G1>, <G2>, <G3>) on the slice
  double det_min = 0.0;
  double det_max = 0.0;
  bool feasible = false;
};

enum class ExtremizeDirection { Min, Max };

/// tau_min via grid search over the (q, p) spectral box followed by local
/// simplex refinement of lambda_min((Q-q)^2 + (P-p)^2).
VarianceExtremum min_sum_variances(const CanonicalPair& pair, int grid_n = 64,
                                   double refine_tol = 1e-10);

/// tau_max = lambda_max(Q^2 + P^2), attained at centers (0, 0).
VarianceExtremum max_sum_variances(const CanonicalPair& pair);

/// Algorithm: rank-constrained factor parametrization, augmented quadratic
/// penalty on |tr Gamma - t|, best result over independent seeded restarts.
RegionSample extremize_det_at_trace(const CanonicalPair& pair, double t,
                                    int rank, ExtremizeDirection direction,
                                    int restarts, std::uint64_t seed);

/// Min- and max-det samples on a uniform trace grid over [tau_min, tau_max].
std::vector<RegionSample> trace_det_region(const CanonicalPair& pair,
                                           int n_trace_samples, int rank,
                                           int restarts, std::uint64_t seed);

/// Supporting point of the joint numerical range in direction n: expectation
/// tuple of the top eigenvector of sum_i n_i A_i.
JnrPoint jnr_support(std::span<const HermitianOperator> operators,
                     const RealVector& direction);

/// Cross-section J_t of the six-operator JNR at <T> = t, <Q> = <P> = 0,
/// sampled with rank-2 factor states; determinant extrema recovered from
/// det = (t^2 - r^2)/4.
CrossSection jnr_cross_section(const CanonicalPair& pair, double t,
                               int n_directions, std::uint64_t seed);

}  // namespace finiteqp
