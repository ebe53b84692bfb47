#pragma once

#include "finiteqp/operators.hpp"
#include "finiteqp/states.hpp"

#include <optional>
#include <vector>

namespace finiteqp {

/// 4x4 covariance of (Q1, P1, Q2, P2) on a bipartite state, with the local
/// 2x2 blocks and the cross block it is assembled from.
struct BipartiteCov {
  Matrix gamma_full;  // 4x4 Hermitian
  Matrix block_a;
  Matrix block_b;
  Matrix cross;
};

enum class Verdict { Entangled, Undetected };

struct WitnessResult {
  double lhs = 0.0;          // Var(Q1 - Q2) + Var(P1 + P2)
  double bound = 0.0;        // 2U, U = min pure-state tr Gamma(Q, P)
  double delta_tilde = 0.0;  // lhs - bound; negative certifies entanglement
  Verdict verdict = Verdict::Undetected;
};

struct ThermalScanPoint {
  double temperature = 0.0;
  double delta_tilde = 0.0;
  bool entangled = false;
};

struct ThermalScanResult {
  std::vector<ThermalScanPoint> points;
  /// Largest grid temperature still certifying entanglement; empty when no
  /// grid point does.
  std::optional<double> threshold;
};

BipartiteCov bipartite_cov(const QuantumState& state,
                           const CanonicalPair& pair);

/// 2U for the witness, computed once per dimension and cached.
double duan_bound(const CanonicalPair& pair);

/// Variance sum Var(Q1 - Q2) + Var(P1 + P2) against the separability bound
/// 2U; values below the bound are impossible for separable states.
WitnessResult duan_witness(const QuantumState& state,
                           const CanonicalPair& pair);

/// Scans thermal states of H = (Q1 - Q2)^2 + (P1 + P2)^2 over a uniform
/// temperature grid; defaults start the grid at 0.05 with step 0.05.
ThermalScanResult thermal_threshold(const CanonicalPair& pair,
                                    double t_min = 0.05, double t_max = 4.0,
                                    double step = 0.05);

}  // namespace finiteqp
