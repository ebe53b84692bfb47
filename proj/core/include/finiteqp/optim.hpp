#pragma once

#include <Eigen/Dense>
#include <functional>

namespace finiteqp {

struct NelderMeadOptions {
  int max_iter = 4000;
  double x_tol = 1e-13;
  double f_tol = 1e-16;
  double initial_step = 0.5;
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Derivative-free simplex descent (adaptive-parameter Nelder-Mead).
NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                             const Eigen::VectorXd& x0,
                             const NelderMeadOptions& opts = {});

}  // namespace finiteqp
