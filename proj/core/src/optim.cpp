#include "finiteqp/optim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace finiteqp {

NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                             const Eigen::VectorXd& x0,
                             const NelderMeadOptions& opts) {
  const int n = static_cast<int>(x0.size());
  // adaptive parameters (Gao-Han) behave better in higher dimensions
  const double alpha = 1.0;
  const double beta = 1.0 + 2.0 / n;
  const double gamma = 0.75 - 0.5 / n;
  const double delta = 1.0 - 1.0 / n;

  std::vector<Eigen::VectorXd> pts(n + 1, x0);
  std::vector<double> vals(n + 1);
  for (int i = 0; i < n; ++i) {
    double step = opts.initial_step;
    if (std::abs(x0(i)) > 1.0) step *= std::abs(x0(i));
    pts[i + 1](i) += step;
  }
  for (int i = 0; i <= n; ++i) vals[i] = f(pts[i]);

  std::vector<int> order(n + 1);
  NelderMeadResult res;
  int iter = 0;
  for (; iter < opts.max_iter; ++iter) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return vals[a] < vals[b]; });
    const int best = order[0], worst = order[n], second = order[n - 1];

    double spread = 0.0;
    for (int i = 0; i <= n; ++i) {
      spread = std::max(spread, (pts[i] - pts[best]).cwiseAbs().maxCoeff());
    }
    if (spread < opts.x_tol &&
        std::abs(vals[worst] - vals[best]) <
            opts.f_tol * (1.0 + std::abs(vals[best]))) {
      res.converged = true;
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (int i = 0; i <= n; ++i) {
      if (i != worst) centroid += pts[i];
    }
    centroid /= n;

    Eigen::VectorXd xr = centroid + alpha * (centroid - pts[worst]);
    double fr = f(xr);
    if (fr < vals[best]) {
      Eigen::VectorXd xe = centroid + beta * (xr - centroid);
      double fe = f(xe);
      if (fe < fr) {
        pts[worst] = xe;
        vals[worst] = fe;
      } else {
        pts[worst] = xr;
        vals[worst] = fr;
      }
    } else if (fr < vals[second]) {
      pts[worst] = xr;
      vals[worst] = fr;
    } else {
      const bool outside = fr < vals[worst];
      Eigen::VectorXd xc =
          outside ? Eigen::VectorXd(centroid + gamma * (xr - centroid))
                  : Eigen::VectorXd(centroid - gamma * (centroid - pts[worst]));
      double fc = f(xc);
      if (fc < std::min(fr, vals[worst])) {
        pts[worst] = xc;
        vals[worst] = fc;
      } else {
        for (int i = 0; i <= n; ++i) {
          if (i == best) continue;
          pts[i] = pts[best] + delta * (pts[i] - pts[best]);
          vals[i] = f(pts[i]);
        }
      }
    }
  }

  int arg = 0;
  for (int i = 1; i <= n; ++i) {
    if (vals[i] < vals[arg]) arg = i;
  }
  res.x = pts[arg];
  res.value = vals[arg];
  res.iterations = iter;
  return res;
}

}  // namespace finiteqp
