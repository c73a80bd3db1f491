#pragma once

// Reference solver for the epsilon-insensitive dual: a primal-dual
// interior-point method on the full 2l-variable problem
//   min 1/2 a'Qa + p'a  s.t.  y'a = 0,  0 <= a <= C
// with dense linear algebra. Independent of the SMO trainer.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace oracle {

struct DenseSvr {
  Eigen::VectorXd beta;  ///< alpha+ - alpha-
  double bias = 0.0;     ///< equality multiplier
  int iterations = 0;
  bool converged = false;
};

inline DenseSvr dense_svr(const Eigen::MatrixXd& gram, const Eigen::VectorXd& t, double C,
                          double lambda) {
  const Eigen::Index l = t.size();
  const Eigen::Index n = 2 * l;
  Eigen::VectorXd y(n), p(n);
  Eigen::MatrixXd Q(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    y[i] = i < l ? 1.0 : -1.0;
    p[i] = i < l ? lambda - t[i] : lambda + t[i - l];
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) Q(i, j) = y[i] * y[j] * gram(i % l, j % l);
  }
  Eigen::VectorXd a = Eigen::VectorXd::Constant(n, C / 2.0);
  Eigen::VectorXd zl = Eigen::VectorXd::Ones(n), zu = Eigen::VectorXd::Ones(n);
  double nu = 0.0;
  DenseSvr out;
  for (int it = 0; it < 200; ++it) {
    const Eigen::VectorXd s = (Eigen::VectorXd::Constant(n, C) - a);
    const Eigen::VectorXd rd = Q * a + p - zl + zu + nu * y;
    const double rp = y.dot(a);
    const double mu = (a.dot(zl) + s.dot(zu)) / (2.0 * static_cast<double>(n));
    out.iterations = it;
    if (mu < 1e-14 && rd.lpNorm<Eigen::Infinity>() < 1e-11 && std::abs(rp) < 1e-11) {
      out.converged = true;
      break;
    }
    const double sigma = 0.1;
    const double target = sigma * mu;
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n + 1, n + 1);
    Eigen::VectorXd rhs(n + 1);
    K.topLeftCorner(n, n) = Q;
    for (Eigen::Index i = 0; i < n; ++i) {
      K(i, i) += zl[i] / a[i] + zu[i] / s[i];
      K(i, n) = y[i];
      K(n, i) = y[i];
      rhs[i] = -rd[i] + target / a[i] - zl[i] - target / s[i] + zu[i];
    }
    rhs[n] = -rp;
    const Eigen::VectorXd d = K.fullPivLu().solve(rhs);
    const Eigen::VectorXd da = d.head(n);
    const double dnu = d[n];
    Eigen::VectorXd dzl(n), dzu(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      dzl[i] = (target - a[i] * zl[i] - zl[i] * da[i]) / a[i];
      dzu[i] = (target - s[i] * zu[i] + zu[i] * da[i]) / s[i];
    }
    double step = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (da[i] < 0) step = std::min(step, -0.99 * a[i] / da[i]);
      if (da[i] > 0) step = std::min(step, 0.99 * s[i] / da[i]);
      if (dzl[i] < 0) step = std::min(step, -0.99 * zl[i] / dzl[i]);
      if (dzu[i] < 0) step = std::min(step, -0.99 * zu[i] / dzu[i]);
    }
    a += step * da;
    zl += step * dzl;
    zu += step * dzu;
    nu += step * dnu;
  }
  out.beta = a.head(l) - a.tail(l);
  out.bias = nu;
  return out;
}

}  // namespace oracle
