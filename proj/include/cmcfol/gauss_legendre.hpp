#pragma once

#include <cmath>
#include <vector>

namespace cmcfol {

struct quadrature_rule {
  std::vector<double> nodes;    // abscissae
  std::vector<double> weights;
};

// Gauss-Legendre rule on [-1,1]. Nodes by Newton iteration on P_n with
// asymptotic initial guesses; exact for polynomials of degree <= 2n-1.
inline quadrature_rule gauss_legendre(int n) {
  quadrature_rule q;
  q.nodes.resize(n);
  q.weights.resize(n);
  const double pi = 3.14159265358979323846;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      // evaluate P_n(x) and P_n'(x) by the three-term recurrence
      double p0 = 1.0, p1 = x;
      for (int l = 2; l <= n; ++l) {
        double p2 = ((2 * l - 1) * x * p1 - (l - 1) * p0) / l;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    q.nodes[i] = -x;
    q.nodes[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    q.weights[i] = w;
    q.weights[n - 1 - i] = w;
  }
  return q;
}

}  // namespace cmcfol
