#pragma once

#include <cmath>
#include <memory>
#include <vector>

#include "cmcfol/errors.hpp"
#include "cmcfol/gauss_legendre.hpp"

namespace cmcfol {

inline constexpr double pi = 3.14159265358979323846;

// Coefficient index for real spherical harmonics, (l,m) lexicographic with
// m in [-l,l]. m>0 holds the cos(m phi) coefficient, m<0 the sin(|m| phi) one.
inline int sh_index(int l, int m) { return l * (l + 1) + m; }
inline int sh_count(int L) { return (L + 1) * (L + 1); }

// Quadrature/synthesis grid on S^2: Gauss-Legendre in colatitude, equispaced
// longitudes. Holds the normalized associated Legendre tables Q_lm(theta_j)
// and their theta-derivatives; with these the forward/inverse transforms are
// plain dense sums.
//
// Normalization: Y_{l,0} = Q_{l,0},  Y^c_{l,m} = sqrt(2) Q_{l,m} cos(m phi),
// Y^s_{l,m} = sqrt(2) Q_{l,m} sin(m phi), all unit L^2 norm against the
// round measure.
class sphere_grid {
public:
  int L;
  int n_lat;
  int n_lon;
  std::vector<double> x;        // cos(theta_j), ascending
  std::vector<double> w;        // GL weights
  std::vector<double> theta;    // colatitudes
  std::vector<double> phi;      // longitudes
  std::vector<double> sin_th;
  // Q[j*tri + t], t = tri_index(l,m); same layout for dQ (d/dtheta).
  std::vector<double> Q;
  std::vector<double> dQ;
  std::vector<double> cos_mphi; // [m*n_lon + k]
  std::vector<double> sin_mphi;

  static int default_n_lat(int L) { return (3 * (L + 1) + 1) / 2; }
  static int default_n_lon(int L) {
    int n = 3 * L + 1;
    return n + (n & 1); // even count (pole-pairing in intrinsic curvature)
  }

  explicit sphere_grid(int L_, int n_lat_ = 0, int n_lon_ = 0)
      : L(L_),
        n_lat(n_lat_ > 0 ? n_lat_ : default_n_lat(L_)),
        n_lon(n_lon_ > 0 ? n_lon_ : default_n_lon(L_)) {
    if (L < 0) throw shape_error("sphere_grid: L must be nonnegative");
    if (n_lat < default_n_lat(L) || n_lon < 3 * L + 1)
      throw shape_error("sphere_grid: dealiasing margins violated");
    auto gl = gauss_legendre(n_lat);
    x = gl.nodes;
    w = gl.weights;
    theta.resize(n_lat);
    sin_th.resize(n_lat);
    for (int j = 0; j < n_lat; ++j) {
      theta[j] = std::acos(x[j]);
      sin_th[j] = std::sqrt(1.0 - x[j] * x[j]);
    }
    phi.resize(n_lon);
    for (int k = 0; k < n_lon; ++k) phi[k] = 2.0 * pi * k / n_lon;

    const int T = tri_count(L);
    Q.assign(static_cast<size_t>(n_lat) * T, 0.0);
    dQ.assign(static_cast<size_t>(n_lat) * T, 0.0);
    for (int j = 0; j < n_lat; ++j)
      legendre_row(L, x[j], sin_th[j], &Q[static_cast<size_t>(j) * T],
                   &dQ[static_cast<size_t>(j) * T]);

    cos_mphi.resize(static_cast<size_t>(L + 1) * n_lon);
    sin_mphi.resize(static_cast<size_t>(L + 1) * n_lon);
    for (int m = 0; m <= L; ++m)
      for (int k = 0; k < n_lon; ++k) {
        cos_mphi[static_cast<size_t>(m) * n_lon + k] = std::cos(m * phi[k]);
        sin_mphi[static_cast<size_t>(m) * n_lon + k] = std::sin(m * phi[k]);
      }
  }

  int n_nodes() const { return n_lat * n_lon; }
  int n_coeffs() const { return sh_count(L); }
  // node area weight so that sum over nodes approximates the round integral
  double node_weight(int j) const { return w[j] * 2.0 * pi / n_lon; }

  static int tri_index(int l, int m) { return l * (l + 1) / 2 + m; }
  static int tri_count(int L) { return (L + 1) * (L + 2) / 2; }

  // Normalized associated Legendre values Q_lm(theta) and d/dtheta for all
  // 0 <= m <= l <= L at one colatitude (cth = cos, sth = sin). Stable
  // ascending recurrences; the derivative is carried through alongside.
  static void legendre_row(int L, double cth, double sth, double* q,
                           double* dq) {
    const double q00 = 1.0 / std::sqrt(4.0 * pi);
    q[0] = q00;
    dq[0] = 0.0;
    for (int m = 1; m <= L; ++m) {
      // Q_mm = sqrt((2m+1)/(2m)) sin(theta) Q_{m-1,m-1}
      double c = std::sqrt((2.0 * m + 1.0) / (2.0 * m));
      int t = tri_index(m, m), tp = tri_index(m - 1, m - 1);
      q[t] = c * sth * q[tp];
      dq[t] = c * (cth * q[tp] + sth * dq[tp]);
    }
    for (int m = 0; m < L; ++m) {
      double c = std::sqrt(2.0 * m + 3.0);
      int t = tri_index(m + 1, m), tp = tri_index(m, m);
      q[t] = c * cth * q[tp];
      dq[t] = c * (-sth * q[tp] + cth * dq[tp]);
    }
    for (int m = 0; m <= L; ++m)
      for (int l = m + 2; l <= L; ++l) {
        double a = std::sqrt((4.0 * l * l - 1.0) / (double(l) * l - double(m) * m));
        double b = std::sqrt((double(l - 1) * (l - 1) - double(m) * m) /
                             (4.0 * double(l - 1) * (l - 1) - 1.0));
        int t = tri_index(l, m), t1 = tri_index(l - 1, m), t2 = tri_index(l - 2, m);
        q[t] = a * (cth * q[t1] - b * q[t2]);
        dq[t] = a * (-sth * q[t1] + cth * dq[t1] - b * dq[t2]);
      }
  }
};

using grid_ptr = std::shared_ptr<const sphere_grid>;

inline grid_ptr make_grid(int L, int n_lat = 0, int n_lon = 0) {
  return std::make_shared<sphere_grid>(L, n_lat, n_lon);
}

}  // namespace cmcfol
