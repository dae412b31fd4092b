#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <set>
#include <utility>

#include "cmcfol/sphere_grid.hpp"

namespace cmcfol {

using Eigen::MatrixXd;
using Eigen::Vector3d;
using Eigen::VectorXd;

// Band-limited scalar on S^2: spherical-harmonic coefficients plus the grid
// samples, kept consistent. Coefficients are stored in (l,m) lexicographic
// order, sh_index(l,m) = l(l+1)+m.
class scalar_field {
public:
  grid_ptr grid;
  VectorXd coeffs;    // size (L+1)^2
  MatrixXd samples;   // n_lat x n_lon

  scalar_field() = default;

  static scalar_field zero(grid_ptr g) {
    scalar_field f;
    f.grid = std::move(g);
    f.coeffs = VectorXd::Zero(f.grid->n_coeffs());
    f.samples = MatrixXd::Zero(f.grid->n_lat, f.grid->n_lon);
    return f;
  }

  static scalar_field from_coeffs(grid_ptr g, VectorXd c) {
    if (c.size() != g->n_coeffs())
      throw shape_error("scalar_field: coefficient count does not match grid");
    scalar_field f;
    f.grid = std::move(g);
    f.coeffs = std::move(c);
    f.samples = synthesize(*f.grid, f.coeffs);
    return f;
  }

  static scalar_field from_samples(grid_ptr g, MatrixXd s) {
    if (s.rows() != g->n_lat || s.cols() != g->n_lon)
      throw shape_error("scalar_field: sample shape does not match grid");
    scalar_field f;
    f.grid = std::move(g);
    f.coeffs = analyze(*f.grid, s);
    f.samples = std::move(s);
    return f;
  }

  static scalar_field from_function(grid_ptr g,
                                    const std::function<double(const Vector3d&)>& fn) {
    MatrixXd s(g->n_lat, g->n_lon);
    for (int j = 0; j < g->n_lat; ++j)
      for (int k = 0; k < g->n_lon; ++k)
        s(j, k) = fn(node_dir(*g, j, k));
    return from_samples(std::move(g), std::move(s));
  }

  static Vector3d node_dir(const sphere_grid& g, int j, int k) {
    return {g.sin_th[j] * std::cos(g.phi[k]), g.sin_th[j] * std::sin(g.phi[k]),
            g.x[j]};
  }

  // forward transform: samples -> coefficients
  static VectorXd analyze(const sphere_grid& g, const MatrixXd& s) {
    const int L = g.L, T = sphere_grid::tri_count(L);
    const double dphi = 2.0 * pi / g.n_lon;
    const double rt2 = std::sqrt(2.0);
    // longitudinal stage
    MatrixXd gc(L + 1, g.n_lat), gs(L + 1, g.n_lat);
    for (int m = 0; m <= L; ++m) {
      const double* cm = &g.cos_mphi[static_cast<size_t>(m) * g.n_lon];
      const double* sm = &g.sin_mphi[static_cast<size_t>(m) * g.n_lon];
      for (int j = 0; j < g.n_lat; ++j) {
        double ac = 0.0, as = 0.0;
        for (int k = 0; k < g.n_lon; ++k) {
          ac += s(j, k) * cm[k];
          as += s(j, k) * sm[k];
        }
        gc(m, j) = ac * dphi;
        gs(m, j) = as * dphi;
      }
    }
    // Legendre stage
    VectorXd c = VectorXd::Zero(sh_count(L));
    for (int m = 0; m <= L; ++m)
      for (int l = m; l <= L; ++l) {
        double ac = 0.0, as = 0.0;
        const int t = sphere_grid::tri_index(l, m);
        for (int j = 0; j < g.n_lat; ++j) {
          double qw = g.w[j] * g.Q[static_cast<size_t>(j) * T + t];
          ac += qw * gc(m, j);
          if (m > 0) as += qw * gs(m, j);
        }
        if (m == 0) {
          c[sh_index(l, 0)] = ac;
        } else {
          c[sh_index(l, m)] = rt2 * ac;
          c[sh_index(l, -m)] = rt2 * as;
        }
      }
    return c;
  }

  // inverse transform: coefficients -> samples. `use_dQ` swaps the Legendre
  // table for its theta-derivative (synthesis of the theta-derivative).
  static MatrixXd synthesize(const sphere_grid& g, const VectorXd& c,
                             bool use_dQ = false) {
    const int L = g.L, T = sphere_grid::tri_count(L);
    const std::vector<double>& Qt = use_dQ ? g.dQ : g.Q;
    const double rt2 = std::sqrt(2.0);
    MatrixXd hc(L + 1, g.n_lat), hs(L + 1, g.n_lat);
    for (int m = 0; m <= L; ++m)
      for (int j = 0; j < g.n_lat; ++j) {
        double ac = 0.0, as = 0.0;
        const double* q = &Qt[static_cast<size_t>(j) * T];
        for (int l = m; l <= L; ++l) {
          const double ql = q[sphere_grid::tri_index(l, m)];
          if (m == 0) {
            ac += ql * c[sh_index(l, 0)];
          } else {
            ac += ql * rt2 * c[sh_index(l, m)];
            as += ql * rt2 * c[sh_index(l, -m)];
          }
        }
        hc(m, j) = ac;
        hs(m, j) = as;
      }
    MatrixXd s = MatrixXd::Zero(g.n_lat, g.n_lon);
    for (int m = 0; m <= L; ++m) {
      const double* cm = &g.cos_mphi[static_cast<size_t>(m) * g.n_lon];
      const double* sm = &g.sin_mphi[static_cast<size_t>(m) * g.n_lon];
      for (int j = 0; j < g.n_lat; ++j) {
        const double ac = hc(m, j), as = hs(m, j);
        if (m == 0) {
          for (int k = 0; k < g.n_lon; ++k) s(j, k) += ac;
        } else {
          for (int k = 0; k < g.n_lon; ++k) s(j, k) += ac * cm[k] + as * sm[k];
        }
      }
    }
    return s;
  }

  // coefficient map of d/dphi
  static VectorXd dphi_coeffs(const sphere_grid& g, const VectorXd& c) {
    VectorXd d = VectorXd::Zero(c.size());
    for (int l = 1; l <= g.L; ++l)
      for (int m = 1; m <= l; ++m) {
        d[sh_index(l, m)] = m * c[sh_index(l, -m)];
        d[sh_index(l, -m)] = -m * c[sh_index(l, m)];
      }
    return d;
  }

  double value(int j, int k) const { return samples(j, k); }

  // pointwise synthesis at an arbitrary direction
  double eval(const Vector3d& dir) const {
    const sphere_grid& g = *grid;
    const int L = g.L, T = sphere_grid::tri_count(L);
    double r = dir.norm();
    if (r == 0.0) throw shape_error("scalar_field::eval: zero direction");
    double cth = dir[2] / r;
    cth = std::min(1.0, std::max(-1.0, cth));
    double sth = std::sqrt(1.0 - cth * cth);
    double ph = std::atan2(dir[1], dir[0]);
    std::vector<double> q(T), dq(T);
    sphere_grid::legendre_row(L, cth, sth, q.data(), dq.data());
    const double rt2 = std::sqrt(2.0);
    double out = 0.0;
    for (int m = 0; m <= L; ++m) {
      double ac = 0.0, as = 0.0;
      for (int l = m; l <= L; ++l) {
        const double ql = q[sphere_grid::tri_index(l, m)];
        if (m == 0)
          ac += ql * coeffs[sh_index(l, 0)];
        else {
          ac += ql * rt2 * coeffs[sh_index(l, m)];
          as += ql * rt2 * coeffs[sh_index(l, -m)];
        }
      }
      out += (m == 0) ? ac : ac * std::cos(m * ph) + as * std::sin(m * ph);
    }
    return out;
  }

  scalar_field with_coeffs(VectorXd c) const { return from_coeffs(grid, std::move(c)); }
  scalar_field with_samples(MatrixXd s) const { return from_samples(grid, std::move(s)); }

  scalar_field operator+(const scalar_field& o) const { return with_coeffs(coeffs + o.coeffs); }
  scalar_field operator-(const scalar_field& o) const { return with_coeffs(coeffs - o.coeffs); }
  scalar_field operator*(double a) const { return with_coeffs(a * coeffs); }
  scalar_field operator+(double a) const {
    VectorXd c = coeffs;
    c[0] += a * std::sqrt(4.0 * pi);
    return with_coeffs(std::move(c));
  }

  double max_abs() const { return samples.cwiseAbs().maxCoeff(); }
  double min() const { return samples.minCoeff(); }
  double max() const { return samples.maxCoeff(); }
};

inline scalar_field operator*(double a, const scalar_field& f) { return f * a; }

// quadrature integral against the round measure
inline double integrate(const scalar_field& f) {
  return f.coeffs[0] * std::sqrt(4.0 * pi);
}

inline double mean(const scalar_field& f) { return integrate(f) / (4.0 * pi); }

inline double norm_l2(const scalar_field& f) { return f.coeffs.norm(); }

// round-sphere Laplace-Beltrami: -l(l+1) per degree
inline scalar_field laplace_beltrami(const scalar_field& f) {
  VectorXd c = f.coeffs;
  for (int l = 0; l <= f.grid->L; ++l)
    for (int m = -l; m <= l; ++m) c[sh_index(l, m)] *= -double(l) * (l + 1);
  return f.with_coeffs(std::move(c));
}

// zero all coefficients outside the listed degrees
inline scalar_field project_band(const scalar_field& f, const std::set<int>& degrees) {
  for (int l : degrees)
    if (l < 0 || l > f.grid->L) throw shape_error("project_band: degree outside [0,L]");
  VectorXd c = VectorXd::Zero(f.coeffs.size());
  for (int l : degrees)
    for (int m = -l; m <= l; ++m) c[sh_index(l, m)] = f.coeffs[sh_index(l, m)];
  return f.with_coeffs(std::move(c));
}

struct killing_triple {
  scalar_field x, y, z;
};

// Derivatives along the three rotational Killing fields, with the sign
// convention (L_i f)(p) = -((e_i x p) . grad f), so that L_z(x-coord) = y.
// Exact in coefficient space: rotations preserve the degree bands.
inline killing_triple killing_derivatives(const scalar_field& f) {
  const sphere_grid& g = *f.grid;
  MatrixXd ft = scalar_field::synthesize(g, f.coeffs, /*use_dQ=*/true);
  MatrixXd fp = scalar_field::synthesize(g, scalar_field::dphi_coeffs(g, f.coeffs));
  MatrixXd lx(g.n_lat, g.n_lon), ly(g.n_lat, g.n_lon), lz(g.n_lat, g.n_lon);
  for (int j = 0; j < g.n_lat; ++j) {
    const double cot = g.x[j] / g.sin_th[j];
    for (int k = 0; k < g.n_lon; ++k) {
      const double cp = std::cos(g.phi[k]), sp = std::sin(g.phi[k]);
      lx(j, k) = sp * ft(j, k) + cp * cot * fp(j, k);
      ly(j, k) = -cp * ft(j, k) + sp * cot * fp(j, k);
      lz(j, k) = -fp(j, k);
    }
  }
  return {scalar_field::from_samples(f.grid, std::move(lx)),
          scalar_field::from_samples(f.grid, std::move(ly)),
          scalar_field::from_samples(f.grid, std::move(lz))};
}

// |grad f|^2 on the unit sphere from the Killing values
inline scalar_field grad_sq(const scalar_field& f) {
  killing_triple d = killing_derivatives(f);
  MatrixXd s = d.x.samples.array().square() + d.y.samples.array().square() +
               d.z.samples.array().square();
  return scalar_field::from_samples(f.grid, std::move(s));
}

}  // namespace cmcfol
