#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <utility>

#include "cmcfol/metric_field.hpp"
#include "cmcfol/scalar_field.hpp"

namespace cmcfol {

using Eigen::Matrix2d;
using Eigen::MatrixXi;

// Closed surface given as a geodesic-normal graph over the geodesic sphere of
// radius sigma about center(origin): p -> center(exp_0((sigma + f(p)) p)).
class graph_surface {
public:
  isometry center;
  double sigma = 0.0;
  scalar_field f;

  graph_surface() = default;
  graph_surface(isometry c, double s, scalar_field field)
      : center(std::move(c)), sigma(s), f(std::move(field)) {
    if (sigma + f.min() <= 0.02)
      throw degenerate_error("graph_surface: total radius sigma + min f <= 0.02");
  }

  static graph_surface sphere(grid_ptr g, double s, isometry c = isometry()) {
    return graph_surface(std::move(c), s, scalar_field::zero(std::move(g)));
  }

  const grid_ptr& grid() const { return f.grid; }
  double total_radius(int j, int k) const { return sigma + f.samples(j, k); }
  double total_radius(const Vector3d& dir) const { return sigma + f.eval(dir); }
};

namespace detail {

// first and second Killing-derivative jet of the total radius at one
// parameter direction
struct radius_jet {
  Vector3d p;       // parameter direction (unit)
  double ftil;      // sigma + f
  Vector3d Lf;      // L_i ftil
  Matrix3d LLf;     // (i,j) -> L_i L_j ftil
};

struct node_forms {
  Vector3d X;          // embedded point (global chart)
  Vector3d u_rad;      // radial deformation direction at X
  Vector3d nu;         // outward unit normal (ambient metric)
  Vector3d t[3];       // tangents from the Killing frame
  int pa = 0, pb = 1;  // selected frame pair
  Matrix2d G2;         // induced metric on the pair
  Matrix2d K2;         // second fundamental form on the pair
  Matrix3d ghat;       // pair-extended inverse of the induced metric
  double H = 0.0;
  double ksq = 0.0;    // |k|^2
  double atf2 = 0.0;   // |A tracefree|^2
  double dA = 0.0;     // area element relative to the round measure
  double phi_n = 0.0;  // g(u_rad, nu)
};

inline Vector3d killing_velocity(int i, const Vector3d& p) {
  Vector3d e = Vector3d::Zero();
  e[i] = 1.0;
  return -e.cross(p);
}

// all fundamental-form data at one node from the radius jet
inline node_forms forms_at(const radius_jet& jet, const isometry& center,
                           const metric_base& g) {
  node_forms out;
  const Vector3d& p = jet.p;
  const Vector3d x = jet.ftil * p;
  const bool ident = center.is_identity();

  Matrix3d J = ident ? Matrix3d::Identity() : center.chart_jacobian(x);
  std::array<Matrix3d, 3> J2;
  if (!ident) J2 = center.chart_hessian(x);

  out.X = ident ? x : center.apply(x);
  out.u_rad = J * p;

  Vector3d tau[3], V[3];
  for (int i = 0; i < 3; ++i) {
    tau[i] = killing_velocity(i, p);
    V[i] = jet.Lf[i] * p + jet.ftil * tau[i];
    out.t[i] = J * V[i];
  }

  Matrix3d gm = g.eval(out.X);
  d1_array gam = g.christoffel(out.X);

  // frame pair with the largest Euclidean area
  double best = -1.0;
  const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  for (const auto& pr : pairs) {
    double a = out.t[pr[0]].cross(out.t[pr[1]]).squaredNorm();
    if (a > best) {
      best = a;
      out.pa = pr[0];
      out.pb = pr[1];
    }
  }

  // normal: metric-raised covector annihilating the tangent plane
  Vector3d ncov = out.t[out.pa].cross(out.t[out.pb]);
  Matrix3d ginv = gm.inverse();
  Vector3d nu = ginv * ncov;
  double len2 = nu.dot(gm * nu);
  if (!(len2 > 0.0)) throw degenerate_error("forms_at: degenerate tangent plane");
  nu /= std::sqrt(len2);
  if (nu.dot(gm * out.u_rad) < 0.0) nu = -nu;
  out.nu = nu;
  out.phi_n = nu.dot(gm * out.u_rad);

  // derivative of t_j along the frame direction i, then k(t_i, t_j)
  Matrix3d kraw;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      // L_i V_j in the parameter chart
      Vector3d LiVj = jet.LLf(i, j) * p + jet.Lf[j] * tau[i] + jet.Lf[i] * tau[j] +
                      jet.ftil * killing_velocity(j, tau[i]);
      Vector3d Dt = J * LiVj;
      if (!ident) {
        Matrix3d dJ = Matrix3d::Zero();  // directional derivative of J along V_i
        for (int c = 0; c < 3; ++c) dJ += J2[c] * V[i][c];
        Dt += dJ * V[j];
      }
      Vector3d gamij;
      for (int c = 0; c < 3; ++c) gamij[c] = out.t[i].dot(gam[c] * out.t[j]);
      kraw(i, j) = (Dt + gamij).dot(gm * nu);
    }
  kraw = 0.5 * (kraw + kraw.transpose()).eval();

  const int a = out.pa, b = out.pb;
  out.G2 << out.t[a].dot(gm * out.t[a]), out.t[a].dot(gm * out.t[b]),
      out.t[a].dot(gm * out.t[b]), out.t[b].dot(gm * out.t[b]);
  out.K2 << kraw(a, a), kraw(a, b), kraw(a, b), kraw(b, b);

  double det2 = out.G2.determinant();
  if (!(det2 > 0.0) || out.G2(0, 0) <= 0.0)
    throw degenerate_error("forms_at: induced metric not positive definite");

  Matrix2d G2inv = out.G2.inverse();
  Matrix2d shape = G2inv * out.K2;
  out.H = shape.trace();
  out.ksq = (shape * shape).trace();
  // tracefree part contracted directly; the entrywise subtraction keeps the
  // cancellation at the scale of the form entries
  Matrix2d atf = out.K2 - 0.5 * out.H * out.G2;
  Matrix2d shape_tf = G2inv * atf;
  out.atf2 = (shape_tf * shape_tf).trace();

  // round-frame Gram of the selected pair
  Matrix2d S2;
  S2 << tau[a].dot(tau[a]), tau[a].dot(tau[b]), tau[a].dot(tau[b]), tau[b].dot(tau[b]);
  out.dA = std::sqrt(det2 / S2.determinant());

  out.ghat.setZero();
  out.ghat(a, a) = G2inv(0, 0);
  out.ghat(a, b) = G2inv(0, 1);
  out.ghat(b, a) = G2inv(1, 0);
  out.ghat(b, b) = G2inv(1, 1);
  return out;
}

}  // namespace detail

// Fundamental forms of a graph surface in an ambient metric, sampled on the
// parameter grid. Scalar outputs are kept as node tables; H and |A| are also
// exposed as fields for diagnostics.
struct fundamental_forms {
  grid_ptr grid;
  double area = 0.0;
  scalar_field H;
  scalar_field A_tf_norm;  // |A tracefree| pointwise
  MatrixXd H_values;       // raw node values (no spectral smoothing)
  MatrixXd atf2_values;
  MatrixXd ksq_values;
  MatrixXd dA;             // area element per node, relative to round measure
  MatrixXd phi_n;
  std::array<MatrixXd, 3> normal;
  std::array<MatrixXd, 3> radial;
  std::array<MatrixXd, 3> position;
  std::array<std::array<MatrixXd, 3>, 3> tvec;   // tvec[i][c]
  std::array<std::array<MatrixXd, 3>, 3> ghat;   // symmetric
  MatrixXi pair_a, pair_b;

  // induced 2x2 metric on the stored frame pair at one node
  Matrix2d induced_at(int j, int k) const {
    int a = pair_a(j, k), b = pair_b(j, k);
    Matrix2d gi;
    gi << ghat[a][a](j, k), ghat[a][b](j, k), ghat[a][b](j, k), ghat[b][b](j, k);
    return gi.inverse();
  }
  Matrix2d second_at(int j, int k) const {
    Matrix2d k2;
    k2 << second_aa(j, k), second_ab(j, k), second_ab(j, k), second_bb(j, k);
    return k2;
  }
  MatrixXd second_aa, second_ab, second_bb;

  double integrate(const MatrixXd& values) const {
    double s = 0.0;
    for (int j = 0; j < grid->n_lat; ++j)
      for (int k = 0; k < grid->n_lon; ++k)
        s += grid->node_weight(j) * dA(j, k) * values(j, k);
    return s;
  }
  double norm_l2(const MatrixXd& values) const {
    return std::sqrt(integrate(values.array().square().matrix()));
  }
};

namespace detail {

inline radius_jet jet_at_node(const graph_surface& s, const killing_triple& Lf,
                              const std::array<killing_triple, 3>& LLf, int j, int k) {
  radius_jet jet;
  jet.p = scalar_field::node_dir(*s.grid(), j, k);
  jet.ftil = s.total_radius(j, k);
  jet.Lf = {Lf.x.samples(j, k), Lf.y.samples(j, k), Lf.z.samples(j, k)};
  // LLf[b] holds the Killing derivatives of L_b ftil, so component a of
  // LLf[b] is L_a L_b ftil -- already the (a,b) layout needed here
  for (int b = 0; b < 3; ++b) {
    jet.LLf(0, b) = LLf[b].x.samples(j, k);
    jet.LLf(1, b) = LLf[b].y.samples(j, k);
    jet.LLf(2, b) = LLf[b].z.samples(j, k);
  }
  return jet;
}

}  // namespace detail

inline fundamental_forms compute_fundamental_forms(const graph_surface& s, const metric& g) {
  const sphere_grid& gr = *s.grid();
  fundamental_forms out;
  out.grid = s.grid();
  killing_triple Lf = killing_derivatives(s.f);
  std::array<killing_triple, 3> LLf = {killing_derivatives(Lf.x),
                                       killing_derivatives(Lf.y),
                                       killing_derivatives(Lf.z)};
  auto alloc = [&] { return MatrixXd(gr.n_lat, gr.n_lon); };
  out.H_values = alloc();
  out.atf2_values = alloc();
  out.ksq_values = alloc();
  out.dA = alloc();
  out.phi_n = alloc();
  for (int c = 0; c < 3; ++c) {
    out.normal[c] = alloc();
    out.radial[c] = alloc();
    out.position[c] = alloc();
    for (int i = 0; i < 3; ++i) {
      out.tvec[i][c] = alloc();
      out.ghat[i][c] = alloc();
    }
  }
  out.pair_a = MatrixXi(gr.n_lat, gr.n_lon);
  out.pair_b = MatrixXi(gr.n_lat, gr.n_lon);
  out.second_aa = alloc();
  out.second_ab = alloc();
  out.second_bb = alloc();

  double area = 0.0;
#pragma omp parallel for reduction(+ : area) schedule(dynamic)
  for (int j = 0; j < gr.n_lat; ++j)
    for (int k = 0; k < gr.n_lon; ++k) {
      detail::radius_jet jet = detail::jet_at_node(s, Lf, LLf, j, k);
      detail::node_forms nf = detail::forms_at(jet, s.center, *g.ptr);
      out.H_values(j, k) = nf.H;
      out.atf2_values(j, k) = nf.atf2;
      out.ksq_values(j, k) = nf.ksq;
      out.dA(j, k) = nf.dA;
      out.phi_n(j, k) = nf.phi_n;
      out.pair_a(j, k) = nf.pa;
      out.pair_b(j, k) = nf.pb;
      out.second_aa(j, k) = nf.K2(0, 0);
      out.second_ab(j, k) = nf.K2(0, 1);
      out.second_bb(j, k) = nf.K2(1, 1);
      for (int c = 0; c < 3; ++c) {
        out.normal[c](j, k) = nf.nu[c];
        out.radial[c](j, k) = nf.u_rad[c];
        out.position[c](j, k) = nf.X[c];
        for (int i = 0; i < 3; ++i) {
          out.tvec[i][c](j, k) = nf.t[i][c];
          out.ghat[i][c](j, k) = nf.ghat(i, c);
        }
      }
      area += gr.node_weight(j) * nf.dA;
    }
  out.area = area;
  out.H = scalar_field::from_samples(out.grid, out.H_values);
  out.A_tf_norm = scalar_field::from_samples(
      out.grid, out.atf2_values.cwiseMax(0.0).cwiseSqrt());
  return out;
}

// single-point evaluation (used by the intrinsic-curvature mesh and shooting)
inline detail::node_forms forms_at_direction(const graph_surface& s, const metric& g,
                                             const killing_triple& Lf,
                                             const std::array<killing_triple, 3>& LLf,
                                             const Vector3d& p) {
  detail::radius_jet jet;
  jet.p = p;
  jet.ftil = s.sigma + s.f.eval(p);
  jet.Lf = {Lf.x.eval(p), Lf.y.eval(p), Lf.z.eval(p)};
  for (int b = 0; b < 3; ++b) {
    jet.LLf(0, b) = LLf[b].x.eval(p);
    jet.LLf(1, b) = LLf[b].y.eval(p);
    jet.LLf(2, b) = LLf[b].z.eval(p);
  }
  return detail::forms_at(jet, s.center, *g.ptr);
}

inline scalar_field cmc_residual(const graph_surface& s, const metric& g,
                                 double sigma_target) {
  fundamental_forms ff = compute_fundamental_forms(s, g);
  double target = -2.0 * std::cosh(sigma_target) / std::sinh(sigma_target);
  return scalar_field::from_samples(ff.grid,
                                    (ff.H_values.array() - target).matrix());
}

inline double hawking_mass(const fundamental_forms& ff) {
  MatrixXd integrand = ((ff.H_values.array().square() - 4.0) / 2.0).matrix();
  double willmore = ff.integrate(integrand);
  return std::sqrt(ff.area / (16.0 * pi)) * (1.0 - willmore / (8.0 * pi));
}

inline double hawking_mass(const graph_surface& s, const metric& g) {
  return hawking_mass(compute_fundamental_forms(s, g));
}

struct surface_radii {
  double sigma_A = 0.0;
  double sigma_H = 0.0;
  bool sigma_H_defined = false;
  double r_min = 0.0;
  double r_max = 0.0;
};

inline surface_radii radii(const graph_surface& s, const metric& g) {
  fundamental_forms ff = compute_fundamental_forms(s, g);
  surface_radii out;
  out.sigma_A = std::asinh(std::sqrt(ff.area / (4.0 * pi)));
  double hm = ff.integrate(ff.H_values) / ff.area;
  double var = ff.integrate((ff.H_values.array() - hm).square().matrix()) / ff.area;
  double sd = std::sqrt(std::max(0.0, var));
  if (std::abs(hm) > 0 && sd / std::abs(hm) < 1e-6 && hm < -2.0) {
    out.sigma_H_defined = true;
    double c = -hm / 2.0;  // coth sigma
    out.sigma_H = 0.5 * std::log((c + 1.0) / (c - 1.0));
  }
  out.r_min = s.sigma + s.f.min();
  out.r_max = s.sigma + s.f.max();
  return out;
}

// ---------------------------------------------------------------------------
// intrinsic curvature checks on a uniform (theta,phi) mesh

namespace detail {

// periodic spectral differentiation matrix, uniform grid of even size n
inline MatrixXd periodic_diff_matrix(int n, double period) {
  MatrixXd D = MatrixXd::Zero(n, n);
  double scale = 2.0 * pi / period;
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) {
      if (j == l) continue;
      int d = j - l;
      D(j, l) = 0.5 * ((d % 2 == 0) ? 1.0 : -1.0) /
                std::tan(pi * double(d) / n) * scale;
    }
  return D;
}

}  // namespace detail

struct gauss_check_result {
  double gauss_bonnet_defect = 0.0;
  double gauss_equation_residual_l2 = 0.0;
};

// The first fundamental form in (theta,phi) coordinates is differentiated
// spectrally on a uniform mesh, going over the poles along opposite
// meridians; Brioschi then gives the intrinsic Gauss curvature without any
// use of the second fundamental form. Gauss-Bonnet and the Gauss equation
// against the extrinsic route are reported.
inline gauss_check_result gauss_checks(const graph_surface& s, const metric& g) {
  const int L = s.grid()->L;
  const int nth = 2 * (L + 8);       // rows per half (pole to pole)
  const int nph = 2 * nth;           // even, full circle
  const int NTH = 2 * nth;           // extended rows, full 2 pi in theta
  const double hth = pi / nth, hph = 2.0 * pi / nph;

  killing_triple Lf = killing_derivatives(s.f);
  std::array<killing_triple, 3> LLf = {killing_derivatives(Lf.x),
                                       killing_derivatives(Lf.y),
                                       killing_derivatives(Lf.z)};

  MatrixXd E(nth, nph), F(nth, nph), G(nth, nph), extr(nth, nph);
#pragma omp parallel for schedule(dynamic)
  for (int j = 0; j < nth; ++j) {
    double th = (j + 0.5) * hth;
    double ct = std::cos(th), st = std::sin(th);
    for (int k = 0; k < nph; ++k) {
      double ph = k * hph;
      double cp = std::cos(ph), sp = std::sin(ph);
      Vector3d p(st * cp, st * sp, ct);
      Vector3d that(ct * cp, ct * sp, -st);
      Vector3d phat_full(-st * sp, st * cp, 0.0);  // d p / d phi
      detail::node_forms nf = forms_at_direction(s, g, Lf, LLf, p);
      // surface gradient of ftil as an ambient parameter-space vector
      Vector3d v(Lf.x.eval(p), Lf.y.eval(p), Lf.z.eval(p));
      Vector3d T = p.cross(v);
      double ftil = s.sigma + s.f.eval(p);
      bool ident = s.center.is_identity();
      Matrix3d J = ident ? Matrix3d::Identity() : s.center.chart_jacobian(ftil * p);
      Vector3d Xth = J * (T.dot(that) * p + ftil * that);
      Vector3d Xph = J * (T.dot(phat_full) * p + ftil * phat_full);
      Matrix3d gm = g->eval(nf.X);
      E(j, k) = Xth.dot(gm * Xth);
      F(j, k) = Xth.dot(gm * Xph);
      G(j, k) = Xph.dot(gm * Xph);
      curvature_sample cs = g->curvature(nf.X);
      double ricnn = nf.nu.dot(cs.ricci * nf.nu);
      extr(j, k) = cs.scalar - 2.0 * ricnn - std::max(0.0, nf.atf2) +
                   0.5 * nf.H * nf.H;
    }
  }

  // extend over the poles: theta -> 2 pi - theta pairs with phi + pi
  auto extend = [&](const MatrixXd& m, double parity) {
    MatrixXd ext(NTH, nph);
    ext.topRows(nth) = m;
    for (int j = 0; j < nth; ++j)
      for (int k = 0; k < nph; ++k)
        ext(NTH - 1 - j, (k + nph / 2) % nph) = parity * m(j, k);
    return ext;
  };
  MatrixXd Ee = extend(E, +1.0), Fe = extend(F, -1.0), Ge = extend(G, +1.0);

  MatrixXd Dth = detail::periodic_diff_matrix(NTH, 2.0 * pi);
  MatrixXd Dph = detail::periodic_diff_matrix(nph, 2.0 * pi);

  auto d_th = [&](const MatrixXd& m) { return (Dth * m).eval(); };
  auto d_ph = [&](const MatrixXd& m) { return (m * Dph.transpose()).eval(); };

  MatrixXd Eu = d_th(Ee), Ev = d_ph(Ee), Evv = d_ph(d_ph(Ee));
  MatrixXd Fu = d_th(Fe), Fv = d_ph(Fe), Fuv = d_ph(d_th(Fe));
  MatrixXd Gu = d_th(Ge), Gv = d_ph(Ge), Guu = d_th(d_th(Ge));

  MatrixXd WK(nth, nph), WR(nth, nph);
  for (int j = 0; j < nth; ++j)
    for (int k = 0; k < nph; ++k) {
      double e = Ee(j, k), f2 = Fe(j, k), g2 = Ge(j, k);
      Eigen::Matrix3d M1, M2;
      M1 << -0.5 * Evv(j, k) + Fuv(j, k) - 0.5 * Guu(j, k), 0.5 * Eu(j, k),
          Fu(j, k) - 0.5 * Ev(j, k), Fv(j, k) - 0.5 * Gu(j, k), e, f2,
          0.5 * Gv(j, k), f2, g2;
      M2 << 0.0, 0.5 * Ev(j, k), 0.5 * Gu(j, k), 0.5 * Ev(j, k), e, f2,
          0.5 * Gu(j, k), f2, g2;
      double det = e * g2 - f2 * f2;
      double K = (M1.determinant() - M2.determinant()) / (det * det);
      double rtdet = std::sqrt(det);
      WK(j, k) = K * rtdet;
      double r = 2.0 * K - extr(j, k);
      WR(j, k) = r * r * rtdet;
    }

  // The area factor behaves like |sin theta| across the poles, so plain
  // midpoint sums lose accuracy there. The smooth periodic continuation of
  // K sqrt(det) along a full meridian circle is odd under the pole crossing;
  // integrate it over the half period through its Fourier modes.
  auto half_period_integral = [&](const MatrixXd& w) {
    double total = 0.0;
    std::vector<double> col(NTH);
    for (int k = 0; k < nph; ++k) {
      for (int j = 0; j < nth; ++j) {
        col[j] = w(j, k);
        col[NTH - 1 - j] = -w(j, (k + nph / 2) % nph);
      }
      double I = 0.0;
      double c0 = 0.0;
      for (int j = 0; j < NTH; ++j) c0 += col[j];
      I += pi * c0 / NTH;
      for (int m = 1; m < NTH / 2; m += 2) {
        double b = 0.0;
        for (int j = 0; j < NTH; ++j) b += col[j] * std::sin(m * (j + 0.5) * hth);
        I += (4.0 / m) * b / NTH;
      }
      total += I * hph;
    }
    return total;
  };

  gauss_check_result out;
  out.gauss_bonnet_defect = std::abs(half_period_integral(WK) - 4.0 * pi);
  out.gauss_equation_residual_l2 = std::sqrt(std::abs(half_period_integral(WR)));
  return out;
}

// ---------------------------------------------------------------------------
// re-graphing about a new center

// Expresses the same point set as a graph about `new_center`. Ray-surface
// intersection per node by safeguarded secant iteration on the chart radius.
inline graph_surface regraph_about(const graph_surface& s, const isometry& new_center,
                                   double new_sigma = -1.0) {
  const sphere_grid& gr = *s.grid();
  if (new_sigma <= 0.0) new_sigma = s.sigma;
  isometry back = s.center.inverse() * new_center;  // new-chart ray -> old frame
  MatrixXd ft(gr.n_lat, gr.n_lon);
  double t_prev = s.sigma;
  for (int j = 0; j < gr.n_lat; ++j)
    for (int k = 0; k < gr.n_lon; ++k) {
      Vector3d q = scalar_field::node_dir(gr, j, k);
      auto resid = [&](double t) {
        Vector3d z = back.apply(t * q);
        double r = z.norm();
        return r - (s.sigma + s.f.eval(r > 1e-12 ? Vector3d(z / r) : Vector3d(0, 0, 1)));
      };
      double t0 = (k == 0 && j == 0) ? s.sigma : t_prev;
      double r0 = resid(t0);
      // bracket by marching in the downhill direction
      double step = 0.25, t1 = t0, r1 = r0;
      int guard = 0;
      while (r0 * r1 > 0.0) {
        t1 = t0 - ((r0 > 0) ? step : -step);
        if (t1 <= 0.05 || t1 > t0 + 40.0 || ++guard > 400)
          throw regraph_error("regraph_about: ray does not meet the surface");
        r1 = resid(t1);
        if (r0 * r1 > 0.0) {
          t0 = t1;
          r0 = r1;
          step *= 1.5;
        }
      }
      // bisection + secant refinement
      double lo = std::min(t0, t1), hi = std::max(t0, t1);
      double rlo = (t0 < t1) ? r0 : r1, rhi = (t0 < t1) ? r1 : r0;
      for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
        double mid = (std::abs(rhi - rlo) > 1e-300)
                         ? std::clamp(lo - rlo * (hi - lo) / (rhi - rlo),
                                      lo + 0.1 * (hi - lo), hi - 0.1 * (hi - lo))
                         : 0.5 * (lo + hi);
        double rm = resid(mid);
        if (rlo * rm <= 0.0) {
          hi = mid;
          rhi = rm;
        } else {
          lo = mid;
          rlo = rm;
        }
      }
      ft(j, k) = 0.5 * (lo + hi);
      t_prev = ft(j, k);
    }
  scalar_field fnew = scalar_field::from_samples(s.grid(), (ft.array() - new_sigma).matrix());
  return graph_surface(new_center, new_sigma, std::move(fnew));
}

}  // namespace cmcfol
