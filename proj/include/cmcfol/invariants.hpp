#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "cmcfol/graph_surface.hpp"
#include "cmcfol/metric_field.hpp"

namespace cmcfol {

using Eigen::Vector4d;

// normalization of the charge integral, pinned once against the
// ads_schwarzschild family (mass_charge(ads(m), r -> inf) = (m,0,0,0))
inline constexpr double mass_omega = 16.0 * 3.14159265358979323846;

enum class causal_class { timelike_future, timelike_past, null_or_spacelike };

struct mass_vector {
  Vector4d m = Vector4d::Zero();
  double radius_used = 0.0;
  std::string version;  // "charge" or "ricci"

  double minkowski_sq() const { return -m[0] * m[0] + m.tail<3>().squaredNorm(); }
  double total() const {  // +-sqrt(-|m|^2), signed like m0
    double q = -minkowski_sq();
    double t = q > 0 ? std::sqrt(q) : 0.0;
    return m[0] >= 0 ? t : -t;
  }
  causal_class classification() const {
    double scale = 1e-12 * (1.0 + m.squaredNorm());
    if (minkowski_sq() < -scale)
      return m[0] > 0 ? causal_class::timelike_future : causal_class::timelike_past;
    return causal_class::null_or_spacelike;
  }
  bool timelike() const { return classification() != causal_class::null_or_spacelike; }
};

namespace detail {

// static potentials of the hyperbolic space and their gradients
inline double potential_V(int mu, double r, const Vector3d& n) {
  return mu == 0 ? std::cosh(r) : std::sinh(r) * n[mu - 1];
}
inline Vector3d potential_grad(int mu, double r, const Vector3d& n) {
  if (mu == 0) return std::sinh(r) * n;
  double ch = std::cosh(r);
  Vector3d e = Vector3d::Zero();
  e[mu - 1] = 1.0;
  return ch * n[mu - 1] * n + (r / std::sinh(r)) * (e - n[mu - 1] * n);
}

inline int mass_grid_L(const metric_base& g) {
  if (auto* p = dynamic_cast<const perturbed_metric*>(&g))
    return std::max(mass_grid_L(*p->base), p->spec.lmax + 6);
  if (auto* c = dynamic_cast<const convex_metric*>(&g))
    return std::max(mass_grid_L(*c->A), mass_grid_L(*c->B));
  if (auto* b = dynamic_cast<const pulled_back_metric*>(&g))
    return mass_grid_L(*b->base) + 4;
  return 16;
}

}  // namespace detail

// Chruściel–Herzlich charge integral over the coordinate sphere of radius r,
// all reference-metric operations in closed form.
inline mass_vector mass_charge(const metric& g, double r, int angular_L = 0) {
  g->check_curvature_domain(Vector3d(r, 0, 0));
  hyperbolic_metric href;
  if (angular_L <= 0) angular_L = detail::mass_grid_L(*g.ptr);
  auto gr = make_grid(angular_L);
  Vector4d total = Vector4d::Zero();
  const double sh2 = std::sinh(r) * std::sinh(r);
#pragma omp parallel for schedule(dynamic)
  for (int j = 0; j < gr->n_lat; ++j) {
    Vector4d row = Vector4d::Zero();
    for (int k = 0; k < gr->n_lon; ++k) {
      Vector3d n = scalar_field::node_dir(*gr, j, k);
      Vector3d p = r * n;
      Matrix3d h = href.eval(p);
      Matrix3d hinv = h.inverse();
      d1_array dh = href.d1(p);
      d1_array gam = href.christoffel(p);
      Matrix3d e = g->eval(p) - h;
      d1_array de = g->d1(p);
      for (int a = 0; a < 3; ++a) de[a] -= dh[a];

      double tre = (hinv * e).trace();
      Matrix3d U = tre * h - e;
      // d_a tr(e) and d_a U
      d1_array dU;
      for (int a = 0; a < 3; ++a) {
        Matrix3d dhinv = -hinv * dh[a] * hinv;
        double dtre = (dhinv * e).trace() + (hinv * de[a]).trace();
        dU[a] = dtre * h + tre * dh[a] - de[a];
      }
      // (div U)_c = h^{ab} (d_a U_bc - Gam^d_ab U_dc - Gam^d_ac U_bd)
      Vector3d divU = Vector3d::Zero();
      for (int c = 0; c < 3; ++c) {
        double s = 0.0;
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b) {
            double cov = dU[a](b, c);
            for (int d = 0; d < 3; ++d)
              cov -= gam[d](a, b) * U(d, c) + gam[d](a, c) * U(b, d);
            s += hinv(a, b) * cov;
          }
        divU[c] = s;
      }
      double w = gr->node_weight(j) * sh2;
      for (int mu = 0; mu < 4; ++mu) {
        Vector3d gradV = detail::potential_grad(mu, r, n);
        double V = detail::potential_V(mu, r, n);
        // normal is the h-unit radial direction n
        double val = gradV.dot(U * n) - V * divU.dot(n);
        row[mu] += w * val;
      }
    }
#pragma omp critical
    total += row;
  }
  mass_vector out;
  out.m = total / mass_omega;
  out.radius_used = r;
  out.version = "charge";
  return out;
}

// Ricci version: -(1/8 pi) int G(X^mu, nu) dmu with G = Ric - (S/2 + 1) g and
// the conformal fields in their chart form; nu and the area measure are those
// of the ambient metric.
inline mass_vector mass_ricci(const metric& g, double r, int angular_L = 0) {
  g->check_curvature_domain(Vector3d(r, 0, 0));
  if (angular_L <= 0) angular_L = detail::mass_grid_L(*g.ptr);
  auto gr = make_grid(angular_L);
  Vector4d total = Vector4d::Zero();
#pragma omp parallel for schedule(dynamic)
  for (int j = 0; j < gr->n_lat; ++j) {
    Vector4d row = Vector4d::Zero();
    for (int k = 0; k < gr->n_lon; ++k) {
      Vector3d n = scalar_field::node_dir(*gr, j, k);
      Vector3d p = r * n;
      curvature_sample cs = g->curvature(p);
      Matrix3d G = cs.ricci - (0.5 * cs.scalar + 1.0) * cs.g;
      // outward unit normal of the coordinate sphere under g
      Vector3d nu = cs.g.inverse() * n;
      nu /= std::sqrt(nu.dot(cs.g * nu));
      // area element of g on the sphere relative to the round measure
      Vector3d e1 = n.cross(std::abs(n[2]) < 0.9 ? Vector3d(0, 0, 1) : Vector3d(1, 0, 0))
                        .normalized();
      Vector3d e2 = n.cross(e1);
      Eigen::Matrix2d g2;
      g2 << (r * e1).dot(cs.g * (r * e1)), (r * e1).dot(cs.g * (r * e2)),
          (r * e1).dot(cs.g * (r * e2)), (r * e2).dot(cs.g * (r * e2));
      double dmu = std::sqrt(g2.determinant());
      double sh = std::sinh(r);
      double w = gr->node_weight(j) * dmu;
      for (int mu = 0; mu < 4; ++mu) {
        Vector3d X;
        if (mu == 0) {
          X = sh * n;
        } else {
          X = Vector3d::Zero();
          X[mu - 1] = 1.0;
          X -= sh * n[mu - 1] * n;
        }
        row[mu] += -w * X.dot(G * nu) / (8.0 * pi);
      }
    }
#pragma omp critical
    total += row;
  }
  mass_vector out;
  out.m = total;
  out.radius_used = r;
  out.version = "ricci";
  return out;
}

// ---------------------------------------------------------------------------
// hyperbolic centers

struct center_report {
  Vector4d c_prime = Vector4d::Zero();
  Vector3d center_point = Vector3d::Zero();
  double defect = 0.0;  // Minkowski square of c'
};

inline center_report hyperbolic_center(const graph_surface& s,
                                       bool use_reference_metric = true,
                                       const metric& ambient = metric()) {
  metric measure_metric =
      use_reference_metric ? metric::hyperbolic() : ambient;
  if (!measure_metric.valid())
    throw shape_error("hyperbolic_center: ambient metric required when not using the reference");
  fundamental_forms ff = compute_fundamental_forms(s, measure_metric);
  const sphere_grid& gr = *ff.grid;
  Vector4d c = Vector4d::Zero();
  for (int j = 0; j < gr.n_lat; ++j)
    for (int k = 0; k < gr.n_lon; ++k) {
      Vector3d X(ff.position[0](j, k), ff.position[1](j, k), ff.position[2](j, k));
      c += gr.node_weight(j) * ff.dA(j, k) * hyperboloid_embed(X);
    }
  center_report out;
  out.c_prime = c;
  out.defect = -c[0] * c[0] + c.tail<3>().squaredNorm();
  if (out.defect >= 0.0)
    throw causal_error("hyperbolic_center: first moment is not timelike");
  Vector4d unit = c / std::sqrt(-out.defect);
  out.center_point = hyperboloid_chart(unit);
  return out;
}

inline Vector3d center_of_mass(const mass_vector& mv) {
  if (!mv.timelike()) throw causal_error("center_of_mass: mass vector is not timelike");
  double norm = std::sqrt(-mv.minkowski_sq());
  Vector4d unit = mv.m / norm;
  if (mv.m[0] < 0) unit = -unit;  // past-pointing: use the opposite ray
  return hyperboloid_chart(unit);
}

// ---------------------------------------------------------------------------
// pseudo-center and balancing

// Z^i = 1/2 int_{S^2} (sinh ftil cosh ftil - ftil) p^i dsigma
inline Vector3d pseudo_center(const graph_surface& s) {
  if (!s.center.is_identity(1e-14))
    throw frame_error("pseudo_center: surface must be graphed about the identity center");
  const sphere_grid& gr = *s.grid();
  Vector3d Z = Vector3d::Zero();
  for (int j = 0; j < gr.n_lat; ++j)
    for (int k = 0; k < gr.n_lon; ++k) {
      double ft = s.total_radius(j, k);
      double val = 0.5 * (std::sinh(ft) * std::cosh(ft) - ft);
      Z += gr.node_weight(j) * val * scalar_field::node_dir(gr, j, k);
    }
  return Z;
}

struct balance_trace_row {
  int iteration;
  double z_norm;
  double rapidity_step;
};

// Boost the surface toward the opposite of its pseudo-center until Z
// vanishes; |Z| must decrease in every accepted step (step halving on
// non-decrease, stall after 8 halvings).
inline isometry balance(const graph_surface& s, std::vector<balance_trace_row>* trace = nullptr,
                        int max_iter = 60) {
  if (!s.center.is_identity(1e-14))
    throw frame_error("balance: surface must be graphed about the identity center");
  double sh = std::sinh(s.sigma);
  const double tol = 1e-8 * sh * sh * sh;
  isometry psi;  // accumulated isometry applied to the surface
  graph_surface cur = s;
  Vector3d Z = pseudo_center(cur);
  if (trace) trace->push_back({0, Z.norm(), 0.0});
  if (Z.norm() <= tol) return psi;
  double t = std::min(0.1, Z.norm() / (sh * sh * 4.0 * pi));
  for (int it = 1; it <= max_iter; ++it) {
    int halvings = 0;
    for (;;) {
      Vector3d d = -Z.normalized();
      isometry trial = isometry::boost(t, d) * psi;
      graph_surface moved(trial, s.sigma, s.f);
      graph_surface regraphed = regraph_about(moved, isometry());
      Vector3d Znew = pseudo_center(regraphed);
      if (Znew.norm() < Z.norm()) {
        double decrease = Z.norm() - Znew.norm();
        psi = trial;
        cur = regraphed;
        // secant estimate of the remaining rapidity
        double tnext = (decrease > 0) ? t * Znew.norm() / decrease : t;
        t = std::clamp(tnext, 0.25 * t, 2.0 * t);
        Z = Znew;
        break;
      }
      t *= 0.5;
      if (++halvings > 8)
        throw stall_error("balance: |Z| failed to decrease after 8 halvings");
    }
    if (trace) trace->push_back({it, Z.norm(), t});
    if (Z.norm() <= tol) return psi;
  }
  throw max_iterations("balance: iteration cap reached before |Z| converged");
}

struct balancing_row {
  int iteration;
  double spatial_norm;
  double rapidity;
};

// Isometry whose pullback balances the mass vector: spatial components
// below 1e-3 m0. Rapidity along the spatial mass direction; the Lorentz
// covariance of the charge makes the first guess nearly exact, a few secant
// corrections absorb the finite-radius remainder.
inline isometry balanced_coordinates(const metric& g, double r_eval,
                                     std::vector<balancing_row>* trace = nullptr) {
  mass_vector mv = mass_charge(g, r_eval);
  if (!mv.timelike())
    throw causal_error("balanced_coordinates: mass vector is not timelike");
  Vector3d sp = mv.m.tail<3>();
  if (trace) trace->push_back({0, sp.norm(), 0.0});
  if (sp.norm() <= 1e-3 * std::abs(mv.m[0])) return isometry();
  Vector3d u = sp.normalized();
  double chi = std::atanh(std::clamp(sp.norm() / mv.m[0], -0.999999, 0.999999));
  double prev_chi = 0.0, prev_val = sp.dot(u);
  for (int it = 1; it <= 12; ++it) {
    isometry cand = isometry::boost(chi, u);
    mass_vector mb = mass_charge(pullback_metric(cand, g), r_eval);
    double val = mb.m.tail<3>().dot(u);
    if (trace) trace->push_back({it, mb.m.tail<3>().norm(), chi});
    if (mb.m.tail<3>().norm() <= 1e-3 * std::abs(mb.m[0])) return cand;
    double dchi = chi - prev_chi;
    double dval = val - prev_val;
    prev_chi = chi;
    prev_val = val;
    chi = (std::abs(dval) > 1e-300) ? chi - val * dchi / dval : chi * 0.5;
  }
  throw convergence_error("balanced_coordinates: rapidity iteration did not converge");
}

}  // namespace cmcfol
