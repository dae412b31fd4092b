#pragma once

// Test-only reference computations, deliberately independent of the library's
// Killing-frame machinery: dense finite-difference embeddings, planar
// quadrature and the graph mean-curvature closed form.

#include <cmath>
#include <functional>

#include "cmcfol/graph_surface.hpp"
#include "cmcfol/metric_field.hpp"

namespace oracles {

using namespace cmcfol;

// Mean curvature of a radial graph about the origin at (theta, phi) through
// fourth-order finite differences of the embedding X = ftil * p on a
// (theta,phi) stencil (spacing h), with ambient Christoffels from the metric.
inline double fd_graph_mean_curvature(const graph_surface& s, const metric& g,
                                      double theta, double phi,
                                      double h = pi / 512.0) {
  auto dir = [](double th, double ph) {
    return Vector3d(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph),
                    std::cos(th));
  };
  auto X = [&](double th, double ph) {
    Vector3d p = dir(th, ph);
    return Vector3d((s.sigma + s.f.eval(p)) * p);
  };
  // fourth-order first and second derivative stencils
  auto d1 = [&](const std::function<Vector3d(double)>& fn) {
    return Vector3d((8.0 * (fn(h) - fn(-h)) - (fn(2 * h) - fn(-2 * h))) / (12.0 * h));
  };
  auto d2 = [&](const std::function<Vector3d(double)>& fn) {
    return Vector3d((-30.0 * fn(0) + 16.0 * (fn(h) + fn(-h)) - (fn(2 * h) + fn(-2 * h))) /
                    (12.0 * h * h));
  };
  Vector3d Xth = d1([&](double t) { return X(theta + t, phi); });
  Vector3d Xph = d1([&](double t) { return X(theta, phi + t); });
  Vector3d Xthth = d2([&](double t) { return X(theta + t, phi); });
  Vector3d Xphph = d2([&](double t) { return X(theta, phi + t); });
  Vector3d Xthph = d1([&](double t) {
    Vector3d row = d1([&](double u) { return X(theta + t, phi + u); });
    return row;
  });
  Vector3d pos = X(theta, phi);
  Matrix3d gm = g->eval(pos);
  d1_array gam = g->christoffel(pos);

  Eigen::Matrix2d G;
  G << Xth.dot(gm * Xth), Xth.dot(gm * Xph), Xth.dot(gm * Xph), Xph.dot(gm * Xph);
  Vector3d nu = (gm.inverse() * Xth.cross(Xph)).eval();
  nu /= std::sqrt(nu.dot(gm * nu));
  if (nu.dot(gm * pos.normalized()) < 0) nu = -nu;

  auto second = [&](const Vector3d& Xa, const Vector3d& Xb, const Vector3d& Xab) {
    Vector3d gamv;
    for (int c = 0; c < 3; ++c) gamv[c] = Xa.dot(gam[c] * Xb);
    return (Xab + gamv).dot(gm * nu);
  };
  Eigen::Matrix2d K;
  K << second(Xth, Xth, Xthth), second(Xth, Xph, Xthph), second(Xth, Xph, Xthph),
      second(Xph, Xph, Xphph);
  return (G.inverse() * K).trace();
}

// Closed-form mean curvature of a hyperbolic-space radial graph from the
// graph equation: all angular derivatives via the spectral machinery, solved
// for H.
inline scalar_field graph_equation_mean_curvature(const graph_surface& s) {
  scalar_field ftil = s.f + s.sigma;
  scalar_field lap = laplace_beltrami(ftil);
  scalar_field w = grad_sq(ftil);  // |grad ftil|^2
  killing_triple df = killing_derivatives(ftil);
  killing_triple dw = killing_derivatives(w);
  MatrixXd hess = 0.5 * (df.x.samples.cwiseProduct(dw.x.samples) +
                         df.y.samples.cwiseProduct(dw.y.samples) +
                         df.z.samples.cwiseProduct(dw.z.samples));
  const auto& gr = *s.grid();
  MatrixXd H(gr.n_lat, gr.n_lon);
  for (int j = 0; j < gr.n_lat; ++j)
    for (int k = 0; k < gr.n_lon; ++k) {
      double ft = ftil.samples(j, k);
      double sh = std::sinh(ft), ch = std::cosh(ft);
      double wv = w.samples(j, k);
      double q = 1.0 + wv / (sh * sh);
      double lhs = lap.samples(j, k) -
                   (ch / sh * wv - hess(j, k) / (sh * sh)) / q;
      H(j, k) = (lhs - 2.0 * sh * ch) / (sh * sh * std::sqrt(q));
    }
  return scalar_field::from_samples(s.grid(), std::move(H));
}

// adaptive Simpson quadrature
inline double adaptive_simpson(const std::function<double(double)>& f, double a,
                               double b, double tol = 1e-12, int depth = 24) {
  std::function<double(double, double, double, double, double, double, int)> rec =
      [&](double lo, double hi, double flo, double fmid, double fhi, double whole,
          int d) -> double {
    double m = 0.5 * (lo + hi);
    double lm = 0.5 * (lo + m), rm = 0.5 * (m + hi);
    double flm = f(lm), frm = f(rm);
    double left = (m - lo) / 6.0 * (flo + 4.0 * flm + fmid);
    double right = (hi - m) / 6.0 * (fmid + 4.0 * frm + fhi);
    if (d <= 0 || std::abs(left + right - whole) < 15.0 * tol)
      return left + right + (left + right - whole) / 15.0;
    return rec(lo, m, flo, flm, fmid, left, d - 1) +
           rec(m, hi, fmid, frm, fhi, right, d - 1);
  };
  double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return rec(a, b, fa, fm, fb, whole, depth);
}

// planar integral behind the bubble correspondence, radial form
inline double planar_K(double lambda) {
  // int_0^inf (2 lam / (lam^2 + rho^2))^2 (rho^2-1)/(rho^2+1) rho drho / 2
  // mapped through rho = tan(t) onto a finite interval
  auto f = [&](double t) {
    double c = std::cos(t);
    if (c < 1e-300) return 0.0;
    double rho = std::tan(t);
    double jac = 1.0 / (c * c);
    double a = 2.0 * lambda / (lambda * lambda + rho * rho);
    return a * a * (rho * rho - 1.0) / (rho * rho + 1.0) * rho * jac;
  };
  double I = adaptive_simpson(f, 0.0, pi / 2.0 - 1e-12, 1e-13);
  return std::abs(I) / 2.0;  // (1/4pi) * 2pi * int = int/2
}

}  // namespace oracles
