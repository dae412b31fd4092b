#pragma once
#include <random>

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "cmcfol/errors.hpp"
#include "cmcfol/lorentz.hpp"
#include "cmcfol/scalar_field.hpp"

namespace cmcfol {

using d1_array = std::array<Matrix3d, 3>;                 // d1[k](i,j) = d_k g_ij
using d2_array = std::array<std::array<Matrix3d, 3>, 3>;  // d2[k][l] = d_k d_l g

struct curvature_sample {
  Matrix3d g;
  d1_array christoffels;  // christoffels[k](i,j) = Gamma^k_ij
  Matrix3d ricci;
  double scalar = 0.0;
};

namespace detail {

// Christoffel symbols from metric and first derivatives
inline d1_array christoffel_from(const Matrix3d& g, const d1_array& d1) {
  Matrix3d ginv = g.inverse();
  d1_array gam;
  for (int k = 0; k < 3; ++k) {
    gam[k].setZero();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double s = 0.0;
        for (int l = 0; l < 3; ++l)
          s += ginv(k, l) * (d1[i](l, j) + d1[j](l, i) - d1[l](i, j));
        gam[k](i, j) = 0.5 * s;
      }
  }
  return gam;
}

inline curvature_sample curvature_from(const Matrix3d& g, const d1_array& d1,
                                       const d2_array& d2) {
  curvature_sample out;
  out.g = g;
  Matrix3d ginv = g.inverse();
  out.christoffels = christoffel_from(g, d1);
  // d_a ginv = -ginv d1[a] ginv
  d1_array dginv;
  for (int a = 0; a < 3; ++a) dginv[a] = -ginv * d1[a] * ginv;
  // dgam[a][k](i,j) = d_a Gamma^k_ij
  std::array<d1_array, 3> dgam;
  for (int a = 0; a < 3; ++a)
    for (int k = 0; k < 3; ++k) {
      dgam[a][k].setZero();
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          double s = 0.0;
          for (int l = 0; l < 3; ++l) {
            s += dginv[a](k, l) * (d1[i](l, j) + d1[j](l, i) - d1[l](i, j));
            s += ginv(k, l) * (d2[a][i](l, j) + d2[a][j](l, i) - d2[a][l](i, j));
          }
          dgam[a][k](i, j) = 0.5 * s;
        }
    }
  const d1_array& gam = out.christoffels;
  Matrix3d ric;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int a = 0; a < 3; ++a) {
        s += dgam[a][a](i, j) - dgam[i][a](a, j);
        for (int b = 0; b < 3; ++b)
          s += gam[a](a, b) * gam[b](i, j) - gam[a](i, b) * gam[b](a, j);
      }
      ric(i, j) = s;
    }
  out.ricci = 0.5 * (ric + ric.transpose());
  out.scalar = (ginv * out.ricci).trace();
  return out;
}

}  // namespace detail

class metric_base;
using metric_ptr = std::shared_ptr<const metric_base>;

class metric_base : public std::enable_shared_from_this<metric_base> {
public:
  virtual ~metric_base() = default;
  virtual std::string kind() const = 0;
  virtual double r_min() const = 0;
  virtual bool analytic_derivatives() const = 0;

  virtual Matrix3d eval(const Vector3d& p) const = 0;
  virtual d1_array d1(const Vector3d& p) const { return fd_d1(p); }
  virtual d2_array d2(const Vector3d& p) const { return fd_d2(p); }

  virtual curvature_sample curvature(const Vector3d& p) const {
    check_curvature_domain(p);
    return detail::curvature_from(eval(p), d1(p), d2(p));
  }

  // deviation e = g - h from the reference hyperbolic metric together with
  // its first chart derivatives; overridden where the subtraction can be
  // done in closed form (the difference of large tangential blocks loses
  // most of the signal at large radius otherwise)
  struct deviation {
    Matrix3d e;
    d1_array de;
  };
  virtual deviation deviation_from_reference(const Vector3d& p) const;

  // G = Ric - (S/2 + 1) g; overridden by the radial family, where the
  // near-cancellation against the hyperbolic background has a closed form
  virtual Matrix3d einstein_shifted(const Vector3d& p) const {
    curvature_sample cs = curvature(p);
    return cs.ricci - (0.5 * cs.scalar + 1.0) * cs.g;
  }

  d1_array christoffel(const Vector3d& p) const {
    return detail::christoffel_from(eval(p), d1(p));
  }

  void check_domain(const Vector3d& p) const {
    if (p.norm() <= r_min())
      throw domain_error("metric: point at r=" + std::to_string(p.norm()) +
                         " inside the excluded ball r_min=" + std::to_string(r_min()));
  }
  void check_curvature_domain(const Vector3d& p) const {
    check_domain(p);
    if (!analytic_derivatives() && p.norm() - 2.0 * fd_step <= r_min())
      throw numerical_error("metric: finite-difference stencil leaves the domain");
  }

  // central differences with one Richardson extrapolation
  static constexpr double fd_step = 1e-4;

  d1_array fd_d1(const Vector3d& p) const {
    check_curvature_domain(p);
    d1_array out;
    for (int k = 0; k < 3; ++k) {
      Vector3d e = Vector3d::Zero();
      e[k] = 1.0;
      auto diff = [&](double h) {
        return ((eval(p + h * e) - eval(p - h * e)) / (2.0 * h)).eval();
      };
      out[k] = (4.0 * diff(fd_step / 2) - diff(fd_step)) / 3.0;
    }
    return out;
  }

  d2_array fd_d2(const Vector3d& p) const {
    check_curvature_domain(p);
    d2_array out;
    Matrix3d g0 = eval(p);
    for (int k = 0; k < 3; ++k) {
      Vector3d ek = Vector3d::Zero();
      ek[k] = 1.0;
      auto sec = [&](double h) {
        return ((eval(p + h * ek) - 2.0 * g0 + eval(p - h * ek)) / (h * h)).eval();
      };
      out[k][k] = (4.0 * sec(fd_step / 2) - sec(fd_step)) / 3.0;
    }
    for (int k = 0; k < 3; ++k)
      for (int l = k + 1; l < 3; ++l) {
        Vector3d ek = Vector3d::Zero(), el = Vector3d::Zero();
        ek[k] = 1.0;
        el[l] = 1.0;
        auto mixed = [&](double h) {
          return ((eval(p + h * ek + h * el) - eval(p + h * ek - h * el) -
                   eval(p - h * ek + h * el) + eval(p - h * ek - h * el)) /
                  (4.0 * h * h)).eval();
        };
        out[k][l] = (4.0 * mixed(fd_step / 2) - mixed(fd_step)) / 3.0;
        out[l][k] = out[k][l];
      }
    return out;
  }
};

inline metric_base::deviation metric_base::deviation_from_reference(const Vector3d& p) const;

namespace detail {

// metrics of the form g = a(r) (delta - n n^T) + n n^T in the global chart
struct radial_profile {
  double a, da, dda;
};

class radial_metric : public metric_base {
public:
  bool analytic_derivatives() const override { return true; }
  virtual radial_profile profile(double r) const = 0;
  // w(r) = tangential factor minus sinh^2 r, with two derivatives
  virtual std::array<double, 3> mass_term(double r) const { return {0.0, 0.0, 0.0}; }

  deviation deviation_from_reference(const Vector3d& p) const override {
    check_domain(p);
    double r = p.norm();
    Vector3d n = p / r;
    auto [w, dw, ddw] = mass_term(r);
    (void)ddw;
    Matrix3d P = Matrix3d::Identity() - n * n.transpose();
    deviation out;
    double c = w / (r * r);
    out.e = c * P;
    double dc = dw / (r * r) - 2.0 * w / (r * r * r);
    for (int k = 0; k < 3; ++k) {
      Matrix3d m;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          double del_ik = (i == k), del_jk = (j == k);
          m(i, j) = dc * n[k] * P(i, j) -
                    c * (del_ik * n[j] + del_jk * n[i] - 2.0 * n[i] * n[j] * n[k]) / r;
        }
      out.de[k] = m;
    }
    return out;
  }

  // For g = dr^2 + T(r) dOmega^2 with T = sinh^2 r + w:
  //   G_rr = (phi'^2 - 1 - phi^2)/T,  G_tang = (phi phi'' - phi^2)/r^2,
  // and the sinh^2-against-cosh^2 cancellations reduce symbolically to
  // O(w)-sized combinations.
  Matrix3d einstein_shifted(const Vector3d& p) const override {
    check_domain(p);
    double r = p.norm();
    Vector3d n = p / r;
    auto [w, dw, ddw] = mass_term(r);
    double sh = std::sinh(r), ch = std::cosh(r);
    double u = sh * sh, du = 2.0 * sh * ch;
    double T = u + w;
    double core = (1.0 + u) * w - 0.5 * du * dw - 0.25 * dw * dw;
    double Grr = (-core / T - w) / T;
    double Gt = (core / T + 0.5 * ddw - w) / (r * r);
    Matrix3d P = Matrix3d::Identity() - n * n.transpose();
    return Grr * n * n.transpose() + Gt * P;
  }

  Matrix3d eval(const Vector3d& p) const override {
    check_domain(p);
    double r = p.norm();
    Vector3d n = p / r;
    radial_profile pr = profile(r);
    Matrix3d P = Matrix3d::Identity() - n * n.transpose();
    return pr.a * P + n * n.transpose();
  }

  d1_array d1(const Vector3d& p) const override {
    check_domain(p);
    double r = p.norm();
    Vector3d n = p / r;
    radial_profile pr = profile(r);
    double b = 1.0 - pr.a;
    Matrix3d P = Matrix3d::Identity() - n * n.transpose();
    d1_array out;
    for (int k = 0; k < 3; ++k) {
      Matrix3d m;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          double del_ik = (i == k), del_jk = (j == k);
          m(i, j) = pr.da * n[k] * P(i, j) +
                    b / r * (del_ik * n[j] + del_jk * n[i] - 2.0 * n[i] * n[j] * n[k]);
        }
      out[k] = m;
    }
    return out;
  }

  d2_array d2(const Vector3d& p) const override {
    check_domain(p);
    double r = p.norm();
    Vector3d n = p / r;
    radial_profile pr = profile(r);
    double b = 1.0 - pr.a, db = -pr.da;
    Matrix3d P = Matrix3d::Identity() - n * n.transpose();
    d2_array out;
    auto M = [&](int i, int j, int k) {
      double del_ik = (i == k), del_jk = (j == k);
      return del_ik * n[j] + del_jk * n[i] - 2.0 * n[i] * n[j] * n[k];
    };
    for (int l = 0; l < 3; ++l)
      for (int k = 0; k < 3; ++k) {
        Matrix3d m;
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) {
            double del_ik = (i == k), del_jk = (j == k);
            double t1 = pr.dda * n[l] * n[k] * P(i, j) + pr.da * P(k, l) * P(i, j) / r -
                        pr.da * n[k] * (P(i, l) * n[j] + P(j, l) * n[i]) / r;
            double t2 = (db / r - b / (r * r)) * n[l] * M(i, j, k) +
                        b / (r * r) *
                            (del_ik * P(j, l) + del_jk * P(i, l) -
                             2.0 * (P(i, l) * n[j] * n[k] + n[i] * P(j, l) * n[k] +
                                    n[i] * n[j] * P(k, l)));
            m(i, j) = t1 + t2;
          }
        out[k][l] = m;
      }
    return out;
  }
};

}  // namespace detail

class hyperbolic_metric : public detail::radial_metric {
public:
  std::string kind() const override { return "hyperbolic"; }
  double r_min() const override { return 0.0; }
  detail::radial_profile profile(double r) const override {
    double sh = std::sinh(r), ch = std::cosh(r);
    if (r < 1e-3) {
      double r2 = r * r;
      return {1.0 + r2 / 3.0 + 2.0 * r2 * r2 / 45.0,
              2.0 * r / 3.0 + 8.0 * r2 * r / 45.0, 2.0 / 3.0 + 24.0 * r2 / 45.0};
    }
    double T = sh * sh, dT = 2.0 * sh * ch, ddT = 2.0 * (ch * ch + sh * sh);
    double r2 = r * r;
    return {T / r2, dT / r2 - 2.0 * T / (r2 * r),
            ddT / r2 - 4.0 * dT / (r2 * r) + 6.0 * T / (r2 * r2)};
  }
};

// Anti-de Sitter-Schwarzschild reference of mass m: tangential factor
// sinh(r)^2 (1 + 2m / (3 sinh(r)^3)), the normalization for which the
// asymptotic charge integrals, the Hawking mass of large spheres and the
// stability-operator eigenvalue law all report the parameter m itself.
class ads_schwarzschild_metric : public detail::radial_metric {
public:
  double m;
  explicit ads_schwarzschild_metric(double mass) : m(mass) {}
  std::string kind() const override { return "ads_schwarzschild"; }
  double r_min() const override {
    // keep the tangential factor positive with margin when m < 0
    double pd = (m < 0.0) ? std::asinh(std::cbrt(-2.0 * m / 3.0)) + 0.35 : 0.0;
    return std::max(0.25, pd);
  }
  detail::radial_profile profile(double r) const override {
    double sh = std::sinh(r), ch = std::cosh(r);
    double c23 = 2.0 * m / 3.0;
    double T = sh * sh + c23 / sh;
    double dT = 2.0 * sh * ch - c23 * ch / (sh * sh);
    double ddT = 2.0 * (ch * ch + sh * sh) + c23 * (2.0 * ch * ch - sh * sh) / (sh * sh * sh);
    double r2 = r * r;
    return {T / r2, dT / r2 - 2.0 * T / (r2 * r),
            ddT / r2 - 4.0 * dT / (r2 * r) + 6.0 * T / (r2 * r2)};
  }
  std::array<double, 3> mass_term(double r) const override {
    double sh = std::sinh(r), ch = std::cosh(r);
    double c23 = 2.0 * m / 3.0;
    return {c23 / sh, -c23 * ch / (sh * sh), c23 * (2.0 * ch * ch - sh * sh) / (sh * sh * sh)};
  }
};

struct perturbation_spec {
  double beta = 2.6;
  double amplitude = 0.0;
  long seed = 1;           // seed < 0 selects the axisymmetric closed-form bump
  int lmax = 6;
};

// base + amplitude e^{-beta r} prof(x/r) sinh(r)^2/r^2 (delta - n n^T).
// The angular profile is band limited to degrees [2, lmax] so the asymptotic
// charges of the base metric are untouched (degree-0/1 integrands vanish).
class perturbed_metric : public metric_base {
public:
  metric_ptr base;
  perturbation_spec spec;
  scalar_field profile;

  perturbed_metric(metric_ptr b, const perturbation_spec& s)
      : base(std::move(b)), spec(s), profile(make_profile(s)) {}

  std::string kind() const override { return "perturbed"; }
  double r_min() const override { return std::max(base->r_min(), 0.25); }
  bool analytic_derivatives() const override { return false; }

  static scalar_field make_profile(const perturbation_spec& s) {
    auto g = make_grid(std::max(s.lmax, 2));
    VectorXd c = VectorXd::Zero(g->n_coeffs());
    if (s.seed < 0) {
      c[sh_index(2, 0)] = 1.0;  // axisymmetric bump
    } else {
      std::mt19937_64 rng(static_cast<uint64_t>(s.seed));
      std::normal_distribution<double> nd(0.0, 1.0);
      for (int l = 2; l <= g->L; ++l)
        for (int m = -l; m <= l; ++m) c[sh_index(l, m)] = nd(rng) / (1.0 + l);
    }
    auto f = scalar_field::from_coeffs(g, std::move(c));
    double mx = f.max_abs();
    return (mx > 0) ? f * (1.0 / mx) : f;
  }

  Matrix3d eval(const Vector3d& p) const override {
    check_domain(p);
    double r = p.norm();
    Vector3d n = p / r;
    double sh = std::sinh(r);
    double w = spec.amplitude * std::exp(-spec.beta * r) * sh * sh / (r * r);
    Matrix3d P = Matrix3d::Identity() - n * n.transpose();
    return base->eval(p) + w * profile.eval(n) * P;
  }
};

// convex combination A + tau (B - A)
class convex_metric : public metric_base {
public:
  double tau;
  metric_ptr A, B;
  convex_metric(double t, metric_ptr a, metric_ptr b)
      : tau(t), A(std::move(a)), B(std::move(b)) {}
  std::string kind() const override { return "convex"; }
  double r_min() const override { return std::max(A->r_min(), B->r_min()); }
  bool analytic_derivatives() const override {
    return A->analytic_derivatives() && B->analytic_derivatives();
  }
  Matrix3d eval(const Vector3d& p) const override {
    return (1.0 - tau) * A->eval(p) + tau * B->eval(p);
  }
  d1_array d1(const Vector3d& p) const override {
    d1_array a = A->d1(p), b = B->d1(p);
    for (int k = 0; k < 3; ++k) a[k] = (1.0 - tau) * a[k] + tau * b[k];
    return a;
  }
  d2_array d2(const Vector3d& p) const override {
    d2_array a = A->d2(p), b = B->d2(p);
    for (int k = 0; k < 3; ++k)
      for (int l = 0; l < 3; ++l) a[k][l] = (1.0 - tau) * a[k][l] + tau * b[k][l];
    return a;
  }
};

// q -> (DPhi)^T g(Phi(q)) (DPhi); curvature by tensor transformation
class pulled_back_metric : public metric_base {
public:
  isometry iso;
  metric_ptr base;
  pulled_back_metric(isometry i, metric_ptr b) : iso(std::move(i)), base(std::move(b)) {}
  std::string kind() const override { return "pulled_back"; }
  bool analytic_derivatives() const override { return false; }
  double r_min() const override {
    // conservative: the chart radius is isometry-invariant only about 0;
    // demand that the mapped point stays outside the base exclusion ball
    return base->r_min();
  }

  Matrix3d eval(const Vector3d& p) const override {
    Vector3d q = iso.apply(p);
    base->check_domain(q);
    Matrix3d J = iso.chart_jacobian(p);
    return J.transpose() * base->eval(q) * J;
  }

  d1_array d1(const Vector3d& p) const override {
    Vector3d q = iso.apply(p);
    base->check_domain(q);
    Matrix3d J = iso.chart_jacobian(p);
    auto H = iso.chart_hessian(p);  // H[k](a,b) = d_k d_b Phi^a? see below
    Matrix3d g = base->eval(q);
    d1_array dg = base->d1(q);
    d1_array out;
    for (int k = 0; k < 3; ++k) {
      // d_k J(a,i) = H[k](a,i)
      Matrix3d dJ = H[k];
      Matrix3d dgk = Matrix3d::Zero();
      for (int c = 0; c < 3; ++c) dgk += dg[c] * J(c, k);
      out[k] = dJ.transpose() * g * J + J.transpose() * dgk * J + J.transpose() * g * dJ;
    }
    return out;
  }

  curvature_sample curvature(const Vector3d& p) const override {
    Vector3d q = iso.apply(p);
    base->check_curvature_domain(q);
    curvature_sample cs = base->curvature(q);
    Matrix3d J = iso.chart_jacobian(p);
    auto H = iso.chart_hessian(p);
    curvature_sample out;
    out.g = J.transpose() * cs.g * J;
    out.ricci = J.transpose() * cs.ricci * J;
    out.scalar = cs.scalar;
    Matrix3d Jinv = J.inverse();
    for (int c = 0; c < 3; ++c) {
      Matrix3d m;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          double s = 0.0;
          for (int k = 0; k < 3; ++k) {
            double t = H[a](k, b);  // d_a d_b Phi^k
            for (int i = 0; i < 3; ++i)
              for (int j = 0; j < 3; ++j) t += cs.christoffels[k](i, j) * J(i, a) * J(j, b);
            s += Jinv(c, k) * t;
          }
          m(a, b) = s;
        }
      out.christoffels[c] = 0.5 * (m + m.transpose());
    }
    return out;
  }
};

// value-semantics handle
class metric {
public:
  metric_ptr ptr;
  metric() = default;
  explicit metric(metric_ptr p) : ptr(std::move(p)) {}

  static metric hyperbolic() { return metric(std::make_shared<hyperbolic_metric>()); }
  static metric ads_schwarzschild(double m) {
    return metric(std::make_shared<ads_schwarzschild_metric>(m));
  }
  static metric perturbed(const metric& base, const perturbation_spec& s) {
    return metric(std::make_shared<perturbed_metric>(base.ptr, s));
  }
  static metric convex(double tau, const metric& A, const metric& B) {
    return metric(std::make_shared<convex_metric>(tau, A.ptr, B.ptr));
  }
  static metric pulled_back(const isometry& iso, const metric& base) {
    return metric(std::make_shared<pulled_back_metric>(iso, base.ptr));
  }
  // metric whose asymptotic source sits at chart point (+chi u): the literal
  // pullback by boost(chi) moves it the other way, hence the inverse here
  static metric boosted_source(const metric& base, double chi, const Vector3d& u) {
    return pulled_back(isometry::boost(-chi, u), base);
  }

  const metric_base& operator*() const { return *ptr; }
  const metric_base* operator->() const { return ptr.get(); }
  bool valid() const { return ptr != nullptr; }
};

inline Matrix3d eval_metric(const metric& g, const Vector3d& p) {
  g->check_domain(p);
  return g->eval(p);
}

inline curvature_sample eval_curvature(const metric& g, const Vector3d& p) {
  return g->curvature(p);
}

inline Vector3d apply_isometry(const isometry& iso, const Vector3d& p) {
  return iso.apply(p);
}

inline metric pullback_metric(const isometry& iso, const metric& g) {
  return metric::pulled_back(iso, g);
}

// ---------------------------------------------------------------------------
// decay report against the hyperbolic reference

struct decay_row {
  double r;
  double metric_dev;      // |g - h|_h, sup over the angular sample
  double dmetric_dev;     // |nabla_h (g - h)|_h
  double ricci_dev;       // |Ric - Ric_h|_h
  double scalar_dev;      // |S + 6|
};

namespace detail {

inline double hnorm2_2tensor(const Matrix3d& hinv, const Matrix3d& e) {
  return (hinv * e * hinv * e.transpose()).trace();
}

}  // namespace detail

inline std::vector<decay_row> decay_report(const metric& g, const std::vector<double>& radii,
                                           int angular_L = 8) {
  hyperbolic_metric href;
  auto gr = make_grid(angular_L);
  std::vector<decay_row> rows;
  for (double r : radii) {
    g->check_curvature_domain(Vector3d(r, 0, 0));
    decay_row row{r, 0, 0, 0, 0};
    for (int j = 0; j < gr->n_lat; ++j)
      for (int k = 0; k < gr->n_lon; ++k) {
        Vector3d p = r * scalar_field::node_dir(*gr, j, k);
        Matrix3d h = href.eval(p);
        Matrix3d hinv = h.inverse();
        Matrix3d e = g->eval(p) - h;
        row.metric_dev = std::max(row.metric_dev,
                                  std::sqrt(std::abs(detail::hnorm2_2tensor(hinv, e))));
        d1_array de = g->d1(p), dh = href.d1(p);
        d1_array gam = href.christoffel(p);
        // covariant derivative of e in the reference metric
        double nd2 = 0.0;
        d1_array cov;
        for (int a = 0; a < 3; ++a) {
          Matrix3d m = de[a] - dh[a];
          for (int i = 0; i < 3; ++i)
            for (int jj = 0; jj < 3; ++jj)
              for (int c = 0; c < 3; ++c)
                m(i, jj) -= gam[c](a, i) * e(c, jj) + gam[c](a, jj) * e(i, c);
          cov[a] = m;
        }
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b)
            nd2 += hinv(a, b) * (hinv * cov[a] * hinv * cov[b].transpose()).trace();
        row.dmetric_dev = std::max(row.dmetric_dev, std::sqrt(std::abs(nd2)));
        curvature_sample cs = g->curvature(p);
        Matrix3d dric = cs.ricci + 2.0 * h;
        row.ricci_dev = std::max(row.ricci_dev,
                                 std::sqrt(std::abs(detail::hnorm2_2tensor(hinv, dric))));
        row.scalar_dev = std::max(row.scalar_dev, std::abs(cs.scalar + 6.0));
      }
    rows.push_back(row);
  }
  return rows;
}

// least-squares decay exponent: fits value ~ C e^{-q r}, returns q
inline double fit_decay_exponent(const std::vector<double>& r, const std::vector<double>& v) {
  if (r.size() != v.size() || r.size() < 2)
    throw shape_error("fit_decay_exponent: need matching arrays, >= 2 rows");
  double n = double(r.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < r.size(); ++i) {
    if (v[i] <= 0.0) throw numerical_error("fit_decay_exponent: nonpositive value");
    double y = std::log(v[i]);
    sx += r[i];
    sy += y;
    sxx += r[i] * r[i];
    sxy += r[i] * y;
  }
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return -slope;
}

}  // namespace cmcfol
