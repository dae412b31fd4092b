#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>

#include "cmcfol/errors.hpp"

namespace cmcfol {

using Eigen::Matrix3d;
using Eigen::Matrix4d;
using Eigen::Vector3d;
using Eigen::Vector4d;

inline double sinhc(double r) {
  if (std::abs(r) < 1e-4) {
    double r2 = r * r;
    return 1.0 + r2 / 6.0 + r2 * r2 / 120.0;
  }
  return std::sinh(r) / r;
}

inline double asinhc(double s) {  // asinh(s)/s
  if (std::abs(s) < 1e-4) {
    double s2 = s * s;
    return 1.0 - s2 / 6.0 + 3.0 * s2 * s2 / 40.0;
  }
  return std::asinh(s) / s;
}

// Embedding of the global chart into the Minkowski hyperboloid,
// I(x) = (cosh r, sinh(r) x / r).
inline Vector4d hyperboloid_embed(const Vector3d& x) {
  double r = x.norm();
  double sc = sinhc(r);
  return {std::cosh(r), sc * x[0], sc * x[1], sc * x[2]};
}

inline Vector3d hyperboloid_chart(const Vector4d& X) {
  Vector3d v = X.tail<3>();
  return asinhc(v.norm()) * v;
}

// d I / d x, 4x3
inline Eigen::Matrix<double, 4, 3> hyperboloid_embed_jacobian(const Vector3d& x) {
  double r = x.norm();
  Eigen::Matrix<double, 4, 3> J;
  if (r < 1e-14) {
    J.setZero();
    J.block<3, 3>(1, 0).setIdentity();
    return J;
  }
  Vector3d n = x / r;
  double sc = sinhc(r), ch = std::cosh(r);
  for (int j = 0; j < 3; ++j) J(0, j) = std::sinh(r) * n[j];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      J(i + 1, j) = (ch - sc) * n[i] * n[j] + sc * ((i == j) ? 1.0 : 0.0);
  return J;
}

// second derivatives of the embedding, SI[a](j,k) = d_j d_k I^a
inline std::array<Eigen::Matrix3d, 4> hyperboloid_embed_hessian(const Vector3d& x) {
  std::array<Eigen::Matrix3d, 4> S;
  double r = x.norm();
  if (r < 1e-6) {
    // I^0 = cosh r: hessian -> identity; I^i = sinhc(r) x_i: hessian -> 0
    S[0] = Eigen::Matrix3d::Identity();
    for (int i = 1; i < 4; ++i) S[i].setZero();
    return S;
  }
  Vector3d n = x / r;
  Eigen::Matrix3d P = Eigen::Matrix3d::Identity() - n * n.transpose();
  double sh = std::sinh(r), ch = std::cosh(r), sc = sinhc(r);
  double dsc = (ch - sc) / r;  // sinhc'
  S[0] = ch * n * n.transpose() + sh / r * P;
  for (int i = 0; i < 3; ++i) {
    // d_j [ (ch - sc) n_i n_k + sc del_ik ]
    Eigen::Matrix3d m;
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        double del_ik = (i == k);
        m(j, k) = (sh - dsc) * n[j] * n[i] * n[k] +
                  (ch - sc) * (P(i, j) * n[k] + n[i] * P(k, j)) / r + dsc * n[j] * del_ik;
      }
    S[i + 1] = m;
  }
  return S;
}

// second derivatives of the chart map, Sc[i](j,k) = d_j d_k (I^{-1})^i over
// the spatial slots of the chosen extension
inline std::array<Eigen::Matrix3d, 3> hyperboloid_chart_hessian_tensor(const Vector4d& X) {
  std::array<Eigen::Matrix3d, 3> S;
  Vector3d v = X.tail<3>();
  double s = v.norm();
  if (s < 1e-6) {
    for (auto& m : S) m.setZero();
    return S;
  }
  Vector3d u = v / s;
  Eigen::Matrix3d Pu = Eigen::Matrix3d::Identity() - u * u.transpose();
  double rp = 1.0 / std::sqrt(1.0 + s * s);          // rho'
  double rpp = -s * rp * rp * rp;                    // rho''
  double ac = asinhc(s);
  double acp = (rp - ac) / s;                        // ac'
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        S[i](j, k) = rpp * u[k] * u[i] * u[j] +
                     (rp - ac) * (Pu(i, k) * u[j] + u[i] * Pu(j, k)) / s +
                     acp * u[k] * Pu(i, j);
  return S;
}

// d I^{-1} / d X restricted to the hyperboloid (the X^0 column vanishes
// in the chosen extension), 3x4
inline Eigen::Matrix<double, 3, 4> hyperboloid_chart_jacobian(const Vector4d& X) {
  Vector3d v = X.tail<3>();
  double s = v.norm();
  Eigen::Matrix<double, 3, 4> J;
  J.setZero();
  if (s < 1e-14) {
    J.block<3, 3>(0, 1).setIdentity();
    return J;
  }
  Vector3d u = v / s;
  double rc = asinhc(s);            // rho / s
  double dr = 1.0 / std::sqrt(1.0 + s * s);  // d rho / d s
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      J(i, j + 1) = dr * u[i] * u[j] + rc * (((i == j) ? 1.0 : 0.0) - u[i] * u[j]);
  return J;
}

// Element of the orthochronous Lorentz group acting on the hyperboloid model.
class isometry {
public:
  Matrix4d lam;

  isometry() : lam(Matrix4d::Identity()) {}
  explicit isometry(Matrix4d m) : lam(std::move(m)) {
    if (membership_defect() > 1e-12)
      throw numerical_error("isometry: matrix is not Lorentz to 1e-12");
    if (lam(0, 0) < 1.0 - 1e-12)
      throw numerical_error("isometry: matrix is not orthochronous");
  }

  static Matrix4d minkowski() {
    Matrix4d eta = Matrix4d::Identity();
    eta(0, 0) = -1.0;
    return eta;
  }

  double membership_defect() const {
    Matrix4d eta = minkowski();
    return (lam.transpose() * eta * lam - eta).cwiseAbs().maxCoeff();
  }

  static isometry identity() { return isometry(); }

  // boost of rapidity chi along the unit direction u; maps the origin to the
  // chart point chi*u
  static isometry boost(double chi, Vector3d u) {
    double n = u.norm();
    if (n < 1e-14) {
      if (std::abs(chi) > 0) throw numerical_error("boost: zero axis");
      return identity();
    }
    u /= n;
    Matrix4d m = Matrix4d::Identity();
    double ch = std::cosh(chi), sh = std::sinh(chi);
    m(0, 0) = ch;
    for (int i = 0; i < 3; ++i) {
      m(0, i + 1) = m(i + 1, 0) = sh * u[i];
      for (int j = 0; j < 3; ++j) m(i + 1, j + 1) += (ch - 1.0) * u[i] * u[j];
    }
    return isometry(m);
  }

  static isometry rotation(double angle, Vector3d axis) {
    Matrix4d m = Matrix4d::Identity();
    m.block<3, 3>(1, 1) = Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
    return isometry(m);
  }

  isometry inverse() const {
    Matrix4d eta = minkowski();
    return isometry(eta * lam.transpose() * eta);
  }

  isometry operator*(const isometry& o) const { return isometry(lam * o.lam); }

  bool is_identity(double tol = 1e-12) const {
    return (lam - Matrix4d::Identity()).cwiseAbs().maxCoeff() <= tol;
  }

  Vector3d apply(const Vector3d& p) const {
    return hyperboloid_chart(lam * hyperboloid_embed(p));
  }

  // chart Jacobian of the induced map, from the hyperboloid factorization
  Matrix3d chart_jacobian(const Vector3d& p) const {
    Vector4d X = lam * hyperboloid_embed(p);
    return hyperboloid_chart_jacobian(X) * lam * hyperboloid_embed_jacobian(p);
  }

  // second derivatives of the chart map from the hyperboloid factorization,
  // d2[k](i,j) = d_k d_j Phi^i
  std::array<Matrix3d, 3> chart_hessian(const Vector3d& p) const {
    Vector4d X = lam * hyperboloid_embed(p);
    Eigen::Matrix<double, 4, 3> W = lam * hyperboloid_embed_jacobian(p);
    Eigen::Matrix<double, 3, 4> Dc = hyperboloid_chart_jacobian(X);
    auto SI = hyperboloid_embed_hessian(p);
    auto Sc = hyperboloid_chart_hessian_tensor(X);
    std::array<Matrix3d, 3> H;
    for (int k = 0; k < 3; ++k) {
      Matrix3d m = Matrix3d::Zero();
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          double s = 0.0;
          for (int A = 0; A < 3; ++A)
            for (int B = 0; B < 3; ++B)
              s += Sc[a](A, B) * W(A + 1, b) * W(B + 1, k);
          for (int A = 0; A < 4; ++A) s += Dc(a, A) * SI[A](b, k);
          m(a, b) = s;
        }
      H[k] = m;
    }
    return H;
  }
};

}  // namespace cmcfol
