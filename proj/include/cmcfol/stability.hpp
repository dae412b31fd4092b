#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <vector>

#include "cmcfol/graph_surface.hpp"

namespace cmcfol {

// Galerkin data of the stability operator J f = Lap_g f + (Ric(nu,nu)+|k|^2) f
// on a surface, in the real spherical-harmonic basis with the surface measure:
//   <-J f, g>_{L^2(M)} = int grad f . grad g dA - int W f g dA.
// Dense symmetric matrices; the synthesis tables are kept for reuse by the
// Newton solver.
class stability_operator {
public:
  grid_ptr grid;
  double sigma = 0.0;       // mean-curvature radius parameter of the surface
  double area = 0.0;
  double symmetry_defect = 0.0;
  scalar_field potential;   // W = Ric(nu,nu) + |k|^2
  MatrixXd A;               // -J Galerkin matrix (stiffness - potential)
  MatrixXd S;               // stiffness (induced-metric Dirichlet form)
  MatrixXd M;               // mass matrix (surface measure)
  MatrixXd V;               // basis values, nodes x N
  std::array<MatrixXd, 3> B;  // Killing derivatives of the basis
  VectorXd rho;             // quadrature weight x area element per node
  fundamental_forms ff;

  int dim() const { return int(A.rows()); }

  // lowest eigenpairs of the plain induced-metric Laplacian, cached for the
  // canonical partition
  struct laplace_eigs {
    VectorXd values;
    MatrixXd vectors;  // M-orthonormal columns
  };
  const laplace_eigs& laplacian_spectrum() const {
    if (!lap_cache_) {
      Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> es(S, M);
      if (es.info() != Eigen::Success)
        throw convergence_error("stability: Laplacian eigensolve failed");
      lap_cache_ = laplace_eigs{es.eigenvalues(), es.eigenvectors()};
    }
    return *lap_cache_;
  }

private:
  mutable std::optional<laplace_eigs> lap_cache_;
};

namespace detail {

inline int flat_index(const sphere_grid& g, int j, int k) { return j + k * g.n_lat; }

// direct table fill of the basis values and their Killing derivatives at the
// grid nodes
inline void fill_basis_tables(const sphere_grid& g, MatrixXd& V,
                              std::array<MatrixXd, 3>& B) {
  const int N = g.n_coeffs(), T = sphere_grid::tri_count(g.L);
  const int nodes = g.n_nodes();
  V.resize(nodes, N);
  for (auto& b : B) b.resize(nodes, N);
  const double rt2 = std::sqrt(2.0);
  for (int k = 0; k < g.n_lon; ++k) {
    for (int j = 0; j < g.n_lat; ++j) {
      const int n = flat_index(g, j, k);
      const double cot = g.x[j] / g.sin_th[j];
      const double cp = std::cos(g.phi[k]), sp = std::sin(g.phi[k]);
      const double* q = &g.Q[static_cast<size_t>(j) * T];
      const double* dq = &g.dQ[static_cast<size_t>(j) * T];
      for (int l = 0; l <= g.L; ++l)
        for (int m = 0; m <= l; ++m) {
          const int t = sphere_grid::tri_index(l, m);
          const double cmk = g.cos_mphi[static_cast<size_t>(m) * g.n_lon + k];
          const double smk = g.sin_mphi[static_cast<size_t>(m) * g.n_lon + k];
          // value, d/dtheta, d/dphi of the cos/sin basis pair
          double vc, dthc, dphc, vs = 0, dths = 0, dphs = 0;
          if (m == 0) {
            vc = q[t];
            dthc = dq[t];
            dphc = 0.0;
          } else {
            vc = rt2 * q[t] * cmk;
            dthc = rt2 * dq[t] * cmk;
            dphc = -m * rt2 * q[t] * smk;
            vs = rt2 * q[t] * smk;
            dths = rt2 * dq[t] * smk;
            dphs = m * rt2 * q[t] * cmk;
          }
          // L_x = sin(phi) dth + cos(phi) cot dph ; L_y = -cos(phi) dth +
          // sin(phi) cot dph ; L_z = -dph
          V(n, sh_index(l, m)) = vc;
          B[0](n, sh_index(l, m)) = sp * dthc + cp * cot * dphc;
          B[1](n, sh_index(l, m)) = -cp * dthc + sp * cot * dphc;
          B[2](n, sh_index(l, m)) = -dphc;
          if (m > 0) {
            V(n, sh_index(l, -m)) = vs;
            B[0](n, sh_index(l, -m)) = sp * dths + cp * cot * dphs;
            B[1](n, sh_index(l, -m)) = -cp * dths + sp * cot * dphs;
            B[2](n, sh_index(l, -m)) = -dphs;
          }
        }
    }
  }
}

inline VectorXd flatten(const sphere_grid& g, const MatrixXd& m) {
  VectorXd v(g.n_nodes());
  for (int k = 0; k < g.n_lon; ++k)
    for (int j = 0; j < g.n_lat; ++j) v[flat_index(g, j, k)] = m(j, k);
  return v;
}

}  // namespace detail

// potential W = Ric(nu,nu) + |k|^2 at the surface nodes
inline scalar_field stability_potential(const fundamental_forms& ff, const metric& g) {
  const sphere_grid& gr = *ff.grid;
  MatrixXd W(gr.n_lat, gr.n_lon);
#pragma omp parallel for schedule(dynamic)
  for (int j = 0; j < gr.n_lat; ++j)
    for (int k = 0; k < gr.n_lon; ++k) {
      Vector3d X(ff.position[0](j, k), ff.position[1](j, k), ff.position[2](j, k));
      Vector3d nu(ff.normal[0](j, k), ff.normal[1](j, k), ff.normal[2](j, k));
      curvature_sample cs = g->curvature(X);
      W(j, k) = nu.dot(cs.ricci * nu) + ff.ksq_values(j, k);
    }
  return scalar_field::from_samples(ff.grid, std::move(W));
}

inline stability_operator assemble(const graph_surface& s, const metric& g) {
  stability_operator op;
  op.grid = s.grid();
  op.sigma = s.sigma;
  op.ff = compute_fundamental_forms(s, g);
  op.area = op.ff.area;
  op.potential = stability_potential(op.ff, g);
  const sphere_grid& gr = *op.grid;

  detail::fill_basis_tables(gr, op.V, op.B);
  VectorXd quad(gr.n_nodes());
  for (int k = 0; k < gr.n_lon; ++k)
    for (int j = 0; j < gr.n_lat; ++j)
      quad[detail::flat_index(gr, j, k)] = gr.node_weight(j);
  op.rho = quad.cwiseProduct(detail::flatten(gr, op.ff.dA));

  // stiffness: sum_ij B_i^T diag(ghat_ij rho) B_j
  op.S = MatrixXd::Zero(gr.n_coeffs(), gr.n_coeffs());
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      VectorXd w = op.rho.cwiseProduct(detail::flatten(gr, op.ff.ghat[i][j]));
      if (w.cwiseAbs().maxCoeff() == 0.0) continue;
      MatrixXd C = op.B[i].transpose() * (w.asDiagonal() * op.B[j]);
      op.S += (i == j) ? C : MatrixXd(C + C.transpose());
    }
  VectorXd wP = op.rho.cwiseProduct(detail::flatten(gr, op.potential.samples));
  MatrixXd P = op.V.transpose() * (wP.asDiagonal() * op.V);
  op.M = op.V.transpose() * (op.rho.asDiagonal() * op.V);

  op.A = op.S - P;
  op.symmetry_defect = (op.A - op.A.transpose()).cwiseAbs().maxCoeff();
  op.A = 0.5 * (op.A + op.A.transpose()).eval();
  op.S = 0.5 * (op.S + op.S.transpose()).eval();
  op.M = 0.5 * (op.M + op.M.transpose()).eval();
  return op;
}

struct spectrum_result {
  VectorXd eigenvalues;                  // of -J, ascending
  std::vector<scalar_field> eigenfields; // M-orthonormal
  VectorXd residuals;                    // ||(-J - lambda) f||_{L^2(M)}
};

inline spectrum_result low_spectrum(const stability_operator& op, int n) {
  if (n > op.dim()) throw shape_error("low_spectrum: n exceeds the basis dimension");
  Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> es(op.A, op.M);
  if (es.info() != Eigen::Success)
    throw convergence_error("low_spectrum: generalized eigensolve failed");
  spectrum_result out;
  out.eigenvalues = es.eigenvalues().head(n);
  out.residuals.resize(n);
  Eigen::LLT<MatrixXd> mllt(op.M);
  for (int i = 0; i < n; ++i) {
    VectorXd v = es.eigenvectors().col(i);
    out.eigenfields.push_back(scalar_field::from_coeffs(op.grid, v));
    VectorXd r = op.A * v - out.eigenvalues[i] * (op.M * v);
    out.residuals[i] = std::sqrt(std::abs(r.dot(mllt.solve(r))));
  }
  return out;
}

struct partition_result {
  scalar_field boost_part;
  scalar_field deform_part;
  std::vector<int> band_indices;
};

// projection onto the eigenfields of the induced-metric (negative) Laplacian
// with eigenvalue in [1/2, 7/2] sinh^-2(sigma)
inline partition_result canonical_partition(const scalar_field& fld,
                                            const stability_operator& op) {
  if (fld.grid->n_coeffs() != op.dim())
    throw shape_error("canonical_partition: field grid does not match operator");
  const auto& eigs = op.laplacian_spectrum();
  double s2 = std::sinh(op.sigma) * std::sinh(op.sigma);
  partition_result out;
  VectorXd boost = VectorXd::Zero(op.dim());
  VectorXd mc = op.M * fld.coeffs;
  for (int i = 0; i < eigs.values.size(); ++i) {
    double lam = eigs.values[i] * s2;
    if (lam >= 0.5 && lam <= 3.5) {
      out.band_indices.push_back(i);
      boost += eigs.vectors.col(i) * (eigs.vectors.col(i).dot(mc));
    }
  }
  if (out.band_indices.empty())
    throw band_error("canonical_partition: empty eigenvalue band");
  out.boost_part = scalar_field::from_coeffs(fld.grid, boost);
  out.deform_part = scalar_field::from_coeffs(fld.grid, fld.coeffs - boost);
  return out;
}

struct instability_report {
  bool satisfied = false;
  double lambda_min_meanzero = 0.0;
};

// smallest eigenvalue of -J restricted to the mean-zero subspace; the
// controlled-instability inequality holds iff it is >= alpha
inline instability_report check_controlled_instability(const graph_surface& s,
                                                       const metric& g, double alpha) {
  stability_operator op = assemble(s, g);
  // constraint <f, 1>_{L^2(M)} = 0
  VectorXd ones = VectorXd::Zero(op.dim());
  ones[0] = std::sqrt(4.0 * pi);
  VectorXd c = op.M * ones;
  Eigen::HouseholderQR<MatrixXd> qr(c);
  MatrixXd Q = qr.householderQ();
  MatrixXd Qc = Q.rightCols(op.dim() - 1);
  MatrixXd Ar = Qc.transpose() * op.A * Qc;
  MatrixXd Mr = Qc.transpose() * op.M * Qc;
  Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> es(0.5 * (Ar + Ar.transpose()),
                                                        0.5 * (Mr + Mr.transpose()));
  if (es.info() != Eigen::Success)
    throw convergence_error("check_controlled_instability: eigensolve failed");
  instability_report out;
  out.lambda_min_meanzero = es.eigenvalues()[0];
  out.satisfied = out.lambda_min_meanzero >= alpha;
  return out;
}

}  // namespace cmcfol
