#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "cmcfol/stability.hpp"

using namespace cmcfol;

namespace {
scalar_field random_band(grid_ptr g, uint64_t seed, int lmax) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  VectorXd c = VectorXd::Zero(g->n_coeffs());
  for (int l = 0; l <= lmax; ++l)
    for (int m = -l; m <= l; ++m) c[sh_index(l, m)] = nd(rng) / (1.0 + l);
  return scalar_field::from_coeffs(std::move(g), std::move(c));
}
}  // namespace

TEST_CASE("constant-coefficient spectrum on geodesic spheres") {
  auto h = metric::hyperbolic();
  for (double sigma : {3.0, 5.0}) {
    auto s = graph_surface::sphere(make_grid(16), sigma);
    auto op = assemble(s, h);
    double s2 = std::sinh(sigma) * std::sinh(sigma);
    auto sp = low_spectrum(op, 25);
    int idx = 0;
    for (int l = 0; l <= 4; ++l) {
      double want = (double(l) * (l + 1) - 2.0) / s2;
      for (int m = -l; m <= l; ++m, ++idx) {
        double tol = 1e-8 * std::max(std::abs(want), 1.0 / s2);
        CHECK(std::abs(sp.eigenvalues[idx] - want) < tol);
      }
    }
    // eigenfield residuals and orthonormality
    for (int i = 0; i < 9; ++i) {
      CHECK(sp.residuals[i] <= 1e-8 * std::abs(sp.eigenvalues[i]) + 1e-12);
      for (int j = 0; j <= i; ++j) {
        double ip = sp.eigenfields[i].coeffs.dot(op.M * sp.eigenfields[j].coeffs);
        CHECK(std::abs(ip - (i == j ? 1.0 : 0.0)) < 1e-8);
      }
    }
  }
}

TEST_CASE("potential is rotationally symmetric on centered ads spheres") {
  auto g = metric::ads_schwarzschild(1.0);
  auto s = graph_surface::sphere(make_grid(12), 5.0);
  auto op = assemble(s, g);
  double mean_w = mean(op.potential);
  CHECK((op.potential.samples.array() - mean_w).abs().maxCoeff() < 1e-10);
}

TEST_CASE("assembly symmetry defect on a random perturbed surface") {
  auto gr = make_grid(16);
  auto f = random_band(gr, 77, 5) * 0.02;
  graph_surface s(isometry(), 4.0, f);
  auto op = assemble(s, metric::ads_schwarzschild(1.0));
  double scale = op.A.cwiseAbs().maxCoeff();
  CHECK(op.symmetry_defect <= 1e-12 * std::max(1.0, scale));
}

TEST_CASE("self-adjointness in the induced inner product") {
  auto gr = make_grid(12);
  graph_surface s(isometry(), 4.0, random_band(gr, 5, 4) * 0.05);
  auto op = assemble(s, metric::hyperbolic());
  std::mt19937_64 rng(8);
  for (int t = 0; t < 5; ++t) {
    auto f = random_band(gr, rng(), 8);
    auto g2 = random_band(gr, rng(), 8);
    double jf_g = -f.coeffs.dot(op.A * g2.coeffs);
    double f_jg = -g2.coeffs.dot(op.A * f.coeffs);
    double nf = std::sqrt(f.coeffs.dot(op.M * f.coeffs));
    double ng = std::sqrt(g2.coeffs.dot(op.M * g2.coeffs));
    CHECK(std::abs(jf_g - f_jg) <= 1e-9 * nf * ng);
  }
}

TEST_CASE("canonical partition") {
  auto h = metric::hyperbolic();
  auto gr = make_grid(12);
  auto s = graph_surface::sphere(gr, 4.0);
  auto op = assemble(s, h);
  SECTION("coordinate restrictions are pure boosts") {
    for (int axis = 0; axis < 3; ++axis) {
      auto f = scalar_field::from_function(gr, [&](const Vector3d& p) { return p[axis]; });
      auto part = canonical_partition(f, op);
      CHECK((part.boost_part.coeffs - f.coeffs).cwiseAbs().maxCoeff() < 1e-10);
      CHECK(part.deform_part.coeffs.cwiseAbs().maxCoeff() < 1e-10);
    }
  }
  SECTION("constants have no boost part") {
    auto f = scalar_field::zero(gr) + 3.0;
    auto part = canonical_partition(f, op);
    CHECK(part.boost_part.coeffs.cwiseAbs().maxCoeff() < 1e-12);
  }
  SECTION("parts sum to the input exactly and are L2-orthogonal") {
    graph_surface leaf(isometry(), 4.0, random_band(gr, 13, 4) * 0.03);
    auto op2 = assemble(leaf, metric::ads_schwarzschild(1.0));
    auto f = random_band(gr, 99, 10);
    auto part = canonical_partition(f, op2);
    CHECK((part.boost_part.coeffs + part.deform_part.coeffs - f.coeffs)
              .cwiseAbs()
              .maxCoeff() < 1e-12 * f.coeffs.norm());
    double ip = part.boost_part.coeffs.dot(op2.M * part.deform_part.coeffs);
    CHECK(std::abs(ip) < 1e-9 * f.coeffs.norm() * f.coeffs.norm());
  }
}

TEST_CASE("controlled instability") {
  auto h = metric::hyperbolic();
  auto s = graph_surface::sphere(make_grid(12), 4.0);
  double s2 = std::sinh(4.0) * std::sinh(4.0);
  SECTION("satisfied at alpha = -3/sinh^2") {
    auto rep = check_controlled_instability(s, h, -3.0 / s2);
    CHECK(rep.satisfied);
    CHECK(std::abs(rep.lambda_min_meanzero) < 1e-10);
  }
  SECTION("not satisfied at alpha = +1/sinh^2") {
    auto rep = check_controlled_instability(s, h, 1.0 / s2);
    CHECK_FALSE(rep.satisfied);
  }
}

TEST_CASE("coordinate-sphere spectrum in ads tracks the mass sign") {
  // on centered spheres in ads the l=1 band of -J sits near 6m/sinh^3 r
  for (double m : {1.0, -1.0}) {
    auto g = metric::ads_schwarzschild(m);
    auto s = graph_surface::sphere(make_grid(16), 5.0);
    auto op = assemble(s, g);
    auto sp = low_spectrum(op, 5);
    for (int i = 1; i <= 3; ++i) {
      CHECK((sp.eigenvalues[i] > 0) == (m > 0));
    }
  }
}
