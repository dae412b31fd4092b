#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "cmcfol/metric_field.hpp"

using namespace cmcfol;

namespace {
Vector3d random_point(std::mt19937_64& rng, double rmin = 1.0, double rmax = 6.0) {
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> ur(rmin, rmax);
  Vector3d d(nd(rng), nd(rng), nd(rng));
  return ur(rng) * d.normalized();
}
}  // namespace

TEST_CASE("eval_metric closed forms") {
  SECTION("hyperbolic at (1,0,0)") {
    auto g = metric::hyperbolic();
    Matrix3d m = eval_metric(g, {1, 0, 0});
    double s2 = std::sinh(1.0) * std::sinh(1.0);
    CHECK(m(0, 0) == Catch::Approx(1.0).margin(1e-14));
    CHECK(m(1, 1) == Catch::Approx(s2).epsilon(1e-14));
    CHECK(m(2, 2) == Catch::Approx(s2).epsilon(1e-14));
    CHECK(std::abs(m(0, 1)) + std::abs(m(0, 2)) + std::abs(m(1, 2)) < 1e-14);
  }
  SECTION("ads_schwarzschild m=3 at (1,0,0)") {
    auto g = metric::ads_schwarzschild(3.0);
    Matrix3d m = eval_metric(g, {1, 0, 0});
    double want = std::sinh(1.0) * std::sinh(1.0) + 2.0 / std::sinh(1.0);
    CHECK(m(0, 0) == Catch::Approx(1.0).margin(1e-14));
    CHECK(m(1, 1) == Catch::Approx(want).epsilon(1e-14));
    CHECK(m(2, 2) == Catch::Approx(want).epsilon(1e-14));
  }
  SECTION("convex combination is the entrywise mean at tau = 1/2") {
    auto A = metric::hyperbolic();
    auto B = metric::ads_schwarzschild(2.0);
    auto C = metric::convex(0.5, A, B);
    std::mt19937_64 rng(4);
    for (int t = 0; t < 10; ++t) {
      Vector3d p = random_point(rng);
      Matrix3d want = 0.5 * (eval_metric(A, p) + eval_metric(B, p));
      CHECK((eval_metric(C, p) - want).cwiseAbs().maxCoeff() < 1e-14);
    }
  }
  SECTION("convex endpoints reproduce A and B") {
    auto A = metric::hyperbolic();
    auto B = metric::ads_schwarzschild(2.0);
    std::mt19937_64 rng(5);
    Vector3d p = random_point(rng);
    CHECK((eval_metric(metric::convex(0.0, A, B), p) - eval_metric(A, p)).norm() == 0.0);
    CHECK((eval_metric(metric::convex(1.0, A, B), p) - eval_metric(B, p)).norm() == 0.0);
  }
  SECTION("domain error inside the excluded ball") {
    auto g = metric::ads_schwarzschild(1.0);
    CHECK_THROWS_AS(eval_metric(g, {0.1, 0, 0}), domain_error);
  }
  SECTION("symmetry and positive definiteness at sampled points") {
    std::mt19937_64 rng(9);
    for (auto g : {metric::hyperbolic(), metric::ads_schwarzschild(1.0),
                   metric::ads_schwarzschild(-1.0)}) {
      for (int t = 0; t < 20; ++t) {
        Vector3d p = random_point(rng, 1.5, 7.0);
        Matrix3d m = eval_metric(g, p);
        CHECK((m - m.transpose()).cwiseAbs().maxCoeff() < 1e-13);
        Eigen::LLT<Matrix3d> llt(m);
        CHECK(llt.info() == Eigen::Success);
      }
    }
  }
}

TEST_CASE("eval_curvature") {
  SECTION("hyperbolic space: ricci = -2 g, scalar = -6") {
    auto g = metric::hyperbolic();
    std::mt19937_64 rng(11);
    for (int t = 0; t < 10; ++t) {
      Vector3d p = random_point(rng, 0.5, 6.0);
      curvature_sample cs = eval_curvature(g, p);
      double scale = 1.0 + cs.g.cwiseAbs().maxCoeff();
      CHECK((cs.ricci + 2.0 * cs.g).cwiseAbs().maxCoeff() < 1e-12 * scale);
      CHECK(cs.scalar == Catch::Approx(-6.0).margin(1e-10));
    }
  }
  SECTION("ads m=1 at r=6: scalar -6, radial Ricci eigenvalue") {
    auto g = metric::ads_schwarzschild(1.0);
    Vector3d p(0, 0, 6.0);
    curvature_sample cs = eval_curvature(g, p);
    CHECK(cs.scalar == Catch::Approx(-6.0).margin(1e-6));
    // radial direction is a Ricci eigenvector; eigenvalue -2 - 2m/sinh^3 r
    double sh = std::sinh(6.0);
    double want = -2.0 - 2.0 / (sh * sh * sh);
    double got = cs.ricci(2, 2) / cs.g(2, 2);
    CHECK(got == Catch::Approx(want).margin(1e-9).epsilon(0.0));
  }
  SECTION("finite-difference curvature agrees with analytic for ads") {
    auto g = metric::ads_schwarzschild(1.0);
    for (double r : {3.0, 5.0, 8.0}) {
      Vector3d p = r * Vector3d(std::cos(r), std::sin(r), 0.7).normalized();
      curvature_sample an = eval_curvature(g, p);
      curvature_sample fd = detail::curvature_from(g->eval(p), g->fd_d1(p), g->fd_d2(p));
      CHECK((fd.ricci - an.ricci).cwiseAbs().maxCoeff() <
            1e-6 * an.ricci.cwiseAbs().maxCoeff());
    }
  }
  SECTION("scalar = trace of ricci against inverse g") {
    auto g = metric::ads_schwarzschild(-1.0);
    Vector3d p(2.0, 1.0, -1.0);
    curvature_sample cs = eval_curvature(g, p);
    CHECK(cs.scalar == Catch::Approx((cs.g.inverse() * cs.ricci).trace()).epsilon(1e-12));
  }
}

TEST_CASE("isometry group") {
  SECTION("identity fixes points") {
    isometry id;
    Vector3d p(0.3, -1.2, 2.0);
    CHECK((apply_isometry(id, p) - p).norm() < 1e-14);
  }
  SECTION("boost moves the origin along its axis") {
    for (double chi : {0.1, 0.7, 2.0}) {
      auto b = isometry::boost(chi, Vector3d(1, 0, 0));
      Vector3d img = apply_isometry(b, Vector3d::Zero());
      CHECK((img - Vector3d(chi, 0, 0)).norm() < 1e-13);
    }
  }
  SECTION("Lorentz membership of constructed elements") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> nd;
    for (int t = 0; t < 50; ++t) {
      auto b = isometry::boost(nd(rng), Vector3d(nd(rng), nd(rng), nd(rng)).normalized());
      auto r = isometry::rotation(nd(rng), Vector3d(nd(rng), nd(rng), nd(rng)));
      auto c = b * r * b.inverse();
      CHECK(c.membership_defect() <= 1e-12);
      CHECK(c.lam(0, 0) >= 1.0 - 1e-12);
    }
  }
  SECTION("group action: composition acts as iterated application") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> nd;
    for (int t = 0; t < 100; ++t) {
      auto l1 = isometry::boost(0.5 * nd(rng), Vector3d(nd(rng), nd(rng), nd(rng)).normalized());
      auto l2 = isometry::rotation(nd(rng), Vector3d(nd(rng), nd(rng), nd(rng)));
      auto l3 = l1 * l2;
      Vector3d p = random_point(rng, 0.0, 4.0);
      Vector3d a = apply_isometry(l3, p);
      Vector3d b = apply_isometry(l1, apply_isometry(l2, p));
      CHECK((a - b).norm() < 1e-10);
    }
  }
  SECTION("inverse undoes application") {
    auto b = isometry::boost(0.8, Vector3d(0, 1, 1).normalized());
    Vector3d p(1.0, 2.0, -0.5);
    CHECK((apply_isometry(b.inverse(), apply_isometry(b, p)) - p).norm() < 1e-12);
  }
}

TEST_CASE("pullback_metric") {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> nd;
  SECTION("isometries of the reference metric leave it invariant") {
    auto h = metric::hyperbolic();
    auto iso = isometry::boost(0.6, Vector3d(1, 2, 0).normalized()) *
               isometry::rotation(0.9, Vector3d(0, 0, 1));
    auto ph = pullback_metric(iso, h);
    for (int t = 0; t < 50; ++t) {
      Vector3d p = random_point(rng, 0.5, 5.0);
      CHECK((eval_metric(ph, p) - eval_metric(h, p)).cwiseAbs().maxCoeff() < 1e-9);
    }
  }
  SECTION("identity pullback is the same metric") {
    auto g = metric::ads_schwarzschild(1.0);
    auto pg = pullback_metric(isometry(), g);
    for (int t = 0; t < 10; ++t) {
      Vector3d p = random_point(rng, 1.0, 6.0);
      CHECK((eval_metric(pg, p) - eval_metric(g, p)).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
  SECTION("scalar curvature is a diffeomorphism invariant") {
    auto g = metric::ads_schwarzschild(1.0);
    auto iso = isometry::boost(0.3, Vector3d(1, 0, 0));
    auto pg = pullback_metric(iso, g);
    for (int t = 0; t < 20; ++t) {
      // keep clear of small radii, where the closed-form reference itself
      // deviates from constant scalar curvature at order m^2 sinh^{-6} r
      Vector3d p = random_point(rng, 4.0, 6.5);
      curvature_sample cs = eval_curvature(pg, p);
      CHECK(cs.scalar == Catch::Approx(-6.0).margin(1e-5));
      curvature_sample base = eval_curvature(g, apply_isometry(iso, p));
      CHECK(cs.scalar == Catch::Approx(base.scalar).epsilon(1e-5));
    }
  }
  SECTION("pullback first derivatives match finite differences") {
    auto g = metric::ads_schwarzschild(1.0);
    auto iso = isometry::boost(0.4, Vector3d(0, 1, 0));
    auto pg = pullback_metric(iso, g);
    Vector3d p(1.0, 2.5, -0.5);
    d1_array an = pg->d1(p);
    d1_array fd = pg->fd_d1(p);
    for (int k = 0; k < 3; ++k)
      CHECK((an[k] - fd[k]).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("decay_report") {
  SECTION("hyperbolic metric: all columns vanish") {
    auto rows = decay_report(metric::hyperbolic(), {3.0, 5.0});
    for (const auto& row : rows) {
      CHECK(row.metric_dev < 1e-12);
      CHECK(row.dmetric_dev < 1e-11);
      CHECK(row.ricci_dev < 1e-9);
      CHECK(row.scalar_dev < 1e-9);
    }
  }
  SECTION("ads mass term decays at rate 3") {
    auto rows = decay_report(metric::ads_schwarzschild(1.0), {4.0, 6.0, 8.0});
    std::vector<double> r, v;
    for (const auto& row : rows) {
      r.push_back(row.r);
      v.push_back(row.metric_dev);
    }
    CHECK(fit_decay_exponent(r, v) == Catch::Approx(3.0).margin(0.1));
  }
  SECTION("injected perturbation decays at its own rate") {
    perturbation_spec s;
    s.beta = 2.6;
    s.amplitude = 0.1;
    s.seed = 42;
    s.lmax = 6;
    auto g = metric::perturbed(metric::hyperbolic(), s);
    auto rows = decay_report(g, {4.0, 6.0, 8.0});
    std::vector<double> r, v;
    for (const auto& row : rows) {
      r.push_back(row.r);
      v.push_back(row.metric_dev);
    }
    CHECK(fit_decay_exponent(r, v) == Catch::Approx(2.6).margin(0.1));
  }
}
