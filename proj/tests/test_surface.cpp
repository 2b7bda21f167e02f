#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "support.hpp"

using namespace motskit;
using namespace motskit::testing;

TEST_CASE("grid has no polar nodes and exact harmonic quadrature") {
  const auto g = grid(10, 20);
  CHECK(g->theta().minCoeff() > 0.0);
  CHECK(g->theta().maxCoeff() < M_PI);
  const NodalScalar th = g->theta_nodes(), ph = g->phi_nodes();
  for (int l = 0; l <= 9; ++l) {
    for (int m = -l; m <= l; ++m) {
      NodalScalar y = g->zeros();
      for (int i = 0; i < g->ntheta(); ++i)
        for (int j = 0; j < g->nphi(); ++j) y(i, j) = real_spherical_harmonic(l, m, th(i, j), ph(i, j));
      const double v = g->integrate_coordinate(y);
      if (l == 0) {
        CHECK(v == doctest::Approx(std::sqrt(4.0 * M_PI)).epsilon(1e-12));
      } else {
        CHECK(std::abs(v) < 1e-12);
      }
    }
  }
}

TEST_CASE("spectral derivatives are exact on band-limited data") {
  const auto g = grid(12, 24);
  const NodalScalar th = g->theta_nodes(), ph = g->phi_nodes();
  const NodalScalar s2 = th.sin().square();
  const NodalScalar f = s2 * (2.0 * ph).cos() + th.cos();
  const NodalScalar ft = 2.0 * th.sin() * th.cos() * (2.0 * ph).cos() - th.sin();
  const NodalScalar fp = -2.0 * s2 * (2.0 * ph).sin();
  CHECK(max_abs(g->d_theta(f, Parity::Even) - ft) < 1e-11);
  CHECK(max_abs(g->d_phi(f) - fp) < 1e-11);
  CHECK(max_abs(g->d_phiphi(f) + 4.0 * s2 * (2.0 * ph).cos()) < 1e-10);
  // sin(theta) cos(theta) flips sign across the pole
  const NodalScalar odd = th.sin() * th.cos();
  CHECK(max_abs(g->d_theta(odd, Parity::Odd) - (2.0 * th).cos()) < 1e-10);
  const Eigen::VectorXd v = g->d_theta_matrix() * SurfaceGrid::flatten(f);
  CHECK(max_abs(g->unflatten(v) - ft) < 1e-10);
}

TEST_CASE("invalid grids") {
  CHECK_THROWS_AS(SurfaceGrid(1, 8), InvalidParameter);
  CHECK_THROWS_AS(SurfaceGrid(6, 7), InvalidParameter);
}

TEST_CASE("Schwarzschild horizon geometry") {
  const EmbeddedSurface s = schwarzschild_horizon();
  const auto& g = s.geometry();
  CHECK(max_abs(g.theta_k) < 1e-12);
  CHECK(max_abs(g.Z1) < 1e-14);
  CHECK(max_abs(g.Z2) < 1e-12);
  CHECK(max_abs(g.ricci - 0.5) < 1e-10);  // areal radius 2
  CHECK(area(s) == doctest::Approx(16.0 * M_PI).epsilon(1e-11));
}

TEST_CASE("de Sitter MOTS geometry") {
  const EmbeddedSurface s = desitter_mots();
  const auto& g = s.geometry();
  CHECK(max_abs(g.Z1 + 2.0) < 1e-12);
  CHECK(max_abs(g.Z2 - 2.0) < 1e-12);
  CHECK(max_abs(g.theta_k) < 1e-12);
  CHECK(max_abs(g.theta_l + 4.0) < 1e-12);
  CHECK(max_abs(g.sigma_sq) < 1e-20);
}

TEST_CASE("flat round sphere: R, y and omega") {
  const double r = 1.7;
  const EmbeddedSurface s = EmbeddedSurface::round_sphere(grid(10, 20), flat(), Point::Zero(), r);
  const auto& g = s.geometry();
  CHECK(max_abs(g.ricci - 2.0 / (r * r)) < 1e-10);
  CHECK(max_abs(g.y_tt - g.q_tt / r) < 1e-12);
  CHECK(max_abs(g.y_pp - g.q_pp / r) < 1e-12);
  CHECK(max_abs(g.omega_t) + max_abs(g.omega_p) < 1e-14);
}

TEST_CASE("surface invariants on a deformed surface") {
  const auto gr = grid(12, 24);
  const NodalScalar th = gr->theta_nodes(), ph = gr->phi_nodes();
  const NodalScalar profile = 1.0 + 0.1 * th.sin() * th.cos() * ph.cos() + 0.05 * th.cos();
  const auto data = anisotropic_flat();
  const EmbeddedSurface s = EmbeddedSurface::from_profile(gr, data, Point(0.1, 0, 0), profile);
  const auto& g = s.geometry();
  CHECK((g.q_tt * g.q_pp - g.q_tp * g.q_tp).minCoeff() > 0.0);
  const NodalScalar nn = contract_lower(s, g.n_up, g.n_up);
  CHECK(max_abs(nn - 1.0) < 1e-12);
  CHECK(max_abs(g.theta_k - g.Z1 - g.Z2) == 0.0);
  CHECK(max_abs(g.theta_l - g.Z1 + g.Z2) < 1e-14);
  const NodalScalar tr = g.qinv_tt * g.sigma_tt + 2.0 * g.qinv_tp * g.sigma_tp + g.qinv_pp * g.sigma_pp;
  CHECK(max_abs(tr) < 1e-10);
  CHECK(integrate(s, g.ricci) == doctest::Approx(8.0 * M_PI).epsilon(1e-7));
}

TEST_CASE("integration") {
  const EmbeddedSurface s = EmbeddedSurface::round_sphere(grid(8, 16), flat(), Point::Zero(), 2.0);
  CHECK(integrate(s, s.grid().constant(1.0)) == doctest::Approx(16.0 * M_PI).epsilon(1e-12));
  CHECK(std::abs(integrate(s, cos_theta(s.grid()))) < 1e-12);
  const EmbeddedSurface d = desitter_mots();
  const NodalScalar alpha = cos_theta(d.grid());
  CHECK(std::abs(integrate(d, alpha * d.geometry().Z2)) < 1e-10);
}

TEST_CASE("profile validation") {
  const auto gr = grid(6, 12);
  CHECK_THROWS_AS(EmbeddedSurface::from_profile(gr, flat(), Point::Zero(), gr->constant(-1.0)),
                  InvalidParameter);
}

TEST_CASE("normal variations") {
  SUBCASE("flat sphere: Z2' = -2/r^2") {
    const double r = 1.5;
    const EmbeddedSurface s = EmbeddedSurface::round_sphere(grid(8, 16), flat(), Point::Zero(), r);
    CHECK(max_abs(normal_variation(s, NormalQuantity::Z2, 1e-3) + 2.0 / (r * r)) < 1e-8);
  }
  SUBCASE("de Sitter MOTS: Z1' = 0 and Z2' = -2") {
    const EmbeddedSurface s = desitter_mots(8, 16);
    CHECK(max_abs(normal_variation(s, NormalQuantity::Z1, 1e-3)) < 1e-10);
    CHECK(max_abs(normal_variation(s, NormalQuantity::Z2, 1e-3) + 2.0) < 1e-8);
  }
  SUBCASE("time-symmetric horizon: Z1' = 0") {
    CHECK(max_abs(normal_variation(schwarzschild_horizon(8, 16), NormalQuantity::Z1, 1e-3)) == 0.0);
  }
  SUBCASE("alpha' for d_z on a flat sphere vanishes") {
    const EmbeddedSurface s = EmbeddedSurface::round_sphere(grid(8, 16), flat(), Point::Zero(), 1.0);
    CHECK(max_abs(normal_variation_alpha(s, translation_generator(Vec3::UnitZ()), 1e-3)) < 1e-9);
  }
}

TEST_CASE("geodesic offset of a flat sphere is concentric") {
  const EmbeddedSurface s = EmbeddedSurface::round_sphere(grid(6, 12), flat(), Point::Zero(), 1.0);
  const EmbeddedSurface o = geodesic_offset(s, 0.1);
  const auto& X = o.embedding();
  const NodalScalar r = (X[0].square() + X[1].square() + X[2].square()).sqrt();
  CHECK(max_abs(r - 1.1) < 1e-12);
}

TEST_CASE("surface gradient and divergence") {
  const EmbeddedSurface s = EmbeddedSurface::round_sphere(grid(10, 20), flat(), Point::Zero(), 1.0);
  const NodalScalar c = cos_theta(s.grid());
  // |D cos| = sin on the unit sphere; div grad cos = -2 cos
  CHECK(max_abs(gradient_norm(s, c) - s.grid().theta_nodes().sin()) < 1e-12);
  const auto grad = surface_gradient(s, c);
  const auto& g = s.geometry();
  const NodalScalar vt = g.qinv_tt * grad[0] + g.qinv_tp * grad[1];
  const NodalScalar vp = g.qinv_tp * grad[0] + g.qinv_pp * grad[1];
  CHECK(max_abs(surface_divergence(s, vt, vp) + 2.0 * c) < 1e-10);
}
