#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "support.hpp"

using namespace motskit;
using namespace motskit::testing;

namespace {

FinderResult find(const InitialDataPtr& d, const GridPtr& g, double r0, bool axi = true) {
  FinderConfig c;
  c.initial_profile = g->constant(r0);
  c.allow_axisymmetric = axi;
  return find_mots(d, g, c);
}

}  // namespace

TEST_CASE("expansion residual closed forms") {
  const auto g = grid(8, 16);
  CHECK(max_abs(expansion_residual(schwarzschild(), g, Point::Zero(), g->constant(0.5))) < 1e-12);
  CHECK(max_abs(expansion_residual(desitter(), g, Point::Zero(), g->constant(1.0))) < 1e-12);
  for (double r : {0.5, 1.0, 3.0}) {
    CHECK(max_abs(expansion_residual(flat(), g, Point::Zero(), g->constant(r)) - 2.0 / r) < 1e-12);
  }
}

TEST_CASE("Schwarzschild horizon from guesses 40 percent off") {
  const auto g = grid(8, 16);
  for (double r0 : {0.3, 0.7}) {
    const FinderResult r = find(schwarzschild(), g, r0);
    CHECK(max_abs(*r.surface.profile() - 0.5) <= 1e-10);
    CHECK(r.residual <= 1e-10);
    CHECK(r.axisymmetric);
    CHECK(static_cast<int>(r.trace.size()) == r.iterations);
  }
}

TEST_CASE("de Sitter MOTS from guesses 40 percent off") {
  const auto g = grid(8, 16);
  for (double r0 : {0.6, 1.4}) {
    const FinderResult r = find(desitter(), g, r0);
    CHECK(max_abs(*r.surface.profile() - 1.0) <= 1e-10);
  }
}

TEST_CASE("full Newton path without the ring reduction") {
  const auto g = grid(6, 12);
  const FinderResult r = find(schwarzschild(), g, 0.7, false);
  CHECK_FALSE(r.axisymmetric);
  CHECK(max_abs(*r.surface.profile() - 0.5) <= 1e-10);
}

TEST_CASE("non-spherical guess on Schwarzschild") {
  const auto g = grid(8, 16);
  FinderConfig c;
  const NodalScalar th = g->theta_nodes(), ph = g->phi_nodes();
  c.initial_profile = 0.6 + 0.05 * th.sin() * ph.cos();
  const FinderResult r = find_mots(schwarzschild(), g, c);
  CHECK(r.residual <= 1e-10);
  CHECK(max_abs(r.surface.geometry().theta_k) <= 1e-10);
}

TEST_CASE("Brill-Lindquist common horizon") {
  const auto g = grid(10, 20);
  const FinderResult r = find(catalog_build(BrillLindquist{}), g, 1.0);
  CHECK(r.residual <= 1e-10);
  // equal masses: reflection symmetric about z = 0
  const NodalScalar& p = *r.surface.profile();
  CHECK(max_abs(p - p.colwise().reverse()) < 1e-8);
  CHECK(p.maxCoeff() > p.minCoeff());
}

TEST_CASE("flat slice has no MOTS") {
  const auto g = grid(6, 12);
  CHECK_THROWS_AS(find(flat(), g, 1.0), NoConvergence);
}

TEST_CASE("configuration validation") {
  const auto g = grid(6, 12);
  FinderConfig c;
  c.initial_profile = g->constant(1.0);
  CHECK_NOTHROW(validate(c, *g));
  FinderConfig bad = c;
  bad.initial_profile = NodalScalar::Constant(3, 3, 1.0);
  CHECK_THROWS_AS(validate(bad, *g), InvalidParameter);
  bad = c;
  bad.initial_profile = g->constant(-0.1);
  CHECK_THROWS_AS(validate(bad, *g), InvalidParameter);
  bad = c;
  bad.damping = 0.0;
  CHECK_THROWS_AS(validate(bad, *g), InvalidParameter);
  bad = c;
  bad.max_iterations = 0;
  CHECK_THROWS_AS(validate(bad, *g), InvalidParameter);
}
