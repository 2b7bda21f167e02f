#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "support.hpp"

using namespace motskit;
using namespace motskit::testing;

TEST_CASE("catalog metrics and extrinsic curvature") {
  const auto s = schwarzschild();
  const auto d = desitter();
  const auto f = flat();
  for (const Point& p : sample_shell(10, 0.3, 3.0)) {
    const double psi = 1.0 + 0.5 / p.norm();
    CHECK((s->h(p) - std::pow(psi, 4) * Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-13);
    CHECK(s->K(p).cwiseAbs().maxCoeff() == 0.0);
    CHECK((d->h(p) - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((d->K(p) + Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((f->h(p) - Mat3::Identity()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(f->K(p).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("expanding de Sitter flips the sign of K") {
  const auto d = catalog_build(DeSitterFlat{2.0, 1.0, Expansion::Expanding});
  CHECK((d->K(Point(0.1, 0.2, 0.3)) - 2.0 * Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("constraint energy") {
  for (const Point& p : sample_shell(10, 0.3, 3.0)) {
    CHECK(std::abs(constraint_energy(*schwarzschild(), p)) < 1e-9);
    CHECK(constraint_energy(*desitter(), p) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(constraint_energy(*catalog_build(DeSitterFlat{2.0, 1.0}), p) ==
          doctest::Approx(12.0).epsilon(1e-12));
    CHECK(constraint_energy(*flat(), p) == 0.0);
  }
}

TEST_CASE("vacuum entries satisfy both constraints") {
  const auto bl = catalog_build(BrillLindquist{});
  for (const auto& d : {schwarzschild(), bl}) {
    CHECK(d->vacuum);
    for (const Point& p : sample_shell(10, 0.6, 3.0)) {
      CHECK(std::abs(constraint_energy(*d, p)) < 1e-9);
      CHECK(constraint_momentum(*d, p).cwiseAbs().maxCoeff() < 1e-9);
    }
  }
}

TEST_CASE("momentum constraint: de Sitter vanishes, K = z h gives -2 dz") {
  for (const Point& p : sample_shell(5, 0.5, 2.0)) {
    CHECK(constraint_momentum(*desitter(), p).cwiseAbs().maxCoeff() < 1e-12);
  }
  InitialDataSet d = *flat();
  d.K = TensorField([](const Point& p) { return Mat3(p(2) * Mat3::Identity()); }, {}, {}, true);
  const Vec3 j = constraint_momentum(d, Point(0.3, 0.1, -0.4));
  CHECK((j - Vec3(0, 0, -2)).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("symmetry test on catalog pairs") {
  const auto pts = sample_shell(20, 0.4, 2.0);
  const SymmetryTest a = is_symmetry(*desitter(), translation_generator(Vec3::UnitZ()), pts, 1e-10);
  CHECK(a.is_symmetry);
  CHECK(a.residual_h <= 1e-10);
  CHECK(a.residual_K <= 1e-10);
  const SymmetryTest b = is_symmetry(*schwarzschild(), rotation_generator(Vec3::UnitZ()), pts, 1e-10);
  CHECK(b.is_symmetry);
  CHECK(b.residual_h <= 1e-10);
  const SymmetryTest c = is_symmetry(*schwarzschild(), translation_generator(Vec3::UnitZ()), pts, 1e-10);
  CHECK_FALSE(c.is_symmetry);
  CHECK(c.residual_h > 1e-2);
}

TEST_CASE("radial unit field is a symmetry of the product cylinder") {
  const auto d = cylinder();
  const SymmetryTest t = is_symmetry(*d, radial_unit_generator(d->h), sample_shell(20, 0.5, 2.0), 1e-8);
  CHECK(t.is_symmetry);
  CHECK(std::abs(curvature(d->h, Point(0.3, 0.4, 0.5)).scalar -
                 2.0 / 1.0) < 1e-6);  // round S^2 factor of radius R0
}

TEST_CASE("umbilicity and einstein defects") {
  const auto pts = sample_shell(6, 0.5, 2.0);
  CHECK(umbilicity_defect(*desitter(), pts) < 1e-14);
  CHECK(einstein_defect(*desitter(), pts) < 1e-12);
  CHECK(einstein_defect(*schwarzschild(), pts) > 1e-2);
  CHECK(umbilicity_defect(*anisotropic_flat(), pts) > 0.05);
}

TEST_CASE("invalid catalog parameters") {
  CHECK_THROWS_AS(catalog_build(SchwarzschildIsotropic{-1.0}), InvalidParameter);
  CHECK_THROWS_AS(catalog_build(DeSitterFlat{0.0, 1.0}), InvalidParameter);
  CHECK_THROWS_AS(catalog_build(DeSitterFlat{1.0, -1.0}), InvalidParameter);
  CHECK_THROWS_AS(catalog_build(BrillLindquist{0.5, -0.5, 1.0}), InvalidParameter);
  CHECK_THROWS_AS(catalog_build(ProductCylinder{0.0}), InvalidParameter);
}

TEST_CASE("chart excludes punctures") {
  const auto s = schwarzschild();
  CHECK_FALSE(s->chart.contains(Point::Zero()));
  CHECK(s->chart.contains(Point(0.5, 0, 0)));
  CHECK_THROWS_AS(s->chart.require(Point::Zero()), OutsideChart);
  const auto bl = catalog_build(BrillLindquist{0.5, 0.5, 1.0});
  CHECK_FALSE(bl->chart.contains(Point(0, 0, 0.5)));
}

TEST_CASE("catalog names round trip") {
  CHECK(catalog_name(CatalogEntry{DeSitterFlat{}}) == "DeSitterFlat");
  CHECK(catalog_name(CatalogEntry{ProductCylinder{}}) == "ProductCylinder");
  CHECK(catalog_build(ProductCylinder{})->genuine_surface);
}
