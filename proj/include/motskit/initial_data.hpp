#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "motskit/fields.hpp"

namespace motskit {

// (Sigma, h_ab, K_ab) with K_ab = +nabla_a u_b pulled back to the slice.
struct InitialDataSet {
  std::string name;
  std::map<std::string, double> parameters;
  Chart chart;
  TensorField h;
  TensorField K;
  // Spatial components V_ab with u'_b = n^a V_ab along any unit slice vector n.
  // Only present when the entry comes from a known spacetime.
  std::optional<TensorField> acceleration_data;
  bool vacuum = false;
  // [u, n] = 0 for the slice-normal construction; declared, never computed.
  bool genuine_surface = false;
};

using InitialDataPtr = std::shared_ptr<const InitialDataSet>;

enum class Expansion { Expanding, Contracting };

struct SchwarzschildIsotropic {
  double M = 1.0;
};
struct DeSitterFlat {
  double H = 1.0;
  double a0 = 1.0;
  Expansion sign = Expansion::Contracting;
};
struct FlatSlice {};
struct BrillLindquist {
  double m1 = 0.5;
  double m2 = 0.5;
  double d = 0.5;  // punctures at (0, 0, +-d/2)
};
// h = dr^2 + R0^2 dOmega^2 written on R^3 \ {0}, K = 0. Every coordinate
// sphere is minimal and the unit radial field is Killing.
struct ProductCylinder {
  double R0 = 1.0;
};

using CatalogEntry =
    std::variant<SchwarzschildIsotropic, DeSitterFlat, FlatSlice, BrillLindquist, ProductCylinder>;

std::string catalog_name(const CatalogEntry& entry);

// Throws InvalidParameter.
InitialDataPtr catalog_build(const CatalogEntry& entry);

// Conformally flat time-symmetric data h = psi^4 delta with
// psi = 1 + sum m_i / (2 |x - c_i|). Exposed for tests.
TensorField conformally_flat_metric(std::vector<std::pair<double, Point>> punctures);

// rho = G_ab u^a u^b = (R + (trK)^2 - K_ab K^ab) / 2
double constraint_energy(const InitialDataSet& id, const Point& p,
                         const Tolerances& tol = default_tolerances());
// j_c = D_b K^b_c - D_c trK
Vec3 constraint_momentum(const InitialDataSet& id, const Point& p,
                         const Tolerances& tol = default_tolerances());

struct SymmetryTest {
  bool is_symmetry = false;
  double residual_h = 0.0;
  double residual_K = 0.0;
};

SymmetryTest is_symmetry(const InitialDataSet& id, const VectorField& x,
                         const std::vector<Point>& sample, double tol);

// Max-norm of K_ab - (trK/3) h_ab over the sample.
double umbilicity_defect(const InitialDataSet& id, const std::vector<Point>& sample,
                         const Tolerances& tol = default_tolerances());
// Max-norm of R_ab - (R/3) h_ab over the sample.
double einstein_defect(const InitialDataSet& id, const std::vector<Point>& sample,
                       const Tolerances& tol = default_tolerances());

// Named symmetry-vector generators.
VectorField translation_generator(const Vec3& axis);
VectorField rotation_generator(const Vec3& axis, const Point& center = Point::Zero());
// x = b + A (p - c)
VectorField affine_generator(const Vec3& b, const Mat3& A, const Point& center = Point::Zero());
// Radial direction normalised with respect to `metric`.
VectorField radial_unit_generator(const TensorField& metric, const Point& center = Point::Zero());

// Deterministic points in the unit-ish shell rmin <= |p - c| <= rmax.
std::vector<Point> sample_shell(std::size_t count, double rmin, double rmax,
                                const Point& center = Point::Zero(), unsigned seed = 12345);

}  // namespace motskit
