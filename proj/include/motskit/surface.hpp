#pragma once

#include <functional>
#include <memory>
#include <optional>

#include "motskit/grid.hpp"
#include "motskit/initial_data.hpp"

namespace motskit {

// Expansion: enough for theta_k (the finder's inner loop).
// Full: also shear, rotation 1-form, intrinsic curvature and constraint terms.
enum class GeometryLevel { Expansion, Full };

// Tangent tensors are stored by components in the (theta, phi) chart:
// suffix _tt, _tp, _pp. Upper-index (raised) arrays carry "inv"/"up".
struct SurfaceGeometry {
  GeometryLevel level = GeometryLevel::Expansion;

  NodalVector X, Xt, Xp;    // embedding and tangent vectors (contravariant)
  NodalVector n_up, n_down;  // outward unit normal

  NodalScalar q_tt, q_tp, q_pp;
  NodalScalar qinv_tt, qinv_tp, qinv_pp;
  NodalScalar sqrt_q;
  NodalScalar area_weight;  // quadrature weight per node for dA

  NodalScalar y_tt, y_tp, y_pp;  // D_A n_B
  NodalScalar K_tt, K_tp, K_pp;  // pull-back of K_ab
  NodalScalar Z1, Z2, theta_k, theta_l;

  // Full level only.
  NodalScalar sigma_tt, sigma_tp, sigma_pp, sigma_sq;
  NodalScalar omega_t, omega_p, omega_up_t, omega_up_p, omega_sq, div_omega;
  NodalScalar ricci;    // intrinsic scalar curvature of q
  NodalScalar y_sq;     // y_AB y^AB
  NodalScalar lap_b_t, lap_b_p;  // -q^AB Gamma^C_AB
  NodalScalar rho, j_n;          // constraint energy and j_a n^a
  NodalScalar slice_R;           // scalar curvature of h at the nodes
};

class EmbeddedSurface {
 public:
  // X = center + profile * rhat(theta, phi). Throws InvalidParameter for a
  // non-positive profile, OutsideChart if a node leaves the chart.
  static EmbeddedSurface from_profile(GridPtr grid, InitialDataPtr data, const Point& center,
                                      const NodalScalar& profile,
                                      GeometryLevel level = GeometryLevel::Full,
                                      const Tolerances& tol = default_tolerances());
  static EmbeddedSurface round_sphere(GridPtr grid, InitialDataPtr data, const Point& center,
                                      double radius, GeometryLevel level = GeometryLevel::Full,
                                      const Tolerances& tol = default_tolerances());
  // General nodal embedding (offset surfaces).
  static EmbeddedSurface from_embedding(GridPtr grid, InitialDataPtr data, const NodalVector& X,
                                        GeometryLevel level = GeometryLevel::Full,
                                        const Tolerances& tol = default_tolerances());

  const SurfaceGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  const InitialDataSet& data() const { return *data_; }
  const InitialDataPtr& data_ptr() const { return data_; }
  const NodalVector& embedding() const { return X_; }
  Point node(int i, int j) const { return Point(X_[0](i, j), X_[1](i, j), X_[2](i, j)); }
  std::vector<Point> nodes() const;
  const Point& center() const { return center_; }
  const std::optional<NodalScalar>& profile() const { return profile_; }
  const SurfaceGeometry& geometry() const { return *geometry_; }
  const Tolerances& tolerances() const { return tol_; }

 private:
  EmbeddedSurface() = default;
  GridPtr grid_;
  InitialDataPtr data_;
  NodalVector X_;
  Point center_ = Point::Zero();
  std::optional<NodalScalar> profile_;
  std::shared_ptr<const SurfaceGeometry> geometry_;
  Tolerances tol_;
};

// Throws DegenerateMetric if det q <= 0 at some node.
SurfaceGeometry induced_geometry(const SurfaceGrid& grid, const InitialDataSet& data,
                                 const NodalVector& X, GeometryLevel level,
                                 const Tolerances& tol = default_tolerances());

double integrate(const EmbeddedSurface& s, const NodalScalar& f);
double area(const EmbeddedSurface& s);

// Weighted L2 norm sqrt(int f^2 dA).
double weighted_norm(const EmbeddedSurface& s, const NodalScalar& f);

// Surface gradient: covariant components (f_theta, f_phi).
std::array<NodalScalar, 2> surface_gradient(const EmbeddedSurface& s, const NodalScalar& f);
// |D f|_q at every node.
NodalScalar gradient_norm(const EmbeddedSurface& s, const NodalScalar& f);
// Gradient as a slice vector q^AB d_B f X_A^a.
NodalVector gradient_vector(const EmbeddedSurface& s, const NodalScalar& f);
// D_A V^A from contravariant components.
NodalScalar surface_divergence(const EmbeddedSurface& s, const NodalScalar& v_t,
                               const NodalScalar& v_p);

// Offset each node by geodesic arclength eps along n (RK4). Throws
// OffsetOutOfDomain when an offset point leaves the chart.
EmbeddedSurface geodesic_offset(const EmbeddedSurface& s, double eps,
                                GeometryLevel level = GeometryLevel::Expansion);
// X + eps * psi * n (straight coordinate offset).
EmbeddedSurface normal_deformation(const EmbeddedSurface& s, const NodalScalar& psi, double eps,
                                   GeometryLevel level = GeometryLevel::Expansion);

using SurfaceQuantity = std::function<NodalScalar(const EmbeddedSurface&)>;

enum class NormalQuantity { Z1, Z2 };

// Derivative along n of a quantity evaluated on geodesic offsets; central
// difference with one Richardson level.
NodalScalar normal_variation(const EmbeddedSurface& s, const SurfaceQuantity& quantity, double eps,
                             GeometryLevel level = GeometryLevel::Expansion);
NodalScalar normal_variation(const EmbeddedSurface& s, NormalQuantity quantity, double eps);
// alpha = h(x, n)
NodalScalar normal_variation_alpha(const EmbeddedSurface& s, const VectorField& x, double eps);

// Nodal evaluation helpers.
NodalVector evaluate(const EmbeddedSurface& s, const VectorField& x);
NodalScalar contract_lower(const EmbeddedSurface& s, const NodalVector& a, const NodalVector& b);

}  // namespace motskit
