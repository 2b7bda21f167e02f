#pragma once

#include <vector>

#include "motskit/surface.hpp"

namespace motskit {

struct FinderConfig {
  Point center = Point::Zero();
  NodalScalar initial_profile;  // must match the grid shape
  int max_iterations = 50;
  double tolerance = 1e-10;  // on max |theta_k|
  double damping = 1.0;      // first trial step length
  // Trial profiles above this are rejected. <= 0 means 100 * mean(initial).
  double max_radius = 0.0;
  bool allow_axisymmetric = true;
};

// Throws InvalidParameter.
void validate(const FinderConfig& cfg, const SurfaceGrid& grid);

struct FinderIterate {
  int iteration = 0;
  double residual = 0.0;  // max |theta_k| after the step
  double step = 0.0;      // max |delta profile| actually taken
  int halvings = 0;
};

struct FinderResult {
  EmbeddedSurface surface;
  int iterations = 0;
  double residual = 0.0;
  bool axisymmetric = false;
  std::vector<FinderIterate> trace;
};

// theta_k at every node of the radial graph. Propagates DegenerateMetric.
NodalScalar expansion_residual(const InitialDataPtr& data, const GridPtr& grid, const Point& center,
                               const NodalScalar& profile,
                               const Tolerances& tol = default_tolerances());

// Damped Newton with a forward-difference Jacobian. Throws NoConvergence,
// DivergingProfile.
FinderResult find_mots(const InitialDataPtr& data, const GridPtr& grid, const FinderConfig& cfg,
                       const Tolerances& tol = default_tolerances());

}  // namespace motskit
