#pragma once

#include <cstddef>

namespace motskit {

// Every numerical threshold used by the library lives here. Call sites take a
// `const Tolerances&` (usually defaulted to default_tolerances()) instead of
// hard-coding values.
struct Tolerances {
  // fields
  double fd_step_min = 1e-4;         // finite-difference step floor
  double fd_step_rel = 1e-5;         // step = max(fd_step_min, fd_step_rel*|x|)
  double singular_exclusion = 1e-6;  // refuse evaluation this close to a puncture
  double index_symmetry = 1e-13;     // relative defect of declared symmetries
  double singular_metric = 1e-14;    // relative |det h| below which h is singular

  // initial data
  double slice_symmetry = 1e-8;  // max-norm of L_x h, L_x K for "x is a symmetry"
  double einstein = 1e-8;        // max |R_ab - (R/3) h_ab| for an Einstein slice

  // surface
  double minimal_point_rel = 1e-8;  // |Z2| <= rel * max|Z2| counts as minimal
  double degenerate_metric = 0.0;   // det q <= this is degenerate

  // operator and spectrum
  double mots_residual = 1e-8;     // max|theta_k| for the deformation oracle
  double deformation_eps = 1e-4;   // offset amplitude (one Richardson level)
  double normal_variation_eps = 1e-4;
  double marginal_rel = 1e-6;      // marginality tolerance = marginal_rel * ||L||
  double kernel = 1e-8;            // relative kernel residual for a zero mode
  double eigen_cluster = 1e-6;     // eigenvalues closer than this form a cluster
  std::size_t dense_limit = 4096;  // largest N for the dense eigensolver

  // symmetry verifiers
  double tangency_rel = 1e-8;        // |alpha| <= rel * max|x|_h is a tangency point
  double nowhere_vanishing_rel = 1e-6;  // min|f| > rel*max|f| certifies "nowhere zero"
  double vanishing_rel = 1e-8;          // min|f| <= rel*max|f| certifies "vanishes"
  double identically_zero = 1e-8;    // max|f| <= this (in natural units) is f == 0
  double extremal_rel = 1e-6;        // |D Z2| <= rel * mean|D Z2| marks an extremum
  double identity = 1e-6;            // residual of pointwise identities (ext1, imp1, ...)
  double projected_identity = 1e-8;  // residual of alpha Z2 + div tau
  double integral_identity = 1e-10;  // |int alpha Z2|
  double cmc_rel = 1e-8;             // (max Z2 - min Z2) <= rel * (1 + max|Z2|)
  double gauss = 1e-8;               // Gauss relation residual
  double flow_step = 1e-4;           // normal offset used for Lie-dragging q

  // finder
  double finder_tolerance = 1e-10;
  double finder_fd_step = 1e-5;
  double finder_rank_rel = 1e-6;  // drops the translation modes of homogeneous data
  int finder_max_halvings = 20;
};

inline const Tolerances& default_tolerances() {
  static const Tolerances tol{};
  return tol;
}

}  // namespace motskit
