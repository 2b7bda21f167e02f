#pragma once

#include <cmath>
#include <map>
#include <random>

#include <doctest.h>

#include "motskit/errors.hpp"
#include "motskit/finder.hpp"
#include "motskit/symmetry.hpp"

namespace motskit::testing {

inline GridPtr grid(int nt, int np) { return std::make_shared<const SurfaceGrid>(nt, np); }

inline InitialDataPtr schwarzschild(double M = 1.0) { return catalog_build(SchwarzschildIsotropic{M}); }
inline InitialDataPtr desitter(double H = 1.0) { return catalog_build(DeSitterFlat{H, 1.0}); }
inline InitialDataPtr flat() { return catalog_build(FlatSlice{}); }
inline InitialDataPtr cylinder() { return catalog_build(ProductCylinder{1.0}); }

// Exact horizons as round coordinate spheres (no finder involved).
inline EmbeddedSurface schwarzschild_horizon(int nt = 12, int np = 24) {
  return EmbeddedSurface::round_sphere(grid(nt, np), schwarzschild(), Point::Zero(), 0.5);
}
inline EmbeddedSurface desitter_mots(int nt = 12, int np = 24) {
  return EmbeddedSurface::round_sphere(grid(nt, np), desitter(), Point::Zero(), 1.0);
}

// K_ab = -delta + small constant anisotropy on flat h. Constant K keeps every
// translation a slice symmetry while breaking umbilicity.
inline InitialDataPtr anisotropic_flat() {
  InitialDataSet d = *flat();
  d.name = "AnisotropicFlat";
  d.K = TensorField(
      [](const Point&) {
        Mat3 k = -Mat3::Identity();
        k(0, 0) += 0.2;
        k(1, 1) -= 0.1;
        k(0, 1) = k(1, 0) = 0.05;
        return k;
      },
      [](const Point&) {
        Partials<Mat3> p;
        for (auto& m : p) m.setZero();
        return p;
      },
      {}, true);
  d.vacuum = false;
  d.acceleration_data.reset();
  return std::make_shared<const InitialDataSet>(d);
}

inline NodalScalar cos_theta(const SurfaceGrid& g) { return g.theta_nodes().cos(); }

// Random band-limited combination of real spherical harmonics, l <= lmax.
inline NodalScalar random_band_limited(const SurfaceGrid& g, int lmax, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  NodalScalar f = g.zeros();
  const NodalScalar th = g.theta_nodes(), ph = g.phi_nodes();
  for (int l = 0; l <= lmax; ++l) {
    for (int m = -l; m <= l; ++m) {
      const double c = u(rng);
      for (int i = 0; i < g.ntheta(); ++i) {
        for (int j = 0; j < g.nphi(); ++j) {
          f(i, j) += c * real_spherical_harmonic(l, m, th(i, j), ph(i, j));
        }
      }
    }
  }
  return f;
}

inline double max_abs(const NodalScalar& f) { return f.abs().maxCoeff(); }

}  // namespace motskit::testing
