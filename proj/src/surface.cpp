#include "motskit/surface.hpp"

#include <numbers>

#include "motskit/errors.hpp"

namespace motskit {

namespace {

Vec3 at(const NodalVector& v, int i, int j) { return Vec3(v[0](i, j), v[1](i, j), v[2](i, j)); }

void put(NodalVector& v, int i, int j, const Vec3& x) {
  for (int c = 0; c < 3; ++c) v[c](i, j) = x(c);
}

NodalVector zeros_vector(const SurfaceGrid& g) { return {g.zeros(), g.zeros(), g.zeros()}; }

// A_AB B_CD q^AC q^BD
NodalScalar full_contraction(const SurfaceGeometry& g, const NodalScalar& a_tt,
                             const NodalScalar& a_tp, const NodalScalar& a_pp,
                             const NodalScalar& b_tt, const NodalScalar& b_tp,
                             const NodalScalar& b_pp) {
  // raise both indices of a
  const NodalScalar up_tt = g.qinv_tt * g.qinv_tt * a_tt + 2.0 * g.qinv_tt * g.qinv_tp * a_tp +
                            g.qinv_tp * g.qinv_tp * a_pp;
  const NodalScalar up_tp = g.qinv_tt * g.qinv_tp * a_tt +
                            (g.qinv_tt * g.qinv_pp + g.qinv_tp * g.qinv_tp) * a_tp +
                            g.qinv_tp * g.qinv_pp * a_pp;
  const NodalScalar up_pp = g.qinv_tp * g.qinv_tp * a_tt + 2.0 * g.qinv_tp * g.qinv_pp * a_tp +
                            g.qinv_pp * g.qinv_pp * a_pp;
  return up_tt * b_tt + 2.0 * up_tp * b_tp + up_pp * b_pp;
}

double det3(double a00, double a01, double a02, double a10, double a11, double a12, double a20,
            double a21, double a22) {
  return a00 * (a11 * a22 - a12 * a21) - a01 * (a10 * a22 - a12 * a20) +
         a02 * (a10 * a21 - a11 * a20);
}

}  // namespace

SurfaceGeometry induced_geometry(const SurfaceGrid& grid, const InitialDataSet& data,
                                 const NodalVector& X, GeometryLevel level, const Tolerances& tol) {
  SurfaceGeometry g;
  g.level = level;
  g.X = X;
  for (int c = 0; c < 3; ++c) {
    g.Xt[c] = grid.d_theta(X[c], Parity::Even);
    g.Xp[c] = grid.d_phi(X[c]);
  }
  NodalVector Xtt, Xtp, Xpp;
  for (int c = 0; c < 3; ++c) {
    Xtt[c] = grid.d_theta(g.Xt[c], Parity::Odd);
    Xtp[c] = grid.d_phi(g.Xt[c]);
    Xpp[c] = grid.d_phiphi(X[c]);
  }

  const int nt = grid.ntheta(), np = grid.nphi();
  g.n_up = zeros_vector(grid);
  g.n_down = zeros_vector(grid);
  for (auto* a : {&g.q_tt, &g.q_tp, &g.q_pp, &g.y_tt, &g.y_tp, &g.y_pp, &g.K_tt, &g.K_tp, &g.K_pp})
    *a = grid.zeros();
  const bool full = level == GeometryLevel::Full;
  if (full) {
    for (auto* a : {&g.omega_t, &g.omega_p, &g.rho, &g.j_n, &g.slice_R}) *a = grid.zeros();
  }

  for (int j = 0; j < np; ++j) {
    for (int i = 0; i < nt; ++i) {
      const Point p = at(X, i, j);
      data.chart.require(p);
      const Mat3 h = data.h(p);
      const Mat3 hinv = checked_inverse(h, tol);
      const Partials<Mat3> dh = data.h.partials(p);
      const ChristoffelSymbols<double> gamma = christoffel_from_partials<double>(hinv, dh);
      const Mat3 K = data.K(p);

      const Vec3 xt = at(g.Xt, i, j), xp = at(g.Xp, i, j);
      const Vec3 s = xt.cross(xp);
      const double norm = std::sqrt(s.dot(hinv * s));
      if (!(norm > 0.0)) throw DegenerateMetric("tangent vectors are parallel at a node");
      const Vec3 nd = s / norm;
      const Vec3 nu = hinv * nd;
      put(g.n_down, i, j, nd);
      put(g.n_up, i, j, nu);

      g.q_tt(i, j) = xt.dot(h * xt);
      g.q_tp(i, j) = xt.dot(h * xp);
      g.q_pp(i, j) = xp.dot(h * xp);
      g.K_tt(i, j) = xt.dot(K * xt);
      g.K_tp(i, j) = xt.dot(K * xp);
      g.K_pp(i, j) = xp.dot(K * xp);
      g.y_tt(i, j) = -nd.dot(at(Xtt, i, j) + contract<double>(gamma, xt, xt));
      g.y_tp(i, j) = -nd.dot(at(Xtp, i, j) + contract<double>(gamma, xt, xp));
      g.y_pp(i, j) = -nd.dot(at(Xpp, i, j) + contract<double>(gamma, xp, xp));

      if (full) {
        const Vec3 Kn = K * nu;
        g.omega_t(i, j) = xt.dot(Kn);
        g.omega_p(i, j) = xp.dot(Kn);
        const Curvature curv = curvature(data.h, p, tol);
        const double trK = contract_full<double>(hinv, K);
        const Mat3 Kup = hinv * K * hinv;
        g.slice_R(i, j) = curv.scalar;
        g.rho(i, j) = 0.5 * (curv.scalar + trK * trK - contract_full<double>(Kup, K));
        g.j_n(i, j) = constraint_momentum(data, p, tol).dot(nu);
      }
    }
  }

  const NodalScalar det = g.q_tt * g.q_pp - g.q_tp * g.q_tp;
  if ((det <= tol.degenerate_metric).any() || !det.isFinite().all()) {
    throw DegenerateMetric("det q <= 0 at some node");
  }
  g.qinv_tt = g.q_pp / det;
  g.qinv_tp = -g.q_tp / det;
  g.qinv_pp = g.q_tt / det;
  g.sqrt_q = det.sqrt();
  const double dphi = 2.0 * std::numbers::pi / np;
  g.area_weight = g.sqrt_q;
  for (int i = 0; i < nt; ++i) {
    g.area_weight.row(i) *= grid.gl_weights()(i) * dphi / grid.sin_theta()(i);
  }

  auto trace = [&](const NodalScalar& a_tt, const NodalScalar& a_tp, const NodalScalar& a_pp) {
    return NodalScalar(g.qinv_tt * a_tt + 2.0 * g.qinv_tp * a_tp + g.qinv_pp * a_pp);
  };
  g.Z1 = trace(g.K_tt, g.K_tp, g.K_pp);
  g.Z2 = trace(g.y_tt, g.y_tp, g.y_pp);
  g.theta_k = g.Z1 + g.Z2;
  g.theta_l = g.Z1 - g.Z2;

  if (!full) return g;

  const NodalScalar chi_tt = g.K_tt + g.y_tt, chi_tp = g.K_tp + g.y_tp, chi_pp = g.K_pp + g.y_pp;
  g.sigma_tt = chi_tt - 0.5 * g.theta_k * g.q_tt;
  g.sigma_tp = chi_tp - 0.5 * g.theta_k * g.q_tp;
  g.sigma_pp = chi_pp - 0.5 * g.theta_k * g.q_pp;
  g.sigma_sq = full_contraction(g, g.sigma_tt, g.sigma_tp, g.sigma_pp, g.sigma_tt, g.sigma_tp,
                                g.sigma_pp);
  g.y_sq = full_contraction(g, g.y_tt, g.y_tp, g.y_pp, g.y_tt, g.y_tp, g.y_pp);

  // Intrinsic derivatives of E = q_tt (Even), F = q_tp (Odd), G = q_pp (Even).
  const NodalScalar& E = g.q_tt;
  const NodalScalar& F = g.q_tp;
  const NodalScalar& G = g.q_pp;
  const NodalScalar Et = grid.d_theta(E, Parity::Even), Ep = grid.d_phi(E);
  const NodalScalar Ft = grid.d_theta(F, Parity::Odd), Fp = grid.d_phi(F);
  const NodalScalar Gt = grid.d_theta(G, Parity::Even), Gp = grid.d_phi(G);
  const NodalScalar Epp = grid.d_phiphi(E);
  const NodalScalar Gtt = grid.d_theta(Gt, Parity::Odd);
  const NodalScalar Ftp = grid.d_phi(Ft);

  g.ricci = grid.zeros();
  for (int j = 0; j < np; ++j) {
    for (int i = 0; i < nt; ++i) {
      const double m1 =
          det3(-0.5 * Epp(i, j) + Ftp(i, j) - 0.5 * Gtt(i, j), 0.5 * Et(i, j),
               Ft(i, j) - 0.5 * Ep(i, j), Fp(i, j) - 0.5 * Gt(i, j), E(i, j), F(i, j),
               0.5 * Gp(i, j), F(i, j), G(i, j));
      const double m2 = det3(0.0, 0.5 * Ep(i, j), 0.5 * Gt(i, j), 0.5 * Ep(i, j), E(i, j), F(i, j),
                             0.5 * Gt(i, j), F(i, j), G(i, j));
      g.ricci(i, j) = 2.0 * (m1 - m2) / (det(i, j) * det(i, j));
    }
  }

  // Christoffels of q: Gamma_{C,AB} = (d_A q_CB + d_B q_CA - d_C q_AB) / 2
  // Index 0 = theta, 1 = phi. dq[C][A][B] = d_C q_AB.
  const NodalScalar* dq[2][2][2] = {{{&Et, &Ft}, {&Ft, &Gt}}, {{&Ep, &Fp}, {&Fp, &Gp}}};
  const NodalScalar* qi[2][2] = {{&g.qinv_tt, &g.qinv_tp}, {&g.qinv_tp, &g.qinv_pp}};
  NodalScalar contracted[2] = {grid.zeros(), grid.zeros()};  // q^AB Gamma^C_AB
  for (int C = 0; C < 2; ++C) {
    for (int A = 0; A < 2; ++A) {
      for (int B = 0; B < 2; ++B) {
        NodalScalar gam = grid.zeros();
        for (int D = 0; D < 2; ++D) {
          gam += 0.5 * (*qi[C][D]) * (*dq[A][D][B] + *dq[B][D][A] - *dq[D][A][B]);
        }
        contracted[C] += (*qi[A][B]) * gam;
      }
    }
  }
  g.lap_b_t = -contracted[0];
  g.lap_b_p = -contracted[1];

  g.omega_up_t = g.qinv_tt * g.omega_t + g.qinv_tp * g.omega_p;
  g.omega_up_p = g.qinv_tp * g.omega_t + g.qinv_pp * g.omega_p;
  g.omega_sq = g.omega_up_t * g.omega_t + g.omega_up_p * g.omega_p;
  g.div_omega = (grid.d_theta(g.sqrt_q * g.omega_up_t, Parity::Even) +
                 grid.d_phi(g.sqrt_q * g.omega_up_p)) /
                g.sqrt_q;
  return g;
}

EmbeddedSurface EmbeddedSurface::from_embedding(GridPtr grid, InitialDataPtr data,
                                                const NodalVector& X, GeometryLevel level,
                                                const Tolerances& tol) {
  EmbeddedSurface s;
  s.grid_ = std::move(grid);
  s.data_ = std::move(data);
  s.X_ = X;
  s.tol_ = tol;
  s.center_ = Point(X[0].mean(), X[1].mean(), X[2].mean());
  s.geometry_ = std::make_shared<const SurfaceGeometry>(
      induced_geometry(*s.grid_, *s.data_, s.X_, level, tol));
  return s;
}

EmbeddedSurface EmbeddedSurface::from_profile(GridPtr grid, InitialDataPtr data,
                                              const Point& center, const NodalScalar& profile,
                                              GeometryLevel level, const Tolerances& tol) {
  if (profile.rows() != grid->ntheta() || profile.cols() != grid->nphi()) {
    throw InvalidParameter("profile shape does not match the grid");
  }
  if (!(profile > 0.0).all() || !profile.isFinite().all()) {
    throw InvalidParameter("radial profile must be strictly positive");
  }
  const NodalScalar th = grid->theta_nodes();
  const NodalScalar ph = grid->phi_nodes();
  NodalVector X;
  X[0] = center(0) + profile * th.sin() * ph.cos();
  X[1] = center(1) + profile * th.sin() * ph.sin();
  X[2] = center(2) + profile * th.cos();
  EmbeddedSurface s = from_embedding(std::move(grid), std::move(data), X, level, tol);
  s.center_ = center;
  s.profile_ = profile;
  return s;
}

EmbeddedSurface EmbeddedSurface::round_sphere(GridPtr grid, InitialDataPtr data,
                                              const Point& center, double radius,
                                              GeometryLevel level, const Tolerances& tol) {
  const NodalScalar profile = grid->constant(radius);
  return from_profile(std::move(grid), std::move(data), center, profile, level, tol);
}

std::vector<Point> EmbeddedSurface::nodes() const {
  std::vector<Point> out;
  out.reserve(grid_->size());
  for (int j = 0; j < grid_->nphi(); ++j)
    for (int i = 0; i < grid_->ntheta(); ++i) out.push_back(node(i, j));
  return out;
}

double integrate(const EmbeddedSurface& s, const NodalScalar& f) {
  return (s.geometry().area_weight * f).sum();
}

double area(const EmbeddedSurface& s) { return s.geometry().area_weight.sum(); }

double weighted_norm(const EmbeddedSurface& s, const NodalScalar& f) {
  return std::sqrt(integrate(s, f * f));
}

std::array<NodalScalar, 2> surface_gradient(const EmbeddedSurface& s, const NodalScalar& f) {
  return {s.grid().d_theta(f, Parity::Even), s.grid().d_phi(f)};
}

NodalScalar gradient_norm(const EmbeddedSurface& s, const NodalScalar& f) {
  const auto& g = s.geometry();
  const auto d = surface_gradient(s, f);
  const NodalScalar sq =
      g.qinv_tt * d[0] * d[0] + 2.0 * g.qinv_tp * d[0] * d[1] + g.qinv_pp * d[1] * d[1];
  return sq.max(0.0).sqrt();
}

NodalVector gradient_vector(const EmbeddedSurface& s, const NodalScalar& f) {
  const auto& g = s.geometry();
  const auto d = surface_gradient(s, f);
  const NodalScalar up_t = g.qinv_tt * d[0] + g.qinv_tp * d[1];
  const NodalScalar up_p = g.qinv_tp * d[0] + g.qinv_pp * d[1];
  NodalVector out;
  for (int c = 0; c < 3; ++c) out[c] = up_t * g.Xt[c] + up_p * g.Xp[c];
  return out;
}

NodalScalar surface_divergence(const EmbeddedSurface& s, const NodalScalar& v_t,
                               const NodalScalar& v_p) {
  const auto& g = s.geometry();
  return (s.grid().d_theta(g.sqrt_q * v_t, Parity::Even) + s.grid().d_phi(g.sqrt_q * v_p)) /
         g.sqrt_q;
}

NodalVector evaluate(const EmbeddedSurface& s, const VectorField& x) {
  NodalVector out = zeros_vector(s.grid());
  for (int j = 0; j < s.grid().nphi(); ++j)
    for (int i = 0; i < s.grid().ntheta(); ++i) put(out, i, j, x(s.node(i, j)));
  return out;
}

NodalScalar contract_lower(const EmbeddedSurface& s, const NodalVector& a, const NodalVector& b) {
  NodalScalar out = s.grid().zeros();
  for (int j = 0; j < s.grid().nphi(); ++j)
    for (int i = 0; i < s.grid().ntheta(); ++i)
      out(i, j) = at(a, i, j).dot(s.data().h(s.node(i, j)) * at(b, i, j));
  return out;
}

EmbeddedSurface geodesic_offset(const EmbeddedSurface& s, double eps, GeometryLevel level) {
  const auto& data = s.data();
  const auto& g = s.geometry();
  const Tolerances& tol = s.tolerances();
  constexpr int kSteps = 4;
  const double ds = eps / kSteps;
  auto accel = [&](const Point& x, const Vec3& v) -> Vec3 {
    if (!data.chart.contains(x)) throw OffsetOutOfDomain("geodesic offset left the chart");
    return -contract<double>(christoffel(data.h, x, tol), v, v);
  };
  NodalVector X = zeros_vector(s.grid());
  for (int j = 0; j < s.grid().nphi(); ++j) {
    for (int i = 0; i < s.grid().ntheta(); ++i) {
      Point x = s.node(i, j);
      Vec3 v = at(g.n_up, i, j);
      for (int k = 0; k < kSteps; ++k) {
        const Vec3 k1x = v, k1v = accel(x, v);
        const Vec3 k2x = v + 0.5 * ds * k1v, k2v = accel(x + 0.5 * ds * k1x, k2x);
        const Vec3 k3x = v + 0.5 * ds * k2v, k3v = accel(x + 0.5 * ds * k2x, k3x);
        const Vec3 k4x = v + ds * k3v, k4v = accel(x + ds * k3x, k4x);
        x += ds / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
        v += ds / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
      }
      if (!data.chart.contains(x)) throw OffsetOutOfDomain("geodesic offset left the chart");
      put(X, i, j, x);
    }
  }
  try {
    return EmbeddedSurface::from_embedding(s.grid_ptr(), s.data_ptr(), X, level, tol);
  } catch (const OutsideChart& e) {
    throw OffsetOutOfDomain(e.what());
  }
}

EmbeddedSurface normal_deformation(const EmbeddedSurface& s, const NodalScalar& psi, double eps,
                                   GeometryLevel level) {
  const auto& g = s.geometry();
  NodalVector X;
  for (int c = 0; c < 3; ++c) X[c] = s.embedding()[c] + eps * psi * g.n_up[c];
  try {
    return EmbeddedSurface::from_embedding(s.grid_ptr(), s.data_ptr(), X, level, s.tolerances());
  } catch (const OutsideChart& e) {
    throw OffsetOutOfDomain(e.what());
  }
}

NodalScalar normal_variation(const EmbeddedSurface& s, const SurfaceQuantity& quantity, double eps,
                             GeometryLevel level) {
  auto central = [&](double e) {
    const NodalScalar plus = quantity(geodesic_offset(s, e, level));
    const NodalScalar minus = quantity(geodesic_offset(s, -e, level));
    return NodalScalar((plus - minus) / (2.0 * e));
  };
  const NodalScalar coarse = central(eps);
  const NodalScalar fine = central(0.5 * eps);
  return (4.0 * fine - coarse) / 3.0;
}

NodalScalar normal_variation(const EmbeddedSurface& s, NormalQuantity quantity, double eps) {
  if (quantity == NormalQuantity::Z1) {
    return normal_variation(s, [](const EmbeddedSurface& o) { return o.geometry().Z1; }, eps);
  }
  return normal_variation(s, [](const EmbeddedSurface& o) { return o.geometry().Z2; }, eps);
}

NodalScalar normal_variation_alpha(const EmbeddedSurface& s, const VectorField& x, double eps) {
  return normal_variation(
      s,
      [&x](const EmbeddedSurface& o) {
        const NodalVector xv = evaluate(o, x);
        NodalScalar a = xv[0] * o.geometry().n_down[0] + xv[1] * o.geometry().n_down[1] +
                        xv[2] * o.geometry().n_down[2];
        return a;
      },
      eps);
}

}  // namespace motskit
