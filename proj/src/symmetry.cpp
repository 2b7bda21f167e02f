#include "motskit/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "motskit/errors.hpp"

namespace motskit {

namespace {

Vec3 at(const NodalVector& v, int i, int j) { return Vec3(v[0](i, j), v[1](i, j), v[2](i, j)); }

NodalScalar dot(const NodalVector& a, const NodalVector& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

double max_abs(const NodalScalar& f) { return f.abs().maxCoeff(); }

// Flat indices of the neighbours of (i, j): theta and phi neighbours plus the
// node across the pole.
std::vector<int> neighbours(const SurfaceGrid& g, int i, int j) {
  const int nt = g.ntheta(), np = g.nphi();
  std::vector<int> out;
  auto flat = [nt](int a, int b) { return a + nt * b; };
  if (i > 0) out.push_back(flat(i - 1, j));
  if (i + 1 < nt) out.push_back(flat(i + 1, j));
  if (i == 0 || i + 1 == nt) out.push_back(flat(i, (j + np / 2) % np));
  out.push_back(flat(i, (j + 1) % np));
  out.push_back(flat(i, (j + np - 1) % np));
  return out;
}

// Four geodesic offsets for one Richardson level of a central difference.
struct OffsetStack {
  std::array<EmbeddedSurface, 4> s;  // +e, -e, +e/2, -e/2
  double eps;

  OffsetStack(const EmbeddedSurface& base, double e)
      : s{geodesic_offset(base, e), geodesic_offset(base, -e), geodesic_offset(base, 0.5 * e),
          geodesic_offset(base, -0.5 * e)},
        eps(e) {}

  NodalScalar derivative(const SurfaceQuantity& q) const {
    const NodalScalar coarse = (q(s[0]) - q(s[1])) / (2.0 * eps);
    const NodalScalar fine = (q(s[2]) - q(s[3])) / eps;
    return (4.0 * fine - coarse) / 3.0;
  }
};

Hypothesis gate_symmetry(const SymmetryDecomposition& d, const Tolerances& tol) {
  const double r = std::max(d.slice_symmetry.residual_h, d.slice_symmetry.residual_K);
  std::ostringstream os;
  os << "max |L_x h|, |L_x K| on the surface nodes vs " << tol.slice_symmetry;
  return {"slice_symmetry", d.slice_symmetry.is_symmetry, r, os.str()};
}

Hypothesis gate_mots(const EmbeddedSurface& s, const Tolerances& tol) {
  const double r = max_abs(s.geometry().theta_k);
  return {"mots", r <= tol.mots_residual, r, "max |theta_k|"};
}

Hypothesis gate_not_surface_symmetry(const SymmetryDecomposition& d) {
  return {"not_symmetry_of_surface", !d.alpha_identically_zero, max_abs(d.alpha),
          "alpha not identically zero"};
}

Hypothesis tri_hypothesis(const std::string& name, Tri value, double residual,
                          const std::string& what) {
  return {name, value == Tri::Yes, residual, what + ": " + to_string(value)};
}

double marginal(const SpectrumResult& spec) { return spec.marginal_tolerance(); }

void add_spectrum_evidence(VerificationReport& r, const SpectrumResult& spec) {
  r.evidence["lambda0"] = spec.lambda0();
  r.evidence["marginal_tolerance"] = marginal(spec);
}

// min over the spectrum of |lambda|
double distance_to_zero(const SpectrumResult& spec) {
  return spec.eigenvalues().cwiseAbs().minCoeff();
}

NodalScalar K_norm(const EmbeddedSurface& s) {
  NodalScalar out = s.grid().zeros();
  for (int j = 0; j < s.grid().nphi(); ++j) {
    for (int i = 0; i < s.grid().ntheta(); ++i) {
      const Point p = s.node(i, j);
      const Mat3 hinv = checked_inverse(s.data().h(p), s.tolerances());
      const Mat3 K = s.data().K(p);
      out(i, j) = std::sqrt(std::max(0.0, (hinv * K * hinv).cwiseProduct(K).sum()));
    }
  }
  return out;
}

std::vector<int> to_vector(const std::vector<bool>& mask) {
  std::vector<int> out;
  for (std::size_t k = 0; k < mask.size(); ++k)
    if (mask[k]) out.push_back(static_cast<int>(k));
  return out;
}

// Surface nodes plus a layer on either side. The nodes alone are not enough: the
// Killing equation can hold pointwise on a totally geodesic surface (unit radial
// field on a time-symmetric horizon) without x being a symmetry nearby.
std::vector<Point> symmetry_sample(const EmbeddedSurface& s) {
  std::vector<Point> out = s.nodes();
  const auto& g = s.geometry();
  double mean = 0.0;
  for (const Point& p : out) mean += (p - s.center()).norm();
  mean /= static_cast<double>(out.size());
  const double delta = 0.05 * mean;
  for (int j = 0; j < s.grid().nphi(); ++j) {
    for (int i = 0; i < s.grid().ntheta(); ++i) {
      const Vec3 n(g.n_up[0](i, j), g.n_up[1](i, j), g.n_up[2](i, j));
      for (double sign : {-1.0, 1.0}) {
        const Point q = s.node(i, j) + sign * delta * n.normalized();
        if (s.data().chart.contains(q)) out.push_back(q);
      }
    }
  }
  return out;
}

}  // namespace

std::string to_string(Tri t) {
  switch (t) {
    case Tri::Yes:
      return "yes";
    case Tri::No:
      return "no";
    case Tri::Indeterminate:
      return "indeterminate";
  }
  return "indeterminate";
}

ZeroScan scan_zeros(const SurfaceGrid& grid, const NodalScalar& f, double vanish_rel, double scale,
                    const Tolerances& tol) {
  ZeroScan out;
  out.max_abs = max_abs(f);
  out.min_abs = f.abs().minCoeff();
  const double ref = scale > 0.0 ? scale : out.max_abs;
  out.identically_zero = out.max_abs <= (scale > 0.0 ? vanish_rel * scale : tol.identically_zero);
  const int n = grid.size();
  if (out.identically_zero) {
    out.near_zero.resize(n);
    for (int k = 0; k < n; ++k) out.near_zero[k] = k;
    out.vanishes_somewhere = Tri::Yes;
    out.nowhere_vanishing = Tri::No;
    return out;
  }
  std::vector<bool> mark(n, false);
  const double* v = f.data();
  for (int j = 0; j < grid.nphi(); ++j) {
    for (int i = 0; i < grid.ntheta(); ++i) {
      const int k = i + grid.ntheta() * j;
      if (std::abs(v[k]) <= vanish_rel * ref) mark[k] = true;
      for (int nb : neighbours(grid, i, j)) {
        if (v[k] * v[nb] < 0.0) {
          out.sign_change = true;
          mark[k] = true;
          mark[nb] = true;
        }
      }
    }
  }
  out.near_zero = to_vector(mark);
  if (!out.near_zero.empty()) {
    out.vanishes_somewhere = Tri::Yes;
    out.nowhere_vanishing = Tri::No;
  } else if (out.min_abs > tol.nowhere_vanishing_rel * ref) {
    out.vanishes_somewhere = Tri::No;
    out.nowhere_vanishing = Tri::Yes;
  }
  return out;
}

SymmetryDecomposition decompose(const VectorField& x, const EmbeddedSurface& s,
                                bool with_alpha_prime, const Tolerances& tol) {
  const auto& g = s.geometry();
  SymmetryDecomposition d;
  d.x = x;
  d.slice_symmetry = is_symmetry(s.data(), x, symmetry_sample(s), tol.slice_symmetry);
  d.x_up = evaluate(s, x);
  d.x_norm = contract_lower(s, d.x_up, d.x_up).max(0.0).sqrt();
  d.alpha = dot(d.x_up, g.n_down);
  for (int c = 0; c < 3; ++c) d.tau_up[c] = d.x_up[c] - d.alpha * g.n_up[c];
  const NodalScalar tt = contract_lower(s, g.Xt, d.tau_up);
  const NodalScalar tp = contract_lower(s, g.Xp, d.tau_up);
  d.tau_t = g.qinv_tt * tt + g.qinv_tp * tp;
  d.tau_p = g.qinv_tp * tt + g.qinv_pp * tp;
  d.div_tau = surface_divergence(s, d.tau_t, d.tau_p);

  NodalVector tangent;
  for (int c = 0; c < 3; ++c) {
    tangent[c] = d.tau_t * g.Xt[c] + d.tau_p * g.Xp[c];
    d.reconstruction_residual =
        std::max(d.reconstruction_residual,
                 max_abs(d.x_up[c] - d.alpha * g.n_up[c] - tangent[c]));
  }
  d.normal_residual = max_abs(dot(tangent, g.n_down));

  const double xmax = d.x_norm.maxCoeff();
  d.alpha_scan = scan_zeros(s.grid(), d.alpha, tol.tangency_rel, xmax > 0.0 ? xmax : 1.0, tol);
  d.alpha_identically_zero = d.alpha_scan.identically_zero;
  d.tangency_set = d.alpha_scan.near_zero;
  d.zero_set_empty = d.tangency_set.empty();
  if (with_alpha_prime) d.alpha_prime = normal_variation_alpha(s, x, tol.normal_variation_eps);
  return d;
}

NodalScalar projected_symmetry_residual(const SymmetryDecomposition& d, const EmbeddedSurface& s) {
  return d.alpha * s.geometry().Z2 + d.div_tau;
}

LieExpansionIdentity lie_expansion_identity(const SymmetryDecomposition& d,
                                            const EmbeddedSurface& s, double eps,
                                            const Tolerances& tol) {
  const auto& g = s.geometry();
  const SurfaceGrid& grid = s.grid();
  LieExpansionIdentity out;
  out.applicable = d.slice_symmetry.is_symmetry;

  const OffsetStack off(s, eps);
  out.Z1_prime = off.derivative([](const EmbeddedSurface& o) { return o.geometry().Z1; });
  NodalVector n_prime;
  for (int b = 0; b < 3; ++b) {
    n_prime[b] = off.derivative([b](const EmbeddedSurface& o) { return o.geometry().n_down[b]; });
  }

  NodalVector dn_t, dn_p;
  for (int b = 0; b < 3; ++b) {
    dn_t[b] = grid.d_theta(g.n_down[b], Parity::Even);
    dn_p[b] = grid.d_phi(g.n_down[b]);
  }

  out.lhs = grid.zeros();
  for (int b = 0; b < 3; ++b) out.lie_n[b] = grid.zeros();
  for (int j = 0; j < grid.nphi(); ++j) {
    for (int i = 0; i < grid.ntheta(); ++i) {
      const Point p = s.node(i, j);
      const Partials<Vec3> dx = d.x.partials(p);
      const Vec3 n = at(g.n_down, i, j);
      Vec3 lie_n;
      for (int b = 0; b < 3; ++b) {
        // x^c d_c n_b + n_c d_b x^c
        lie_n(b) = d.tau_t(i, j) * dn_t[b](i, j) + d.tau_p(i, j) * dn_p[b](i, j) +
                   d.alpha(i, j) * n_prime[b](i, j) + n.dot(dx[b]);
        out.lie_n[b](i, j) = lie_n(b);
      }
      const Mat3 lie_q = lie_derivative(s.data().h, d.x, p) - n * lie_n.transpose() -
                         lie_n * n.transpose();
      const Mat3 hinv = checked_inverse(s.data().h(p), tol);
      const Mat3 Kup = hinv * s.data().K(p) * hinv;
      out.lhs(i, j) = Kup.cwiseProduct(lie_q).sum();
    }
  }

  const auto dZ2 = surface_gradient(s, g.Z2);
  out.tau_dZ2 = d.tau_t * dZ2[0] + d.tau_p * dZ2[1];
  out.rhs = d.alpha * out.Z1_prime - out.tau_dZ2;
  out.residual = max_abs(out.lhs - out.rhs);

  const double scale =
      std::max({1.0, max_abs(d.alpha * out.Z1_prime), max_abs(out.tau_dZ2)});
  const double* r = out.rhs.data();
  for (int k = 0; k < grid.size(); ++k) {
    (std::abs(r[k]) <= tol.identity * scale ? out.ext2_holds : out.ext2_fails).push_back(k);
  }
  return out;
}

void VerificationReport::require(Hypothesis h) {
  hypotheses.push_back(std::move(h));
  hypotheses_met = std::all_of(hypotheses.begin(), hypotheses.end(),
                               [](const Hypothesis& x) { return x.met; });
}

void VerificationReport::conclude(bool verified) {
  if (hypotheses_met) {
    conclusion_verified = verified;
  } else {
    conclusion_verified.reset();
  }
}

VerificationReport verify_lemma_confinement(const SymmetryDecomposition& d,
                                            const EmbeddedSurface& s, const Tolerances& tol) {
  VerificationReport r;
  r.id = "lemma_confinement";
  r.require(gate_symmetry(d, tol));
  r.require(gate_mots(s, tol));
  const ZeroScan div = scan_zeros(s.grid(), d.div_tau, tol.vanishing_rel, 0.0, tol);
  r.require({"div_tau_zero", div.identically_zero, div.max_abs, "max |div tau|"});

  const ZeroScan z2 = scan_zeros(s.grid(), s.geometry().Z2, tol.minimal_point_rel, 0.0, tol);
  r.evidence["max_abs_alpha"] = max_abs(d.alpha);
  r.evidence["max_abs_Z2"] = z2.max_abs;
  const bool confined = d.alpha_identically_zero;
  const bool minimal = z2.identically_zero;
  if (confined) r.notes.push_back("branch: x confined to the surface");
  if (minimal) r.notes.push_back("branch: surface minimal");
  r.conclude(confined || minimal);
  return r;
}

VerificationReport verify_theorem_tangency(const SymmetryDecomposition& d, const EmbeddedSurface& s,
                                           const SpectrumResult& spec, const Tolerances& tol) {
  VerificationReport r;
  r.id = "thm_tangency_1_6";
  r.require(gate_symmetry(d, tol));
  r.require(gate_mots(s, tol));
  r.require(gate_not_surface_symmetry(d));
  const bool decidable = d.alpha_scan.vanishes_somewhere != Tri::Indeterminate;
  r.require({"tangency_decidable", decidable, d.alpha_scan.min_abs,
             "tangency: " + to_string(d.alpha_scan.vanishes_somewhere)});
  add_spectrum_evidence(r, spec);
  r.node_sets["tangency_set"] = d.tangency_set;
  if (!r.hypotheses_met) {
    r.conclude(false);
    return r;
  }
  const double kt = kernel_test(spec.op(), d.alpha);
  const double tolm = marginal(spec);
  const double l0 = spec.lambda0();
  r.evidence["kernel_residual"] = kt;
  r.evidence["distance_to_zero_eigenvalue"] = distance_to_zero(spec);
  const bool zero_eig = kt <= tol.kernel && distance_to_zero(spec) <= tolm;
  bool sign_rule;
  if (d.zero_set_empty) {
    sign_rule = std::abs(l0) <= tolm;
    r.notes.push_back("nowhere tangent: expect marginal stability");
  } else {
    sign_rule = l0 < -tolm;
    r.notes.push_back("tangent somewhere: expect instability");
  }
  r.conclude(zero_eig && sign_rule);
  return r;
}

std::array<VerificationReport, 3> verify_prop_zero_eigenvalue(
    const SymmetryDecomposition& d, const EmbeddedSurface& s, const SpectrumResult& spec,
    const LieExpansionIdentity& lie, const Tolerances& tol) {
  std::array<VerificationReport, 3> out;
  out[0].id = "prop_zero_eig_1";
  out[1].id = "cor_marginal_1";
  out[2].id = "prop_zero_eig_2";
  const ZeroScan div = scan_zeros(s.grid(), d.div_tau, tol.vanishing_rel, 0.0, tol);
  for (auto& r : out) {
    r.require(gate_symmetry(d, tol));
    r.require(gate_mots(s, tol));
    r.require(gate_not_surface_symmetry(d));
    add_spectrum_evidence(r, spec);
  }
  for (int k = 0; k < 2; ++k) {
    out[k].require(tri_hypothesis("div_tau_nowhere_vanishing", div.nowhere_vanishing, div.min_abs,
                                  "div tau nowhere zero"));
  }
  out[2].require({"ext2_fails_somewhere", lie.applicable && !lie.ext2_fails.empty(),
                  max_abs(lie.rhs), "nodes where alpha Z1' - tau.DZ2 != 0"});
  out[2].node_sets["ext2_fails"] = lie.ext2_fails;

  for (int k : {0, 2}) {
    if (!out[k].hypotheses_met) {
      out[k].conclude(false);
      continue;
    }
    const double kt = kernel_test(spec.op(), d.alpha);
    out[k].evidence["kernel_residual"] = kt;
    out[k].evidence["distance_to_zero_eigenvalue"] = distance_to_zero(spec);
    out[k].conclude(kt <= tol.kernel && distance_to_zero(spec) <= marginal(spec));
  }
  out[1].conclude(std::abs(spec.lambda0()) <= marginal(spec));
  return out;
}

std::vector<int> extremal_nodes(const EmbeddedSurface& s, const NodalScalar& Z2,
                                const Tolerances& tol) {
  const SurfaceGrid& grid = s.grid();
  const auto& g = s.geometry();
  const NodalScalar gn = gradient_norm(s, Z2);
  const int n = grid.size();
  std::vector<int> out;
  if (gn.maxCoeff() <= tol.identically_zero) {
    for (int k = 0; k < n; ++k) out.push_back(k);
    return out;
  }
  const double mean = (gn * g.area_weight).sum() / g.area_weight.sum();
  const NodalVector grad = gradient_vector(s, Z2);
  const double* gv = gn.data();
  for (int j = 0; j < grid.nphi(); ++j) {
    for (int i = 0; i < grid.ntheta(); ++i) {
      const int k = i + grid.ntheta() * j;
      if (gv[k] <= tol.extremal_rel * mean) {
        out.push_back(k);
        continue;
      }
      // discrete critical point: local minimum of |DZ2| with the gradient
      // turning around towards some neighbour
      const auto nbs = neighbours(grid, i, j);
      bool local_min = true, reverses = false;
      const Vec3 gk = at(grad, i, j);
      for (int nb : nbs) {
        if (gv[nb] < gv[k]) local_min = false;
        const int a = nb % grid.ntheta(), b = nb / grid.ntheta();
        if (gk.dot(at(grad, a, b)) < 0.0) reverses = true;
      }
      if (local_min && reverses) out.push_back(k);
    }
  }
  return out;
}

std::array<VerificationReport, 3> verify_instability_theorems(
    const SymmetryDecomposition& d, const EmbeddedSurface& s, const SpectrumResult& spec,
    const LieExpansionIdentity& lie, const Tolerances& tol) {
  std::array<VerificationReport, 3> out;
  out[0].id = "thm_unstable_1";
  out[1].id = "thm_unstable_2a";
  out[2].id = "thm_unstable_2b";
  const auto& g = s.geometry();
  const ZeroScan z2 = scan_zeros(s.grid(), g.Z2, tol.minimal_point_rel, 0.0, tol);
  const ZeroScan div = scan_zeros(s.grid(), d.div_tau, tol.vanishing_rel, 0.0, tol);
  const ZeroScan z1p = scan_zeros(s.grid(), lie.Z1_prime, tol.vanishing_rel, 0.0, tol);
  const NodalScalar kn = K_norm(s);
  const double* kv = kn.data();

  for (auto& r : out) {
    r.require(gate_symmetry(d, tol));
    r.require(gate_mots(s, tol));
    r.require(gate_not_surface_symmetry(d));
    add_spectrum_evidence(r, spec);
  }
  out[0].require(tri_hypothesis("no_minimal_points", z2.nowhere_vanishing, z2.min_abs,
                                "Z2 nowhere zero"));
  out[0].require({"ext2_fails_somewhere", lie.applicable && !lie.ext2_fails.empty(),
                  max_abs(lie.rhs), "nodes where alpha Z1' - tau.DZ2 != 0"});
  out[0].require(tri_hypothesis("div_tau_vanishes_somewhere", div.vanishes_somewhere, div.min_abs,
                                "div tau has a zero"));

  // K = 0 locus and points on it where Z2 is constant along tau
  std::vector<int> k_zero, k_zero_flat;
  for (int k = 0; k < s.grid().size(); ++k) {
    if (kv[k] <= tol.identically_zero) {
      k_zero.push_back(k);
      if (std::abs(lie.tau_dZ2.data()[k]) <= tol.identity) k_zero_flat.push_back(k);
    }
  }
  out[1].require(tri_hypothesis("Z1_prime_nowhere_vanishing", z1p.nowhere_vanishing, z1p.min_abs,
                                "Z1' nowhere zero"));
  out[1].require({"K_vanishes_somewhere", !k_zero.empty(), kn.minCoeff(), "nodes with K_ab = 0"});
  out[1].require({"Z2_constant_along_tau_on_K_zero", !k_zero_flat.empty(),
                  static_cast<double>(k_zero_flat.size()), "nodes with K = 0 and tau.DZ2 = 0"});
  out[1].node_sets["K_zero"] = k_zero;

  const std::vector<int> ext = extremal_nodes(s, g.Z2, tol);
  bool geodesic = !ext.empty();
  double worst = 0.0;
  for (int k : ext) {
    worst = std::max(worst, kv[k]);
    if (kv[k] > tol.identically_zero) geodesic = false;
  }
  out[2].require(tri_hypothesis("Z1_prime_nowhere_vanishing", z1p.nowhere_vanishing, z1p.min_abs,
                                "Z1' nowhere zero"));
  out[2].require({"geodesic_at_Z2_extrema", geodesic, worst, "max |K| over extremal Z2 nodes"});
  out[2].node_sets["Z2_extremal"] = ext;

  const bool unstable = spec.lambda0() < -marginal(spec);
  for (auto& r : out) {
    r.conclude(unstable);
    if (!r.hypotheses_met && unstable) {
      r.notes.push_back("unstable by direct spectrum; hypotheses vacuous here");
    }
  }
  return out;
}

VerificationReport verify_remark_minimal_point(const SymmetryDecomposition& d,
                                               const EmbeddedSurface& s, const Tolerances& tol) {
  VerificationReport r;
  r.id = "remark_minimal_point";
  r.require(gate_symmetry(d, tol));
  r.require(gate_mots(s, tol));
  r.require(tri_hypothesis("alpha_nowhere_zero", d.alpha_scan.nowhere_vanishing,
                           d.alpha_scan.min_abs, "alpha nowhere zero"));
  const ZeroScan z2 = scan_zeros(s.grid(), s.geometry().Z2, tol.minimal_point_rel, 0.0, tol);
  const ZeroScan div = scan_zeros(s.grid(), d.div_tau, tol.vanishing_rel, 0.0, tol);
  r.evidence["min_abs_Z2"] = z2.min_abs;
  r.evidence["min_abs_div_tau"] = div.min_abs;
  r.node_sets["minimal_points"] = z2.near_zero;
  r.conclude(z2.vanishes_somewhere == Tri::Yes && div.vanishes_somewhere == Tri::Yes);
  return r;
}

VerificationReport cmc_check(const SymmetryDecomposition& d, const EmbeddedSurface& s,
                             const LieExpansionIdentity& lie, const Tolerances& tol) {
  VerificationReport r;
  r.id = "cmc";
  const auto& g = s.geometry();
  r.require(gate_symmetry(d, tol));
  r.require(gate_mots(s, tol));
  const double spread = g.Z2.maxCoeff() - g.Z2.minCoeff();
  r.require({"constant_mean_curvature", spread <= tol.cmc_rel * (1.0 + max_abs(g.Z2)), spread,
             "max Z2 - min Z2"});

  const NodalScalar lhs = d.alpha * lie.Z1_prime;
  const double scale = std::max(1.0, max_abs(lhs));
  const double imp1 = max_abs(lhs - lie.lhs);
  r.evidence["imp1_residual"] = imp1;
  r.evidence["max_abs_alpha_Z1_prime"] = max_abs(lhs);
  bool ok = imp1 <= tol.identity * scale;

  if (!s.data().acceleration_data) {
    r.notes.push_back("MissingAccelerationData: projection branch skipped");
  } else if (r.hypotheses_met) {
    // u'_b = n^a V_ab; projection -2 q^ab u'_b (L_x n)_a
    const SurfaceGrid& grid = s.grid();
    NodalScalar proj = grid.zeros();
    double transverse = 0.0, along = 0.0;
    for (int j = 0; j < grid.nphi(); ++j) {
      for (int i = 0; i < grid.ntheta(); ++i) {
        const Point p = s.node(i, j);
        const Vec3 nu = at(g.n_up, i, j);
        const Vec3 up = s.data().acceleration_data->operator()(p).transpose() * nu;
        const Mat3 hinv = checked_inverse(s.data().h(p), tol);
        const Vec3 up_raised = hinv * up;
        const Vec3 tang = up_raised - up.dot(nu) * nu;  // q^ab u'_b
        transverse = std::max(transverse, std::sqrt(std::max(0.0, tang.dot(s.data().h(p) * tang))));
        along = std::max(along, std::abs(up.dot(nu)));
        proj(i, j) = -2.0 * tang.dot(at(lie.lie_n, i, j));
      }
    }
    const double proj_res = max_abs(proj - lhs);
    const bool parallel = transverse <= tol.identity * std::max(1.0, along);
    r.evidence["proj_residual"] = proj_res;
    r.evidence["u_prime_transverse"] = transverse;
    ok = ok && proj_res <= tol.identity * scale;
    if (parallel) {
      r.notes.push_back("u' along n: alpha Z1' = 0 asserted");
      ok = ok && max_abs(lhs) <= tol.identity;
    }
  }
  r.conclude(ok);
  return r;
}

std::array<VerificationReport, 2> einstein_slice_checks(const EmbeddedSurface& s,
                                                        const SpectrumResult* spec,
                                                        const Tolerances& tol) {
  std::array<VerificationReport, 2> out;
  out[0].id = "einstein_gauss";
  out[1].id = "vanc";
  const auto& g = s.geometry();
  const double defect = einstein_defect(s.data(), s.nodes(), tol);
  for (auto& r : out) {
    Hypothesis h{"einstein_slice", defect <= tol.einstein, defect, "max |R_ab - (R/3) h_ab|"};
    if (!h.met) r.notes.push_back("NotEinstein");
    r.require(h);
  }

  const NodalScalar gauss = g.ricci - g.slice_R / 3.0 - (g.Z2 * g.Z2 - g.y_sq);
  const double gres = max_abs(gauss);
  out[0].evidence["gauss_residual"] = gres;
  bool ok = gres <= tol.gauss;
  const ZeroScan z2 = scan_zeros(s.grid(), g.Z2, tol.minimal_point_rel, 0.0, tol);
  if (z2.identically_zero && g.slice_R.maxCoeff() <= 0.0) {
    out[0].notes.push_back("minimal surface in a slice with R <= 0: intrinsic curvature <= 0");
    out[0].evidence["max_intrinsic_R"] = g.ricci.maxCoeff();
    if (spec) {
      out[0].evidence["lambda0"] = spec->lambda0();
      ok = ok && spec->lambda0() < -spec->marginal_tolerance();
    } else {
      ok = ok && g.ricci.maxCoeff() <= tol.gauss;
    }
  }
  out[0].conclude(ok);

  const double rspread = g.ricci.maxCoeff() - g.ricci.minCoeff();
  out[1].require({"constant_intrinsic_curvature", rspread <= tol.cmc_rel * (1.0 + max_abs(g.ricci)),
                  rspread, "max R - min R on the surface"});
  const auto dZ2 = surface_gradient(s, g.Z2);
  const auto dy = surface_gradient(s, g.y_sq);
  const NodalScalar vt = 2.0 * g.Z2 * dZ2[0] - dy[0];
  const NodalScalar vp = 2.0 * g.Z2 * dZ2[1] - dy[1];
  const NodalScalar vn =
      (g.qinv_tt * vt * vt + 2.0 * g.qinv_tp * vt * vp + g.qinv_pp * vp * vp).max(0.0).sqrt();
  const double vres = max_abs(vn);
  out[1].evidence["vanc_residual"] = vres;
  const double yspread = g.y_sq.maxCoeff() - g.y_sq.minCoeff();
  if (yspread <= tol.cmc_rel * (1.0 + max_abs(g.y_sq))) {
    out[1].notes.push_back(z2.identically_zero ? "branch: minimal" : "branch: CMC");
  }
  out[1].conclude(vres <= tol.identity);
  return out;
}

IntegralIdentity integral_identity(const SymmetryDecomposition& d, const EmbeddedSurface& s,
                                   const Tolerances& tol) {
  IntegralIdentity out;
  const auto& g = s.geometry();
  out.value = integrate(s, d.alpha * g.Z2);
  out.holds = std::abs(out.value) <= tol.integral_identity;
  out.projected_residual = max_abs(projected_symmetry_residual(d, s));
  out.precondition = d.slice_symmetry.is_symmetry && out.projected_residual <= tol.identity;
  const ZeroScan z2 = scan_zeros(s.grid(), g.Z2, tol.minimal_point_rel, 0.0, tol);
  out.z2_sign_definite = z2.nowhere_vanishing == Tri::Yes;
  const double amax = max_abs(d.alpha);
  out.alpha_both_signs = !d.alpha_identically_zero && d.alpha.maxCoeff() > tol.tangency_rel * amax &&
                         d.alpha.minCoeff() < -tol.tangency_rel * amax;
  return out;
}

GenuineSurfaceChecks genuine_surface_checks(const SymmetryDecomposition& d,
                                            const EmbeddedSurface& s, double eps,
                                            const Tolerances& tol) {
  GenuineSurfaceChecks out;
  const OffsetStack off(s, eps);
  const VectorField& x = d.x;
  auto alpha_of = [&x](const EmbeddedSurface& o) {
    return NodalScalar(dot(evaluate(o, x), o.geometry().n_down));
  };
  out.alpha_prime = off.derivative(alpha_of);
  out.Z2_prime = off.derivative([](const EmbeddedSurface& o) { return o.geometry().Z2; });
  out.alphaZ2_prime =
      off.derivative([&](const EmbeddedSurface& o) { return NodalScalar(alpha_of(o) * o.geometry().Z2); });
  out.tau_n_prime = s.grid().zeros();
  for (int b = 0; b < 3; ++b) {
    out.tau_n_prime +=
        d.tau_up[b] *
        off.derivative([b](const EmbeddedSurface& o) { return o.geometry().n_down[b]; });
  }

  out.genuine = s.data().genuine_surface;
  out.gate_met = d.slice_symmetry.is_symmetry && d.alpha_scan.nowhere_vanishing == Tri::Yes;
  if (!d.slice_symmetry.is_symmetry) out.notes.push_back("slice symmetry gate not met");
  if (d.alpha_scan.nowhere_vanishing != Tri::Yes) out.notes.push_back("GateNotMet");
  if (!out.genuine) out.notes.push_back("genuine-surface flag not declared");
  if (out.gate_met && out.genuine) {
    out.verified = max_abs(out.alphaZ2_prime) <= tol.identity &&
                   max_abs(out.Z2_prime) <= tol.identity &&
                   max_abs(out.alpha_prime) <= tol.identity;
  }
  return out;
}

const std::vector<std::string>& statement_ids() {
  static const std::vector<std::string> ids{
      "lemma_confinement", "thm_tangency_1_6", "prop_zero_eig_1",     "cor_marginal_1",
      "prop_zero_eig_2",   "thm_unstable_1",   "thm_unstable_2a",     "thm_unstable_2b",
      "remark_minimal_point", "cmc",           "einstein_gauss",      "vanc"};
  return ids;
}

std::vector<VerificationReport> verify_all(const SymmetryDecomposition& d, const EmbeddedSurface& s,
                                           const SpectrumResult& spec, double eps,
                                           const Tolerances& tol) {
  const LieExpansionIdentity lie = lie_expansion_identity(d, s, eps, tol);
  std::vector<VerificationReport> out;
  out.push_back(verify_lemma_confinement(d, s, tol));
  out.push_back(verify_theorem_tangency(d, s, spec, tol));
  for (auto& r : verify_prop_zero_eigenvalue(d, s, spec, lie, tol)) out.push_back(std::move(r));
  for (auto& r : verify_instability_theorems(d, s, spec, lie, tol)) out.push_back(std::move(r));
  out.push_back(verify_remark_minimal_point(d, s, tol));
  out.push_back(cmc_check(d, s, lie, tol));
  for (auto& r : einstein_slice_checks(s, &spec, tol)) out.push_back(std::move(r));
  return out;
}

}  // namespace motskit
