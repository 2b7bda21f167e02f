#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <set>

#include "motskit/report.hpp"
#include "support.hpp"

using namespace motskit;
using namespace motskit::testing;

namespace {

struct Case {
  EmbeddedSurface s;
  SymmetryDecomposition d;
  SpectrumResult spec;
  LieExpansionIdentity lie;
  std::vector<VerificationReport> reports;

  const VerificationReport& report(const std::string& id) const {
    for (const auto& r : reports)
      if (r.id == id) return r;
    FAIL("missing report " << id);
    return reports.front();
  }
};

Case make_case(EmbeddedSurface s, const VectorField& x) {
  SymmetryDecomposition d = decompose(x, s);
  SpectrumResult spec = spectrum(assemble(s));
  LieExpansionIdentity lie = lie_expansion_identity(d, s, 1e-4);
  auto reports = verify_all(d, s, spec, 1e-4);
  return Case{std::move(s), std::move(d), std::move(spec), std::move(lie), std::move(reports)};
}

const Case& desitter_dz() {
  static const Case c = make_case(desitter_mots(), translation_generator(Vec3::UnitZ()));
  return c;
}
const Case& schwarzschild_dphi() {
  static const Case c = make_case(schwarzschild_horizon(), rotation_generator(Vec3::UnitZ()));
  return c;
}
const Case& cylinder_radial() {
  static const Case c = [] {
    const auto d = cylinder();
    return make_case(EmbeddedSurface::round_sphere(grid(12, 24), d, Point::Zero(), 1.3),
                     radial_unit_generator(d->h));
  }();
  return c;
}
// Constant anisotropic K on flat space: translations stay symmetries, the MOTS
// is not round and the ext2 quantity is non-zero.
const Case& anisotropic_translation() {
  static const Case c = [] {
    const auto g = grid(12, 24);
    FinderConfig f;
    f.initial_profile = g->constant(1.0);
    return make_case(find_mots(anisotropic_flat(), g, f).surface,
                     translation_generator(Vec3(0.3, 0.2, 1.0)));
  }();
  return c;
}

bool has_note(const VerificationReport& r, const std::string& text) {
  for (const auto& n : r.notes)
    if (n.find(text) != std::string::npos) return true;
  return false;
}

bool hypothesis_met(const VerificationReport& r, const std::string& name) {
  for (const auto& h : r.hypotheses)
    if (h.name == name) return h.met;
  FAIL("missing hypothesis " << name);
  return false;
}

}  // namespace

TEST_CASE("zero scans") {
  const auto g = grid(12, 24);
  const NodalScalar c = cos_theta(*g);
  const ZeroScan a = scan_zeros(*g, c, 1e-8);
  CHECK(a.sign_change);
  CHECK(a.vanishes_somewhere == Tri::Yes);
  CHECK(a.nowhere_vanishing == Tri::No);
  const ZeroScan b = scan_zeros(*g, 2.0 + c, 1e-6);
  CHECK(b.vanishes_somewhere == Tri::No);
  CHECK(b.nowhere_vanishing == Tri::Yes);
  CHECK(scan_zeros(*g, g->zeros(), 1e-8).identically_zero);
  // smallest value in the indeterminate band between the two thresholds
  NodalScalar f = g->constant(1.0);
  f(3, 4) = 1e-7;
  const ZeroScan band = scan_zeros(*g, f, 1e-8);
  CHECK(band.nowhere_vanishing == Tri::Indeterminate);
  CHECK(band.vanishes_somewhere == Tri::Indeterminate);
  CHECK(to_string(Tri::Indeterminate) == "indeterminate");
}

TEST_CASE("decomposition on the de Sitter MOTS") {
  const auto& c = desitter_dz();
  const NodalScalar th = c.s.grid().theta_nodes();
  CHECK(max_abs(c.d.alpha - th.cos()) < 1e-12);
  CHECK(max_abs(c.d.tau_t + th.sin()) < 1e-12);
  CHECK(max_abs(c.d.tau_p) < 1e-12);
  CHECK(max_abs(c.d.div_tau + 2.0 * th.cos()) < 1e-10);
  CHECK(c.d.reconstruction_residual < 1e-12);
  CHECK(c.d.normal_residual < 1e-12);
  CHECK(c.d.slice_symmetry.is_symmetry);
  CHECK_FALSE(c.d.zero_set_empty);
  CHECK(max_abs(projected_symmetry_residual(c.d, c.s)) < 1e-10);
}

TEST_CASE("decomposition of a rotation on the Schwarzschild horizon") {
  const auto& c = schwarzschild_dphi();
  CHECK(c.d.alpha_identically_zero);
  CHECK(max_abs(c.d.tau_p - 1.0) < 1e-12);
  CHECK(max_abs(c.d.tau_t) < 1e-12);
  CHECK(max_abs(projected_symmetry_residual(c.d, c.s)) < 1e-10);
}

TEST_CASE("the unit normal decomposes as alpha = 1, tau = 0") {
  const auto d = flat();
  const EmbeddedSurface s = EmbeddedSurface::round_sphere(grid(8, 16), d, Point::Zero(), 1.0);
  const SymmetryDecomposition dec = decompose(radial_unit_generator(d->h), s);
  CHECK(max_abs(dec.alpha - 1.0) < 1e-12);
  CHECK(max_abs(dec.tau_t) + max_abs(dec.tau_p) < 1e-12);
  CHECK(max_abs(dec.div_tau) < 1e-10);
}

TEST_CASE("projected identity needs only the Killing property") {
  // alpha Z2 + div tau = q^ab D_a x_b, so it holds on any surface once L_x h = 0
  const auto g = grid(12, 24);
  const EmbeddedSurface round = EmbeddedSurface::round_sphere(g, desitter(), Point::Zero(), 1.1);
  const SymmetryDecomposition d = decompose(translation_generator(Vec3::UnitZ()), round);
  CHECK(max_abs(projected_symmetry_residual(d, round)) < 1e-10);
  // a dilation is not Killing: q^ab D_a x_b = 2 on every surface
  const EmbeddedSurface p = EmbeddedSurface::from_profile(g, desitter(), Point::Zero(),
                                                          1.0 + 0.1 * cos_theta(*g));
  const SymmetryDecomposition dil = decompose(affine_generator(Vec3::Zero(), Mat3::Identity()), p);
  CHECK_FALSE(dil.slice_symmetry.is_symmetry);
  CHECK(max_abs(projected_symmetry_residual(dil, p) - 2.0) < 1e-8);
}

TEST_CASE("lie expansion identity") {
  SUBCASE("de Sitter: both sides vanish") {
    const auto& l = desitter_dz().lie;
    CHECK(l.applicable);
    CHECK(max_abs(l.lhs) < 1e-7);
    CHECK(max_abs(l.rhs) < 1e-7);
    CHECK(l.ext2_fails.empty());
  }
  SUBCASE("Schwarzschild: both sides vanish") {
    const auto& l = schwarzschild_dphi().lie;
    CHECK(max_abs(l.lhs) < 1e-10);
    CHECK(max_abs(l.rhs) < 1e-10);
  }
  SUBCASE("anisotropic data: non-trivial and matching") {
    const auto& l = anisotropic_translation().lie;
    CHECK(l.applicable);
    CHECK(max_abs(l.rhs) > 1e-2);
    CHECK(l.residual < 1e-4 * max_abs(l.rhs));
    CHECK_FALSE(l.ext2_fails.empty());
  }
  SUBCASE("non-symmetry flagged inapplicable") {
    const EmbeddedSurface& s = desitter_dz().s;
    const SymmetryDecomposition d = decompose(affine_generator(Vec3::Zero(), Mat3::Identity()), s);
    CHECK_FALSE(d.slice_symmetry.is_symmetry);
    const LieExpansionIdentity l = lie_expansion_identity(d, s, 1e-4);
    CHECK_FALSE(l.applicable);
    CHECK(l.residual > 1e-3);
  }
}

TEST_CASE("confinement lemma") {
  const auto& sch = schwarzschild_dphi().report("lemma_confinement");
  CHECK(sch.hypotheses_met);
  REQUIRE(sch.conclusion_verified);
  CHECK(*sch.conclusion_verified);
  CHECK(has_note(sch, "x confined"));
  CHECK(has_note(sch, "minimal"));
  const auto& ds = desitter_dz().report("lemma_confinement");
  CHECK_FALSE(ds.hypotheses_met);
  CHECK_FALSE(ds.conclusion_verified.has_value());
  // radial field on de Sitter data: not a slice symmetry
  const EmbeddedSurface& s = desitter_dz().s;
  const SymmetryDecomposition d = decompose(radial_unit_generator(s.data().h), s);
  const VerificationReport r = verify_lemma_confinement(d, s);
  CHECK_FALSE(hypothesis_met(r, "slice_symmetry"));
  CHECK_FALSE(r.conclusion_verified.has_value());
}

TEST_CASE("tangency theorem") {
  const auto& ds = desitter_dz().report("thm_tangency_1_6");
  CHECK(ds.hypotheses_met);
  REQUIRE(ds.conclusion_verified);
  CHECK(*ds.conclusion_verified);
  CHECK(ds.evidence.at("kernel_residual") <= 1e-8);
  CHECK_FALSE(ds.node_sets.at("tangency_set").empty());
  CHECK(ds.evidence.at("lambda0") == doctest::Approx(-2.0).epsilon(1e-9));
  CHECK_FALSE(schwarzschild_dphi().report("thm_tangency_1_6").hypotheses_met);
  const auto& cy = cylinder_radial().report("thm_tangency_1_6");
  CHECK(cy.hypotheses_met);
  CHECK(cy.conclusion_verified.value_or(false));
  CHECK(has_note(cy, "nowhere tangent"));
}

TEST_CASE("zero-eigenvalue propositions gate out on catalog data") {
  for (const auto* c : {&desitter_dz(), &schwarzschild_dphi()}) {
    for (const char* id : {"prop_zero_eig_1", "cor_marginal_1", "prop_zero_eig_2"}) {
      const auto& r = c->report(id);
      CHECK_FALSE(r.hypotheses_met);
      CHECK_FALSE(r.conclusion_verified.has_value());
      const VerificationReport back = report_from_json(to_json(r));
      CHECK(to_json(back) == to_json(r));
    }
  }
}

TEST_CASE("non-umbilic data meets the ext2 hypotheses") {
  const auto& c = anisotropic_translation();
  const auto& p2 = c.report("prop_zero_eig_2");
  CHECK(p2.hypotheses_met);
  CHECK(p2.conclusion_verified.value_or(false));
  const auto& t1 = c.report("thm_unstable_1");
  CHECK(t1.hypotheses_met);
  CHECK(t1.conclusion_verified.value_or(false));
  CHECK(c.spec.lambda0() < -c.spec.marginal_tolerance());
}

TEST_CASE("instability theorems on catalog data") {
  for (const char* id : {"thm_unstable_1", "thm_unstable_2a", "thm_unstable_2b"}) {
    const auto& r = desitter_dz().report(id);
    CHECK_FALSE(r.hypotheses_met);
    CHECK(has_note(r, "unstable by direct spectrum"));
    CHECK_FALSE(schwarzschild_dphi().report(id).hypotheses_met);
  }
}

TEST_CASE("extremal points of Z2 = 2 + 0.1 cos") {
  const EmbeddedSurface s = EmbeddedSurface::round_sphere(grid(12, 24), flat(), Point::Zero(), 1.0);
  const NodalScalar z2 = 2.0 + 0.1 * cos_theta(s.grid());
  const std::vector<int> ext = extremal_nodes(s, z2);
  REQUIRE_FALSE(ext.empty());
  // only the rings next to the poles, where the analytic gradient -0.1 sin is smallest
  const int nt = s.grid().ntheta();
  std::set<int> rings;
  for (int k : ext) rings.insert(k % nt);
  CHECK(rings == std::set<int>{0, nt - 1});
  CHECK(extremal_nodes(s, s.grid().constant(2.0)).size() == static_cast<std::size_t>(s.grid().size()));
}

TEST_CASE("minimal point remark") {
  const auto& cy = cylinder_radial().report("remark_minimal_point");
  CHECK(cy.hypotheses_met);
  CHECK(cy.conclusion_verified.value_or(false));
  CHECK_FALSE(desitter_dz().report("remark_minimal_point").conclusion_verified.value_or(false));
}

TEST_CASE("integral identity") {
  const auto& c = desitter_dz();
  const IntegralIdentity ii = integral_identity(c.d, c.s);
  CHECK(std::abs(ii.value) <= 1e-10);
  CHECK(ii.holds);
  CHECK(ii.z2_sign_definite);
  CHECK(ii.alpha_both_signs);
  const auto& sc = schwarzschild_dphi();
  CHECK(std::abs(integral_identity(sc.d, sc.s).value) <= 1e-10);
  // a Killing field keeps the integral at zero on non-MOTS surfaces as well
  const auto g = grid(12, 24);
  const EmbeddedSurface p = EmbeddedSurface::from_profile(g, desitter(), Point::Zero(),
                                                          1.0 + 0.1 * cos_theta(*g));
  const IntegralIdentity off = integral_identity(decompose(translation_generator(Vec3::UnitZ()), p), p);
  CHECK(off.precondition);
  CHECK(std::abs(off.value) <= 1e-10);
  // dilation on the unit sphere: alpha = 1, Z2 = 2
  const EmbeddedSurface u = EmbeddedSurface::round_sphere(g, flat(), Point::Zero(), 1.0);
  const IntegralIdentity bad = integral_identity(decompose(affine_generator(Vec3::Zero(), Mat3::Identity()), u), u);
  CHECK_FALSE(bad.precondition);
  CHECK(bad.value == doctest::Approx(8.0 * M_PI).epsilon(1e-10));
}

TEST_CASE("genuine surface checks") {
  const auto& ds = desitter_dz();
  const GenuineSurfaceChecks g = genuine_surface_checks(ds.d, ds.s, 1e-4);
  CHECK_FALSE(g.gate_met);
  CHECK_FALSE(g.verified.has_value());
  CHECK(max_abs(g.Z2_prime + 2.0) < 1e-6);
  const auto& cy = cylinder_radial();
  const GenuineSurfaceChecks c = genuine_surface_checks(cy.d, cy.s, 1e-4);
  CHECK(c.gate_met);
  CHECK(c.genuine);
  CHECK(max_abs(c.alphaZ2_prime) <= 1e-6);
  CHECK(c.verified.value_or(false));
  // n-aligned field on the Schwarzschild horizon is not a slice symmetry
  const EmbeddedSurface& h = schwarzschild_dphi().s;
  const SymmetryDecomposition dn = decompose(radial_unit_generator(h.data().h), h);
  CHECK(max_abs(dn.alpha - 1.0) < 1e-12);
  const GenuineSurfaceChecks gn = genuine_surface_checks(dn, h, 1e-4);
  CHECK_FALSE(gn.verified.has_value());
  CHECK_FALSE(dn.slice_symmetry.is_symmetry);
}

TEST_CASE("cmc check") {
  const auto& ds = desitter_dz().report("cmc");
  CHECK(ds.hypotheses_met);
  CHECK(ds.conclusion_verified.value_or(false));
  CHECK(std::abs(ds.evidence.at("imp1_residual")) < 1e-7);
  CHECK(schwarzschild_dphi().report("cmc").conclusion_verified.value_or(false));
  const auto g = grid(12, 24);
  const EmbeddedSurface p = EmbeddedSurface::from_profile(g, desitter(), Point::Zero(),
                                                          1.0 + 0.1 * cos_theta(*g));
  const SymmetryDecomposition d = decompose(translation_generator(Vec3::UnitZ()), p);
  const VerificationReport r = cmc_check(d, p, lie_expansion_identity(d, p, 1e-4));
  CHECK_FALSE(r.hypotheses_met);
  CHECK_FALSE(r.conclusion_verified.has_value());
}

TEST_CASE("einstein slice checks") {
  const double r = 1.4;
  const EmbeddedSurface s = EmbeddedSurface::round_sphere(grid(10, 20), flat(), Point::Zero(), r);
  const auto flat_checks = einstein_slice_checks(s);
  CHECK(flat_checks[0].conclusion_verified.value_or(false));
  CHECK(flat_checks[0].evidence.at("gauss_residual") <= 1e-9);
  const auto& ds = desitter_dz();
  CHECK(ds.report("einstein_gauss").evidence.at("gauss_residual") <= 1e-9);
  const auto& vanc = ds.report("vanc");
  CHECK(vanc.conclusion_verified.value_or(false));
  CHECK(has_note(vanc, "branch: CMC"));
  const auto& sch = schwarzschild_dphi().report("einstein_gauss");
  CHECK_FALSE(sch.hypotheses_met);
  CHECK(has_note(sch, "NotEinstein"));
}

TEST_CASE("every statement reported once and no conclusion without hypotheses") {
  const auto& ids = statement_ids();
  CHECK(ids.size() == 12);
  CHECK(std::set<std::string>(ids.begin(), ids.end()).size() == 12);
  for (const auto* c : {&desitter_dz(), &schwarzschild_dphi(), &cylinder_radial(),
                        &anisotropic_translation()}) {
    REQUIRE(c->reports.size() == ids.size());
    for (std::size_t k = 0; k < ids.size(); ++k) {
      CHECK(c->reports[k].id == ids[k]);
      if (!c->reports[k].hypotheses_met) CHECK_FALSE(c->reports[k].conclusion_verified.has_value());
    }
  }
}
