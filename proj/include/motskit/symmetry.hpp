#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "motskit/stability.hpp"

namespace motskit {

enum class Tri { Yes, No, Indeterminate };
std::string to_string(Tri t);

// Zero scan of a nodal scalar. A sign change between neighbouring nodes
// (including across the poles) counts as a zero even if no node is small.
struct ZeroScan {
  double min_abs = 0.0, max_abs = 0.0;
  bool identically_zero = false;
  bool sign_change = false;
  std::vector<int> near_zero;  // flat indices: small nodes and sign-change neighbours
  Tri vanishes_somewhere = Tri::Indeterminate;
  Tri nowhere_vanishing = Tri::Indeterminate;
};

// `scale` is the reference magnitude for the relative thresholds; <= 0 uses max|f|.
ZeroScan scan_zeros(const SurfaceGrid& grid, const NodalScalar& f, double vanish_rel,
                    double scale = 0.0, const Tolerances& tol = default_tolerances());

struct SymmetryDecomposition {
  VectorField x;
  SymmetryTest slice_symmetry;
  NodalVector x_up;            // x^a at the nodes
  NodalScalar x_norm;          // |x|_h
  NodalScalar alpha;           // h(x, n)
  NodalVector tau_up;          // x - alpha n
  NodalScalar tau_t, tau_p;    // tau = tau^A X_A
  NodalScalar div_tau;
  std::vector<int> tangency_set;
  bool zero_set_empty = true;
  bool alpha_identically_zero = false;
  ZeroScan alpha_scan;
  std::optional<NodalScalar> alpha_prime;
  double reconstruction_residual = 0.0;  // max |x - alpha n - tau|
  double normal_residual = 0.0;          // max |h(tau, n)|
};

// Symmetry is tested on the surface nodes and a thin layer around them.
SymmetryDecomposition decompose(const VectorField& x, const EmbeddedSurface& s,
                                bool with_alpha_prime = false,
                                const Tolerances& tol = default_tolerances());

// alpha Z2 + div tau
NodalScalar projected_symmetry_residual(const SymmetryDecomposition& d, const EmbeddedSurface& s);

struct LieExpansionIdentity {
  bool applicable = false;  // x is a slice symmetry
  NodalScalar lhs;          // K^ab L_x q_ab
  NodalScalar rhs;          // alpha Z1' - tau^A D_A Z2
  double residual = 0.0;    // max |lhs - rhs|
  NodalScalar Z1_prime;
  NodalScalar tau_dZ2;
  NodalVector lie_n;  // (L_x n)_a, covariant
  std::vector<int> ext2_holds, ext2_fails;
};

// The left side Lie-drags q through the Gaussian-normal extension of n; the
// right side uses the normal variation of Z1 and the surface gradient of Z2.
LieExpansionIdentity lie_expansion_identity(const SymmetryDecomposition& d,
                                            const EmbeddedSurface& s, double eps,
                                            const Tolerances& tol = default_tolerances());

struct Hypothesis {
  std::string name;
  bool met = false;
  double residual = 0.0;
  std::string detail;
};

struct VerificationReport {
  std::string id;
  bool hypotheses_met = false;
  std::vector<Hypothesis> hypotheses;
  std::optional<bool> conclusion_verified;  // nullopt = not applicable
  std::map<std::string, double> evidence;
  std::map<std::string, std::vector<int>> node_sets;
  std::vector<std::string> notes;

  void require(Hypothesis h);
  // Records the conclusion only when every hypothesis holds.
  void conclude(bool verified);
};

VerificationReport verify_lemma_confinement(const SymmetryDecomposition& d,
                                            const EmbeddedSurface& s,
                                            const Tolerances& tol = default_tolerances());
VerificationReport verify_theorem_tangency(const SymmetryDecomposition& d, const EmbeddedSurface& s,
                                           const SpectrumResult& spec,
                                           const Tolerances& tol = default_tolerances());
// prop_zero_eig_1, cor_marginal_1, prop_zero_eig_2
std::array<VerificationReport, 3> verify_prop_zero_eigenvalue(
    const SymmetryDecomposition& d, const EmbeddedSurface& s, const SpectrumResult& spec,
    const LieExpansionIdentity& lie, const Tolerances& tol = default_tolerances());
// thm_unstable_1, thm_unstable_2a, thm_unstable_2b
std::array<VerificationReport, 3> verify_instability_theorems(
    const SymmetryDecomposition& d, const EmbeddedSurface& s, const SpectrumResult& spec,
    const LieExpansionIdentity& lie, const Tolerances& tol = default_tolerances());
VerificationReport verify_remark_minimal_point(const SymmetryDecomposition& d,
                                               const EmbeddedSurface& s,
                                               const Tolerances& tol = default_tolerances());
VerificationReport cmc_check(const SymmetryDecomposition& d, const EmbeddedSurface& s,
                             const LieExpansionIdentity& lie,
                             const Tolerances& tol = default_tolerances());
// einstein_gauss, vanc
std::array<VerificationReport, 2> einstein_slice_checks(
    const EmbeddedSurface& s, const SpectrumResult* spec = nullptr,
    const Tolerances& tol = default_tolerances());

// Extremal points of Z2: nodes where |D Z2| is negligible or where the gradient
// reverses direction towards a neighbour.
std::vector<int> extremal_nodes(const EmbeddedSurface& s, const NodalScalar& Z2,
                                const Tolerances& tol = default_tolerances());

struct IntegralIdentity {
  double value = 0.0;  // int alpha Z2 dA
  bool holds = false;
  bool precondition = false;  // alpha Z2 + div tau small
  double projected_residual = 0.0;
  bool z2_sign_definite = false;
  bool alpha_both_signs = false;
};
IntegralIdentity integral_identity(const SymmetryDecomposition& d, const EmbeddedSurface& s,
                                   const Tolerances& tol = default_tolerances());

struct GenuineSurfaceChecks {
  NodalScalar alpha_prime, alphaZ2_prime, Z2_prime;
  NodalScalar tau_n_prime;  // tau^a n_a'
  bool gate_met = false;    // alpha nowhere zero
  bool genuine = false;     // declared on the data set
  std::optional<bool> verified;
  std::vector<std::string> notes;  // "GateNotMet" etc.
};
GenuineSurfaceChecks genuine_surface_checks(const SymmetryDecomposition& d,
                                            const EmbeddedSurface& s, double eps,
                                            const Tolerances& tol = default_tolerances());

const std::vector<std::string>& statement_ids();

// Every verifier, in statement_ids() order.
std::vector<VerificationReport> verify_all(const SymmetryDecomposition& d, const EmbeddedSurface& s,
                                           const SpectrumResult& spec, double eps,
                                           const Tolerances& tol = default_tolerances());

}  // namespace motskit
