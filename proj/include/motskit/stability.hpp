#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "motskit/surface.hpp"

namespace motskit {

struct OperatorOptions {
  // Replace omega_A by omega_A + D_A f.
  std::optional<NodalScalar> gauge;
  // Drop the rotation 1-form entirely (self-adjoint comparison operator).
  bool drop_omega = false;
  // Assemble L - shift * I.
  double shift = 0.0;
};

class StabilityOperator {
 public:
  Eigen::MatrixXd matrix;  // acts on flattened nodal scalars
  GridPtr grid;
  Eigen::VectorXd weights;  // area quadrature weights, flattened

  // Coefficient fields that went into the matrix.
  NodalScalar omega_up_t, omega_up_p;
  NodalScalar potential;  // div omega - |omega|^2 + (R - |sigma|^2)/2 - G(k, u)
  NodalScalar G_ku;       // rho + j_n
  double shift = 0.0;

  int size() const { return static_cast<int>(matrix.rows()); }
  NodalScalar apply(const NodalScalar& psi) const;
  double weighted_norm(const Eigen::VectorXd& v) const;
  // Spectral norm of W^{1/2} L W^{-1/2}.
  double norm() const;
  // max |W L - (W L)^T| / max |W L|
  double weighted_asymmetry() const;

 private:
  mutable std::optional<double> norm_;
};

// L psi = -Lap psi + 2 omega^A D_A psi + (div omega - |omega|^2 + (R - |sigma|^2)/2 - rho - j_n) psi
StabilityOperator assemble(const EmbeddedSurface& s, const OperatorOptions& options = {});

// Operator wrapping an explicit matrix (tests, synthetic cases).
StabilityOperator operator_from_matrix(Eigen::MatrixXd matrix, Eigen::VectorXd weights,
                                       GridPtr grid = nullptr);

// [theta_k(X + eps psi n) - theta_k(X - eps psi n)] / (2 eps), one Richardson
// level. Throws NotAMOTS when max |theta_k| exceeds the MOTS tolerance.
NodalScalar deformation_oracle(const EmbeddedSurface& s, const NodalScalar& psi, double eps);

struct Eigenpair {
  std::complex<double> value;
  Eigen::VectorXcd vector;  // weighted-unit norm
  double residual = 0.0;    // ||L v - lambda v||_W
};

class SpectrumResult {
 public:
  SpectrumResult(const StabilityOperator& op, Eigen::VectorXcd sorted_eigenvalues, double op_norm,
                 Tolerances tol);
  const StabilityOperator& op() const { return *op_; }

  const Eigen::VectorXcd& eigenvalues() const { return eigenvalues_; }
  std::complex<double> principal() const { return eigenvalues_(0); }
  double lambda0() const { return eigenvalues_(0).real(); }
  bool principal_is_real() const;
  double operator_norm() const { return norm_; }
  double marginal_tolerance() const;

  // Eigenvector by shifted inverse iteration.
  Eigenpair eigenpair(int index) const;
  // Indices of eigenvalues within the cluster tolerance of `value`.
  std::vector<int> cluster(std::complex<double> value, double abs_tol) const;
  // W-orthonormal basis of the invariant subspace for a real eigenvalue of
  // the given multiplicity (block inverse iteration).
  Eigen::MatrixXd eigenspace(double value, int multiplicity) const;

 private:
  std::shared_ptr<const StabilityOperator> op_;
  Eigen::VectorXcd eigenvalues_;
  double norm_;
  Tolerances tol_;
};

// Dense full-spectrum solve. Throws EigensolverFailure.
SpectrumResult spectrum(const StabilityOperator& op, const Tolerances& tol = default_tolerances());

enum class Stability { StrictlyStable, MarginallyStable, Unstable };
Stability classify(double lambda0, double tol);
std::string to_string(Stability s);

// ||L c||_W / (||L|| ||c||_W). Throws ZeroCandidate.
double kernel_test(const StabilityOperator& op, const NodalScalar& candidate);

// || P c ||_W / || c ||_W for a W-orthonormal basis B.
double subspace_correlation(const Eigen::MatrixXd& basis, const Eigen::VectorXd& weights,
                            const Eigen::VectorXd& c);

}  // namespace motskit
