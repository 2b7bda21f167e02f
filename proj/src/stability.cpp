#include "motskit/stability.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include "motskit/errors.hpp"

namespace motskit {

namespace {

void scale_rows(Eigen::MatrixXd& m, const NodalScalar& a) {
  const Eigen::VectorXd v = SurfaceGrid::flatten(a);
  m.array().colwise() *= v.array();
}

Eigen::VectorXd seeded_vector(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss;
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = gauss(rng);
  return v;
}

}  // namespace

NodalScalar StabilityOperator::apply(const NodalScalar& psi) const {
  const Eigen::VectorXd out = matrix * SurfaceGrid::flatten(psi);
  if (grid) return grid->unflatten(out);
  return Eigen::Map<const Eigen::ArrayXXd>(out.data(), out.size(), 1);
}

double StabilityOperator::weighted_norm(const Eigen::VectorXd& v) const {
  return std::sqrt((weights.array() * v.array().square()).sum());
}

double StabilityOperator::norm() const {
  if (norm_) return *norm_;
  const Eigen::VectorXd s = weights.array().sqrt();
  const Eigen::VectorXd sinv = s.cwiseInverse();
  // B = S L S^{-1}
  const Eigen::MatrixXd B = s.asDiagonal() * matrix * sinv.asDiagonal();
  // largest eigenvalue of B^T B; power iteration stalls on the clustered top of the spectrum
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B.transpose() * B, Eigen::EigenvaluesOnly);
  const double sigma = std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
  norm_ = sigma;
  return sigma;
}

double StabilityOperator::weighted_asymmetry() const {
  const Eigen::MatrixXd WL = weights.asDiagonal() * matrix;
  const double scale = WL.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return (WL - WL.transpose()).cwiseAbs().maxCoeff() / scale;
}

StabilityOperator operator_from_matrix(Eigen::MatrixXd matrix, Eigen::VectorXd weights,
                                       GridPtr grid) {
  StabilityOperator op;
  op.matrix = std::move(matrix);
  op.weights = std::move(weights);
  op.grid = std::move(grid);
  return op;
}

StabilityOperator assemble(const EmbeddedSurface& s, const OperatorOptions& options) {
  const auto& g = s.geometry();
  if (g.level != GeometryLevel::Full) {
    throw InvalidParameter("operator assembly needs full surface geometry");
  }
  const SurfaceGrid& grid = s.grid();

  NodalScalar om_t = g.omega_t, om_p = g.omega_p;
  if (options.drop_omega) {
    om_t.setZero();
    om_p.setZero();
  }
  if (options.gauge) {
    om_t += grid.d_theta(*options.gauge, Parity::Even);
    om_p += grid.d_phi(*options.gauge);
  }
  const NodalScalar up_t = g.qinv_tt * om_t + g.qinv_tp * om_p;
  const NodalScalar up_p = g.qinv_tp * om_t + g.qinv_pp * om_p;
  const NodalScalar om_sq = up_t * om_t + up_p * om_p;
  const NodalScalar div_om = surface_divergence(s, up_t, up_p);

  StabilityOperator op;
  op.grid = s.grid_ptr();
  op.weights = SurfaceGrid::flatten(g.area_weight);
  op.omega_up_t = up_t;
  op.omega_up_p = up_p;
  op.G_ku = g.rho + g.j_n;
  op.potential = div_om - om_sq + 0.5 * (g.ricci - g.sigma_sq) - op.G_ku;
  op.shift = options.shift;

  Eigen::MatrixXd m = grid.d_thetatheta_matrix();
  scale_rows(m, -g.qinv_tt);
  Eigen::MatrixXd t = grid.d_thetaphi_matrix();
  scale_rows(t, -2.0 * g.qinv_tp);
  m += t;
  t = grid.d_phiphi_matrix();
  scale_rows(t, -g.qinv_pp);
  m += t;
  t = grid.d_theta_matrix();
  scale_rows(t, -g.lap_b_t + 2.0 * up_t);
  m += t;
  t = grid.d_phi_matrix();
  scale_rows(t, -g.lap_b_p + 2.0 * up_p);
  m += t;
  m.diagonal() += SurfaceGrid::flatten(op.potential);
  if (options.shift != 0.0) m.diagonal().array() -= options.shift;
  op.matrix = std::move(m);
  return op;
}

NodalScalar deformation_oracle(const EmbeddedSurface& s, const NodalScalar& psi, double eps) {
  const double residual = s.geometry().theta_k.abs().maxCoeff();
  if (residual > s.tolerances().mots_residual) {
    std::ostringstream os;
    os << "max |theta_k| = " << residual << " exceeds " << s.tolerances().mots_residual;
    throw NotAMOTS(os.str());
  }
  auto central = [&](double e) {
    const NodalScalar plus = normal_deformation(s, psi, e).geometry().theta_k;
    const NodalScalar minus = normal_deformation(s, psi, -e).geometry().theta_k;
    return NodalScalar((plus - minus) / (2.0 * e));
  };
  const NodalScalar coarse = central(eps);
  const NodalScalar fine = central(0.5 * eps);
  return (4.0 * fine - coarse) / 3.0;
}

SpectrumResult::SpectrumResult(const StabilityOperator& op, Eigen::VectorXcd sorted_eigenvalues,
                               double op_norm, Tolerances tol)
    : op_(std::make_shared<const StabilityOperator>(op)),
      eigenvalues_(std::move(sorted_eigenvalues)),
      norm_(op_norm),
      tol_(tol) {}

bool SpectrumResult::principal_is_real() const {
  const auto l0 = principal();
  return std::abs(l0.imag()) <= 1e-8 * std::max(1.0, std::abs(l0.real()));
}

double SpectrumResult::marginal_tolerance() const { return tol_.marginal_rel * norm_; }

Eigenpair SpectrumResult::eigenpair(int index) const {
  const StabilityOperator& op = *op_;
  const int n = op.size();
  const std::complex<double> lambda = eigenvalues_(index);
  const double delta = 1e-9 * (1.0 + std::abs(lambda));
  Eigenpair out;
  out.value = lambda;
  auto wnorm = [&](const Eigen::VectorXcd& v) {
    return std::sqrt((op.weights.array() * v.array().abs2()).sum());
  };
  Eigen::VectorXcd v = seeded_vector(n, 11u + index).cast<std::complex<double>>();
  if (std::abs(lambda.imag()) <= 1e-10 * std::max(1.0, std::abs(lambda))) {
    Eigen::MatrixXd shifted = op.matrix;
    shifted.diagonal().array() -= lambda.real() + delta;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(shifted);
    Eigen::VectorXd r = v.real();
    for (int it = 0; it < 3; ++it) {
      r = lu.solve(r);
      r /= std::sqrt((op.weights.array() * r.array().square()).sum());
    }
    v = r.cast<std::complex<double>>();
  } else {
    Eigen::MatrixXcd shifted = op.matrix.cast<std::complex<double>>();
    shifted.diagonal().array() -= lambda + delta;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(shifted);
    for (int it = 0; it < 3; ++it) {
      v = lu.solve(v);
      v /= wnorm(v);
    }
  }
  out.vector = v;
  const Eigen::VectorXcd res = op.matrix.cast<std::complex<double>>() * v - lambda * v;
  out.residual = wnorm(res);
  return out;
}

std::vector<int> SpectrumResult::cluster(std::complex<double> value, double abs_tol) const {
  std::vector<int> out;
  for (int i = 0; i < eigenvalues_.size(); ++i) {
    if (std::abs(eigenvalues_(i) - value) <= abs_tol) out.push_back(i);
  }
  return out;
}

Eigen::MatrixXd SpectrumResult::eigenspace(double value, int multiplicity) const {
  const StabilityOperator& op = *op_;
  const int n = op.size();
  const Eigen::VectorXd s = op.weights.array().sqrt();
  Eigen::MatrixXd shifted = op.matrix;
  shifted.diagonal().array() -= value + 1e-9 * (1.0 + std::abs(value));
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(shifted);
  Eigen::MatrixXd V(n, multiplicity);
  for (int k = 0; k < multiplicity; ++k) V.col(k) = seeded_vector(n, 101u + k);
  for (int it = 0; it < 4; ++it) {
    V = lu.solve(V);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(s.asDiagonal() * V);
    const Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(n, multiplicity);
    V = s.cwiseInverse().asDiagonal() * Q;
  }
  return V;
}

SpectrumResult spectrum(const StabilityOperator& op, const Tolerances& tol) {
  const int n = op.size();
  if (n == 0) throw EigensolverFailure("empty operator");
  if (static_cast<std::size_t>(n) > tol.dense_limit) {
    std::ostringstream os;
    os << "N = " << n << " exceeds the dense limit " << tol.dense_limit;
    throw EigensolverFailure(os.str());
  }
  if (!op.matrix.allFinite()) throw EigensolverFailure("operator has non-finite entries");
  Eigen::EigenSolver<Eigen::MatrixXd> es;
  es.compute(op.matrix, false);
  if (es.info() != Eigen::Success) {
    std::ostringstream os;
    os << "real Schur iteration did not converge (N = " << n
       << ", max iterations = " << es.getMaxIterations() << ")";
    throw EigensolverFailure(os.str());
  }
  const Eigen::VectorXcd ev = es.eigenvalues();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (ev(a).real() != ev(b).real()) return ev(a).real() < ev(b).real();
    return ev(a).imag() < ev(b).imag();
  });
  Eigen::VectorXcd sorted(n);
  for (int i = 0; i < n; ++i) sorted(i) = ev(order[i]);
  return SpectrumResult(op, sorted, op.norm(), tol);
}

Stability classify(double lambda0, double tol) {
  if (std::abs(lambda0) <= tol) return Stability::MarginallyStable;
  return lambda0 > 0.0 ? Stability::StrictlyStable : Stability::Unstable;
}

std::string to_string(Stability s) {
  switch (s) {
    case Stability::StrictlyStable:
      return "StrictlyStable";
    case Stability::MarginallyStable:
      return "MarginallyStable";
    case Stability::Unstable:
      return "Unstable";
  }
  return "unknown";
}

double kernel_test(const StabilityOperator& op, const NodalScalar& candidate) {
  const Eigen::VectorXd c = SurfaceGrid::flatten(candidate);
  const double cn = op.weighted_norm(c);
  if (!(cn > 0.0) || !std::isfinite(cn)) throw ZeroCandidate("candidate vanishes identically");
  return op.weighted_norm(op.matrix * c) / (op.norm() * cn);
}

double subspace_correlation(const Eigen::MatrixXd& basis, const Eigen::VectorXd& weights,
                            const Eigen::VectorXd& c) {
  const Eigen::VectorXd a = basis.transpose() * (weights.asDiagonal() * c);
  const double cn = std::sqrt((weights.array() * c.array().square()).sum());
  return a.norm() / cn;
}

}  // namespace motskit
