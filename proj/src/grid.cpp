#include "motskit/grid.hpp"

#include <cmath>
#include <numbers>

#include "motskit/errors.hpp"

namespace motskit {

namespace {

constexpr double kPi = std::numbers::pi;

// P_n(x) and P_n'(x) by the three-term recurrence.
void legendre(int n, double x, double& p, double& dp) {
  double p0 = 1.0, p1 = x;
  if (n == 0) {
    p = 1.0;
    dp = 0.0;
    return;
  }
  for (int k = 2; k <= n; ++k) {
    const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = pk;
  }
  p = p1;
  dp = n * (x * p1 - p0) / (x * x - 1.0);
}

double associated_legendre(int l, int m, double x) {
  // P_l^m without the Condon-Shortley phase
  double pmm = 1.0;
  const double s = std::sqrt((1.0 - x) * (1.0 + x));
  for (int k = 1; k <= m; ++k) pmm *= (2.0 * k - 1.0) * s;
  if (l == m) return pmm;
  double pmm1 = x * (2.0 * m + 1.0) * pmm;
  if (l == m + 1) return pmm1;
  double pll = 0.0;
  for (int ll = m + 2; ll <= l; ++ll) {
    pll = ((2.0 * ll - 1.0) * x * pmm1 - (ll + m - 1.0) * pmm) / (ll - m);
    pmm = pmm1;
    pmm1 = pll;
  }
  return pll;
}

}  // namespace

void gauss_legendre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
  // Golub-Welsch, then a couple of Newton steps on P_n.
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    J(k - 1, k) = b;
    J(k, k - 1) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = es.eigenvalues()(n - 1 - i);
    double p = 0.0, dp = 0.0;
    for (int it = 0; it < 3; ++it) {
      legendre(n, x, p, dp);
      x -= p / dp;
    }
    legendre(n, x, p, dp);
    nodes(i) = x;
    weights(i) = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

double real_spherical_harmonic(int l, int m, double theta, double phi) {
  const int am = std::abs(m);
  double norm = (2.0 * l + 1.0) / (4.0 * kPi);
  for (int k = l - am + 1; k <= l + am; ++k) norm /= k;
  norm = std::sqrt(norm);
  const double p = associated_legendre(l, am, std::cos(theta));
  if (m == 0) return norm * p;
  const double s = std::sqrt(2.0) * norm * p;
  return m > 0 ? s * std::cos(am * phi) : s * std::sin(am * phi);
}

SurfaceGrid::SurfaceGrid(int ntheta, int nphi) : ntheta_(ntheta), nphi_(nphi) {
  if (ntheta < 2) throw InvalidParameter("ntheta must be at least 2");
  if (nphi < 2 || nphi % 2 != 0) throw InvalidParameter("nphi must be even and at least 2");

  gauss_legendre(ntheta, mu_, weights_);
  theta_ = mu_.array().acos();
  sin_ = theta_.array().sin();
  cos_ = mu_;
  phi_.resize(nphi);
  for (int j = 0; j < nphi; ++j) phi_(j) = 2.0 * kPi * j / nphi;

  // Barycentric differentiation on the mu nodes.
  Eigen::VectorXd bw(ntheta);
  for (int i = 0; i < ntheta; ++i) {
    bw(i) = ((i % 2) ? -1.0 : 1.0) * std::sqrt((1.0 - mu_(i) * mu_(i)) * weights_(i));
  }
  dmu_ = Eigen::MatrixXd::Zero(ntheta, ntheta);
  for (int i = 0; i < ntheta; ++i) {
    for (int j = 0; j < ntheta; ++j) {
      if (i != j) dmu_(i, j) = (bw(j) / bw(i)) / (mu_(i) - mu_(j));
    }
    dmu_(i, i) = -dmu_.row(i).sum();
  }

  // d/dtheta on functions even in theta (polynomials in mu) and on functions odd
  // in theta (sin(theta) times a polynomial).
  even_ = -(sin_.asDiagonal() * dmu_);
  const Eigen::VectorXd inv_sin = sin_.cwiseInverse();
  odd_ = Eigen::MatrixXd((cos_.cwiseProduct(inv_sin)).asDiagonal()) -
         sin_.cwiseAbs2().asDiagonal() * dmu_ * inv_sin.asDiagonal();

  const double h = 2.0 * kPi / nphi;
  f1_ = Eigen::MatrixXd::Zero(nphi, nphi);
  f2_ = Eigen::MatrixXd::Zero(nphi, nphi);
  for (int j = 0; j < nphi; ++j) {
    for (int k = 0; k < nphi; ++k) {
      if (j == k) continue;
      const double sign = ((j - k) % 2 == 0) ? 1.0 : -1.0;
      const double half = 0.5 * (j - k) * h;
      f1_(j, k) = 0.5 * sign / std::tan(half);
      f2_(j, k) = -0.5 * sign / (std::sin(half) * std::sin(half));
    }
  }
  // The closed-form diagonal is -pi^2/(3h^2) - 1/6; the negative row sum is the
  // same number but annihilates constants to roundoff.
  for (int j = 0; j < nphi; ++j) f2_(j, j) = -f2_.row(j).sum();

  Eigen::MatrixXd sh = Eigen::MatrixXd::Zero(nphi, nphi);
  for (int j = 0; j < nphi; ++j) sh(j, (j + nphi / 2) % nphi) = 1.0;
  pe_ = 0.5 * (Eigen::MatrixXd::Identity(nphi, nphi) + sh);
  po_ = 0.5 * (Eigen::MatrixXd::Identity(nphi, nphi) - sh);
}

NodalScalar SurfaceGrid::theta_nodes() const { return theta_.replicate(1, nphi_).array(); }

NodalScalar SurfaceGrid::phi_nodes() const {
  return phi_.transpose().replicate(ntheta_, 1).array();
}

NodalScalar SurfaceGrid::shift(const NodalScalar& f) const {
  NodalScalar out(ntheta_, nphi_);
  const int half = nphi_ / 2;
  out.leftCols(half) = f.rightCols(half);
  out.rightCols(half) = f.leftCols(half);
  return out;
}

NodalScalar SurfaceGrid::d_theta(const NodalScalar& f, Parity parity) const {
  const NodalScalar s = shift(f);
  const Eigen::MatrixXd fe = 0.5 * (f + s).matrix();
  const Eigen::MatrixXd fo = 0.5 * (f - s).matrix();
  if (parity == Parity::Even) return (even_ * fe + odd_ * fo).array();
  return (even_ * fo + odd_ * fe).array();
}

NodalScalar SurfaceGrid::d_phi(const NodalScalar& f) const {
  return (f.matrix() * f1_.transpose()).array();
}

NodalScalar SurfaceGrid::d_phiphi(const NodalScalar& f) const {
  return (f.matrix() * f2_.transpose()).array();
}

double SurfaceGrid::integrate_coordinate(const NodalScalar& f) const {
  return (2.0 * kPi / nphi_) * (weights_.transpose() * f.matrix()).sum();
}

Eigen::MatrixXd SurfaceGrid::kron(const Eigen::MatrixXd& phi_part,
                                  const Eigen::MatrixXd& theta_part) const {
  const int n = size();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < nphi_; ++j) {
    for (int jj = 0; jj < nphi_; ++jj) {
      const double b = phi_part(j, jj);
      if (b == 0.0) continue;
      out.block(j * ntheta_, jj * ntheta_, ntheta_, ntheta_) = b * theta_part;
    }
  }
  return out;
}

Eigen::MatrixXd SurfaceGrid::d_theta_matrix() const {
  return kron(pe_, even_) + kron(po_, odd_);
}

Eigen::MatrixXd SurfaceGrid::d_phi_matrix() const {
  return kron(f1_, Eigen::MatrixXd::Identity(ntheta_, ntheta_));
}

Eigen::MatrixXd SurfaceGrid::d_thetatheta_matrix() const {
  return kron(pe_, odd_ * even_) + kron(po_, even_ * odd_);
}

Eigen::MatrixXd SurfaceGrid::d_thetaphi_matrix() const {
  return kron(f1_ * pe_, even_) + kron(f1_ * po_, odd_);
}

Eigen::MatrixXd SurfaceGrid::d_phiphi_matrix() const {
  return kron(f2_, Eigen::MatrixXd::Identity(ntheta_, ntheta_));
}

Eigen::VectorXd SurfaceGrid::flatten(const NodalScalar& f) {
  return Eigen::Map<const Eigen::VectorXd>(f.data(), f.size());
}

NodalScalar SurfaceGrid::unflatten(const Eigen::VectorXd& v) const {
  return Eigen::Map<const Eigen::ArrayXXd>(v.data(), ntheta_, nphi_);
}

}  // namespace motskit
