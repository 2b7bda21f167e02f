#pragma once

#include <array>
#include <memory>

#include <Eigen/Dense>

namespace motskit {

// Nodal scalar on the (theta, phi) grid: rows are theta nodes, columns phi.
using NodalScalar = Eigen::ArrayXXd;
// Cartesian components of a nodal vector (or covector) field.
using NodalVector = std::array<NodalScalar, 3>;

// Behaviour under (theta, phi) -> (-theta, phi + pi). Scalars and Cartesian
// components are Even; theta-components and sin(theta) are Odd.
enum class Parity { Even, Odd };

inline Parity operator*(Parity a, Parity b) { return a == b ? Parity::Even : Parity::Odd; }

class SurfaceGrid {
 public:
  // ntheta >= 2 Gauss-Legendre nodes in cos(theta), nphi even equispaced nodes.
  SurfaceGrid(int ntheta, int nphi);

  int ntheta() const { return ntheta_; }
  int nphi() const { return nphi_; }
  int size() const { return ntheta_ * nphi_; }
  // Flat index used by the dense operators (column-major).
  int index(int i, int j) const { return i + ntheta_ * j; }

  const Eigen::VectorXd& mu() const { return mu_; }
  const Eigen::VectorXd& theta() const { return theta_; }
  const Eigen::VectorXd& sin_theta() const { return sin_; }
  const Eigen::VectorXd& cos_theta() const { return cos_; }
  const Eigen::VectorXd& gl_weights() const { return weights_; }
  const Eigen::VectorXd& phi() const { return phi_; }

  NodalScalar theta_nodes() const;
  NodalScalar phi_nodes() const;
  NodalScalar zeros() const { return NodalScalar::Zero(ntheta_, nphi_); }
  NodalScalar constant(double v) const { return NodalScalar::Constant(ntheta_, nphi_, v); }

  // Nodal differentiation. Exact for band-limited inputs of the declared parity.
  NodalScalar d_theta(const NodalScalar& f, Parity parity) const;
  NodalScalar d_phi(const NodalScalar& f) const;
  NodalScalar d_phiphi(const NodalScalar& f) const;
  // phi -> phi + pi
  NodalScalar shift(const NodalScalar& f) const;

  // sum_ij w_i (2 pi / nphi) f_ij  ==  int f sin(theta) dtheta dphi
  double integrate_coordinate(const NodalScalar& f) const;

  // Dense N x N forms acting on flattened Even nodal scalars.
  Eigen::MatrixXd d_theta_matrix() const;
  Eigen::MatrixXd d_phi_matrix() const;
  Eigen::MatrixXd d_thetatheta_matrix() const;
  Eigen::MatrixXd d_thetaphi_matrix() const;
  Eigen::MatrixXd d_phiphi_matrix() const;

  // Small building blocks, exposed for tests.
  const Eigen::MatrixXd& d_mu() const { return dmu_; }
  const Eigen::MatrixXd& even_block() const { return even_; }
  const Eigen::MatrixXd& odd_block() const { return odd_; }
  const Eigen::MatrixXd& fourier_first() const { return f1_; }
  const Eigen::MatrixXd& fourier_second() const { return f2_; }

  static Eigen::VectorXd flatten(const NodalScalar& f);
  NodalScalar unflatten(const Eigen::VectorXd& v) const;

 private:
  Eigen::MatrixXd kron(const Eigen::MatrixXd& phi_part, const Eigen::MatrixXd& theta_part) const;

  int ntheta_;
  int nphi_;
  Eigen::VectorXd mu_, theta_, sin_, cos_, weights_, phi_;
  Eigen::MatrixXd dmu_, even_, odd_, f1_, f2_, pe_, po_;
};

using GridPtr = std::shared_ptr<const SurfaceGrid>;

// Gauss-Legendre nodes (descending) and weights on (-1, 1).
void gauss_legendre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights);

// Real spherical harmonic basis value (orthonormal on the unit sphere),
// m > 0 -> cos(m phi), m < 0 -> sin(|m| phi).
double real_spherical_harmonic(int l, int m, double theta, double phi);

}  // namespace motskit
