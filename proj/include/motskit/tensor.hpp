#pragma once

#include <array>

#include <Eigen/Dense>

namespace motskit {

template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;

using Vec3 = Vector3<double>;
using Mat3 = Matrix3<double>;
using Point = Vec3;

// Partial derivatives of a field value: d[c] = d/dx^c.
template <typename Value>
using Partials = std::array<Value, 3>;
// Second partials: dd[c][e] = d^2/dx^c dx^e (symmetric in c, e).
template <typename Value>
using SecondPartials = std::array<std::array<Value, 3>, 3>;

// Gamma^a_{bc} stored as gamma[a](b, c).
template <typename Scalar>
using ChristoffelSymbols = std::array<Matrix3<Scalar>, 3>;

// Riemann R^a_{bcd} stored as riemann[a][b](c, d).
template <typename Scalar>
using RiemannTensor = std::array<std::array<Matrix3<Scalar>, 3>, 3>;

// Gamma^a_{bc} from the inverse metric and first partials d[c](a, b) = d_c h_ab.
template <typename Scalar>
ChristoffelSymbols<Scalar> christoffel_from_partials(
    const Matrix3<Scalar>& inverse_metric, const Partials<Matrix3<Scalar>>& d) {
  ChristoffelSymbols<Scalar> gamma;
  for (int a = 0; a < 3; ++a) {
    gamma[a].setZero();
    for (int b = 0; b < 3; ++b) {
      for (int c = b; c < 3; ++c) {
        Scalar sum(0);
        for (int e = 0; e < 3; ++e) {
          sum += inverse_metric(a, e) * (d[b](e, c) + d[c](e, b) - d[e](b, c));
        }
        gamma[a](b, c) = Scalar(0.5) * sum;
        gamma[a](c, b) = gamma[a](b, c);
      }
    }
  }
  return gamma;
}

// Gamma^a_{bc} u^b v^c
template <typename Scalar>
Vector3<Scalar> contract(const ChristoffelSymbols<Scalar>& gamma, const Vector3<Scalar>& u,
                         const Vector3<Scalar>& v) {
  Vector3<Scalar> out;
  for (int a = 0; a < 3; ++a) out(a) = u.dot(gamma[a] * v);
  return out;
}

// Gamma^c_{ad} v^d as a vector over c, for fixed a.
template <typename Scalar>
Vector3<Scalar> gamma_times(const ChristoffelSymbols<Scalar>& gamma, int a,
                            const Vector3<Scalar>& v) {
  Vector3<Scalar> out;
  for (int c = 0; c < 3; ++c) out(c) = gamma[c].row(a).dot(v);
  return out;
}

// Levi-Civita symbol contraction eps_{abc} u^b v^c (coordinate cross product).
template <typename Scalar>
Vector3<Scalar> cross_covector(const Vector3<Scalar>& u, const Vector3<Scalar>& v) {
  return u.cross(v);
}

template <typename Scalar>
Scalar contract_full(const Matrix3<Scalar>& upper, const Matrix3<Scalar>& lower) {
  return (upper.array() * lower.array()).sum();
}

}  // namespace motskit
