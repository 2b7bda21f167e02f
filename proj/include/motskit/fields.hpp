#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <type_traits>
#include <vector>

#include "motskit/config.hpp"
#include "motskit/tensor.hpp"

namespace motskit {

// A coordinate chart on the slice: three labelled coordinates, a box domain
// and isolated singular points (punctures) that evaluation must stay away from.
struct Chart {
  std::array<std::string, 3> coordinate_names{"x", "y", "z"};
  Vec3 lower = Vec3::Constant(-std::numeric_limits<double>::infinity());
  Vec3 upper = Vec3::Constant(std::numeric_limits<double>::infinity());
  std::vector<Point> singular_points;
  double exclusion_radius = default_tolerances().singular_exclusion;

  bool contains(const Point& p) const;
  // Throws OutsideChart.
  void require(const Point& p) const;

  static Chart cartesian(std::vector<Point> punctures = {});
};

namespace detail {
template <typename Value>
Value zero_like(const Value& v) {
  if constexpr (std::is_arithmetic_v<Value>) {
    return Value(0);
  } else {
    return Value::Zero(v.rows(), v.cols());
  }
}
inline double max_abs(double v) { return std::abs(v); }
template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& v) {
  return v.cwiseAbs().maxCoeff();
}
}  // namespace detail

struct FiniteDifferenceOptions {
  double step_min = default_tolerances().fd_step_min;
  double step_rel = default_tolerances().fd_step_rel;
  bool richardson = false;

  double step(double coordinate) const {
    return std::max(step_min, step_rel * std::abs(coordinate));
  }
};

// An evaluable field over the chart. Value is double (scalar), Vec3 (vector,
// contravariant components) or Mat3 (rank-2 covariant tensor). Partials come
// from analytic closures when provided, otherwise from 4th-order centered
// finite differences.
template <typename Value>
class Field {
 public:
  using Evaluator = std::function<Value(const Point&)>;
  using FirstEvaluator = std::function<Partials<Value>(const Point&)>;
  using SecondEvaluator = std::function<SecondPartials<Value>(const Point&)>;

  Field() = default;
  explicit Field(Evaluator value, FirstEvaluator first = {}, SecondEvaluator second = {},
                 bool symmetric = false, FiniteDifferenceOptions fd = {})
      : value_(std::move(value)),
        first_(std::move(first)),
        second_(std::move(second)),
        symmetric_(symmetric),
        fd_(fd) {}

  bool valid() const { return static_cast<bool>(value_); }
  bool symmetric() const { return symmetric_; }
  bool has_analytic_partials() const { return static_cast<bool>(first_); }
  bool has_analytic_second_partials() const { return static_cast<bool>(second_); }
  const FiniteDifferenceOptions& fd_options() const { return fd_; }

  Value operator()(const Point& p) const { return value_(p); }

  Partials<Value> partials(const Point& p) const {
    return first_ ? first_(p) : fd_partials(p, fd_.richardson);
  }

  SecondPartials<Value> second_partials(const Point& p) const {
    return second_ ? second_(p) : fd_second_partials(p, fd_.richardson);
  }

  Partials<Value> fd_partials(const Point& p, bool richardson) const {
    Partials<Value> out;
    for (int c = 0; c < 3; ++c) {
      const double h = fd_.step(p(c));
      out[c] = richardson ? richardson_first(value_, p, c, h) : centered_first(value_, p, c, h);
    }
    return out;
  }

  SecondPartials<Value> fd_second_partials(const Point& p, bool richardson) const {
    SecondPartials<Value> out;
    if (first_) {
      // Differentiate the analytic first partials once.
      for (int e = 0; e < 3; ++e) {
        const double h = fd_.step(p(e));
        for (int c = 0; c < 3; ++c) {
          auto component = [this, c](const Point& q) { return first_(q)[c]; };
          out[c][e] = richardson ? richardson_first(component, p, e, h)
                                 : centered_first(component, p, e, h);
        }
      }
      for (int c = 0; c < 3; ++c) {
        for (int e = c + 1; e < 3; ++e) {
          out[c][e] = 0.5 * (out[c][e] + out[e][c]);
          out[e][c] = out[c][e];
        }
      }
      return out;
    }
    for (int c = 0; c < 3; ++c) {
      const double hc = fd_.step(p(c));
      for (int e = c; e < 3; ++e) {
        const double he = fd_.step(p(e));
        auto estimate = [&](double sc, double se) {
          return c == e ? centered_second(p, c, hc * sc) : centered_mixed(p, c, e, hc * sc, he * se);
        };
        Value d = estimate(1.0, 1.0);
        if (richardson) d = (16.0 * estimate(0.5, 0.5) - d) / 15.0;
        out[c][e] = d;
        out[e][c] = d;
      }
    }
    return out;
  }

  // Relative defect of the declared index symmetry at p (0 for non-tensors).
  double symmetry_defect(const Point& p) const {
    if constexpr (std::is_same_v<Value, Mat3>) {
      if (!symmetric_) return 0.0;
      const Mat3 v = value_(p);
      const double scale = std::max(1.0, v.cwiseAbs().maxCoeff());
      return (v - v.transpose()).cwiseAbs().maxCoeff() / scale;
    } else {
      (void)p;
      return 0.0;
    }
  }

 private:
  static constexpr std::array<double, 4> kFirstWeights{1.0 / 12.0, -8.0 / 12.0, 8.0 / 12.0,
                                                       -1.0 / 12.0};
  static constexpr std::array<int, 4> kFirstOffsets{-2, -1, 1, 2};

  template <typename F>
  static Value centered_first(const F& f, const Point& p, int c, double h) {
    Point q = p;
    q(c) = p(c) + kFirstOffsets[0] * h;
    Value sum = kFirstWeights[0] * f(q);
    for (int k = 1; k < 4; ++k) {
      q(c) = p(c) + kFirstOffsets[k] * h;
      sum += kFirstWeights[k] * f(q);
    }
    return sum / h;
  }

  template <typename F>
  static Value richardson_first(const F& f, const Point& p, int c, double h) {
    const Value coarse = centered_first(f, p, c, h);
    const Value fine = centered_first(f, p, c, 0.5 * h);
    return (16.0 * fine - coarse) / 15.0;
  }

  Value centered_second(const Point& p, int c, double h) const {
    static constexpr std::array<double, 5> w{-1.0, 16.0, -30.0, 16.0, -1.0};
    Point q = p;
    Value sum = detail::zero_like(value_(p));
    for (int k = 0; k < 5; ++k) {
      q(c) = p(c) + (k - 2) * h;
      sum += w[k] * value_(q);
    }
    return sum / (12.0 * h * h);
  }

  Value centered_mixed(const Point& p, int c, int e, double hc, double he) const {
    Point q = p;
    Value sum = detail::zero_like(value_(p));
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        q = p;
        q(c) += kFirstOffsets[i] * hc;
        q(e) += kFirstOffsets[j] * he;
        sum += (kFirstWeights[i] * kFirstWeights[j]) * value_(q);
      }
    }
    return sum / (hc * he);
  }

  Evaluator value_;
  FirstEvaluator first_;
  SecondEvaluator second_;
  bool symmetric_ = false;
  FiniteDifferenceOptions fd_;
};

using ScalarField = Field<double>;
using VectorField = Field<Vec3>;
using TensorField = Field<Mat3>;

// Inverse of a metric value; throws SingularMetric when h is not invertible
// or not positive definite.
Mat3 checked_inverse(const Mat3& h, const Tolerances& tol = default_tolerances());

ChristoffelSymbols<double> christoffel(const TensorField& metric, const Point& p,
                                       const Tolerances& tol = default_tolerances());

struct Curvature {
  RiemannTensor<double> riemann;  // R^a_{bcd}
  Mat3 ricci;
  double scalar = 0.0;
};

Curvature curvature(const TensorField& metric, const Point& p,
                    const Tolerances& tol = default_tolerances());

// Max-norm of nabla_c h_ab built from the field's own partials and Christoffels.
double metric_compatibility_defect(const TensorField& metric, const Point& p,
                                   const Tolerances& tol = default_tolerances());

// Lie derivatives from partials: x^c d_c T + (transport terms).
double lie_derivative(const ScalarField& f, const VectorField& x, const Point& p);
Vec3 lie_derivative(const VectorField& v, const VectorField& x, const Point& p);
Mat3 lie_derivative(const TensorField& t, const VectorField& x, const Point& p);

// Same quantity for a covariant rank-2 tensor using covariant derivatives of
// `metric`; connection terms cancel so this must agree with the partials path.
Mat3 lie_derivative_covariant(const TensorField& t, const VectorField& x,
                              const TensorField& metric, const Point& p,
                              const Tolerances& tol = default_tolerances());

// nabla_a x_b + nabla_b x_a
Mat3 killing_form(const VectorField& x, const TensorField& metric, const Point& p,
                  const Tolerances& tol = default_tolerances());

}  // namespace motskit
