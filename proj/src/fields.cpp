#include "motskit/fields.hpp"

#include <sstream>

#include "motskit/errors.hpp"

namespace motskit {

namespace {

std::string format_point(const Point& p) {
  std::ostringstream os;
  os << "(" << p(0) << ", " << p(1) << ", " << p(2) << ")";
  return os.str();
}

// d_e h^{ab} = -h^{ac} (d_e h_cd) h^{db}
Partials<Mat3> inverse_partials(const Mat3& hinv, const Partials<Mat3>& d) {
  Partials<Mat3> out;
  for (int e = 0; e < 3; ++e) out[e] = -hinv * d[e] * hinv;
  return out;
}

}  // namespace

bool Chart::contains(const Point& p) const {
  for (int c = 0; c < 3; ++c) {
    if (!std::isfinite(p(c)) || p(c) < lower(c) || p(c) > upper(c)) return false;
  }
  for (const auto& s : singular_points) {
    if ((p - s).norm() < exclusion_radius) return false;
  }
  return true;
}

void Chart::require(const Point& p) const {
  if (!contains(p)) throw OutsideChart("point " + format_point(p) + " is outside the chart domain");
}

Chart Chart::cartesian(std::vector<Point> punctures) {
  Chart chart;
  chart.singular_points = std::move(punctures);
  return chart;
}

Mat3 checked_inverse(const Mat3& h, const Tolerances& tol) {
  const double scale = h.cwiseAbs().maxCoeff();
  const double det = h.determinant();
  if (!std::isfinite(det) || scale == 0.0 || std::abs(det) <= tol.singular_metric * scale * scale * scale) {
    throw SingularMetric("metric is not invertible (det = " + std::to_string(det) + ")");
  }
  Eigen::LLT<Mat3> llt(0.5 * (h + h.transpose()));
  if (llt.info() != Eigen::Success) throw SingularMetric("metric is not positive definite");
  return h.inverse();
}

ChristoffelSymbols<double> christoffel(const TensorField& metric, const Point& p,
                                       const Tolerances& tol) {
  const Mat3 hinv = checked_inverse(metric(p), tol);
  return christoffel_from_partials<double>(hinv, metric.partials(p));
}

Curvature curvature(const TensorField& metric, const Point& p, const Tolerances& tol) {
  const Mat3 hinv = checked_inverse(metric(p), tol);
  const Partials<Mat3> d = metric.partials(p);
  const SecondPartials<Mat3> dd = metric.second_partials(p);
  const Partials<Mat3> dinv = inverse_partials(hinv, d);
  const ChristoffelSymbols<double> gamma = christoffel_from_partials<double>(hinv, d);

  // dgamma[e][a](b, c) = d_e Gamma^a_{bc}
  std::array<ChristoffelSymbols<double>, 3> dgamma;
  for (int e = 0; e < 3; ++e) {
    for (int a = 0; a < 3; ++a) {
      Mat3& out = dgamma[e][a];
      for (int b = 0; b < 3; ++b) {
        for (int c = 0; c < 3; ++c) {
          double sum = 0.0;
          for (int f = 0; f < 3; ++f) {
            const double s = d[b](f, c) + d[c](f, b) - d[f](b, c);
            const double ds = dd[b][e](f, c) + dd[c][e](f, b) - dd[f][e](b, c);
            sum += dinv[e](a, f) * s + hinv(a, f) * ds;
          }
          out(b, c) = 0.5 * sum;
        }
      }
    }
  }

  Curvature result;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      Mat3& r = result.riemann[a][b];
      for (int c = 0; c < 3; ++c) {
        for (int dIdx = 0; dIdx < 3; ++dIdx) {
          double v = dgamma[c][a](dIdx, b) - dgamma[dIdx][a](c, b);
          for (int e = 0; e < 3; ++e) {
            v += gamma[a](c, e) * gamma[e](dIdx, b) - gamma[a](dIdx, e) * gamma[e](c, b);
          }
          r(c, dIdx) = v;
        }
      }
    }
  }
  result.ricci.setZero();
  for (int b = 0; b < 3; ++b) {
    for (int dIdx = 0; dIdx < 3; ++dIdx) {
      for (int a = 0; a < 3; ++a) result.ricci(b, dIdx) += result.riemann[a][b](a, dIdx);
    }
  }
  result.scalar = contract_full<double>(hinv, result.ricci);
  return result;
}

double metric_compatibility_defect(const TensorField& metric, const Point& p,
                                   const Tolerances& tol) {
  const Mat3 h = metric(p);
  const Mat3 hinv = checked_inverse(h, tol);
  const Partials<Mat3> d = metric.partials(p);
  const ChristoffelSymbols<double> gamma = christoffel_from_partials<double>(hinv, d);
  double worst = 0.0;
  for (int c = 0; c < 3; ++c) {
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        double v = d[c](a, b);
        for (int e = 0; e < 3; ++e) v -= gamma[e](c, a) * h(e, b) + gamma[e](c, b) * h(a, e);
        worst = std::max(worst, std::abs(v));
      }
    }
  }
  return worst;
}

double lie_derivative(const ScalarField& f, const VectorField& x, const Point& p) {
  const Partials<double> df = f.partials(p);
  const Vec3 xv = x(p);
  return xv(0) * df[0] + xv(1) * df[1] + xv(2) * df[2];
}

Vec3 lie_derivative(const VectorField& v, const VectorField& x, const Point& p) {
  const Partials<Vec3> dv = v.partials(p);
  const Partials<Vec3> dx = x.partials(p);
  const Vec3 vv = v(p);
  const Vec3 xv = x(p);
  Vec3 out = Vec3::Zero();
  for (int c = 0; c < 3; ++c) out += xv(c) * dv[c] - vv(c) * dx[c];
  return out;
}

Mat3 lie_derivative(const TensorField& t, const VectorField& x, const Point& p) {
  const Partials<Mat3> dt = t.partials(p);
  const Partials<Vec3> dx = x.partials(p);
  const Mat3 tv = t(p);
  const Vec3 xv = x(p);
  // jac(c, a) = d_a x^c
  Mat3 jac;
  for (int a = 0; a < 3; ++a) jac.col(a) = dx[a];
  // x^c d_c T_ab + T_cb d_a x^c + T_ac d_b x^c
  Mat3 out = jac.transpose() * tv + tv * jac;
  for (int c = 0; c < 3; ++c) out += xv(c) * dt[c];
  return out;
}

Mat3 lie_derivative_covariant(const TensorField& t, const VectorField& x,
                              const TensorField& metric, const Point& p, const Tolerances& tol) {
  const ChristoffelSymbols<double> gamma = christoffel(metric, p, tol);
  const Partials<Mat3> dt = t.partials(p);
  const Partials<Vec3> dx = x.partials(p);
  const Mat3 tv = t(p);
  const Vec3 xv = x(p);

  // cov(c, a) = nabla_a x^c
  Mat3 cov;
  for (int a = 0; a < 3; ++a) cov.col(a) = dx[a] + gamma_times(gamma, a, xv);
  Mat3 out = Mat3::Zero();
  for (int c = 0; c < 3; ++c) {
    // nabla_c T_ab
    Mat3 nabla = dt[c];
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        for (int e = 0; e < 3; ++e) {
          nabla(a, b) -= gamma[e](c, a) * tv(e, b) + gamma[e](c, b) * tv(a, e);
        }
      }
    }
    out += xv(c) * nabla;
  }
  out += cov.transpose() * tv + tv * cov;
  return out;
}

Mat3 killing_form(const VectorField& x, const TensorField& metric, const Point& p,
                  const Tolerances& tol) {
  const Mat3 h = metric(p);
  const ChristoffelSymbols<double> gamma = christoffel(metric, p, tol);
  const Partials<Vec3> dx = x.partials(p);
  const Vec3 xv = x(p);
  Mat3 cov;  // cov(c, a) = nabla_a x^c
  for (int a = 0; a < 3; ++a) cov.col(a) = dx[a] + gamma_times(gamma, a, xv);
  const Mat3 lowered = h * cov;  // (b, a) = nabla_a x_b
  return lowered + lowered.transpose();
}

}  // namespace motskit
