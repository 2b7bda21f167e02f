#include "motskit/initial_data.hpp"

#include <random>
#include <sstream>

#include "motskit/errors.hpp"

namespace motskit {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream os;
    os << what << " must be positive, got " << v;
    throw InvalidParameter(os.str());
  }
}

TensorField constant_tensor(const Mat3& value) {
  return TensorField([value](const Point&) { return value; },
                     [](const Point&) {
                       Partials<Mat3> d;
                       d.fill(Mat3::Zero());
                       return d;
                     },
                     [](const Point&) {
                       SecondPartials<Mat3> dd;
                       for (auto& row : dd) row.fill(Mat3::Zero());
                       return dd;
                     },
                     true);
}

struct ConformalFactor {
  double psi = 1.0;
  Vec3 d = Vec3::Zero();
  Mat3 dd = Mat3::Zero();
};

ConformalFactor conformal_factor(const std::vector<std::pair<double, Point>>& punctures,
                                 const Point& p) {
  ConformalFactor c;
  for (const auto& [m, center] : punctures) {
    const Vec3 x = p - center;
    const double r = x.norm();
    const double r3 = r * r * r;
    c.psi += 0.5 * m / r;
    c.d += -0.5 * m / r3 * x;
    c.dd += -0.5 * m * (Mat3::Identity() / r3 - 3.0 * x * x.transpose() / (r3 * r * r));
  }
  return c;
}

struct Cylinder {
  double R0;
  Mat3 value(const Point& p) const {
    const double r2 = p.squaredNorm();
    const double f = R0 * R0 / r2;
    const double g = (1.0 - f) / r2;
    return f * Mat3::Identity() + g * p * p.transpose();
  }
  Partials<Mat3> partials(const Point& p) const {
    const double r2 = p.squaredNorm();
    const double r4 = r2 * r2;
    const double R2 = R0 * R0;
    const double g = 1.0 / r2 - R2 / r4;
    Partials<Mat3> out;
    for (int c = 0; c < 3; ++c) {
      const double fc = -2.0 * R2 * p(c) / r4;
      const double gc = -2.0 * p(c) / r4 + 4.0 * R2 * p(c) / (r4 * r2);
      Vec3 ec = Vec3::Unit(c);
      out[c] = fc * Mat3::Identity() + gc * p * p.transpose() +
               g * (ec * p.transpose() + p * ec.transpose());
    }
    return out;
  }
};

InitialDataSet make_base(const std::string& name) {
  InitialDataSet id;
  id.name = name;
  return id;
}

}  // namespace

std::string catalog_name(const CatalogEntry& entry) {
  struct {
    std::string operator()(const SchwarzschildIsotropic&) const { return "SchwarzschildIsotropic"; }
    std::string operator()(const DeSitterFlat&) const { return "DeSitterFlat"; }
    std::string operator()(const FlatSlice&) const { return "FlatSlice"; }
    std::string operator()(const BrillLindquist&) const { return "BrillLindquist"; }
    std::string operator()(const ProductCylinder&) const { return "ProductCylinder"; }
  } visitor;
  return std::visit(visitor, entry);
}

TensorField conformally_flat_metric(std::vector<std::pair<double, Point>> punctures) {
  auto value = [punctures](const Point& p) {
    const double psi = conformal_factor(punctures, p).psi;
    return Mat3(std::pow(psi, 4) * Mat3::Identity());
  };
  auto first = [punctures](const Point& p) {
    const ConformalFactor c = conformal_factor(punctures, p);
    Partials<Mat3> d;
    for (int k = 0; k < 3; ++k) d[k] = 4.0 * std::pow(c.psi, 3) * c.d(k) * Mat3::Identity();
    return d;
  };
  auto second = [punctures](const Point& p) {
    const ConformalFactor c = conformal_factor(punctures, p);
    SecondPartials<Mat3> dd;
    for (int k = 0; k < 3; ++k) {
      for (int e = 0; e < 3; ++e) {
        const double s = 12.0 * c.psi * c.psi * c.d(k) * c.d(e) + 4.0 * std::pow(c.psi, 3) * c.dd(k, e);
        dd[k][e] = s * Mat3::Identity();
      }
    }
    return dd;
  };
  return TensorField(value, first, second, true);
}

InitialDataPtr catalog_build(const CatalogEntry& entry) {
  auto id = std::make_shared<InitialDataSet>(make_base(catalog_name(entry)));

  if (const auto* e = std::get_if<SchwarzschildIsotropic>(&entry)) {
    require_positive(e->M, "M");
    id->parameters["M"] = e->M;
    id->chart = Chart::cartesian({Point::Zero()});
    id->h = conformally_flat_metric({{e->M, Point::Zero()}});
    id->K = constant_tensor(Mat3::Zero());
    id->acceleration_data = id->K;
    id->vacuum = true;
  } else if (const auto* e = std::get_if<DeSitterFlat>(&entry)) {
    require_positive(e->H, "H");
    require_positive(e->a0, "a0");
    const double s = e->sign == Expansion::Contracting ? -1.0 : 1.0;
    id->parameters["H"] = e->H;
    id->parameters["a0"] = e->a0;
    id->parameters["expanding"] = e->sign == Expansion::Expanding ? 1.0 : 0.0;
    id->chart = Chart::cartesian();
    const Mat3 h = e->a0 * e->a0 * Mat3::Identity();
    id->h = constant_tensor(h);
    id->K = constant_tensor(s * e->H * h);
    // u = d_t is geodesic, so n^a nabla_a u_b = n^a K_ab
    id->acceleration_data = id->K;
  } else if (std::holds_alternative<FlatSlice>(entry)) {
    id->chart = Chart::cartesian();
    id->h = constant_tensor(Mat3::Identity());
    id->K = constant_tensor(Mat3::Zero());
    id->acceleration_data = id->K;
    id->vacuum = true;
    id->genuine_surface = true;
  } else if (const auto* e = std::get_if<BrillLindquist>(&entry)) {
    require_positive(e->m1, "m1");
    require_positive(e->m2, "m2");
    require_positive(e->d, "d");
    id->parameters["m1"] = e->m1;
    id->parameters["m2"] = e->m2;
    id->parameters["d"] = e->d;
    const Point c1(0.0, 0.0, 0.5 * e->d);
    const Point c2(0.0, 0.0, -0.5 * e->d);
    id->chart = Chart::cartesian({c1, c2});
    id->h = conformally_flat_metric({{e->m1, c1}, {e->m2, c2}});
    id->K = constant_tensor(Mat3::Zero());
    id->vacuum = true;
  } else if (const auto* e = std::get_if<ProductCylinder>(&entry)) {
    require_positive(e->R0, "R0");
    id->parameters["R0"] = e->R0;
    id->chart = Chart::cartesian({Point::Zero()});
    const Cylinder cyl{e->R0};
    id->h = TensorField([cyl](const Point& p) { return cyl.value(p); },
                        [cyl](const Point& p) { return cyl.partials(p); }, {}, true);
    id->K = constant_tensor(Mat3::Zero());
    id->acceleration_data = id->K;
    // static product spacetime with unit lapse
    id->genuine_surface = true;
  }
  return id;
}

double constraint_energy(const InitialDataSet& id, const Point& p, const Tolerances& tol) {
  id.chart.require(p);
  const Mat3 hinv = checked_inverse(id.h(p), tol);
  const Mat3 K = id.K(p);
  const double trK = contract_full<double>(hinv, K);
  const Mat3 Kup = hinv * K * hinv;
  const double R = curvature(id.h, p, tol).scalar;
  return 0.5 * (R + trK * trK - contract_full<double>(Kup, K));
}

Vec3 constraint_momentum(const InitialDataSet& id, const Point& p, const Tolerances& tol) {
  id.chart.require(p);
  const Mat3 hinv = checked_inverse(id.h(p), tol);
  const Partials<Mat3> dh = id.h.partials(p);
  const ChristoffelSymbols<double> gamma = christoffel_from_partials<double>(hinv, dh);
  const Mat3 K = id.K(p);
  const Partials<Mat3> dK = id.K.partials(p);
  Vec3 j = Vec3::Zero();
  for (int c = 0; c < 3; ++c) {
    double div = 0.0;
    double dtr = 0.0;
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        double nabla = dK[a](b, c);
        for (int e = 0; e < 3; ++e) nabla -= gamma[e](a, b) * K(e, c) + gamma[e](a, c) * K(b, e);
        div += hinv(a, b) * nabla;
        const double dhinv = -(hinv * dh[c] * hinv)(a, b);
        dtr += dhinv * K(a, b) + hinv(a, b) * dK[c](a, b);
      }
    }
    j(c) = div - dtr;
  }
  return j;
}

SymmetryTest is_symmetry(const InitialDataSet& id, const VectorField& x,
                         const std::vector<Point>& sample, double tol) {
  SymmetryTest out;
  for (const Point& p : sample) {
    out.residual_h = std::max(out.residual_h, lie_derivative(id.h, x, p).cwiseAbs().maxCoeff());
    out.residual_K = std::max(out.residual_K, lie_derivative(id.K, x, p).cwiseAbs().maxCoeff());
  }
  out.is_symmetry = !sample.empty() && out.residual_h <= tol && out.residual_K <= tol;
  return out;
}

double umbilicity_defect(const InitialDataSet& id, const std::vector<Point>& sample,
                         const Tolerances& tol) {
  double worst = 0.0;
  for (const Point& p : sample) {
    const Mat3 h = id.h(p);
    const Mat3 K = id.K(p);
    const double f = contract_full<double>(checked_inverse(h, tol), K) / 3.0;
    worst = std::max(worst, (K - f * h).cwiseAbs().maxCoeff());
  }
  return worst;
}

double einstein_defect(const InitialDataSet& id, const std::vector<Point>& sample,
                       const Tolerances& tol) {
  double worst = 0.0;
  for (const Point& p : sample) {
    const Curvature c = curvature(id.h, p, tol);
    worst = std::max(worst, (c.ricci - c.scalar / 3.0 * id.h(p)).cwiseAbs().maxCoeff());
  }
  return worst;
}

VectorField translation_generator(const Vec3& axis) {
  return VectorField([axis](const Point&) { return axis; },
                     [](const Point&) {
                       Partials<Vec3> d;
                       d.fill(Vec3::Zero());
                       return d;
                     });
}

VectorField rotation_generator(const Vec3& axis, const Point& center) {
  const Vec3 a = axis.normalized();
  return VectorField([a, center](const Point& p) { return Vec3(a.cross(p - center)); },
                     [a](const Point&) {
                       Partials<Vec3> d;
                       for (int c = 0; c < 3; ++c) d[c] = a.cross(Vec3::Unit(c));
                       return d;
                     });
}

VectorField affine_generator(const Vec3& b, const Mat3& A, const Point& center) {
  return VectorField([b, A, center](const Point& p) { return Vec3(b + A * (p - center)); },
                     [A](const Point&) {
                       Partials<Vec3> d;
                       for (int c = 0; c < 3; ++c) d[c] = A.col(c);
                       return d;
                     });
}

VectorField radial_unit_generator(const TensorField& metric, const Point& center) {
  return VectorField([metric, center](const Point& p) {
    const Vec3 r = (p - center).normalized();
    return Vec3(r / std::sqrt(r.dot(metric(p) * r)));
  });
}

std::vector<Point> sample_shell(std::size_t count, double rmin, double rmax, const Point& center,
                                unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> radius(rmin, rmax);
  std::vector<Point> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Vec3 v(gauss(rng), gauss(rng), gauss(rng));
    out.push_back(center + radius(rng) * v.normalized());
  }
  return out;
}

}  // namespace motskit
