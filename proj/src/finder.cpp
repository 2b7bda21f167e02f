#include "motskit/finder.hpp"

#include <cmath>
#include <sstream>

#include "motskit/errors.hpp"

namespace motskit {

namespace {

// Profile parameterisation: either every node, or one value per theta ring.
struct Unknowns {
  const SurfaceGrid* grid;
  bool rings;

  Eigen::VectorXd pack(const NodalScalar& p) const {
    if (rings) return p.col(0).matrix();
    return SurfaceGrid::flatten(p);
  }
  NodalScalar unpack(const Eigen::VectorXd& v) const {
    if (rings) return v.replicate(1, grid->nphi()).array();
    return grid->unflatten(v);
  }
  Eigen::VectorXd residual(const NodalScalar& theta_k) const {
    if (rings) return theta_k.col(0).matrix();
    return SurfaceGrid::flatten(theta_k);
  }
};

bool phi_independent(const NodalScalar& p) {
  const double scale = p.abs().maxCoeff();
  for (int i = 0; i < p.rows(); ++i) {
    if (p.row(i).maxCoeff() - p.row(i).minCoeff() > 1e-14 * scale) return false;
  }
  return true;
}

}  // namespace

void validate(const FinderConfig& cfg, const SurfaceGrid& grid) {
  if (!(cfg.tolerance > 0.0)) throw InvalidParameter("finder tolerance must be positive");
  if (cfg.max_iterations < 1) throw InvalidParameter("max_iterations must be at least 1");
  if (!(cfg.damping > 0.0 && cfg.damping <= 1.0)) {
    throw InvalidParameter("damping must lie in (0, 1]");
  }
  if (cfg.initial_profile.rows() != grid.ntheta() || cfg.initial_profile.cols() != grid.nphi()) {
    throw InvalidParameter("initial profile does not match the grid");
  }
  if (!cfg.initial_profile.allFinite() || cfg.initial_profile.minCoeff() <= 0.0) {
    throw InvalidParameter("initial profile must be positive");
  }
}

NodalScalar expansion_residual(const InitialDataPtr& data, const GridPtr& grid, const Point& center,
                               const NodalScalar& profile, const Tolerances& tol) {
  return EmbeddedSurface::from_profile(grid, data, center, profile, GeometryLevel::Expansion, tol)
      .geometry()
      .theta_k;
}

FinderResult find_mots(const InitialDataPtr& data, const GridPtr& grid, const FinderConfig& cfg,
                       const Tolerances& tol) {
  validate(cfg, *grid);
  const double max_radius =
      cfg.max_radius > 0.0 ? cfg.max_radius : 100.0 * cfg.initial_profile.mean();

  bool rings = false;
  if (cfg.allow_axisymmetric && grid->nphi() > 2 && phi_independent(cfg.initial_profile)) {
    const auto probe = EmbeddedSurface::from_profile(grid, data, cfg.center, cfg.initial_profile,
                                                     GeometryLevel::Expansion, tol);
    rings = is_symmetry(*data, rotation_generator(Vec3::UnitZ(), cfg.center), probe.nodes(),
                        tol.slice_symmetry)
                .is_symmetry;
  }
  const Unknowns u{grid.get(), rings};

  // nullopt when the trial profile is not admissible; `capped` records a trial
  // that was only rejected for exceeding max_radius.
  bool capped = false;
  auto evaluate = [&](const Eigen::VectorXd& v) -> std::optional<Eigen::VectorXd> {
    if (!v.allFinite() || v.minCoeff() <= 0.0) return std::nullopt;
    if (v.maxCoeff() > max_radius) {
      capped = true;
      return std::nullopt;
    }
    try {
      Eigen::VectorXd r = u.residual(expansion_residual(data, grid, cfg.center, u.unpack(v), tol));
      if (!r.allFinite()) return std::nullopt;
      return r;
    } catch (const OutsideChart&) {
      return std::nullopt;
    } catch (const DegenerateMetric&) {
      return std::nullopt;
    } catch (const SingularMetric&) {
      return std::nullopt;
    }
  };

  Eigen::VectorXd x = u.pack(cfg.initial_profile);
  auto r0 = evaluate(x);
  if (!r0) throw DivergingProfile("initial profile is not admissible");
  Eigen::VectorXd r = *r0;
  double res = r.cwiseAbs().maxCoeff();

  std::vector<FinderIterate> trace;
  int it = 0;
  while (res > cfg.tolerance) {
    if (it == cfg.max_iterations) {
      std::ostringstream os;
      os << "no MOTS after " << it << " iterations, max|theta_k| = " << res;
      throw NoConvergence(os.str());
    }
    ++it;

    const int n = static_cast<int>(x.size());
    Eigen::MatrixXd J(r.size(), n);
    for (int k = 0; k < n; ++k) {
      // central differences: forward-difference noise leaks into the
      // translation null modes and walks the surface off centre
      Eigen::VectorXd xp = x, xm = x;
      const double h = tol.finder_fd_step * std::max(1.0, std::abs(x(k)));
      xp(k) += h;
      xm(k) -= h;
      capped = false;
      auto rp = evaluate(xp);
      if (!rp && capped) {
        std::ostringstream os;
        os << "profile grew past max_radius = " << max_radius << " at iteration " << it
           << ", max|theta_k| = " << res;
        throw NoConvergence(os.str());
      }
      if (!rp) throw DivergingProfile("Jacobian probe left the chart");
      auto rm = evaluate(xm);
      J.col(k) = rm ? Eigen::VectorXd((*rp - *rm) / (2.0 * h)) : Eigen::VectorXd((*rp - r) / h);
    }
    // threshold must be set before compute()
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
    cod.setThreshold(tol.finder_rank_rel);
    cod.compute(J);
    const Eigen::VectorXd delta = -cod.solve(r);

    double t = cfg.damping;
    int halvings = 0;
    bool admissible_seen = false;
    capped = false;
    std::optional<Eigen::VectorXd> accepted;
    Eigen::VectorXd trial;
    for (;; ++halvings) {
      trial = x + t * delta;
      auto rt = evaluate(trial);
      if (rt) {
        admissible_seen = true;
        if (rt->cwiseAbs().maxCoeff() < res) {
          accepted = std::move(rt);
          break;
        }
      }
      if (halvings == tol.finder_max_halvings) break;
      t *= 0.5;
    }
    if (!accepted) {
      std::ostringstream os;
      os << "damped step failed after " << halvings << " halvings at iteration " << it
         << ", max|theta_k| = " << res;
      if (!admissible_seen && !capped) throw DivergingProfile(os.str());
      throw NoConvergence(os.str());
    }
    const double step = (trial - x).cwiseAbs().maxCoeff();
    x = trial;
    r = *accepted;
    res = r.cwiseAbs().maxCoeff();
    trace.push_back({it, res, step, halvings});
  }

  auto surface = EmbeddedSurface::from_profile(grid, data, cfg.center, u.unpack(x),
                                               GeometryLevel::Full, tol);
  // the ring path only checked the phi = 0 meridian
  res = surface.geometry().theta_k.abs().maxCoeff();
  return FinderResult{std::move(surface), it, res, rings, std::move(trace)};
}

}  // namespace motskit
