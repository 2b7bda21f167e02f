#include "motskit/report.hpp"

#include <cstdio>
#include <sstream>

#include "motskit/errors.hpp"

namespace motskit {

namespace {

// Every Tolerances member, by name.
template <typename F>
void for_each_tolerance(Tolerances& t, F&& f) {
  f("fd_step_min", t.fd_step_min);
  f("fd_step_rel", t.fd_step_rel);
  f("singular_exclusion", t.singular_exclusion);
  f("index_symmetry", t.index_symmetry);
  f("singular_metric", t.singular_metric);
  f("slice_symmetry", t.slice_symmetry);
  f("einstein", t.einstein);
  f("minimal_point_rel", t.minimal_point_rel);
  f("degenerate_metric", t.degenerate_metric);
  f("mots_residual", t.mots_residual);
  f("deformation_eps", t.deformation_eps);
  f("normal_variation_eps", t.normal_variation_eps);
  f("marginal_rel", t.marginal_rel);
  f("kernel", t.kernel);
  f("eigen_cluster", t.eigen_cluster);
  f("dense_limit", t.dense_limit);
  f("tangency_rel", t.tangency_rel);
  f("nowhere_vanishing_rel", t.nowhere_vanishing_rel);
  f("vanishing_rel", t.vanishing_rel);
  f("identically_zero", t.identically_zero);
  f("extremal_rel", t.extremal_rel);
  f("identity", t.identity);
  f("projected_identity", t.projected_identity);
  f("integral_identity", t.integral_identity);
  f("cmc_rel", t.cmc_rel);
  f("gauss", t.gauss);
  f("flow_step", t.flow_step);
  f("finder_tolerance", t.finder_tolerance);
  f("finder_fd_step", t.finder_fd_step);
  f("finder_rank_rel", t.finder_rank_rel);
  f("finder_max_halvings", t.finder_max_halvings);
}

Json maybe_bool(const std::optional<bool>& b) { return b ? Json(*b) : Json(nullptr); }

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Json to_json(const Tolerances& tol) {
  Json j = Json::object();
  Tolerances t = tol;
  for_each_tolerance(t, [&](const char* name, auto& v) { j[name] = v; });
  return j;
}

Tolerances tolerances_from_json(const Json& j, Tolerances base) {
  if (!j.is_object()) throw ConfigError("tolerances must be an object");
  std::size_t used = 0;
  for_each_tolerance(base, [&](const char* name, auto& v) {
    if (!j.contains(name)) return;
    const Json& x = j.at(name);
    if (!x.is_number()) throw ConfigError(std::string("tolerance ") + name + " must be a number");
    using T = std::decay_t<decltype(v)>;
    if constexpr (std::is_floating_point_v<T>) {
      v = x.get<double>();
      if (!(v >= 0.0)) throw ConfigError(std::string("tolerance ") + name + " must be >= 0");
    } else {
      if (!x.is_number_integer() || x.get<long long>() < 0) {
        throw ConfigError(std::string("tolerance ") + name + " must be a non-negative integer");
      }
      v = x.get<T>();
    }
    ++used;
  });
  if (used != j.size()) {
    const Json known = to_json(base);
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!known.contains(it.key())) throw ConfigError("unknown tolerance " + it.key());
    }
  }
  return base;
}

Json to_json(const Hypothesis& h) {
  return {{"name", h.name}, {"met", h.met}, {"residual", h.residual}, {"detail", h.detail}};
}

Json to_json(const VerificationReport& r) {
  Json hyps = Json::array();
  for (const auto& h : r.hypotheses) hyps.push_back(to_json(h));
  Json sets = Json::object();
  for (const auto& [k, v] : r.node_sets) sets[k] = v;
  return {{"id", r.id},
          {"hypotheses_met", r.hypotheses_met},
          {"hypotheses", hyps},
          {"conclusion_verified", maybe_bool(r.conclusion_verified)},
          {"evidence", r.evidence},
          {"node_sets", sets},
          {"notes", r.notes}};
}

VerificationReport report_from_json(const Json& j) {
  VerificationReport r;
  r.id = j.at("id").get<std::string>();
  for (const auto& h : j.at("hypotheses")) {
    r.hypotheses.push_back({h.at("name").get<std::string>(), h.at("met").get<bool>(),
                            h.at("residual").get<double>(), h.at("detail").get<std::string>()});
  }
  r.hypotheses_met = j.at("hypotheses_met").get<bool>();
  if (!j.at("conclusion_verified").is_null()) {
    r.conclusion_verified = j.at("conclusion_verified").get<bool>();
  }
  r.evidence = j.at("evidence").get<std::map<std::string, double>>();
  r.node_sets = j.at("node_sets").get<std::map<std::string, std::vector<int>>>();
  r.notes = j.at("notes").get<std::vector<std::string>>();
  return r;
}

Json to_json(const ZeroScan& z) {
  return {{"min_abs", z.min_abs},
          {"max_abs", z.max_abs},
          {"identically_zero", z.identically_zero},
          {"sign_change", z.sign_change},
          {"near_zero_count", z.near_zero.size()},
          {"vanishes_somewhere", to_string(z.vanishes_somewhere)},
          {"nowhere_vanishing", to_string(z.nowhere_vanishing)}};
}

Json summary_json(const SymmetryDecomposition& d) {
  return {{"slice_symmetry",
           {{"is_symmetry", d.slice_symmetry.is_symmetry},
            {"residual_h", d.slice_symmetry.residual_h},
            {"residual_K", d.slice_symmetry.residual_K}}},
          {"reconstruction_residual", d.reconstruction_residual},
          {"normal_residual", d.normal_residual},
          {"alpha", to_json(d.alpha_scan)},
          {"alpha_identically_zero", d.alpha_identically_zero},
          {"tangency_set_size", d.tangency_set.size()},
          {"zero_set_empty", d.zero_set_empty},
          {"div_tau_min", d.div_tau.minCoeff()},
          {"div_tau_max", d.div_tau.maxCoeff()},
          {"max_norm_x", d.x_norm.maxCoeff()}};
}

Json to_json(const IntegralIdentity& i) {
  return {{"value", i.value},
          {"holds", i.holds},
          {"precondition", i.precondition},
          {"projected_residual", i.projected_residual},
          {"z2_sign_definite", i.z2_sign_definite},
          {"alpha_both_signs", i.alpha_both_signs}};
}

Json summary_json(const LieExpansionIdentity& l) {
  return {{"applicable", l.applicable},
          {"residual", l.residual},
          {"max_abs_lhs", l.lhs.abs().maxCoeff()},
          {"max_abs_rhs", l.rhs.abs().maxCoeff()},
          {"ext2_holds_count", l.ext2_holds.size()},
          {"ext2_fails_count", l.ext2_fails.size()}};
}

Json summary_json(const GenuineSurfaceChecks& g) {
  return {{"gate_met", g.gate_met},
          {"genuine", g.genuine},
          {"verified", maybe_bool(g.verified)},
          {"max_abs_alpha_prime", g.alpha_prime.abs().maxCoeff()},
          {"max_abs_alphaZ2_prime", g.alphaZ2_prime.abs().maxCoeff()},
          {"max_abs_Z2_prime", g.Z2_prime.abs().maxCoeff()},
          {"alpha_prime_vs_tau_n_prime", (g.alpha_prime - g.tau_n_prime).abs().maxCoeff()},
          {"notes", g.notes}};
}

Json summary_json(const SpectrumResult& s, int lowest) {
  Json low = Json::array();
  for (int i = 0; i < std::min<int>(lowest, s.eigenvalues().size()); ++i) {
    low.push_back({s.eigenvalues()(i).real(), s.eigenvalues()(i).imag()});
  }
  const double tol = s.marginal_tolerance();
  return {{"lambda0", s.lambda0()},
          {"lambda0_imag", s.principal().imag()},
          {"principal_is_real", s.principal_is_real()},
          {"classification", to_string(classify(s.lambda0(), tol))},
          {"operator_norm", s.operator_norm()},
          {"marginal_tolerance", tol},
          {"shift", s.op().shift},
          {"count", s.eigenvalues().size()},
          {"lowest", low}};
}

Json nodal_json(const NodalScalar& f) {
  Json rows = Json::array();
  for (int i = 0; i < f.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < f.cols(); ++j) row.push_back(f(i, j));
    rows.push_back(row);
  }
  return rows;
}

Json surface_json(const EmbeddedSurface& s) {
  const SurfaceGrid& g = s.grid();
  Json nodes = Json::array();
  for (int j = 0; j < g.nphi(); ++j) {
    for (int i = 0; i < g.ntheta(); ++i) {
      const Point p = s.node(i, j);
      nodes.push_back({p(0), p(1), p(2)});
    }
  }
  Json out = {{"grid", {{"ntheta", g.ntheta()}, {"nphi", g.nphi()}}},
              {"theta", std::vector<double>(g.theta().data(), g.theta().data() + g.ntheta())},
              {"phi", std::vector<double>(g.phi().data(), g.phi().data() + g.nphi())},
              {"center", {s.center()(0), s.center()(1), s.center()(2)}},
              {"nodes", nodes},
              {"node_order", "theta fastest"},
              {"theta_k", nodal_json(s.geometry().theta_k)}};
  if (s.profile()) out["profile"] = nodal_json(*s.profile());
  return out;
}

Json eigenfunction_json(const Eigenpair& e, const SurfaceGrid& grid) {
  const Eigen::VectorXd re = e.vector.real(), im = e.vector.imag();
  return {{"value", {e.value.real(), e.value.imag()}},
          {"residual", e.residual},
          {"real", nodal_json(grid.unflatten(re))},
          {"imag", nodal_json(grid.unflatten(im))}};
}

std::string spectrum_csv(const SpectrumResult& s) {
  std::ostringstream os;
  os << "re,im\n";
  for (int i = 0; i < s.eigenvalues().size(); ++i) {
    os << fmt(s.eigenvalues()(i).real()) << ',' << fmt(s.eigenvalues()(i).imag()) << '\n';
  }
  return os.str();
}

std::string trace_jsonl(const FinderResult& r) {
  std::ostringstream os;
  for (const auto& t : r.trace) {
    os << Json{{"iteration", t.iteration},
               {"residual", t.residual},
               {"step", t.step},
               {"halvings", t.halvings}}
              .dump()
       << '\n';
  }
  return os.str();
}

}  // namespace motskit
