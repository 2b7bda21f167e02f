#include "motskit/scenario.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <set>

#include "motskit/errors.hpp"

namespace motskit {

namespace {

Vec3 vec_from(const Json& j, const char* what) {
  if (!j.is_array() || j.size() != 3) throw ConfigError(std::string(what) + " must be [x, y, z]");
  Vec3 v;
  for (int k = 0; k < 3; ++k) {
    if (!j[k].is_number()) throw ConfigError(std::string(what) + " entries must be numbers");
    v(k) = j[k].get<double>();
  }
  return v;
}

Json vec_json(const Vec3& v) { return {v(0), v(1), v(2)}; }

void only_keys(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) throw ConfigError("unknown key '" + it.key() + "' in " + where);
  }
}

double number(const Json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw ConfigError(std::string(key) + " must be a number");
  return j.at(key).get<double>();
}

int integer(const Json& j, const char* key, int fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number_integer()) throw ConfigError(std::string(key) + " must be an integer");
  return j.at(key).get<int>();
}

CatalogEntry entry_from(const Json& j) {
  if (!j.is_object() || !j.contains("catalog") || !j.at("catalog").is_string()) {
    throw ConfigError("data.catalog must name a catalog entry");
  }
  const std::string name = j.at("catalog").get<std::string>();
  if (name == "SchwarzschildIsotropic") {
    only_keys(j, {"catalog", "M"}, "data");
    return SchwarzschildIsotropic{number(j, "M", 1.0)};
  }
  if (name == "DeSitterFlat") {
    only_keys(j, {"catalog", "H", "a0", "sign"}, "data");
    DeSitterFlat e{number(j, "H", 1.0), number(j, "a0", 1.0), Expansion::Contracting};
    if (j.contains("sign")) {
      const std::string s = j.at("sign").is_string() ? j.at("sign").get<std::string>() : "";
      if (s == "expanding") {
        e.sign = Expansion::Expanding;
      } else if (s != "contracting") {
        throw ConfigError("data.sign must be 'contracting' or 'expanding'");
      }
    }
    return e;
  }
  if (name == "FlatSlice") {
    only_keys(j, {"catalog"}, "data");
    return FlatSlice{};
  }
  if (name == "BrillLindquist") {
    only_keys(j, {"catalog", "m1", "m2", "d"}, "data");
    return BrillLindquist{number(j, "m1", 0.5), number(j, "m2", 0.5), number(j, "d", 0.5)};
  }
  if (name == "ProductCylinder") {
    only_keys(j, {"catalog", "R0"}, "data");
    return ProductCylinder{number(j, "R0", 1.0)};
  }
  throw ConfigError("unknown catalog entry '" + name + "'");
}

Json entry_json(const CatalogEntry& entry) {
  Json j = {{"catalog", catalog_name(entry)}};
  if (const auto* e = std::get_if<SchwarzschildIsotropic>(&entry)) j["M"] = e->M;
  if (const auto* e = std::get_if<DeSitterFlat>(&entry)) {
    j["H"] = e->H;
    j["a0"] = e->a0;
    j["sign"] = e->sign == Expansion::Expanding ? "expanding" : "contracting";
  }
  if (const auto* e = std::get_if<BrillLindquist>(&entry)) {
    j["m1"] = e->m1;
    j["m2"] = e->m2;
    j["d"] = e->d;
  }
  if (const auto* e = std::get_if<ProductCylinder>(&entry)) j["R0"] = e->R0;
  return j;
}

SymmetrySpec symmetry_from(const Json& j) {
  only_keys(j, {"kind", "axis", "center", "b", "A"}, "symmetry");
  SymmetrySpec s;
  if (!j.contains("kind") || !j.at("kind").is_string()) throw ConfigError("symmetry.kind missing");
  s.kind = j.at("kind").get<std::string>();
  if (s.kind != "translation" && s.kind != "rotation" && s.kind != "radial" && s.kind != "custom") {
    throw ConfigError("symmetry.kind must be translation, rotation, radial or custom");
  }
  if (j.contains("axis")) s.axis = vec_from(j.at("axis"), "symmetry.axis");
  if (j.contains("center")) s.center = vec_from(j.at("center"), "symmetry.center");
  if (j.contains("b")) s.b = vec_from(j.at("b"), "symmetry.b");
  if (j.contains("A")) {
    const Json& a = j.at("A");
    if (!a.is_array() || a.size() != 3) throw ConfigError("symmetry.A must be a 3x3 array");
    for (int r = 0; r < 3; ++r) s.A.row(r) = vec_from(a[r], "symmetry.A row").transpose();
  }
  if ((s.kind == "translation" || s.kind == "rotation") && s.axis.norm() == 0.0) {
    throw ConfigError("symmetry.axis must be non-zero");
  }
  return s;
}

Json symmetry_json(const SymmetrySpec& s) {
  Json A = Json::array();
  for (int r = 0; r < 3; ++r) A.push_back(vec_json(s.A.row(r).transpose()));
  return {{"kind", s.kind},
          {"axis", vec_json(s.axis)},
          {"center", vec_json(s.center)},
          {"b", vec_json(s.b)},
          {"A", A}};
}

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p);
  if (!f) throw ConfigError("cannot write " + p.string());
  f << text;
}

class Timer {
 public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double dt = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return dt;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

}  // namespace

VectorField build_generator(const SymmetrySpec& spec, const InitialDataSet& data) {
  if (spec.kind == "translation") return translation_generator(spec.axis.normalized());
  if (spec.kind == "rotation") return rotation_generator(spec.axis.normalized(), spec.center);
  if (spec.kind == "radial") return radial_unit_generator(data.h, spec.center);
  return affine_generator(spec.b, spec.A, spec.center);
}

ScenarioConfig parse_scenario(const Json& j) {
  only_keys(j,
            {"schema_version", "name", "data", "symmetry", "grid", "finder", "operator",
             "variation_eps", "tolerances", "output"},
            "scenario");
  ScenarioConfig c;
  if (!j.contains("schema_version") || !j.at("schema_version").is_number_integer() ||
      j.at("schema_version").get<int>() != kSchemaVersion) {
    throw ConfigError("schema_version must be " + std::to_string(kSchemaVersion));
  }
  if (j.contains("name")) {
    if (!j.at("name").is_string()) throw ConfigError("name must be a string");
    c.name = j.at("name").get<std::string>();
  }
  if (!j.contains("data")) throw ConfigError("data section missing");
  c.entry = entry_from(j.at("data"));
  try {
    catalog_build(c.entry);
  } catch (const InvalidParameter& e) {
    throw ConfigError(e.what());
  }
  if (j.contains("symmetry") && !j.at("symmetry").is_null()) {
    c.symmetry = symmetry_from(j.at("symmetry"));
  }
  if (j.contains("grid")) {
    const Json& g = j.at("grid");
    only_keys(g, {"ntheta", "nphi"}, "grid");
    c.ntheta = integer(g, "ntheta", c.ntheta);
    c.nphi = integer(g, "nphi", c.nphi);
  }
  if (c.ntheta < 2) throw ConfigError("grid.ntheta must be at least 2");
  if (c.nphi < 2 || c.nphi % 2) throw ConfigError("grid.nphi must be even and at least 2");
  if (j.contains("finder")) {
    const Json& f = j.at("finder");
    only_keys(f,
              {"center", "initial_radius", "max_iterations", "tolerance", "damping", "max_radius",
               "allow_axisymmetric"},
              "finder");
    if (f.contains("center")) c.center = vec_from(f.at("center"), "finder.center");
    c.initial_radius = number(f, "initial_radius", c.initial_radius);
    c.max_iterations = integer(f, "max_iterations", c.max_iterations);
    c.finder_tolerance = number(f, "tolerance", c.finder_tolerance);
    c.damping = number(f, "damping", c.damping);
    c.max_radius = number(f, "max_radius", c.max_radius);
    if (f.contains("allow_axisymmetric")) {
      if (!f.at("allow_axisymmetric").is_boolean()) {
        throw ConfigError("finder.allow_axisymmetric must be a boolean");
      }
      c.allow_axisymmetric = f.at("allow_axisymmetric").get<bool>();
    }
  }
  if (!(c.initial_radius > 0.0)) throw ConfigError("finder.initial_radius must be positive");
  if (c.max_iterations < 1) throw ConfigError("finder.max_iterations must be at least 1");
  if (!(c.finder_tolerance > 0.0)) throw ConfigError("finder.tolerance must be positive");
  if (!(c.damping > 0.0 && c.damping <= 1.0)) throw ConfigError("finder.damping must lie in (0, 1]");
  if (j.contains("operator")) {
    const Json& o = j.at("operator");
    only_keys(o, {"shift"}, "operator");
    if (o.contains("shift")) {
      const Json& s = o.at("shift");
      if (s.is_string() && s.get<std::string>() == "cancel_principal") {
        c.cancel_principal = true;
      } else if (s.is_number()) {
        c.shift = s.get<double>();
      } else {
        throw ConfigError("operator.shift must be a number or \"cancel_principal\"");
      }
    }
  }
  c.variation_eps = number(j, "variation_eps", c.variation_eps);
  if (!(c.variation_eps > 0.0)) throw ConfigError("variation_eps must be positive");
  if (j.contains("tolerances")) c.tol = tolerances_from_json(j.at("tolerances"));
  if (j.contains("output")) {
    const Json& o = j.at("output");
    only_keys(o, {"dir"}, "output");
    if (o.contains("dir")) {
      if (!o.at("dir").is_string()) throw ConfigError("output.dir must be a string");
      c.out_dir = o.at("dir").get<std::string>();
    }
  }
  return c;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open " + path);
  Json j;
  try {
    f >> j;
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  return parse_scenario(j);
}

Json to_json(const ScenarioConfig& c) {
  Json op = c.cancel_principal ? Json{{"shift", "cancel_principal"}} : Json{{"shift", c.shift}};
  return {{"schema_version", c.schema_version},
          {"name", c.name},
          {"data", entry_json(c.entry)},
          {"symmetry", c.symmetry ? symmetry_json(*c.symmetry) : Json(nullptr)},
          {"grid", {{"ntheta", c.ntheta}, {"nphi", c.nphi}}},
          {"finder",
           {{"center", vec_json(c.center)},
            {"initial_radius", c.initial_radius},
            {"max_iterations", c.max_iterations},
            {"tolerance", c.finder_tolerance},
            {"damping", c.damping},
            {"max_radius", c.max_radius},
            {"allow_axisymmetric", c.allow_axisymmetric}}},
          {"operator", op},
          {"variation_eps", c.variation_eps},
          {"tolerances", to_json(c.tol)},
          {"output", {{"dir", c.out_dir}}}};
}

RunReport run_scenario(const ScenarioConfig& cfg, Stage stage, bool write_files) {
  namespace fs = std::filesystem;
  RunReport run;
  run.data["scenario"] = to_json(cfg);
  run.data["tolerances"] = to_json(cfg.tol);
  run.data["timing_file"] = "timing.json";
  const fs::path out(cfg.out_dir);
  Timer timer;

  auto finish = [&](int code, const std::string& message) {
    run.exit_code = code;
    run.message = message;
    run.data["status"] = {{"exit_code", code}, {"message", message}};
    if (write_files) {
      fs::create_directories(out);
      write_text(out / "report.json", run.data.dump(2) + "\n");
      write_text(out / "timing.json", run.timing.dump(2) + "\n");
    }
    return run;
  };

  if (stage >= Stage::Verify && !cfg.symmetry) {
    return finish(1, "ConfigError: verification needs a symmetry selection");
  }
  if (write_files) fs::create_directories(out);

  const InitialDataPtr data = catalog_build(cfg.entry);
  const auto grid = std::make_shared<const SurfaceGrid>(cfg.ntheta, cfg.nphi);
  run.timing["setup"] = timer.lap();

  FinderConfig fc;
  fc.center = cfg.center;
  fc.initial_profile = grid->constant(cfg.initial_radius);
  fc.max_iterations = cfg.max_iterations;
  fc.tolerance = cfg.finder_tolerance;
  fc.damping = cfg.damping;
  fc.max_radius = cfg.max_radius;
  fc.allow_axisymmetric = cfg.allow_axisymmetric;
  std::optional<FinderResult> found;
  try {
    found = find_mots(data, grid, fc, cfg.tol);
  } catch (const NoConvergence& e) {
    run.timing["find_mots"] = timer.lap();
    return finish(2, std::string("no MOTS found: ") + e.what());
  } catch (const DivergingProfile& e) {
    run.timing["find_mots"] = timer.lap();
    return finish(2, std::string("no MOTS found: ") + e.what());
  }
  const EmbeddedSurface& s = found->surface;
  const auto& g = s.geometry();
  run.timing["find_mots"] = timer.lap();
  run.data["mots"] = {{"iterations", found->iterations},
                      {"residual", found->residual},
                      {"axisymmetric_path", found->axisymmetric},
                      {"profile_min", s.profile()->minCoeff()},
                      {"profile_max", s.profile()->maxCoeff()},
                      {"area", area(s)},
                      {"gauss_bonnet", integrate(s, g.ricci)},
                      {"max_abs_G_ku", (g.rho + g.j_n).abs().maxCoeff()},
                      {"surface_file", "surface.json"},
                      {"trace_file", "trace.jsonl"}};
  if (write_files) {
    write_text(out / "surface.json", surface_json(s).dump() + "\n");
    write_text(out / "trace.jsonl", trace_jsonl(*found));
  }
  if (stage == Stage::FindMots) return finish(0, "ok");

  std::optional<SpectrumResult> spec;
  try {
    OperatorOptions opts;
    opts.shift = cfg.shift;
    spec = spectrum(assemble(s, opts), cfg.tol);
    if (cfg.cancel_principal) {
      opts.shift = cfg.shift + spec->lambda0();
      spec = spectrum(assemble(s, opts), cfg.tol);
    }
  } catch (const EigensolverFailure& e) {
    run.timing["spectrum"] = timer.lap();
    return finish(3, e.what());
  }
  run.timing["spectrum"] = timer.lap();
  run.data["spectrum"] = summary_json(*spec);
  run.data["spectrum"]["spectrum_file"] = "spectrum.csv";
  if (write_files) write_text(out / "spectrum.csv", spectrum_csv(*spec));
  if (stage == Stage::Spectrum) return finish(0, "ok");

  const VectorField x = build_generator(*cfg.symmetry, *data);
  const SymmetryDecomposition d = decompose(x, s, false, cfg.tol);
  const LieExpansionIdentity lie = lie_expansion_identity(d, s, cfg.variation_eps, cfg.tol);
  run.data["symmetry"] = {{"decomposition", summary_json(d)},
                          {"projected_residual",
                           projected_symmetry_residual(d, s).abs().maxCoeff()},
                          {"lie_identity", summary_json(lie)}};
  const auto reports = verify_all(d, s, *spec, cfg.variation_eps, cfg.tol);
  Json list = Json::array();
  bool failed = false;
  for (const auto& r : reports) {
    list.push_back(to_json(r));
    if (r.hypotheses_met && r.conclusion_verified && !*r.conclusion_verified) failed = true;
  }
  run.data["verification"] = list;
  run.timing["verify"] = timer.lap();

  if (stage == Stage::Report) {
    const IntegralIdentity ii = integral_identity(d, s, cfg.tol);
    const GenuineSurfaceChecks gs = genuine_surface_checks(d, s, cfg.variation_eps, cfg.tol);
    run.data["symmetry"]["integral_identity"] = to_json(ii);
    run.data["symmetry"]["genuine_surface"] = summary_json(gs);
    if (ii.precondition && !ii.holds) failed = true;
    if (gs.verified && !*gs.verified) failed = true;
    const Eigenpair principal = spec->eigenpair(0);
    run.data["spectrum"]["principal_residual"] = principal.residual;
    run.data["spectrum"]["eigenfunction_file"] = "principal_eigenfunction.json";
    if (write_files) {
      write_text(out / "principal_eigenfunction.json",
                 eigenfunction_json(principal, *grid).dump() + "\n");
    }
    run.timing["report"] = timer.lap();
  }
  return finish(failed ? 4 : 0, failed ? "a verifier with met hypotheses failed" : "ok");
}

}  // namespace motskit
