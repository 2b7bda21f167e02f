#include <iostream>

#include <CLI11.hpp>

#include "motskit/errors.hpp"
#include "motskit/scenario.hpp"

using namespace motskit;

namespace {

struct Overrides {
  std::string config;
  std::string out;
  int ntheta = 0, nphi = 0;
  double tol_marginal = 0.0;
};

int run(const Overrides& o, Stage stage) {
  try {
    ScenarioConfig cfg = load_scenario(o.config);
    if (!o.out.empty()) cfg.out_dir = o.out;
    if (o.ntheta) cfg.ntheta = o.ntheta;
    if (o.nphi) cfg.nphi = o.nphi;
    if (cfg.ntheta < 2 || cfg.nphi < 2 || cfg.nphi % 2) {
      throw ConfigError("grid needs ntheta >= 2 and an even nphi >= 2");
    }
    if (o.tol_marginal > 0.0) cfg.tol.marginal_rel = o.tol_marginal;
    const RunReport r = run_scenario(cfg, stage);
    std::cout << r.data.value("status", Json::object()).dump() << "\n";
    if (r.exit_code) std::cerr << r.message << "\n";
    return r.exit_code;
  } catch (const ConfigError& e) {
    std::cerr << "ConfigError: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MOTS finder and stability verifier"};
  app.require_subcommand(1);
  Overrides o;
  const std::pair<const char*, Stage> commands[] = {{"find-mots", Stage::FindMots},
                                                    {"spectrum", Stage::Spectrum},
                                                    {"verify", Stage::Verify},
                                                    {"report", Stage::Report}};
  Stage chosen = Stage::FindMots;
  for (const auto& [name, stage] : commands) {
    auto* sub = app.add_subcommand(name, std::string("run the pipeline up to ") + name);
    sub->add_option("--config", o.config, "scenario JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--ntheta", o.ntheta, "latitude nodes");
    sub->add_option("--nphi", o.nphi, "longitude nodes (even)");
    sub->add_option("--tol-marginal", o.tol_marginal, "relative marginal tolerance");
    sub->callback([&chosen, s = stage] { chosen = s; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  return run(o, chosen);
}
