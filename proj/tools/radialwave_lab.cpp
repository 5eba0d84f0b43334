// radialwave-lab: experiment runner.
//
// Precedence: built-in defaults < --config file < command-line flags.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>

#include "lab/experiments.hpp"

namespace {

using lab::json;

// A flag that, when given, writes its value at a JSON pointer in the config.
struct Overrides {
  std::map<std::string, std::optional<double>> num;
  std::map<std::string, std::optional<long long>> integer;
  std::map<std::string, std::optional<std::string>> text;
  std::map<std::string, std::vector<double>> list;
  std::map<std::string, bool> flag;

  void number(CLI::App* app, const std::string& name, const std::string& ptr, const std::string& help) {
    app->add_option(name, num[ptr], help);
  }
  void whole(CLI::App* app, const std::string& name, const std::string& ptr, const std::string& help) {
    app->add_option(name, integer[ptr], help);
  }
  void string(CLI::App* app, const std::string& name, const std::string& ptr, const std::string& help) {
    app->add_option(name, text[ptr], help);
  }

  void apply(json& doc, CLI::App* sub) const {
    for (const auto& [p, v] : num)
      if (v) doc[json::json_pointer(p)] = *v;
    for (const auto& [p, v] : integer)
      if (v) doc[json::json_pointer(p)] = *v;
    for (const auto& [p, v] : text)
      if (v) doc[json::json_pointer(p)] = *v;
    for (const auto& [p, v] : list)
      if (!v.empty()) doc[json::json_pointer(p)] = v;
    for (const auto& [p, v] : flag)
      if (sub->count("--" + p.substr(p.rfind('/') + 1))) doc[json::json_pointer(p)] = v;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"radialwave-lab: radial focusing wave experiments"};
  app.require_subcommand(1);
  std::string config_file;
  app.add_option("-c,--config", config_file, "JSON config file (flags override its values)");

  struct Sub {
    CLI::App* app;
    Overrides ov;
  };
  std::map<std::string, Sub> subs;
  const std::map<std::string, std::string> help{
      {"channels", "exterior-energy channel verification over random data"},
      {"stationary", "singular stationary profile by stable-manifold shooting"},
      {"evolve", "focusing nonlinear evolution with diagnostics"},
      {"levine", "negative-energy blow-up experiment"},
      {"envelope", "frequency envelope and uniform tails of a bump"},
      {"verify-all", "full property suite (acceptance criteria 1-10)"}};
  for (const auto& name : lab::experiment_names()) {
    Sub s{app.add_subcommand(name, help.at(name)), {}};
    auto* a = s.app;
    auto& o = s.ov;
    o.string(a, "-o,--out", "/output", "output directory (relative paths resolve against $RADIALWAVE_OUT)");
    o.whole(a, "--seed", "/seed", "rng seed");
    o.whole(a, "--d", "/d", "dimension (odd, >= 3)");
    o.whole(a, "--p", "/p", "power (odd, >= 3)");
    o.whole(a, "--N", "/grid/N", "grid nodes");
    o.number(a, "--R-max", "/grid/R_max", "outer radius");
    o.string(a, "--cache-dir", "/cache_dir", "basis cache directory (or $RADIALWAVE_CACHE)");
    if (name == "channels") {
      o.number(a, "--R", "/channels/R", "cutoff radius");
      o.number(a, "--T", "/channels/T", "evolution time");
      o.whole(a, "--samples", "/channels/samples", "number of random data");
      o.number(a, "--support-lo", "/channels/support_lo", "inner support radius of the data");
      o.number(a, "--support-hi", "/channels/support_hi", "outer support radius of the data");
      o.number(a, "--tol-factor", "/channels/tol_factor", "tolerance as a multiple of ||data||^2");
    } else if (name == "stationary") {
      o.number(a, "--x0", "/stationary/x0", "stable-manifold seed (0 < |x0| <= 0.1)");
      o.number(a, "--s0", "/stationary/s0", "seed log-radius");
      o.number(a, "--s-min", "/stationary/s_min", "innermost log-radius");
      o.number(a, "--tol", "/stationary/tol", "integrator tolerance");
    } else if (name == "evolve") {
      o.string(a, "--datum", "/evolve/datum", "bump | plateau");
      o.number(a, "--amplitude", "/evolve/amplitude", "datum amplitude");
      o.number(a, "--width", "/evolve/width", "datum width");
      o.number(a, "--velocity", "/evolve/velocity", "plateau velocity");
      o.number(a, "--dt", "/evolve/dt", "time step");
      o.number(a, "--T", "/evolve/T", "horizon");
      o.whole(a, "--save-every", "/evolve/save_every", "snapshot stride");
      o.number(a, "--blowup-threshold", "/evolve/blowup_threshold", "sup-norm cap");
      o.flag["/evolve/reverse"] = true;
      a->add_flag("--reverse", "integrate towards negative times");
    } else if (name == "levine") {
      o.number(a, "--amplitude", "/levine/amplitude", "bump amplitude");
      o.number(a, "--width", "/levine/width", "bump width");
      o.number(a, "--dt", "/levine/dt", "time step");
      o.number(a, "--T", "/levine/T", "horizon");
    } else if (name == "envelope") {
      o.number(a, "--amplitude", "/envelope/amplitude", "bump amplitude");
      o.number(a, "--width", "/envelope/width", "bump width");
      a->add_option("--eta", o.list["/envelope/eta"], "tail thresholds");
    }
    subs.emplace(name, std::move(s));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : lab::kValidation;
  }

  for (auto& [name, sub] : subs) {
    if (!sub.app->parsed()) continue;
    json doc = lab::default_config(name);
    std::string problem;
    try {
      if (!config_file.empty()) {
        std::ifstream in(config_file);
        if (!in) throw std::runtime_error("cannot open config file " + config_file);
        const json file = json::parse(in);
        if (file.contains("experiment") && file["experiment"] != name)
          throw std::runtime_error("config file is for experiment " + file["experiment"].dump());
        doc.merge_patch(file);
      }
    } catch (const std::exception& e) {
      problem = e.what();
    }
    // flags apply even to a rejected file so -o still decides where error.json goes
    sub.ov.apply(doc, sub.app);
    // still goes through run() so error.json and the manifest get written
    if (!problem.empty()) doc["__config_error__"] = problem;
    return lab::run(doc, std::cerr);
  }
  return lab::kValidation;
}
