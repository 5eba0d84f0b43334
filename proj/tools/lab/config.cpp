#include "lab/config.hpp"

#include <cmath>
#include <cstdlib>
#include <set>

#include "radialwave/core.hpp"
#include "radialwave/errors.hpp"

namespace lab {

using radialwave::ErrorKind;
using radialwave::raise;
using radialwave::require;

namespace {

// Reads members of one JSON object, rejecting keys nobody asked for.
class Reader {
 public:
  Reader(const json& obj, std::string where) : obj_(obj), where_(std::move(where)) {
    if (!obj_.is_object()) raise(ErrorKind::ConfigError, where_ + " must be an object");
  }

  template <class T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    auto it = obj_.find(key);
    if (it == obj_.end()) return;
    try {
      out = it->template get<T>();
    } catch (const json::exception&) {
      raise(ErrorKind::ConfigError, where_ + "." + key + " has the wrong type");
    }
  }

  const json& child(const char* key) {
    seen_.insert(key);
    static const json empty = json::object();
    auto it = obj_.find(key);
    return it == obj_.end() ? empty : *it;
  }

  void finish() const {
    for (const auto& [k, v] : obj_.items())
      if (!seen_.count(k)) raise(ErrorKind::ConfigError, "unknown key " + where_ + "." + k);
  }

 private:
  const json& obj_;
  std::string where_;
  std::set<std::string> seen_;
};

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"channels", "stationary", "evolve", "levine", "envelope", "verify-all"};
  return names;
}

json default_config(const std::string& experiment) {
  ExperimentConfig c;
  c.experiment = experiment;
  c.output = experiment;
  if (experiment == "channels" || experiment == "verify-all") {
    c.N = 4096;
    c.R_max = 64.0;
  } else if (experiment == "envelope") {
    c.N = 1024;
    c.R_max = 32.0;
  } else {
    c.N = 1024;
    c.R_max = 16.0;
  }
  return to_json(c);
}

json to_json(const ExperimentConfig& c) {
  json j;
  j["experiment"] = c.experiment;
  j["d"] = c.d;
  j["p"] = c.p;
  j["grid"] = {{"N", c.N}, {"R_max", c.R_max}};
  j["seed"] = c.seed;
  j["output"] = c.output;
  j["cache_dir"] = c.cache_dir;
  const auto& ch = c.channels;
  j["channels"] = {{"R", ch.R},           {"T", ch.T},         {"samples", ch.samples}, {"support_lo", ch.support_lo},
                   {"support_hi", ch.support_hi}, {"bumps", ch.bumps}, {"tol_factor", ch.tol_factor}};
  const auto& st = c.stationary;
  j["stationary"] = {{"x0", st.x0}, {"s0", st.s0}, {"s_min", st.s_min}, {"tol", st.tol}};
  const auto& ev = c.evolve;
  j["evolve"] = {{"datum", ev.datum},   {"amplitude", ev.amplitude},   {"width", ev.width},
                 {"velocity", ev.velocity}, {"dt", ev.dt},           {"T", ev.T},
                 {"save_every", ev.save_every}, {"blowup_threshold", ev.blowup_threshold}, {"reverse", ev.reverse}};
  const auto& lv = c.levine;
  j["levine"] = {{"amplitude", lv.amplitude}, {"width", lv.width}, {"dt", lv.dt}, {"T", lv.T}};
  const auto& en = c.envelope;
  j["envelope"] = {{"amplitude", en.amplitude}, {"width", en.width}, {"eta", en.eta}};
  return j;
}

ExperimentConfig parse_config(const json& doc) {
  ExperimentConfig c;
  Reader top(doc, "config");
  top.get("experiment", c.experiment);
  top.get("d", c.d);
  top.get("p", c.p);
  top.get("seed", c.seed);
  top.get("output", c.output);
  top.get("cache_dir", c.cache_dir);
  {
    Reader g(top.child("grid"), "grid");
    g.get("N", c.N);
    g.get("R_max", c.R_max);
    g.finish();
  }
  {
    Reader r(top.child("channels"), "channels");
    auto& k = c.channels;
    r.get("R", k.R);
    r.get("T", k.T);
    r.get("samples", k.samples);
    r.get("support_lo", k.support_lo);
    r.get("support_hi", k.support_hi);
    r.get("bumps", k.bumps);
    r.get("tol_factor", k.tol_factor);
    r.finish();
  }
  {
    Reader r(top.child("stationary"), "stationary");
    auto& k = c.stationary;
    r.get("x0", k.x0);
    r.get("s0", k.s0);
    r.get("s_min", k.s_min);
    r.get("tol", k.tol);
    r.finish();
  }
  {
    Reader r(top.child("evolve"), "evolve");
    auto& k = c.evolve;
    r.get("datum", k.datum);
    r.get("amplitude", k.amplitude);
    r.get("width", k.width);
    r.get("velocity", k.velocity);
    r.get("dt", k.dt);
    r.get("T", k.T);
    r.get("save_every", k.save_every);
    r.get("blowup_threshold", k.blowup_threshold);
    r.get("reverse", k.reverse);
    r.finish();
  }
  {
    Reader r(top.child("levine"), "levine");
    auto& k = c.levine;
    r.get("amplitude", k.amplitude);
    r.get("width", k.width);
    r.get("dt", k.dt);
    r.get("T", k.T);
    r.finish();
  }
  {
    Reader r(top.child("envelope"), "envelope");
    auto& k = c.envelope;
    r.get("amplitude", k.amplitude);
    r.get("width", k.width);
    r.get("eta", k.eta);
    r.finish();
  }
  top.finish();
  return c;
}

void validate(const ExperimentConfig& c) {
  const auto& names = experiment_names();
  require(std::find(names.begin(), names.end(), c.experiment) != names.end(), ErrorKind::ConfigError,
          "unknown experiment '" + c.experiment + "'");
  radialwave::make_params(c.d, c.p);
  require(c.N >= 64, ErrorKind::InvalidParams, "grid.N must be at least 64");
  require(c.R_max > 0.0 && std::isfinite(c.R_max), ErrorKind::InvalidParams, "grid.R_max must be positive");
  require(!c.output.empty(), ErrorKind::ConfigError, "output must not be empty");

  if (c.experiment == "channels") {
    const auto& k = c.channels;
    require(k.R > 0.0 && k.T > 0.0, ErrorKind::InvalidParams, "channels.R and channels.T must be positive");
    require(k.samples >= 1 && k.bumps >= 1, ErrorKind::InvalidParams, "channels.samples and bumps must be >= 1");
    require(0.0 <= k.support_lo && k.support_lo < k.support_hi, ErrorKind::InvalidParams,
            "channels support must satisfy 0 <= lo < hi");
    require(k.tol_factor >= 0.0, ErrorKind::InvalidParams, "channels.tol_factor must be >= 0");
    require(k.R + k.T < c.R_max, ErrorKind::RegionError, "R + T must stay inside the grid");
    require(k.T <= c.R_max - k.support_hi, ErrorKind::CausalityError,
            "causality budget violated: T > R_max - support_hi");
  } else if (c.experiment == "stationary") {
    const auto& k = c.stationary;
    require(k.x0 != 0.0 && std::abs(k.x0) <= 0.1, ErrorKind::InvalidParams, "stationary.x0 must satisfy 0 < |x0| <= 0.1");
    require(k.s_min < k.s0, ErrorKind::InvalidParams, "stationary.s_min must be below s0");
    require(k.tol > 0.0, ErrorKind::InvalidParams, "stationary.tol must be positive");
  } else if (c.experiment == "evolve") {
    const auto& k = c.evolve;
    require(k.datum == "bump" || k.datum == "plateau", ErrorKind::ConfigError, "evolve.datum must be bump or plateau");
    require(k.dt > 0.0 && k.T >= k.dt, ErrorKind::InvalidParams, "evolve needs dt > 0 and T >= dt");
    require(k.save_every >= 1, ErrorKind::InvalidParams, "evolve.save_every must be >= 1");
    require(k.blowup_threshold > 0.0, ErrorKind::InvalidParams, "evolve.blowup_threshold must be positive");
    require(k.width > 0.0, ErrorKind::InvalidParams, "evolve.width must be positive");
    const double support = k.datum == "plateau" ? 2.5 * k.width : k.width;
    require(support + k.T < c.R_max - 2.0, ErrorKind::CausalityError,
            "causality budget violated: support + T must stay 2 units inside R_max");
  } else if (c.experiment == "levine") {
    const auto& k = c.levine;
    require(k.dt > 0.0 && k.T >= k.dt, ErrorKind::InvalidParams, "levine needs dt > 0 and T >= dt");
    require(k.width > 0.0, ErrorKind::InvalidParams, "levine.width must be positive");
    require(k.width + k.T < c.R_max - 2.0, ErrorKind::CausalityError,
            "causality budget violated: width + T must stay 2 units inside R_max");
  } else if (c.experiment == "envelope") {
    const auto& k = c.envelope;
    require(!k.eta.empty(), ErrorKind::InvalidParams, "envelope.eta must not be empty");
    for (double e : k.eta) require(e > 0.0, ErrorKind::InvalidParams, "envelope.eta values must be positive");
    require(k.width > 0.0 && k.width < c.R_max, ErrorKind::InvalidParams, "envelope.width must lie in (0, R_max)");
  }
}

fs::path output_dir(const ExperimentConfig& c) {
  fs::path out(c.output);
  if (out.is_relative())
    if (const char* root = std::getenv("RADIALWAVE_OUT"); root && *root) out = fs::path(root) / out;
  return out;
}

std::string cache_dir(const ExperimentConfig& c) {
  if (!c.cache_dir.empty()) return c.cache_dir;
  if (const char* env = std::getenv("RADIALWAVE_CACHE"); env && *env) return env;
  return {};
}

}  // namespace lab
