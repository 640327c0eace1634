#include "ddosc/scenarios/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "ddosc/errors.hpp"
#include "ddosc/scenarios/presets.hpp"

namespace ddosc::scenarios {

namespace {

std::string path_of(const std::string& key) { return "/" + key; }

double number(const Json& doc, const std::string& key) {
  const Json& v = doc.at(key);
  if (!v.is_number()) throw ConfigError(path_of(key), "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(path_of(key), "must be finite");
  return x;
}

double number_or(const Json& doc, const std::string& key, double fallback) {
  return doc.contains(key) ? number(doc, key) : fallback;
}

std::string string_or(const Json& doc, const std::string& key, const std::string& fallback) {
  if (!doc.contains(key)) return fallback;
  if (!doc.at(key).is_string()) throw ConfigError(path_of(key), "expected a string");
  return doc.at(key).get<std::string>();
}

std::uint64_t unsigned_or(const Json& doc, const std::string& key, std::uint64_t fallback) {
  if (!doc.contains(key)) return fallback;
  const Json& v = doc.at(key);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0)
    return static_cast<std::uint64_t>(v.get<std::int64_t>());
  if (v.is_number_float()) {
    const double x = v.get<double>();
    if (x >= 0.0 && x == std::floor(x) && x < 1.8e19) return static_cast<std::uint64_t>(x);
  }
  throw ConfigError(path_of(key), "expected a non-negative integer");
}

template <class Enum>
Enum parse_enum(const Json& doc, const std::string& key, Enum fallback,
                std::initializer_list<std::pair<const char*, Enum>> options) {
  if (!doc.contains(key)) return fallback;
  const std::string s = string_or(doc, key, "");
  for (const auto& [name, value] : options)
    if (s == name) return value;
  std::string allowed;
  for (const auto& [name, value] : options) allowed += (allowed.empty() ? "" : ", ") + std::string(name);
  throw ConfigError(path_of(key), "unknown value '" + s + "' (expected one of: " + allowed + ")");
}

void require(bool ok, const std::string& key, const std::string& msg) {
  if (!ok) throw ConfigError(path_of(key), msg);
}

}  // namespace

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "name",    "preset",  "description", "Gamma",    "gamma",      "Omega",  "omega1",
      "omega2",  "g",       "T_B",         "n10",      "n20",        "engine", "matching",
      "coefficients", "schedule", "omega_D", "delta",  "tau",        "eta",    "jitter",
      "D_delta", "D_tau",   "D_omega",     "seed",     "pulses",     "t_end",  "samples",
      "window",  "dt",      "bath_modes",  "bath_cutoff", "t_min",   "epsilon", "seeds",
      "sweep"};
  return keys;
}

Json complete_document(const Json& doc) {
  if (!doc.is_object()) throw ConfigError("/", "configuration must be a JSON object");
  if (!doc.contains("preset")) return doc;
  if (!doc.at("preset").is_string()) throw ConfigError("/preset", "expected a string");
  Json merged = preset(doc.at("preset").get<std::string>());
  for (const auto& [k, v] : doc.items()) merged[k] = v;
  return merged;
}

ScenarioConfig resolve(const Json& doc) {
  if (!doc.is_object()) throw ConfigError("/", "configuration must be a JSON object");
  const auto& keys = known_keys();
  for (const auto& [k, v] : doc.items()) {
    if (std::find(keys.begin(), keys.end(), k) == keys.end())
      throw ConfigError(path_of(k), "unknown key");
  }
  if (!doc.contains("preset")) {
    for (const char* k : {"Gamma", "gamma", "T_B"})
      require(doc.contains(k), k, "required field is missing (or give a preset)");
  }

  ScenarioConfig c;
  c.name = string_or(doc, "name", doc.contains("preset") ? doc.at("preset").get<std::string>()
                                                         : std::string("scenario"));
  c.preset = string_or(doc, "preset", "");

  PhysicalParams& p = c.params;
  p.Gamma = number_or(doc, "Gamma", p.Gamma);
  p.gamma_bath = number_or(doc, "gamma", p.gamma_bath);
  p.Omega_bath = number_or(doc, "Omega", p.Omega_bath);
  p.omega1 = number_or(doc, "omega1", p.omega1);
  p.omega2 = number_or(doc, "omega2", p.omega2);
  p.g = number_or(doc, "g", p.g);
  p.T_B = number_or(doc, "T_B", p.T_B);
  p.n10 = number_or(doc, "n10", p.n10);
  p.n20 = number_or(doc, "n20", p.n20);
  require(p.Gamma >= 0.0, "Gamma", "must be >= 0");
  require(p.gamma_bath > 0.0, "gamma", "must be > 0");
  require(p.Omega_bath > 0.0, "Omega", "must be > 0 (bath occupation is evaluated at Omega)");
  require(p.T_B >= 0.0, "T_B", "must be >= 0");
  require(p.n10 >= 0.0, "n10", "must be >= 0");
  require(p.n20 >= 0.0, "n20", "must be >= 0");

  c.engine = parse_enum(doc, "engine", Engine::closed,
                        {{"closed", Engine::closed},
                         {"kernel", Engine::kernel},
                         {"discrete_bath", Engine::discrete_bath}});
  c.matching = parse_enum(doc, "matching", MatchingMode::kernel_continuous,
                          {{"kernel_continuous", MatchingMode::kernel_continuous},
                           {"derivative_continuous", MatchingMode::derivative_continuous}});
  c.coefficients = parse_enum(doc, "coefficients", CoefficientModel::derived,
                              {{"derived", CoefficientModel::derived},
                               {"printed", CoefficientModel::printed}});

  c.t_end = number_or(doc, "t_end", c.t_end);
  require(c.t_end > 0.0, "t_end", "must be > 0");
  const std::uint64_t samples = unsigned_or(doc, "samples", c.samples);
  require(samples >= 2 && samples <= 10'000'000, "samples", "must be in [2, 1e7]");
  c.samples = static_cast<std::size_t>(samples);

  c.window_end = std::min(c.window_end, c.t_end);
  c.window_start = std::min(c.window_start, 0.25 * c.t_end);
  if (doc.contains("window")) {
    const Json& w = doc.at("window");
    require(w.is_array() && w.size() == 2 && w[0].is_number() && w[1].is_number(), "window",
            "expected [t_a, t_b]");
    c.window_start = w[0].get<double>();
    c.window_end = w[1].get<double>();
  }
  require(c.window_start >= 0.0 && c.window_start < c.window_end && c.window_end <= c.t_end,
          "window", "need 0 <= t_a < t_b <= t_end");

  c.dt = number_or(doc, "dt", c.dt);
  require(c.dt > 0.0, "dt", "must be > 0");
  const std::uint64_t modes = unsigned_or(doc, "bath_modes", static_cast<std::uint64_t>(c.bath_modes));
  require(modes >= 2 && modes <= 1'000'000, "bath_modes", "must be in [2, 1e6]");
  c.bath_modes = static_cast<int>(modes);
  c.bath_cutoff = number_or(doc, "bath_cutoff", c.bath_cutoff);
  require(c.bath_cutoff > 0.0, "bath_cutoff", "must be > 0");

  c.suppression.t_min = number_or(doc, "t_min", 2.0 / p.Omega_bath);
  c.suppression.epsilon = number_or(doc, "epsilon", c.suppression.epsilon);
  require(c.suppression.t_min >= 0.0, "t_min", "must be >= 0");
  require(c.suppression.epsilon >= 0.0, "epsilon", "must be >= 0");

  const std::uint64_t seeds = unsigned_or(doc, "seeds", static_cast<std::uint64_t>(c.seeds));
  require(seeds >= 1 && seeds <= 100'000, "seeds", "must be in [1, 1e5]");
  c.seeds = static_cast<int>(seeds);

  // Schedule.
  ScheduleSpec& s = c.schedule;
  s.kind = parse_enum(doc, "schedule", ScheduleKind::free,
                      {{"free", ScheduleKind::free},
                       {"regular", ScheduleKind::regular},
                       {"irregular", ScheduleKind::irregular},
                       {"custom", ScheduleKind::custom}});
  s.seed = unsigned_or(doc, "seed", s.seed);
  if (s.kind == ScheduleKind::regular || s.kind == ScheduleKind::irregular) {
    require(doc.contains("omega_D"), "omega_D", "required for a pulsed schedule");
    s.omega_D = number(doc, "omega_D");
    s.tau = number_or(doc, "tau", s.tau);
    require(s.tau > 0.0, "tau", "must be > 0");
    const bool has_delta = doc.contains("delta"), has_eta = doc.contains("eta");
    require(has_delta || has_eta, "delta", "give the pulse width delta or the duty cycle eta");
    if (has_eta) {
      const double eta = number(doc, "eta");
      require(eta >= 0.0 && eta <= 1.0, "eta", "duty cycle must lie in [0, 1]");
      s.delta = eta * s.tau;
      if (has_delta)
        require(std::abs(number(doc, "delta") - s.delta) <= 1e-12 * s.tau, "delta",
                "inconsistent with eta * tau");
    } else {
      s.delta = number(doc, "delta");
    }
    require(s.delta >= 0.0, "delta", "must be >= 0");
    require(s.delta <= s.tau, "delta", "pulse width exceeds the period (need 0 < delta <= tau)");
    if (s.kind == ScheduleKind::irregular) {
      s.jitter = number_or(doc, "jitter", s.jitter);
      require(s.jitter >= 0.0, "jitter", "must be >= 0");
      s.D_delta = number_or(doc, "D_delta", s.jitter * s.delta);
      s.D_tau = number_or(doc, "D_tau", s.jitter * s.tau);
      s.D_omega = number_or(doc, "D_omega", s.jitter * std::abs(s.omega_D));
      require(s.D_delta >= 0.0, "D_delta", "must be >= 0");
      require(s.D_tau >= 0.0 && s.D_tau < s.tau, "D_tau", "must satisfy 0 <= D_tau < tau");
      require(s.D_omega >= 0.0, "D_omega", "must be >= 0");
    }
  } else if (s.kind == ScheduleKind::custom) {
    require(doc.contains("pulses") && doc.at("pulses").is_array(), "pulses",
            "custom schedule needs an array of {t_on, width, amplitude}");
    const Json& arr = doc.at("pulses");
    for (std::size_t k = 0; k < arr.size(); ++k) {
      const std::string at = "pulses/" + std::to_string(k);
      const Json& e = arr[k];
      if (!e.is_object()) throw ConfigError("/" + at, "expected an object");
      for (const auto& [kk, vv] : e.items()) {
        if (kk != "t_on" && kk != "width" && kk != "amplitude")
          throw ConfigError("/" + at + "/" + kk, "unknown key");
        if (!vv.is_number()) throw ConfigError("/" + at + "/" + kk, "expected a number");
      }
      for (const char* f : {"t_on", "width", "amplitude"})
        if (!e.contains(f)) throw ConfigError("/" + at + "/" + f, "required field is missing");
      s.pulses.push_back({e["t_on"].get<double>(), e["width"].get<double>(),
                          e["amplitude"].get<double>()});
    }
  }

  // Sweep axes (kept in document order).
  if (doc.contains("sweep")) {
    const Json& sw = doc.at("sweep");
    require(sw.is_object(), "sweep", "expected an object of key -> list of values");
    for (const auto& [k, v] : sw.items()) {
      if (std::find(keys.begin(), keys.end(), k) == keys.end() || k == "sweep" || k == "preset")
        throw ConfigError("/sweep/" + k, "not a sweepable key");
      if (!v.is_array() || v.empty()) throw ConfigError("/sweep/" + k, "expected a non-empty list");
      SweepAxis axis{k, {}};
      for (const auto& x : v) axis.values.push_back(x);
      c.sweep.push_back(std::move(axis));
    }
    require(c.sweep.size() <= 3, "sweep", "at most 3 sweep axes are supported");
  }

  // Catch schedule-level errors now so that they carry a path.
  try {
    (void)c.build_schedule();
  } catch (const ParameterError& e) {
    throw ConfigError(s.kind == ScheduleKind::custom ? "/pulses" : "/schedule", e.what());
  }

  // Canonical resolved document.
  Json r;
  r["name"] = c.name;
  if (!c.preset.empty()) r["preset"] = c.preset;
  r["Gamma"] = p.Gamma;
  r["gamma"] = p.gamma_bath;
  r["Omega"] = p.Omega_bath;
  r["omega1"] = p.omega1;
  r["omega2"] = p.omega2;
  r["g"] = p.g;
  r["T_B"] = p.T_B;
  r["n10"] = p.n10;
  r["n20"] = p.n20;
  r["engine"] = to_string(c.engine);
  r["matching"] = to_string(c.matching);
  r["coefficients"] = to_string(c.coefficients);
  r["schedule"] = to_string(s.kind);
  if (s.kind == ScheduleKind::regular || s.kind == ScheduleKind::irregular) {
    r["omega_D"] = s.omega_D;
    r["delta"] = s.delta;
    r["tau"] = s.tau;
    r["eta"] = s.eta();
  }
  if (s.kind == ScheduleKind::irregular) {
    r["D_delta"] = s.D_delta;
    r["D_tau"] = s.D_tau;
    r["D_omega"] = s.D_omega;
    r["seed"] = s.seed;
  }
  if (s.kind == ScheduleKind::custom) r["pulses"] = doc.at("pulses");
  r["t_end"] = c.t_end;
  r["samples"] = c.samples;
  r["window"] = {c.window_start, c.window_end};
  if (c.engine != Engine::closed) r["dt"] = c.dt;
  if (c.engine == Engine::discrete_bath) {
    r["bath_modes"] = c.bath_modes;
    r["bath_cutoff"] = c.bath_cutoff;
  }
  r["t_min"] = c.suppression.t_min;
  r["epsilon"] = c.suppression.epsilon;
  c.resolved = std::move(r);
  return c;
}

ScenarioConfig parse_config(const Json& doc) { return resolve(complete_document(doc)); }

ScenarioConfig parse_config_text(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("/", std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

void apply_override(Json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("/", "override '" + assignment + "' is not of the form key=value");
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  Json value;
  try {
    value = Json::parse(text);
  } catch (const nlohmann::json::parse_error&) {
    value = text;
  }
  doc[key] = value;
}

std::string config_hash(const Json& resolved) {
  const std::string s = resolved.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Schedule ScenarioConfig::build_schedule() const {
  const ScheduleSpec& s = schedule;
  const PulseTrain base{s.omega_D, s.delta, s.tau};
  Schedule sch;
  switch (s.kind) {
    case ScheduleKind::free: return free_schedule(t_end);
    case ScheduleKind::custom: return custom_schedule(s.pulses, t_end);
    case ScheduleKind::regular:
      if (s.delta == 0.0) return Schedule(ScheduleKind::regular, {}, t_end, base);
      sch = regular_schedule(s.omega_D, s.delta, s.tau, t_end);
      break;
    case ScheduleKind::irregular:
      if (s.delta == 0.0) return Schedule(ScheduleKind::irregular, {}, t_end, base, s.seed);
      sch = irregular_schedule(base, {s.D_delta, s.D_tau, s.D_omega, s.seed}, t_end);
      break;
  }
  // A zero-amplitude pulse is no pulse: drop it so that omega_D = 0 reduces to free evolution.
  std::vector<Pulse> kept;
  for (const Pulse& pl : sch.pulses())
    if (pl.amplitude != 0.0) kept.push_back(pl);
  if (kept.size() == sch.pulses().size()) return sch;
  return Schedule(sch.kind(), std::move(kept), t_end, base, sch.seed());
}

std::vector<double> ScenarioConfig::grid() const { return uniform_grid(t_end, samples); }

}  // namespace ddosc::scenarios
