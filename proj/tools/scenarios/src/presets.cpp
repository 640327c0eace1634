#include "ddosc/scenarios/presets.hpp"

#include <map>

namespace ddosc::scenarios {

namespace {

// Direct coupling g is not fixed by the figure parameter sets; 0.1 is the shipped
// default and is kept explicit in every preset.
const std::map<std::string, Json>& table() {
  static const std::map<std::string, Json> presets = [] {
    std::map<std::string, Json> m;
    m["fig3"] = Json::parse(R"({
      "description": "Markovian free evolution (short memory): smooth relaxation",
      "Gamma": 1.0, "gamma": 15.0, "Omega": 1.0, "omega1": 1.0, "omega2": 1.0, "g": 0.1,
      "T_B": 1.0, "schedule": "free", "t_end": 20.0, "samples": 2001,
      "sweep": {"T_B": [0.5, 1.0, 2.0]}})");
    m["fig4"] = Json::parse(R"({
      "description": "Non-Markovian free evolution (long memory): revivals and backflow",
      "Gamma": 15.0, "gamma": 1.0, "Omega": 1.0, "omega1": 1.0, "omega2": 1.0, "g": 0.1,
      "T_B": 1.0, "schedule": "free", "t_end": 20.0, "samples": 2001,
      "sweep": {"T_B": [0.5, 1.0, 2.0]}})");
    m["fig5"] = Json::parse(R"({
      "description": "Free evolution versus bath spectral width at T_B = 1",
      "Gamma": 5.0, "gamma": 1.0, "Omega": 1.0, "omega1": 1.0, "omega2": 1.0, "g": 0.1,
      "T_B": 1.0, "schedule": "free", "t_end": 30.0, "samples": 3001,
      "sweep": {"gamma": [0.1, 0.5, 1.0, 5.0]}})");
    m["fig6a"] = Json::parse(R"({
      "description": "Inter-mode coherence, long memory",
      "Gamma": 1.0, "gamma": 0.01, "Omega": 1.0, "omega1": 1.0, "omega2": 1.0, "g": 0.1,
      "T_B": 1.0, "schedule": "free", "t_end": 50.0, "samples": 5001, "window": [5.0, 50.0]})");
    m["fig6b"] = Json::parse(R"({
      "description": "Inter-mode coherence, short memory",
      "Gamma": 1.0, "gamma": 15.0, "Omega": 1.0, "omega1": 1.0, "omega2": 1.0, "g": 0.1,
      "T_B": 1.0, "schedule": "free", "t_end": 50.0, "samples": 5001, "window": [5.0, 50.0]})");
    m["fig7"] = Json::parse(R"({
      "description": "Detuning amplitude sweep at full duty cycle",
      "Gamma": 15.0, "gamma": 1.0, "Omega": 1.0, "omega1": 1.0, "omega2": 1.0, "g": 0.1,
      "T_B": 1.0, "schedule": "regular", "omega_D": 25.0, "eta": 1.0, "tau": 0.27,
      "t_end": 20.0, "samples": 2001, "window": [5.0, 20.0],
      "sweep": {"omega_D": [5.0, 15.0, 20.0, 25.0], "T_B": [0.5, 1.0, 2.0]}})");
    m["fig8"] = Json::parse(R"({
      "description": "Duty-cycle sweep at omega_D = 25 for three temperatures",
      "Gamma": 15.0, "gamma": 1.0, "Omega": 1.0, "omega1": 1.0, "omega2": 1.0, "g": 0.1,
      "T_B": 1.0, "schedule": "regular", "omega_D": 25.0, "eta": 0.9, "tau": 0.27,
      "t_end": 20.0, "samples": 2001, "window": [5.0, 20.0],
      "sweep": {"eta": [0.5, 0.75, 0.9, 0.95], "T_B": [0.5, 1.0, 2.0]}})");
    m["fig9"] = Json::parse(R"({
      "description": "Duty-cycle sweep at omega_D = 25, T_B = 1",
      "Gamma": 15.0, "gamma": 1.0, "Omega": 1.0, "omega1": 1.0, "omega2": 1.0, "g": 0.1,
      "T_B": 1.0, "schedule": "regular", "omega_D": 25.0, "eta": 0.9, "tau": 0.27,
      "t_end": 20.0, "samples": 2001, "window": [5.0, 20.0],
      "sweep": {"eta": [0.0, 0.5, 0.75, 0.9, 0.95]}})");
    m["fig10"] = Json::parse(R"({
      "description": "Regular versus irregular control, +-20% jitter in delta, tau, omega_D",
      "Gamma": 15.0, "gamma": 1.0, "Omega": 1.0, "omega1": 1.0, "omega2": 1.0, "g": 0.1,
      "T_B": 1.0, "schedule": "regular", "omega_D": 30.0, "eta": 0.2, "tau": 0.27,
      "jitter": 0.2, "seed": 1, "seeds": 10,
      "t_end": 20.0, "samples": 2001, "window": [5.0, 20.0],
      "sweep": {"eta": [0.2, 0.5, 0.98]}})");
    m["fig11a"] = Json::parse(R"({
      "description": "Suppression factor, regular control at omega_D = 25, tau = 0.27",
      "Gamma": 15.0, "gamma": 1.0, "Omega": 1.0, "omega1": 1.0, "omega2": 1.0, "g": 0.1,
      "T_B": 1.0, "schedule": "regular", "omega_D": 25.0, "eta": 0.9, "tau": 0.27,
      "t_end": 20.0, "samples": 2001, "window": [5.0, 20.0],
      "sweep": {"eta": [0.3, 0.9]}})");
    m["fig11b"] = Json::parse(R"({
      "description": "Suppression factor, irregular control at omega_D = 30",
      "Gamma": 15.0, "gamma": 1.0, "Omega": 1.0, "omega1": 1.0, "omega2": 1.0, "g": 0.1,
      "T_B": 1.0, "schedule": "irregular", "omega_D": 30.0, "eta": 0.9, "tau": 0.27,
      "jitter": 0.2, "seed": 1, "seeds": 10,
      "t_end": 20.0, "samples": 2001, "window": [5.0, 20.0],
      "sweep": {"eta": [0.3, 0.9]}})");
    return m;
  }();
  return presets;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [k, v] : table()) names.push_back(k);
  return names;
}

const Json& preset(const std::string& name) {
  const auto& t = table();
  auto it = t.find(name);
  if (it == t.end()) throw ConfigError("/preset", "unknown preset '" + name + "'");
  return it->second;
}

}  // namespace ddosc::scenarios
