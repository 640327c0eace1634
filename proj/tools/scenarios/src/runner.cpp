#include "ddosc/scenarios/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include <unistd.h>

#include "ddosc/errors.hpp"

namespace ddosc::scenarios {

namespace fs = std::filesystem;

std::string fmt12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

namespace {

Trajectory run_engine(const ScenarioConfig& cfg, const Schedule& s, std::span<const double> grid,
                      std::vector<double>* bath_norm) {
  switch (cfg.engine) {
    case Engine::closed: {
      PropagateOptions o;
      o.coefficients = cfg.coefficients;
      o.fallback_step = cfg.dt;
      return propagate(cfg.params, s, cfg.matching, grid, o);
    }
    case Engine::kernel:
      return integrate_kernel(cfg.params, s, grid, {cfg.dt});
    case Engine::discrete_bath: {
      auto r = integrate_discrete_bath(cfg.params, s, grid,
                                       {cfg.bath_modes, cfg.bath_cutoff, cfg.dt});
      if (bath_norm) *bath_norm = std::move(r.norm);
      return std::move(r.trajectory);
    }
  }
  throw ContractError("unknown engine");
}

// Runs `n` jobs on up to `workers` threads; rethrows the first failure by index.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& job) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        job(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned w = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n)));
  if (w == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < w; ++k) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::string axis_label(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) return fmt12(v.get<double>());
  return v.dump();
}

ScenarioConfig free_variant(const ScenarioConfig& cfg) {
  ScenarioConfig f = cfg;
  f.schedule = ScheduleSpec{};
  f.schedule.kind = ScheduleKind::free;
  return f;
}

}  // namespace

RunResult execute(const ScenarioConfig& cfg) {
  RunResult r;
  r.config = cfg;
  r.schedule = cfg.build_schedule();
  const auto grid = cfg.grid();
  r.trajectory = run_engine(cfg, r.schedule, grid, &r.bath_norm);
  r.observables = observables(r.trajectory, cfg.params);

  if (!r.schedule.pulses().empty()) {
    const ScenarioConfig fc = free_variant(cfg);
    const Schedule fs = fc.build_schedule();
    const Trajectory ft = run_engine(fc, fs, grid, nullptr);
    const ObservableSeries fo = observables(ft, cfg.params);
    r.suppression = suppression(r.observables, fo, cfg.suppression);
  }

  const ObservableSeries& o = r.observables;
  TrendReport tr = trend_checks(o);
  Json s;
  s["window"] = {cfg.window_start, cfg.window_end};
  s["window_avg_n1"] = window_average(o.times, o.n1, cfg.window_start, cfg.window_end);
  s["window_avg_n2"] = window_average(o.times, o.n2, cfg.window_start, cfg.window_end);
  s["final_n1"] = o.n1.back();
  s["final_n2"] = o.n2.back();
  s["n_B"] = thermal_occupation(cfg.params.Omega_bath, cfg.params.T_B);
  s["revival_count"] = tr.revival_count;
  s["monotonic_rise"] = tr.monotonic_rise;
  s["monotonic_relaxation"] = tr.monotonic_relaxation;
  s["witness_max"] = tr.witness_max;
  double drift = 0.0;
  if (!r.bath_norm.empty()) {
    for (double n : r.bath_norm) drift = std::max(drift, std::abs(n - 1.0));
  } else {
    for (std::size_t k = 0; k < o.times.size(); ++k)
      drift = std::max(drift, o.abs_A1_sq[k] + o.abs_A2_sq[k] - 1.0);
  }
  s["norm_drift"] = drift;
  if (r.suppression) {
    const auto& S = *r.suppression;
    bool any = false;
    for (double t : S.times) any = any || (t >= cfg.window_start && t <= cfg.window_end);
    s["suppression_window_avg"] =
        any ? Json(window_average(S, cfg.window_start, cfg.window_end)) : Json(nullptr);
    s["suppression_skipped"] = S.skipped;
    s["suppression_clipped"] = S.clipped;
  }
  r.summary = std::move(s);
  return r;
}

Json run_record(const RunResult& r, const std::vector<std::string>& files) {
  Json rec;
  rec["name"] = r.config.name;
  rec["config_hash"] = config_hash(r.config.resolved);
  const Provenance& p = r.trajectory.provenance;
  Json prov;
  prov["engine"] = to_string(p.engine);
  prov["matching"] = to_string(r.config.matching);
  prov["coefficients"] = to_string(r.config.coefficients);
  prov["schedule"] = p.schedule;
  prov["seed"] = p.seed ? Json(*p.seed) : Json(nullptr);
  prov["fallback_segments"] = p.fallback_segments;
  prov["companion_roots"] = p.companion_roots;
  prov["tool_version"] = kToolVersion;
  rec["provenance"] = prov;
  rec["files"] = files;
  rec["summary"] = r.summary;
  rec["config"] = r.config.resolved;
  return rec;
}

std::string timeseries_csv(const RunResult& r) {
  std::string out = "t,n1,n2,re_coh,im_coh,abs_A1_sq,abs_A2_sq,detuning\n";
  const auto& o = r.observables;
  out.reserve(out.size() + o.times.size() * 120);
  for (std::size_t k = 0; k < o.times.size(); ++k) {
    const double t = o.times[k];
    const double d = detuning_at(r.schedule, std::clamp(t, 0.0, r.schedule.horizon()));
    for (double v : {t, o.n1[k], o.n2[k], o.coherence[k].real(), o.coherence[k].imag(),
                     o.abs_A1_sq[k], o.abs_A2_sq[k]}) {
      out += fmt12(v);
      out += ',';
    }
    out += fmt12(d);
    out += '\n';
  }
  return out;
}

void write_atomic(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ostringstream suffix;
  suffix << ".tmp." << ::getpid() << '.' << std::hash<std::thread::id>{}(std::this_thread::get_id());
  const fs::path tmp = path.string() + suffix.str();
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    f << text;
    if (!f) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

Json run_scenario(const ScenarioConfig& cfg, const fs::path& out_dir, const std::string& stem) {
  const RunResult r = execute(cfg);
  const std::string base = stem.empty() ? cfg.name : stem;
  const fs::path csv = out_dir / (base + ".csv");
  const fs::path js = out_dir / (base + ".json");
  write_atomic(csv, timeseries_csv(r));
  Json rec = run_record(r, {csv.filename().string(), js.filename().string()});
  write_atomic(js, rec.dump(2) + "\n");
  return rec;
}

unsigned resolve_workers(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("DDOSC_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<std::pair<std::vector<Json>, ScenarioConfig>> expand_sweep(const Json& doc,
                                                                       std::size_t cap) {
  const ScenarioConfig base = resolve(doc);
  std::size_t total = 1;
  for (const auto& a : base.sweep) {
    total *= a.values.size();
    if (total > cap)
      throw ConfigError("/sweep", "sweep expands beyond the cap of " + std::to_string(cap) +
                                      " runs");
  }
  std::vector<std::pair<std::vector<Json>, ScenarioConfig>> out;
  out.reserve(total);
  std::vector<std::size_t> idx(base.sweep.size(), 0);
  for (std::size_t n = 0; n < total; ++n) {
    Json d = doc;
    d.erase("sweep");
    std::vector<Json> point;
    std::string suffix;
    for (std::size_t a = 0; a < base.sweep.size(); ++a) {
      const Json& v = base.sweep[a].values[idx[a]];
      // eta and delta describe the same quantity; the swept one wins.
      if (base.sweep[a].key == "eta") d.erase("delta");
      if (base.sweep[a].key == "delta") d.erase("eta");
      d[base.sweep[a].key] = v;
      point.push_back(v);
    }
    ScenarioConfig c = resolve(d);
    out.emplace_back(std::move(point), std::move(c));
    for (std::size_t a = base.sweep.size(); a-- > 0;) {  // first axis slowest
      if (++idx[a] < base.sweep[a].values.size()) break;
      idx[a] = 0;
    }
  }
  return out;
}

SweepResult run_sweep(const Json& doc, const fs::path& out_dir, const SweepOptions& opts) {
  auto runs = expand_sweep(doc, opts.cap);
  const ScenarioConfig base = resolve(doc);
  SweepResult res;
  res.axes = base.sweep;
  res.records.resize(runs.size());
  const std::string name = base.name;

  parallel_for(runs.size(), resolve_workers(opts.workers), [&](std::size_t i) {
    char stem[32];
    std::snprintf(stem, sizeof stem, "run_%04zu", i);
    if (opts.write_runs) {
      res.records[i] = run_scenario(runs[i].second, out_dir / name, stem);
    } else {
      res.records[i] = run_record(execute(runs[i].second), {});
    }
  });

  std::string csv;
  for (const auto& a : res.axes) csv += a.key + ",";
  csv +=
      "window_avg_n1,window_avg_n2,final_n1,final_n2,revival_count,monotonic_rise,"
      "monotonic_relaxation,witness_max,norm_drift,suppression_window_avg,config_hash\n";
  for (std::size_t i = 0; i < runs.size(); ++i) {
    res.points.push_back(runs[i].first);
    for (const auto& v : runs[i].first) csv += axis_label(v) + ",";
    const Json& s = res.records[i]["summary"];
    for (const char* k : {"window_avg_n1", "window_avg_n2", "final_n1", "final_n2"})
      csv += fmt12(s[k].get<double>()) + ",";
    csv += std::to_string(s["revival_count"].get<int>()) + ",";
    csv += std::string(s["monotonic_rise"].get<bool>() ? "true" : "false") + ",";
    csv += std::string(s["monotonic_relaxation"].get<bool>() ? "true" : "false") + ",";
    csv += fmt12(s["witness_max"].get<double>()) + ",";
    csv += fmt12(s["norm_drift"].get<double>()) + ",";
    const bool has_s = s.contains("suppression_window_avg") && s["suppression_window_avg"].is_number();
    csv += (has_s ? fmt12(s["suppression_window_avg"].get<double>()) : std::string()) + ",";
    csv += res.records[i]["config_hash"].get<std::string>() + "\n";
  }
  res.aggregate_csv = std::move(csv);
  write_atomic(out_dir / (name + "_sweep.csv"), res.aggregate_csv);
  return res;
}

std::pair<ScenarioConfig, ScenarioConfig> compare_pair(const Json& doc) {
  Json reg = doc, irr = doc;
  reg.erase("sweep");
  irr.erase("sweep");
  reg["schedule"] = "regular";
  irr["schedule"] = "irregular";
  for (const char* k : {"jitter", "D_delta", "D_tau", "D_omega", "seed"}) reg.erase(k);
  return {resolve(reg), resolve(irr)};
}

CompareReport compare_dd(const ScenarioConfig& regular, const ScenarioConfig& irregular,
                         const std::vector<std::uint64_t>& seeds, unsigned workers) {
  const PhysicalParams& a = regular.params;
  const PhysicalParams& b = irregular.params;
  if (a.Gamma != b.Gamma || a.gamma_bath != b.gamma_bath || a.Omega_bath != b.Omega_bath ||
      a.omega1 != b.omega1 || a.omega2 != b.omega2 || a.g != b.g || a.T_B != b.T_B ||
      a.n10 != b.n10 || a.n20 != b.n20)
    throw ContractError("compare_dd: regular and irregular runs use different physical parameters");
  if (regular.t_end != irregular.t_end || regular.samples != irregular.samples)
    throw ContractError("compare_dd: regular and irregular runs use different grids");
  if (std::abs(regular.schedule.eta() - irregular.schedule.eta()) > 1e-12)
    throw ContractError("compare_dd: nominal duty cycles differ");
  if (seeds.empty()) throw ContractError("compare_dd: need at least one seed");

  const auto grid = regular.grid();
  const ScenarioConfig fc = free_variant(regular);
  const ObservableSeries free_obs =
      observables(run_engine(fc, fc.build_schedule(), grid, nullptr), a);

  auto single = [&](const ScenarioConfig& c) {
    const ObservableSeries o = observables(run_engine(c, c.build_schedule(), grid, nullptr), a);
    return std::make_pair(o, suppression(o, free_obs, c.suppression));
  };

  CompareReport rep;
  const auto [reg_obs, reg_S] = single(regular);
  rep.times = reg_obs.times;
  rep.n1_regular = reg_obs.n1;
  rep.S_times = reg_S.times;
  rep.S_regular = reg_S.S;
  rep.regular_window_avg =
      window_average(reg_obs.times, reg_obs.n1, regular.window_start, regular.window_end);

  std::vector<std::pair<ObservableSeries, SuppressionSeries>> irr(seeds.size());
  parallel_for(seeds.size(), resolve_workers(workers), [&](std::size_t i) {
    ScenarioConfig c = irregular;
    c.schedule.seed = seeds[i];
    irr[i] = single(c);
  });

  rep.seeds = seeds;
  rep.n1_irregular_mean.assign(rep.times.size(), 0.0);
  rep.S_irregular_mean.assign(rep.S_times.size(), 0.0);
  const double inv = 1.0 / static_cast<double>(seeds.size());
  for (const auto& [o, S] : irr) {
    const double w = window_average(o.times, o.n1, irregular.window_start, irregular.window_end);
    rep.irregular_window_avg.push_back(w);
    rep.irregular_mean += w * inv;
    for (std::size_t k = 0; k < o.n1.size(); ++k) rep.n1_irregular_mean[k] += o.n1[k] * inv;
    // The free reference fixes which points are skipped, so all S series share one grid.
    for (std::size_t k = 0; k < S.S.size(); ++k) rep.S_irregular_mean[k] += S.S[k] * inv;
  }
  rep.gap = rep.regular_window_avg - rep.irregular_mean;
  return rep;
}

Json CompareReport::to_json() const {
  Json j;
  j["regular_window_avg_n1"] = regular_window_avg;
  j["irregular_window_avg_n1_mean"] = irregular_mean;
  j["gap_regular_minus_irregular"] = gap;
  Json per = Json::array();
  for (std::size_t i = 0; i < seeds.size(); ++i)
    per.push_back({{"seed", seeds[i]}, {"window_avg_n1", irregular_window_avg[i]}});
  j["irregular_per_seed"] = per;
  return j;
}

std::string filter_csv(const ScenarioConfig& cfg, double omega_min, double omega_max,
                       std::size_t points) {
  if (!(omega_max > omega_min)) throw ConfigError("/omega", "need omega_min < omega_max");
  if (points < 2) throw ConfigError("/points", "need at least 2 points");
  const Schedule s = cfg.build_schedule();
  std::string out = "omega,F\n";
  for (std::size_t k = 0; k < points; ++k) {
    const double w =
        omega_min + (omega_max - omega_min) * static_cast<double>(k) / static_cast<double>(points - 1);
    out += fmt12(w) + "," + fmt12(filter_function(s, w, cfg.t_end)) + "\n";
  }
  return out;
}

}  // namespace ddosc::scenarios
