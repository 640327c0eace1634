// ddosc: command-line front end for scenario runs, sweeps, control comparisons,
// filter functions and self-validation.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ddosc/errors.hpp"
#include "ddosc/scenarios/config.hpp"
#include "ddosc/scenarios/presets.hpp"
#include "ddosc/scenarios/runner.hpp"
#include "ddosc/scenarios/validate.hpp"

namespace sc = ddosc::scenarios;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Common {
  std::string config;
  std::string preset;
  std::vector<std::string> sets;
  std::string out_dir = "out";
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("-c,--config", c.config, "JSON scenario file");
  cmd->add_option("-p,--preset", c.preset, "named preset (see `ddosc presets list`)");
  cmd->add_option("-s,--set", c.sets, "override a key: key=value (value parsed as JSON)");
  cmd->add_option("-o,--out-dir", c.out_dir, "output directory")->capture_default_str();
}

sc::Json load_document(const Common& c) {
  sc::Json doc = sc::Json::object();
  if (!c.config.empty()) {
    std::ifstream f(c.config);
    if (!f) throw sc::ConfigError("/", "cannot read config file " + c.config);
    std::stringstream ss;
    ss << f.rdbuf();
    try {
      doc = sc::Json::parse(ss.str());
    } catch (const nlohmann::json::parse_error& e) {
      throw sc::ConfigError("/", std::string("malformed JSON in ") + c.config + ": " + e.what());
    }
  }
  if (!c.preset.empty()) doc["preset"] = c.preset;
  for (const auto& s : c.sets) sc::apply_override(doc, s);
  return sc::complete_document(doc);
}

void print_json(const sc::Json& j) { std::cout << j.dump(2) << "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two coupled oscillators in a Lorentzian bath under detuning control"};
  app.set_version_flag("--version", std::string(sc::kToolVersion));
  app.require_subcommand(1);

  Common run_c;
  auto* run = app.add_subcommand("run", "run one scenario, write CSV time series + JSON summary");
  add_common(run, run_c);

  Common sweep_c;
  std::vector<std::string> axes;
  std::size_t cap = 10'000;
  unsigned sweep_workers = 0;
  bool no_run_files = false;
  auto* sweep = app.add_subcommand("sweep", "Cartesian parameter sweep (up to 3 axes)");
  add_common(sweep, sweep_c);
  sweep->add_option("-a,--axis", axes, "sweep axis key=v1,v2,... (replaces preset axes)");
  sweep->add_option("--cap", cap, "maximum number of runs")->capture_default_str();
  sweep->add_option("-j,--workers", sweep_workers, "worker threads (default: $DDOSC_WORKERS or cores)");
  sweep->add_flag("--no-run-files", no_run_files, "write only the aggregate CSV");

  Common cmp_c;
  int n_seeds = 0;
  std::uint64_t first_seed = 1;
  unsigned cmp_workers = 0;
  auto* cmp = app.add_subcommand("compare-dd", "regular vs irregular control over several seeds");
  add_common(cmp, cmp_c);
  cmp->add_option("--seeds", n_seeds, "number of irregular realizations (default: config `seeds`)");
  cmp->add_option("--first-seed", first_seed, "seeds are first-seed, first-seed + 1, ...")
      ->capture_default_str();
  cmp->add_option("-j,--workers", cmp_workers, "worker threads");

  Common flt_c;
  double w_min = -50.0, w_max = 50.0;
  std::size_t points = 2001;
  auto* flt = app.add_subcommand("filter", "filter function F(omega) of the configured schedule");
  add_common(flt, flt_c);
  flt->add_option("--omega-min", w_min)->capture_default_str();
  flt->add_option("--omega-max", w_max)->capture_default_str();
  flt->add_option("--points", points)->capture_default_str();

  std::string level = "fast", report_path, fault;
  auto* val = app.add_subcommand("validate", "self-check against independent oracles");
  val->add_option("--level", level, "fast | full")
      ->check(CLI::IsMember({"fast", "full"}))
      ->capture_default_str();
  val->add_option("--report", report_path, "also write the JSON report to this file");
  val->add_option("--inject-fault", fault, "test hook: corrupt-root")
      ->check(CLI::IsMember({"corrupt-root"}));

  auto* presets = app.add_subcommand("presets", "list or show scenario presets");
  presets->require_subcommand(1);
  presets->add_subcommand("list", "list preset names");
  std::string show_name;
  auto* show = presets->add_subcommand("show", "print a preset document");
  show->add_option("name", show_name)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) {
      sc::Json doc = load_document(run_c);
      if (doc.contains("sweep")) {
        std::cerr << "note: sweep axes ignored by `run`; use `ddosc sweep`\n";
        doc.erase("sweep");
      }
      const auto cfg = sc::resolve(doc);
      print_json(sc::run_scenario(cfg, run_c.out_dir));
    } else if (*sweep) {
      sc::Json doc = load_document(sweep_c);
      if (!axes.empty()) {
        sc::Json sw = sc::Json::object();
        for (const auto& a : axes) {
          const auto eq = a.find('=');
          if (eq == std::string::npos || eq == 0)
            throw sc::ConfigError("/sweep", "axis '" + a + "' is not of the form key=v1,v2,...");
          sc::Json values = sc::Json::array();
          std::stringstream ss(a.substr(eq + 1));
          for (std::string item; std::getline(ss, item, ',');) {
            try {
              values.push_back(sc::Json::parse(item));
            } catch (const nlohmann::json::parse_error&) {
              values.push_back(item);
            }
          }
          sw[a.substr(0, eq)] = values;
        }
        doc["sweep"] = sw;
      }
      sc::SweepOptions so;
      so.cap = cap;
      so.workers = sweep_workers;
      so.write_runs = !no_run_files;
      const auto res = sc::run_sweep(doc, sweep_c.out_dir, so);
      std::cout << res.aggregate_csv;
    } else if (*cmp) {
      const sc::Json doc = load_document(cmp_c);
      auto [reg, irr] = sc::compare_pair(doc);
      const int n = n_seeds > 0 ? n_seeds : irr.seeds;
      std::vector<std::uint64_t> seeds;
      for (int k = 0; k < n; ++k) seeds.push_back(first_seed + static_cast<std::uint64_t>(k));
      const auto rep = sc::compare_dd(reg, irr, seeds, cmp_workers);
      const fs::path dir = cmp_c.out_dir;
      std::string n1 = "t,n1_regular,n1_irregular_mean\n";
      for (std::size_t k = 0; k < rep.times.size(); ++k)
        n1 += sc::fmt12(rep.times[k]) + "," + sc::fmt12(rep.n1_regular[k]) + "," +
              sc::fmt12(rep.n1_irregular_mean[k]) + "\n";
      std::string S = "t,S_regular,S_irregular_mean\n";
      for (std::size_t k = 0; k < rep.S_times.size(); ++k)
        S += sc::fmt12(rep.S_times[k]) + "," + sc::fmt12(rep.S_regular[k]) + "," +
             sc::fmt12(rep.S_irregular_mean[k]) + "\n";
      sc::write_atomic(dir / (reg.name + "_compare_n1.csv"), n1);
      sc::write_atomic(dir / (reg.name + "_compare_S.csv"), S);
      sc::Json j = rep.to_json();
      j["config"] = reg.resolved;
      j["irregular"] = {{"D_delta", irr.schedule.D_delta},
                        {"D_tau", irr.schedule.D_tau},
                        {"D_omega", irr.schedule.D_omega}};
      j["tool_version"] = sc::kToolVersion;
      sc::write_atomic(dir / (reg.name + "_compare.json"), j.dump(2) + "\n");
      print_json(j);
    } else if (*flt) {
      sc::Json doc = load_document(flt_c);
      doc.erase("sweep");
      const auto cfg = sc::resolve(doc);
      const auto csv = sc::filter_csv(cfg, w_min, w_max, points);
      const fs::path out = fs::path(flt_c.out_dir) / (cfg.name + "_filter.csv");
      sc::write_atomic(out, csv);
      std::cout << out.string() << "\n";
    } else if (*val) {
      sc::ValidateOptions vo;
      vo.level = level == "full" ? sc::ValidateLevel::full : sc::ValidateLevel::fast;
      vo.corrupt_root = (fault == "corrupt-root");
      const auto rep = sc::validate(vo);
      const auto j = rep.to_json();
      if (!report_path.empty()) sc::write_atomic(report_path, j.dump(2) + "\n");
      print_json(j);
      return rep.passed() ? kExitOk : kExitNumerical;
    } else if (*presets) {
      if (!show_name.empty()) {
        print_json(sc::preset(show_name));
      } else {
        for (const auto& n : sc::preset_names()) {
          const auto& p = sc::preset(n);
          std::cout << n << "\t" << p.value("description", "") << "\n";
        }
      }
    }
  } catch (const sc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ddosc::ParameterError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ddosc::ContractError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ddosc::PhysicalityError& e) {
    std::cerr << "physicality error at t = " << e.time() << ": " << e.what() << "\n";
    return kExitNumerical;
  } catch (const ddosc::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const ddosc::DomainError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
