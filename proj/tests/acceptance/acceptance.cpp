// Acceptance suite: one PASS/FAIL line per criterion. Tolerances are fixed here.
//
//   acceptance                 run all criteria
//   acceptance --criterion N   run criterion N only
//
// Exit status is 0 iff every criterion that ran passed.

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "ddosc/closed_propagator.hpp"
#include "ddosc/observables.hpp"
#include "ddosc/oracle.hpp"
#include "ddosc/quartic.hpp"
#include "ddosc/scenarios/config.hpp"
#include "ddosc/scenarios/runner.hpp"

using namespace ddosc;
namespace sc = ddosc::scenarios;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string f(const char* fmt, ...) __attribute__((format(printf, 1, 2)));
std::string f(const char* fmt, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

sc::ScenarioConfig preset(const std::string& name, const sc::Json& overrides = sc::Json::object()) {
  sc::Json doc{{"preset", name}};
  for (const auto& [k, v] : overrides.items()) doc[k] = v;
  doc = sc::complete_document(doc);
  doc.erase("sweep");
  return sc::resolve(doc);
}

std::vector<sc::ScenarioConfig> preset_axis(const std::string& name, const std::string& key,
                                            const std::vector<double>& values) {
  std::vector<sc::ScenarioConfig> out;
  for (double v : values) {
    sc::Json o{{key, v}};
    out.push_back(preset(name, o));
  }
  return out;
}

ObservableSeries closed_observables(const sc::ScenarioConfig& c) {
  const auto grid = c.grid();
  return observables(propagate(c.params, c.build_schedule(), c.matching, grid), c.params);
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

std::string join(const std::vector<double>& v, const char* fmt = "%.6g") {
  std::string s;
  for (double x : v) s += (s.empty() ? "" : ", ") + f(fmt, x);
  return "[" + s + "]";
}

// ---------------------------------------------------------------------------

Outcome quartic_suite() {
  constexpr int kCount = 1000;
  constexpr double kResidualTol = 1e-9, kVietaTol = 1e-8, kPairTol = 1e-8, kTimeLimit = 5.0;
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(424242);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double res = 0.0, vieta = 0.0, pair = 0.0;
  for (int i = 0; i < kCount; ++i) {
    const auto q = QuarticCoeffs::from_monic({u(rng), u(rng)}, {u(rng), u(rng)}, {u(rng), u(rng)},
                                             {u(rng), u(rng)});
    const RootSet rs = solve_quartic(q);
    const auto& r = rs.roots;
    for (const cplx& l : r) res = std::max(res, normalized_residual(q, l));
    const cplx sum = r[0] + r[1] + r[2] + r[3];
    const cplx prod = r[0] * r[1] * r[2] * r[3];
    double abs_sum = 0.0, abs_prod = 1.0;
    for (const cplx& l : r) {
      abs_sum += std::abs(l);
      abs_prod *= std::abs(l);
    }
    vieta = std::max(vieta, std::abs(sum + q.A) / std::max({std::abs(q.A), abs_sum, 1e-300}));
    vieta = std::max(vieta, std::abs(prod - q.D) / std::max({std::abs(q.D), abs_prod, 1e-300}));
    // Independent oracle: eigenvalues of the companion matrix, optimal assignment.
    pair = std::max(pair, pairing_distance(r, companion_roots(q.A, q.B, q.C, q.D)));
  }
  const double secs = seconds_since(t0);
  const bool ok = res <= kResidualTol && vieta <= kVietaTol && pair <= kPairTol && secs < kTimeLimit;
  return {ok, f("residual=%.2e (<=%.0e) vieta=%.2e (<=%.0e) pairing=%.2e (<=%.0e) time=%.2fs (<%.0fs)",
                res, kResidualTol, vieta, kVietaTol, pair, kPairTol, secs, kTimeLimit)};
}

Outcome oracle_equivalence() {
  constexpr double kTol = 1e-5, kDt = 1e-3, kTimeLimit = 10.0;
  const auto t0 = std::chrono::steady_clock::now();
  std::string detail;
  bool ok = true;
  for (const char* name : {"fig3", "fig4"}) {
    const auto c = preset(name, {{"T_B", 1.0}, {"g", 0.1}, {"t_end", 20.0}});
    const auto grid = c.grid();
    const auto closed = closed_observables(c);
    const auto rk4 = observables(integrate_kernel(c.params, c.build_schedule(), grid, {kDt}), c.params);
    const double dev = max_abs_diff(closed.n1, rk4.n1);
    ok = ok && dev <= kTol;
    detail += f("%s max|dn1|=%.2e ", name, dev);
  }
  const double secs = seconds_since(t0);
  ok = ok && secs < kTimeLimit;
  return {ok, detail + f("(<=%.0e) time=%.2fs (<%.0fs)", kTol, secs, kTimeLimit)};
}

Outcome discrete_bath() {
  constexpr double kNormTol = 1e-4, kN1Tol = 2e-2, kTimeLimit = 120.0;
  const auto t0 = std::chrono::steady_clock::now();
  const auto c = preset("fig4", {{"t_end", 20.0}, {"samples", 201}});
  const auto grid = c.grid();
  const auto run = integrate_discrete_bath(c.params, c.build_schedule(), grid, {4001, 40.0, 1e-3});
  double drift = 0.0;
  for (double n : run.norm) drift = std::max(drift, std::abs(n - 1.0));
  const double dev = max_abs_diff(observables(run.trajectory, c.params).n1, closed_observables(c).n1);
  const double secs = seconds_since(t0);
  const bool ok = drift <= kNormTol && dev <= kN1Tol && secs < kTimeLimit;
  return {ok, f("max|norm-1|=%.2e (<=%.0e) max|dn1|=%.2e (<=%.0e) time=%.1fs (<%.0fs)", drift,
                kNormTol, dev, kN1Tol, secs, kTimeLimit)};
}

Outcome regime_dichotomy() {
  bool markov_ok = true;
  std::string detail = "fig3:";
  for (double T : {0.5, 1.0, 2.0}) {
    const TrendReport m = trend_checks(closed_observables(preset("fig3", {{"T_B", T}})));
    markov_ok = markov_ok && m.monotonic_rise && m.revival_count == 0;
    detail += f(" T_B=%g monotonic_rise=%s revival_count=%d [monotonic_relaxation=%s];", T,
                m.monotonic_rise ? "true" : "false", m.revival_count,
                m.monotonic_relaxation ? "true" : "false");
  }
  TrendOptions win;
  win.revival_window_end = 10.0;
  const TrendReport n = trend_checks(closed_observables(preset("fig4")), win);
  const bool ok = markov_ok && n.revival_count >= 2;
  return {ok, detail + f(" (need monotonic_rise=true, revival_count=0); fig4: revival_count[0,10]=%d "
                         "(need >=2)",
                         n.revival_count)};
}

Outcome thermalization() {
  constexpr double kTol = 5e-2;
  const double nB = 1.0 / (std::exp(1.0) - 1.0);
  bool ok = true;
  std::string detail = f("n_B=%.6f ", nB);
  for (const char* name : {"fig3", "fig4"}) {
    const auto c = preset(name, {{"T_B", 1.0}, {"t_end", 30.0}, {"samples", 3001}});
    const auto o = closed_observables(c);
    const double d1 = std::abs(o.n1.back() - nB), d2 = std::abs(o.n2.back() - nB);
    ok = ok && d1 <= kTol && d2 <= kTol;
    detail += f("%s: n1(30)=%.4f n2(30)=%.4f max dev=%.3f; ", name, o.n1.back(), o.n2.back(),
                std::max(d1, d2));
  }
  return {ok, detail + f("(<=%.0e)", kTol)};
}

Outcome spectral_width() {
  const std::vector<double> gammas{0.1, 0.5, 1.0, 5.0};
  std::vector<double> counts;
  for (const auto& c : preset_axis("fig5", "gamma", gammas))
    counts.push_back(trend_checks(closed_observables(c)).revival_count);
  bool ok = true;
  for (std::size_t k = 1; k < counts.size(); ++k) ok = ok && counts[k] <= counts[k - 1];
  return {ok, "gamma=" + join(gammas) + " revival_count=" + join(counts, "%.0f") +
                  " (need nonincreasing)"};
}

std::vector<double> window_n1(const std::vector<sc::ScenarioConfig>& cfgs) {
  std::vector<double> w;
  for (const auto& c : cfgs) {
    const auto o = closed_observables(c);
    w.push_back(window_average(o.times, o.n1, 5.0, 20.0));
  }
  return w;
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t k = 1; k < v.size(); ++k)
    if (!(v[k] < v[k - 1])) return false;
  return true;
}

Outcome amplitude_trend() {
  const std::vector<double> wd{5.0, 15.0, 20.0, 25.0};
  const auto w = window_n1(preset_axis("fig7", "omega_D", wd));
  return {strictly_decreasing(w),
          "omega_D=" + join(wd) + " eta=1 window-avg n1[5,20]=" + join(w) + " (need strictly decreasing)"};
}

Outcome duty_trend() {
  const std::vector<double> eta{0.0, 0.5, 0.75, 0.9, 0.95};
  const auto w = window_n1(preset_axis("fig9", "eta", eta));
  return {strictly_decreasing(w),
          "eta=" + join(eta) + " omega_D=25 window-avg n1[5,20]=" + join(w) + " (need strictly decreasing)"};
}

Outcome regular_vs_irregular() {
  constexpr int kSeeds = 10;
  constexpr double kGapTol = 0.05;
  std::vector<std::uint64_t> seeds;
  for (int s = 1; s <= kSeeds; ++s) seeds.push_back(static_cast<std::uint64_t>(s));
  auto report = [&](double eta) {
    sc::Json doc = sc::complete_document({{"preset", "fig10"}, {"eta", eta}});
    auto [reg, irr] = sc::compare_pair(doc);
    return sc::compare_dd(reg, irr, seeds, 1);
  };
  const auto lo = report(0.2);
  const auto hi = report(0.98);
  const bool ok = lo.irregular_mean >= lo.regular_window_avg && std::abs(hi.gap) <= kGapTol;
  return {ok, f("%d seeds; eta=0.2: irregular=%.6f regular=%.6f (need irregular >= regular); "
                "eta=0.98: |gap|=%.2e (<=%.2f)",
                kSeeds, lo.irregular_mean, lo.regular_window_avg, std::abs(hi.gap), kGapTol)};
}

Outcome suppression_shape() {
  constexpr double kSettle = 5e-2, kDrift = 5e-2;
  bool ok = true;
  std::string detail;
  double max_S = -1e300, max_settled = 0.0, lobe = -1e300;
  std::size_t settled_points = 0;
  for (const char* name : {"fig11a", "fig11b"}) {
    for (double eta : {0.3, 0.9}) {
      const auto c = preset(name, {{"eta", eta}});
      const auto dd = closed_observables(c);
      sc::ScenarioConfig fc = c;
      fc.schedule = sc::ScheduleSpec{};
      const auto fr = closed_observables(fc);
      const auto S = suppression(dd, fr, c.suppression);
      const double nB = thermal_occupation(c.params.Omega_bath, c.params.T_B);
      for (double s : S.S) max_S = std::max(max_S, s);
      if (std::string(name) == "fig11a" && eta == 0.9)
        for (double s : S.S) lobe = std::max(lobe, s);
      // Suffix of the grid where both runs stay within kSettle of n_B.
      std::size_t first = dd.times.size();
      for (std::size_t k = dd.times.size(); k-- > 0;) {
        if (std::abs(dd.n1[k] - nB) > kSettle || std::abs(fr.n1[k] - nB) > kSettle) break;
        first = k;
      }
      const double t_settle = first < dd.times.size() ? dd.times[first] : 1e300;
      for (std::size_t k = 0; k < S.times.size(); ++k) {
        if (S.times[k] >= t_settle) {
          max_settled = std::max(max_settled, std::abs(S.S[k]));
          ++settled_points;
        }
      }
    }
  }
  // Control: identical runs give S = 0 exactly.
  const auto c = preset("fig11a");
  const auto o = closed_observables(c);
  const auto zero = suppression(o, o, c.suppression);
  bool exact_zero = !zero.S.empty();
  for (double s : zero.S) exact_zero = exact_zero && s == 0.0;

  ok = max_S <= 1.0 && lobe > 0.0 && settled_points > 0 && max_settled <= kDrift && exact_zero;
  detail = f("max S=%.4f (<=1); fig11a eta=0.9 max S=%.4f (need >0); settled points=%zu "
             "max|S| there=%.4f (<=%.2f); dd=free S==0 exactly: %s",
             max_S, lobe, settled_points, max_settled, kDrift, exact_zero ? "yes" : "no");
  return {ok, detail};
}

Outcome segmentation() {
  constexpr double kTol = 1e-9;
  PhysicalParams p;
  p.Gamma = 15.0;
  p.gamma_bath = 1.0;
  const auto grid = uniform_grid(20.0, 2001);
  auto diff = [](const Trajectory& a, const Trajectory& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
      m = std::max({m, std::abs(a.states[k].A1 - b.states[k].A1),
                    std::abs(a.states[k].A2 - b.states[k].A2)});
    return m;
  };
  std::vector<Pulse> zero;
  for (int k = 0; k < 5; ++k) zero.push_back({4.0 * k, 2.0, 0.0});
  const Schedule split = custom_schedule(zero, 20.0);
  const Schedule full = regular_schedule(25.0, 0.27, 0.27, 20.0);
  const Schedule one = custom_schedule({{0.0, 20.0, 25.0}}, 20.0);
  double d1 = 0.0, d2 = 0.0;
  for (auto m : {MatchingMode::kernel_continuous, MatchingMode::derivative_continuous}) {
    d1 = std::max(d1, diff(propagate(p, split, m, grid), propagate(p, free_schedule(20.0), m, grid)));
    d2 = std::max(d2, diff(propagate(p, full, m, grid), propagate(p, one, m, grid)));
  }
  const bool ok = split.segments().size() == 10 && d1 <= kTol && d2 <= kTol;
  return {ok, f("10 zero-detuning segments vs 1: %.2e; eta=1 train (%zu segments) vs 1: %.2e (<=%.0e)",
                d1, full.segments().size(), d2, kTol)};
}

Outcome separability() {
  constexpr double kTol = 1e-9;
  std::string detail;
  bool ok = true;
  for (const char* name : {"fig6a", "fig6b"}) {
    const auto c = preset(name, {{"t_end", 50.0}});
    const double w = trend_checks(closed_observables(c)).witness_max;
    ok = ok && w <= kTol;
    detail += f("%s witness_max=%.2e ", name, w);
  }
  return {ok, detail + f("(<=%.0e) on t in [0,50]", kTol)};
}

Outcome convergence_order() {
  constexpr double kMinOrder = 3.5;
  // Coarse output grid so that output breakpoints do not cap the step.
  const auto c = preset("fig4", {{"samples", 21}});
  const auto grid = c.grid();
  const auto s = c.build_schedule();
  const auto exact = propagate(c.params, s, c.matching, grid);
  auto err = [&](double dt) {
    const auto t = integrate_kernel(c.params, s, grid, {dt});
    double m = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k)
      m = std::max(m, std::abs(t.states[k].A1 - exact.states[k].A1));
    return m;
  };
  const double e1 = err(0.04), e2 = err(0.02), e3 = err(0.01);
  const double p1 = std::log2(e1 / e2), p2 = std::log2(e2 / e3);
  const bool ok = std::min(p1, p2) >= kMinOrder;
  return {ok, f("errors dt=0.04/0.02/0.01: %.2e/%.2e/%.2e observed orders %.2f, %.2f (>=%.1f)", e1,
                e2, e3, p1, p2, kMinOrder)};
}

}  // namespace

int main(int argc, char** argv) {
  struct Criterion {
    const char* title;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> all = {
      {"quartic property suite", quartic_suite},
      {"oracle equivalence, free evolution", oracle_equivalence},
      {"discrete-bath conservation", discrete_bath},
      {"regime dichotomy", regime_dichotomy},
      {"thermalization", thermalization},
      {"spectral-width trend", spectral_width},
      {"detuning-amplitude trend", amplitude_trend},
      {"duty-cycle trend", duty_trend},
      {"regular vs irregular control", regular_vs_irregular},
      {"suppression-factor shape", suppression_shape},
      {"segmentation consistency", segmentation},
      {"coherence separability", separability},
      {"kernel RK4 convergence order", convergence_order},
  };
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) only = std::atoi(argv[++i]);
  }
  if (only < 0 || only > static_cast<int>(all.size())) {
    std::fprintf(stderr, "criterion must be in 1..%zu\n", all.size());
    return 2;
  }
  bool all_ok = true;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (only != 0 && static_cast<int>(i + 1) != only) continue;
    Outcome o;
    try {
      o = all[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all_ok = all_ok && o.pass;
    std::printf("%s [%02zu] %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, all[i].title, o.detail.c_str());
    std::fflush(stdout);
  }
  return all_ok ? 0 : 1;
}
