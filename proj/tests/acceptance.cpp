// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Every tolerance is pinned here, in code.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gkdv/concentration.hpp"
#include "gkdv/dynamics.hpp"
#include "gkdv/functionals.hpp"
#include "gkdv/ground_state.hpp"
#include "gkdv/profiles.hpp"
#include "gkdv/spectral.hpp"

using namespace gkdv;
using clock_type = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s — %s\n", pass ? "PASS" : "FAIL", id, name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

double sup_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (int i = 0; i < a.grid.n(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double l2_diff(const Field& a, const Field& b) {
  double s = 0.0;
  for (int i = 0; i < a.grid.n(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s * a.grid.dx());
}

std::string fmt(const char* f, ...) {
  char buf[256];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof(buf), f, ap);
  va_end(ap);
  return buf;
}

// ---------------------------------------------------------------- criterion 1
void airy_exactness() {
  const auto t0 = clock_type::now();
  Grid1D g(256, 2.0 * M_PI);
  Field s = sample(g, [](double x) { return std::sin(x); });
  Field moved = airy_propagate(s, 0.7);
  Field expect = sample(g, [](double x) { return std::sin(x + 0.7); });
  const double err = sup_diff(moved, expect);
  const double wall = seconds_since(t0);
  report(1, "Airy exactness V(t) sin = sin(x+t)", err <= 1e-10 && wall < 0.1,
         fmt("sup-error %.2e (<=1e-10), %.3fs (<0.1s)", err, wall));
}

// ---------------------------------------------------------------- criterion 2
void unitarity() {
  Grid1D g(512, 40.0);
  Field f = sample(g, [](double x) { return std::exp(-x * x / 2.25); });
  bool pass = true;
  std::string detail;
  for (int k : {5, 6, 8}) {
    const double sk = critical_exponent(k);
    const double ratio = sobolev_norm(airy_propagate(f, 1.0), sk) / sobolev_norm(f, sk);
    pass = pass && std::abs(ratio - 1.0) <= 1e-12;
    detail += fmt("k=%d: |ratio-1|=%.2e ", k, std::abs(ratio - 1.0));
  }
  report(2, "unitarity of V(1) in the critical norm", pass, detail + "(<=1e-12)");
}

// ---------------------------------------------------------------- criterion 3
void conservation() {
  const auto t0 = clock_type::now();
  Grid1D g(1024, 60.0);
  GroundState gs = ground_state(5, g);
  SolverConfig cfg;
  cfg.k = 5;
  cfg.t_end = 1.0;
  cfg.dt_init = 5e-4;
  RunResult r = run(0.1 * gs.profile, cfg);
  double mass_drift = 0.0, energy_drift = 0.0;
  const double m0 = r.reports.front().mass, e0 = r.reports.front().energy;
  for (const NormReport& rep : r.reports) {
    mass_drift = std::max(mass_drift, std::abs(rep.mass - m0) / m0);
    energy_drift = std::max(energy_drift, std::abs(rep.energy - e0) / std::abs(e0));
  }
  const double wall = seconds_since(t0);
  const bool pass = r.verdict.reason == StopReason::Completed && mass_drift <= 1e-10 &&
                    energy_drift <= 1e-6 && wall < 30.0;
  report(3, "mass/energy conservation on 0.1Q over [0,1]", pass,
         fmt("mass %.2e (<=1e-10), energy %.2e (<=1e-6), %.1fs (<30s)", mass_drift,
             energy_drift, wall));
}

// ---------------------------------------------------------------- criterion 4
void soliton_transport() {
  Grid1D g(2048, 100.0);
  Field q = soliton(5, 1.0, g);
  Field exact = translate(q, 2.0);
  auto terminal_error = [&](double dt) {
    SolverConfig cfg;
    cfg.k = 5;
    cfg.t_end = 2.0;
    cfg.adaptive = false;
    cfg.dt_init = dt;
    RunResult r = run(q, cfg);
    return l2_diff(r.state.field, exact);
  };
  const double e_fine = terminal_error(2.5e-4);
  const double e_coarse = terminal_error(5e-4);
  const double ratio = e_coarse / e_fine;
  const bool pass = e_fine <= 1e-3 && ratio >= 3.2 && ratio <= 4.8;
  report(4, "soliton transport and Strang order", pass,
         fmt("L2 shape error %.2e (<=1e-3), halving ratio %.2f (in [3.2,4.8])", e_fine, ratio));
}

// ---------------------------------------------------------------- criterion 5
void ground_state_identities() {
  Grid1D g(2048, 60.0);
  bool pass = true;
  std::string detail;
  for (int k : {4, 5, 6, 8}) {
    GroundState gs = ground_state(k, g);
    const double res = soliton_residual(gs.profile, k);
    const double ratio_err = std::abs(gs.energy_q / gs.mass_q - (k - 4.0) / (k + 4.0));
    pass = pass && res <= 1e-8 && ratio_err <= 1e-6;
    detail += fmt("k=%d res %.1e ratio %.1e; ", k, res, ratio_err);
  }
  GroundState gs4 = ground_state(4, g);
  const double mass_err = std::abs(gs4.mass_q - std::sqrt(3.0) * M_PI / 2.0);
  pass = pass && mass_err <= 1e-8;
  report(5, "ground-state residuals, Pohozaev ratios, k=4 mass", pass,
         detail + fmt("k=4 mass err %.1e (<=1e-8)", mass_err));
}

// ---------------------------------------------------------------- criterion 6
void scaling_symmetry() {
  const int k = 5;
  const double lam = 2.0;
  Grid1D g(1024, 40.0);
  Field u0 = sample(g, [](double x) { return 0.3 * x * std::exp(-x * x / 4.0); });
  SolverConfig cfg;
  cfg.k = k;
  cfg.adaptive = false;
  cfg.dt_init = 1e-4;
  cfg.t_end = 0.4;
  RunResult slow = run(u0, cfg);
  Field a = rescale(slow.state.field, lam, k);
  SolverConfig fast = cfg;
  fast.t_end = cfg.t_end / (lam * lam * lam);
  fast.dt_init = cfg.dt_init / (lam * lam * lam);
  RunResult quick = run(rescale(u0, lam, k), fast);
  const double err = l2_diff(a, quick.state.field);
  report(6, "scaling covariance evolve/rescale", err <= 1e-5, fmt("L2 gap %.2e (<=1e-5)", err));
}

// ---------------------------------------------------------------- criterion 7
void admissible_pairs() {
  bool pass = true;
  std::string detail;
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> num(1, 40);
  for (int k : {5, 6, 8}) {
    pass = pass && is_admissible(Rational(5 * k, 4), Rational(5 * k, 2), k);
    pass = pass && is_admissible(Rational(3 * k, 2), Rational(3 * k, 2), k);
    int rejected = 0, trials = 0;
    while (rejected < 10 && trials < 10000) {
      ++trials;
      Rational p(num(rng), 1 + num(rng) % 4);
      Rational q(num(rng), 1 + num(rng) % 4);
      if (Rational(2) / p + Rational(1) / q == Rational(2, k)) continue;
      if (is_admissible(p, q, k)) {
        pass = false;
        break;
      }
      ++rejected;
    }
    pass = pass && rejected == 10;
    detail += fmt("k=%d ok; ", k);
  }
  report(7, "admissible-pair algebra (exact rationals)", pass,
         detail + "families accepted, 10 violators rejected each");
}

// ---------------------------------------------------------------- criterion 8
void profile_round_trip() {
  const auto t0 = clock_type::now();
  const int k = 5;
  Grid1D g(4096, 100.0);
  Field psi = sample(g, [](double x) { return (1.0 - x * x) * std::exp(-0.5 * x * x); });
  std::vector<ProfileParams> truth{{1.0, -20.0, 0.0, psi}, {1.0 / 16.0, 20.0, 0.0, psi}};
  const double gamma = divergence_stat(truth[0], truth[1]);
  Field v = synthesize(truth, 0.0, g, k);

  ExtractionConfig cfg;
  cfg.max_profiles = 2;
  DecompositionReport rep = extract_profiles(v, k, cfg);

  bool pass = gamma >= 16.0 && rep.profiles.size() == 2;
  double h_small = 0.0, h_big = 0.0, x_small = 0.0, x_big = 0.0;
  if (pass) {
    const bool first_small = rep.profiles[0].h < rep.profiles[1].h;
    const ProfileParams& ps = rep.profiles[first_small ? 0 : 1];
    const ProfileParams& pb = rep.profiles[first_small ? 1 : 0];
    h_small = ps.h;
    h_big = pb.h;
    x_small = ps.x0;
    x_big = pb.x0;
    auto within_factor2 = [](double got, double want) {
      return got >= 0.5 * want && got <= 2.0 * want;
    };
    pass = pass && within_factor2(h_big, 1.0) && within_factor2(h_small, 1.0 / 16.0);
    const double half_window = 0.5 * cfg.extract_factor * cfg.window_width;
    pass = pass && std::abs(x_big + 20.0) <= half_window * h_big;
    pass = pass && std::abs(x_small - 20.0) <= half_window * h_small;
  }
  const double defect_frac = std::abs(rep.pythagorean_defect) / rep.input_hsk_sq;
  pass = pass && defect_frac <= 0.05;
  const double wall = seconds_since(t0);
  pass = pass && wall < 60.0;
  report(8, "two-bubble synthesis/extraction round trip", pass,
         fmt("Gamma %.1f, h {%.4f, %.4f}, x0 {%.2f, %.2f}, defect %.2e (<=0.05), %.1fs (<60s)",
             gamma, h_big, h_small, x_big, x_small, defect_frac, wall));
}

// ---------------------------------------------------------------- criterion 9
struct SweepOutcome {
  RunResult result;
  SolverConfig cfg;
};

SweepOutcome sweep_run(double amplitude, int n, double dt_floor) {
  Grid1D g(n, 60.0);
  GroundState gs = ground_state(5, g);
  SolverConfig cfg;
  cfg.k = 5;
  cfg.t_end = 2.0;
  cfg.dt_init = 1e-3;
  cfg.dt_floor = dt_floor;
  cfg.error_tol = 1e-8;
  cfg.report_cadence = 0.005;
  return {run(amplitude * gs.profile, cfg), cfg};
}

bool trend_nondecreasing(const std::vector<ConcentrationEntry>& series, int count,
                         double tolerance, std::string* detail) {
  if (static_cast<int>(series.size()) < count) return false;
  bool ok = true;
  const size_t start = series.size() - count;
  for (size_t i = start + 1; i < series.size(); ++i) {
    if (series[i].fraction < series[i - 1].fraction * (1.0 - tolerance)) ok = false;
  }
  *detail += "fractions";
  for (size_t i = start; i < series.size(); ++i) *detail += fmt(" %.4f", series[i].fraction);
  *detail += "; ";
  return ok;
}

void dichotomy() {
  bool pass = true;
  std::string detail;

  // dispersive branch, base and refined
  SweepOutcome d_base = sweep_run(0.8, 1024, 1e-5);
  SweepOutcome d_fine = sweep_run(0.8, 2048, 5e-6);
  for (const SweepOutcome* o : {&d_base, &d_fine}) {
    const auto& r = o->result;
    const double h0 = r.reports.front().hsk_norm;
    const double h1 = r.reports.back().hsk_norm;
    const bool completed = r.verdict.reason == StopReason::Completed && !r.verdict.fired;
    const bool norm_ok = std::abs(h1 - h0) <= 0.01 * h0;
    const auto& inc = r.state.strichartz_acc.window_increments();
    const bool decaying = inc.size() >= 2 && inc.back() < inc.front();
    pass = pass && completed && norm_ok && decaying;
  }
  detail += fmt("A=0.8: completed, hsk drift %.2e/%.2e, increments %.3f->%.3f; ",
                std::abs(d_base.result.reports.back().hsk_norm -
                         d_base.result.reports.front().hsk_norm) /
                    d_base.result.reports.front().hsk_norm,
                std::abs(d_fine.result.reports.back().hsk_norm -
                         d_fine.result.reports.front().hsk_norm) /
                    d_fine.result.reports.front().hsk_norm,
                d_base.result.state.strichartz_acc.window_increments().front(),
                d_base.result.state.strichartz_acc.window_increments().back());

  // the marginal branch completes as a traveling wave
  SweepOutcome m = sweep_run(1.0, 1024, 1e-5);
  pass = pass && m.result.verdict.reason == StopReason::Completed;
  detail += fmt("A=1.0: %s; ", to_string(m.result.verdict.reason).c_str());

  // blow-up branch, base and refined, with the concentration trend
  SweepOutcome b_base = sweep_run(1.2, 1024, 1e-5);
  SweepOutcome b_fine = sweep_run(1.2, 2048, 5e-6);
  pass = pass && b_base.result.verdict.fired && b_fine.result.verdict.fired;
  detail += fmt("A=1.2: fired %d/%d (t* %.3f/%.3f); ", b_base.result.verdict.fired,
                b_fine.result.verdict.fired, b_base.result.verdict.t_last,
                b_fine.result.verdict.t_last);

  for (const SweepOutcome* o : {&b_base, &b_fine}) {
    // operational T*: the floor-hit time plus one sampling quantum
    const double t_star = o->result.verdict.t_last + o->cfg.report_cadence;
    auto series = concentration_series(o->result.tail_snapshots, 5,
                                       WindowLaw::power(6.0, 0.2), t_star);
    pass = pass && trend_nondecreasing(series, 5, 0.02, &detail);
  }

  report(9, "blow-up/dispersion dichotomy with refinement-stable verdicts", pass, detail);
}

// --------------------------------------------------------------- criterion 10
void determinism() {
#ifdef GKDV_LAB_BIN
  namespace fs = std::filesystem;
  fs::create_directories("acceptance_scratch");
  {
    std::ofstream spec("acceptance_scratch/det.json");
    spec << R"({
      "name": "det",
      "k": 5,
      "grid": {"n_points": 256, "length": 60.0},
      "initial_data": {"type": "ground_state_multiple", "amplitude": 0.1},
      "solver": {"dt_init": 1e-3, "dt_floor": 1e-7, "t_end": 0.1, "error_tol": 1e-6},
      "outputs": {"directory": "acceptance_scratch/det_out", "report_cadence": 0.02}
    })";
  }
  auto slurp = [](const std::string& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  auto run_once = [&]() {
    const std::string cmd = std::string(GKDV_LAB_BIN) +
                            " simulate --spec acceptance_scratch/det.json"
                            " > acceptance_scratch/stdout 2>&1";
    return std::system(cmd.c_str());
  };
  run_once();
  const std::string csv1 = slurp("acceptance_scratch/det_out/reports.csv");
  nlohmann::json v1 = nlohmann::json::parse(slurp("acceptance_scratch/det_out/verdict.json"));
  run_once();
  const std::string csv2 = slurp("acceptance_scratch/det_out/reports.csv");
  nlohmann::json v2 = nlohmann::json::parse(slurp("acceptance_scratch/det_out/verdict.json"));
  v1.erase("metadata");
  v2.erase("metadata");
  const bool pass = !csv1.empty() && csv1 == csv2 && v1.dump() == v2.dump();
  report(10, "byte-identical artifacts across executions", pass,
         pass ? "CSV and verdict JSON identical (metadata excluded)"
              : "artifact mismatch between runs");
#else
  report(10, "byte-identical artifacts across executions", false, "CLI binary not wired in");
#endif
}

}  // namespace

int main() {
  std::printf("acceptance suite\n");
  airy_exactness();
  unitarity();
  conservation();
  soliton_transport();
  ground_state_identities();
  scaling_symmetry();
  admissible_pairs();
  profile_round_trip();
  dichotomy();
  determinism();
  std::printf("%d of 10 criteria passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}
