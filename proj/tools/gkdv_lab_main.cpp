// gkdv-lab: command-line laboratory for the supercritical generalized KdV
// equation. Subcommands: simulate, norms, soliton, decompose, concentrate.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <set>
#include <thread>

#include "gkdv/concentration.hpp"
#include "gkdv/dynamics.hpp"
#include "gkdv/ground_state.hpp"
#include "gkdv/profiles.hpp"
#include "gkdv/snapshot.hpp"
#include "gkdv/spectral.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace gkdv;

namespace {

// round-trip-safe decimal formatting used by every CSV artifact
std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct InitialData {
  std::string type;
  double amplitude = 1.0;
  double c = 1.0;
  double width = 1.0;
  std::string path;
};

struct ExperimentSpec {
  std::string name = "run";
  int k = 5;
  int n_points = 1024;
  double length = 60.0;
  InitialData initial;
  SolverConfig solver;
  std::string out_dir = "out";
  bool refinement_check = false;
  std::vector<json> sweep;
};

double number_or_fraction(const json& j, const std::string& key) {
  const json& v = j.at(key);
  if (v.is_string()) return Rational::parse(v.get<std::string>()).value();
  return v.get<double>();
}

void apply_solver(SolverConfig& s, const json& j) {
  if (j.contains("dt_init")) s.dt_init = j["dt_init"].get<double>();
  if (j.contains("dt_floor")) s.dt_floor = j["dt_floor"].get<double>();
  if (j.contains("t_end")) s.t_end = j["t_end"].get<double>();
  if (j.contains("dealias_pad")) s.dealias_pad = number_or_fraction(j, "dealias_pad");
  if (j.contains("cfl_safety")) s.cfl_safety = j["cfl_safety"].get<double>();
  if (j.contains("norm_growth_cap")) s.norm_growth_cap = j["norm_growth_cap"].get<double>();
  if (j.contains("error_tol")) s.error_tol = j["error_tol"].get<double>();
  if (j.contains("dt_floor_growth")) s.dt_floor_growth = j["dt_floor_growth"].get<double>();
  if (j.contains("strichartz_fire_ratio")) s.strichartz_fire_ratio = j["strichartz_fire_ratio"].get<double>();
  if (j.contains("boundary_stop_ratio")) s.boundary_stop_ratio = j["boundary_stop_ratio"].get<double>();
  if (j.contains("adaptive")) s.adaptive = j["adaptive"].get<bool>();
  if (j.contains("enable_nonlinearity")) s.enable_nonlinearity = j["enable_nonlinearity"].get<bool>();
  if (j.contains("strichartz_window")) s.strichartz_window = j["strichartz_window"].get<double>();
  if (j.contains("report_window")) s.report_window = j["report_window"].get<double>();
}

void apply_initial(InitialData& d, const json& j) {
  if (j.contains("type")) d.type = j["type"].get<std::string>();
  if (j.contains("amplitude")) d.amplitude = j["amplitude"].get<double>();
  if (j.contains("c")) d.c = j["c"].get<double>();
  if (j.contains("width")) d.width = j["width"].get<double>();
  if (j.contains("path")) d.path = j["path"].get<std::string>();
}

ExperimentSpec parse_spec(const json& j) {
  ExperimentSpec s;
  if (j.contains("name")) s.name = j["name"].get<std::string>();
  if (!j.contains("k")) throw ConfigError("spec: missing field 'k'");
  s.k = j["k"].get<int>();
  if (s.k < 4) throw ConfigError("spec field 'k': k must be >= 4");
  if (j.contains("grid")) {
    s.n_points = j["grid"].value("n_points", s.n_points);
    s.length = j["grid"].value("length", s.length);
  }
  if (!j.contains("initial_data")) throw ConfigError("spec: missing field 'initial_data'");
  apply_initial(s.initial, j["initial_data"]);
  if (s.initial.type.empty()) throw ConfigError("spec field 'initial_data.type' is required");
  s.solver.k = s.k;
  if (j.contains("solver")) apply_solver(s.solver, j["solver"]);
  if (j.contains("outputs")) {
    const json& o = j["outputs"];
    if (o.contains("directory")) s.out_dir = o["directory"].get<std::string>();
    if (o.contains("report_cadence")) s.solver.report_cadence = o["report_cadence"].get<double>();
    if (o.contains("snapshot_cadence")) s.solver.snapshot_cadence = o["snapshot_cadence"].get<double>();
  }
  if (j.contains("refinement_check")) s.refinement_check = j["refinement_check"].get<bool>();
  if (j.contains("sweep")) {
    s.sweep = j["sweep"].get<std::vector<json>>();
    std::set<std::string> names;
    for (const json& e : s.sweep) {
      if (!e.contains("name")) throw ConfigError("spec: every sweep entry needs a 'name'");
      if (!names.insert(e["name"].get<std::string>()).second)
        throw ConfigError("spec: sweep entry names must be distinct (output directories are "
                          "partitioned by name)");
    }
  }
  s.solver.validate();
  return s;
}

Field make_initial(const ExperimentSpec& s, const Grid1D& g) {
  const InitialData& d = s.initial;
  if (d.type == "ground_state_multiple") {
    GroundState gs = ground_state(s.k, g);
    return d.amplitude * gs.profile;
  }
  if (d.type == "soliton") return soliton(s.k, d.c, g);
  if (d.type == "gaussian")
    return sample(g, [&](double x) { return d.amplitude * std::exp(-x * x / (d.width * d.width)); });
  if (d.type == "snapshot") {
    auto [f, meta] = read_snapshot(d.path);
    if (f.grid != g)
      throw ConfigError("spec: snapshot grid (" + std::to_string(meta.n_points) +
                        " points) does not match the requested grid");
    return f;
  }
  throw ConfigError("spec field 'initial_data.type': unknown type '" + d.type + "'");
}

json verdict_to_json(const BlowupVerdict& v) {
  return json{{"fired", v.fired},
              {"reason", to_string(v.reason)},
              {"t_last", v.t_last},
              {"hs_growth_factor", v.hs_growth_factor},
              {"strichartz_final", v.strichartz_final},
              {"strichartz_half_ratio", v.strichartz_half_ratio}};
}

int exit_code_for(const BlowupVerdict& v) {
  if (v.reason == StopReason::Completed || v.fired) return 0;
  return 2;  // stopped without firing: inconclusive
}

// one simulation with artifacts written under dir
int run_one(const ExperimentSpec& spec, const fs::path& dir) {
  fs::create_directories(dir);
  Grid1D grid(spec.n_points, spec.length);
  Field u0 = make_initial(spec, grid);

  std::ofstream csv(dir / "reports.csv");
  csv << "time,mass,energy,hsk_norm,dt,window_mass\n";
  int snap_index = 0;
  RunCallbacks cb;
  cb.on_report = [&](const NormReport& r) {
    csv << fmt(r.time) << ',' << fmt(r.mass) << ',' << fmt(r.energy) << ','
        << fmt(r.hsk_norm) << ',' << fmt(r.dt) << ',' << fmt(r.window_mass) << '\n';
  };
  cb.on_snapshot = [&](const Field& f, double t) {
    char name[32];
    std::snprintf(name, sizeof(name), "snap_%06d", snap_index++);
    write_snapshot((dir / name).string(), f, t, spec.k);
  };

  const auto wall0 = std::chrono::steady_clock::now();
  RunResult r = run(u0, spec.solver, cb);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
  csv.close();

  json events = json::array();
  for (const Event& e : r.state.events)
    events.push_back({{"time", e.time}, {"kind", e.kind}, {"payload", e.payload}});

  json acc = json::array();
  const auto& a = r.state.strichartz_acc;
  for (const TrackedPair& p : a.tracked_pairs()) {
    const double value = a.sample_count() >= 2 ? a.mixed_norm(p.p, p.q, p.s) : 0.0;
    acc.push_back({{"pair", {p.p.str(), p.q.str(), p.s}},
                   {"value", value},
                   {"truncation_flag", a.truncation_flag()}});
  }
  json incs = json::array();
  for (double w : a.window_increments()) incs.push_back(w);

  json out{{"name", spec.name},
           {"k", spec.k},
           {"verdict", verdict_to_json(r.verdict)},
           {"events", events},
           {"strichartz", acc},
           {"strichartz_increments", incs},
           {"metadata", {{"wall_time_seconds", wall}}}};

  if (spec.refinement_check) {
    ExperimentSpec fine = spec;
    fine.n_points *= 2;
    fine.solver.dt_floor *= 0.5;
    Grid1D fg(fine.n_points, fine.length);
    RunResult rf = run(make_initial(fine, fg), fine.solver);
    out["refined_verdict"] = verdict_to_json(rf.verdict);
    out["refinement_agrees"] = rf.verdict.fired == r.verdict.fired;
  }

  std::ofstream vf(dir / "verdict.json");
  vf << out.dump(2) << "\n";

  if (spec.refinement_check && !out["refinement_agrees"].get<bool>())
    return 2;  // disagreement under refinement marks the run inconclusive, never fired
  return exit_code_for(r.verdict);
}

int cmd_simulate(const std::string& spec_path, int jobs) {
  json j;
  try {
    std::ifstream in(spec_path);
    if (!in) {
      std::cerr << "simulate: cannot open spec file '" << spec_path << "'\n";
      return 1;
    }
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    // e.what() carries the byte offset; prepend the file for anchoring
    std::cerr << "simulate: " << spec_path << ": " << e.what() << "\n";
    return 1;
  }

  ExperimentSpec base;
  try {
    base = parse_spec(j);
  } catch (const Error& e) {
    std::cerr << "simulate: " << spec_path << ": " << e.what() << "\n";
    return 1;
  }

  std::vector<ExperimentSpec> runs;
  if (base.sweep.empty()) {
    runs.push_back(base);
  } else {
    for (const json& entry : base.sweep) {
      json merged = j;
      merged.erase("sweep");
      for (auto it = entry.begin(); it != entry.end(); ++it) {
        if (it.key() == "name") {
          merged["name"] = *it;
        } else if (it.value().is_object() && merged.contains(it.key())) {
          for (auto jt = it.value().begin(); jt != it.value().end(); ++jt)
            merged[it.key()][jt.key()] = *jt;
        } else {
          merged[it.key()] = *it;
        }
      }
      try {
        runs.push_back(parse_spec(merged));
      } catch (const Error& e) {
        std::cerr << "simulate: sweep entry '" << entry.value("name", "?") << "': " << e.what()
                  << "\n";
        return 1;
      }
    }
  }

  if (const char* cap = std::getenv("GKDV_LAB_THREADS"))
    jobs = std::min(jobs, std::max(1, std::atoi(cap)));
  jobs = std::max(1, std::min<int>(jobs, static_cast<int>(runs.size())));

  std::atomic<size_t> next{0};
  std::vector<int> codes(runs.size(), 0);
  std::mutex io_mutex;
  auto worker = [&]() {
    for (size_t i = next.fetch_add(1); i < runs.size(); i = next.fetch_add(1)) {
      const ExperimentSpec& spec = runs[i];
      const fs::path dir = base.sweep.empty() ? fs::path(spec.out_dir)
                                              : fs::path(spec.out_dir) / spec.name;
      int code;
      try {
        code = run_one(spec, dir);
      } catch (const Error& e) {
        std::lock_guard<std::mutex> lk(io_mutex);
        std::cerr << "simulate: run '" << spec.name << "': " << e.what() << "\n";
        code = 1;
      }
      codes[i] = code;
      std::lock_guard<std::mutex> lk(io_mutex);
      std::cout << spec.name << ": exit " << code << "\n";
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  return *std::max_element(codes.begin(), codes.end());
}

int cmd_norms(const std::string& snapshot, const std::vector<std::string>& pair_specs,
              const std::vector<double>& sobolev_orders, bool force) {
  auto [f, meta] = read_snapshot(snapshot);
  const int k = meta.k;

  json out{{"k", k},
           {"time", meta.time},
           {"mass", mass(f)},
           {"energy", energy(f, k)},
           {"hsk_norm", sobolev_norm(f, critical_exponent(k))}};

  json sob = json::object();
  for (double s : sobolev_orders) sob[fmt(s)] = sobolev_norm(f, s);
  if (!sob.empty()) out["sobolev"] = sob;

  json pairs = json::array();
  for (const std::string& ps : pair_specs) {
    // "p,q,s" with p,q rational; on a single snapshot we evaluate the
    // spatial factor ||D^s f||_{L^p_x} (the time norm needs a trajectory)
    const auto c1 = ps.find(',');
    const auto c2 = ps.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) {
      std::cerr << "norms: bad pair spec '" << ps << "' (want p,q,s)\n";
      return 1;
    }
    const Rational p = Rational::parse(ps.substr(0, c1));
    const Rational q = Rational::parse(ps.substr(c1 + 1, c2 - c1 - 1));
    const double s = std::stod(ps.substr(c2 + 1));
    const bool admissible = is_admissible(p, q, k);
    if (!admissible && !force) {
      std::cerr << "norms: pair (" << p.str() << "," << q.str()
                << ") is not admissible: the identity 2/p + 1/q = 2/k fails for k=" << k
                << " (use --force to evaluate anyway)\n";
      return 1;
    }
    pairs.push_back({{"p", p.str()},
                     {"q", q.str()},
                     {"s", s},
                     {"admissible", admissible},
                     {"lpx_norm", lp_norm(fractional_derivative(f, s), p.value())}});
  }
  if (!pairs.empty()) out["pairs"] = pairs;

  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_soliton(int k, double c, int n, double length, const std::string& out_base) {
  Grid1D g(n, length);
  Field q = soliton(k, c, g);
  write_snapshot(out_base, q, 0.0, k);
  json out{{"k", k},
           {"c", c},
           {"peak", max_abs(q)},
           {"mass", mass(q)},
           {"ode_residual", soliton_residual(q, k, c)},
           {"snapshot", out_base}};
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_decompose(const std::string& snapshot, int max_profiles, double stop, bool demean,
                  const std::string& out_path) {
  auto [f, meta] = read_snapshot(snapshot);
  if (demean) {
    const double mu = mean(f);
    for (double& v : f.values) v -= mu;
  }
  ExtractionConfig cfg;
  cfg.max_profiles = max_profiles;
  cfg.strichartz_stop = stop;
  DecompositionReport rep = extract_profiles(f, meta.k, cfg);

  const double sk = critical_exponent(meta.k);
  json profiles = json::array();
  for (const ProfileParams& p : rep.profiles)
    profiles.push_back(
        {{"h", p.h}, {"x0", p.x0}, {"t0", p.t0}, {"hsk_norm", sobolev_norm(p.psi, sk)}});
  json out{{"k", meta.k},
           {"profiles", profiles},
           {"defect", rep.pythagorean_defect},
           {"input_hsk_sq", rep.input_hsk_sq},
           {"gamma_matrix", rep.gamma},
           {"remainder_strichartz", rep.remainder_strichartz}};
  if (out_path.empty() || out_path == "-") {
    std::cout << out.dump(2) << "\n";
  } else {
    std::ofstream of(out_path);
    of << out.dump(2) << "\n";
  }
  return 0;
}

WindowLaw parse_law(const std::string& s) {
  if (s.rfind("power:", 0) == 0) {
    const auto comma = s.find(',', 6);
    if (comma == std::string::npos)
      throw ConfigError("law: want power:c,exponent or fixed:value");
    return WindowLaw::power(std::stod(s.substr(6, comma - 6)), std::stod(s.substr(comma + 1)));
  }
  if (s.rfind("fixed:", 0) == 0) return WindowLaw::fixed(std::stod(s.substr(6)));
  throw ConfigError("law: want power:c,exponent or fixed:value");
}

int cmd_concentrate(const std::vector<std::string>& snapshots, const std::string& law_spec,
                    double t_star, const std::string& out_path, double sensitivity) {
  std::vector<std::pair<double, Field>> series;
  int k = 0;
  for (const std::string& s : snapshots) {
    auto [f, meta] = read_snapshot(s);
    k = meta.k;
    series.emplace_back(meta.time, std::move(f));
  }
  std::sort(series.begin(), series.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  const WindowLaw law = parse_law(law_spec);

  auto write_series = [&](const std::string& path, double tstar) {
    auto entries = concentration_series(series, k, law, tstar);
    std::ofstream csv(path);
    csv << "time,lambda,x0,window_mass,fraction,resolution_flag\n";
    for (const auto& e : entries)
      csv << fmt(e.time) << ',' << fmt(e.lambda) << ',' << fmt(e.x0) << ','
          << fmt(e.window_mass) << ',' << fmt(e.fraction) << ','
          << (e.resolution_exhausted ? 1 : 0) << '\n';
  };
  write_series(out_path, t_star);
  if (sensitivity > 0.0) {
    // the operational T* is uncertain; report the same trace at T*(1 +- r)
    for (double sign : {-1.0, 1.0}) {
      const double ts = t_star * (1.0 + sign * sensitivity);
      if (ts <= series.back().first) continue;
      write_series(out_path + (sign < 0 ? ".tstar_lo" : ".tstar_hi"), ts);
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for the supercritical generalized KdV equation"};
  app.require_subcommand(1);

  auto* sim = app.add_subcommand("simulate", "integrate an experiment spec");
  std::string spec_path;
  int jobs = 1;
  sim->add_option("--spec", spec_path, "experiment spec (JSON)")->required();
  sim->add_option("--jobs", jobs, "max concurrent sweep runs");

  auto* nrm = app.add_subcommand("norms", "evaluate functionals of a snapshot");
  std::string snapshot;
  std::vector<std::string> pair_specs;
  std::vector<double> sobolev_orders;
  bool force = false;
  nrm->add_option("--snapshot", snapshot, "snapshot base path")->required();
  nrm->add_option("--pair", pair_specs, "mixed-norm pair p,q,s (repeatable; p,q rational)");
  nrm->add_option("--sobolev", sobolev_orders, "extra Sobolev orders (repeatable)");
  nrm->add_flag("--force", force, "evaluate non-admissible pairs");

  auto* sol = app.add_subcommand("soliton", "emit a speed-c traveling wave snapshot");
  int sk = 5, sn = 2048;
  double sc = 1.0, slen = 100.0;
  std::string sout = "soliton";
  sol->add_option("--k", sk, "nonlinearity power")->required();
  sol->add_option("--c", sc, "wave speed");
  sol->add_option("--n", sn, "grid points");
  sol->add_option("--length", slen, "box length");
  sol->add_option("--out", sout, "output snapshot base");

  auto* dec = app.add_subcommand("decompose", "greedy profile extraction on a snapshot");
  std::string dsnap, dout;
  int dmax = 3;
  double dstop = 0.0;
  bool demean = false;
  dec->add_option("--snapshot", dsnap, "snapshot base path")->required();
  dec->add_option("--max-profiles", dmax, "profile budget");
  dec->add_option("--stop", dstop, "remainder Strichartz stop threshold");
  dec->add_flag("--demean", demean, "subtract the mean first (solver output has nonzero mean)");
  dec->add_option("--out", dout, "report path (default stdout)");

  auto* con = app.add_subcommand("concentrate", "windowed critical-norm trace over snapshots");
  std::vector<std::string> csnaps;
  std::string claw = "fixed:10", cout_path = "concentration.csv";
  double tstar = 0.0, sens = 0.0;
  con->add_option("--snapshot", csnaps, "snapshot base paths (repeatable)")->required();
  con->add_option("--law", claw, "window law: power:c,exponent or fixed:value");
  con->add_option("--t-star", tstar, "operational blow-up time")->required();
  con->add_option("--out", cout_path, "output CSV path");
  con->add_option("--tstar-sensitivity", sens, "also emit traces at T*(1 +- r)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return cmd_simulate(spec_path, jobs);
    if (nrm->parsed()) return cmd_norms(snapshot, pair_specs, sobolev_orders, force);
    if (sol->parsed()) return cmd_soliton(sk, sc, sn, slen, sout);
    if (dec->parsed()) return cmd_decompose(dsnap, dmax, dstop, demean, dout);
    if (con->parsed()) return cmd_concentrate(csnaps, claw, tstar, cout_path, sens);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
