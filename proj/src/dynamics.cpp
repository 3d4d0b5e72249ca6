#include "gkdv/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "gkdv/concentration.hpp"
#include "gkdv/spectral.hpp"

namespace gkdv {

void SolverConfig::validate() const {
  if (k < 4) throw ConfigError("k must be >= 4");
  if (!(dt_init > 0.0)) throw ConfigError("dt_init must be positive");
  if (!(dt_floor > 0.0)) throw ConfigError("dt_floor must be positive");
  if (!(dt_floor < dt_init)) throw ConfigError("dt_floor must be smaller than dt_init");
  if (dealias_pad > 0.0 && dealias_pad < 0.5 * (k + 2))
    throw ConfigError("dealias_pad must be at least (k+2)/2");
  if (!(cfl_safety > 0.0 && cfl_safety < 1.0)) throw ConfigError("cfl_safety must lie in (0,1)");
  if (!(norm_growth_cap > 0.0)) throw ConfigError("norm_growth_cap must be positive");
  if (!(error_tol > 0.0)) throw ConfigError("error_tol must be positive");
}

std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::DtFloor: return "dt-floor";
    case StopReason::NormCap: return "norm-cap";
    case StopReason::Completed: return "completed";
    case StopReason::BoundaryOverflow: return "boundary-overflow";
  }
  return "unknown";
}

SpectralField dealias(const SpectralField& f, double pad) {
  if (!(pad >= 1.0)) throw ContractError("dealias: pad must be >= 1");
  SpectralField out = f;
  truncate_modes(out, static_cast<int>(std::floor(f.grid.n() / (2.0 * pad))));
  return out;
}

namespace {

int band_cutoff(const Grid1D& g, double pad) {
  return static_cast<int>(std::floor(g.n() / (2.0 * pad)));
}

void project_band(std::vector<std::complex<double>>& c, const Grid1D& g, int cutoff) {
  const int n = g.n();
  for (int m = 0; m < n; ++m)
    if (std::abs(g.signed_mode(m)) > cutoff) c[m] = 0.0;
  c[n / 2] = 0.0;
}

// -d/dx (u^{k+1}) with the product formed in physical space and both the
// state band and the product band enforced; the state is assumed to live
// inside the band already, so aliases of the (k+1)-fold product fall
// entirely in the zeroed region.
Field nonlinear_rhs(const Field& u, int k, int cutoff) {
  const int n = u.grid.n();
  Field w(u.grid);
  for (int i = 0; i < n; ++i) {
    double p = u[i];
    for (int j = 1; j < k + 1; ++j) p *= u[i];
    w[i] = p;
  }
  SpectralField s = forward_transform(w);
  project_band(s.coeffs, u.grid, cutoff);
  for (int m = 0; m < n; ++m) {
    if (m == n / 2) continue;
    s.coeffs[m] *= std::complex<double>(0.0, -s.grid.xi(m));
  }
  return inverse_transform(s);
}

// RK4 for u_t = -(u^{k+1})_x over time h.
Field nonlinear_substep(const Field& u, double h, int k, int cutoff) {
  const int n = u.grid.n();
  auto axpy = [n](const Field& a, double c, const Field& b) {
    Field r = a;
    for (int i = 0; i < n; ++i) r[i] += c * b[i];
    return r;
  };
  const Field k1 = nonlinear_rhs(u, k, cutoff);
  const Field k2 = nonlinear_rhs(axpy(u, 0.5 * h, k1), k, cutoff);
  const Field k3 = nonlinear_rhs(axpy(u, 0.5 * h, k2), k, cutoff);
  const Field k4 = nonlinear_rhs(axpy(u, h, k3), k, cutoff);
  Field r = u;
  const double c = h / 6.0;
  for (int i = 0; i < n; ++i)
    r[i] += c * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return r;
}

double l2_diff(const Field& a, const Field& b) {
  double s = 0.0;
  for (int i = 0; i < a.grid.n(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s * a.grid.dx());
}

}  // namespace

namespace {

// a step whose nonlinearity overflows surfaces as "not finite" rather than
// escaping as a corrupted-state exception; the controller owns the rollback
bool try_strang(const Field& u, double dt, const SolverConfig& cfg, Field* out) {
  try {
    *out = strang_step(u, dt, cfg);
  } catch (const CorruptedStateError&) {
    return false;
  }
  return is_finite(*out);
}

}  // namespace

Field strang_step(const Field& u, double dt, const SolverConfig& cfg) {
  if (!cfg.enable_nonlinearity) return airy_propagate(u, dt);
  const int cutoff = band_cutoff(u.grid, cfg.pad());
  SpectralField s = forward_transform(u);
  project_band(s.coeffs, u.grid, cutoff);
  Field v = inverse_transform(s);
  v = nonlinear_substep(v, 0.5 * dt, cfg.k, cutoff);
  v = airy_propagate(v, dt);
  v = nonlinear_substep(v, 0.5 * dt, cfg.k, cutoff);
  return v;
}

SimState step(const SimState& state, const SolverConfig& cfg) {
  cfg.validate();
  if (state.dt < cfg.dt_floor) throw ContractError("step: dt below dt_floor");
  ensure_finite(state.field, "step");

  SimState next = state;
  if (next.strichartz_acc.sample_count() == 0)
    next.strichartz_acc.add_sample(next.field, next.time);

  Field advanced(state.field.grid);
  if (!try_strang(state.field, state.dt, cfg, &advanced)) {
    next.dt = 0.5 * state.dt;
    next.events.push_back({state.time, "blowup_candidate",
                           "non-finite step output; rolled back, dt halved"});
    return next;
  }
  next.field = std::move(advanced);
  next.time = state.time + state.dt;
  next.strichartz_acc.add_sample(next.field, next.time);
  return next;
}

namespace {

double cfl_cap(const Field& u, const SolverConfig& cfg, int cutoff) {
  const double a = (cfg.k + 1) * std::pow(max_abs(u), cfg.k);
  const double xi_band = 2.0 * M_PI * cutoff / u.grid.length();
  if (a * xi_band <= 0.0) return std::numeric_limits<double>::infinity();
  // RK4 imaginary-axis stability extent ~2.82 per half-step of length dt/2
  return cfg.cfl_safety * 2.0 * 2.82 / (a * xi_band);
}

}  // namespace

RunResult run(const Field& u0, const SolverConfig& cfg, const RunCallbacks& cb) {
  cfg.validate();
  ensure_finite(u0, "run");
  if (cfg.check_initial_decay && !boundary_decay_ok(u0))
    throw DomainOverflowError("run: initial data violates the boundary-decay threshold");

  const double sk = critical_exponent(cfg.k);
  const int cutoff = band_cutoff(u0.grid, cfg.pad());
  const double window = cfg.report_window > 0.0 ? cfg.report_window : u0.grid.length() / 8.0;

  SimState st(u0, cfg);
  if (cfg.enable_nonlinearity) {
    // the evolution lives inside the dealias band; project once up front so
    // conserved quantities are measured on the evolved representation
    SpectralField s = forward_transform(st.field);
    project_band(s.coeffs, st.field.grid, cutoff);
    st.field = inverse_transform(s);
  }
  st.strichartz_acc.add_sample(st.field, 0.0);
  const double hs0 = sobolev_norm(st.field, sk);

  RunResult result{std::move(st), {}, {}, {}};
  SimState& state = result.state;
  std::deque<std::pair<double, Field>> tail;

  bool boundary_warned = false;
  double next_report = 0.0;
  double next_snapshot = cfg.snapshot_cadence;
  double growth = 1.0;

  auto emit_report = [&](double dt_used) {
    NormReport rep;
    rep.time = state.time;
    rep.mass = mass(state.field);
    rep.energy = energy(state.field, cfg.k);
    rep.hsk_norm = sobolev_norm(state.field, sk);
    const double lam = std::min(window, 0.5 * state.field.grid.length());
    rep.window_mass = window_mass(state.field, cfg.k, track_center(state.field, cfg.k, lam), lam);
    rep.dt = dt_used;
    result.reports.push_back(rep);
    if (cb.on_report) cb.on_report(rep);
    // the tail ring holds the report-cadence states; concentration
    // diagnostics want snapshots spread across the collapse, not the last
    // few micro-steps before the floor
    tail.emplace_back(state.time, state.field);
    if (tail.size() > 16) tail.pop_front();
  };

  // history of the blow-up criterion norm S(t) = ||u||_{L^{5k/4}_x L^{5k/2}_{[0,t]}}
  std::vector<std::pair<double, double>> s_history{{0.0, 0.0}};
  auto current_strichartz = [&]() {
    return state.strichartz_acc.sample_count() >= 2
               ? state.strichartz_acc.mixed_norm(Rational(5 * cfg.k, 4),
                                                 Rational(5 * cfg.k, 2), 0.0)
               : 0.0;
  };
  auto half_ratio = [&]() {
    const double t_half = 0.5 * state.time;
    double s_half = 0.0;
    for (size_t i = 1; i < s_history.size(); ++i) {
      if (s_history[i].first >= t_half) {
        const auto& [t0v, s0] = s_history[i - 1];
        const auto& [t1v, s1] = s_history[i];
        s_half = t1v > t0v ? s0 + (s1 - s0) * (t_half - t0v) / (t1v - t0v) : s1;
        break;
      }
    }
    const double s_last = s_history.back().second;
    if (s_half <= 0.0) return s_last > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
    return s_last / s_half;
  };

  bool stopped = false;
  auto stop = [&](StopReason reason, bool fired) {
    stopped = true;
    result.verdict.fired = fired;
    result.verdict.reason = reason;
    result.verdict.t_last = state.time;
    result.verdict.hs_growth_factor = growth;
    result.verdict.strichartz_final = current_strichartz();
    result.verdict.strichartz_half_ratio = half_ratio();
    state.events.push_back({state.time, "stop", to_string(reason)});
  };

  emit_report(state.dt);
  next_report = cfg.report_cadence;
  if (cb.on_snapshot && cfg.snapshot_cadence > 0.0) cb.on_snapshot(state.field, 0.0);

  const double t_eps = 1e-12 * std::max(1.0, std::abs(cfg.t_end));
  double dt = std::min(cfg.dt_init, cfl_cap(state.field, cfg, cutoff));

  while (!stopped && state.time < cfg.t_end - t_eps) {
    dt = std::min({dt, cfg.dt_init, cfg.t_end - state.time});
    const bool final_fit = cfg.t_end - state.time <= std::max(dt, cfg.dt_floor) * (1.0 + 1e-12);
    if (!final_fit) dt = std::max(dt, cfg.dt_floor);

    Field accepted(state.field.grid);
    double err = 0.0;
    if (cfg.adaptive) {
      bool done = false;
      while (!done) {
        Field big(state.field.grid), half(state.field.grid), small(state.field.grid);
        bool ok = try_strang(state.field, dt, cfg, &big) &&
                  try_strang(state.field, 0.5 * dt, cfg, &half) &&
                  try_strang(half, 0.5 * dt, cfg, &small);
        if (!ok) {
          err = std::numeric_limits<double>::infinity();
        } else {
          const double scale = std::max(mass(small), 1e-300);
          err = l2_diff(big, small) / std::sqrt(scale);
        }
        if (err <= cfg.error_tol) {
          accepted = std::move(small);
          done = true;
        } else if (dt <= cfg.dt_floor * (1.0 + 1e-12)) {
          // cannot meet the tolerance at the floor: stop without accepting.
          // The stop counts as a blow-up verdict when the critical norm has
          // grown, or when the blow-up criterion norm is accumulating
          // super-linearly (its divergence is the finite-time signature; the
          // critical norm itself stays bounded in the Type II scenario).
          state.events.push_back({state.time, "dt_floor",
                                  "error " + std::to_string(err) + " above tolerance at dt_floor"});
          const bool fired = growth >= cfg.dt_floor_growth ||
                             half_ratio() >= cfg.strichartz_fire_ratio;
          stop(StopReason::DtFloor, fired);
          done = true;
        } else {
          const double shrink = std::isfinite(err)
                                    ? std::clamp(0.9 * std::cbrt(cfg.error_tol / err), 0.1, 0.7)
                                    : 0.5;
          if (!std::isfinite(err))
            state.events.push_back({state.time, "blowup_candidate",
                                    "non-finite step output; rolled back, dt halved"});
          dt = std::max(cfg.dt_floor, shrink * dt);
        }
      }
      if (stopped) break;
    } else {
      if (!try_strang(state.field, dt, cfg, &accepted)) {
        state.events.push_back({state.time, "blowup_candidate", "non-finite step output"});
        stop(StopReason::DtFloor, growth >= cfg.dt_floor_growth ||
                                      half_ratio() >= cfg.strichartz_fire_ratio);
        break;
      }
    }

    state.field = std::move(accepted);
    state.time += dt;
    state.strichartz_acc.add_sample(state.field, state.time);
    s_history.emplace_back(state.time, current_strichartz());
    const double dt_used = dt;

    const double hsk = sobolev_norm(state.field, sk);
    growth = hs0 > 0.0 ? hsk / hs0 : 1.0;

    if (!boundary_decay_ok(state.field)) {
      if (!boundary_warned) {
        boundary_warned = true;
        state.strichartz_acc.set_truncation_flag();
        state.events.push_back({state.time, "boundary_decay_warning",
                                "outer 5% of the box above 1e-8 of the sup norm"});
      }
      if (cfg.boundary_stop_ratio > 0.0 &&
          boundary_max_abs(state.field) > cfg.boundary_stop_ratio * max_abs(state.field)) {
        stop(StopReason::BoundaryOverflow, false);
        break;
      }
    }

    if (growth >= cfg.norm_growth_cap) {
      state.events.push_back({state.time, "norm_cap",
                              "critical norm growth " + std::to_string(growth)});
      stop(StopReason::NormCap, true);
      break;
    }

    if (state.time >= next_report - t_eps) {
      emit_report(dt_used);
      while (next_report <= state.time + t_eps) next_report += cfg.report_cadence;
    }
    if (cb.on_snapshot && cfg.snapshot_cadence > 0.0 && state.time >= next_snapshot - t_eps) {
      cb.on_snapshot(state.field, state.time);
      while (next_snapshot <= state.time + t_eps) next_snapshot += cfg.snapshot_cadence;
    }

    if (cfg.adaptive) {
      const double grow = err > 0.0 ? std::clamp(0.9 * std::cbrt(cfg.error_tol / err), 0.2, 4.0) : 4.0;
      dt = std::clamp(grow * dt, cfg.dt_floor, cfg.dt_init);
      dt = std::min(dt, cfl_cap(state.field, cfg, cutoff));
      dt = std::max(dt, cfg.dt_floor);
    }
  }

  if (!stopped) stop(StopReason::Completed, false);

  if (result.reports.empty() || result.reports.back().time < state.time - t_eps)
    emit_report(dt);
  if (cb.on_snapshot && cfg.snapshot_cadence > 0.0) cb.on_snapshot(state.field, state.time);

  result.tail_snapshots.assign(tail.begin(), tail.end());
  return result;
}

}  // namespace gkdv
