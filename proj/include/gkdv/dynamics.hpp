#ifndef GKDV_DYNAMICS_HPP
#define GKDV_DYNAMICS_HPP

#include <functional>
#include <string>
#include <vector>

#include "gkdv/functionals.hpp"

namespace gkdv {

struct SolverConfig {
  int k = 5;                    // nonlinearity power, >= 4
  double dt_init = 1e-3;        // initial and maximal step
  double dt_floor = 1e-7;       // smallest admissible step
  double t_end = 1.0;
  double dealias_pad = 0.0;     // 0 -> (k+2)/2
  double cfl_safety = 0.5;      // fraction of the RK4 advective stability limit
  double norm_growth_cap = 2.0; // critical-norm growth factor that fires the verdict

  double error_tol = 1e-8;      // step-doubling local error target (relative L^2)
  double dt_floor_growth = 1.005;   // critical-norm growth gating the dt-floor route
  double strichartz_fire_ratio = 1.5;  // alternative gate: S(t)/S(t/2) at the floor
  double boundary_stop_ratio = 0.0;  // outer-5% amplitude ratio forcing a stop; 0 disables
  double report_cadence = 0.05;
  double snapshot_cadence = 0.0;     // 0 -> no snapshot callbacks
  double report_window = 0.0;        // window half-width for the report's window_mass; 0 -> L/8
  double strichartz_window = 1.0;    // length of the accumulator increment windows
  bool adaptive = true;              // false: fixed dt = dt_init, no error control
  bool enable_nonlinearity = true;   // test hook; false reduces the step to the Airy flow
  bool check_initial_decay = true;   // continuation legs of an earlier run skip the precondition

  double pad() const { return dealias_pad > 0.0 ? dealias_pad : 0.5 * (k + 2); }
  void validate() const;
};

struct Event {
  double time;
  std::string kind;
  std::string payload;
};

struct SimState {
  SimState(const Field& u, const SolverConfig& cfg)
      : field(u),
        time(0.0),
        dt(cfg.dt_init),
        strichartz_acc(u.grid, cfg.k, default_tracked_pairs(cfg.k), cfg.strichartz_window) {}

  Field field;
  double time;
  double dt;
  StrichartzAccumulator strichartz_acc;
  std::vector<Event> events;
};

enum class StopReason { DtFloor, NormCap, Completed, BoundaryOverflow };

std::string to_string(StopReason r);

struct BlowupVerdict {
  bool fired = false;
  double t_last = 0.0;
  double hs_growth_factor = 1.0;
  double strichartz_final = 0.0;  // L^{5k/4}_x L^{5k/2}_{[0,t_last]}
  // S(t_last) over S(t_last/2): super-linear accumulation of the blow-up
  // criterion norm; ~1 on global trajectories
  double strichartz_half_ratio = 1.0;
  StopReason reason = StopReason::Completed;
};

/// Zero modes above the n/(2*pad) band. pad >= (k+2)/2 removes every aliased
/// contribution of the (k+1)-fold product.
SpectralField dealias(const SpectralField& f, double pad);

/// One Strang step of length dt: half nonlinear substep (RK4 on
/// u_t = -(u^{k+1})_x with spectral derivative and dealiasing), exact Airy
/// flow, half nonlinear substep.
Field strang_step(const Field& u, double dt, const SolverConfig& cfg);

/// Spec-level step: advances state by state.dt. A non-finite result rolls
/// back to the pre-step state with dt halved and logs a blow-up candidate
/// event.
SimState step(const SimState& state, const SolverConfig& cfg);

struct RunCallbacks {
  std::function<void(const NormReport&)> on_report;
  std::function<void(const Field&, double)> on_snapshot;
};

struct RunResult {
  SimState state;
  BlowupVerdict verdict;
  std::vector<NormReport> reports;
  /// Last few accepted states, oldest first; concentration diagnostics read
  /// these after a fired verdict.
  std::vector<std::pair<double, Field>> tail_snapshots;
};

/// Integrate u0 to t_end or until a stop event. Step-doubling error control
/// keeps the relative local L^2 error under cfg.error_tol with
/// dt in [dt_floor, dt_init]. The verdict fires when the critical norm
/// exceeds norm_growth_cap times its initial value, or when the controller
/// is pushed below dt_floor while either the critical norm has grown by
/// dt_floor_growth or the blow-up criterion norm is accumulating
/// super-linearly (strichartz_half_ratio >= strichartz_fire_ratio).
RunResult run(const Field& u0, const SolverConfig& cfg, const RunCallbacks& cb = {});

}  // namespace gkdv

#endif
