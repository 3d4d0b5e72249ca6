#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gkdv/concentration.hpp"
#include "gkdv/dynamics.hpp"
#include "gkdv/functionals.hpp"
#include "gkdv/ground_state.hpp"
#include "gkdv/spectral.hpp"

using namespace gkdv;

TEST_CASE("window law admissibility") {
  CHECK_THROWS_AS(WindowLaw::power(1.0, 1.0 / 3.0), ContractError);
  CHECK_THROWS_AS(WindowLaw::power(1.0, 0.5), ContractError);
  CHECK_THROWS_AS(WindowLaw::power(-1.0, 0.2), ContractError);
  CHECK_THROWS_AS(WindowLaw::fixed(0.0), ContractError);

  WindowLaw p = WindowLaw::power(2.0, 0.2);
  CHECK(p.lambda(1.0) == doctest::Approx(2.0));
  CHECK(p.lambda(1e-5) == doctest::Approx(2.0 * std::pow(1e-5, 0.2)));
  // the admissible exponent makes lambda^{-1} (T*-t)^{1/3} vanish
  CHECK(std::pow(1e-6, 1.0 / 3.0) / p.lambda(1e-6) <
        std::pow(1e-3, 1.0 / 3.0) / p.lambda(1e-3));

  WindowLaw f = WindowLaw::fixed(7.0);
  CHECK(f.lambda(0.123) == doctest::Approx(7.0));
}

TEST_CASE("window mass: full window equals the critical norm squared") {
  const int k = 5;
  Grid1D g(512, 50.0);
  Field f = sample(g, [](double x) { return std::exp(-x * x / 9.0) * std::cos(2.0 * x); });
  const double full = window_mass(f, k, 1.7, 0.5 * g.length());
  const double hsk = sobolev_norm(f, critical_exponent(k));
  CHECK(full == doctest::Approx(hsk * hsk).epsilon(1e-12));

  CHECK(window_mass(Field(g), k, 0.0, 5.0) == 0.0);
  CHECK_THROWS_AS(window_mass(f, k, 0.0, 0.51 * g.length()), ContractError);
}

TEST_CASE("window mass: exponentially localized critical density concentrates") {
  const int k = 5;
  Grid1D g(1024, 60.0);
  // a mean-free localized profile: the window captures essentially all of it
  Field psi = sample(g, [](double x) { return (1.0 - x * x) * std::exp(-0.5 * x * x); });
  const double hsk = sobolev_norm(psi, critical_exponent(k));
  CHECK(window_mass(psi, k, 0.0, 5.0) >= 0.99 * hsk * hsk);

  // literal Q carries mass at the lowest box modes; killing the mean leaves
  // a box-wide residue whose share shrinks only like 1/L, so the captured
  // fraction is box-limited (whole-line value ~0.998)
  GroundState gs = ground_state(k, g);
  const double hsk2 = gs.hsk_norm_q * gs.hsk_norm_q;
  CHECK(window_mass(gs.profile, k, 0.0, 5.0) >= 0.93 * hsk2);
}

TEST_CASE("window mass is monotone in the window size") {
  const int k = 6;
  Grid1D g(512, 50.0);
  Field f = sample(g, [](double x) { return x * std::exp(-x * x / 4.0); });
  double prev = 0.0;
  for (double lam : {1.0, 2.0, 4.0, 8.0, 16.0, 25.0}) {
    const double m = window_mass(f, k, 0.0, lam);
    CHECK(m >= prev);
    prev = m;
  }
}

TEST_CASE("track_center finds the bump, breaks ties leftward, maximizes") {
  const int k = 5;
  Grid1D g(1024, 60.0);
  auto bump_at = [&](double c) {
    return sample(g, [c](double x) {
      const double y = x - c;
      return (1.0 - y * y) * std::exp(-0.5 * y * y);
    });
  };
  Field moved = bump_at(3.0);
  const double x0 = track_center(moved, k, 5.0);
  CHECK(std::abs(x0 - 3.0) <= g.dx());

  // literal Q with a window tight enough that its own tail dominates the
  // box-IR background at the window edge; wider windows see a flat top whose
  // argmax wanders (all those centers capture the same mass to ~0.1%)
  GroundState gs = ground_state(k, g);
  CHECK(std::abs(track_center(translate(gs.profile, 3.0), k, 2.0) - 3.0) <= g.dx());

  // two identical bumps: leftmost window wins
  Field twin = bump_at(-10.0) + bump_at(10.0);
  const double tie = track_center(twin, k, 5.0);
  CHECK(std::abs(tie + 10.0) <= 2.0 * g.dx());

  // argmax dominates every grid center
  const double best = window_mass(moved, k, track_center(moved, k, 4.0), 4.0);
  for (double probe : {-20.0, -5.0, 0.0, 2.5, 3.5, 14.0})
    CHECK(best >= window_mass(moved, k, probe, 4.0) * (1.0 - 1e-12));
}

TEST_CASE("window mass is invariant under the scaling map") {
  const int k = 5;
  Grid1D g(1024, 80.0);
  Field f = sample(g, [](double x) { return std::cos(2.0 * x) * std::exp(-x * x / 9.0); });
  const double lam = 2.0;
  Field scaled = rescale(f, lam, k);
  // grid-commensurate window (5.0 = 64 dx) so both scales see index-exact
  // windows; the comparison then probes the density identity, not the
  // window quantization
  // window edges parked in the density tail; commensurate with the grid at
  // both scales (10 = 128 dx)
  const double before = window_mass(f, k, 0.0, 10.0);
  const double after = window_mass(scaled, k, 0.0, 10.0 / lam);
  CHECK(after == doctest::Approx(before).epsilon(1e-6));
}

TEST_CASE("concentration series: fractions bounded, t_star contract, resolution flag") {
  const int k = 5;
  Grid1D g(512, 60.0);
  GroundState gs = ground_state(k, g);
  std::vector<std::pair<double, Field>> snaps;
  for (double t : {0.0, 0.5, 1.0}) snaps.emplace_back(t, airy_propagate(gs.profile, t));

  CHECK_THROWS_AS(concentration_series(snaps, k, WindowLaw::fixed(5.0), 1.0), ContractError);

  auto series = concentration_series(snaps, k, WindowLaw::fixed(5.0), 2.0);
  for (const auto& e : series) {
    CHECK(e.fraction >= 0.0);
    CHECK(e.fraction <= 1.0 + 1e-10);
    CHECK_FALSE(e.resolution_exhausted);
  }

  auto narrow = concentration_series(snaps, k, WindowLaw::power(0.1, 0.2), 1.0 + 1e-4);
  CHECK(narrow.back().resolution_exhausted);
}

TEST_CASE("dispersive run: the captured fraction decays") {
  const int k = 5;
  Grid1D g(512, 60.0);
  GroundState gs = ground_state(k, g);
  SolverConfig cfg;
  cfg.k = k;
  cfg.t_end = 3.0;
  cfg.error_tol = 1e-6;
  cfg.report_cadence = 0.25;
  RunResult r = run(0.1 * gs.profile, cfg);
  REQUIRE(r.verdict.reason == StopReason::Completed);

  auto series = concentration_series(r.tail_snapshots, k, WindowLaw::fixed(5.0), cfg.t_end + 1.0);
  REQUIRE(series.size() >= 8);
  CHECK(series.back().fraction < 0.85 * series.front().fraction);
  // broadly decaying: each entry below the running max of its predecessors
  double peak = series.front().fraction;
  for (const auto& e : series) {
    CHECK(e.fraction <= peak * 1.02);
    peak = std::max(peak, e.fraction);
  }
}

TEST_CASE("traveling soliton: fixed window tracks and the fraction stays put") {
  const int k = 5;
  Grid1D g(1024, 60.0);
  Field q = soliton(k, 1.0, g);
  SolverConfig cfg;
  cfg.k = k;
  cfg.t_end = 1.0;
  cfg.error_tol = 1e-6;
  cfg.report_cadence = 0.1;
  RunResult r = run(q, cfg);
  REQUIRE(r.verdict.reason == StopReason::Completed);

  auto series = concentration_series(r.tail_snapshots, k, WindowLaw::fixed(10.0), cfg.t_end + 1.0);
  REQUIRE(series.size() >= 5);
  const double f0 = series.front().fraction;
  for (const auto& e : series) CHECK(std::abs(e.fraction - f0) <= 0.01 * f0);
  // the tracker follows the wave: x0 advances with unit speed
  CHECK(series.back().x0 - series.front().x0 ==
        doctest::Approx(series.back().time - series.front().time).epsilon(0.15));
}
