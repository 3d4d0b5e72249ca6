#include "gkdv/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "gkdv/spectral.hpp"
#include "window_scan.hpp"

namespace gkdv {

Field synthesize(const std::vector<ProfileParams>& profiles, double t,
                 const Grid1D& grid, int k) {
  Field sum(grid);
  for (const ProfileParams& p : profiles) {
    if (!(p.h > 0.0)) throw ContractError("synthesize: profile scale h must be positive");
    if (p.psi.grid != grid) throw ContractError("synthesize: profile grid mismatch");
    Field w = airy_propagate(p.psi, (t - p.t0) / (p.h * p.h * p.h));
    Field b = translate(rescale(w, 1.0 / p.h, k), p.x0);
    if (!boundary_decay_ok(b))
      throw DomainOverflowError("synthesize: bubble violates the boundary-decay threshold");
    sum = sum + b;
  }
  return sum;
}

double pairwise_divergence(const ProfileParams& a, const ProfileParams& b) {
  const double h3 = a.h * a.h * a.h;
  return a.h / b.h + b.h / a.h + std::abs(a.t0 - b.t0) / h3 + std::abs(a.x0 - b.x0) / a.h;
}

double divergence_stat(const ProfileParams& a, const ProfileParams& b) {
  return std::min(pairwise_divergence(a, b), pairwise_divergence(b, a));
}

namespace {

// critical-norm inner product <f,g> = sum |xi|^{2 s_k} Re(f g*) dx^2/L
double hsk_inner(const SpectralField& a, const SpectralField& b, double sk) {
  const int n = a.grid.n();
  const double weight = a.grid.dx() * a.grid.dx() / a.grid.length();
  double sum = 0.0;
  for (int m = 1; m < n; ++m) {
    const double xi = std::abs(a.grid.xi(m));
    sum += std::pow(xi, 2.0 * sk) * (a.coeffs[m] * std::conj(b.coeffs[m])).real();
  }
  return sum * weight;
}

std::vector<double> critical_density(const Field& f, int k) {
  const Field d = fractional_derivative(f, critical_exponent(k));
  std::vector<double> rho(f.grid.n());
  for (int i = 0; i < f.grid.n(); ++i) rho[i] = d[i] * d[i];
  return rho;
}

// cosine-tapered window: 1 on the core, smooth ramp to 0 at half-width `hw`
Field tapered_window(const Field& v, double x0, double hw, double taper_fraction) {
  const Grid1D& g = v.grid;
  const double ramp = std::max(taper_fraction * hw, 2.0 * g.dx());
  Field out(g);
  for (int i = 0; i < g.n(); ++i) {
    double d = std::fmod(std::abs(g.x(i) - x0), g.length());
    d = std::min(d, g.length() - d);
    double w = 0.0;
    if (d <= hw - ramp) {
      w = 1.0;
    } else if (d < hw) {
      w = 0.5 * (1.0 + std::cos(M_PI * (d - (hw - ramp)) / ramp));
    }
    out[i] = w * v[i];
  }
  return out;
}

}  // namespace

double linear_strichartz_proxy(const Field& f, int k, double horizon, int samples) {
  if (samples < 2) throw ContractError("linear_strichartz_proxy: need at least 2 samples");
  StrichartzAccumulator acc(f.grid, k, {{Rational(5 * k, 4), Rational(5 * k, 2), 0.0}},
                            /*window_length=*/0.0);
  SpectralField s = forward_transform(f);
  const double dt = horizon / (samples - 1);
  for (int i = 0; i < samples; ++i) {
    SpectralField si = s;
    airy_propagate_inplace(si, i * dt);
    acc.add_sample(inverse_transform(si), i * dt);
  }
  return acc.mixed_norm(Rational(5 * k, 4), Rational(5 * k, 2), 0.0);
}

DecompositionReport extract_profiles(const Field& v, int k, const ExtractionConfig& cfg) {
  ensure_finite(v, "extract_profiles");
  if (std::abs(mean(v)) > 1e-9 * std::max(max_abs(v), 1e-300))
    throw ContractError("extract_profiles: input must be mean-zero");
  if (cfg.max_profiles < 1) throw ContractError("extract_profiles: max_profiles must be >= 1");

  const Grid1D& g = v.grid;
  const double sk = critical_exponent(k);
  const double L = g.length();

  DecompositionReport report{{}, v, 0.0, 0.0, {}, 0.0};
  {
    SpectralField sv = forward_transform(v);
    report.input_hsk_sq = hsk_inner(sv, sv, sk);
  }

  // dyadic ladder: the search window W*h must be resolvable and the
  // saturation window 4*W*h must fit in half the box
  const double W = cfg.window_width;
  const int m_min = static_cast<int>(std::ceil(std::log2(4.0 * g.dx() / W)));
  const int m_max = static_cast<int>(std::floor(std::log2(L / (2.0 * 4.0 * W))));
  if (m_max < m_min)
    throw ContractError("extract_profiles: grid leaves no admissible scale ladder");
  // a recovered profile always has footprint extract_factor*W at unit scale,
  // independent of h; the box must be able to hold it
  if (cfg.extract_factor * W > 0.45 * L)
    throw ContractError("extract_profiles: box too short for unit-scale profiles (needs length > " +
                        std::to_string(cfg.extract_factor * W / 0.45) + ")");

  Field rem = v;
  for (int iter = 0; iter < cfg.max_profiles; ++iter) {
    report.remainder_strichartz =
        linear_strichartz_proxy(rem, k, cfg.horizon, cfg.horizon_samples);
    if (cfg.strichartz_stop > 0.0 && report.remainder_strichartz < cfg.strichartz_stop) break;

    const detail::WindowScan scan(critical_density(rem, k), g);
    const double total_mass = scan.mass(0, g.n());

    double chosen_h = 0.0;
    int chosen_center = 0;
    double best_density = -1.0;
    double fallback_h = 0.0;
    int fallback_center = 0;
    for (int m = m_min; m <= m_max; ++m) {
      const double h = std::ldexp(1.0, m);
      const int radius = std::max(2, static_cast<int>(std::floor(0.5 * W * h / g.dx() + 1e-9)));
      double mass1 = 0.0;
      const int center = scan.argmax(radius, &mass1);
      // windows carrying a negligible share of the field are not bubble
      // candidates, whatever their saturation ratio says
      if (mass1 <= 1e-3 * total_mass) continue;
      const double density = mass1 / (2.0 * radius + 1.0);
      if (density > best_density) {
        best_density = density;
        fallback_h = h;
        fallback_center = center;
      }
      const double mass4 = scan.mass(center, std::min(4 * radius, g.n() / 2));
      if (chosen_h == 0.0 && mass4 <= cfg.capture_ratio * mass1) {
        chosen_h = h;
        chosen_center = center;
      }
    }
    if (chosen_h == 0.0) {
      // no saturated scale (incoherent content): take the densest window
      if (fallback_h == 0.0) break;  // nothing left to extract
      chosen_h = fallback_h;
      chosen_center = fallback_center;
    }

    const double x0 = g.x(chosen_center);
    const double hw = 0.5 * cfg.extract_factor * W * chosen_h;
    const Field windowed = tapered_window(rem, x0, hw, cfg.taper_fraction);

    const SpectralField sr = forward_transform(rem);
    const SpectralField sw = forward_transform(windowed);
    const double ww = hsk_inner(sw, sw, sk);
    if (ww <= 0.0) break;
    const double beta = hsk_inner(sr, sw, sk) / ww;

    const Field bubble = beta * windowed;
    rem = rem - bubble;

    try {
      ProfileParams p{chosen_h, x0, 0.0, rescale(translate(bubble, -x0), chosen_h, k)};
      report.profiles.push_back(std::move(p));
    } catch (const DomainOverflowError& e) {
      throw DomainOverflowError("extract_profiles: cannot map the window at h=" +
                                std::to_string(chosen_h) + ", x0=" + std::to_string(x0) +
                                " to unit scale: " + e.what());
    }
  }

  report.remainder = rem;
  report.remainder_strichartz =
      linear_strichartz_proxy(rem, k, cfg.horizon, cfg.horizon_samples);

  const SpectralField srem = forward_transform(rem);
  double psi_sum = 0.0;
  for (const ProfileParams& p : report.profiles) {
    const double nrm = sobolev_norm(p.psi, sk);
    psi_sum += nrm * nrm;
  }
  report.pythagorean_defect = report.input_hsk_sq - psi_sum - hsk_inner(srem, srem, sk);

  const size_t J = report.profiles.size();
  report.gamma.assign(J, std::vector<double>(J, 2.0));
  for (size_t i = 0; i < J; ++i)
    for (size_t j = 0; j < J; ++j)
      if (i != j) report.gamma[i][j] = divergence_stat(report.profiles[i], report.profiles[j]);

  return report;
}

namespace {

Field reflect(const Field& f) {
  const int n = f.grid.n();
  Field r(f.grid);
  r[0] = f[0];
  for (int i = 1; i < n; ++i) r[i] = f[n - i];
  return r;
}

// integrate forward or backward by |span| using the time-reversal symmetry
// u(x,t) -> u(-x,-t) of the equation
std::pair<Field, bool> integrate_by(const Field& u, double span, const SolverConfig& base) {
  if (span == 0.0) return {u, true};
  SolverConfig cfg = base;
  cfg.t_end = std::abs(span);
  cfg.report_cadence = std::max(cfg.t_end, 1.0);
  cfg.snapshot_cadence = 0.0;
  cfg.check_initial_decay = false;  // chained legs inherit dispersal from earlier legs
  const bool backward = span < 0.0;
  const Field start = backward ? reflect(u) : u;
  RunResult r = run(start, cfg);
  const bool reached = r.verdict.reason == StopReason::Completed;
  return {backward ? reflect(r.state.field) : r.state.field, reached};
}

}  // namespace

NonlinearProfileResult nonlinear_profile(const Field& psi, const std::vector<double>& t_seq,
                                         double t_bar, int k, const SolverConfig& cfg) {
  if (!std::isfinite(t_bar)) throw ContractError("nonlinear_profile: t_bar must be finite");
  SolverConfig c = cfg;
  c.k = k;

  NonlinearProfileResult out;
  out.times = t_seq;
  out.trajectory.reserve(t_seq.size());
  out.discrepancies.assign(t_seq.size(), std::numeric_limits<double>::quiet_NaN());

  const Field data = airy_propagate(psi, t_bar);
  const double sk = critical_exponent(k);

  // visit targets sorted by distance from t_bar, forward and backward legs
  // chained independently so each target is integrated over exactly once
  std::vector<size_t> order(t_seq.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return std::abs(t_seq[a] - t_bar) < std::abs(t_seq[b] - t_bar);
  });

  Field fwd = data, bwd = data;
  double t_fwd = t_bar, t_bwd = t_bar;
  bool fwd_ok = true, bwd_ok = true;

  std::vector<Field> traj(t_seq.size(), Field(psi.grid));
  for (size_t idx : order) {
    const double target = t_seq[idx];
    bool ok = false;
    Field at_target(psi.grid);
    if (target >= t_bar) {
      if (fwd_ok) {
        auto [f, reached] = integrate_by(fwd, target - t_fwd, c);
        fwd = std::move(f);
        if (reached) t_fwd = target;
        fwd_ok = reached;
        ok = reached;
        at_target = fwd;
      }
    } else {
      if (bwd_ok) {
        auto [f, reached] = integrate_by(bwd, target - t_bwd, c);
        bwd = std::move(f);
        if (reached) t_bwd = target;
        bwd_ok = reached;
        ok = reached;
        at_target = bwd;
      }
    }
    if (!ok) {
      out.complete = false;
      continue;
    }
    traj[idx] = at_target;
    const Field lin = airy_propagate(psi, target);
    out.discrepancies[idx] = sobolev_norm(at_target - lin, sk);
  }
  out.trajectory = std::move(traj);
  return out;
}

}  // namespace gkdv
