#include "gkdv/concentration.hpp"

#include <cmath>

#include "gkdv/functionals.hpp"
#include "gkdv/spectral.hpp"
#include "window_scan.hpp"

namespace gkdv {

WindowLaw WindowLaw::power(double c, double exponent) {
  if (!(c > 0.0)) throw ContractError("WindowLaw: prefactor must be positive");
  if (!(exponent < 1.0 / 3.0))
    throw ContractError("WindowLaw: power exponent must be < 1/3");
  WindowLaw w;
  w.kind = Kind::Power;
  w.c = c;
  w.exponent = exponent;
  return w;
}

WindowLaw WindowLaw::fixed(double value) {
  if (!(value > 0.0)) throw ContractError("WindowLaw: fixed window must be positive");
  WindowLaw w;
  w.kind = Kind::Fixed;
  w.value = value;
  return w;
}

double WindowLaw::lambda(double t_remaining) const {
  if (!(t_remaining > 0.0)) throw ContractError("WindowLaw: t_remaining must be positive");
  return kind == Kind::Power ? c * std::pow(t_remaining, exponent) : value;
}

namespace {

// |D^{s_k} f|^2 on the grid
std::vector<double> critical_density(const Field& f, int k) {
  const Field d = fractional_derivative(f, critical_exponent(k));
  std::vector<double> rho(f.grid.n());
  for (int i = 0; i < f.grid.n(); ++i) rho[i] = d[i] * d[i];
  return rho;
}

int window_radius(const Grid1D& g, double lam) {
  if (!(lam > 0.0)) throw ContractError("window: lam must be positive");
  if (lam > 0.5 * g.length() * (1.0 + 1e-12))
    throw ContractError("window: lam exceeds half the box");
  return static_cast<int>(std::floor(lam / g.dx() + 1e-9));
}

}  // namespace

double window_mass(const Field& f, int k, double x0, double lam) {
  const detail::WindowScan scan(critical_density(f, k), f.grid);
  return scan.mass(f.grid.nearest_index(x0), window_radius(f.grid, lam));
}

double track_center(const Field& f, int k, double lam) {
  const detail::WindowScan scan(critical_density(f, k), f.grid);
  return f.grid.x(scan.argmax(window_radius(f.grid, lam)));
}

std::vector<ConcentrationEntry> concentration_series(
    const std::vector<std::pair<double, Field>>& snapshots, int k,
    const WindowLaw& law, double t_star) {
  std::vector<ConcentrationEntry> out;
  out.reserve(snapshots.size());
  for (const auto& [t, f] : snapshots) {
    if (!(t_star > t))
      throw ContractError("concentration_series: t_star must exceed every snapshot time");
    ConcentrationEntry e;
    e.time = t;
    e.lambda = std::min(law.lambda(t_star - t), 0.5 * f.grid.length());
    e.resolution_exhausted = e.lambda < 4.0 * f.grid.dx();
    e.x0 = track_center(f, k, e.lambda);
    e.window_mass = window_mass(f, k, e.x0, e.lambda);
    const double hsk = sobolev_norm(f, critical_exponent(k));
    e.fraction = hsk > 0.0 ? e.window_mass / (hsk * hsk) : 0.0;
    out.push_back(e);
  }
  return out;
}

}  // namespace gkdv
