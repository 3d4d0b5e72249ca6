#include "gkdv/ground_state.hpp"

#include <cmath>

#include "gkdv/functionals.hpp"
#include "gkdv/spectral.hpp"

namespace gkdv {

double ground_state_value(int k, double x) {
  // sech^{2/k}(k x / 2) via exponentials; no overflow for large |x|
  const double z = 0.5 * k * std::abs(x);
  const double e = std::exp(-z);
  const double sech = 2.0 * e / (1.0 + e * e);
  return std::pow(0.5 * (k + 2), 1.0 / k) * std::pow(sech, 2.0 / k);
}

GroundState ground_state(int k, const Grid1D& grid) {
  if (k < 1) throw ContractError("ground_state: k must be >= 1");
  const double edge = ground_state_value(k, 0.5 * grid.length());
  if (edge > 1e-12)
    throw DomainOverflowError("ground_state: box too short, Q(edge) = " + std::to_string(edge));

  GroundState gs{k, Field(grid), 0.0, 0.0, 0.0};
  for (int i = 0; i < grid.n(); ++i) gs.profile[i] = ground_state_value(k, grid.x(i));
  gs.mass_q = mass(gs.profile);
  gs.energy_q = energy(gs.profile, k);
  gs.hsk_norm_q = sobolev_norm(gs.profile, critical_exponent(k));
  return gs;
}

Field soliton(int k, double c, const Grid1D& grid) {
  if (!(c > 0.0)) throw ContractError("soliton: speed c must be positive");
  const double rc = std::sqrt(c);
  const double amp = std::pow(c, 1.0 / k);
  const double edge = amp * ground_state_value(k, rc * 0.5 * grid.length());
  if (edge > 1e-12)
    throw DomainOverflowError("soliton: box too short for speed " + std::to_string(c));
  Field f(grid);
  for (int i = 0; i < grid.n(); ++i) f[i] = amp * ground_state_value(k, rc * grid.x(i));
  return f;
}

double soliton_residual(const Field& profile, int k, double c) {
  const Field qxx = derivative(profile, 2);
  double r = 0.0;
  for (int i = 0; i < profile.grid.n(); ++i) {
    const double q = profile[i];
    r = std::max(r, std::abs(qxx[i] - c * q + std::pow(q, k + 1)));
  }
  return r;
}

}  // namespace gkdv
