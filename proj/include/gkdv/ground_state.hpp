#ifndef GKDV_GROUND_STATE_HPP
#define GKDV_GROUND_STATE_HPP

#include "gkdv/field.hpp"

namespace gkdv {

/// The positive even decaying solution of Q'' - Q + Q^{k+1} = 0 sampled on a
/// grid, with its exactly known functionals.
struct GroundState {
  int k = 0;
  Field profile;
  double mass_q = 0.0;
  double energy_q = 0.0;
  double hsk_norm_q = 0.0;
};

/// Pointwise ground state Q(x) = ((k+2)/2 sech^2(k x / 2))^{1/k}, stable for
/// large |x|.
double ground_state_value(int k, double x);

/// Sample Q centered at 0; DomainOverflowError when the box is too short for
/// Q to decay below 1e-12 at the edges (Q ~ e^{-|x|}).
GroundState ground_state(int k, const Grid1D& grid);

/// Speed-c traveling wave Q_c(x) = c^{1/k} Q(sqrt(c) x); u(x,t) = Q_c(x - ct)
/// solves the evolution equation exactly.
Field soliton(int k, double c, const Grid1D& grid);

/// sup |Q'' - cQ + Q^{k+1}| with spectral derivatives; the construction-time
/// self-check and the test hook.
double soliton_residual(const Field& profile, int k, double c = 1.0);

}  // namespace gkdv

#endif
