#ifndef GKDV_CONCENTRATION_HPP
#define GKDV_CONCENTRATION_HPP

#include <utility>
#include <vector>

#include "gkdv/field.hpp"

namespace gkdv {

/// Window-size law lambda(t) used by the concentration diagnostics. The
/// power law lambda = c (T* - t)^e is admissible only for e < 1/3, which is
/// exactly the regime where the window shrinks more slowly than the
/// self-similar rate and lambda^{-1} (T*-t)^{1/3} -> 0.
struct WindowLaw {
  enum class Kind { Power, Fixed };
  Kind kind = Kind::Fixed;
  double c = 1.0;        // power-law prefactor
  double exponent = 0.0; // power-law exponent, < 1/3
  double value = 1.0;    // fixed window size

  static WindowLaw power(double c, double exponent);
  static WindowLaw fixed(double value);

  /// Window size at remaining time T* - t (> 0).
  double lambda(double t_remaining) const;
};

/// integral over |x - x0| <= lam of |D^{s_k} f|^2 dx (periodic distance,
/// rectangle rule). Requires lam <= L/2.
double window_mass(const Field& f, int k, double x0, double lam);

/// Grid position maximizing window_mass(f, ., lam); leftmost maximizer on
/// ties. O(n) via prefix sums of the critical density.
double track_center(const Field& f, int k, double lam);

struct ConcentrationEntry {
  double time = 0.0;
  double lambda = 0.0;
  double x0 = 0.0;
  double window_mass = 0.0;
  double fraction = 0.0;  // window mass over the full critical norm squared
  bool resolution_exhausted = false;  // lambda fell below 4 dx
};

/// Evaluate the window law along a snapshot sequence; t_star must exceed
/// every snapshot time.
std::vector<ConcentrationEntry> concentration_series(
    const std::vector<std::pair<double, Field>>& snapshots, int k,
    const WindowLaw& law, double t_star);

}  // namespace gkdv

#endif
