#ifndef GKDV_SRC_WINDOW_SCAN_HPP
#define GKDV_SRC_WINDOW_SCAN_HPP

#include <vector>

#include "gkdv/grid.hpp"

namespace gkdv {
namespace detail {

// Periodic prefix sums over two unwrapped periods of a density; windowed
// sums and their argmax then cost O(1) and O(n).
struct WindowScan {
  WindowScan(const std::vector<double>& rho, const Grid1D& g) : grid(g), prefix(2 * g.n() + 1, 0.0) {
    for (int i = 0; i < 2 * g.n(); ++i) prefix[i + 1] = prefix[i] + rho[i % g.n()];
  }

  // sum of rho*dx over indices [center-radius, center+radius] (periodic)
  double mass(int center, int radius) const {
    const int n = grid.n();
    const int count = std::min(2 * radius + 1, n);
    int lo = center - radius;
    if (lo < 0) lo += n;
    return (prefix[lo + count] - prefix[lo]) * grid.dx();
  }

  // leftmost center maximizing the windowed mass
  int argmax(int radius, double* best_mass = nullptr) const {
    const int n = grid.n();
    int best = 0;
    double bm = -1.0;
    for (int i = 0; i < n; ++i) {
      const double m = mass(i, radius);
      if (m > bm + 1e-12 * (bm > 0 ? bm : 0.0)) {
        bm = m;
        best = i;
      }
    }
    if (best_mass) *best_mass = bm;
    return best;
  }

  Grid1D grid;
  std::vector<double> prefix;
};

}  // namespace detail
}  // namespace gkdv

#endif
