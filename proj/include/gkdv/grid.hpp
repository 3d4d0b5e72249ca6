#ifndef GKDV_GRID_HPP
#define GKDV_GRID_HPP

#include <cmath>

#include "gkdv/errors.hpp"

namespace gkdv {

/// Uniform periodic grid on [-L/2, L/2) with a power-of-two number of points.
///
/// The dual lattice carries the frequencies xi_m = 2*pi*m/L with
/// m in {-n/2, ..., n/2 - 1}; storage order follows the FFT convention
/// (m = 0, 1, ..., n/2-1, -n/2, ..., -1).
class Grid1D {
 public:
  Grid1D(int n_points, double length) : n_(n_points), length_(length) {
    if (n_ < 8 || (n_ & (n_ - 1)) != 0)
      throw ContractError("Grid1D: n_points must be a power of two >= 8");
    if (!(length_ > 0.0) || !std::isfinite(length_))
      throw ContractError("Grid1D: length must be positive and finite");
    dx_ = length_ / n_;
  }

  int n() const { return n_; }
  double length() const { return length_; }
  double dx() const { return dx_; }

  double x(int i) const { return -0.5 * length_ + i * dx_; }

  /// Signed mode number for FFT storage index m; the Nyquist slot maps to -n/2.
  int signed_mode(int m) const { return m <= n_ / 2 - 1 ? m : m - n_; }

  double xi(int m) const { return 2.0 * M_PI * signed_mode(m) / length_; }

  double xi_max() const { return M_PI * n_ / length_; }

  /// Index of the grid point nearest to x (periodic wrap).
  int nearest_index(double xq) const {
    double u = (xq + 0.5 * length_) / dx_;
    long i = std::lround(u);
    long m = i % n_;
    if (m < 0) m += n_;
    return static_cast<int>(m);
  }

  friend bool operator==(const Grid1D& a, const Grid1D& b) {
    return a.n_ == b.n_ && a.length_ == b.length_;
  }
  friend bool operator!=(const Grid1D& a, const Grid1D& b) { return !(a == b); }

 private:
  int n_;
  double length_;
  double dx_;
};

}  // namespace gkdv

#endif
