#ifndef GKDV_FIELD_HPP
#define GKDV_FIELD_HPP

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "gkdv/grid.hpp"

namespace gkdv {

/// Real-space samples of u(x) on a Grid1D. Plain value type; all operations
/// on fields are free functions returning new fields.
struct Field {
  explicit Field(const Grid1D& g) : grid(g), values(g.n(), 0.0) {}
  Field(const Grid1D& g, std::vector<double> v) : grid(g), values(std::move(v)) {
    if (static_cast<int>(values.size()) != grid.n())
      throw ContractError("Field: value count does not match grid");
  }

  Grid1D grid;
  std::vector<double> values;

  double& operator[](int i) { return values[i]; }
  double operator[](int i) const { return values[i]; }
};

/// Fourier-space samples; coeffs[m] multiplies exp(i*xi_m*x) under the
/// convention documented in spectral.hpp (forward unscaled, inverse 1/n).
struct SpectralField {
  explicit SpectralField(const Grid1D& g) : grid(g), coeffs(g.n(), {0.0, 0.0}) {}

  Grid1D grid;
  std::vector<std::complex<double>> coeffs;
};

inline bool is_finite(const Field& f) {
  for (double v : f.values)
    if (!std::isfinite(v)) return false;
  return true;
}

inline void ensure_finite(const Field& f, const char* where) {
  if (!is_finite(f))
    throw CorruptedStateError(std::string(where) + ": field contains NaN/Inf");
}

/// Build a field by sampling fn at the grid points.
inline Field sample(const Grid1D& g, const std::function<double(double)>& fn) {
  Field f(g);
  for (int i = 0; i < g.n(); ++i) f[i] = fn(g.x(i));
  return f;
}

inline double max_abs(const Field& f) {
  double m = 0.0;
  for (double v : f.values) m = std::max(m, std::abs(v));
  return m;
}

/// Max |f| over the outer `edge_fraction` of the box (both ends combined).
double boundary_max_abs(const Field& f, double edge_fraction = 0.05);

/// True when the outer 5% of the box carries less than `ratio` of the
/// field's sup norm. A zero field trivially passes.
bool boundary_decay_ok(const Field& f, double ratio = 1e-8, double edge_fraction = 0.05);

inline Field operator+(const Field& a, const Field& b) {
  if (a.grid != b.grid) throw ContractError("Field+: grid mismatch");
  Field r = a;
  for (int i = 0; i < r.grid.n(); ++i) r[i] += b[i];
  return r;
}

inline Field operator-(const Field& a, const Field& b) {
  if (a.grid != b.grid) throw ContractError("Field-: grid mismatch");
  Field r = a;
  for (int i = 0; i < r.grid.n(); ++i) r[i] -= b[i];
  return r;
}

inline Field operator*(double c, const Field& a) {
  Field r = a;
  for (double& v : r.values) v *= c;
  return r;
}

}  // namespace gkdv

#endif
