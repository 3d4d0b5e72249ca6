#ifndef GKDV_SPECTRAL_HPP
#define GKDV_SPECTRAL_HPP

#include <complex>
#include <functional>

#include "gkdv/field.hpp"

namespace gkdv {

// Transform convention, fixed once and used by every norm formula:
//
//   forward:  c_m = sum_j u_j exp(-2*pi*i*j*m/n)          (unscaled)
//   inverse:  u_j = (1/n) sum_m c_m exp(+2*pi*i*j*m/n)
//
// Physical norms therefore carry explicit dx and L factors, e.g.
//   integral |u|^2 dx = (dx^2/L) * sum_m |c_m|^2.
// Multiplier operators are diagonal in m and independent of the phase
// offset between FFT index space and the physical box origin.

SpectralField forward_transform(const Field& f);
Field inverse_transform(const SpectralField& s);

/// Apply a frequency multiplier in place: coeffs[m] *= mult(xi_m).
void apply_multiplier(SpectralField& s, const std::function<std::complex<double>(double)>& mult);

/// D^s f: Fourier multiplier |xi|^s. The mean mode is annihilated for every
/// s (homogeneous norms ignore it and |xi|^s is singular at 0 for s < 0);
/// the Nyquist mode is zeroed as well. Supported range s >= -1.
Field fractional_derivative(const Field& f, double s);

/// Spectral n-th derivative (multiplier (i*xi)^order, Nyquist zeroed for odd
/// orders).
Field derivative(const Field& f, int order = 1);

/// Exact Airy propagator V(t): coeffs[m] *= exp(i*xi_m^3*t), Nyquist zeroed.
/// The sign is fixed so that u(x,t) = sin(x+t) solves u_t + u_xxx = 0.
Field airy_propagate(const Field& f, double t);
void airy_propagate_inplace(SpectralField& s, double t);

/// Scaling map u(x) -> lambda^{2/k} u(lambda*x), realized by trigonometric
/// interpolation on the periodic extension. Dyadic lambda uses exact
/// resampling (stride sampling for integer lambda, Fourier zero-padding for
/// 1/2^j); other values go through an oversampled local-interpolation path.
/// Throws DomainOverflowError when the rescaled field violates the
/// boundary-decay threshold.
Field rescale(const Field& f, double lambda, int k);

/// u(x) -> u(x - a) by spectral phase shift (exact for the interpolant).
Field translate(const Field& f, double a);

/// Mean value of the samples.
double mean(const Field& f);

/// Evaluate the trigonometric interpolant of f at an arbitrary point
/// (periodic wrap). O(n) per call; test/diagnostic use.
double eval_interpolant(const Field& f, double x);

/// Zero all modes with |signed mode| > cutoff (and the Nyquist slot).
void truncate_modes(SpectralField& s, int cutoff);

}  // namespace gkdv

#endif
