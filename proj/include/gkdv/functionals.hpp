#ifndef GKDV_FUNCTIONALS_HPP
#define GKDV_FUNCTIONALS_HPP

#include <optional>
#include <vector>

#include "gkdv/field.hpp"
#include "gkdv/rational.hpp"

namespace gkdv {

/// Critical regularity s_k = (k-4)/(2k); the homogeneous H^{s_k} norm is
/// invariant under the scaling symmetry of the equation.
inline double critical_exponent(int k) { return (k - 4) / (2.0 * k); }

/// integral u^2 dx (rectangle rule; spectrally accurate on periodic data).
double mass(const Field& f);

/// integral (u_x^2 - 2/(k+2) u^{k+2}) dx with u_x computed spectrally.
double energy(const Field& f, int k);

/// Homogeneous Sobolev norm: (sum_m |xi_m|^{2s} |c_m|^2 dx^2/L)^{1/2},
/// mean mode excluded.
double sobolev_norm(const Field& f, double s);

/// L^p norm in x by rectangle rule (p >= 1 finite).
double lp_norm(const Field& f, double p);

/// Exact rational test of 2/p + 1/q == 2/k.
bool is_admissible(const Rational& p, const Rational& q, int k);

/// One time slice of the standard diagnostics stream.
struct NormReport {
  double time = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  double hsk_norm = 0.0;
  double window_mass = 0.0;
  double dt = 0.0;
};

struct TrackedPair {
  Rational p;
  Rational q;
  double s = 0.0;  // derivative order applied inside the norm
};

/// The three mixed norms the analysis runs on: the blow-up criterion norm
/// L^{5k/4}_x L^{5k/2}_t, the auxiliary D^{s_k} L^5_x L^{10}_t norm, and the
/// diagonal D^{2/3k} L^{3k/2}_{t,x} norm.
std::vector<TrackedPair> default_tracked_pairs(int k);

/// Running mixed space-time norms over a trajectory. Stores per-x running
/// integrals int |D^s u(x,.)|^q dt (trapezoid on the sample times actually
/// accepted by the solver), so memory is O(n) per tracked pair. The
/// inner-time-then-outer-x order is exactly the order the blow-up criterion
/// uses. Single writer (the solver); read after the run completes.
class StrichartzAccumulator {
 public:
  StrichartzAccumulator() = default;
  StrichartzAccumulator(const Grid1D& grid, int k,
                        std::vector<TrackedPair> pairs = {},
                        double window_length = 1.0);

  void add_sample(const Field& u, double t);

  int k() const { return k_; }
  size_t sample_count() const { return sample_count_; }
  double first_time() const { return first_time_; }
  double last_time() const { return last_time_; }
  const std::vector<TrackedPair>& tracked_pairs() const { return pairs_; }

  /// Mixed norm over [first_time, last_time] for a tracked pair;
  /// ContractError if the pair is untracked or fewer than 2 samples exist.
  double mixed_norm(const Rational& p, const Rational& q, double s) const;

  /// Completed fixed-length-window norms of the first tracked pair, in time
  /// order ("Strichartz increments").
  const std::vector<double>& window_increments() const { return increments_; }

  /// Set when the trajectory's boundary-decay monitor fired; reported norms
  /// are then box-truncated surrogates of the whole-line norms.
  bool truncation_flag() const { return truncation_flag_; }
  void set_truncation_flag() { truncation_flag_ = true; }

 private:
  int find_pair(const Rational& p, const Rational& q, double s) const;
  double norm_from(const std::vector<double>& integral, double p_over_q,
                   double inv_p) const;

  Grid1D grid_{8, 1.0};
  int k_ = 0;
  std::vector<TrackedPair> pairs_;
  // per pair: running integral per grid point, and the previous |D^s u|^q slice
  std::vector<std::vector<double>> integrals_;
  std::vector<std::vector<double>> prev_pow_;
  std::vector<double> window_start_;  // pair-0 integral at window open
  std::vector<double> increments_;
  double window_length_ = 1.0;
  double window_open_ = 0.0;
  size_t sample_count_ = 0;
  double first_time_ = 0.0;
  double last_time_ = 0.0;
  bool truncation_flag_ = false;
};

struct ThresholdReport {
  double me_product_ratio = 0.0;  // E[u]^{s_k} M[u]^{1-s_k} over the Q value
  double grad_mass_ratio = 0.0;   // |du|^{s_k} |u|^{1-s_k} over the Q value
  bool energy_nonnegative = true;
  bool below_threshold = false;
};

/// Compare u0 against the ground-state dichotomy thresholds. The product
/// criterion requires E[u0] >= 0; negative energy is flagged and
/// below_threshold forced false.
ThresholdReport threshold_check(const Field& u0, int k);

}  // namespace gkdv

#endif
