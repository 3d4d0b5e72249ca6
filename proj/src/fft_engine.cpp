#include <fftw3.h>

#include <complex>
#include <cstring>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "gkdv/field.hpp"

// FFTW planner calls are not thread-safe; execution is. Each thread keeps
// its own plans and buffers, so concurrent simulations never share state.

namespace gkdv {
namespace {

std::mutex planner_mutex;

struct PlanSet {
  explicit PlanSet(int n) : n(n) {
    buf_in = fftw_alloc_complex(n);
    buf_out = fftw_alloc_complex(n);
    std::lock_guard<std::mutex> lock(planner_mutex);
    fwd = fftw_plan_dft_1d(n, buf_in, buf_out, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_1d(n, buf_in, buf_out, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~PlanSet() {
    std::lock_guard<std::mutex> lock(planner_mutex);
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
    fftw_free(buf_in);
    fftw_free(buf_out);
  }
  PlanSet(const PlanSet&) = delete;
  PlanSet& operator=(const PlanSet&) = delete;

  int n;
  fftw_complex* buf_in;
  fftw_complex* buf_out;
  fftw_plan fwd;
  fftw_plan bwd;
};

PlanSet& plans_for(int n) {
  thread_local std::unordered_map<int, std::unique_ptr<PlanSet>> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, std::make_unique<PlanSet>(n)).first;
  return *it->second;
}

}  // namespace

namespace detail {

void fft_forward(const std::complex<double>* in, std::complex<double>* out, int n) {
  PlanSet& p = plans_for(n);
  std::memcpy(p.buf_in, in, sizeof(fftw_complex) * n);
  fftw_execute(p.fwd);
  std::memcpy(out, p.buf_out, sizeof(fftw_complex) * n);
}

void fft_backward(const std::complex<double>* in, std::complex<double>* out, int n) {
  PlanSet& p = plans_for(n);
  std::memcpy(p.buf_in, in, sizeof(fftw_complex) * n);
  fftw_execute(p.bwd);
  std::memcpy(out, p.buf_out, sizeof(fftw_complex) * n);
}

}  // namespace detail
}  // namespace gkdv
