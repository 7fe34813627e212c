#pragma once

// Internal FFTW helpers. Plan creation is not thread-safe and is serialized
// behind a global mutex; plans are created with FFTW_ESTIMATE so the chosen
// algorithm (and therefore rounding) is deterministic, and FFTW_UNALIGNED so
// they can execute on any caller-provided buffer via the new-array interface.

#include <fftw3.h>

#include <complex>
#include <mutex>
#include <vector>

namespace fgl::detail {

inline std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

class FftPlan {
 public:
  FftPlan(int n, int sign) : n_(n) {
    std::vector<std::complex<double>> tmp(static_cast<size_t>(n));
    auto* p = reinterpret_cast<fftw_complex*>(tmp.data());
    std::lock_guard<std::mutex> lock(fftw_mutex());
    plan_ = fftw_plan_dft_1d(n, p, p, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  ~FftPlan() {
    if (plan_) {
      std::lock_guard<std::mutex> lock(fftw_mutex());
      fftw_destroy_plan(plan_);
    }
  }
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;
  FftPlan(FftPlan&& o) noexcept : n_(o.n_), plan_(o.plan_) { o.plan_ = nullptr; }

  // In-place transform on the caller's buffer (length n).
  void execute(std::complex<double>* data) const {
    auto* p = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(plan_, p, p);
  }

  int size() const { return n_; }

 private:
  int n_;
  fftw_plan plan_ = nullptr;
};

inline int next_pow2(int n) {
  int m = 1;
  while (m < n) m <<= 1;
  return m;
}

}  // namespace fgl::detail
