// Copyright 2026 The Voxmask Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VOXMASK_FFT_HPP_
#define VOXMASK_FFT_HPP_

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <map>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

namespace voxmask {

namespace fft_internal {

// FFTW planning is not thread-safe; execution with the new-array interface
// is. Plans are created once per (size, direction) and live for the process.
struct PlanCache {
  std::mutex mu;
  std::map<std::pair<std::size_t, int>, fftw_plan> plans;
};

inline PlanCache& Cache() {
  static PlanCache cache;
  return cache;
}

inline fftw_plan GetPlan(std::size_t n, int direction) {
  PlanCache& cache = Cache();
  std::lock_guard<std::mutex> lock(cache.mu);
  auto key = std::make_pair(n, direction);
  auto it = cache.plans.find(key);
  if (it != cache.plans.end()) return it->second;

  std::vector<double> real(n);
  std::vector<std::complex<double>> spec(n / 2 + 1);
  auto* c = reinterpret_cast<fftw_complex*>(spec.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  fftw_plan plan =
      direction == FFTW_FORWARD
          ? fftw_plan_dft_r2c_1d(static_cast<int>(n), real.data(), c, flags)
          : fftw_plan_dft_c2r_1d(static_cast<int>(n), c, real.data(), flags);
  cache.plans.emplace(key, plan);
  return plan;
}

}  // namespace fft_internal

// Real-input DFT of length n producing n/2 + 1 bins.
class RealFft {
 public:
  explicit RealFft(std::size_t n)
      : n_(n),
        forward_(fft_internal::GetPlan(n, FFTW_FORWARD)),
        inverse_(fft_internal::GetPlan(n, FFTW_BACKWARD)) {}

  std::size_t size() const { return n_; }
  std::size_t bins() const { return n_ / 2 + 1; }

  // Unnormalized forward transform.
  void Forward(std::span<const double> in,
               std::span<std::complex<double>> out) const {
    // r2c leaves its input intact, the cast only satisfies the C signature.
    fftw_execute_dft_r2c(forward_, const_cast<double*>(in.data()),
                         reinterpret_cast<fftw_complex*>(out.data()));
  }

  // Inverse transform scaled by 1/n, so Inverse(Forward(x)) == x.
  void Inverse(std::span<const std::complex<double>> in,
               std::span<double> out) const {
    std::vector<std::complex<double>> scratch(in.begin(), in.end());
    fftw_execute_dft_c2r(inverse_,
                         reinterpret_cast<fftw_complex*>(scratch.data()),
                         out.data());
    const double scale = 1.0 / static_cast<double>(n_);
    for (double& v : out) v *= scale;
  }

  std::vector<std::complex<double>> Forward(std::span<const double> in) const {
    std::vector<std::complex<double>> out(bins());
    Forward(in, out);
    return out;
  }

 private:
  std::size_t n_;
  fftw_plan forward_;
  fftw_plan inverse_;
};

}  // namespace voxmask

#endif  // VOXMASK_FFT_HPP_
