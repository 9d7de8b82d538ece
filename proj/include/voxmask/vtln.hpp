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

#ifndef VOXMASK_VTLN_HPP_
#define VOXMASK_VTLN_HPP_

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "voxmask/audio.hpp"
#include "voxmask/error.hpp"
#include "voxmask/phase_vocoder.hpp"
#include "voxmask/stft.hpp"

namespace voxmask {

enum class WarpFamily { kSymmetric, kAsymmetric, kQuadratic, kPower, kBilinear };

// Which side of the frequency map the warp function sits on.
//  kMoveToWarped:   content found at omega moves to g(omega); alpha values
//                   with g(omega) > omega raise formants.
//  kSampleAtWarped: output at omega reads the input at g(omega), the same
//                   alpha lowers formants. The degree schedules use this one,
//                   so positive female steps move voices toward male.
enum class WarpMapping { kMoveToWarped, kSampleAtWarped };

struct WarpSpec {
  WarpFamily family = WarpFamily::kBilinear;
  double alpha = 0.0;
  WarpMapping mapping = WarpMapping::kMoveToWarped;
};

inline std::string_view WarpFamilyName(WarpFamily f) {
  switch (f) {
    case WarpFamily::kSymmetric: return "symmetric";
    case WarpFamily::kAsymmetric: return "asymmetric";
    case WarpFamily::kQuadratic: return "quadratic";
    case WarpFamily::kPower: return "power";
    case WarpFamily::kBilinear: return "bilinear";
  }
  return "unknown";
}

// Parameter value at which the family is the identity map.
inline double IdentityAlpha(WarpFamily f) {
  return f == WarpFamily::kQuadratic || f == WarpFamily::kBilinear ? 0.0 : 1.0;
}

inline void ValidateWarpSpec(const WarpSpec& spec) {
  const double a = spec.alpha;
  bool ok = std::isfinite(a);
  switch (spec.family) {
    case WarpFamily::kSymmetric:
    case WarpFamily::kAsymmetric:
    case WarpFamily::kPower:
      ok = ok && a > 0.0;
      break;
    case WarpFamily::kQuadratic:
      // g'(w) = 1 + a (1 - 2 w / pi) / pi stays positive iff |a| < pi.
      ok = ok && std::abs(a) < std::numbers::pi;
      break;
    case WarpFamily::kBilinear:
      ok = ok && std::abs(a) < 1.0;
      break;
  }
  if (!ok) {
    throw Error(ErrorKind::kInvalidAlpha,
                "alpha " + std::to_string(a) + " outside the valid range for " +
                    std::string(WarpFamilyName(spec.family)) + " warping");
  }
}

namespace vtln_internal {

constexpr double kPi = std::numbers::pi;

// Piecewise-linear breakpoint shared by the symmetric and asymmetric rows.
inline double Breakpoint(const WarpSpec& spec) {
  if (spec.family == WarpFamily::kSymmetric && spec.alpha > 1.0) {
    return 7.0 * kPi / (8.0 * spec.alpha);
  }
  return 7.0 * kPi / 8.0;
}

// The asymmetric row with alpha >= 8/7 saturates at pi before omega = pi.
inline bool HasFlatTop(const WarpSpec& spec) {
  return spec.family == WarpFamily::kAsymmetric && spec.alpha >= 8.0 / 7.0;
}

}  // namespace vtln_internal

// Warped position of normalized frequency omega in [0, pi].
inline double WarpValue(const WarpSpec& spec, double omega) {
  using vtln_internal::kPi;
  ValidateWarpSpec(spec);
  if (!(omega >= 0.0 && omega <= kPi)) {
    throw Error(ErrorKind::kInvalidArgument,
                "omega must lie in [0, pi], got " + std::to_string(omega));
  }
  if (omega == 0.0) return 0.0;
  if (omega == kPi) return kPi;

  const double a = spec.alpha;
  double g = 0.0;
  switch (spec.family) {
    case WarpFamily::kSymmetric:
    case WarpFamily::kAsymmetric: {
      const double w0 = vtln_internal::Breakpoint(spec);
      g = omega <= w0 ? a * omega
                      : a * w0 + (kPi - a * w0) / (kPi - w0) * (omega - w0);
      break;
    }
    case WarpFamily::kQuadratic: {
      const double x = omega / kPi;
      g = omega + a * (x - x * x);
      break;
    }
    case WarpFamily::kPower:
      g = kPi * std::pow(omega / kPi, a);
      break;
    case WarpFamily::kBilinear:
      // Phase of the first-order all-pass (z - a) / (1 - a z) on the unit
      // circle. Its imaginary part (1 - a^2) sin(omega) is non-negative.
      g = std::atan2((1.0 - a * a) * std::sin(omega),
                     (1.0 + a * a) * std::cos(omega) - 2.0 * a);
      break;
  }
  return std::clamp(g, 0.0, kPi);
}

// Preimage of omega_out under WarpValue.
inline double InvertWarp(const WarpSpec& spec, double omega_out) {
  using vtln_internal::kPi;
  ValidateWarpSpec(spec);
  if (!(omega_out >= 0.0 && omega_out <= kPi)) {
    throw Error(ErrorKind::kInvalidArgument,
                "omega must lie in [0, pi], got " + std::to_string(omega_out));
  }
  if (omega_out == 0.0) return 0.0;
  const double a = spec.alpha;
  if (vtln_internal::HasFlatTop(spec) && omega_out >= kPi) {
    throw Error(ErrorKind::kNotInvertible,
                "asymmetric warp with alpha " + std::to_string(a) +
                    " maps an interval onto pi");
  }
  if (omega_out == kPi) return kPi;

  switch (spec.family) {
    case WarpFamily::kSymmetric:
    case WarpFamily::kAsymmetric: {
      const double w0 = vtln_internal::Breakpoint(spec);
      const double knee = a * w0;
      if (omega_out <= knee) return omega_out / a;
      return w0 + (omega_out - knee) * (kPi - w0) / (kPi - knee);
    }
    case WarpFamily::kPower:
      return kPi * std::pow(omega_out / kPi, 1.0 / a);
    case WarpFamily::kBilinear:
      return WarpValue({WarpFamily::kBilinear, -a, spec.mapping}, omega_out);
    case WarpFamily::kQuadratic: {
      double lo = 0.0;
      double hi = kPi;
      for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (WarpValue(spec, mid) < omega_out) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      return 0.5 * (lo + hi);
    }
  }
  return omega_out;
}

// Fractional input-bin position sampled by each of `nbins` output bins:
// InvertWarp(omega) for kMoveToWarped, WarpValue(omega) for kSampleAtWarped.
inline std::vector<double> WarpSourcePositions(const WarpSpec& spec,
                                               std::size_t nbins) {
  ValidateWarpSpec(spec);
  std::vector<double> pos(nbins, 0.0);
  if (nbins < 2) return pos;
  const double last = static_cast<double>(nbins - 1);
  for (std::size_t k = 0; k < nbins; ++k) {
    const double omega = std::numbers::pi * static_cast<double>(k) / last;
    const double read = spec.mapping == WarpMapping::kMoveToWarped
                            ? InvertWarp(spec, omega)
                            : WarpValue(spec, omega);
    double src = std::clamp(read / std::numbers::pi * last, 0.0, last);
    if (std::abs(src - std::round(src)) < 1e-9) src = std::round(src);
    pos[k] = src;
  }
  return pos;
}

// Resamples `frame` at precomputed source positions. Magnitude and unwrapped
// phase are interpolated linearly and separately.
inline SpectralFrame ResampleSpectrum(const SpectralFrame& frame,
                                      std::span<const double> positions) {
  const std::size_t n = frame.size();
  if (positions.size() != n) {
    throw Error(ErrorKind::kDimensionMismatch, "position count != bin count");
  }
  std::vector<double> mag(n);
  std::vector<double> phase(n);
  for (std::size_t k = 0; k < n; ++k) {
    mag[k] = std::abs(frame.bins[k]);
    phase[k] = std::arg(frame.bins[k]);
    if (k > 0) phase[k] = phase[k - 1] + Princarg(phase[k] - phase[k - 1]);
  }
  SpectralFrame out;
  out.bins.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double pos = positions[k];
    const auto i0 = static_cast<std::size_t>(pos);
    const std::size_t i1 = std::min(i0 + 1, n - 1);
    const double frac = pos - static_cast<double>(i0);
    if (frac == 0.0) {
      out.bins[k] = frame.bins[i0];
      continue;
    }
    const double m = mag[i0] + frac * (mag[i1] - mag[i0]);
    const double p = phase[i0] + frac * (phase[i1] - phase[i0]);
    out.bins[k] = std::polar(m, p);
  }
  return out;
}

// Warps one frame according to spec.mapping. With kMoveToWarped the output
// bin at omega carries the input sampled at InvertWarp(spec, omega).
inline SpectralFrame WarpSpectrum(const SpectralFrame& frame,
                                  const WarpSpec& spec) {
  const std::vector<double> pos = WarpSourcePositions(spec, frame.size());
  return ResampleSpectrum(frame, pos);
}

inline AudioBuffer VtlnTransform(const AudioBuffer& buf, const WarpSpec& spec,
                                 const StftConfig& cfg = {}) {
  ValidateWarpSpec(spec);
  ValidateStftConfig(cfg);
  if (buf.size() < cfg.frame_len) {
    throw Error(ErrorKind::kTooShort,
                "warping needs at least one frame of " +
                    std::to_string(cfg.frame_len) + " samples");
  }
  const std::vector<double> pos =
      WarpSourcePositions(spec, cfg.frame_len / 2 + 1);
  return pv_internal::ProcessPadded(buf, cfg, [&](const SpectralFrame& frame) {
    return ResampleSpectrum(frame, pos);
  });
}

}  // namespace voxmask

#endif  // VOXMASK_VTLN_HPP_
