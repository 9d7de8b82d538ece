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

#ifndef VOXMASK_PHASE_VOCODER_HPP_
#define VOXMASK_PHASE_VOCODER_HPP_

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "voxmask/audio.hpp"
#include "voxmask/error.hpp"
#include "voxmask/stft.hpp"

namespace voxmask {

// How synthesis phases are carried from one frame to the next.
//  kIdentityLocked: every bin of a peak's region shares one accumulated
//                   rotation, so intra-region phase relations are preserved.
//  kLoose:          each bin integrates its own instantaneous frequency.
enum class PhaseVariant { kLoose, kIdentityLocked };

struct PitchShiftSpec {
  double ratio = 1.0;  // output pitch / input pitch
  PhaseVariant variant = PhaseVariant::kIdentityLocked;
  int neighbor_span = 2;
};

inline void ValidatePitchShiftSpec(const PitchShiftSpec& spec) {
  if (!(spec.ratio >= 0.25 && spec.ratio <= 4.0)) {
    throw Error(ErrorKind::kInvalidArgument,
                "pitch ratio must lie in [0.25, 4], got " +
                    std::to_string(spec.ratio));
  }
  if (spec.neighbor_span != 2 && spec.neighbor_span != 4) {
    throw Error(ErrorKind::kInvalidArgument, "neighbor_span must be 2 or 4");
  }
}

struct PeakSet {
  std::vector<std::size_t> peak_indices;

  bool empty() const { return peak_indices.empty(); }
  std::size_t size() const { return peak_indices.size(); }
};

struct Region {
  std::size_t peak;
  std::size_t lo;  // inclusive
  std::size_t hi;  // inclusive

  bool operator==(const Region&) const = default;
};

struct RegionPartition {
  std::vector<Region> regions;

  bool empty() const { return regions.empty(); }
};

// Wraps an angle to (-pi, pi].
inline double Princarg(double phase) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double wrapped = std::remainder(phase, kTwoPi);
  if (wrapped <= -std::numbers::pi) wrapped += kTwoPi;
  return wrapped;
}

inline std::vector<double> Magnitudes(const SpectralFrame& frame) {
  std::vector<double> mag(frame.size());
  for (std::size_t k = 0; k < frame.size(); ++k) mag[k] = std::abs(frame.bins[k]);
  return mag;
}

// A bin is a peak when its magnitude strictly exceeds every bin within
// neighbor_span / 2 on either side. Bins without a full neighbourhood are
// never peaks.
inline PeakSet DetectPeaks(std::span<const double> mag, int neighbor_span) {
  const std::size_t half = static_cast<std::size_t>(neighbor_span / 2);
  PeakSet peaks;
  if (mag.size() < 2 * half + 1) return peaks;
  for (std::size_t i = half; i + half < mag.size(); ++i) {
    bool is_peak = true;
    for (std::size_t d = 1; d <= half && is_peak; ++d) {
      is_peak = mag[i] > mag[i - d] && mag[i] > mag[i + d];
    }
    if (is_peak) peaks.peak_indices.push_back(i);
  }
  return peaks;
}

inline PeakSet DetectPeaks(const SpectralFrame& frame, int neighbor_span) {
  const std::vector<double> mag = Magnitudes(frame);
  return DetectPeaks(std::span<const double>(mag), neighbor_span);
}

// Splits [0, nbins) into one region per peak. The boundary between two
// peaks is the lowest-magnitude bin strictly between them (lower index on
// ties) and belongs to the left region.
inline RegionPartition RegionsOfInfluence(std::span<const double> mag,
                                          const PeakSet& peaks) {
  if (peaks.empty()) {
    throw Error(ErrorKind::kEmptyPeakSet, "no peaks to partition");
  }
  const auto& p = peaks.peak_indices;
  RegionPartition out;
  out.regions.reserve(p.size());
  std::size_t lo = 0;
  for (std::size_t r = 0; r + 1 < p.size(); ++r) {
    std::size_t boundary = p[r] + 1;
    for (std::size_t k = p[r] + 1; k < p[r + 1]; ++k) {
      if (mag[k] < mag[boundary]) boundary = k;
    }
    out.regions.push_back({p[r], lo, boundary});
    lo = boundary + 1;
  }
  out.regions.push_back({p.back(), lo, mag.size() - 1});
  return out;
}

inline RegionPartition RegionsOfInfluence(const SpectralFrame& frame,
                                          const PeakSet& peaks) {
  const std::vector<double> mag = Magnitudes(frame);
  return RegionsOfInfluence(std::span<const double>(mag), peaks);
}

// Integer bin translation applied to a region whose peak sits at bin `peak`.
inline long RegionShift(std::size_t peak, double ratio) {
  return std::lround((ratio - 1.0) * static_cast<double>(peak));
}

namespace pv_internal {

inline constexpr std::size_t kNoSource = std::numeric_limits<std::size_t>::max();

struct ShiftResult {
  SpectralFrame frame;
  // Input bin contributing the largest magnitude to each output bin.
  std::vector<std::size_t> source;
};

inline ShiftResult Shift(const SpectralFrame& frame,
                         const RegionPartition& partition, double ratio,
                         std::span<const double> rotations) {
  const std::size_t n = frame.size();
  ShiftResult res;
  res.frame.bins.assign(n, {0.0, 0.0});
  res.source.assign(n, kNoSource);
  std::vector<double> best(n, -1.0);
  for (std::size_t r = 0; r < partition.regions.size(); ++r) {
    const Region& region = partition.regions[r];
    const long shift = RegionShift(region.peak, ratio);
    const std::complex<double> rot =
        rotations.empty() ? std::complex<double>(1.0, 0.0)
                          : std::polar(1.0, rotations[r]);
    for (std::size_t k = region.lo; k <= region.hi; ++k) {
      const long dest = static_cast<long>(k) + shift;
      if (dest < 0 || dest >= static_cast<long>(n)) continue;
      const auto d = static_cast<std::size_t>(dest);
      res.frame.bins[d] += frame.bins[k] * rot;
      const double m = std::abs(frame.bins[k]);
      if (m > best[d]) {
        best[d] = m;
        res.source[d] = k;
      }
    }
  }
  return res;
}

}  // namespace pv_internal

// Translates every region by round((ratio - 1) * peak) bins, keeping the
// complex values inside the region intact. Bins pushed outside the spectrum
// are dropped; colliding bins are summed. When `rotations` is non-empty it
// holds one angle per region applied to that region before summation.
inline SpectralFrame ShiftCoefficients(const SpectralFrame& frame,
                                       const RegionPartition& partition,
                                       double ratio,
                                       std::span<const double> rotations = {}) {
  if (!rotations.empty() && rotations.size() != partition.regions.size()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "one rotation per region required");
  }
  return pv_internal::Shift(frame, partition, ratio, rotations).frame;
}

// Per-utterance phase state. Feed frames strictly in time order.
class PhasePropagator {
 public:
  // Peaks further apart than this (in bins) start a new track.
  static constexpr std::size_t kTrackTolerance = 4;

  PhasePropagator(PhaseVariant variant, double ratio, std::size_t frame_len,
                  std::size_t hop)
      : variant_(variant),
        ratio_(ratio),
        frame_len_(frame_len),
        hop_(static_cast<double>(hop)) {}

  // Produces the synthesis frame for `analysis`. An empty partition marks an
  // unvoiced frame, which passes through unshifted with loose phases.
  SpectralFrame Process(const SpectralFrame& analysis,
                        const RegionPartition& partition) {
    const std::size_t n = analysis.size();
    std::vector<double> phase(n);
    for (std::size_t k = 0; k < n; ++k) phase[k] = std::arg(analysis.bins[k]);
    if (!primed_) {
      prev_analysis_.assign(n, 0.0);
      prev_synth_.assign(n, 0.0);
    }

    SpectralFrame out;
    rotations_.clear();
    std::vector<std::size_t> peaks;
    if (partition.empty()) {
      out = PassThrough(analysis, phase);
    } else if (variant_ == PhaseVariant::kIdentityLocked) {
      peaks.reserve(partition.regions.size());
      for (const Region& region : partition.regions) {
        const std::size_t m = region.peak;
        peaks.push_back(m);
        double theta = 0.0;
        if (primed_) {
          const std::size_t match = MatchTrack(m);
          if (match != pv_internal::kNoSource) {
            const double delta =
                (ratio_ - 1.0) * InstantaneousFrequency(m, phase[m]);
            theta = Princarg(prev_rotation_[match] + hop_ * delta);
          }
        }
        rotations_.push_back(theta);
      }
      out = pv_internal::Shift(analysis, partition, ratio_, rotations_).frame;
      for (std::size_t k = 0; k < n; ++k) prev_synth_[k] = std::arg(out.bins[k]);
    } else {
      pv_internal::ShiftResult shifted =
          pv_internal::Shift(analysis, partition, ratio_, {});
      out = std::move(shifted.frame);
      for (std::size_t k = 0; k < n; ++k) {
        const std::size_t src = shifted.source[k];
        double theta;
        if (!primed_) {
          theta = std::arg(out.bins[k]);
        } else if (src == pv_internal::kNoSource) {
          theta = prev_synth_[k] + hop_ * ratio_ * BinFrequency(k);
        } else {
          theta = prev_synth_[k] +
                  hop_ * ratio_ * InstantaneousFrequency(src, phase[src]);
        }
        theta = Princarg(theta);
        out.bins[k] = std::polar(std::abs(out.bins[k]), theta);
        prev_synth_[k] = theta;
      }
    }

    prev_analysis_ = std::move(phase);
    prev_peaks_ = std::move(peaks);
    prev_rotation_ = rotations_;
    primed_ = true;
    return out;
  }

  // Rotation applied to each region of the most recent identity-locked frame.
  const std::vector<double>& rotations() const { return rotations_; }

  // Peak frequency estimate in rad/sample from the phase advance since the
  // previous frame. Valid once at least one frame has been processed.
  double InstantaneousFrequency(std::size_t k, double phase) const {
    const double center = BinFrequency(k);
    return center + Princarg(phase - prev_analysis_[k] - hop_ * center) / hop_;
  }

 private:
  double BinFrequency(std::size_t k) const {
    return 2.0 * std::numbers::pi * static_cast<double>(k) /
           static_cast<double>(frame_len_);
  }

  std::size_t MatchTrack(std::size_t m) const {
    std::size_t best = pv_internal::kNoSource;
    std::size_t best_dist = kTrackTolerance + 1;
    // prev_peaks_ is sorted; only the neighbours of the insertion point can
    // be nearest.
    auto it = std::lower_bound(prev_peaks_.begin(), prev_peaks_.end(), m);
    for (auto c : {it - (it == prev_peaks_.begin() ? 0 : 1), it}) {
      if (c == prev_peaks_.end()) continue;
      const std::size_t dist = *c > m ? *c - m : m - *c;
      if (dist < best_dist) {
        best_dist = dist;
        best = static_cast<std::size_t>(c - prev_peaks_.begin());
      }
    }
    return best;
  }

  SpectralFrame PassThrough(const SpectralFrame& analysis,
                            const std::vector<double>& phase) {
    SpectralFrame out;
    out.bins.resize(analysis.size());
    for (std::size_t k = 0; k < analysis.size(); ++k) {
      double theta = phase[k];
      if (primed_) {
        theta = Princarg(prev_synth_[k] +
                         hop_ * ratio_ * InstantaneousFrequency(k, phase[k]));
      }
      out.bins[k] = std::polar(std::abs(analysis.bins[k]), theta);
      prev_synth_[k] = theta;
    }
    return out;
  }

  PhaseVariant variant_;
  double ratio_;
  std::size_t frame_len_;
  double hop_;
  bool primed_ = false;
  std::vector<double> prev_analysis_;
  std::vector<double> prev_synth_;
  std::vector<std::size_t> prev_peaks_;
  std::vector<double> prev_rotation_;
  std::vector<double> rotations_;
};

namespace pv_internal {

// Zero padding of one frame on each side keeps the overlap-add sum constant
// over every input sample.
template <typename FrameFn>
AudioBuffer ProcessPadded(const AudioBuffer& buf, const StftConfig& cfg,
                          FrameFn&& fn) {
  const std::size_t pad = cfg.frame_len;
  AudioBuffer padded;
  padded.sample_rate = buf.sample_rate;
  padded.samples.assign(buf.size() + 2 * pad, 0.0);
  std::copy(buf.samples.begin(), buf.samples.end(),
            padded.samples.begin() + static_cast<std::ptrdiff_t>(pad));
  Spectrogram spec = Stft(padded, cfg);
  for (SpectralFrame& frame : spec.frames) frame = fn(frame);
  AudioBuffer full = Istft(spec);
  AudioBuffer out;
  out.sample_rate = buf.sample_rate;
  out.samples.assign(full.samples.begin() + static_cast<std::ptrdiff_t>(pad),
                     full.samples.begin() +
                         static_cast<std::ptrdiff_t>(pad + buf.size()));
  return out;
}

}  // namespace pv_internal

// Pitch-scale modification by peak translation in the STFT domain.
// Output has the input's length and rate.
inline AudioBuffer PitchShift(const AudioBuffer& buf, const PitchShiftSpec& spec,
                              const StftConfig& cfg = {}) {
  ValidatePitchShiftSpec(spec);
  ValidateStftConfig(cfg);
  if (buf.size() < cfg.frame_len) {
    throw Error(ErrorKind::kTooShort,
                "pitch shift needs at least one frame of " +
                    std::to_string(cfg.frame_len) + " samples");
  }
  PhasePropagator propagator(spec.variant, spec.ratio, cfg.frame_len, cfg.hop);
  return pv_internal::ProcessPadded(buf, cfg, [&](const SpectralFrame& frame) {
    const std::vector<double> mag = Magnitudes(frame);
    const PeakSet peaks = DetectPeaks(std::span<const double>(mag),
                                      spec.neighbor_span);
    RegionPartition partition;
    if (!peaks.empty()) {
      partition = RegionsOfInfluence(std::span<const double>(mag), peaks);
    }
    return propagator.Process(frame, partition);
  });
}

}  // namespace voxmask

#endif  // VOXMASK_PHASE_VOCODER_HPP_
