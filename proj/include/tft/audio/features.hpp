// Copyright 2026 The TFT Authors
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

#ifndef TFT_AUDIO_FEATURES_HPP_
#define TFT_AUDIO_FEATURES_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "tft/audio/fft.hpp"
#include "tft/audio/segment.hpp"
#include "tft/audio/wav.hpp"
#include "tft/common.hpp"
#include "tft/tensor.hpp"

namespace tft::audio {

struct StftConfig {
  int64_t frame_len_samples = 320;  // 20 ms at 16 kHz
  int64_t hop_samples = 160;        // 10 ms
  int64_t fft_size = 512;
  double preemphasis_coeff = 0.97;

  void validate() const {
    if (!(0 < hop_samples && hop_samples <= frame_len_samples && frame_len_samples <= fft_size)) {
      throw ConfigError("stft: need 0 < hop <= frame_len <= fft_size");
    }
    if ((fft_size & (fft_size - 1)) != 0) throw ConfigError("stft: fft_size must be a power of two");
    if (preemphasis_coeff < 0.0 || preemphasis_coeff >= 1.0) {
      throw ConfigError("stft: pre-emphasis coefficient must be in [0, 1)");
    }
  }
};

// Full feature-extraction settings, from waveform to cached segments.
struct FeatureConfig {
  int sample_rate_hz = 16000;
  StftConfig stft;
  int64_t n_mels = 80;
  double fmin_hz = 0.0;
  double fmax_hz = 8000.0;
  double log_floor = 1e-10;
  int64_t segment_frames = 80;
  bool znorm_segments = false;
};

// First-order high-pass difference filter y[t] = x[t] - coeff * x[t-1],
// with y[0] = x[0].
inline Waveform pre_emphasize(const Waveform& w, double coeff) {
  if (w.samples.empty()) throw InputError("pre_emphasize: empty waveform");
  if (coeff < 0.0 || coeff >= 1.0) throw InputError("pre_emphasize: coeff must be in [0, 1)");
  Waveform out;
  out.sample_rate_hz = w.sample_rate_hz;
  out.samples.resize(w.samples.size());
  out.samples[0] = w.samples[0];
  for (size_t t = 1; t < w.samples.size(); ++t) {
    out.samples[t] = w.samples[t] - coeff * w.samples[t - 1];
  }
  return out;
}

inline std::vector<double> hamming_window(int64_t n) {
  std::vector<double> h(static_cast<size_t>(n));
  if (n == 1) {
    h[0] = 1.0;
    return h;
  }
  for (int64_t i = 0; i < n; ++i) {
    h[i] = 0.54 - 0.46 * std::cos(2.0 * kPi * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  return h;
}

inline int64_t frame_count(int64_t n_samples, const StftConfig& cfg) {
  return (n_samples - cfg.frame_len_samples) / cfg.hop_samples + 1;
}

// Slices the waveform into hop-spaced frames and applies the Hamming window.
// Returns (n_frames, frame_len).
inline Tensor<double> frame_and_window(const Waveform& w, const StftConfig& cfg) {
  cfg.validate();
  const int64_t n = static_cast<int64_t>(w.samples.size());
  if (n < cfg.frame_len_samples) {
    throw InputError("frame_and_window: waveform shorter than one frame (" + std::to_string(n) +
                     " < " + std::to_string(cfg.frame_len_samples) + " samples)");
  }
  const int64_t n_frames = frame_count(n, cfg);
  const auto window = hamming_window(cfg.frame_len_samples);
  Tensor<double> frames({n_frames, cfg.frame_len_samples});
  for (int64_t i = 0; i < n_frames; ++i) {
    const double* src = w.samples.data() + i * cfg.hop_samples;
    double* dst = frames.data() + i * cfg.frame_len_samples;
    for (int64_t j = 0; j < cfg.frame_len_samples; ++j) dst[j] = src[j] * window[j];
  }
  return frames;
}

// |DFT|^2 of each zero-padded frame for bins 0..fft_size/2.
inline Tensor<double> power_spectrum(const Tensor<double>& frames, int64_t fft_size) {
  if (frames.ndim() != 2) throw ShapeError("power_spectrum: expected (n_frames, frame_len)");
  const int64_t n_frames = frames.dim(0);
  const int64_t frame_len = frames.dim(1);
  if (frame_len > fft_size) throw ConfigError("power_spectrum: frame longer than fft_size");
  const int64_t n_bins = fft_size / 2 + 1;
  Tensor<double> power({n_frames, n_bins});
  std::vector<double> re(static_cast<size_t>(fft_size)), im(static_cast<size_t>(fft_size));
  for (int64_t i = 0; i < n_frames; ++i) {
    std::fill(re.begin(), re.end(), 0.0);
    std::fill(im.begin(), im.end(), 0.0);
    std::copy_n(frames.data() + i * frame_len, frame_len, re.begin());
    fft_radix2(re, im);
    double* out = power.data() + i * n_bins;
    for (int64_t k = 0; k < n_bins; ++k) out[k] = re[k] * re[k] + im[k] * im[k];
  }
  return power;
}

inline double mel_from_hz(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
inline double hz_from_mel(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

// Triangular Mel filterbank with centers equally spaced on the Mel scale.
struct MelFilterbank {
  Tensor<double> weights;  // (n_mels, fft_size/2 + 1)
  int sample_rate_hz = 0;
  double fmin_hz = 0.0;
  double fmax_hz = 0.0;
  std::vector<double> center_hz;  // filter peak frequencies, for inspection

  int64_t n_mels() const { return weights.dim(0); }
  int64_t n_bins() const { return weights.dim(1); }
};

inline MelFilterbank build_mel_filterbank(int sample_rate_hz, int64_t fft_size, int64_t n_mels,
                                          double fmin_hz, double fmax_hz) {
  if (n_mels < 1) throw ConfigError("mel filterbank: n_mels must be >= 1");
  if (!(0.0 <= fmin_hz && fmin_hz < fmax_hz && fmax_hz <= sample_rate_hz / 2.0)) {
    throw ConfigError("mel filterbank: need 0 <= fmin < fmax <= sample_rate/2");
  }
  const int64_t n_bins = fft_size / 2 + 1;
  MelFilterbank fb;
  fb.weights = Tensor<double>({n_mels, n_bins});
  fb.sample_rate_hz = sample_rate_hz;
  fb.fmin_hz = fmin_hz;
  fb.fmax_hz = fmax_hz;

  const double mel_lo = mel_from_hz(fmin_hz);
  const double mel_hi = mel_from_hz(fmax_hz);
  std::vector<double> edges(static_cast<size_t>(n_mels) + 2);
  for (int64_t m = 0; m < n_mels + 2; ++m) {
    edges[m] = hz_from_mel(mel_lo + (mel_hi - mel_lo) * static_cast<double>(m) /
                                        static_cast<double>(n_mels + 1));
  }
  fb.center_hz.assign(edges.begin() + 1, edges.end() - 1);

  const double bin_hz = static_cast<double>(sample_rate_hz) / static_cast<double>(fft_size);
  for (int64_t m = 0; m < n_mels; ++m) {
    const double lo = edges[m], center = edges[m + 1], hi = edges[m + 2];
    double* row = fb.weights.data() + m * n_bins;
    bool any_positive = false;
    for (int64_t k = 0; k < n_bins; ++k) {
      const double f = bin_hz * static_cast<double>(k);
      double wgt = 0.0;
      if (f > lo && f < center) {
        wgt = (f - lo) / (center - lo);
      } else if (f == center) {
        wgt = 1.0;
      } else if (f > center && f < hi) {
        wgt = (hi - f) / (hi - center);
      }
      row[k] = wgt;
      any_positive = any_positive || wgt > 0.0;
    }
    if (!any_positive) {
      throw ConfigError("mel filterbank: filter " + std::to_string(m) +
                        " covers no FFT bin; increase fft_size or reduce n_mels");
    }
  }
  return fb;
}

// power (n_frames, n_bins) -> mel energies (n_mels, n_frames), band-major.
inline Tensor<double> apply_filterbank(const MelFilterbank& fb, const Tensor<double>& power) {
  if (power.ndim() != 2 || power.dim(1) != fb.n_bins()) {
    throw ShapeError("apply_filterbank: power shape mismatch");
  }
  const int64_t n_frames = power.dim(0);
  const int64_t n_bins = fb.n_bins();
  Tensor<double> mel({fb.n_mels(), n_frames});
  for (int64_t m = 0; m < fb.n_mels(); ++m) {
    const double* w = fb.weights.data() + m * n_bins;
    double* out = mel.data() + m * n_frames;
    for (int64_t t = 0; t < n_frames; ++t) {
      out[t] = dot(w, power.data() + t * n_bins, n_bins);
    }
  }
  return mel;
}

// ln(max(x, floor)), elementwise.
inline Tensor<double> log_compress(const Tensor<double>& m, double floor) {
  if (floor <= 0.0) throw ConfigError("log_compress: floor must be positive");
  Tensor<double> out(m.shape);
  for (size_t i = 0; i < m.values.size(); ++i) {
    out.values[i] = std::log(std::max(m.values[i], floor));
  }
  return out;
}

// Cuts a band-major (n_mels, n_frames) log-Mel matrix into consecutive
// non-overlapping segments of seg_len frames. An incomplete tail is dropped;
// an utterance shorter than one segment is repeated cyclically to fill
// exactly one segment.
inline std::vector<LogMelSegment> segment_utterance(const Tensor<double>& logmel, int64_t seg_len,
                                                    const std::string& utterance_id,
                                                    uint16_t label, bool znorm = false) {
  if (logmel.ndim() != 2) throw ShapeError("segment_utterance: expected (n_mels, n_frames)");
  if (seg_len < 1) throw ConfigError("segment_utterance: seg_len must be >= 1");
  const int64_t n_mels = logmel.dim(0);
  const int64_t n_frames = logmel.dim(1);
  if (n_mels < 1 || n_frames < 1) throw InputError("segment_utterance: empty spectrogram");

  const int64_t n_segments = n_frames >= seg_len ? n_frames / seg_len : 1;
  std::vector<LogMelSegment> segments;
  segments.reserve(static_cast<size_t>(n_segments));
  for (int64_t s = 0; s < n_segments; ++s) {
    LogMelSegment seg;
    seg.n_mels = n_mels;
    seg.n_frames = seg_len;
    seg.utterance_id = utterance_id;
    seg.segment_index = static_cast<uint32_t>(s);
    seg.label = label;
    seg.values.resize(static_cast<size_t>(n_mels * seg_len));
    for (int64_t m = 0; m < n_mels; ++m) {
      const double* src = logmel.data() + m * n_frames;
      float* dst = seg.values.data() + m * seg_len;
      for (int64_t j = 0; j < seg_len; ++j) {
        const int64_t col = n_frames >= seg_len ? s * seg_len + j : j % n_frames;
        dst[j] = static_cast<float>(src[col]);
      }
    }
    if (znorm) {
      double mu = 0;
      for (float v : seg.values) mu += v;
      mu /= static_cast<double>(seg.values.size());
      double var = 0;
      for (float v : seg.values) var += (v - mu) * (v - mu);
      var /= static_cast<double>(seg.values.size());
      const double sd = std::sqrt(var) + 1e-8;
      for (float& v : seg.values) v = static_cast<float>((v - mu) / sd);
    }
    segments.push_back(std::move(seg));
  }
  return segments;
}

// Full pipeline: pre-emphasis, framing + Hamming window, power spectrum,
// Mel filterbank, log compression, segmentation.
inline std::vector<LogMelSegment> extract_segments(const Waveform& w, const FeatureConfig& cfg,
                                                   const std::string& utterance_id,
                                                   uint16_t label) {
  w.validate();
  cfg.stft.validate();
  if (w.sample_rate_hz != cfg.sample_rate_hz) {
    throw InputError("extract_segments: waveform rate " + std::to_string(w.sample_rate_hz) +
                     " != configured " + std::to_string(cfg.sample_rate_hz) + " for " +
                     utterance_id);
  }
  const Waveform emphasized = pre_emphasize(w, cfg.stft.preemphasis_coeff);
  const Tensor<double> frames = frame_and_window(emphasized, cfg.stft);
  const Tensor<double> power = power_spectrum(frames, cfg.stft.fft_size);
  const MelFilterbank fb = build_mel_filterbank(cfg.sample_rate_hz, cfg.stft.fft_size, cfg.n_mels,
                                                cfg.fmin_hz, cfg.fmax_hz);
  const Tensor<double> mel = apply_filterbank(fb, power);
  const Tensor<double> logmel = log_compress(mel, cfg.log_floor);
  return segment_utterance(logmel, cfg.segment_frames, utterance_id, label, cfg.znorm_segments);
}

}  // namespace tft::audio

#endif  // TFT_AUDIO_FEATURES_HPP_
