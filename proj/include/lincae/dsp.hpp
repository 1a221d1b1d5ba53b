#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "lincae/array.hpp"
#include "lincae/fft.hpp"

namespace lincae {

// Fixed-rate mono waveform window. Values are dimensionless amplitudes,
// nominally within [-1, 1]; augmented inputs are clipped upstream, not here.
struct AudioSegment {
  std::vector<double> samples;
  int sample_rate = 8000;

  int length() const { return static_cast<int>(samples.size()); }
  double seconds() const { return static_cast<double>(samples.size()) / sample_rate; }
  double peak() const {
    double p = 0.0;
    for (double s : samples) p = std::max(p, std::abs(s));
    return p;
  }
};

inline AudioSegment scaled(const AudioSegment& x, double a) {
  AudioSegment out = x;
  for (double& s : out.samples) s *= a;
  return out;
}

inline AudioSegment mixed(const AudioSegment& u, const AudioSegment& v) {
  if (u.sample_rate != v.sample_rate || u.samples.size() != v.samples.size())
    throw std::invalid_argument("mixed: segments must share rate and length");
  AudioSegment out = u;
  for (size_t i = 0; i < v.samples.size(); ++i) out.samples[i] += v.samples[i];
  return out;
}

struct StftParams {
  int fft_size = 256;
  int hop = 64;
  int sample_rate = 8000;

  int bins() const { return fft_size / 2 + 1; }

  void validate() const {
    if (fft_size < 4 || !detail::is_pow2(fft_size))
      throw std::invalid_argument("StftParams: fft_size must be a power of two >= 4");
    if (hop <= 0 || fft_size % hop != 0)
      throw std::invalid_argument("StftParams: hop must divide fft_size");
  }
};

// Periodic Hann analysis window.
inline std::vector<double> hann_window(int n) {
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i)
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / n);
  return w;
}

// True when the squared window tiles to a constant at this hop, i.e. the
// window/hop pair is a perfect-reconstruction (weighted OLA) pair.
inline bool cola_ok(const StftParams& p) {
  p.validate();
  std::vector<double> w = hann_window(p.fft_size);
  std::vector<double> acc(p.hop, 0.0);
  for (int start = 0; start < p.fft_size; start += p.hop)
    for (int i = 0; i < p.hop; ++i) acc[i] += w[start + i] * w[start + i];
  double lo = *std::min_element(acc.begin(), acc.end());
  double hi = *std::max_element(acc.begin(), acc.end());
  return lo > 0.0 && (hi - lo) <= 1e-9 * hi;
}

// Complex STFT frame grid, frame-major storage (bins contiguous per frame).
struct ComplexGrid {
  int bins = 0;
  int frames = 0;
  std::vector<std::complex<double>> v;
  StftParams params;

  std::complex<double>& at(int frame, int bin) { return v[static_cast<size_t>(frame) * bins + bin]; }
  const std::complex<double>& at(int frame, int bin) const {
    return v[static_cast<size_t>(frame) * bins + bin];
  }
};

// Amplitude-compressed grid in the denoiser's input space: per cell the
// magnitude is mapped |c| -> beta*|c|^alpha with phase kept, then stored as
// a real/imaginary channel pair. data shape: {2, frames, bins}.
struct ModelGrid {
  int bins = 0;
  int frames = 0;
  Array data;
  double alpha = 0.65;
  double beta = 0.34;
  StftParams params;
};

// Centered STFT: the signal is zero-padded by fft_size/2 on both sides and
// analyzed every `hop` samples, giving length/hop + 1 frames.
inline ComplexGrid stft(const AudioSegment& x, const StftParams& p) {
  p.validate();
  const int len = x.length();
  if (len < p.fft_size) throw std::invalid_argument("stft: signal shorter than fft_size");
  if (len % p.hop != 0) throw std::invalid_argument("stft: length must be a multiple of hop");

  const int pad = p.fft_size / 2;
  const int frames = len / p.hop + 1;
  const std::vector<double> w = hann_window(p.fft_size);

  ComplexGrid g;
  g.bins = p.bins();
  g.frames = frames;
  g.params = p;
  g.params.sample_rate = x.sample_rate;
  g.v.resize(static_cast<size_t>(frames) * g.bins);

  std::vector<std::complex<double>> buf(p.fft_size);
  for (int m = 0; m < frames; ++m) {
    const int start = m * p.hop - pad;
    for (int i = 0; i < p.fft_size; ++i) {
      const int t = start + i;
      const double s = (t >= 0 && t < len) ? x.samples[t] : 0.0;
      buf[i] = s * w[i];
    }
    detail::fft_inplace(buf, false);
    for (int b = 0; b < g.bins; ++b) g.at(m, b) = buf[b];
  }
  return g;
}

// Weighted overlap-add synthesis with per-sample window-energy
// normalization; the least-squares inverse of the analysis above.
inline AudioSegment istft(const ComplexGrid& g) {
  const StftParams& p = g.params;
  if (!cola_ok(p)) throw std::invalid_argument("istft: params are not a COLA pair");
  if (g.bins != p.bins()) throw std::invalid_argument("istft: bins inconsistent with fft_size");

  const int pad = p.fft_size / 2;
  const int len = (g.frames - 1) * p.hop;
  const int padded = len + 2 * pad;
  const std::vector<double> w = hann_window(p.fft_size);

  std::vector<double> acc(padded, 0.0), wsum(padded, 0.0);
  std::vector<std::complex<double>> buf(p.fft_size);
  for (int m = 0; m < g.frames; ++m) {
    for (int b = 0; b < g.bins; ++b) buf[b] = g.at(m, b);
    for (int b = g.bins; b < p.fft_size; ++b) buf[b] = std::conj(g.at(m, p.fft_size - b));
    detail::fft_inplace(buf, true);
    const int start = m * p.hop;
    for (int i = 0; i < p.fft_size; ++i) {
      acc[start + i] += buf[i].real() * w[i];
      wsum[start + i] += w[i] * w[i];
    }
  }

  AudioSegment out;
  out.sample_rate = p.sample_rate;
  out.samples.resize(len);
  for (int t = 0; t < len; ++t) {
    const double ws = wsum[t + pad];
    out.samples[t] = ws > 1e-12 ? acc[t + pad] / ws : 0.0;
  }
  return out;
}

inline ModelGrid amp_compress(const ComplexGrid& g, double alpha, double beta) {
  if (alpha <= 0.0 || beta <= 0.0)
    throw std::invalid_argument("amp_compress: alpha and beta must be positive");
  ModelGrid m;
  m.bins = g.bins;
  m.frames = g.frames;
  m.alpha = alpha;
  m.beta = beta;
  m.params = g.params;
  m.data = Array({2, g.frames, g.bins});
  double* re = m.data.data();
  double* im = re + static_cast<size_t>(g.frames) * g.bins;
  for (int i = 0; i < g.frames * g.bins; ++i) {
    const std::complex<double> c = g.v[i];
    const double r = std::abs(c);
    if (r == 0.0) {
      re[i] = 0.0;
      im[i] = 0.0;
    } else {
      const double scale = beta * std::pow(r, alpha) / r;  // phase preserved
      re[i] = c.real() * scale;
      im[i] = c.imag() * scale;
    }
  }
  return m;
}

inline ComplexGrid amp_expand(const ModelGrid& m) {
  ComplexGrid g;
  g.bins = m.bins;
  g.frames = m.frames;
  g.params = m.params;
  g.v.resize(static_cast<size_t>(m.frames) * m.bins);
  const double* re = m.data.data();
  const double* im = re + static_cast<size_t>(m.frames) * m.bins;
  for (int i = 0; i < m.frames * m.bins; ++i) {
    const double r = std::hypot(re[i], im[i]);
    if (r == 0.0) {
      g.v[i] = 0.0;
    } else {
      const double scale = std::pow(r / m.beta, 1.0 / m.alpha) / r;
      g.v[i] = std::complex<double>(re[i] * scale, im[i] * scale);
    }
  }
  return g;
}

inline ModelGrid to_model_space(const AudioSegment& x, const StftParams& p, double alpha,
                                double beta) {
  return amp_compress(stft(x, p), alpha, beta);
}

inline AudioSegment from_model_space(const ModelGrid& m) { return istft(amp_expand(m)); }

struct MelParams {
  int n_mels = 40;
  double hop_ms = 25.0;
  int fft_size = 512;
  double floor = 1e-5;
};

namespace detail {

inline double hz_to_mel(double f) { return 2595.0 * std::log10(1.0 + f / 700.0); }
inline double mel_to_hz(double m) { return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0); }

// Triangular mel filterbank rows over the one-sided spectrum. Throws if any
// row would be empty, which is how an oversized n_mels surfaces.
inline std::vector<std::vector<double>> mel_filterbank(const MelParams& p, int sample_rate) {
  if (p.n_mels < 1) throw std::invalid_argument("mel_filterbank: n_mels must be >= 1");
  if (p.floor <= 0.0) throw std::invalid_argument("mel_filterbank: floor must be positive");
  const int bins = p.fft_size / 2 + 1;
  const double f_max = sample_rate / 2.0;
  const double m_max = hz_to_mel(f_max);
  std::vector<double> edges(p.n_mels + 2);
  for (int i = 0; i < p.n_mels + 2; ++i) edges[i] = mel_to_hz(m_max * i / (p.n_mels + 1));

  std::vector<std::vector<double>> fb(p.n_mels, std::vector<double>(bins, 0.0));
  const double hz_per_bin = static_cast<double>(sample_rate) / p.fft_size;
  for (int m = 0; m < p.n_mels; ++m) {
    const double lo = edges[m], mid = edges[m + 1], hi = edges[m + 2];
    double row_sum = 0.0;
    for (int b = 0; b < bins; ++b) {
      const double f = b * hz_per_bin;
      double wgt = 0.0;
      if (f > lo && f < mid) wgt = (f - lo) / (mid - lo);
      else if (f == mid) wgt = 1.0;
      else if (f > mid && f < hi) wgt = (hi - f) / (hi - mid);
      fb[m][b] = wgt;
      row_sum += wgt;
    }
    if (row_sum <= 0.0)
      throw std::invalid_argument("mel_filterbank: empty mel row; n_mels too large for fft_size");
  }
  return fb;
}

}  // namespace detail

// log(mel_filterbank . |stft|^2 + floor), shape {frames, n_mels}.
inline Array log_mel(const AudioSegment& x, const MelParams& p) {
  StftParams sp;
  sp.fft_size = p.fft_size;
  int hop = static_cast<int>(std::lround(p.hop_ms * x.sample_rate / 1000.0));
  // stft() requires hop | fft_size; snap to the nearest power-of-two divisor.
  int snapped = p.fft_size;
  while (snapped / 2 >= 1 && snapped > hop) snapped /= 2;
  sp.hop = std::max(1, snapped);
  sp.sample_rate = x.sample_rate;

  AudioSegment padded = x;
  const int rem = padded.length() % sp.hop;
  if (rem != 0) padded.samples.resize(padded.length() + (sp.hop - rem), 0.0);

  const ComplexGrid g = stft(padded, sp);
  const auto fb = detail::mel_filterbank(p, x.sample_rate);

  Array out({g.frames, p.n_mels});
  std::vector<double> power(g.bins);
  for (int m = 0; m < g.frames; ++m) {
    for (int b = 0; b < g.bins; ++b) power[b] = std::norm(g.at(m, b));
    for (int k = 0; k < p.n_mels; ++k) {
      double e = 0.0;
      const std::vector<double>& row = fb[k];
      for (int b = 0; b < g.bins; ++b) e += row[b] * power[b];
      out.v[static_cast<size_t>(m) * p.n_mels + k] = std::log(e + p.floor);
    }
  }
  return out;
}

// Splits a track into equal windows with `overlap` samples shared between
// neighbours; the tail is zero-padded to complete the last window.
inline std::vector<AudioSegment> chunk_track(const AudioSegment& x, int window, int overlap) {
  if (window <= 0 || overlap < 0 || overlap >= window)
    throw std::invalid_argument("chunk_track: need 0 <= overlap < window");
  const int stride = window - overlap;
  const int n = x.length() <= window ? 1 : 1 + (x.length() - window + stride - 1) / stride;
  std::vector<AudioSegment> chunks(n);
  for (int k = 0; k < n; ++k) {
    chunks[k].sample_rate = x.sample_rate;
    chunks[k].samples.resize(window, 0.0);
    const int start = k * stride;
    for (int i = 0; i < window && start + i < x.length(); ++i)
      chunks[k].samples[i] = x.samples[start + i];
  }
  return chunks;
}

// Reassembles uniform chunks with a linear crossfade over the overlap. The
// fade weights of adjoining chunks sum to one at every sample.
inline AudioSegment overlap_add_track(const std::vector<AudioSegment>& chunks,
                                      double overlap_seconds) {
  if (chunks.empty()) throw std::invalid_argument("overlap_add_track: no chunks");
  const int rate = chunks[0].sample_rate;
  const int len = chunks[0].length();
  for (const AudioSegment& c : chunks)
    if (c.length() != len || c.sample_rate != rate)
      throw std::invalid_argument("overlap_add_track: inconsistent chunk lengths");
  const int overlap = static_cast<int>(std::lround(overlap_seconds * rate));
  if (overlap < 0 || 2 * overlap > len)
    throw std::invalid_argument("overlap_add_track: need 0 <= 2*overlap <= chunk length");

  const int n = static_cast<int>(chunks.size());
  const int stride = len - overlap;
  AudioSegment out;
  out.sample_rate = rate;
  out.samples.assign(static_cast<size_t>(n - 1) * stride + len, 0.0);
  for (int k = 0; k < n; ++k) {
    const int start = k * stride;
    for (int i = 0; i < len; ++i) {
      double w = 1.0;
      if (k > 0 && i < overlap) w = (i + 1.0) / (overlap + 1.0);
      else if (k + 1 < n && i >= stride) w = (len - i) / (overlap + 1.0);
      out.samples[start + i] += w * chunks[k].samples[i];
    }
  }
  return out;
}

}  // namespace lincae
