#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "lincae/common.hpp"
#include "lincae/dsp.hpp"

namespace lincae {

namespace detail {

inline void put_u32(std::string& s, uint32_t v) {
  for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
inline void put_u16(std::string& s, uint16_t v) {
  for (int i = 0; i < 2; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

struct ByteReader {
  const std::string& buf;
  size_t pos = 0;
  const std::string path;

  void need(size_t n, const char* what) const {
    if (pos + n > buf.size())
      throw ParseError(path + ": truncated " + what + " at byte offset " + std::to_string(pos));
  }
  uint32_t u32(const char* what) {
    need(4, what);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(static_cast<uint8_t>(buf[pos + i])) << (8 * i);
    pos += 4;
    return v;
  }
  uint16_t u16(const char* what) {
    need(2, what);
    uint16_t v = 0;
    for (int i = 0; i < 2; ++i) v |= static_cast<uint16_t>(static_cast<uint8_t>(buf[pos + i])) << (8 * i);
    pos += 2;
    return v;
  }
  std::string tag() {
    need(4, "chunk tag");
    std::string t = buf.substr(pos, 4);
    pos += 4;
    return t;
  }
};

}  // namespace detail

enum class WavFormat { Pcm16, Float32 };

// Mono little-endian WAV writer; PCM16 or IEEE float32.
inline void save_wav(const std::string& path, const AudioSegment& x,
                     WavFormat fmt = WavFormat::Float32) {
  const uint32_t n = static_cast<uint32_t>(x.samples.size());
  const uint16_t bytes_per = fmt == WavFormat::Pcm16 ? 2 : 4;
  const uint32_t data_bytes = n * bytes_per;

  std::string out;
  out.reserve(44 + data_bytes);
  out += "RIFF";
  detail::put_u32(out, 36 + data_bytes);
  out += "WAVEfmt ";
  detail::put_u32(out, 16);
  detail::put_u16(out, fmt == WavFormat::Pcm16 ? 1 : 3);
  detail::put_u16(out, 1);  // mono
  detail::put_u32(out, static_cast<uint32_t>(x.sample_rate));
  detail::put_u32(out, static_cast<uint32_t>(x.sample_rate) * bytes_per);
  detail::put_u16(out, bytes_per);
  detail::put_u16(out, static_cast<uint16_t>(8 * bytes_per));
  out += "data";
  detail::put_u32(out, data_bytes);

  if (fmt == WavFormat::Pcm16) {
    for (double s : x.samples) {
      double c = std::clamp(s, -1.0, 1.0);
      int v = static_cast<int>(std::lround(c * 32767.0));
      detail::put_u16(out, static_cast<uint16_t>(static_cast<int16_t>(v)));
    }
  } else {
    for (double s : x.samples) {
      float f = static_cast<float>(s);
      uint32_t bits;
      std::memcpy(&bits, &f, 4);
      detail::put_u32(out, bits);
    }
  }

  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("save_wav: cannot open " + path);
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw std::runtime_error("save_wav: write failed for " + path);
}

inline AudioSegment load_wav(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw MissingArtifact("load_wav: cannot open " + path);
  std::string buf((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());

  detail::ByteReader r{buf, 0, path};
  if (r.tag() != "RIFF") throw ParseError(path + ": missing RIFF tag at byte offset 0");
  r.u32("riff size");
  if (r.tag() != "WAVE") throw ParseError(path + ": missing WAVE tag at byte offset 8");

  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  bool have_fmt = false;
  AudioSegment out;

  while (r.pos + 8 <= buf.size()) {
    const size_t chunk_at = r.pos;
    std::string tag = r.tag();
    uint32_t size = r.u32("chunk size");
    r.need(size, "chunk body");
    if (tag == "fmt ") {
      if (size < 16) throw ParseError(path + ": fmt chunk too small at byte offset " +
                                      std::to_string(chunk_at));
      size_t p = r.pos;
      detail::ByteReader fr{buf, p, path};
      format = fr.u16("format");
      channels = fr.u16("channels");
      rate = fr.u32("rate");
      fr.u32("byte rate");
      fr.u16("block align");
      bits = fr.u16("bits");
      have_fmt = true;
    } else if (tag == "data") {
      if (!have_fmt) throw ParseError(path + ": data chunk before fmt at byte offset " +
                                      std::to_string(chunk_at));
      if (channels != 1)
        throw std::invalid_argument(path + ": unsupported format: expected mono, got " +
                                    std::to_string(channels) + " channels");
      out.sample_rate = static_cast<int>(rate);
      if (format == 1 && bits == 16) {
        const size_t n = size / 2;
        out.samples.resize(n);
        for (size_t i = 0; i < n; ++i) {
          uint16_t u = static_cast<uint8_t>(buf[r.pos + 2 * i]) |
                       (static_cast<uint16_t>(static_cast<uint8_t>(buf[r.pos + 2 * i + 1])) << 8);
          out.samples[i] = static_cast<int16_t>(u) / 32767.0;
        }
      } else if (format == 3 && bits == 32) {
        const size_t n = size / 4;
        out.samples.resize(n);
        for (size_t i = 0; i < n; ++i) {
          uint32_t u = 0;
          for (int k = 0; k < 4; ++k)
            u |= static_cast<uint32_t>(static_cast<uint8_t>(buf[r.pos + 4 * i + k])) << (8 * k);
          float v;
          std::memcpy(&v, &u, 4);
          out.samples[i] = static_cast<double>(v);
        }
      } else {
        throw std::invalid_argument(path + ": unsupported format: tag " + std::to_string(format) +
                                    ", " + std::to_string(bits) + " bits");
      }
      return out;
    }
    r.pos += size + (size & 1);  // chunks are word-aligned
  }
  throw ParseError(path + ": no data chunk found (ended at byte offset " + std::to_string(r.pos) +
                   ")");
}

}  // namespace lincae
