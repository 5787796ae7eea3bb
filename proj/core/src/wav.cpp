#include "aaevar/wav.hpp"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>

#include <fmt/format.h>

#include "aaevar/error.hpp"

namespace aaevar {
namespace {

std::uint32_t le32(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint32_t>(b[at]) | static_cast<std::uint32_t>(b[at + 1]) << 8 |
         static_cast<std::uint32_t>(b[at + 2]) << 16 | static_cast<std::uint32_t>(b[at + 3]) << 24;
}

std::uint16_t le16(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint16_t>(b[at] | b[at + 1] << 8);
}

void put32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

bool tag_is(std::span<const std::uint8_t> b, std::size_t at, const char* tag) {
  return std::memcmp(b.data() + at, tag, 4) == 0;
}

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

}  // namespace

PcmWav parse_wav(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 12 || !tag_is(bytes, 0, "RIFF") || !tag_is(bytes, 8, "WAVE")) {
    throw ParseError("not a RIFF/WAVE file");
  }
  bool have_fmt = false;
  PcmWav wav;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint32_t size = le32(bytes, pos + 4);
    const std::size_t body = pos + 8;
    if (size > bytes.size() - body) throw ParseError("chunk extends past end of file");
    if (tag_is(bytes, pos, "fmt ")) {
      if (size < 16) throw ParseError("fmt chunk too short");
      std::uint16_t format = le16(bytes, body);
      const std::uint16_t channels = le16(bytes, body + 2);
      wav.sample_rate = le32(bytes, body + 4);
      const std::uint16_t bits = le16(bytes, body + 14);
      if (format == kFormatExtensible && size >= 40) format = le16(bytes, body + 24);
      if (format != kFormatPcm) throw UnsupportedFormat(fmt::format("unsupported WAV format tag {:#x}", format));
      if (bits != 16) throw UnsupportedFormat(fmt::format("unsupported sample width {} bits", bits));
      if (channels != 1) throw UnsupportedFormat(fmt::format("unsupported channel count {}", channels));
      if (wav.sample_rate == 0) throw ParseError("sample rate is zero");
      have_fmt = true;
    } else if (tag_is(bytes, pos, "data")) {
      if (!have_fmt) throw ParseError("data chunk before fmt chunk");
      wav.data.assign(bytes.begin() + static_cast<std::ptrdiff_t>(body),
                      bytes.begin() + static_cast<std::ptrdiff_t>(body + size));
      return wav;
    }
    pos = body + size + (size & 1);
  }
  throw ParseError(have_fmt ? "missing data chunk" : "missing fmt chunk");
}

PcmWav read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return parse_wav(bytes);
  } catch (const UnsupportedFormat& e) {
    throw UnsupportedFormat(path + ": " + e.what());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::vector<std::uint8_t> encode_wav(const PcmWav& wav) {
  std::vector<std::uint8_t> out;
  out.reserve(44 + wav.data.size());
  const auto data_size = static_cast<std::uint32_t>(wav.data.size());
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  put32(out, 36 + data_size);
  out.insert(out.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  put32(out, 16);
  put16(out, kFormatPcm);
  put16(out, 1);
  put32(out, wav.sample_rate);
  put32(out, wav.sample_rate * 2);
  put16(out, 2);
  put16(out, 16);
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  put32(out, data_size);
  out.insert(out.end(), wav.data.begin(), wav.data.end());
  if (data_size & 1) out.push_back(0);
  return out;
}

void write_wav(const std::string& path, const PcmWav& wav) {
  auto bytes = encode_wav(wav);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write failed: " + path);
}

std::size_t sample_index(double seconds, std::uint32_t sample_rate) {
  if (!(seconds >= 0)) throw Error(fmt::format("negative or invalid time {}", seconds));
  return static_cast<std::size_t>(std::llround(seconds * static_cast<double>(sample_rate)));
}

std::vector<PcmWav> split_wav(const PcmWav& wav, const SegmentPlan& plan) {
  const std::size_t total = wav.sample_count();
  std::vector<PcmWav> out;
  out.reserve(plan.chunks.size());
  for (std::size_t i = 0; i < plan.chunks.size(); ++i) {
    const auto& c = plan.chunks[i];
    const std::size_t a = sample_index(c.start, wav.sample_rate);
    const std::size_t b = sample_index(c.end, wav.sample_rate);
    if (b > total) {
      throw Error(fmt::format("chunk {} ends at {} s (sample {}), past the end of the audio ({} samples)", i + 1,
                              c.end, b, total));
    }
    if (a >= b) throw Error(fmt::format("chunk {} is empty", i + 1));
    PcmWav piece;
    piece.sample_rate = wav.sample_rate;
    piece.data.assign(wav.data.begin() + static_cast<std::ptrdiff_t>(2 * a),
                      wav.data.begin() + static_cast<std::ptrdiff_t>(2 * b));
    out.push_back(std::move(piece));
  }
  return out;
}

std::vector<std::string> split_wav_file(const std::string& in_path, const SegmentPlan& plan,
                                        const std::string& out_dir) {
  const PcmWav wav = read_wav(in_path);
  auto pieces = split_wav(wav, plan);
  std::filesystem::create_directories(out_dir);
  std::vector<std::string> paths;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    auto path = (std::filesystem::path(out_dir) / fmt::format("chunk_{:04d}.wav", i + 1)).string();
    write_wav(path, pieces[i]);
    paths.push_back(std::move(path));
  }
  return paths;
}

}  // namespace aaevar
