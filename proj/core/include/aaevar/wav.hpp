#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aaevar/segments.hpp"

namespace aaevar {

// 16-bit PCM mono audio. `data` holds the raw little-endian bytes of the
// data chunk exactly as stored in the file.
struct PcmWav {
  std::uint32_t sample_rate = 16000;
  std::vector<std::uint8_t> data;

  std::size_t sample_count() const { return data.size() / 2; }
  double duration() const { return static_cast<double>(sample_count()) / sample_rate; }
};

// RIFF/WAVE reader. Accepts format tag 1 (or EXTENSIBLE with a PCM
// subformat), 16 bits, one channel; anything else throws UnsupportedFormat.
// Structural damage throws ParseError.
PcmWav parse_wav(std::span<const std::uint8_t> bytes);
PcmWav read_wav(const std::string& path);

// Canonical 44-byte header followed by the data chunk.
std::vector<std::uint8_t> encode_wav(const PcmWav& wav);
void write_wav(const std::string& path, const PcmWav& wav);

std::size_t sample_index(double seconds, std::uint32_t sample_rate);

// Cuts at round(t * sample_rate). Throws Error when a chunk ends past the
// last sample or is empty.
std::vector<PcmWav> split_wav(const PcmWav& wav, const SegmentPlan& plan);

// Writes chunk_0001.wav, chunk_0002.wav, ... into out_dir; returns the paths.
std::vector<std::string> split_wav_file(const std::string& in_path, const SegmentPlan& plan,
                                        const std::string& out_dir);

}  // namespace aaevar
