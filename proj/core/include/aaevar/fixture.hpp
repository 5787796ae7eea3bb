#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "aaevar/neighborhood.hpp"
#include "aaevar/stats.hpp"

namespace aaevar {

// Hypothesis errors planted for one ASR system. Rates apply to target tokens
// whose MFA status is Original or Reduced, except `neighbor` (the share of
// known-word substitutions whose hypothesis word is a lexical neighbor of the
// selected pronunciation) and `insertion` (per utterance).
struct AsrErrorRates {
  double substitution = 0.0;
  double neighbor = 0.0;
  double deletion = 0.0;
  double unknown = 0.0;  // substitutions by a word missing from the lexicon
  double insertion = 0.0;
};

struct FixtureSpec {
  std::size_t n_tokens = 500;
  double reduced_rate = 0.4;
  double other_rate = 0.0;
  std::size_t n_speakers = 8;
  std::size_t n_recordings = 4;
  AsrErrorRates without_lm{0.5, 0.1, 0.04, 0.02, 0.1};
  AsrErrorRates with_lm{0.3, 0.04, 0.02, 0.01, 0.05};
  bool write_audio = false;
  std::uint32_t sample_rate = 16000;
};

struct GroundTruthRow {
  std::string recording;
  std::string utterance_id;
  std::string target_word;
  double start = 0.0;
  AsrType asr_type = AsrType::without_lm;
  MfaStatus mfa_status = MfaStatus::Original;
  std::string token_outcome;
  std::optional<Attribution> neighborhood;
  double wer = 0.0;
};

struct FixtureCorpus {
  std::filesystem::path dir;
  std::filesystem::path manifest_json;
  std::filesystem::path manifest_toml;
  std::vector<std::filesystem::path> textgrids;
  std::vector<std::filesystem::path> audio;
  // Same order as run_analysis rows: recording, utterance, start, asr_type.
  std::vector<GroundTruthRow> truth;
};

// Writes a synthetic corpus into `out_dir`: lexicon.dict, targets.txt,
// speakers.csv, one long-format TextGrid per recording, hyp_without_lm.csv,
// hyp_with_lm.csv, manifest.json, manifest.toml, ground_truth.csv and, on
// request, one WAV per recording. Every count is round(rate * population),
// so the planted totals are exact. Fully determined by `seed`. Throws Error for rates outside [0, 1] or
// more errors than eligible tokens.
FixtureCorpus generate_fixture(std::uint64_t seed, const FixtureSpec& spec, const std::filesystem::path& out_dir);

std::string ground_truth_csv(const std::vector<GroundTruthRow>& rows);

}  // namespace aaevar
