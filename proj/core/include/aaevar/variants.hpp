#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aaevar/lexicon.hpp"
#include "aaevar/textgrid.hpp"

namespace aaevar {

enum class Gender { Male, Female };
enum class AgeGroup { ag1, ag2, ag3, ag4 };
enum class MfaStatus { Original, Reduced, Other };

std::string_view to_string(Gender g);
std::string_view to_string(AgeGroup a);
std::string_view to_string(MfaStatus s);
std::optional<Gender> parse_gender(std::string_view s);
std::optional<AgeGroup> parse_age_group(std::string_view s);
std::optional<MfaStatus> parse_mfa_status(std::string_view s);

struct SpeakerMeta {
  std::string speaker_id;
  Gender gender = Gender::Male;
  AgeGroup age_group = AgeGroup::ag1;
  int ses = 1;  // 1..3, lowest to highest
};

using SpeakerTable = std::map<std::string, SpeakerMeta, std::less<>>;

// CSV with header `speaker_id,gender,age_group,ses`. Gender accepts
// Male/Female/m/f, age group ag1..ag4 (or 1..4), ses 1..3.
SpeakerTable parse_speaker_csv(std::string_view text);
SpeakerTable load_speaker_csv(const std::string& path);

// One stretch of a speaker's word tier treated as a single reference
// utterance for alignment.
struct Utterance {
  std::string id;
  double start = 0.0;
  double end = 0.0;
  std::vector<std::size_t> word_intervals;  // indices into the word tier
  std::vector<std::string> tokens;          // normalized reference stream
  std::vector<std::size_t> token_interval;  // word interval index per token
};

struct SegmentationOptions {
  double pause_gap = 1.0;  // a silence longer than this starts a new utterance
  std::vector<std::string> noise_patterns;
  const Tier* utterance_tier = nullptr;  // when set, overrides pause segmentation
};

// `<recording>-<speaker>-<NNNN>`, 1-based index.
std::string make_utterance_id(std::string_view recording, std::string_view speaker, std::size_t index);

std::vector<Utterance> segment_utterances(const Tier& word_tier, std::string_view recording,
                                          std::string_view speaker, const SegmentationOptions& opts);

struct TokenOccurrence {
  std::string word;
  std::string recording;
  std::string speaker_label;
  std::string utterance_id;
  std::size_t ref_index = 0;  // position in the utterance's token stream
  double start = 0.0;
  double end = 0.0;
  Pronunciation realized;
  MfaStatus mfa_status = MfaStatus::Other;
  Variable variable = Variable::CCR;
  SpeakerMeta speaker;
};

// Stress-blind comparison of the realized phones against the word's
// variants: any Original match wins, then any Reduced match, else Other.
MfaStatus classify_mfa_status(const Pronunciation& realized, const std::vector<PronVariant>& variants);

struct SpeakerTokens {
  std::vector<Utterance> utterances;
  std::vector<TokenOccurrence> tokens;
};

struct CollectOptions {
  SegmentationOptions segmentation;
  double phone_slack = 0.01;
};

// Every word-tier interval whose word has a Reduced variant becomes one
// TokenOccurrence. Throws Error listing any paired speaker label missing
// from `meta`.
std::vector<SpeakerTokens> collect_target_tokens(const std::vector<TierPair>& pairs, std::string_view recording,
                                                 const VariantLexicon& lex, const SpeakerTable& meta,
                                                 const CollectOptions& opts = {});

}  // namespace aaevar
