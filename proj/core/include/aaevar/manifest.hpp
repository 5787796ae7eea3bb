#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aaevar/stats.hpp"
#include "aaevar/textgrid.hpp"

namespace aaevar {

struct Recording {
  std::string id;
  std::filesystem::path textgrid;
  std::optional<std::filesystem::path> audio;
};

// A corpus run description. Relative paths in the file resolve against the
// manifest's directory.
//
// JSON layout (TOML uses the same keys, with [lexicon], [tiers],
// [hypotheses] tables and [[recordings]] entries):
//
//   {
//     "lexicon":   {"dictionary": "cmu.dict", "supplement": "extra.dict",
//                   "targets": "targets.txt", "ccr_stops": ["T", "D"],
//                   "include_reduced_neighbors": false},
//     "speakers":  "speakers.csv",
//     "tiers":     {"words": "* - words", "phones": "* - phones",
//                   "utterances": "*", "include": [...], "exclude": ["*_int_*"]},
//     "noise_patterns": ["(*)", "/*/", "<*>"],
//     "phone_slack": 0.01, "pause_gap": 1.0, "fit": true,
//     "recordings": [{"id": "DCA_se1_ag1_f_01_1", "textgrid": "a.TextGrid", "audio": "a.wav"}],
//     "hypotheses": {"without_lm": "hyp_no_lm.csv", "with_lm": "hyp_lm.csv"}
//   }
struct CorpusManifest {
  std::filesystem::path base_dir;

  std::filesystem::path dictionary;
  std::optional<std::filesystem::path> supplement;
  std::optional<std::filesystem::path> targets;
  std::vector<std::string> ccr_stops{"P", "B", "T", "D", "K", "G"};
  bool include_reduced_neighbors = false;

  std::filesystem::path speakers;

  std::string word_tier_pattern = "* - words";
  std::string phone_tier_pattern = "* - phones";
  std::optional<std::string> utterance_tier_pattern;
  SpeakerFilter speaker_filter;

  std::vector<std::string> noise_patterns;
  double phone_slack = 0.01;
  double pause_gap = 1.0;
  bool fit = false;

  std::vector<Recording> recordings;
  std::map<AsrType, std::filesystem::path> hypotheses;
};

// Builds a manifest from JSON text. Throws Error on schema problems, and
// when a referenced file does not exist and `check_files` is set.
CorpusManifest parse_manifest_json(std::string_view text, const std::filesystem::path& base_dir,
                                   bool check_files = true);
CorpusManifest parse_manifest_toml(std::string_view text, const std::filesystem::path& base_dir,
                                   bool check_files = true);
// Dispatches on the extension (.toml, otherwise JSON).
CorpusManifest load_manifest(const std::filesystem::path& path, bool check_files = true);

// The TOML subset manifests use: comments, key = value, [table],
// [[array.of.tables]], basic and literal strings, integers, floats, booleans
// and (possibly multi-line) arrays. Returned as JSON text.
std::string toml_to_json(std::string_view text);

}  // namespace aaevar
