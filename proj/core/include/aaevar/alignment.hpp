#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace aaevar {

// Tokens whose raw form matches any of these globs are dropped from
// reference and hypothesis streams. Defaults cover CORAAL markup: pauses and
// other parenthesized events, /unintelligible/ spans, <angle> tags.
std::vector<std::string> default_noise_patterns();

// Lower-cases and strips leading/trailing punctuation, keeping internal
// apostrophes and hyphens. Returns nullopt for noise tokens and for tokens
// that are empty after stripping.
std::optional<std::string> normalize_token(std::string_view raw, const std::vector<std::string>& noise_patterns);

// Splits transcript text on whitespace, keeping (...), <...> and /.../ spans
// together as single raw tokens.
std::vector<std::string> tokenize_transcript(std::string_view text);

// tokenize_transcript followed by normalize_token.
std::vector<std::string> normalize_transcript(std::string_view text, const std::vector<std::string>& noise_patterns);

enum class OpKind { Match, Sub, Ins, Del };

struct AlignOp {
  OpKind kind;
  std::optional<std::string> ref;
  std::optional<std::string> hyp;
};

struct AlignCounts {
  std::size_t match = 0;
  std::size_t sub = 0;
  std::size_t ins = 0;
  std::size_t del = 0;

  std::size_t errors() const { return sub + ins + del; }
  friend bool operator==(const AlignCounts&, const AlignCounts&) = default;
};

struct AlignmentResult {
  std::vector<AlignOp> ops;
  AlignCounts counts;
  std::size_t ref_length = 0;
  double wer = 0.0;
  // Empty reference: wer holds the insertion count instead of a ratio.
  bool degenerate = false;
  // ops index for each reference position.
  std::vector<std::size_t> ref_op;

  std::size_t cost() const { return counts.errors(); }
};

// Global Needleman-Wunsch alignment with unit costs (match 0, sub/ins/del 1),
// so the total cost is the Levenshtein distance. Among optimal paths the
// traceback prefers Match > Sub > Del > Ins at every step.
AlignmentResult align(const std::vector<std::string>& ref, const std::vector<std::string>& hyp);

struct Correct {
  friend bool operator==(const Correct&, const Correct&) = default;
};
struct Substituted {
  std::string hyp;
  friend bool operator==(const Substituted&, const Substituted&) = default;
};
struct Deleted {
  friend bool operator==(const Deleted&, const Deleted&) = default;
};
using TokenOutcome = std::variant<Correct, Substituted, Deleted>;

std::string_view outcome_name(const TokenOutcome& o);

// What the hypothesis did with reference token `ref_index`. Throws
// std::out_of_range when the index is past the reference.
TokenOutcome hyp_for_token(const AlignmentResult& result, std::size_t ref_index);

// (S + D + I) / N. Throws aaevar::Error for an empty reference.
double utterance_wer(const AlignmentResult& result);
double utterance_wer(const AlignCounts& counts);

}  // namespace aaevar
