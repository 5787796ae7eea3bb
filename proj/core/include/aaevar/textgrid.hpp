#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aaevar/error.hpp"

namespace aaevar {

struct Interval {
  double xmin = 0.0;
  double xmax = 0.0;
  std::string text;  // empty = silence

  double midpoint() const { return 0.5 * (xmin + xmax); }
  friend bool operator==(const Interval&, const Interval&) = default;
};

struct Tier {
  std::string name;
  std::vector<Interval> intervals;  // sorted, non-overlapping

  friend bool operator==(const Tier&, const Tier&) = default;
};

struct TextGrid {
  double xmin = 0.0;
  double xmax = 0.0;
  std::vector<Tier> tiers;
  // Point tiers are not loaded; their names are recorded here.
  std::vector<std::string> skipped_point_tiers;

  const Tier* find_tier(std::string_view name) const;
  friend bool operator==(const TextGrid&, const TextGrid&) = default;
};

// Structural problem in a TextGrid. Indices are 1-based; 0 means the error is
// not tied to a tier or interval.
class TextGridError : public ParseError {
 public:
  TextGridError(const std::string& what, std::size_t tier = 0, std::size_t interval = 0);

  std::size_t tier() const { return tier_; }
  std::size_t interval() const { return interval_; }

 private:
  std::size_t tier_;
  std::size_t interval_;
};

// Decodes UTF-8 (with or without BOM) or BOM-marked UTF-16 LE/BE to UTF-8.
std::string decode_text(std::string_view bytes);

// Parses Praat long or short text format. Never throws anything but
// TextGridError on malformed input.
TextGrid parse_textgrid(std::string_view bytes);
TextGrid load_textgrid(const std::string& path);

// Praat long text format, UTF-8. Times use shortest round-trip formatting so
// parse_textgrid(render_textgrid(g)) == g.
std::string render_textgrid(const TextGrid& grid);
// Short text format; used for cross-format tests and fuzz seeds.
std::string render_textgrid_short(const TextGrid& grid);

struct SpeakerFilter {
  std::vector<std::string> include;  // glob patterns; empty = everyone
  std::vector<std::string> exclude;  // glob patterns

  bool accepts(std::string_view label) const;
};

struct TierPair {
  std::string speaker;
  const Tier* words = nullptr;
  const Tier* phones = nullptr;
};

struct TierSelection {
  std::vector<TierPair> pairs;
  std::vector<std::string> unpaired;     // tier names without a partner
  std::vector<std::string> filtered_out; // speaker labels dropped by the filter
};

// Glob match supporting `*` and `?`.
bool glob_match(std::string_view pattern, std::string_view text);

// If `pattern` contains exactly one `*` and `text` matches it, returns the
// text the `*` captured.
std::optional<std::string> glob_capture(std::string_view pattern, std::string_view text);

// Pairs word and phone tiers by the speaker label each pattern's `*` captures.
// Throws Error("no tier pairs matched") when nothing pairs up.
TierSelection select_tiers(const TextGrid& grid, std::string_view word_pattern,
                           std::string_view phone_pattern, const SpeakerFilter& filter = {});

bool is_silence_label(std::string_view label);

// Phone intervals whose midpoint lies within the word interval widened by
// `slack` on both sides, silence labels excluded.
std::vector<Interval> phones_within(const Interval& word, const Tier& phone_tier, double slack = 0.01);

}  // namespace aaevar
