#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "aaevar/phone.hpp"

namespace aaevar {

enum class Form { Original, Reduced };
enum class Variable { CCR, ING };

std::string_view to_string(Form f);
std::string_view to_string(Variable v);
std::optional<Variable> parse_variable(std::string_view s);

struct PronVariant {
  Pronunciation pron;
  Form form = Form::Original;
  std::optional<Variable> variable;  // set iff form == Reduced

  friend bool operator==(const PronVariant&, const PronVariant&) = default;
};

// Word (lower-case orthography) to its pronunciation variants. Every word
// holds at least one Original variant and no pronunciation appears twice.
class VariantLexicon {
 public:
  using Entries = std::map<std::string, std::vector<PronVariant>, std::less<>>;

  // Adds an Original pronunciation; returns false if the (word, pron) pair
  // was already present.
  bool add_original(std::string_view word, Pronunciation pron);

  // Adds a Reduced pronunciation to an existing word. Returns false if the
  // word is missing or the pronunciation is already present in any form.
  bool add_reduced(std::string_view word, Pronunciation pron, Variable variable);

  const std::vector<PronVariant>* find(std::string_view word) const;
  bool contains(std::string_view word) const { return find(word) != nullptr; }

  // True if the word carries at least one Reduced variant.
  bool is_target(std::string_view word) const;
  // The variable of the word's first Reduced variant.
  std::optional<Variable> target_variable(std::string_view word) const;

  const Entries& entries() const { return entries_; }
  std::size_t word_count() const { return entries_.size(); }
  std::size_t variant_count() const;
  bool empty() const { return entries_.empty(); }

 private:
  Entries entries_;
};

// Lower-cases ASCII letters; other bytes pass through unchanged.
std::string fold_case(std::string_view s);

// Reads CMU-format dictionary text. Accepts `WORD  PH1 PH2`, alternates as
// `WORD(1)`, `;;;` comment lines, trailing `# ...` comments, CRLF endings.
// Throws ParseError with the 1-based line number on malformed lines.
VariantLexicon parse_cmu_dict(std::string_view text);
VariantLexicon load_cmu_dict(const std::string& path);

struct ExpansionRules {
  // Stops eligible for final-stop deletion. Narrow to {T, D} to restrict CCR
  // to alveolar clusters.
  std::set<std::string, std::less<>> ccr_stops{"P", "B", "T", "D", "K", "G"};
  bool ccr = true;
  bool ing = true;
};

// Final-stop deletion in a word-final two-consonant cluster.
std::optional<Pronunciation> expand_ccr(std::string_view word, const Pronunciation& pron,
                                        const ExpansionRules& rules = {});

// Final NG -> N for polysyllabic -ing words.
std::optional<Pronunciation> expand_ing(std::string_view word, const Pronunciation& pron);

// Adds every eligible reduction of every Original variant as a Reduced
// variant. With a filter, only the listed words are expanded. Idempotent.
VariantLexicon expand_lexicon(const VariantLexicon& lex,
                              const std::optional<std::set<std::string, std::less<>>>& target_filter = {},
                              const ExpansionRules& rules = {});

// CMU/MFA text: one `WORD  PH1 PH2` line per variant, upper-case words, word
// ascending, Original before Reduced, then pronunciation order. LF endings.
std::string serialize_dict(const VariantLexicon& lex);

// Reads a word list (one per line, `#` comments) for target filtering.
std::set<std::string, std::less<>> parse_word_list(std::string_view text);

}  // namespace aaevar
