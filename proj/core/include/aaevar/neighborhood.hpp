#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "aaevar/alignment.hpp"
#include "aaevar/lexicon.hpp"
#include "aaevar/variants.hpp"

namespace aaevar {

// Levenshtein distance over stress-stripped phone sequences, unit costs.
std::size_t phon_distance(const Pronunciation& a, const Pronunciation& b);

struct NeighborOptions {
  // Reduced variants are products of expansion, not lexical competitors.
  // Setting this admits them as neighbor candidates and as hypothesis prons.
  bool include_reduced = false;
};

struct Neighbor {
  std::string word;
  Pronunciation pron;
  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

// Words whose closest candidate pronunciation is exactly one phone edit from
// `source`. Each member lists the pronunciation(s) at that distance. Sorted
// by word, then pronunciation.
struct NeighborSet {
  Pronunciation source;
  std::vector<Neighbor> neighbors;

  bool contains(std::string_view word) const;
  std::vector<std::string> words() const;
};

// Linear scan with a length prefilter. `exclude_word` drops the source word
// itself (a reduced form is one edit from its own citation form).
NeighborSet neighbors(const Pronunciation& pron, const VariantLexicon& lex, const NeighborOptions& opts = {},
                      std::string_view exclude_word = {});

// Deletion-signature index over an immutable lexicon: every candidate
// pronunciation is filed under itself and each single-deletion variant, so a
// query only inspects entries sharing a signature. Safe for concurrent
// queries once built.
class NeighborIndex {
 public:
  explicit NeighborIndex(const VariantLexicon& lex, NeighborOptions opts = {});

  NeighborSet query(const Pronunciation& pron, std::string_view exclude_word = {}) const;

 private:
  struct Entry {
    std::uint32_t word;
    Pronunciation pron;
  };
  std::vector<std::string> words_;
  std::vector<Entry> entries_;
  std::unordered_map<std::string, std::vector<std::uint32_t>> signatures_;
};

enum class Attribution { Correct, Neighbor_Error, Non_Neighbor_Error, Deleted, Unknown_Pron };

std::string_view to_string(Attribution a);
std::optional<Attribution> parse_attribution(std::string_view s);

struct ErrorAttribution {
  Attribution status = Attribution::Correct;
  std::string hyp_word;                 // set for substitutions
  std::optional<std::size_t> distance;  // set when both prons were known
};

// Classifies an aligned target token. The pronunciation compared against the
// hypothesis word is the token's Reduced pron when MFA chose the reduced
// form, else its Original pron. Hypothesis prons come from `lex`, then
// `supplement`; the minimum distance over alternates is used. Throws Error
// when token.mfa_status is Other.
ErrorAttribution attribute_error(const TokenOccurrence& token, const TokenOutcome& outcome, const VariantLexicon& lex,
                                 const VariantLexicon* supplement = nullptr, const NeighborOptions& opts = {});

// Hypothesis words with no pronunciation, counted.
class UnknownWordReport {
 public:
  void add(std::string_view word, std::size_t n = 1);
  void merge(const UnknownWordReport& other);
  // `word,count`, count descending, then word ascending.
  std::string to_csv() const;
  const std::map<std::string, std::size_t, std::less<>>& counts() const { return counts_; }

 private:
  std::map<std::string, std::size_t, std::less<>> counts_;
};

}  // namespace aaevar
