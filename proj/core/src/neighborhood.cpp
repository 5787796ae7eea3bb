#include "aaevar/neighborhood.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include <fmt/format.h>

#include "aaevar/csv.hpp"
#include "aaevar/error.hpp"

namespace aaevar {

namespace {

std::size_t edit_distance(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
  if (a.size() < b.size()) return edit_distance(b, a);
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  std::iota(prev.begin(), prev.end(), 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = std::min({prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1), prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

bool is_candidate(const PronVariant& v, const NeighborOptions& opts) {
  return v.form == Form::Original || opts.include_reduced;
}

std::string key_of(const std::vector<std::uint8_t>& ids) { return std::string(ids.begin(), ids.end()); }

void sort_neighbors(std::vector<Neighbor>& ns) {
  std::sort(ns.begin(), ns.end(), [](const Neighbor& a, const Neighbor& b) {
    if (a.word != b.word) return a.word < b.word;
    return a.pron.str() < b.pron.str();
  });
}

// Appends the word's distance-1 prons when its closest candidate is at
// distance exactly 1.
void consider_word(std::string_view word, const std::vector<const Pronunciation*>& prons,
                   const std::vector<std::uint8_t>& source, std::vector<Neighbor>& out) {
  std::size_t best = static_cast<std::size_t>(-1);
  std::vector<const Pronunciation*> at_one;
  for (const auto* p : prons) {
    const std::size_t d = edit_distance(source, p->base_ids());
    best = std::min(best, d);
    if (d == 1) at_one.push_back(p);
  }
  if (best != 1) return;
  for (const auto* p : at_one) out.push_back(Neighbor{std::string(word), *p});
}

}  // namespace

std::size_t phon_distance(const Pronunciation& a, const Pronunciation& b) {
  return edit_distance(a.base_ids(), b.base_ids());
}

bool NeighborSet::contains(std::string_view word) const {
  return std::any_of(neighbors.begin(), neighbors.end(), [&](const Neighbor& n) { return n.word == word; });
}

std::vector<std::string> NeighborSet::words() const {
  std::vector<std::string> out;
  for (const auto& n : neighbors) {
    if (out.empty() || out.back() != n.word) out.push_back(n.word);
  }
  return out;
}

NeighborSet neighbors(const Pronunciation& pron, const VariantLexicon& lex, const NeighborOptions& opts,
                      std::string_view exclude_word) {
  NeighborSet set{pron, {}};
  const auto source = pron.base_ids();
  std::vector<const Pronunciation*> prons;
  for (const auto& [word, variants] : lex.entries()) {
    if (!exclude_word.empty() && word == exclude_word) continue;
    prons.clear();
    bool in_range = false;
    for (const auto& v : variants) {
      if (!is_candidate(v, opts)) continue;
      prons.push_back(&v.pron);
      const auto len = v.pron.size();
      if (len + 1 >= source.size() && len <= source.size() + 1) in_range = true;
    }
    // A word with no pron of length within one of the source cannot have a
    // distance-1 pron.
    if (!in_range) continue;
    consider_word(word, prons, source, set.neighbors);
  }
  sort_neighbors(set.neighbors);
  return set;
}

NeighborIndex::NeighborIndex(const VariantLexicon& lex, NeighborOptions opts) {
  for (const auto& [word, variants] : lex.entries()) {
    const auto w = static_cast<std::uint32_t>(words_.size());
    bool any = false;
    for (const auto& v : variants) {
      if (!is_candidate(v, opts)) continue;
      any = true;
      const auto e = static_cast<std::uint32_t>(entries_.size());
      entries_.push_back(Entry{w, v.pron});
      const auto ids = v.pron.base_ids();
      std::set<std::string> keys{key_of(ids)};
      for (std::size_t i = 0; i < ids.size(); ++i) {
        auto del = ids;
        del.erase(del.begin() + static_cast<std::ptrdiff_t>(i));
        keys.insert(key_of(del));
      }
      for (const auto& k : keys) signatures_[k].push_back(e);
    }
    if (any) words_.push_back(word);
  }
}

NeighborSet NeighborIndex::query(const Pronunciation& pron, std::string_view exclude_word) const {
  const auto source = pron.base_ids();
  std::set<std::string> keys{key_of(source)};
  for (std::size_t i = 0; i < source.size(); ++i) {
    auto del = source;
    del.erase(del.begin() + static_cast<std::ptrdiff_t>(i));
    keys.insert(key_of(del));
  }
  std::set<std::uint32_t> candidate_words;
  for (const auto& k : keys) {
    auto it = signatures_.find(k);
    if (it == signatures_.end()) continue;
    for (auto e : it->second) candidate_words.insert(entries_[e].word);
  }

  // The minimum over a word's prons needs all of them, not only the ones that
  // shared a signature: a word with one pron at distance 0 is no neighbor.
  // Entries of one word are contiguous in entries_.
  NeighborSet set{pron, {}};
  std::vector<const Pronunciation*> prons;
  auto first_entry = [&](std::uint32_t w) {
    return std::lower_bound(entries_.begin(), entries_.end(), w,
                            [](const Entry& e, std::uint32_t word) { return e.word < word; });
  };
  for (auto w : candidate_words) {
    if (!exclude_word.empty() && words_[w] == exclude_word) continue;
    prons.clear();
    for (auto it = first_entry(w); it != entries_.end() && it->word == w; ++it) prons.push_back(&it->pron);
    consider_word(words_[w], prons, source, set.neighbors);
  }
  sort_neighbors(set.neighbors);
  return set;
}

std::string_view to_string(Attribution a) {
  switch (a) {
    case Attribution::Correct: return "Correct";
    case Attribution::Neighbor_Error: return "Neighbor_Error";
    case Attribution::Non_Neighbor_Error: return "Non_Neighbor_Error";
    case Attribution::Deleted: return "Deleted";
    default: return "Unknown_Pron";
  }
}

std::optional<Attribution> parse_attribution(std::string_view s) {
  for (auto a : {Attribution::Correct, Attribution::Neighbor_Error, Attribution::Non_Neighbor_Error,
                 Attribution::Deleted, Attribution::Unknown_Pron}) {
    if (to_string(a) == s) return a;
  }
  return std::nullopt;
}

ErrorAttribution attribute_error(const TokenOccurrence& token, const TokenOutcome& outcome, const VariantLexicon& lex,
                                 const VariantLexicon* supplement, const NeighborOptions& opts) {
  if (token.mfa_status == MfaStatus::Other) {
    throw Error(fmt::format("cannot attribute token '{}' in {}: MFA status is Other", token.word, token.utterance_id));
  }
  if (std::holds_alternative<Correct>(outcome)) return {Attribution::Correct, {}, std::nullopt};
  if (std::holds_alternative<Deleted>(outcome)) return {Attribution::Deleted, {}, std::nullopt};

  ErrorAttribution res;
  res.hyp_word = std::get<Substituted>(outcome).hyp;

  const auto* target_variants = lex.find(token.word);
  if (!target_variants) throw Error("target word '" + token.word + "' not in lexicon");
  const Form want = token.mfa_status == MfaStatus::Reduced ? Form::Reduced : Form::Original;
  std::vector<const Pronunciation*> selected;
  for (const auto& v : *target_variants) {
    if (v.form == want && v.pron.same_bases(token.realized)) selected.push_back(&v.pron);
  }
  if (selected.empty()) {
    for (const auto& v : *target_variants) {
      if (v.form == want) selected.push_back(&v.pron);
    }
  }
  if (selected.empty()) throw Error("target word '" + token.word + "' has no " + std::string(to_string(want)) + " pron");

  const auto* hyp_variants = lex.find(res.hyp_word);
  if (!hyp_variants && supplement) hyp_variants = supplement->find(res.hyp_word);
  std::vector<const Pronunciation*> hyp_prons;
  if (hyp_variants) {
    for (const auto& v : *hyp_variants) {
      if (is_candidate(v, opts)) hyp_prons.push_back(&v.pron);
    }
  }
  if (hyp_prons.empty()) {
    res.status = Attribution::Unknown_Pron;
    return res;
  }

  std::size_t best = static_cast<std::size_t>(-1);
  for (const auto* t : selected) {
    for (const auto* h : hyp_prons) best = std::min(best, phon_distance(*t, *h));
  }
  res.distance = best;
  res.status = best == 1 ? Attribution::Neighbor_Error : Attribution::Non_Neighbor_Error;
  return res;
}

void UnknownWordReport::add(std::string_view word, std::size_t n) {
  auto it = counts_.find(word);
  if (it == counts_.end()) {
    counts_.emplace(std::string(word), n);
  } else {
    it->second += n;
  }
}

void UnknownWordReport::merge(const UnknownWordReport& other) {
  for (const auto& [w, n] : other.counts_) add(w, n);
}

std::string UnknownWordReport::to_csv() const {
  std::vector<std::pair<std::string, std::size_t>> rows(counts_.begin(), counts_.end());
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  std::string out = "word,count\n";
  for (const auto& [w, n] : rows) out += csv::format_row({w, std::to_string(n)});
  return out;
}

}  // namespace aaevar
