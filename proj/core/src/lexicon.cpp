#include "aaevar/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "aaevar/error.hpp"

namespace aaevar {

std::string_view to_string(Form f) { return f == Form::Original ? "Original" : "Reduced"; }
std::string_view to_string(Variable v) { return v == Variable::CCR ? "CCR" : "ING"; }

std::optional<Variable> parse_variable(std::string_view s) {
  std::string f = fold_case(s);
  if (f == "ccr") return Variable::CCR;
  if (f == "ing") return Variable::ING;
  return std::nullopt;
}

std::string fold_case(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool VariantLexicon::add_original(std::string_view word, Pronunciation pron) {
  auto& variants = entries_[std::string(word)];
  for (const auto& v : variants) {
    if (v.pron == pron) return false;
  }
  // Originals stay ahead of Reduced variants.
  auto pos = std::find_if(variants.begin(), variants.end(),
                          [](const PronVariant& v) { return v.form == Form::Reduced; });
  variants.insert(pos, PronVariant{std::move(pron), Form::Original, std::nullopt});
  return true;
}

bool VariantLexicon::add_reduced(std::string_view word, Pronunciation pron, Variable variable) {
  auto it = entries_.find(word);
  if (it == entries_.end()) return false;
  for (const auto& v : it->second) {
    if (v.pron == pron) return false;
  }
  it->second.push_back(PronVariant{std::move(pron), Form::Reduced, variable});
  return true;
}

const std::vector<PronVariant>* VariantLexicon::find(std::string_view word) const {
  auto it = entries_.find(word);
  return it == entries_.end() ? nullptr : &it->second;
}

bool VariantLexicon::is_target(std::string_view word) const {
  return target_variable(word).has_value();
}

std::optional<Variable> VariantLexicon::target_variable(std::string_view word) const {
  const auto* variants = find(word);
  if (!variants) return std::nullopt;
  for (const auto& v : *variants) {
    if (v.form == Form::Reduced) return v.variable;
  }
  return std::nullopt;
}

std::size_t VariantLexicon::variant_count() const {
  std::size_t n = 0;
  for (const auto& [w, vs] : entries_) n += vs.size();
  return n;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Strips a trailing "(N)" alternate marker.
std::string_view strip_alternate(std::string_view word) {
  if (word.size() < 3 || word.back() != ')') return word;
  auto open = word.rfind('(');
  if (open == std::string_view::npos || open == 0) return word;
  auto digits = word.substr(open + 1, word.size() - open - 2);
  if (digits.empty() ||
      !std::all_of(digits.begin(), digits.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    return word;
  }
  return word.substr(0, open);
}

}  // namespace

VariantLexicon parse_cmu_dict(std::string_view text) {
  VariantLexicon lex;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;

    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.starts_with(";;;")) continue;
    if (auto hash = line.find(" #"); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    std::size_t split = 0;
    while (split < line.size() && !std::isspace(static_cast<unsigned char>(line[split]))) ++split;
    auto word = strip_alternate(line.substr(0, split));
    auto rest = trim(line.substr(split));
    if (rest.empty()) throw ParseError("entry '" + std::string(word) + "' has no phones", line_no);

    Pronunciation pron;
    try {
      pron = Pronunciation::parse(rest);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_no);
    }
    lex.add_original(fold_case(word), std::move(pron));
  }
  return lex;
}

VariantLexicon load_cmu_dict(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open dictionary " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_cmu_dict(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::optional<Pronunciation> expand_ccr(std::string_view, const Pronunciation& pron,
                                        const ExpansionRules& rules) {
  if (pron.size() < 2) return std::nullopt;
  const Phone& last = pron.back();
  const Phone& penult = pron[pron.size() - 2];
  if (!last.is_stop() || !rules.ccr_stops.contains(last.base())) return std::nullopt;
  if (penult.is_vowel() || penult.stress()) return std::nullopt;
  std::vector<Phone> phones(pron.phones().begin(), pron.phones().end() - 1);
  return Pronunciation(std::move(phones));
}

std::optional<Pronunciation> expand_ing(std::string_view word, const Pronunciation& pron) {
  if (word.size() < 3 || fold_case(word.substr(word.size() - 3)) != "ing") return std::nullopt;
  if (pron.size() < 2) return std::nullopt;
  static const Phone kNg = Phone::of("NG");
  static const Phone kN = Phone::of("N");
  if (pron.back() != kNg) return std::nullopt;
  if (!pron[pron.size() - 2].is_vowel()) return std::nullopt;
  if (pron.vowel_count() < 2) return std::nullopt;
  std::vector<Phone> phones = pron.phones();
  phones.back() = kN;
  return Pronunciation(std::move(phones));
}

VariantLexicon expand_lexicon(const VariantLexicon& lex,
                              const std::optional<std::set<std::string, std::less<>>>& target_filter,
                              const ExpansionRules& rules) {
  VariantLexicon out = lex;
  for (const auto& [word, variants] : lex.entries()) {
    if (target_filter && !target_filter->contains(word)) continue;
    for (const auto& v : variants) {
      if (v.form != Form::Original) continue;
      if (rules.ccr) {
        if (auto r = expand_ccr(word, v.pron, rules)) out.add_reduced(word, std::move(*r), Variable::CCR);
      }
      if (rules.ing) {
        if (auto r = expand_ing(word, v.pron)) out.add_reduced(word, std::move(*r), Variable::ING);
      }
    }
  }
  return out;
}

std::string serialize_dict(const VariantLexicon& lex) {
  std::string out;
  for (const auto& [word, variants] : lex.entries()) {
    std::string upper(word);
    for (auto& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    std::vector<const PronVariant*> ordered;
    for (const auto& v : variants) ordered.push_back(&v);
    std::stable_sort(ordered.begin(), ordered.end(), [](const PronVariant* a, const PronVariant* b) {
      if (a->form != b->form) return a->form == Form::Original;
      return a->pron.str() < b->pron.str();
    });
    for (const auto* v : ordered) {
      out += upper;
      out += "  ";
      out += v->pron.str();
      out += '\n';
    }
  }
  return out;
}

std::set<std::string, std::less<>> parse_word_list(std::string_view text) {
  std::set<std::string, std::less<>> words;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto w = trim(line);
    if (!w.empty()) words.insert(fold_case(w));
  }
  return words;
}

}  // namespace aaevar
