#include "aaevar/phone.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <stdexcept>

#include "aaevar/error.hpp"

namespace aaevar {
namespace {

struct PhoneInfo {
  std::string_view symbol;
  bool vowel;
  bool stop;
};

// CMU 39-phone set, alphabetical.
constexpr std::array<PhoneInfo, Phone::kInventorySize> kInventory{{
    {"AA", true, false}, {"AE", true, false}, {"AH", true, false}, {"AO", true, false},
    {"AW", true, false}, {"AY", true, false}, {"B", false, true},   {"CH", false, false},
    {"D", false, true},  {"DH", false, false}, {"EH", true, false}, {"ER", true, false},
    {"EY", true, false}, {"F", false, false}, {"G", false, true},   {"HH", false, false},
    {"IH", true, false}, {"IY", true, false}, {"JH", false, false}, {"K", false, true},
    {"L", false, false}, {"M", false, false}, {"N", false, false},  {"NG", false, false},
    {"OW", true, false}, {"OY", true, false}, {"P", false, true},   {"R", false, false},
    {"S", false, false}, {"SH", false, false}, {"T", false, true},  {"TH", false, false},
    {"UH", true, false}, {"UW", true, false}, {"V", false, false},  {"W", false, false},
    {"Y", false, false}, {"Z", false, false}, {"ZH", false, false},
}};

}  // namespace

std::optional<std::uint8_t> phone_id(std::string_view base) {
  char buf[2];
  if (base.empty() || base.size() > 2) return std::nullopt;
  for (std::size_t i = 0; i < base.size(); ++i) {
    buf[i] = static_cast<char>(std::toupper(static_cast<unsigned char>(base[i])));
  }
  std::string_view upper(buf, base.size());
  auto it = std::lower_bound(kInventory.begin(), kInventory.end(), upper,
                             [](const PhoneInfo& p, std::string_view s) { return p.symbol < s; });
  if (it == kInventory.end() || it->symbol != upper) return std::nullopt;
  return static_cast<std::uint8_t>(it - kInventory.begin());
}

bool is_vowel_base(std::string_view base) {
  auto id = phone_id(base);
  return id && kInventory[*id].vowel;
}

std::optional<Phone> Phone::parse(std::string_view token) {
  if (token.empty()) return std::nullopt;
  std::uint8_t stress = kNoStress;
  char last = token.back();
  if (std::isdigit(static_cast<unsigned char>(last))) {
    if (last > '2') return std::nullopt;
    stress = static_cast<std::uint8_t>(last - '0');
    token.remove_suffix(1);
  }
  auto id = phone_id(token);
  if (!id) return std::nullopt;
  if (stress != kNoStress && !kInventory[*id].vowel) return std::nullopt;
  return Phone(*id, stress);
}

Phone Phone::of(std::string_view token) {
  auto p = parse(token);
  if (!p) throw std::invalid_argument("not an ARPAbet phone: " + std::string(token));
  return *p;
}

std::string_view Phone::base() const { return kInventory[id_].symbol; }
bool Phone::is_vowel() const { return kInventory[id_].vowel; }
bool Phone::is_stop() const { return kInventory[id_].stop; }

std::string Phone::str() const {
  std::string s(base());
  if (stress_ != kNoStress) s.push_back(static_cast<char>('0' + stress_));
  return s;
}

Pronunciation Pronunciation::parse(std::string_view text) {
  std::vector<Phone> phones;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) {
      auto tok = text.substr(i, j - i);
      auto phone = Phone::parse(tok);
      if (!phone) throw ParseError("unparseable phone '" + std::string(tok) + "'");
      phones.push_back(*phone);
    }
    i = j;
  }
  return Pronunciation(std::move(phones));
}

std::size_t Pronunciation::vowel_count() const {
  return static_cast<std::size_t>(
      std::count_if(phones_.begin(), phones_.end(), [](const Phone& p) { return p.is_vowel(); }));
}

Pronunciation Pronunciation::without_stress() const {
  std::vector<Phone> out;
  out.reserve(phones_.size());
  for (const auto& p : phones_) out.push_back(p.without_stress());
  return Pronunciation(std::move(out));
}

std::vector<std::uint8_t> Pronunciation::base_ids() const {
  std::vector<std::uint8_t> ids;
  ids.reserve(phones_.size());
  for (const auto& p : phones_) ids.push_back(p.id());
  return ids;
}

bool Pronunciation::same_bases(const Pronunciation& other) const {
  return std::equal(phones_.begin(), phones_.end(), other.phones_.begin(), other.phones_.end(),
                    [](const Phone& a, const Phone& b) { return a.id() == b.id(); });
}

std::string Pronunciation::str() const {
  std::string s;
  for (const auto& p : phones_) {
    if (!s.empty()) s.push_back(' ');
    s += p.str();
  }
  return s;
}

}  // namespace aaevar
