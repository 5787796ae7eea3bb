#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace aaevar {

// One ARPAbet phone from the 39-symbol CMU inventory, with an optional
// lexical stress digit. Only vowels may carry stress.
class Phone {
 public:
  static constexpr std::uint8_t kInventorySize = 39;

  // Parses "EH1", "t", "NG". Returns nullopt for unknown bases, stress on a
  // consonant, or a stress digit outside 0..2.
  static std::optional<Phone> parse(std::string_view token);

  // Throws std::invalid_argument on bad input; for literals in code and tests.
  static Phone of(std::string_view token);

  std::uint8_t id() const { return id_; }
  std::string_view base() const;
  std::optional<std::uint8_t> stress() const {
    return stress_ == kNoStress ? std::nullopt : std::optional<std::uint8_t>(stress_);
  }
  bool is_vowel() const;
  bool is_stop() const;
  Phone without_stress() const { return Phone(id_, kNoStress); }

  std::string str() const;

  friend bool operator==(const Phone&, const Phone&) = default;
  friend auto operator<=>(const Phone& a, const Phone& b) {
    // Lexicographic on the printed form, so serialized dictionaries sort the
    // same way a text sort would.
    return a.str() <=> b.str();
  }

 private:
  static constexpr std::uint8_t kNoStress = 0xff;
  Phone(std::uint8_t id, std::uint8_t stress) : id_(id), stress_(stress) {}

  std::uint8_t id_;
  std::uint8_t stress_;
};

// Looks up an inventory symbol; nullopt if `base` is not one of the 39.
std::optional<std::uint8_t> phone_id(std::string_view base);
bool is_vowel_base(std::string_view base);

// Ordered phone sequence. Dictionary pronunciations are non-empty (enforced
// by the dictionary reader); realized sequences from an aligner may be empty.
class Pronunciation {
 public:
  Pronunciation() = default;
  explicit Pronunciation(std::vector<Phone> phones) : phones_(std::move(phones)) {}

  // Space-separated phone tokens. Throws ParseError naming the bad token.
  static Pronunciation parse(std::string_view text);

  const std::vector<Phone>& phones() const { return phones_; }
  std::size_t size() const { return phones_.size(); }
  bool empty() const { return phones_.empty(); }
  const Phone& operator[](std::size_t i) const { return phones_[i]; }
  const Phone& back() const { return phones_.back(); }

  std::size_t vowel_count() const;
  Pronunciation without_stress() const;

  // Phone ids with stress dropped; the key all distance computations use.
  std::vector<std::uint8_t> base_ids() const;
  bool same_bases(const Pronunciation& other) const;

  std::string str() const;

  friend bool operator==(const Pronunciation&, const Pronunciation&) = default;
  friend auto operator<=>(const Pronunciation& a, const Pronunciation& b) {
    return a.str() <=> b.str();
  }

 private:
  std::vector<Phone> phones_;
};

}  // namespace aaevar
