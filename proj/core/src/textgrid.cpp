#include "aaevar/textgrid.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>

namespace aaevar {

TextGridError::TextGridError(const std::string& what, std::size_t tier, std::size_t interval)
    : ParseError(tier == 0 ? what
                 : interval == 0 ? fmt::format("tier {}: {}", tier, what)
                                 : fmt::format("tier {} interval {}: {}", tier, interval, what)),
      tier_(tier),
      interval_(interval) {}

const Tier* TextGrid::find_tier(std::string_view name) const {
  for (const auto& t : tiers) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

namespace {

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string utf16_to_utf8(std::string_view bytes, bool big_endian) {
  constexpr std::uint32_t kReplacement = 0xFFFD;
  std::string out;
  out.reserve(bytes.size() / 2);
  auto unit = [&](std::size_t i) -> std::uint16_t {
    auto b0 = static_cast<unsigned char>(bytes[i]);
    auto b1 = static_cast<unsigned char>(bytes[i + 1]);
    return big_endian ? static_cast<std::uint16_t>(b0 << 8 | b1) : static_cast<std::uint16_t>(b1 << 8 | b0);
  };
  std::size_t i = 0;
  while (i + 1 < bytes.size()) {
    std::uint16_t u = unit(i);
    i += 2;
    if (u >= 0xD800 && u <= 0xDBFF) {
      if (i + 1 < bytes.size()) {
        std::uint16_t lo = unit(i);
        if (lo >= 0xDC00 && lo <= 0xDFFF) {
          i += 2;
          append_utf8(out, 0x10000 + ((static_cast<std::uint32_t>(u) - 0xD800) << 10) + (lo - 0xDC00));
          continue;
        }
      }
      append_utf8(out, kReplacement);
    } else if (u >= 0xDC00 && u <= 0xDFFF) {
      append_utf8(out, kReplacement);
    } else {
      append_utf8(out, u);
    }
  }
  return out;
}

enum class TokKind { Number, String, Flag, End };

struct Token {
  TokKind kind = TokKind::End;
  double number = 0.0;
  std::string text;
};

// Praat's text serialization reduced to its values: quoted strings, numbers
// and <flags>. Labels ("xmin =", "item [1]:") carry no information the
// value order does not already fix, so they are skipped.
class Lexer {
 public:
  explicit Lexer(std::string_view s) : s_(s) {}

  Token next() {
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '!') {
        while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
      } else if (c == '"') {
        return read_string();
      } else if (c == '[') {
        auto close = s_.find(']', pos_);
        pos_ = close == std::string_view::npos ? s_.size() : close + 1;
      } else if (c == '<') {
        auto close = s_.find('>', pos_);
        if (close == std::string_view::npos) throw TextGridError("unterminated <flag>");
        Token t{TokKind::Flag, 0.0, std::string(s_.substr(pos_ + 1, close - pos_ - 1))};
        pos_ = close + 1;
        return t;
      } else {
        std::size_t start = pos_;
        while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) && s_[pos_] != '"' &&
               s_[pos_] != '!' && s_[pos_] != '<' && s_[pos_] != '[') {
          ++pos_;
        }
        auto word = s_.substr(start, pos_ - start);
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), value);
        if (ec == std::errc() && ptr == word.data() + word.size()) {
          return Token{TokKind::Number, value, std::string(word)};
        }
      }
    }
    return Token{};
  }

 private:
  Token read_string() {
    std::string out;
    ++pos_;
    while (pos_ < s_.size()) {
      char c = s_[pos_++];
      if (c == '"') {
        if (pos_ < s_.size() && s_[pos_] == '"') {
          out.push_back('"');
          ++pos_;
        } else {
          return Token{TokKind::String, 0.0, std::move(out)};
        }
      } else {
        out.push_back(c);
      }
    }
    throw TextGridError("unterminated string");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

class Reader {
 public:
  explicit Reader(std::string_view s) : lex_(s) {}

  std::size_t tier = 0;
  std::size_t interval = 0;

  double number(const char* what) {
    Token t = lex_.next();
    if (t.kind != TokKind::Number) fail(std::string("expected number for ") + what);
    if (!std::isfinite(t.number)) fail(std::string("non-finite ") + what);
    return t.number;
  }

  std::size_t count(const char* what) {
    double v = number(what);
    if (v < 0 || v != std::floor(v) || v > 1e9) fail(std::string("invalid ") + what);
    return static_cast<std::size_t>(v);
  }

  std::string string(const char* what) {
    Token t = lex_.next();
    if (t.kind != TokKind::String) fail(std::string("expected string for ") + what);
    return std::move(t.text);
  }

  Token any() { return lex_.next(); }

  [[noreturn]] void fail(const std::string& what) const { throw TextGridError(what, tier, interval); }

 private:
  Lexer lex_;
};

constexpr double kTimeEps = 1e-9;

}  // namespace

std::string decode_text(std::string_view bytes) {
  if (bytes.starts_with("\xEF\xBB\xBF")) return std::string(bytes.substr(3));
  if (bytes.starts_with("\xFF\xFE")) return utf16_to_utf8(bytes.substr(2), false);
  if (bytes.starts_with("\xFE\xFF")) return utf16_to_utf8(bytes.substr(2), true);
  if (bytes.size() >= 2 && bytes[0] != 0 && bytes[1] == 0) return utf16_to_utf8(bytes, false);
  if (bytes.size() >= 2 && bytes[0] == 0 && bytes[1] != 0) return utf16_to_utf8(bytes, true);
  return std::string(bytes);
}

TextGrid parse_textgrid(std::string_view bytes) {
  const std::string text = decode_text(bytes);
  Reader r(text);

  auto file_type = r.string("file type");
  if (!file_type.starts_with("ooTextFile")) r.fail("not a Praat text file");
  if (r.string("object class") != "TextGrid") r.fail("object class is not TextGrid");

  TextGrid grid;
  grid.xmin = r.number("xmin");
  grid.xmax = r.number("xmax");
  if (grid.xmin < 0 || grid.xmax < grid.xmin) r.fail("invalid grid time range");

  Token flag = r.any();
  if (flag.kind != TokKind::Flag) r.fail("expected <exists> or <absent>");
  if (flag.text == "absent") return grid;
  if (flag.text != "exists") r.fail("unknown flag <" + flag.text + ">");

  const std::size_t n_tiers = r.count("tier count");
  for (std::size_t t = 1; t <= n_tiers; ++t) {
    r.tier = t;
    r.interval = 0;
    auto klass = r.string("tier class");
    auto name = r.string("tier name");
    double tier_min = r.number("tier xmin");
    double tier_max = r.number("tier xmax");
    if (tier_max < tier_min) r.fail("tier xmin > xmax");
    const std::size_t n = r.count("interval count");

    if (klass == "TextTier") {
      for (std::size_t i = 1; i <= n; ++i) {
        r.interval = i;
        r.number("point time");
        r.string("point mark");
      }
      grid.skipped_point_tiers.push_back(std::move(name));
      continue;
    }
    if (klass != "IntervalTier") r.fail("unknown tier class '" + klass + "'");

    Tier tier{std::move(name), {}};
    for (std::size_t i = 1; i <= n; ++i) {
      r.interval = i;
      Interval iv;
      iv.xmin = r.number("interval xmin");
      iv.xmax = r.number("interval xmax");
      iv.text = r.string("interval text");
      if (iv.xmin < 0) r.fail("negative xmin");
      if (!(iv.xmin < iv.xmax)) r.fail("xmin >= xmax");
      if (iv.xmin < grid.xmin - kTimeEps || iv.xmax > grid.xmax + kTimeEps) r.fail("interval outside grid range");
      if (!tier.intervals.empty() && iv.xmin < tier.intervals.back().xmax - kTimeEps) {
        r.fail("interval overlaps or precedes the previous one");
      }
      tier.intervals.push_back(std::move(iv));
    }
    grid.tiers.push_back(std::move(tier));
  }
  return grid;
}

TextGrid load_textgrid(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open TextGrid " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_textgrid(ss.str());
  } catch (const TextGridError& e) {
    throw TextGridError(path + ": " + e.what());
  }
}

namespace {

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

std::string render_textgrid(const TextGrid& grid) {
  std::string out;
  auto app = std::back_inserter(out);
  fmt::format_to(app, "File type = \"ooTextFile\"\nObject class = \"TextGrid\"\n\n");
  fmt::format_to(app, "xmin = {} \nxmax = {} \n", grid.xmin, grid.xmax);
  if (grid.tiers.empty()) {
    fmt::format_to(app, "tiers? <absent> \n");
    return out;
  }
  fmt::format_to(app, "tiers? <exists> \nsize = {} \nitem []: \n", grid.tiers.size());
  for (std::size_t t = 0; t < grid.tiers.size(); ++t) {
    const Tier& tier = grid.tiers[t];
    double tmin = tier.intervals.empty() ? grid.xmin : tier.intervals.front().xmin;
    double tmax = tier.intervals.empty() ? grid.xmax : tier.intervals.back().xmax;
    fmt::format_to(app, "    item [{}]:\n", t + 1);
    fmt::format_to(app, "        class = \"IntervalTier\" \n        name = {} \n", quote(tier.name));
    fmt::format_to(app, "        xmin = {} \n        xmax = {} \n", std::min(tmin, grid.xmin),
                   std::max(tmax, grid.xmax));
    fmt::format_to(app, "        intervals: size = {} \n", tier.intervals.size());
    for (std::size_t i = 0; i < tier.intervals.size(); ++i) {
      const Interval& iv = tier.intervals[i];
      fmt::format_to(app, "        intervals [{}]:\n", i + 1);
      fmt::format_to(app, "            xmin = {} \n            xmax = {} \n            text = {} \n", iv.xmin,
                     iv.xmax, quote(iv.text));
    }
  }
  return out;
}

std::string render_textgrid_short(const TextGrid& grid) {
  std::string out;
  auto app = std::back_inserter(out);
  fmt::format_to(app, "File type = \"ooTextFile\"\nObject class = \"TextGrid\"\n\n{}\n{}\n", grid.xmin, grid.xmax);
  if (grid.tiers.empty()) {
    fmt::format_to(app, "<absent>\n");
    return out;
  }
  fmt::format_to(app, "<exists>\n{}\n", grid.tiers.size());
  for (const auto& tier : grid.tiers) {
    fmt::format_to(app, "\"IntervalTier\"\n{}\n{}\n{}\n{}\n", quote(tier.name), grid.xmin, grid.xmax,
                   tier.intervals.size());
    for (const auto& iv : tier.intervals) {
      fmt::format_to(app, "{}\n{}\n{}\n", iv.xmin, iv.xmax, quote(iv.text));
    }
  }
  return out;
}

bool glob_match(std::string_view pattern, std::string_view text) {
  std::size_t p = 0, t = 0;
  std::size_t star = std::string_view::npos, mark = 0;
  while (t < text.size()) {
    if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == text[t])) {
      ++p;
      ++t;
    } else if (p < pattern.size() && pattern[p] == '*') {
      star = p++;
      mark = t;
    } else if (star != std::string_view::npos) {
      p = star + 1;
      t = ++mark;
    } else {
      return false;
    }
  }
  while (p < pattern.size() && pattern[p] == '*') ++p;
  return p == pattern.size();
}

std::optional<std::string> glob_capture(std::string_view pattern, std::string_view text) {
  auto star = pattern.find('*');
  if (star == std::string_view::npos || pattern.find('*', star + 1) != std::string_view::npos) return std::nullopt;
  auto prefix = pattern.substr(0, star);
  auto suffix = pattern.substr(star + 1);
  if (text.size() < prefix.size() + suffix.size()) return std::nullopt;
  if (!text.starts_with(prefix) || !text.ends_with(suffix)) return std::nullopt;
  auto captured = text.substr(prefix.size(), text.size() - prefix.size() - suffix.size());
  if (captured.empty()) return std::nullopt;
  return std::string(captured);
}

bool SpeakerFilter::accepts(std::string_view label) const {
  auto any_match = [&](const std::vector<std::string>& pats) {
    return std::any_of(pats.begin(), pats.end(), [&](const std::string& p) { return glob_match(p, label); });
  };
  if (!include.empty() && !any_match(include)) return false;
  return !any_match(exclude);
}

TierSelection select_tiers(const TextGrid& grid, std::string_view word_pattern, std::string_view phone_pattern,
                           const SpeakerFilter& filter) {
  if (std::count(word_pattern.begin(), word_pattern.end(), '*') != 1 ||
      std::count(phone_pattern.begin(), phone_pattern.end(), '*') != 1) {
    throw Error("tier patterns must contain exactly one '*'");
  }
  std::vector<std::pair<std::string, const Tier*>> words;
  std::map<std::string, const Tier*> phones;
  TierSelection sel;
  for (const auto& tier : grid.tiers) {
    if (auto label = glob_capture(word_pattern, tier.name)) {
      if (!filter.accepts(*label)) {
        sel.filtered_out.push_back(*label);
        continue;
      }
      words.emplace_back(*label, &tier);
    } else if (auto plabel = glob_capture(phone_pattern, tier.name)) {
      if (!filter.accepts(*plabel)) continue;
      phones.emplace(*plabel, &tier);
    }
  }
  for (auto& [label, tier] : words) {
    auto it = phones.find(label);
    if (it == phones.end()) {
      sel.unpaired.push_back(tier->name);
      continue;
    }
    sel.pairs.push_back(TierPair{label, tier, it->second});
    phones.erase(it);
  }
  for (const auto& [label, tier] : phones) sel.unpaired.push_back(tier->name);
  if (sel.pairs.empty()) throw Error("no tier pairs matched");
  return sel;
}

bool is_silence_label(std::string_view label) {
  while (!label.empty() && std::isspace(static_cast<unsigned char>(label.front()))) label.remove_prefix(1);
  while (!label.empty() && std::isspace(static_cast<unsigned char>(label.back()))) label.remove_suffix(1);
  if (label.empty()) return true;
  std::string lower(label);
  for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return lower == "sil" || lower == "sp" || lower == "spn";
}

std::vector<Interval> phones_within(const Interval& word, const Tier& phone_tier, double slack) {
  const double lo = word.xmin - slack;
  const double hi = word.xmax + slack;
  const auto& ivs = phone_tier.intervals;
  auto it = std::lower_bound(ivs.begin(), ivs.end(), lo,
                             [](const Interval& iv, double t) { return iv.midpoint() < t; });
  std::vector<Interval> out;
  for (; it != ivs.end() && it->midpoint() <= hi; ++it) {
    if (!is_silence_label(it->text)) out.push_back(*it);
  }
  return out;
}

}  // namespace aaevar
