#include "aaevar/manifest.hpp"

#include <cctype>
#include <charconv>
#include <set>

#include <fmt/format.h>
#include <json.hpp>

#include "aaevar/csv.hpp"
#include "aaevar/error.hpp"

namespace aaevar {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class TomlReader {
 public:
  explicit TomlReader(std::string_view s) : s_(s) {}

  json parse() {
    json root = json::object();
    json* table = &root;
    while (true) {
      skip_ws_and_comments(true);
      if (pos_ >= s_.size()) break;
      if (s_[pos_] == '[') {
        const bool array_table = pos_ + 1 < s_.size() && s_[pos_ + 1] == '[';
        pos_ += array_table ? 2 : 1;
        auto path = read_key_path();
        expect(']');
        if (array_table) expect(']');
        table = &root;
        for (std::size_t i = 0; i + 1 < path.size(); ++i) table = &descend(*table, path[i]);
        json& leaf = (*table)[path.back()];
        if (array_table) {
          if (leaf.is_null()) leaf = json::array();
          if (!leaf.is_array()) fail("'" + path.back() + "' is not an array of tables");
          leaf.push_back(json::object());
          table = &leaf.back();
        } else {
          if (leaf.is_null()) leaf = json::object();
          if (!leaf.is_object()) fail("'" + path.back() + "' is not a table");
          table = &leaf;
        }
        end_of_line();
        continue;
      }
      auto path = read_key_path();
      skip_inline_ws();
      expect('=');
      skip_inline_ws();
      json value = read_value();
      json* target = table;
      for (std::size_t i = 0; i + 1 < path.size(); ++i) target = &descend(*target, path[i]);
      if (target->contains(path.back())) fail("duplicate key '" + path.back() + "'");
      (*target)[path.back()] = std::move(value);
      end_of_line();
    }
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError("TOML: " + what, line_); }

  json& descend(json& t, const std::string& key) {
    json& child = t[key];
    if (child.is_null()) child = json::object();
    if (child.is_array() && !child.empty()) return child.back();
    if (!child.is_object()) fail("'" + key + "' is not a table");
    return child;
  }

  void skip_inline_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }

  void skip_ws_and_comments(bool newlines) {
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (c == ' ' || c == '\t' || c == '\r') {
        ++pos_;
      } else if (c == '\n' && newlines) {
        ++pos_;
        ++line_;
      } else if (c == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  void end_of_line() {
    skip_inline_ws();
    if (pos_ < s_.size() && s_[pos_] == '#') {
      while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
    }
    if (pos_ < s_.size() && s_[pos_] == '\r') ++pos_;
    if (pos_ < s_.size() && s_[pos_] != '\n') fail("unexpected text after value");
  }

  void expect(char c) {
    if (pos_ >= s_.size() || s_[pos_] != c) fail(fmt::format("expected '{}'", c));
    ++pos_;
  }

  std::vector<std::string> read_key_path() {
    std::vector<std::string> path;
    while (true) {
      skip_inline_ws();
      if (pos_ < s_.size() && (s_[pos_] == '"' || s_[pos_] == '\'')) {
        path.push_back(read_string());
      } else {
        std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' ||
                                    s_[pos_] == '-')) {
          ++pos_;
        }
        if (start == pos_) fail("expected a key");
        path.emplace_back(s_.substr(start, pos_ - start));
      }
      skip_inline_ws();
      if (pos_ < s_.size() && s_[pos_] == '.') {
        ++pos_;
        continue;
      }
      return path;
    }
  }

  std::string read_string() {
    const char quote = s_[pos_++];
    std::string out;
    while (pos_ < s_.size()) {
      char c = s_[pos_++];
      if (c == quote) return out;
      if (c == '\n') fail("newline in string");
      if (c == '\\' && quote == '"') {
        if (pos_ >= s_.size()) break;
        char e = s_[pos_++];
        switch (e) {
          case 'n': out.push_back('\n'); break;
          case 't': out.push_back('\t'); break;
          case '\\': out.push_back('\\'); break;
          case '"': out.push_back('"'); break;
          default: fail(fmt::format("unsupported escape \\{}", e));
        }
        continue;
      }
      out.push_back(c);
    }
    fail("unterminated string");
  }

  json read_value() {
    if (pos_ >= s_.size()) fail("missing value");
    char c = s_[pos_];
    if (c == '"' || c == '\'') return read_string();
    if (c == '[') {
      ++pos_;
      json arr = json::array();
      while (true) {
        skip_ws_and_comments(true);
        if (pos_ < s_.size() && s_[pos_] == ']') {
          ++pos_;
          return arr;
        }
        arr.push_back(read_value());
        skip_ws_and_comments(true);
        if (pos_ < s_.size() && s_[pos_] == ',') {
          ++pos_;
          continue;
        }
        skip_ws_and_comments(true);
        expect(']');
        return arr;
      }
    }
    std::size_t start = pos_;
    while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) && s_[pos_] != ',' &&
           s_[pos_] != ']' && s_[pos_] != '#') {
      ++pos_;
    }
    std::string word(s_.substr(start, pos_ - start));
    if (word == "true") return true;
    if (word == "false") return false;
    std::string digits;
    for (char d : word) {
      if (d != '_') digits.push_back(d);
    }
    const char* b = digits.data();
    const char* e = digits.data() + digits.size();
    if (digits.find_first_of(".eE") == std::string::npos) {
      long long iv = 0;
      auto [p, ec] = std::from_chars(b + (digits.starts_with('+') ? 1 : 0), e, iv);
      if (ec == std::errc() && p == e) return iv;
    } else {
      double dv = 0.0;
      auto [p, ec] = std::from_chars(b + (digits.starts_with('+') ? 1 : 0), e, dv);
      if (ec == std::errc() && p == e) return dv;
    }
    fail("unsupported value '" + word + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

std::vector<std::string> string_list(const json& j, const char* key) {
  if (!j.is_array()) throw Error(fmt::format("manifest: '{}' must be an array of strings", key));
  std::vector<std::string> out;
  for (const auto& v : j) {
    if (!v.is_string()) throw Error(fmt::format("manifest: '{}' must be an array of strings", key));
    out.push_back(v.get<std::string>());
  }
  return out;
}

std::string get_string(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string()) throw Error(fmt::format("manifest: '{}' must be a string", key));
  return j[key].get<std::string>();
}

double get_number(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) throw Error(fmt::format("manifest: '{}' must be a number", key));
  return j[key].get<double>();
}

CorpusManifest from_json(const json& j, const fs::path& base_dir, bool check_files) {
  if (!j.is_object()) throw Error("manifest: top level must be an object");
  CorpusManifest m;
  m.base_dir = base_dir;
  auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base_dir / p; };

  if (!j.contains("lexicon") || !j["lexicon"].is_object()) throw Error("manifest: missing 'lexicon' table");
  const json& lex = j["lexicon"];
  m.dictionary = resolve(get_string(lex, "dictionary"));
  if (lex.contains("supplement")) m.supplement = resolve(get_string(lex, "supplement"));
  if (lex.contains("targets")) m.targets = resolve(get_string(lex, "targets"));
  if (lex.contains("ccr_stops")) m.ccr_stops = string_list(lex["ccr_stops"], "ccr_stops");
  if (lex.contains("include_reduced_neighbors")) m.include_reduced_neighbors = lex["include_reduced_neighbors"].get<bool>();

  m.speakers = resolve(get_string(j, "speakers"));

  if (j.contains("tiers")) {
    const json& t = j["tiers"];
    if (t.contains("words")) m.word_tier_pattern = get_string(t, "words");
    if (t.contains("phones")) m.phone_tier_pattern = get_string(t, "phones");
    if (t.contains("utterances")) m.utterance_tier_pattern = get_string(t, "utterances");
    if (t.contains("include")) m.speaker_filter.include = string_list(t["include"], "include");
    if (t.contains("exclude")) m.speaker_filter.exclude = string_list(t["exclude"], "exclude");
  }
  m.noise_patterns = j.contains("noise_patterns") ? string_list(j["noise_patterns"], "noise_patterns")
                                                  : default_noise_patterns();
  m.phone_slack = get_number(j, "phone_slack", 0.01);
  m.pause_gap = get_number(j, "pause_gap", 1.0);
  if (m.phone_slack < 0) throw Error("manifest: phone_slack must be >= 0");
  if (j.contains("fit")) m.fit = j["fit"].get<bool>();

  if (j.contains("recordings")) {
    if (!j["recordings"].is_array()) throw Error("manifest: 'recordings' must be an array");
    std::set<std::string> ids;
    for (const auto& r : j["recordings"]) {
      Recording rec;
      rec.id = get_string(r, "id");
      rec.textgrid = resolve(get_string(r, "textgrid"));
      if (r.contains("audio")) rec.audio = resolve(get_string(r, "audio"));
      if (!ids.insert(rec.id).second) throw Error("manifest: duplicate recording id '" + rec.id + "'");
      m.recordings.push_back(std::move(rec));
    }
  }
  if (j.contains("hypotheses")) {
    if (!j["hypotheses"].is_object()) throw Error("manifest: 'hypotheses' must map asr_type to a path");
    for (const auto& [k, v] : j["hypotheses"].items()) {
      auto asr = parse_asr_type(k);
      if (!asr) throw Error("manifest: asr_type '" + k + "' is not with_lm or without_lm");
      if (!v.is_string()) throw Error("manifest: hypothesis path for '" + k + "' must be a string");
      m.hypotheses[*asr] = resolve(v.get<std::string>());
    }
  }

  if (check_files) {
    std::vector<std::string> missing;
    auto need = [&](const fs::path& p) {
      if (!fs::exists(p)) missing.push_back(p.string());
    };
    need(m.dictionary);
    if (m.supplement) need(*m.supplement);
    if (m.targets) need(*m.targets);
    need(m.speakers);
    for (const auto& r : m.recordings) {
      need(r.textgrid);
      if (r.audio) need(*r.audio);
    }
    for (const auto& [asr, p] : m.hypotheses) need(p);
    if (!missing.empty()) throw Error(fmt::format("manifest: missing file(s): {}", fmt::join(missing, ", ")));
  }
  return m;
}

}  // namespace

std::string toml_to_json(std::string_view text) { return TomlReader(text).parse().dump(); }

CorpusManifest parse_manifest_json(std::string_view text, const fs::path& base_dir, bool check_files) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("manifest JSON: ") + e.what());
  }
  try {
    return from_json(j, base_dir, check_files);
  } catch (const json::exception& e) {
    throw Error(std::string("manifest: ") + e.what());
  }
}

CorpusManifest parse_manifest_toml(std::string_view text, const fs::path& base_dir, bool check_files) {
  json j = TomlReader(text).parse();
  try {
    return from_json(j, base_dir, check_files);
  } catch (const json::exception& e) {
    throw Error(std::string("manifest: ") + e.what());
  }
}

CorpusManifest load_manifest(const fs::path& path, bool check_files) {
  const std::string text = csv::read_file(path.string());
  const fs::path base = path.has_parent_path() ? path.parent_path() : fs::path(".");
  if (path.extension() == ".toml") return parse_manifest_toml(text, base, check_files);
  return parse_manifest_json(text, base, check_files);
}

}  // namespace aaevar
