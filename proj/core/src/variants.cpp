#include "aaevar/variants.hpp"

#include <algorithm>
#include <cctype>

#include <fmt/format.h>

#include "aaevar/alignment.hpp"
#include "aaevar/csv.hpp"
#include "aaevar/error.hpp"

namespace aaevar {

std::string_view to_string(Gender g) { return g == Gender::Male ? "Male" : "Female"; }

std::string_view to_string(AgeGroup a) {
  switch (a) {
    case AgeGroup::ag1: return "ag1";
    case AgeGroup::ag2: return "ag2";
    case AgeGroup::ag3: return "ag3";
    default: return "ag4";
  }
}

std::string_view to_string(MfaStatus s) {
  switch (s) {
    case MfaStatus::Original: return "Original";
    case MfaStatus::Reduced: return "Reduced";
    default: return "Other";
  }
}

std::optional<Gender> parse_gender(std::string_view s) {
  auto f = fold_case(s);
  if (f == "male" || f == "m") return Gender::Male;
  if (f == "female" || f == "f") return Gender::Female;
  return std::nullopt;
}

std::optional<AgeGroup> parse_age_group(std::string_view s) {
  auto f = fold_case(s);
  if (f.starts_with("ag")) f.erase(0, 2);
  if (f == "1") return AgeGroup::ag1;
  if (f == "2") return AgeGroup::ag2;
  if (f == "3") return AgeGroup::ag3;
  if (f == "4") return AgeGroup::ag4;
  return std::nullopt;
}

std::optional<MfaStatus> parse_mfa_status(std::string_view s) {
  auto f = fold_case(s);
  if (f == "original") return MfaStatus::Original;
  if (f == "reduced") return MfaStatus::Reduced;
  if (f == "other") return MfaStatus::Other;
  return std::nullopt;
}

SpeakerTable parse_speaker_csv(std::string_view text) {
  auto rows = csv::parse_with_header(text, {"speaker_id", "gender", "age_group", "ses"});
  SpeakerTable table;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const std::size_t line = i + 2;
    SpeakerMeta m;
    m.speaker_id = r[0];
    if (m.speaker_id.empty()) throw ParseError("empty speaker_id", line);
    auto g = parse_gender(r[1]);
    if (!g) throw ParseError("bad gender '" + r[1] + "'", line);
    auto a = parse_age_group(r[2]);
    if (!a) throw ParseError("bad age_group '" + r[2] + "'", line);
    if (r[3] != "1" && r[3] != "2" && r[3] != "3") throw ParseError("bad ses '" + r[3] + "'", line);
    m.gender = *g;
    m.age_group = *a;
    m.ses = r[3][0] - '0';
    if (!table.emplace(m.speaker_id, m).second) throw ParseError("duplicate speaker '" + m.speaker_id + "'", line);
  }
  return table;
}

SpeakerTable load_speaker_csv(const std::string& path) {
  try {
    return parse_speaker_csv(csv::read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string make_utterance_id(std::string_view recording, std::string_view speaker, std::size_t index) {
  return fmt::format("{}-{}-{:04d}", recording, speaker, index);
}

std::vector<Utterance> segment_utterances(const Tier& word_tier, std::string_view recording,
                                          std::string_view speaker, const SegmentationOptions& opts) {
  std::vector<Utterance> utts;
  const auto& words = word_tier.intervals;

  auto add_tokens = [&](Utterance& u, std::size_t idx) {
    u.word_intervals.push_back(idx);
    for (auto& tok : normalize_transcript(words[idx].text, opts.noise_patterns)) {
      u.tokens.push_back(std::move(tok));
      u.token_interval.push_back(idx);
    }
  };

  if (opts.utterance_tier) {
    std::vector<const Interval*> spans;
    for (const auto& iv : opts.utterance_tier->intervals) {
      if (!is_silence_label(iv.text)) spans.push_back(&iv);
    }
    utts.resize(spans.size());
    for (std::size_t k = 0; k < spans.size(); ++k) {
      utts[k].id = make_utterance_id(recording, speaker, k + 1);
      utts[k].start = spans[k]->xmin;
      utts[k].end = spans[k]->xmax;
    }
    for (std::size_t i = 0; i < words.size(); ++i) {
      if (is_silence_label(words[i].text)) continue;
      const double mid = words[i].midpoint();
      auto it = std::upper_bound(spans.begin(), spans.end(), mid,
                                 [](double t, const Interval* iv) { return t < iv->xmin; });
      if (it == spans.begin()) continue;
      const auto k = static_cast<std::size_t>(std::distance(spans.begin(), it) - 1);
      if (mid <= spans[k]->xmax) add_tokens(utts[k], i);
    }
    std::erase_if(utts, [](const Utterance& u) { return u.word_intervals.empty(); });
    return utts;
  }

  double last_end = 0.0;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (is_silence_label(words[i].text)) continue;
    if (utts.empty() || words[i].xmin - last_end > opts.pause_gap) {
      Utterance u;
      u.id = make_utterance_id(recording, speaker, utts.size() + 1);
      u.start = words[i].xmin;
      utts.push_back(std::move(u));
    }
    add_tokens(utts.back(), i);
    utts.back().end = words[i].xmax;
    last_end = words[i].xmax;
  }
  return utts;
}

MfaStatus classify_mfa_status(const Pronunciation& realized, const std::vector<PronVariant>& variants) {
  if (realized.empty()) return MfaStatus::Other;
  auto matches = [&](Form form) {
    return std::any_of(variants.begin(), variants.end(),
                       [&](const PronVariant& v) { return v.form == form && v.pron.same_bases(realized); });
  };
  if (matches(Form::Original)) return MfaStatus::Original;
  if (matches(Form::Reduced)) return MfaStatus::Reduced;
  return MfaStatus::Other;
}

std::vector<SpeakerTokens> collect_target_tokens(const std::vector<TierPair>& pairs, std::string_view recording,
                                                 const VariantLexicon& lex, const SpeakerTable& meta,
                                                 const CollectOptions& opts) {
  std::vector<std::string> missing;
  for (const auto& p : pairs) {
    if (!meta.contains(p.speaker)) missing.push_back(p.speaker);
  }
  if (!missing.empty()) {
    throw Error(fmt::format("speakers missing from metadata: {}", fmt::join(missing, ", ")));
  }

  std::vector<SpeakerTokens> out;
  out.reserve(pairs.size());
  for (const auto& pair : pairs) {
    SpeakerTokens st;
    st.utterances = segment_utterances(*pair.words, recording, pair.speaker, opts.segmentation);
    const SpeakerMeta& speaker = meta.find(pair.speaker)->second;
    for (const auto& utt : st.utterances) {
      for (std::size_t k = 0; k < utt.tokens.size(); ++k) {
        const std::string& word = utt.tokens[k];
        auto variable = lex.target_variable(word);
        if (!variable) continue;
        const Interval& wiv = pair.words->intervals[utt.token_interval[k]];

        std::vector<Phone> phones;
        bool parsed = true;
        for (const auto& piv : phones_within(wiv, *pair.phones, opts.phone_slack)) {
          auto ph = Phone::parse(piv.text);
          if (!ph) {
            parsed = false;
            break;
          }
          phones.push_back(*ph);
        }

        TokenOccurrence tok;
        tok.word = word;
        tok.recording = std::string(recording);
        tok.speaker_label = pair.speaker;
        tok.utterance_id = utt.id;
        tok.ref_index = k;
        tok.start = wiv.xmin;
        tok.end = wiv.xmax;
        if (parsed) tok.realized = Pronunciation(std::move(phones));
        tok.mfa_status = classify_mfa_status(tok.realized, *lex.find(word));
        tok.variable = *variable;
        tok.speaker = speaker;
        st.tokens.push_back(std::move(tok));
      }
    }
    out.push_back(std::move(st));
  }
  return out;
}

}  // namespace aaevar
