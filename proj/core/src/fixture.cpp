#include "aaevar/fixture.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>
#include <json.hpp>

#include "aaevar/csv.hpp"
#include "aaevar/error.hpp"
#include "aaevar/rng.hpp"
#include "aaevar/textgrid.hpp"
#include "aaevar/wav.hpp"

namespace aaevar {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kLexicon = R"(;;; synthetic fixture lexicon
COLD  K OW1 L D
TEST  T EH1 S T
HAND  HH AE1 N D
FAST  F AE1 S T
KIND  K AY1 N D
RIBBING  R IH1 B IH0 NG
WAGGING  W AE1 G IH0 NG
PUFFING  P AH1 F IH0 NG
LEMMING  L EH1 M IH0 NG
GOLD  G OW1 L D
HOLD  HH OW1 L D
BEST  B EH1 S T
REST  R EH1 S T
BAND  B AE1 N D
SAND  S AE1 N D
LAST  L AE1 S T
PAST  P AE1 S T
MIND  M AY1 N D
FIND  F AY1 N D
ROBBING  R AA1 B IH0 NG
BAGGING  B AE1 G IH0 NG
HUFFING  HH AH1 F IH0 NG
HEMMING  HH EH1 M IH0 NG
GOAL  G OW1 L
BOWL  B OW1 L
GUESS  G EH1 S
TEN  T EH1 N
CAN  K AE1 N
MAN  M AE1 N
GAS  G AE1 S
PASS  P AE1 S
FINE  F AY1 N
LINE  L AY1 N
RIBBON  R IH1 B AH0 N
WAGON  W AE1 G AH0 N
PUFFIN  P AH1 F AH0 N
LEMON  L EH1 M AH0 N
REFRIGERATOR  R IH0 F R IH1 JH ER0 EY2 T ER0
ELEPHANT  EH1 L AH0 F AH0 N T
TELEPHONE  T EH1 L AH0 F OW2 N
UMBRELLA  AH0 M B R EH1 L AH0
POTATO  P AH0 T EY1 T OW2
BANANA  B AH0 N AE1 N AH0
TOMORROW  T AH0 M AA1 R OW2
YESTERDAY  Y EH1 S T ER0 D EY2
THE  DH AH0
A  AH0
WE  W IY1
WAS  W AA1 Z
VERY  V EH1 R IY0
IT  IH1 T
SO  S OW1
I  AY1
SAID  S EH1 D
SHE  SH IY1
HE  HH IY1
MY  M AY1
DAY  D EY1
HOME  HH OW1 M
GO  G OW1
THERE  DH EH1 R
REALLY  R IH1 L IY0
WELL  W EH1 L
LIKE  L AY1 K
OKAY  OW2 K EY1
)";

const std::vector<std::string> kTargets{"cold",    "test",    "hand",    "fast",   "kind",
                                        "ribbing", "wagging", "puffing", "lemming"};
const std::vector<std::string> kPool{
    "gold",   "hold",  "best",    "rest",     "band",         "sand",     "last",      "past",
    "mind",   "find",  "robbing", "bagging",  "huffing",      "hemming",  "goal",      "bowl",
    "guess",  "ten",   "can",     "man",      "gas",          "pass",     "fine",      "line",
    "ribbon", "wagon", "puffin",  "lemon",    "refrigerator", "elephant", "telephone", "umbrella",
    "potato", "banana", "tomorrow", "yesterday"};
const std::vector<std::string> kFillers{"the", "a",  "we",   "was",  "very",  "it",     "so",
                                        "i",   "said", "she", "he", "my",   "day",   "home",
                                        "go",  "there", "really", "well", "like"};
const std::vector<std::string> kUnknown{"zorblax", "quindle"};
constexpr std::string_view kInsertion = "okay";
constexpr std::string_view kNoise = "(laughing)";

constexpr int kPhoneMs = 120;
constexpr int kWordGapMs = 150;
constexpr int kUtteranceGapMs = 1500;
constexpr int kEdgeMs = 500;

enum class Planted { Correct, Substituted, Deleted };

struct Word {
  std::string text;
  std::vector<std::string> phones;
  int start_ms = 0;
  int end_ms = 0;
  int token = -1;  // index into tokens for targets
  bool noise = false;
};

struct Utt {
  std::size_t speaker = 0;
  std::string id;
  std::vector<Word> words;
  std::size_t ref_length = 0;  // words minus noise
};

struct Token {
  std::size_t target = 0;
  MfaStatus status = MfaStatus::Original;
  std::size_t utt = 0;
  int start_ms = 0;
  Pronunciation realized;
};

struct AsrPlan {
  std::vector<Planted> outcome;        // per token
  std::vector<std::string> hyp_word;   // per token, substitutions
  std::vector<std::optional<Attribution>> attribution;
  std::vector<bool> insertion;         // per utterance
};

struct SpeakerInfo {
  std::string label;
  SpeakerMeta meta;
  std::size_t recording = 0;
};

std::size_t rounded(double rate, std::size_t population) {
  return static_cast<std::size_t>(std::llround(rate * static_cast<double>(population)));
}

void check_rate(double r, const char* name) {
  if (!(r >= 0.0 && r <= 1.0)) throw Error(fmt::format("fixture: {} = {} is outside [0, 1]", name, r));
}

std::vector<std::string> phone_strings(const Pronunciation& p) {
  std::vector<std::string> out;
  for (const auto& ph : p.phones()) out.push_back(ph.str());
  return out;
}

Pronunciation mutate_first_vowel(const Pronunciation& p) {
  std::vector<Phone> phones = p.phones();
  for (auto& ph : phones) {
    if (!ph.is_vowel()) continue;
    const std::string stress = ph.stress() ? std::to_string(*ph.stress()) : "";
    ph = Phone::of(std::string(ph.base() == "UW" ? "IY" : "UW") + stress);
    break;
  }
  return Pronunciation(std::move(phones));
}

std::size_t min_distance(const Pronunciation& p, const std::vector<PronVariant>& vars) {
  std::size_t best = SIZE_MAX;
  for (const auto& v : vars) {
    if (v.form == Form::Original) best = std::min(best, phon_distance(p, v.pron));
  }
  return best;
}

std::string upper(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

std::string filler(Rng& rng, const std::string& previous) {
  while (true) {
    const std::string& f = rng.pick(kFillers);
    if (f != previous) return f;
  }
}

void build_tiers(const std::vector<Word>& words, const std::string& speaker, int end_ms, Tier& wt, Tier& pt) {
  wt.name = speaker + " - words";
  pt.name = speaker + " - phones";
  int cursor = 0;
  auto sec = [](int ms) { return ms / 1000.0; };
  for (const auto& w : words) {
    if (w.start_ms > cursor) {
      wt.intervals.push_back({sec(cursor), sec(w.start_ms), ""});
      pt.intervals.push_back({sec(cursor), sec(w.start_ms), ""});
    }
    wt.intervals.push_back({sec(w.start_ms), sec(w.end_ms), w.text});
    int t = w.start_ms;
    for (const auto& ph : w.phones) {
      pt.intervals.push_back({sec(t), sec(t + kPhoneMs), ph});
      t += kPhoneMs;
    }
    cursor = w.end_ms;
  }
  if (end_ms > cursor) {
    wt.intervals.push_back({sec(cursor), sec(end_ms), ""});
    pt.intervals.push_back({sec(cursor), sec(end_ms), ""});
  }
}

std::string fmt_double(double d) { return fmt::format("{}", d); }

}  // namespace

std::string ground_truth_csv(const std::vector<GroundTruthRow>& rows) {
  std::string out = csv::format_row({"recording", "utterance_id", "target_word", "start", "asr_type", "mfa_status",
                                     "token_outcome", "neighborhood_status", "wer"});
  for (const auto& r : rows) {
    out += csv::format_row({r.recording, r.utterance_id, r.target_word, fmt_double(r.start),
                            std::string(to_string(r.asr_type)), std::string(to_string(r.mfa_status)),
                            r.token_outcome, r.neighborhood ? std::string(to_string(*r.neighborhood)) : "",
                            fmt_double(r.wer)});
  }
  return out;
}

FixtureCorpus generate_fixture(std::uint64_t seed, const FixtureSpec& spec, const fs::path& out_dir) {
  check_rate(spec.reduced_rate, "reduced_rate");
  check_rate(spec.other_rate, "other_rate");
  for (const auto* r : {&spec.without_lm, &spec.with_lm}) {
    check_rate(r->substitution, "substitution");
    check_rate(r->neighbor, "neighbor");
    check_rate(r->deletion, "deletion");
    check_rate(r->unknown, "unknown");
    check_rate(r->insertion, "insertion");
  }
  if (spec.n_tokens == 0 || spec.n_speakers == 0 || spec.n_recordings == 0) {
    throw Error("fixture: tokens, speakers and recordings must be positive");
  }
  const std::size_t n = spec.n_tokens;
  const std::size_t n_reduced = rounded(spec.reduced_rate, n);
  const std::size_t n_other = rounded(spec.other_rate, n);
  if (n_reduced + n_other > n) throw Error("fixture: reduced_rate + other_rate exceeds 1");
  const std::size_t eligible = n - n_other;
  for (const auto* r : {&spec.without_lm, &spec.with_lm}) {
    if (rounded(r->substitution, eligible) + rounded(r->deletion, eligible) + rounded(r->unknown, eligible) >
        eligible) {
      throw Error("fixture: more planted errors than eligible tokens");
    }
  }

  Rng rng(seed);
  const VariantLexicon base = parse_cmu_dict(kLexicon);
  const std::set<std::string, std::less<>> target_set(kTargets.begin(), kTargets.end());
  const VariantLexicon lex = expand_lexicon(base, target_set);

  std::vector<Pronunciation> original, reduced;
  for (const auto& t : kTargets) {
    const auto& vars = *lex.find(t);
    original.push_back(vars.front().pron);
    auto red = std::find_if(vars.begin(), vars.end(), [](const PronVariant& v) { return v.form == Form::Reduced; });
    if (red == vars.end()) throw Error("fixture: target '" + t + "' has no reduced form");
    reduced.push_back(red->pron);
  }

  // Hypothesis candidates per (target, status): pool words at distance 1 and
  // at distance >= 2 from the selected pronunciation.
  std::vector<std::array<std::vector<std::string>, 2>> near(kTargets.size()), far(kTargets.size());
  for (std::size_t t = 0; t < kTargets.size(); ++t) {
    for (int s = 0; s < 2; ++s) {
      const Pronunciation& sel = s == 0 ? original[t] : reduced[t];
      for (const auto& w : kPool) {
        const std::size_t d = min_distance(sel, *lex.find(w));
        (d == 1 ? near : far)[t][s].push_back(w);
      }
      if (near[t][s].empty() || far[t][s].empty()) throw Error("fixture: empty candidate list for " + kTargets[t]);
    }
  }

  // Speakers.
  const std::size_t n_recordings = std::min(spec.n_recordings, spec.n_speakers);
  std::vector<SpeakerInfo> speakers(spec.n_speakers);
  for (std::size_t i = 0; i < spec.n_speakers; ++i) {
    auto& sp = speakers[i];
    sp.meta.age_group = static_cast<AgeGroup>(i % 4);
    sp.meta.gender = (i / 4) % 2 == 0 ? Gender::Female : Gender::Male;
    sp.meta.ses = static_cast<int>(i % 3) + 1;
    sp.label = fmt::format("DCA_se{}_ag{}_{}_{:02d}", sp.meta.ses, i % 4 + 1,
                           sp.meta.gender == Gender::Female ? "f" : "m", i + 1);
    sp.meta.speaker_id = sp.label;
    sp.recording = i % n_recordings;
  }
  std::vector<std::string> recording_ids;
  for (std::size_t r = 0; r < n_recordings; ++r) recording_ids.push_back(fmt::format("DCA_rec{:02d}", r + 1));

  // Tokens with exact status counts.
  std::vector<Token> tokens(n);
  std::vector<MfaStatus> statuses(n, MfaStatus::Original);
  std::fill_n(statuses.begin(), n_reduced, MfaStatus::Reduced);
  std::fill_n(statuses.begin() + static_cast<std::ptrdiff_t>(n_reduced), n_other, MfaStatus::Other);
  rng.shuffle(statuses);
  for (std::size_t i = 0; i < n; ++i) {
    tokens[i].target = rng.below(kTargets.size());
    tokens[i].status = statuses[i];
    const std::size_t t = tokens[i].target;
    switch (statuses[i]) {
      case MfaStatus::Original: tokens[i].realized = original[t]; break;
      case MfaStatus::Reduced: tokens[i].realized = reduced[t]; break;
      case MfaStatus::Other: tokens[i].realized = mutate_first_vowel(original[t]); break;
    }
  }

  // Utterances: per speaker, one or two targets framed by fillers.
  std::vector<Utt> utts;
  std::vector<int> speaker_end(spec.n_speakers, kEdgeMs);
  for (std::size_t s = 0; s < spec.n_speakers; ++s) {
    std::vector<std::size_t> mine;
    for (std::size_t i = s; i < n; i += spec.n_speakers) mine.push_back(i);
    int cursor = kEdgeMs;
    std::size_t k = 0;
    std::size_t index = 0;
    while (k < mine.size()) {
      const std::size_t take = std::min<std::size_t>(mine.size() - k, 1 + rng.below(2));
      Utt u;
      u.speaker = s;
      u.id = make_utterance_id(recording_ids[speakers[s].recording], speakers[s].label, ++index);
      auto add_word = [&](std::string text, std::vector<std::string> phones, int token, bool noise) {
        if (!u.words.empty() && rng.chance(0.3)) cursor += kWordGapMs;
        Word w;
        w.text = std::move(text);
        w.phones = std::move(phones);
        w.start_ms = cursor;
        w.end_ms = cursor + kPhoneMs * static_cast<int>(w.phones.size());
        w.token = token;
        w.noise = noise;
        cursor = w.end_ms;
        u.words.push_back(std::move(w));
      };
      auto add_filler = [&] {
        std::string prev = u.words.empty() ? "" : u.words.back().text;
        std::string f = filler(rng, prev);
        add_word(f, phone_strings(lex.find(f)->front().pron), -1, false);
      };
      add_filler();
      if (rng.chance(0.1)) add_word(std::string(kNoise), {"spn"}, -1, true);
      for (std::size_t j = 0; j < take; ++j) {
        const std::size_t ti = mine[k + j];
        Token& tok = tokens[ti];
        tok.utt = utts.size();
        add_word(kTargets[tok.target], phone_strings(tok.realized), static_cast<int>(ti), false);
        tok.start_ms = u.words.back().start_ms;
        add_filler();
        if (j + 1 < take && rng.chance(0.5)) add_filler();
      }
      k += take;
      for (const auto& w : u.words) u.ref_length += w.noise ? 0 : 1;
      utts.push_back(std::move(u));
      cursor += kUtteranceGapMs;
    }
    speaker_end[s] = cursor - kUtteranceGapMs + kEdgeMs;
  }

  // Planted hypothesis errors.
  std::vector<std::size_t> eligible_idx;
  for (std::size_t i = 0; i < n; ++i) {
    if (tokens[i].status != MfaStatus::Other) eligible_idx.push_back(i);
  }
  auto plan_asr = [&](const AsrErrorRates& rates) {
    AsrPlan p;
    p.outcome.assign(n, Planted::Correct);
    p.hyp_word.assign(n, "");
    p.attribution.assign(n, std::nullopt);
    p.insertion.assign(utts.size(), false);
    std::vector<std::size_t> idx = eligible_idx;
    rng.shuffle(idx);
    const std::size_t n_del = rounded(rates.deletion, eligible);
    const std::size_t n_sub = rounded(rates.substitution, eligible);
    const std::size_t n_nb = rounded(rates.neighbor, n_sub);
    const std::size_t n_unk = rounded(rates.unknown, eligible);
    std::size_t c = 0;
    for (std::size_t j = 0; j < n_del; ++j) p.outcome[idx[c++]] = Planted::Deleted;
    for (std::size_t j = 0; j < n_sub; ++j) {
      const std::size_t ti = idx[c++];
      const Token& tok = tokens[ti];
      const int s = tok.status == MfaStatus::Reduced ? 1 : 0;
      p.outcome[ti] = Planted::Substituted;
      if (j < n_nb) {
        p.hyp_word[ti] = rng.pick(near[tok.target][s]);
        p.attribution[ti] = Attribution::Neighbor_Error;
      } else {
        p.hyp_word[ti] = rng.pick(far[tok.target][s]);
        p.attribution[ti] = Attribution::Non_Neighbor_Error;
      }
    }
    for (std::size_t j = 0; j < n_unk; ++j) {
      const std::size_t ti = idx[c++];
      p.outcome[ti] = Planted::Substituted;
      p.hyp_word[ti] = rng.pick(kUnknown);
      p.attribution[ti] = Attribution::Unknown_Pron;
    }
    // An insertion next to a deletion could realign as a substitution, so
    // insertions go only to utterances without deletions.
    std::vector<bool> has_del(utts.size(), false);
    for (std::size_t i = 0; i < n; ++i) {
      if (p.outcome[i] == Planted::Deleted) has_del[tokens[i].utt] = true;
    }
    std::vector<std::size_t> open;
    for (std::size_t u = 0; u < utts.size(); ++u) {
      if (!has_del[u]) open.push_back(u);
    }
    rng.shuffle(open);
    const std::size_t n_ins = std::min(open.size(), rounded(rates.insertion, utts.size()));
    for (std::size_t j = 0; j < n_ins; ++j) p.insertion[open[j]] = true;
    return p;
  };
  const AsrPlan plans[2] = {plan_asr(spec.without_lm), plan_asr(spec.with_lm)};
  const AsrType asr_types[2] = {AsrType::without_lm, AsrType::with_lm};

  // Files.
  FixtureCorpus corpus;
  corpus.dir = out_dir;
  fs::create_directories(out_dir / "textgrids");
  if (spec.write_audio) fs::create_directories(out_dir / "audio");

  csv::write_file((out_dir / "lexicon.dict").string(), serialize_dict(base));
  {
    std::string t = "# CCR and ING target words\n";
    for (const auto& w : kTargets) t += w + "\n";
    csv::write_file((out_dir / "targets.txt").string(), t);
  }
  {
    std::string s = csv::format_row({"speaker_id", "gender", "age_group", "ses"});
    for (const auto& sp : speakers) {
      s += csv::format_row({sp.label, std::string(to_string(sp.meta.gender)), std::string(to_string(sp.meta.age_group)),
                            std::to_string(sp.meta.ses)});
    }
    csv::write_file((out_dir / "speakers.csv").string(), s);
  }

  nlohmann::json recordings = nlohmann::json::array();
  std::string toml_recordings;
  for (std::size_t r = 0; r < n_recordings; ++r) {
    int end_ms = kEdgeMs;
    for (std::size_t s = 0; s < spec.n_speakers; ++s) {
      if (speakers[s].recording == r) end_ms = std::max(end_ms, speaker_end[s]);
    }
    TextGrid grid;
    grid.xmin = 0.0;
    grid.xmax = end_ms / 1000.0;
    for (std::size_t s = 0; s < spec.n_speakers; ++s) {
      if (speakers[s].recording != r) continue;
      std::vector<Word> words;
      for (const auto& u : utts) {
        if (u.speaker == s) words.insert(words.end(), u.words.begin(), u.words.end());
      }
      Tier wt, pt;
      build_tiers(words, speakers[s].label, end_ms, wt, pt);
      grid.tiers.push_back(std::move(wt));
      grid.tiers.push_back(std::move(pt));
    }
    // Interviewer turns: present in the grid, excluded by the manifest.
    {
      std::vector<Word> words;
      int cursor = kEdgeMs / 2;
      while (cursor + 2000 < end_ms) {
        std::string f = filler(rng, "");
        Word w;
        w.text = f;
        w.phones = phone_strings(lex.find(f)->front().pron);
        w.start_ms = cursor;
        w.end_ms = cursor + kPhoneMs * static_cast<int>(w.phones.size());
        words.push_back(std::move(w));
        cursor += 2500 + static_cast<int>(rng.below(4000));
      }
      Tier wt, pt;
      build_tiers(words, fmt::format("DCA_int_{:02d}", r + 1), end_ms, wt, pt);
      grid.tiers.push_back(std::move(wt));
      grid.tiers.push_back(std::move(pt));
    }

    const std::string name = recording_ids[r] + ".TextGrid";
    const fs::path tg = out_dir / "textgrids" / name;
    csv::write_file(tg.string(), render_textgrid(grid));
    corpus.textgrids.push_back(tg);

    nlohmann::json rec{{"id", recording_ids[r]}, {"textgrid", "textgrids/" + name}};
    toml_recordings += fmt::format("\n[[recordings]]\nid = \"{}\"\ntextgrid = \"textgrids/{}\"\n", recording_ids[r], name);
    if (spec.write_audio) {
      PcmWav wav;
      wav.sample_rate = spec.sample_rate;
      const std::size_t samples = sample_index(grid.xmax, spec.sample_rate);
      wav.data.resize(samples * 2);
      Rng noise(seed ^ (0x9e3779b97f4a7c15ULL * (r + 1)));
      for (std::size_t i = 0; i < samples; ++i) {
        const auto v = static_cast<std::int16_t>(static_cast<std::int64_t>(noise.below(8001)) - 4000);
        const auto u = static_cast<std::uint16_t>(v);
        wav.data[2 * i] = static_cast<std::uint8_t>(u & 0xff);
        wav.data[2 * i + 1] = static_cast<std::uint8_t>(u >> 8);
      }
      const std::string aname = recording_ids[r] + ".wav";
      const fs::path ap = out_dir / "audio" / aname;
      write_wav(ap.string(), wav);
      corpus.audio.push_back(ap);
      rec["audio"] = "audio/" + aname;
      toml_recordings += fmt::format("audio = \"audio/{}\"\n", aname);
    }
    recordings.push_back(rec);
  }

  // Hypotheses and ground truth.
  for (int a = 0; a < 2; ++a) {
    const AsrPlan& p = plans[a];
    std::vector<std::pair<std::string, std::string>> lines;
    for (std::size_t ui = 0; ui < utts.size(); ++ui) {
      const Utt& u = utts[ui];
      std::vector<std::string> hyp;
      std::size_t errors = 0;
      for (const auto& w : u.words) {
        if (w.noise) continue;
        if (w.token < 0) {
          hyp.push_back(upper(w.text));
          continue;
        }
        const auto ti = static_cast<std::size_t>(w.token);
        switch (p.outcome[ti]) {
          case Planted::Correct: hyp.push_back(upper(w.text)); break;
          case Planted::Substituted:
            hyp.push_back(upper(p.hyp_word[ti]));
            ++errors;
            break;
          case Planted::Deleted: ++errors; break;
        }
      }
      if (p.insertion[ui]) {
        hyp.push_back(upper(std::string(kInsertion)));
        ++errors;
      }
      lines.emplace_back(u.id, fmt::format("{}", fmt::join(hyp, " ")));
      const double wer = static_cast<double>(errors) / static_cast<double>(u.ref_length);
      for (const auto& w : u.words) {
        if (w.token < 0) continue;
        const auto ti = static_cast<std::size_t>(w.token);
        GroundTruthRow g;
        g.recording = recording_ids[speakers[u.speaker].recording];
        g.utterance_id = u.id;
        g.target_word = kTargets[tokens[ti].target];
        g.start = tokens[ti].start_ms / 1000.0;
        g.asr_type = asr_types[a];
        g.mfa_status = tokens[ti].status;
        g.token_outcome = p.outcome[ti] == Planted::Correct       ? "Correct"
                          : p.outcome[ti] == Planted::Substituted ? "Substituted"
                                                                  : "Deleted";
        if (tokens[ti].status != MfaStatus::Other) g.neighborhood = p.attribution[ti];
        g.wer = wer;
        corpus.truth.push_back(std::move(g));
      }
    }
    std::sort(lines.begin(), lines.end());
    std::string out = csv::format_row({"utterance_id", "asr_type", "text"});
    for (const auto& [id, text] : lines) out += csv::format_row({id, std::string(to_string(asr_types[a])), text});
    csv::write_file((out_dir / fmt::format("hyp_{}.csv", to_string(asr_types[a]))).string(), out);
  }
  std::sort(corpus.truth.begin(), corpus.truth.end(), [](const GroundTruthRow& x, const GroundTruthRow& y) {
    return std::tie(x.recording, x.utterance_id, x.start, x.asr_type) <
           std::tie(y.recording, y.utterance_id, y.start, y.asr_type);
  });
  csv::write_file((out_dir / "ground_truth.csv").string(), ground_truth_csv(corpus.truth));

  nlohmann::json manifest{
      {"lexicon", {{"dictionary", "lexicon.dict"}, {"targets", "targets.txt"}, {"ccr_stops", {"P", "B", "T", "D", "K", "G"}}}},
      {"speakers", "speakers.csv"},
      {"tiers", {{"words", "* - words"}, {"phones", "* - phones"}, {"exclude", {"*_int_*"}}}},
      {"noise_patterns", default_noise_patterns()},
      {"phone_slack", 0.01},
      {"pause_gap", 1.0},
      {"fit", true},
      {"recordings", recordings},
      {"hypotheses", {{"without_lm", "hyp_without_lm.csv"}, {"with_lm", "hyp_with_lm.csv"}}}};
  corpus.manifest_json = out_dir / "manifest.json";
  csv::write_file(corpus.manifest_json.string(), manifest.dump(2) + "\n");

  std::string toml = "# synthetic corpus\nspeakers = \"speakers.csv\"\n";
  std::vector<std::string> quoted;
  for (const auto& p : default_noise_patterns()) quoted.push_back("'" + p + "'");
  toml += fmt::format("noise_patterns = [{}]\nphone_slack = 0.01\npause_gap = 1.0\nfit = true\n", fmt::join(quoted, ", "));
  toml += "\n[lexicon]\ndictionary = \"lexicon.dict\"\ntargets = \"targets.txt\"\n"
          "ccr_stops = [\n  \"P\", \"B\", \"T\",\n  \"D\", \"K\", \"G\",\n]\n";
  toml += "\n[tiers]\nwords = \"* - words\"\nphones = \"* - phones\"\nexclude = [\"*_int_*\"]\n";
  toml += "\n[hypotheses]\nwithout_lm = \"hyp_without_lm.csv\"\nwith_lm = \"hyp_with_lm.csv\"\n";
  toml += toml_recordings;
  corpus.manifest_toml = out_dir / "manifest.toml";
  csv::write_file(corpus.manifest_toml.string(), toml);
  return corpus;
}

}  // namespace aaevar
