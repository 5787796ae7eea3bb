#include <doctest.h>

#include "aaevar/csv.hpp"
#include "aaevar/error.hpp"
#include "aaevar/fixture.hpp"
#include "aaevar/manifest.hpp"
#include "aaevar/variants.hpp"
#include "oracles.hpp"

using namespace aaevar;

namespace {

Pronunciation P(std::string_view s) { return Pronunciation::parse(s); }

VariantLexicon cold_lexicon() {
  return expand_lexicon(parse_cmu_dict("COLD  K OW1 L D\nTHE  DH AH0\nNIGHT  N AY1 T\nWAS  W AA1 Z\n"),
                        std::set<std::string, std::less<>>{"cold"});
}

SpeakerTable one_speaker() { return parse_speaker_csv("speaker_id,gender,age_group,ses\nspk,Female,ag2,3\n"); }

}  // namespace

TEST_CASE("speaker metadata CSV") {
  auto t = parse_speaker_csv("speaker_id,gender,age_group,ses\nA,Male,ag1,1\nB,f,3,2\n");
  REQUIRE(t.size() == 2);
  CHECK(t.at("A").gender == Gender::Male);
  CHECK(t.at("B").gender == Gender::Female);
  CHECK(t.at("B").age_group == AgeGroup::ag3);
  CHECK(t.at("B").ses == 2);
  CHECK_THROWS_AS(parse_speaker_csv("id,gender,age_group,ses\nA,Male,ag1,1\n"), ParseError);
  CHECK_THROWS_AS(parse_speaker_csv("speaker_id,gender,age_group,ses\nA,Male,ag5,1\n"), ParseError);
  CHECK_THROWS_AS(parse_speaker_csv("speaker_id,gender,age_group,ses\nA,Male,ag1,4\n"), ParseError);
  CHECK_THROWS_AS(parse_speaker_csv("speaker_id,gender,age_group,ses\nA,Male,ag1,1\nA,Male,ag1,1\n"), ParseError);
}

TEST_CASE("classify_mfa_status") {
  const auto lex = cold_lexicon();
  const auto& vars = *lex.find("cold");
  CHECK(classify_mfa_status(P("K OW L D"), vars) == MfaStatus::Original);
  CHECK(classify_mfa_status(P("K OW1 L"), vars) == MfaStatus::Reduced);
  CHECK(classify_mfa_status(P("K AH L"), vars) == MfaStatus::Other);
  CHECK(classify_mfa_status(Pronunciation{}, vars) == MfaStatus::Other);
}

TEST_CASE("every reduced variant classifies as Reduced, stress-blind") {
  const auto lex = expand_lexicon(load_cmu_dict(oracle::data_path("cmudict_excerpt.dict")));
  std::size_t checked = 0;
  for (const auto& [w, vars] : lex.entries()) {
    for (const auto& v : vars) {
      const MfaStatus expect = v.form == Form::Reduced ? MfaStatus::Reduced : MfaStatus::Original;
      CHECK(classify_mfa_status(v.pron, vars) == expect);
      CHECK(classify_mfa_status(v.pron.without_stress(), vars) == expect);
      std::vector<Phone> restressed;
      for (const auto& ph : v.pron.phones()) {
        restressed.push_back(ph.is_vowel() ? Phone::of(std::string(ph.base()) + "2") : ph);
      }
      CHECK(classify_mfa_status(Pronunciation(restressed), vars) == expect);
      ++checked;
    }
  }
  CHECK(checked > 150);
}

TEST_CASE("pause segmentation and utterance ids") {
  Tier words{"spk - words",
             {{0.0, 0.5, ""},
              {0.5, 1.0, "the"},
              {1.0, 1.5, "cold"},
              {1.5, 2.0, ""},
              {2.0, 2.5, "(pause 0.5)"},
              {2.5, 4.0, ""},
              {4.0, 4.5, "Night."}}};
  SegmentationOptions opts;
  opts.noise_patterns = default_noise_patterns();
  auto utts = segment_utterances(words, "rec", "spk", opts);
  REQUIRE(utts.size() == 2);
  CHECK(utts[0].id == "rec-spk-0001");
  CHECK(utts[0].tokens == std::vector<std::string>{"the", "cold"});
  CHECK(utts[1].id == "rec-spk-0002");
  CHECK(utts[1].tokens == std::vector<std::string>{"night"});
  CHECK(utts[1].start == 4.0);

  Tier utt_tier{"spk - utterances", {{0.0, 0.4, ""}, {0.4, 1.2, "u1"}, {1.2, 5.0, "u2"}}};
  opts.utterance_tier = &utt_tier;
  auto by_tier = segment_utterances(words, "rec", "spk", opts);
  REQUIRE(by_tier.size() == 2);
  CHECK(by_tier[0].tokens == std::vector<std::string>{"the"});
  CHECK(by_tier[1].tokens == std::vector<std::string>{"cold", "night"});
}

TEST_CASE("collect_target_tokens") {
  const auto lex = cold_lexicon();
  Tier words{"spk - words", {{0.0, 0.3, "the"}, {0.3, 0.8, "cold"}, {0.8, 1.2, "night"}}};
  Tier phones{"spk - phones",
              {{0.0, 0.15, "DH"}, {0.15, 0.3, "AH0"}, {0.3, 0.5, "K"}, {0.5, 0.65, "OW1"}, {0.65, 0.8, "L"},
               {0.8, 1.0, "N"}, {1.0, 1.1, "AY1"}, {1.1, 1.2, "T"}}};
  std::vector<TierPair> pairs{{"spk", &words, &phones}};
  auto got = collect_target_tokens(pairs, "rec", lex, one_speaker());
  REQUIRE(got.size() == 1);
  REQUIRE(got[0].tokens.size() == 1);
  const auto& t = got[0].tokens[0];
  CHECK(t.word == "cold");
  CHECK(t.variable == Variable::CCR);
  CHECK(t.mfa_status == MfaStatus::Reduced);
  CHECK(t.realized.str() == "K OW1 L");
  CHECK(t.ref_index == 1);
  CHECK(t.start < t.end);
  CHECK(t.speaker.age_group == AgeGroup::ag2);

  Tier no_targets{"spk - words", {{0.0, 0.3, "the"}, {0.8, 1.2, "night"}}};
  std::vector<TierPair> none{{"spk", &no_targets, &phones}};
  CHECK(collect_target_tokens(none, "rec", lex, one_speaker())[0].tokens.empty());

  std::vector<TierPair> unknown{{"ghost", &words, &phones}};
  CHECK_THROWS_WITH_AS(collect_target_tokens(unknown, "rec", lex, one_speaker()),
                       doctest::Contains("ghost"), Error);

  Tier bad_phones{"spk - phones", {{0.3, 0.5, "K"}, {0.5, 0.65, "OWX"}, {0.65, 0.8, "L"}}};
  std::vector<TierPair> bad{{"spk", &words, &bad_phones}};
  CHECK(collect_target_tokens(bad, "rec", lex, one_speaker())[0].tokens[0].mfa_status == MfaStatus::Other);
}

TEST_CASE("planted status counts are recovered from fixture grids") {
  oracle::TempDir dir("var");
  FixtureSpec spec;
  spec.n_tokens = 50;
  spec.reduced_rate = 0.4;
  const auto corpus = generate_fixture(5, spec, dir.path());
  const auto manifest = load_manifest(corpus.manifest_json);
  const auto lex = expand_lexicon(load_cmu_dict(manifest.dictionary.string()),
                                  parse_word_list(csv::read_file(manifest.targets->string())));
  const auto meta = load_speaker_csv(manifest.speakers.string());
  std::size_t original = 0, reduced = 0, other = 0;
  for (const auto& path : corpus.textgrids) {
    const auto grid = load_textgrid(path.string());
    const auto sel = select_tiers(grid, manifest.word_tier_pattern, manifest.phone_tier_pattern,
                                  manifest.speaker_filter);
    CollectOptions opts;
    opts.segmentation.noise_patterns = manifest.noise_patterns;
    for (const auto& st : collect_target_tokens(sel.pairs, path.stem().string(), lex, meta, opts)) {
      for (const auto& t : st.tokens) {
        original += t.mfa_status == MfaStatus::Original;
        reduced += t.mfa_status == MfaStatus::Reduced;
        other += t.mfa_status == MfaStatus::Other;
      }
    }
  }
  CHECK(original == 30);
  CHECK(reduced == 20);
  CHECK(other == 0);
}
