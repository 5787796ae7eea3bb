#include <doctest.h>

#include <fmt/format.h>

#include <filesystem>
#include <fstream>

#include "aaevar/error.hpp"
#include "aaevar/segments.hpp"
#include "aaevar/wav.hpp"
#include "oracles.hpp"

using namespace aaevar;

namespace {

std::vector<UtteranceSpan> back_to_back(int n, double len, double gap) {
  std::vector<UtteranceSpan> out;
  double t = 0.0;
  for (int i = 0; i < n; ++i) {
    out.push_back({fmt::format("u{}", i + 1), t, t + len});
    t += len + gap;
  }
  return out;
}

PcmWav ramp(std::uint32_t rate, std::size_t samples) {
  PcmWav w;
  w.sample_rate = rate;
  w.data.resize(samples * 2);
  for (std::size_t i = 0; i < samples; ++i) {
    const auto v = static_cast<std::uint16_t>(i * 7919u);
    w.data[2 * i] = static_cast<std::uint8_t>(v & 0xff);
    w.data[2 * i + 1] = static_cast<std::uint8_t>(v >> 8);
  }
  return w;
}

void check_plan(const SegmentPlan& plan, const std::vector<UtteranceSpan>& utts, double min_duration) {
  std::vector<std::string> ids;
  for (std::size_t c = 0; c < plan.chunks.size(); ++c) {
    const auto& ch = plan.chunks[c];
    REQUIRE_FALSE(ch.utterance_ids.empty());
    CHECK(ch.start < ch.end);
    if (c > 0) CHECK(ch.start == plan.chunks[c - 1].end);
    for (const auto& id : ch.utterance_ids) ids.push_back(id);
  }
  REQUIRE(ids.size() == utts.size());
  std::size_t k = 0;
  for (std::size_t c = 0; c < plan.chunks.size(); ++c) {
    const auto& ch = plan.chunks[c];
    const auto& first = utts[k];
    for (std::size_t j = 0; j < ch.utterance_ids.size(); ++j, ++k) {
      CHECK(ch.utterance_ids[j] == utts[k].id);
      CHECK(utts[k].start >= ch.start);
      CHECK(utts[k].end <= ch.end);
    }
    const auto& last = utts[k - 1];
    if (c + 1 < plan.chunks.size()) {
      CHECK(last.end - first.start >= min_duration);
      // Closing one utterance earlier would have left the chunk short.
      if (ch.utterance_ids.size() > 1) CHECK(utts[k - 2].end - first.start < min_duration);
    }
  }
  CHECK(plan.chunks.front().start == utts.front().start);
  CHECK(plan.chunks.back().end == utts.back().end);
}

}  // namespace

TEST_CASE("plan_segments examples") {
  SUBCASE("ten-second utterances group in threes") {
    const auto utts = back_to_back(7, 10.0, 0.0);
    const auto plan = plan_segments(utts, 30.0);
    REQUIRE(plan.chunks.size() == 3);
    CHECK(plan.chunks[0].utterance_ids == std::vector<std::string>{"u1", "u2", "u3"});
    CHECK(plan.chunks[1].utterance_ids == std::vector<std::string>{"u4", "u5", "u6"});
    CHECK(plan.chunks[2].utterance_ids == std::vector<std::string>{"u7"});
    CHECK(plan.chunks[0].end == 30.0);
    check_plan(plan, utts, 30.0);
  }
  SUBCASE("a long utterance is never split") {
    std::vector<UtteranceSpan> utts{{"a", 2.0, 47.0}};
    const auto plan = plan_segments(utts, 30.0);
    REQUIRE(plan.chunks.size() == 1);
    CHECK(plan.chunks[0].start == 2.0);
    CHECK(plan.chunks[0].end == 47.0);
  }
  SUBCASE("boundaries fall at the middle of the pause") {
    const auto utts = back_to_back(4, 14.0, 2.0);
    const auto plan = plan_segments(utts, 30.0);
    REQUIRE(plan.chunks.size() == 2);
    // u1..u2 span 30 s exactly and close the chunk.
    CHECK(plan.chunks[0].utterance_ids.size() == 2);
    CHECK(plan.chunks[0].end == 31.0);
    CHECK(plan.chunks[1].start == 31.0);
    check_plan(plan, utts, 30.0);
  }
  SUBCASE("empty input") { CHECK(plan_segments(std::vector<UtteranceSpan>{}, 30.0).chunks.empty()); }
  SUBCASE("unsorted or overlapping input throws") {
    std::vector<UtteranceSpan> bad{{"a", 5.0, 6.0}, {"b", 1.0, 2.0}};
    CHECK_THROWS_AS(plan_segments(bad, 30.0), Error);
    std::vector<UtteranceSpan> overlap{{"a", 0.0, 6.0}, {"b", 5.0, 7.0}};
    CHECK_THROWS_AS(plan_segments(overlap, 30.0), Error);
    std::vector<UtteranceSpan> empty_span{{"a", 3.0, 3.0}};
    CHECK_THROWS_AS(plan_segments(empty_span, 30.0), Error);
  }
}

TEST_CASE("plan_segments invariants on random layouts") {
  Rng rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<UtteranceSpan> utts;
    double t = rng.unit() * 3.0;
    const int n = 1 + static_cast<int>(rng.below(40));
    for (int i = 0; i < n; ++i) {
      const double len = 0.2 + rng.unit() * 25.0;
      utts.push_back({fmt::format("r{}", i), t, t + len});
      t += len + (rng.chance(0.3) ? 0.0 : rng.unit() * 4.0);
    }
    const double min_d = 1.0 + rng.unit() * 60.0;
    check_plan(plan_segments(utts, min_d), utts, min_d);
  }
}

TEST_CASE("utterance and plan CSV") {
  const auto utts = parse_utterance_csv("utterance_id,start,end\na,0,1.5\nb,2,3.25\n");
  REQUIRE(utts.size() == 2);
  CHECK(utts[1].end == 3.25);
  CHECK_THROWS_AS(parse_utterance_csv("utterance_id,start,end\na,zero,1\n"), ParseError);

  const auto plan = plan_segments(back_to_back(5, 7.3, 0.45), 15.0);
  const auto back = parse_plan_csv(plan_csv(plan));
  REQUIRE(back.chunks.size() == plan.chunks.size());
  for (std::size_t i = 0; i < plan.chunks.size(); ++i) {
    CHECK(back.chunks[i].start == plan.chunks[i].start);
    CHECK(back.chunks[i].end == plan.chunks[i].end);
    CHECK(back.chunks[i].utterance_ids == plan.chunks[i].utterance_ids);
  }

  Tier tier;
  tier.name = "utt";
  tier.intervals = {{0, 1, ""}, {1, 4, "one"}, {4, 5, "sp"}, {5, 10, "two"}};
  const auto from_tier = utterances_from_tier(tier);
  REQUIRE(from_tier.size() == 2);
  CHECK(from_tier[0].id == "utt-0001");
  CHECK(from_tier[1].start == 5.0);
}

TEST_CASE("WAV encode and parse") {
  const auto w = ramp(22050, 1000);
  const auto bytes = encode_wav(w);
  CHECK(bytes.size() == 44 + 2000);
  const auto back = parse_wav(bytes);
  CHECK(back.sample_rate == 22050);
  CHECK(back.data == w.data);

  auto stereo = bytes;
  stereo[22] = 2;
  CHECK_THROWS_AS(parse_wav(stereo), UnsupportedFormat);
  auto floaty = bytes;
  floaty[20] = 3;
  CHECK_THROWS_AS(parse_wav(floaty), UnsupportedFormat);
  auto truncated = bytes;
  truncated.resize(30);
  CHECK_THROWS_AS(parse_wav(truncated), ParseError);
  std::vector<std::uint8_t> junk{'R', 'I', 'F', 'X'};
  CHECK_THROWS_AS(parse_wav(junk), ParseError);
}

TEST_CASE("split_wav") {
  SUBCASE("44.1 kHz cut at one second") {
    const auto w = ramp(44100, 88200);
    SegmentPlan plan{{{0.0, 1.0, {"a"}}, {1.0, 2.0, {"b"}}}};
    const auto parts = split_wav(w, plan);
    REQUIRE(parts.size() == 2);
    CHECK(parts[0].sample_count() == 44100);
    CHECK(parts[1].data[0] == w.data[2 * 44100]);
    CHECK(parts[1].data[1] == w.data[2 * 44100 + 1]);
  }
  SUBCASE("chunks concatenate to the covered audio") {
    const auto w = ramp(16000, 16000 * 60);
    SegmentPlan plan{{{0.0, 30.0, {"a"}}, {30.0, 60.0, {"b"}}}};
    const auto parts = split_wav(w, plan);
    std::vector<std::uint8_t> joined;
    for (const auto& p : parts) joined.insert(joined.end(), p.data.begin(), p.data.end());
    CHECK(joined == w.data);
  }
  SUBCASE("a single whole-file chunk is the identity") {
    const auto w = ramp(8000, 12345);
    SegmentPlan plan{{{0.0, w.duration(), {"a"}}}};
    const auto parts = split_wav(w, plan);
    REQUIRE(parts.size() == 1);
    CHECK(encode_wav(parts[0]) == encode_wav(w));
  }
  SUBCASE("past the end throws") {
    const auto w = ramp(16000, 16000);
    SegmentPlan plan{{{0.0, 1.5, {"a"}}}};
    CHECK_THROWS_AS(split_wav(w, plan), Error);
  }
  SUBCASE("files on disk") {
    oracle::TempDir dir("wav");
    const auto w = ramp(16000, 16000 * 3);
    const auto in = (dir.path() / "in.wav").string();
    write_wav(in, w);
    SegmentPlan plan{{{0.0, 1.25, {"a"}}, {1.25, 3.0, {"b"}}}};
    const auto paths = split_wav_file(in, plan, (dir.path() / "out").string());
    REQUIRE(paths.size() == 2);
    CHECK(std::filesystem::path(paths[1]).filename() == "chunk_0002.wav");
    CHECK(read_wav(paths[0]).sample_count() == 20000);
    CHECK(read_wav(paths[1]).sample_count() == 28000);
  }
}
