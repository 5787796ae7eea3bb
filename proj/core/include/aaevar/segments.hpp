#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aaevar/textgrid.hpp"

namespace aaevar {

struct UtteranceSpan {
  std::string id;
  double start = 0.0;
  double end = 0.0;
};

struct Chunk {
  double start = 0.0;
  double end = 0.0;
  std::vector<std::string> utterance_ids;

  double duration() const { return end - start; }
};

// Chunks are ordered and non-overlapping; every chunk but the last spans at
// least the minimum duration; no utterance is split.
struct SegmentPlan {
  std::vector<Chunk> chunks;
};

// Greedy: whole utterances are added to the open chunk until the utterances
// it holds span >= min_duration, then it closes. Boundaries between chunks
// sit at the midpoint of the silence between the neighboring utterances; the
// first chunk starts at the first utterance and the last ends at the last.
// Throws Error if the utterances are unsorted or overlap.
SegmentPlan plan_segments(std::span<const UtteranceSpan> utterances, double min_duration = 30.0);

// Non-silent intervals of a tier, ids `<tier>-<NNNN>`.
std::vector<UtteranceSpan> utterances_from_tier(const Tier& tier);

// `utterance_id,start,end`
std::vector<UtteranceSpan> parse_utterance_csv(std::string_view text);
// `chunk,start,end,utterance_ids` with ids joined by ';'.
std::string plan_csv(const SegmentPlan& plan);
SegmentPlan parse_plan_csv(std::string_view text);

}  // namespace aaevar
