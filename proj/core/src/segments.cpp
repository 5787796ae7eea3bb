#include "aaevar/segments.hpp"

#include <cstdlib>

#include <fmt/format.h>

#include "aaevar/csv.hpp"
#include "aaevar/error.hpp"

namespace aaevar {

SegmentPlan plan_segments(std::span<const UtteranceSpan> utterances, double min_duration) {
  for (std::size_t i = 0; i < utterances.size(); ++i) {
    if (!(utterances[i].start < utterances[i].end)) {
      throw Error(fmt::format("utterance '{}' has start >= end", utterances[i].id));
    }
    if (i > 0 && utterances[i].start < utterances[i - 1].end) {
      throw Error(fmt::format("utterance '{}' overlaps or precedes '{}'", utterances[i].id, utterances[i - 1].id));
    }
  }
  SegmentPlan plan;
  if (utterances.empty()) return plan;

  Chunk open;
  double first_start = utterances.front().start;
  open.start = first_start;
  for (std::size_t i = 0; i < utterances.size(); ++i) {
    const auto& u = utterances[i];
    if (open.utterance_ids.empty()) first_start = u.start;
    open.utterance_ids.push_back(u.id);
    const bool last = i + 1 == utterances.size();
    if (last) {
      open.end = u.end;
      plan.chunks.push_back(std::move(open));
      break;
    }
    if (u.end - first_start >= min_duration) {
      const double boundary = 0.5 * (u.end + utterances[i + 1].start);
      open.end = boundary;
      plan.chunks.push_back(std::move(open));
      open = Chunk{};
      open.start = boundary;
    }
  }
  return plan;
}

std::vector<UtteranceSpan> utterances_from_tier(const Tier& tier) {
  std::vector<UtteranceSpan> out;
  for (const auto& iv : tier.intervals) {
    if (is_silence_label(iv.text)) continue;
    out.push_back({fmt::format("{}-{:04d}", tier.name, out.size() + 1), iv.xmin, iv.xmax});
  }
  return out;
}

namespace {

double parse_time(const std::string& s, std::size_t line) {
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0') throw ParseError("bad time '" + s + "'", line);
  return v;
}

}  // namespace

std::vector<UtteranceSpan> parse_utterance_csv(std::string_view text) {
  auto rows = csv::parse_with_header(text, {"utterance_id", "start", "end"});
  std::vector<UtteranceSpan> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.push_back({rows[i][0], parse_time(rows[i][1], i + 2), parse_time(rows[i][2], i + 2)});
  }
  return out;
}

std::string plan_csv(const SegmentPlan& plan) {
  std::string out = csv::format_row({"chunk", "start", "end", "utterance_ids"});
  for (std::size_t i = 0; i < plan.chunks.size(); ++i) {
    const auto& c = plan.chunks[i];
    out += csv::format_row({std::to_string(i + 1), fmt::format("{}", c.start), fmt::format("{}", c.end),
                            fmt::format("{}", fmt::join(c.utterance_ids, ";"))});
  }
  return out;
}

SegmentPlan parse_plan_csv(std::string_view text) {
  auto rows = csv::parse_with_header(text, {"chunk", "start", "end", "utterance_ids"});
  SegmentPlan plan;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    Chunk c;
    c.start = parse_time(rows[i][1], i + 2);
    c.end = parse_time(rows[i][2], i + 2);
    std::string_view ids = rows[i][3];
    while (!ids.empty()) {
      auto semi = ids.find(';');
      c.utterance_ids.emplace_back(ids.substr(0, semi));
      ids = semi == std::string_view::npos ? std::string_view{} : ids.substr(semi + 1);
    }
    plan.chunks.push_back(std::move(c));
  }
  return plan;
}

}  // namespace aaevar
