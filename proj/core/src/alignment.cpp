#include "aaevar/alignment.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "aaevar/error.hpp"
#include "aaevar/textgrid.hpp"

namespace aaevar {

std::vector<std::string> default_noise_patterns() { return {"(*)", "(*", "*)", "/*/", "<*>"}; }

namespace {

bool is_word_char(unsigned char c) { return std::isalnum(c) || c >= 0x80; }

}  // namespace

std::optional<std::string> normalize_token(std::string_view raw, const std::vector<std::string>& noise_patterns) {
  for (const auto& pat : noise_patterns) {
    if (glob_match(pat, raw)) return std::nullopt;
  }
  std::size_t b = 0, e = raw.size();
  while (b < e && !is_word_char(static_cast<unsigned char>(raw[b]))) ++b;
  while (e > b && !is_word_char(static_cast<unsigned char>(raw[e - 1]))) --e;
  if (b == e) return std::nullopt;
  std::string out(raw.substr(b, e - b));
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<std::string> tokenize_transcript(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    char close = 0;
    if (text[i] == '(') close = ')';
    if (text[i] == '<') close = '>';
    if (text[i] == '/') close = '/';
    std::size_t j = i + 1;
    if (close) {
      auto end = text.find(close, i + 1);
      if (end != std::string_view::npos) {
        j = end + 1;
      } else {
        close = 0;
      }
    }
    if (!close) {
      while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    } else {
      // Keep trailing punctuation glued to the span, e.g. "(pause 0.5),".
      while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    }
    out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

std::vector<std::string> normalize_transcript(std::string_view text, const std::vector<std::string>& noise_patterns) {
  std::vector<std::string> out;
  for (const auto& raw : tokenize_transcript(text)) {
    if (auto tok = normalize_token(raw, noise_patterns)) out.push_back(std::move(*tok));
  }
  return out;
}

AlignmentResult align(const std::vector<std::string>& ref, const std::vector<std::string>& hyp) {
  const std::size_t n = ref.size();
  const std::size_t m = hyp.size();
  const std::size_t w = m + 1;
  std::vector<std::size_t> cost((n + 1) * w);
  for (std::size_t j = 0; j <= m; ++j) cost[j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    cost[i * w] = i;
    for (std::size_t j = 1; j <= m; ++j) {
      std::size_t diag = cost[(i - 1) * w + j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      std::size_t up = cost[(i - 1) * w + j] + 1;
      std::size_t left = cost[i * w + j - 1] + 1;
      cost[i * w + j] = std::min({diag, up, left});
    }
  }

  AlignmentResult res;
  res.ref_length = n;
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    const std::size_t here = cost[i * w + j];
    if (i > 0 && j > 0 && ref[i - 1] == hyp[j - 1] && cost[(i - 1) * w + j - 1] == here) {
      res.ops.push_back({OpKind::Match, ref[i - 1], hyp[j - 1]});
      ++res.counts.match;
      --i;
      --j;
    } else if (i > 0 && j > 0 && ref[i - 1] != hyp[j - 1] && cost[(i - 1) * w + j - 1] + 1 == here) {
      res.ops.push_back({OpKind::Sub, ref[i - 1], hyp[j - 1]});
      ++res.counts.sub;
      --i;
      --j;
    } else if (i > 0 && cost[(i - 1) * w + j] + 1 == here) {
      res.ops.push_back({OpKind::Del, ref[i - 1], std::nullopt});
      ++res.counts.del;
      --i;
    } else {
      res.ops.push_back({OpKind::Ins, std::nullopt, hyp[j - 1]});
      ++res.counts.ins;
      --j;
    }
  }
  std::reverse(res.ops.begin(), res.ops.end());

  res.ref_op.reserve(n);
  for (std::size_t k = 0; k < res.ops.size(); ++k) {
    if (res.ops[k].kind != OpKind::Ins) res.ref_op.push_back(k);
  }
  if (n == 0) {
    res.degenerate = true;
    res.wer = static_cast<double>(res.counts.ins);
  } else {
    res.wer = utterance_wer(res.counts);
  }
  return res;
}

std::string_view outcome_name(const TokenOutcome& o) {
  struct {
    std::string_view operator()(const Correct&) const { return "Correct"; }
    std::string_view operator()(const Substituted&) const { return "Substituted"; }
    std::string_view operator()(const Deleted&) const { return "Deleted"; }
  } visitor;
  return std::visit(visitor, o);
}

TokenOutcome hyp_for_token(const AlignmentResult& result, std::size_t ref_index) {
  if (ref_index >= result.ref_op.size()) {
    throw std::out_of_range("reference index " + std::to_string(ref_index) + " out of range (length " +
                            std::to_string(result.ref_op.size()) + ")");
  }
  const AlignOp& op = result.ops[result.ref_op[ref_index]];
  switch (op.kind) {
    case OpKind::Match:
      return Correct{};
    case OpKind::Sub:
      return Substituted{*op.hyp};
    default:
      return Deleted{};
  }
}

double utterance_wer(const AlignCounts& counts) {
  const std::size_t n = counts.match + counts.sub + counts.del;
  if (n == 0) throw Error("WER undefined for an empty reference");
  return static_cast<double>(counts.errors()) / static_cast<double>(n);
}

double utterance_wer(const AlignmentResult& result) { return utterance_wer(result.counts); }

}  // namespace aaevar
