#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "aaevar/manifest.hpp"
#include "aaevar/neighborhood.hpp"
#include "aaevar/stats.hpp"

namespace aaevar {

struct AnalysisConfig {
  unsigned workers = 1;
  std::optional<bool> fit;  // overrides the manifest's `fit`
};

struct FileFailure {
  std::string recording;
  std::string path;
  std::string message;
};

struct ModelReport {
  std::string label;  // e.g. "wer/CCR/without_lm", "neighborhood/all"
  ModelKind kind = ModelKind::Wer;
  std::optional<FitResult> fit;
  std::string error;  // set when the model could not be fitted
};

struct AnalysisResult {
  std::vector<AnalysisRow> rows;  // recording, utterance, token start, asr_type
  DescriptiveSummary summary;
  UnknownWordReport unknown_words;
  std::vector<FileFailure> failures;
  std::vector<std::string> warnings;
  std::vector<ModelReport> models;
  std::size_t recordings = 0;
  std::size_t target_words = 0;

  int exit_code() const { return failures.empty() ? 0 : 2; }
};

// Lexicon expansion, token collection, alignment per (utterance, asr_type),
// error attribution and summaries. Recordings are processed in parallel;
// output order does not depend on the worker count or manifest order.
// A recording that fails is recorded in `failures` and skipped. Throws Error
// for an empty manifest, unreadable shared inputs (dictionary, metadata,
// hypotheses) and when no rows survive.
AnalysisResult run_analysis(const CorpusManifest& manifest, const AnalysisConfig& config = {});

std::string summary_json(const AnalysisResult& result);
std::string format_fit_table(const ModelReport& report);

// analysis.csv, summary.json, unknown_words.csv and, with `coded`,
// analysis_coded.csv. Creates `out_dir` if needed.
void write_analysis_outputs(const AnalysisResult& result, const std::filesystem::path& out_dir, bool coded = false);

}  // namespace aaevar
