#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "aaevar/analysis.hpp"
#include "aaevar/csv.hpp"
#include "aaevar/error.hpp"
#include "aaevar/fixture.hpp"
#include "aaevar/lexicon.hpp"
#include "aaevar/manifest.hpp"
#include "aaevar/segments.hpp"
#include "aaevar/stats.hpp"
#include "aaevar/wav.hpp"

namespace fs = std::filesystem;
using namespace aaevar;

namespace {

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

int cmd_expand(const std::string& in, const std::string& out, const std::string& targets, const std::string& stops) {
  ExpansionRules rules;
  if (!stops.empty()) {
    rules.ccr_stops.clear();
    for (const auto& s : split_commas(stops)) {
      auto ph = Phone::parse(s);
      if (!ph || !ph->is_stop() || ph->stress()) throw Error("--ccr-stops: '" + s + "' is not a stop");
      rules.ccr_stops.insert(s);
    }
  }
  std::optional<std::set<std::string, std::less<>>> filter;
  if (!targets.empty()) filter = parse_word_list(csv::read_file(targets));
  const VariantLexicon lex = load_cmu_dict(in);
  const VariantLexicon expanded = expand_lexicon(lex, filter, rules);
  csv::write_file(out, serialize_dict(expanded));
  spdlog::info("{} words, {} -> {} pronunciations", expanded.word_count(), lex.variant_count(),
               expanded.variant_count());
  return 0;
}

std::vector<UtteranceSpan> spans_from_input(const std::string& utterances, const std::string& textgrid,
                                            const std::string& tier) {
  if (!utterances.empty()) return parse_utterance_csv(csv::read_file(utterances));
  const TextGrid grid = load_textgrid(textgrid);
  const Tier* t = grid.find_tier(tier);
  if (!t) throw Error("no tier named '" + tier + "' in " + textgrid);
  return utterances_from_tier(*t);
}

int cmd_plan(const std::string& utterances, const std::string& textgrid, const std::string& tier, double min_duration,
             const std::string& out) {
  const auto spans = spans_from_input(utterances, textgrid, tier);
  const SegmentPlan plan = plan_segments(spans, min_duration);
  const std::string text = plan_csv(plan);
  if (out.empty()) {
    std::cout << text;
  } else {
    csv::write_file(out, text);
  }
  spdlog::info("{} utterances -> {} chunks", spans.size(), plan.chunks.size());
  return 0;
}

int cmd_split(const std::string& wav, const std::string& plan_path, const std::string& utterances,
              const std::string& textgrid, const std::string& tier, double min_duration, const std::string& out) {
  SegmentPlan plan;
  if (!plan_path.empty()) {
    plan = parse_plan_csv(csv::read_file(plan_path));
  } else {
    plan = plan_segments(spans_from_input(utterances, textgrid, tier), min_duration);
  }
  fs::create_directories(out);
  const auto written = split_wav_file(wav, plan, out);
  csv::write_file((fs::path(out) / "plan.csv").string(), plan_csv(plan));
  spdlog::info("wrote {} chunk files to {}", written.size(), out);
  return 0;
}

int cmd_analyze(const std::string& manifest_path, const std::string& out, unsigned workers, bool coded,
                std::optional<bool> fit) {
  const CorpusManifest manifest = load_manifest(manifest_path);
  AnalysisConfig cfg;
  cfg.workers = workers;
  cfg.fit = fit;
  const AnalysisResult result = run_analysis(manifest, cfg);
  write_analysis_outputs(result, out, coded);

  for (const auto& w : result.warnings) spdlog::warn("{}", w);
  for (const auto& f : result.failures) spdlog::error("{} ({}): {}", f.recording, f.path, f.message);
  const auto& c = result.summary.counts;
  spdlog::info("{} rows from {} recordings ({} failed); {} Other-status rows excluded from statistics",
               result.rows.size(), result.recordings, result.failures.size(), c.other);
  for (const auto& s : result.summary.neighbor_errors) {
    spdlog::info("{}: {} of {} attributable errors are neighbor errors ({:.3f})", to_string(s.asr_type), s.neighbor,
                 s.errors, s.proportion);
  }
  for (const auto& m : result.models) std::cout << format_fit_table(m) << "\n";
  if (result.exit_code() != 0) spdlog::warn("{} recording(s) failed; outputs are partial", result.failures.size());
  return result.exit_code();
}

int cmd_fixture(std::uint64_t seed, const std::string& out, std::size_t tokens, double reduced, double other,
                bool audio) {
  FixtureSpec spec;
  spec.n_tokens = tokens;
  spec.reduced_rate = reduced;
  spec.other_rate = other;
  spec.write_audio = audio;
  const FixtureCorpus corpus = generate_fixture(seed, spec, out);
  spdlog::info("fixture written to {} ({} ground-truth rows); manifest {}", out, corpus.truth.size(),
               corpus.manifest_json.string());
  return 0;
}

int cmd_fit(const std::string& model, const std::string& in) {
  const auto rows = parse_analysis_csv(csv::read_file(in));
  const ModelKind kind = model == "wer" ? ModelKind::Wer : ModelKind::Neighborhood;
  std::vector<AnalysisRow> use;
  for (const auto& r : rows) {
    if (r.mfa_status == MfaStatus::Other) continue;
    if (kind == ModelKind::Neighborhood && !r.neighborhood_status()) continue;
    use.push_back(r);
  }
  ModelReport rep;
  rep.label = fs::path(in).filename().string();
  rep.kind = kind;
  rep.fit = fit_model(use, kind);
  std::cout << format_fit_table(rep);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  auto logger = spdlog::stderr_color_mt("aaevar");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("%^%l%$: %v");

  CLI::App app{"Lexicon expansion, ASR error attribution and analysis for dialect speech corpora"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Debug logging");

  std::string in, out, targets, stops;
  auto* expand = app.add_subcommand("expand-dict", "Add CCR and ING reduced variants to a CMU-format dictionary");
  expand->add_option("input", in, "Input dictionary")->required()->check(CLI::ExistingFile);
  expand->add_option("output", out, "Output dictionary")->required();
  expand->add_option("--targets", targets, "Word list restricting expansion")->check(CLI::ExistingFile);
  expand->add_option("--ccr-stops", stops, "Stops eligible for cluster reduction, e.g. T,D");

  std::string utterances, textgrid, tier = "utterances", plan_path, wav;
  double min_duration = 30.0;
  auto* plan = app.add_subcommand("plan-segments", "Group utterances into chunks of a minimum duration");
  auto* plan_src = plan->add_option_group("source");
  plan_src->add_option("--utterances", utterances, "CSV utterance_id,start,end")->check(CLI::ExistingFile);
  plan_src->add_option("--textgrid", textgrid, "TextGrid holding an utterance tier")->check(CLI::ExistingFile);
  plan_src->require_option(1);
  plan->add_option("--tier", tier, "Utterance tier name")->capture_default_str();
  plan->add_option("--min-duration", min_duration, "Minimum chunk length in seconds")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  plan->add_option("-o,--out", out, "Output plan CSV (default stdout)");

  auto* split = app.add_subcommand("split-wav", "Cut a 16-bit PCM mono WAV file along a segment plan");
  split->add_option("wav", wav, "Input WAV")->required()->check(CLI::ExistingFile);
  auto* split_src = split->add_option_group("plan source");
  split_src->add_option("--plan", plan_path, "Plan CSV from plan-segments")->check(CLI::ExistingFile);
  split_src->add_option("--utterances", utterances, "CSV utterance_id,start,end")->check(CLI::ExistingFile);
  split_src->add_option("--textgrid", textgrid, "TextGrid holding an utterance tier")->check(CLI::ExistingFile);
  split_src->require_option(1);
  split->add_option("--tier", tier, "Utterance tier name")->capture_default_str();
  split->add_option("--min-duration", min_duration, "Minimum chunk length in seconds")->capture_default_str();
  split->add_option("-o,--out", out, "Output directory")->required();

  std::string manifest;
  unsigned workers = 1;
  bool coded = false, fit = false, no_fit = false;
  auto* analyze = app.add_subcommand("analyze", "Run the full analysis over a corpus manifest");
  analyze->add_option("manifest", manifest, "Manifest (.json or .toml)")->required()->check(CLI::ExistingFile);
  analyze->add_option("-o,--out", out, "Output directory")->required();
  analyze->add_option("-j,--workers", workers, "Recordings processed in parallel")
      ->capture_default_str()
      ->check(CLI::Range(1u, 256u));
  analyze->add_flag("--coded", coded, "Also write analysis_coded.csv with contrast-coded columns");
  auto* fit_flag = analyze->add_flag("--fit", fit, "Fit the regression models");
  analyze->add_flag("--no-fit", no_fit, "Skip model fits even if the manifest asks for them")->excludes(fit_flag);

  std::uint64_t seed = 1;
  std::size_t tokens = 500;
  double reduced = 0.4, other = 0.0;
  bool audio = false;
  auto* fixture = app.add_subcommand("fixture", "Generate a synthetic corpus with known ground truth");
  fixture->add_option("--seed", seed, "Random seed")->capture_default_str();
  fixture->add_option("-o,--out", out, "Output directory")->required();
  fixture->add_option("--tokens", tokens, "Target tokens")->capture_default_str()->check(CLI::PositiveNumber);
  fixture->add_option("--reduced-rate", reduced, "Share of Reduced tokens")->capture_default_str()->check(CLI::Range(0.0, 1.0));
  fixture->add_option("--other-rate", other, "Share of Other tokens")->capture_default_str()->check(CLI::Range(0.0, 1.0));
  fixture->add_flag("--audio", audio, "Also write one WAV per recording");

  std::string model = "wer";
  auto* fitcmd = app.add_subcommand("fit", "Fit a model to an existing analysis CSV");
  fitcmd->add_option("--model", model, "wer or neighborhood")
      ->capture_default_str()
      ->check(CLI::IsMember({"wer", "neighborhood"}));
  fitcmd->add_option("--in", in, "analysis.csv")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::info);

  try {
    if (*expand) return cmd_expand(in, out, targets, stops);
    if (*plan) return cmd_plan(utterances, textgrid, tier, min_duration, out);
    if (*split) return cmd_split(wav, plan_path, utterances, textgrid, tier, min_duration, out);
    if (*analyze) {
      std::optional<bool> f;
      if (fit) f = true;
      if (no_fit) f = false;
      return cmd_analyze(manifest, out, workers, coded, f);
    }
    if (*fixture) return cmd_fixture(seed, out, tokens, reduced, other, audio);
    if (*fitcmd) return cmd_fit(model, in);
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return 1;
}
