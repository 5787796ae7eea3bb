#include "aaevar/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <numeric>
#include <thread>
#include <tuple>
#include <unordered_map>

#include <fmt/format.h>
#include <json.hpp>

#include "aaevar/csv.hpp"
#include "aaevar/error.hpp"

namespace aaevar {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using HypothesisTable = std::unordered_map<std::string, std::string>;

HypothesisTable load_hypotheses(const fs::path& path, AsrType asr) {
  const std::string text = csv::read_file(path.string());
  std::vector<csv::Row> rows;
  try {
    rows = csv::parse_with_header(text, {"utterance_id", "asr_type", "text"});
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  HypothesisTable table;
  std::size_t line = 1;
  for (const auto& r : rows) {
    ++line;
    if (parse_asr_type(r[1]) != asr) {
      throw ParseError(fmt::format("{}: asr_type '{}' in a {} file", path.string(), r[1], to_string(asr)), line);
    }
    if (!table.emplace(r[0], r[2]).second) {
      throw ParseError(fmt::format("{}: duplicate utterance '{}'", path.string(), r[0]), line);
    }
  }
  return table;
}

struct Shared {
  const CorpusManifest& manifest;
  VariantLexicon lexicon;
  std::optional<VariantLexicon> supplement;
  SpeakerTable speakers;
  std::map<AsrType, HypothesisTable> hypotheses;
  NeighborOptions neighbor_opts;
};

struct KeyedRow {
  std::string recording;
  double start = 0.0;
  AnalysisRow row;
};

struct RecordingOutput {
  std::vector<KeyedRow> rows;
  UnknownWordReport unknown;
  std::vector<std::string> warnings;
  std::optional<FileFailure> failure;
};

const Tier* utterance_tier_for(const TextGrid& grid, const std::string& pattern, const std::string& speaker) {
  const bool has_star = pattern.find('*') != std::string::npos;
  for (const auto& tier : grid.tiers) {
    if (has_star) {
      auto cap = glob_capture(pattern, tier.name);
      if (cap && *cap == speaker) return &tier;
    } else if (tier.name == pattern) {
      return &tier;
    }
  }
  return nullptr;
}

void process_speaker(const Shared& sh, const Recording& rec, const SpeakerTokens& st, RecordingOutput& out) {
  std::unordered_map<std::string, const Utterance*> utterances;
  for (const auto& u : st.utterances) utterances.emplace(u.id, &u);

  std::size_t i = 0;
  while (i < st.tokens.size()) {
    std::size_t j = i;
    while (j < st.tokens.size() && st.tokens[j].utterance_id == st.tokens[i].utterance_id) ++j;
    const Utterance& utt = *utterances.at(st.tokens[i].utterance_id);

    for (const auto& [asr, table] : sh.hypotheses) {
      auto it = table.find(utt.id);
      if (it == table.end()) {
        out.warnings.push_back(fmt::format("{}: no {} hypothesis for utterance {}", rec.id, to_string(asr), utt.id));
        continue;
      }
      const auto hyp = normalize_transcript(it->second, sh.manifest.noise_patterns);
      const AlignmentResult res = align(utt.tokens, hyp);
      const double wer = utterance_wer(res);

      for (std::size_t k = i; k < j; ++k) {
        const TokenOccurrence& tok = st.tokens[k];
        const TokenOutcome outcome = hyp_for_token(res, tok.ref_index);
        KeyedRow kr;
        kr.recording = rec.id;
        kr.start = tok.start;
        AnalysisRow& row = kr.row;
        row.target_word = tok.word;
        row.speaker_id = tok.speaker.speaker_id;
        row.utterance_id = tok.utterance_id;
        row.variable = tok.variable;
        row.mfa_status = tok.mfa_status;
        row.age_group = tok.speaker.age_group;
        row.gender = tok.speaker.gender;
        row.ses = tok.speaker.ses;
        row.asr_type = asr;
        row.wer = wer;
        row.token_outcome = std::string(outcome_name(outcome));
        if (tok.mfa_status != MfaStatus::Other && std::holds_alternative<Substituted>(outcome)) {
          const auto attr = attribute_error(tok, outcome, sh.lexicon, sh.supplement ? &*sh.supplement : nullptr,
                                            sh.neighbor_opts);
          row.neighborhood = attr.status;
          if (attr.status == Attribution::Unknown_Pron) out.unknown.add(attr.hyp_word);
        }
        out.rows.push_back(std::move(kr));
      }
    }
    i = j;
  }
}

RecordingOutput process_recording(const Shared& sh, const Recording& rec) {
  RecordingOutput out;
  try {
    const TextGrid grid = load_textgrid(rec.textgrid.string());
    const CorpusManifest& m = sh.manifest;
    const TierSelection sel = select_tiers(grid, m.word_tier_pattern, m.phone_tier_pattern, m.speaker_filter);
    for (const auto& name : sel.unpaired) out.warnings.push_back(fmt::format("{}: unpaired tier '{}'", rec.id, name));

    for (const auto& pair : sel.pairs) {
      CollectOptions opts;
      opts.phone_slack = m.phone_slack;
      opts.segmentation.pause_gap = m.pause_gap;
      opts.segmentation.noise_patterns = m.noise_patterns;
      if (m.utterance_tier_pattern) {
        opts.segmentation.utterance_tier = utterance_tier_for(grid, *m.utterance_tier_pattern, pair.speaker);
        if (!opts.segmentation.utterance_tier) {
          throw Error(fmt::format("no utterance tier for speaker '{}'", pair.speaker));
        }
      }
      const auto collected = collect_target_tokens({pair}, rec.id, sh.lexicon, sh.speakers, opts);
      for (const auto& st : collected) process_speaker(sh, rec, st, out);
    }
  } catch (const std::exception& e) {
    out = RecordingOutput{};
    out.failure = FileFailure{rec.id, rec.textgrid.string(), e.what()};
  }
  return out;
}

std::vector<AnalysisRow> subset(const std::vector<AnalysisRow>& rows, std::optional<Variable> var,
                                std::optional<AsrType> asr) {
  std::vector<AnalysisRow> out;
  for (const auto& r : rows) {
    if (r.mfa_status == MfaStatus::Other) continue;
    if (var && r.variable != *var) continue;
    if (asr && r.asr_type != *asr) continue;
    out.push_back(r);
  }
  return out;
}

ModelReport fit_report(std::string label, ModelKind kind, const std::vector<AnalysisRow>& rows) {
  ModelReport rep;
  rep.label = std::move(label);
  rep.kind = kind;
  std::vector<AnalysisRow> use;
  if (kind == ModelKind::Neighborhood) {
    std::copy_if(rows.begin(), rows.end(), std::back_inserter(use),
                 [](const AnalysisRow& r) { return r.neighborhood_status().has_value(); });
  } else {
    use = rows;
  }
  if (use.empty()) {
    rep.error = "no rows";
    return rep;
  }
  try {
    rep.fit = fit_model(use, kind);
  } catch (const Error& e) {
    rep.error = e.what();
  }
  return rep;
}

std::vector<ModelReport> fit_models(const std::vector<AnalysisRow>& rows) {
  std::vector<ModelReport> out;
  const std::vector<std::pair<std::string, std::optional<Variable>>> sets{
      {"all", std::nullopt}, {"CCR", Variable::CCR}, {"ING", Variable::ING}};
  for (const auto& [name, var] : sets) {
    for (AsrType asr : {AsrType::without_lm, AsrType::with_lm}) {
      auto rs = subset(rows, var, asr);
      if (rs.empty()) continue;
      out.push_back(fit_report(fmt::format("wer/{}/{}", name, to_string(asr)), ModelKind::Wer, rs));
    }
  }
  for (const auto& [name, var] : sets) {
    auto rs = subset(rows, var, std::nullopt);
    if (rs.empty()) continue;
    out.push_back(fit_report(fmt::format("neighborhood/{}", name), ModelKind::Neighborhood, rs));
  }
  return out;
}

json vector_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

}  // namespace

AnalysisResult run_analysis(const CorpusManifest& manifest, const AnalysisConfig& config) {
  if (manifest.recordings.empty()) throw Error("empty manifest");
  if (manifest.hypotheses.empty()) throw Error("manifest names no hypothesis files");

  ExpansionRules rules;
  rules.ccr_stops.clear();
  for (const auto& s : manifest.ccr_stops) {
    auto ph = Phone::parse(s);
    if (!ph || !ph->is_stop() || ph->stress()) throw Error("ccr_stops: '" + s + "' is not a stop");
    rules.ccr_stops.insert(s);
  }
  std::optional<std::set<std::string, std::less<>>> filter;
  if (manifest.targets) filter = parse_word_list(csv::read_file(manifest.targets->string()));

  Shared sh{manifest, expand_lexicon(load_cmu_dict(manifest.dictionary.string()), filter, rules), std::nullopt,
            load_speaker_csv(manifest.speakers.string()), {}, NeighborOptions{manifest.include_reduced_neighbors}};
  if (manifest.supplement) sh.supplement = load_cmu_dict(manifest.supplement->string());
  for (const auto& [asr, path] : manifest.hypotheses) sh.hypotheses.emplace(asr, load_hypotheses(path, asr));

  AnalysisResult result;
  for (const auto& [word, vars] : sh.lexicon.entries()) {
    if (sh.lexicon.is_target(word)) ++result.target_words;
  }

  const std::size_t n = manifest.recordings.size();
  result.recordings = n;
  std::vector<RecordingOutput> outputs(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) outputs[i] = process_recording(sh, manifest.recordings[i]);
  };
  const std::size_t workers = std::clamp<std::size_t>(config.workers, 1, n);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  // Collector: visit recordings in id order so every output is independent
  // of manifest order and scheduling.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return manifest.recordings[a].id < manifest.recordings[b].id; });

  std::vector<KeyedRow> keyed;
  for (std::size_t i : order) {
    auto& o = outputs[i];
    if (o.failure) {
      result.failures.push_back(*o.failure);
      continue;
    }
    result.unknown_words.merge(o.unknown);
    result.warnings.insert(result.warnings.end(), o.warnings.begin(), o.warnings.end());
    std::move(o.rows.begin(), o.rows.end(), std::back_inserter(keyed));
  }
  std::stable_sort(keyed.begin(), keyed.end(), [](const KeyedRow& a, const KeyedRow& b) {
    return std::tie(a.recording, a.row.utterance_id, a.start, a.row.asr_type) <
           std::tie(b.recording, b.row.utterance_id, b.start, b.row.asr_type);
  });
  if (keyed.empty()) throw Error("empty final dataset");
  result.rows.reserve(keyed.size());
  for (auto& k : keyed) result.rows.push_back(std::move(k.row));

  result.summary = descriptive_summary(result.rows);
  if (config.fit.value_or(manifest.fit)) result.models = fit_models(result.rows);
  return result;
}

std::string summary_json(const AnalysisResult& r) {
  json j;
  j["recordings"] = r.recordings;
  j["target_words"] = r.target_words;
  j["rows"] = r.rows.size();

  json failures = json::array();
  for (const auto& f : r.failures) failures.push_back({{"recording", f.recording}, {"path", f.path}, {"error", f.message}});
  j["failures"] = failures;
  j["warnings"] = r.warnings;

  const auto& c = r.summary.counts;
  j["counts"] = {{"rows", c.rows},
                 {"other", c.other},
                 {"correct", c.correct},
                 {"deleted", c.deleted},
                 {"unknown_pron", c.unknown_pron},
                 {"neighbor_error", c.neighbor},
                 {"non_neighbor_error", c.non_neighbor}};

  json ne = json::array();
  for (const auto& s : r.summary.neighbor_errors) {
    ne.push_back({{"asr_type", to_string(s.asr_type)},
                  {"errors", s.errors},
                  {"neighbor_errors", s.neighbor},
                  {"proportion", s.proportion}});
  }
  j["neighbor_errors"] = ne;

  json wg = json::array();
  for (const auto& g : r.summary.wer_groups) {
    wg.push_back({{"variable", to_string(g.variable)},
                  {"mfa_status", to_string(g.mfa_status)},
                  {"asr_type", to_string(g.asr_type)},
                  {"n", g.n},
                  {"mean", g.mean},
                  {"median", g.median},
                  {"q1", g.q1},
                  {"q3", g.q3}});
  }
  j["wer_groups"] = wg;

  json models = json::array();
  for (const auto& m : r.models) {
    json mj{{"label", m.label}, {"model", m.kind == ModelKind::Wer ? "wer" : "neighborhood"}};
    if (m.fit) {
      const FitResult& f = *m.fit;
      mj["method"] = f.method;
      mj["note"] = "fixed-effects approximation; no random effects";
      mj["columns"] = f.columns;
      mj["coefficients"] = vector_json(f.coefficients);
      mj["std_errors"] = vector_json(f.std_errors);
      mj["n_obs"] = f.n_obs;
      mj["converged"] = f.converged;
      mj["separated"] = f.separated;
      mj["iterations"] = f.n_iterations;
      if (f.log_likelihood) mj["log_likelihood"] = *f.log_likelihood;
      if (f.residual_variance) mj["residual_variance"] = *f.residual_variance;
    } else {
      mj["error"] = m.error;
    }
    models.push_back(mj);
  }
  j["models"] = models;
  return j.dump(2) + "\n";
}

std::string format_fit_table(const ModelReport& rep) {
  std::string out = fmt::format("{} ({} model)\n", rep.label,
                                rep.kind == ModelKind::Wer ? "WER" : "neighborhood");
  if (!rep.fit) return out + "  not fitted: " + rep.error + "\n";
  const FitResult& f = *rep.fit;
  out += fmt::format("  method: {}  n = {}", f.method, f.n_obs);
  if (f.log_likelihood) out += fmt::format("  logLik = {:.4f}", *f.log_likelihood);
  if (f.residual_variance) out += fmt::format("  sigma^2 = {:.6g}", *f.residual_variance);
  out += "\n";
  if (f.separated) out += "  warning: separation detected; estimates are not reliable\n";
  else if (!f.converged) out += "  warning: did not converge\n";
  out += fmt::format("  {:<12} {:>12} {:>12} {:>10}\n", "term", "estimate", "std.error", "stat");
  for (std::size_t i = 0; i < f.columns.size(); ++i) {
    const double b = f.coefficients[static_cast<Eigen::Index>(i)];
    const double se = f.std_errors[static_cast<Eigen::Index>(i)];
    out += fmt::format("  {:<12} {:>12.6f} {:>12.6f} {:>10.3f}\n", f.columns[i], b, se, b / se);
  }
  return out;
}

void write_analysis_outputs(const AnalysisResult& result, const fs::path& out_dir, bool coded) {
  fs::create_directories(out_dir);
  csv::write_file((out_dir / "analysis.csv").string(), analysis_csv(result.rows));
  csv::write_file((out_dir / "summary.json").string(), summary_json(result));
  csv::write_file((out_dir / "unknown_words.csv").string(), result.unknown_words.to_csv());
  if (coded) csv::write_file((out_dir / "analysis_coded.csv").string(), coded_analysis_csv(result.rows));
}

}  // namespace aaevar
