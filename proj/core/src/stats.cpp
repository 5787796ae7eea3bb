#include "aaevar/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <tuple>

#include <fmt/format.h>

#include "aaevar/csv.hpp"
#include "aaevar/error.hpp"

namespace aaevar {

std::string_view to_string(AsrType t) { return t == AsrType::without_lm ? "without_lm" : "with_lm"; }

std::optional<AsrType> parse_asr_type(std::string_view s) {
  auto f = fold_case(s);
  if (f == "without_lm") return AsrType::without_lm;
  if (f == "with_lm") return AsrType::with_lm;
  return std::nullopt;
}

std::optional<int> AnalysisRow::neighborhood_status() const {
  if (neighborhood == Attribution::Neighbor_Error) return 1;
  if (neighborhood == Attribution::Non_Neighbor_Error) return 0;
  return std::nullopt;
}

std::optional<double> code_mfa_status(MfaStatus s) {
  if (s == MfaStatus::Original) return -0.5;
  if (s == MfaStatus::Reduced) return 0.5;
  return std::nullopt;
}

double code_gender(Gender g) { return g == Gender::Male ? -0.5 : 0.5; }
double code_asr_type(AsrType t) { return t == AsrType::without_lm ? -0.5 : 0.5; }

Eigen::MatrixXd helmert_contrasts(std::size_t k) {
  if (k < 2) throw Error("Helmert contrasts need at least 2 levels");
  const auto n = static_cast<Eigen::Index>(k);
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n - 1);
  for (Eigen::Index j = 0; j < n - 1; ++j) {
    const double scale = static_cast<double>(j + 2);
    for (Eigen::Index i = 0; i <= j; ++i) H(i, j) = -1.0 / scale;
    H(j + 1, j) = static_cast<double>(j + 1) / scale;
  }
  return H;
}

std::array<double, 3> code_age_group(AgeGroup a) {
  static const Eigen::MatrixXd H = helmert_contrasts(4);
  const auto i = static_cast<Eigen::Index>(a);
  return {H(i, 0), H(i, 1), H(i, 2)};
}

Design build_design(std::span<const AnalysisRow> rows, ModelKind kind) {
  if (rows.empty()) throw Error("no rows to build a design from");
  Design d;
  const auto n = static_cast<Eigen::Index>(rows.size());
  std::vector<std::size_t> bad;
  if (kind == ModelKind::Wer) {
    d.columns = {"intercept", "mfa_status", "age_2v1", "age_3v12", "age_4v123", "gender"};
    d.X.resize(n, 6);
    d.y.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& r = rows[static_cast<std::size_t>(i)];
      auto mfa = code_mfa_status(r.mfa_status);
      if (!mfa || !std::isfinite(r.wer)) {
        bad.push_back(static_cast<std::size_t>(i));
        continue;
      }
      auto age = code_age_group(r.age_group);
      d.X.row(i) << 1.0, *mfa, age[0], age[1], age[2], code_gender(r.gender);
      d.y(i) = r.wer;
    }
  } else {
    d.columns = {"intercept", "asr_type"};
    d.X.resize(n, 2);
    d.y.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& r = rows[static_cast<std::size_t>(i)];
      auto status = r.neighborhood_status();
      if (!status) {
        bad.push_back(static_cast<std::size_t>(i));
        continue;
      }
      d.X.row(i) << 1.0, code_asr_type(r.asr_type);
      d.y(i) = *status;
    }
  }
  if (!bad.empty()) {
    const std::size_t shown = std::min<std::size_t>(bad.size(), 20);
    throw Error(fmt::format("{} row(s) missing covariates or outcome: {}{}", bad.size(),
                            fmt::join(bad.begin(), bad.begin() + static_cast<std::ptrdiff_t>(shown), ", "),
                            bad.size() > shown ? ", ..." : ""));
  }
  return d;
}

namespace {

std::vector<std::string> default_columns(std::vector<std::string> columns, Eigen::Index p) {
  if (columns.size() == static_cast<std::size_t>(p)) return columns;
  columns.clear();
  for (Eigen::Index j = 0; j < p; ++j) columns.push_back(fmt::format("x{}", j));
  return columns;
}

double softplus(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// ll(next) - ll(beta) summed per observation from the change in the linear
// predictor, so small gains stay resolvable when ll itself is large.
double loglik_increment(const Eigen::VectorXd& y, const Eigen::VectorXd& eta, const Eigen::VectorXd& eta_next) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    const double d = eta_next(i) - eta(i);
    const double dsp = std::abs(d) < 1.0 ? std::log1p(sigmoid(eta(i)) * std::expm1(d))
                                         : softplus(eta_next(i)) - softplus(eta(i));
    total += y(i) * d - dsp;
  }
  return total;
}

}  // namespace

FitResult fit_ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, std::vector<std::string> columns) {
  const Eigen::Index n = X.rows();
  const Eigen::Index p = X.cols();
  if (y.size() != n) throw Error("X and y row counts differ");
  columns = default_columns(std::move(columns), p);

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  if (qr.rank() < p) {
    std::vector<std::string> dependent;
    const auto& perm = qr.colsPermutation().indices();
    for (Eigen::Index k = qr.rank(); k < p; ++k) dependent.push_back(columns[static_cast<std::size_t>(perm(k))]);
    throw RankDeficient(fmt::format("design matrix is rank deficient (rank {} of {}); collinear column(s): {}",
                                    qr.rank(), p, fmt::join(dependent, ", ")));
  }

  FitResult fit;
  fit.method = "ols (fixed-effects approximation)";
  fit.columns = std::move(columns);
  fit.n_obs = static_cast<std::size_t>(n);
  fit.coefficients = qr.solve(y);
  const Eigen::VectorXd resid = y - X * fit.coefficients;
  const double rss = resid.squaredNorm();
  const Eigen::Index dof = n - p;
  fit.residual_variance = dof > 0 ? rss / static_cast<double>(dof) : std::numeric_limits<double>::quiet_NaN();
  const Eigen::MatrixXd xtx_inv =
      (X.transpose() * X).ldlt().solve(Eigen::MatrixXd::Identity(p, p));
  fit.std_errors = (xtx_inv.diagonal() * *fit.residual_variance).cwiseSqrt();
  fit.max_abs_gradient = p > 0 ? (X.transpose() * resid).cwiseAbs().maxCoeff() : 0.0;
  fit.converged = true;
  fit.n_iterations = 1;
  return fit;
}

double logistic_log_likelihood(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Eigen::VectorXd& beta) {
  const Eigen::VectorXd eta = X * beta;
  double ll = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) ll += y(i) * eta(i) - softplus(eta(i));
  return ll;
}

Eigen::VectorXd logistic_fitted(const Eigen::MatrixXd& X, const Eigen::VectorXd& beta) {
  return (X * beta).unaryExpr([](double e) { return sigmoid(e); });
}

Eigen::VectorXd logistic_gradient(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Eigen::VectorXd& beta) {
  return X.transpose() * (y - logistic_fitted(X, beta));
}

FitResult fit_logistic_irls(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const IrlsOptions& opts,
                            std::vector<std::string> columns) {
  const Eigen::Index n = X.rows();
  const Eigen::Index p = X.cols();
  if (y.size() != n) throw Error("X and y row counts differ");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (y(i) != 0.0 && y(i) != 1.0) throw Error(fmt::format("logistic outcome row {} is not 0/1", i));
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  columns = default_columns(std::move(columns), p);
  if (qr.rank() < p) {
    std::vector<std::string> dependent;
    const auto& perm = qr.colsPermutation().indices();
    for (Eigen::Index k = qr.rank(); k < p; ++k) dependent.push_back(columns[static_cast<std::size_t>(perm(k))]);
    throw RankDeficient(fmt::format("design matrix is rank deficient (rank {} of {}); collinear column(s): {}",
                                    qr.rank(), p, fmt::join(dependent, ", ")));
  }

  FitResult fit;
  fit.method = "logistic irls (fixed-effects approximation)";
  fit.columns = std::move(columns);
  fit.n_obs = static_cast<std::size_t>(n);

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  double ll = logistic_log_likelihood(X, y, beta);
  Eigen::VectorXd grad = logistic_gradient(X, y, beta);
  Eigen::MatrixXd info(p, p);

  for (std::size_t iter = 0; iter < opts.max_iter; ++iter) {
    if (grad.cwiseAbs().maxCoeff() < opts.tol) {
      fit.converged = true;
      break;
    }
    const Eigen::VectorXd mu = logistic_fitted(X, beta);
    const Eigen::VectorXd w = mu.cwiseProduct((1.0 - mu.array()).matrix());
    info.noalias() = X.transpose() * w.asDiagonal() * X;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(info);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || ldlt.vectorD().minCoeff() <= 1e-300) {
      fit.separated = true;
      break;
    }
    const Eigen::VectorXd step = ldlt.solve(grad);

    const Eigen::VectorXd eta = X * beta;
    double t = 1.0;
    Eigen::VectorXd next = beta + step;
    double gain = loglik_increment(y, eta, X * next);
    int halvings = 0;
    while (!(gain >= 0.0) && halvings < 60) {
      t *= 0.5;
      next = beta + t * step;
      gain = loglik_increment(y, eta, X * next);
      ++halvings;
    }
    if (!(gain >= 0.0)) break;

    beta = next;
    ll += gain;
    grad = logistic_gradient(X, y, beta);
    fit.loglik_trace.push_back(ll);
    fit.n_iterations = iter + 1;
  }
  if (!fit.converged && grad.cwiseAbs().maxCoeff() < opts.tol) fit.converged = true;

  const Eigen::VectorXd mu = logistic_fitted(X, beta);
  const double edge = (mu.array() * (1.0 - mu.array())).minCoeff();
  if (edge < 1e-10 || beta.cwiseAbs().maxCoeff() > 20.0) fit.separated = true;
  if (fit.separated) fit.converged = false;

  fit.coefficients = beta;
  fit.log_likelihood = logistic_log_likelihood(X, y, beta);
  fit.max_abs_gradient = grad.cwiseAbs().maxCoeff();
  const Eigen::VectorXd w = mu.cwiseProduct((1.0 - mu.array()).matrix());
  info.noalias() = X.transpose() * w.asDiagonal() * X;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(info);
  if (lu.isInvertible()) {
    fit.std_errors = lu.inverse().diagonal().cwiseSqrt();
  } else {
    fit.std_errors = Eigen::VectorXd::Constant(p, std::numeric_limits<double>::infinity());
  }
  return fit;
}

FitResult fit_model(std::span<const AnalysisRow> rows, ModelKind kind) {
  Design d = build_design(rows, kind);
  if (kind == ModelKind::Wer) return fit_ols(d.X, d.y, d.columns);
  return fit_logistic_irls(d.X, d.y, {}, d.columns);
}

double quantile(std::vector<double> values, double p) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

DescriptiveSummary descriptive_summary(std::span<const AnalysisRow> rows) {
  DescriptiveSummary s;
  std::map<std::tuple<Variable, MfaStatus, AsrType>, std::vector<double>> groups;
  std::map<AsrType, NeighborErrorSummary> errs;
  for (const auto& r : rows) {
    ++s.counts.rows;
    if (r.mfa_status == MfaStatus::Other) {
      ++s.counts.other;
      continue;
    }
    groups[{r.variable, r.mfa_status, r.asr_type}].push_back(r.wer);
    if (r.token_outcome == "Correct") ++s.counts.correct;
    if (r.token_outcome == "Deleted") ++s.counts.deleted;
    if (r.neighborhood == Attribution::Unknown_Pron) ++s.counts.unknown_pron;
    if (auto status = r.neighborhood_status()) {
      auto& e = errs.try_emplace(r.asr_type, NeighborErrorSummary{r.asr_type}).first->second;
      ++e.errors;
      if (*status == 1) {
        ++e.neighbor;
        ++s.counts.neighbor;
      } else {
        ++s.counts.non_neighbor;
      }
    }
  }
  for (auto& [key, wers] : groups) {
    WerGroupSummary g{std::get<0>(key), std::get<1>(key), std::get<2>(key)};
    g.n = wers.size();
    double sum = 0.0;
    for (double w : wers) sum += w;
    g.mean = sum / static_cast<double>(g.n);
    g.median = quantile(wers, 0.5);
    g.q1 = quantile(wers, 0.25);
    g.q3 = quantile(wers, 0.75);
    s.wer_groups.push_back(g);
  }
  for (auto& [asr, e] : errs) {
    e.proportion = static_cast<double>(e.neighbor) / static_cast<double>(e.errors);
    s.neighbor_errors.push_back(e);
  }
  return s;
}

const std::vector<std::string> kAnalysisHeader = {
    "target_word", "speaker_id", "utterance_id", "variable", "mfa_status", "age_group",
    "gender",      "ses",        "asr_type",     "wer",      "token_outcome", "neighborhood_status"};

namespace {

csv::Row raw_fields(const AnalysisRow& r) {
  return {r.target_word,
          r.speaker_id,
          r.utterance_id,
          std::string(to_string(r.variable)),
          std::string(to_string(r.mfa_status)),
          std::string(to_string(r.age_group)),
          std::string(to_string(r.gender)),
          std::to_string(r.ses),
          std::string(to_string(r.asr_type)),
          fmt::format("{}", r.wer),
          r.token_outcome,
          r.neighborhood ? std::string(to_string(*r.neighborhood)) : std::string()};
}

}  // namespace

std::string analysis_csv(std::span<const AnalysisRow> rows) {
  std::string out = csv::format_row(kAnalysisHeader);
  for (const auto& r : rows) out += csv::format_row(raw_fields(r));
  return out;
}

std::vector<AnalysisRow> parse_analysis_csv(std::string_view text) {
  auto rows = csv::parse_with_header(text, kAnalysisHeader);
  std::vector<AnalysisRow> out;
  out.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& f = rows[i];
    const std::size_t line = i + 2;
    AnalysisRow r;
    r.target_word = f[0];
    r.speaker_id = f[1];
    r.utterance_id = f[2];
    auto var = parse_variable(f[3]);
    auto mfa = parse_mfa_status(f[4]);
    auto age = parse_age_group(f[5]);
    auto gender = parse_gender(f[6]);
    auto asr = parse_asr_type(f[8]);
    if (!var) throw ParseError("bad variable '" + f[3] + "'", line);
    if (!mfa) throw ParseError("bad mfa_status '" + f[4] + "'", line);
    if (!age) throw ParseError("bad age_group '" + f[5] + "'", line);
    if (!gender) throw ParseError("bad gender '" + f[6] + "'", line);
    if (f[7] != "1" && f[7] != "2" && f[7] != "3") throw ParseError("bad ses '" + f[7] + "'", line);
    if (!asr) throw ParseError("bad asr_type '" + f[8] + "'", line);
    r.variable = *var;
    r.mfa_status = *mfa;
    r.age_group = *age;
    r.gender = *gender;
    r.ses = f[7][0] - '0';
    r.asr_type = *asr;
    char* end = nullptr;
    r.wer = std::strtod(f[9].c_str(), &end);
    if (f[9].empty() || *end != '\0') throw ParseError("bad wer '" + f[9] + "'", line);
    r.token_outcome = f[10];
    if (r.token_outcome != "Correct" && r.token_outcome != "Substituted" && r.token_outcome != "Deleted") {
      throw ParseError("bad token_outcome '" + f[10] + "'", line);
    }
    if (!f[11].empty()) {
      auto a = parse_attribution(f[11]);
      if (!a) throw ParseError("bad neighborhood_status '" + f[11] + "'", line);
      r.neighborhood = *a;
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::string coded_analysis_csv(std::span<const AnalysisRow> rows) {
  csv::Row header = kAnalysisHeader;
  for (const char* c : {"mfa_status_coded", "age_2v1", "age_3v12", "age_4v123", "gender_coded", "asr_type_coded",
                        "neighborhood_coded"}) {
    header.emplace_back(c);
  }
  std::string out = csv::format_row(header);
  for (const auto& r : rows) {
    csv::Row f = raw_fields(r);
    auto mfa = code_mfa_status(r.mfa_status);
    auto age = code_age_group(r.age_group);
    auto nb = r.neighborhood_status();
    f.push_back(mfa ? fmt::format("{}", *mfa) : "");
    for (double a : age) f.push_back(fmt::format("{}", a));
    f.push_back(fmt::format("{}", code_gender(r.gender)));
    f.push_back(fmt::format("{}", code_asr_type(r.asr_type)));
    f.push_back(nb ? std::to_string(*nb) : "");
    out += csv::format_row(f);
  }
  return out;
}

}  // namespace aaevar
