#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "aaevar/alignment.hpp"
#include "aaevar/lexicon.hpp"
#include "aaevar/neighborhood.hpp"
#include "aaevar/variants.hpp"

namespace aaevar {

enum class AsrType { without_lm, with_lm };

std::string_view to_string(AsrType t);
std::optional<AsrType> parse_asr_type(std::string_view s);

// One target-token observation for one ASR system. Factor levels are stored
// raw; the contrast codes below derive the model columns.
struct AnalysisRow {
  std::string target_word;
  std::string speaker_id;
  std::string utterance_id;
  Variable variable = Variable::CCR;
  MfaStatus mfa_status = MfaStatus::Original;
  AgeGroup age_group = AgeGroup::ag1;
  Gender gender = Gender::Male;
  int ses = 1;
  AsrType asr_type = AsrType::without_lm;
  double wer = 0.0;
  std::string token_outcome;  // Correct | Substituted | Deleted
  std::optional<Attribution> neighborhood;  // Neighbor_Error, Non_Neighbor_Error or Unknown_Pron

  // 1 = Neighbor_Error, 0 = Non_Neighbor_Error, empty otherwise.
  std::optional<int> neighborhood_status() const;
};

// Sum codes: Original -0.5 / Reduced +0.5, Male -0.5 / Female +0.5,
// without_lm -0.5 / with_lm +0.5. Other has no code.
std::optional<double> code_mfa_status(MfaStatus s);
double code_gender(Gender g);
double code_asr_type(AsrType t);

// Helmert contrasts scaled so column j (0-based) is level j+2 minus the mean
// of levels 1..j+1: entries -1/(j+2) above the diagonal level, (j+1)/(j+2) on
// it, 0 below. Equivalently R's contr.helmert with column j divided by j+2.
// For k = 4:
//   ag1  -1/2  -1/3  -1/4
//   ag2   1/2  -1/3  -1/4
//   ag3   0     2/3  -1/4
//   ag4   0     0     3/4
// Throws Error for k < 2.
Eigen::MatrixXd helmert_contrasts(std::size_t k);
std::array<double, 3> code_age_group(AgeGroup a);

enum class ModelKind { Wer, Neighborhood };

struct Design {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  std::vector<std::string> columns;
};

// WER model: [intercept, mfa_status, age_2v1, age_3v12, age_4v123, gender].
// Neighborhood model: [intercept, asr_type], y = neighborhood_status.
// Throws Error listing row indices with missing covariates or outcome.
Design build_design(std::span<const AnalysisRow> rows, ModelKind kind);

struct FitResult {
  std::string method;
  std::vector<std::string> columns;
  Eigen::VectorXd coefficients;
  Eigen::VectorXd std_errors;
  std::optional<double> log_likelihood;     // logistic
  std::optional<double> residual_variance;  // OLS
  std::size_t n_obs = 0;
  std::size_t n_iterations = 0;
  bool converged = false;
  bool separated = false;
  double max_abs_gradient = 0.0;
  // Log-likelihood after each iteration, accumulated from per-step gains.
  std::vector<double> loglik_trace;
};

class RankDeficient : public Error {
 public:
  using Error::Error;
};

// Least squares through column-pivoted QR; standard errors from
// (X'X)^-1 * RSS / (n - p). Throws RankDeficient naming the dependent columns.
FitResult fit_ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, std::vector<std::string> columns = {});

struct IrlsOptions {
  double tol = 1e-8;  // on max |gradient|
  std::size_t max_iter = 50;
};

double logistic_log_likelihood(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Eigen::VectorXd& beta);
Eigen::VectorXd logistic_gradient(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Eigen::VectorXd& beta);
Eigen::VectorXd logistic_fitted(const Eigen::MatrixXd& X, const Eigen::VectorXd& beta);

// Newton/IRLS on the logit link with step halving, so the log-likelihood
// never decreases between iterations. Separation or a singular information
// matrix yields converged = false rather than an exception.
FitResult fit_logistic_irls(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const IrlsOptions& opts = {},
                            std::vector<std::string> columns = {});

FitResult fit_model(std::span<const AnalysisRow> rows, ModelKind kind);

struct WerGroupSummary {
  Variable variable;
  MfaStatus mfa_status;
  AsrType asr_type;
  std::size_t n = 0;
  double mean = 0.0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
};

struct NeighborErrorSummary {
  AsrType asr_type;
  std::size_t errors = 0;    // Neighbor_Error + Non_Neighbor_Error
  std::size_t neighbor = 0;
  double proportion = 0.0;   // neighbor / errors
};

struct CategoryCounts {
  std::size_t rows = 0;
  std::size_t other = 0;         // MFA status Other, excluded from statistics
  std::size_t correct = 0;
  std::size_t deleted = 0;
  std::size_t unknown_pron = 0;
  std::size_t neighbor = 0;
  std::size_t non_neighbor = 0;
};

struct DescriptiveSummary {
  std::vector<WerGroupSummary> wer_groups;       // variable x status x asr_type
  std::vector<NeighborErrorSummary> neighbor_errors;  // asr_types with errors only
  CategoryCounts counts;
};

// R type-7 quantile of unsorted data; p in [0, 1].
double quantile(std::vector<double> values, double p);

DescriptiveSummary descriptive_summary(std::span<const AnalysisRow> rows);

// Analysis CSV, raw factor levels.
extern const std::vector<std::string> kAnalysisHeader;
std::string analysis_csv(std::span<const AnalysisRow> rows);
std::vector<AnalysisRow> parse_analysis_csv(std::string_view text);

// Analysis rows plus the contrast-coded columns of both models. Rows with
// status Other leave the coded mfa_status empty.
std::string coded_analysis_csv(std::span<const AnalysisRow> rows);

}  // namespace aaevar
