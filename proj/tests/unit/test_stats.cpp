#include <doctest.h>

#include "aaevar/error.hpp"
#include "aaevar/stats.hpp"
#include "oracles.hpp"

using namespace aaevar;

namespace {

double normal(Rng& rng) {
  // Box-Muller on the portable uniform
  const double u1 = 1.0 - rng.unit();
  const double u2 = rng.unit();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

struct Toy {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
};

Toy logistic_toy(std::uint64_t seed, Eigen::Index n, const Eigen::VectorXd& beta) {
  Rng rng(seed);
  const auto p = beta.size();
  Toy t{Eigen::MatrixXd(n, p), Eigen::VectorXd(n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    t.X(i, 0) = 1.0;
    for (Eigen::Index j = 1; j < p; ++j) t.X(i, j) = j == 1 ? (rng.chance(0.5) ? 0.5 : -0.5) : normal(rng);
    const double pr = 1.0 / (1.0 + std::exp(-t.X.row(i).dot(beta)));
    t.y(i) = rng.chance(pr) ? 1.0 : 0.0;
  }
  return t;
}

AnalysisRow row(MfaStatus s, AgeGroup a, Gender g, AsrType asr, double wer, std::optional<Attribution> nb = {}) {
  AnalysisRow r;
  r.target_word = "cold";
  r.speaker_id = "spk";
  r.utterance_id = "u";
  r.mfa_status = s;
  r.age_group = a;
  r.gender = g;
  r.asr_type = asr;
  r.wer = wer;
  r.token_outcome = nb ? "Substituted" : "Correct";
  r.neighborhood = nb;
  return r;
}

}  // namespace

TEST_CASE("sum codes") {
  CHECK(code_mfa_status(MfaStatus::Original) == -0.5);
  CHECK(code_mfa_status(MfaStatus::Reduced) == 0.5);
  CHECK_FALSE(code_mfa_status(MfaStatus::Other));
  CHECK(code_gender(Gender::Male) == -0.5);
  CHECK(code_gender(Gender::Female) == 0.5);
  CHECK(code_asr_type(AsrType::without_lm) == -0.5);
  CHECK(code_asr_type(AsrType::with_lm) == 0.5);
}

TEST_CASE("Helmert contrasts") {
  CHECK_THROWS_AS(helmert_contrasts(1), Error);
  const auto h2 = helmert_contrasts(2);
  REQUIRE(h2.rows() == 2);
  REQUIRE(h2.cols() == 1);
  CHECK(h2(0, 0) == -0.5);
  CHECK(h2(1, 0) == 0.5);

  const auto h4 = helmert_contrasts(4);
  Eigen::MatrixXd expected(4, 3);
  expected << -1.0 / 2, -1.0 / 3, -1.0 / 4,  //
      1.0 / 2, -1.0 / 3, -1.0 / 4,           //
      0, 2.0 / 3, -1.0 / 4,                  //
      0, 0, 3.0 / 4;
  CHECK((h4 - expected).cwiseAbs().maxCoeff() == 0.0);
  CHECK(code_age_group(AgeGroup::ag3) == std::array<double, 3>{0.0, 2.0 / 3, -0.25});

  for (std::size_t k = 2; k <= 8; ++k) {
    const auto h = helmert_contrasts(k);
    CHECK((Eigen::RowVectorXd::Ones(static_cast<Eigen::Index>(k)) * h).cwiseAbs().maxCoeff() < 1e-12);
    const Eigen::MatrixXd gram = h.transpose() * h;
    for (Eigen::Index a = 0; a < gram.rows(); ++a) {
      for (Eigen::Index b = 0; b < gram.cols(); ++b) {
        if (a != b) CHECK(std::abs(gram(a, b)) < 1e-12);
      }
    }
    // Coefficient j+1 of a cell-means fit is level j+2 minus the mean of the levels before it.
    const auto kk = static_cast<Eigen::Index>(k);
    Eigen::MatrixXd design(kk, kk);
    design.col(0).setOnes();
    design.rightCols(kk - 1) = h;
    Eigen::VectorXd mu = Eigen::VectorXd::LinSpaced(kk, 1.0, static_cast<double>(k)).array().square();
    const Eigen::VectorXd beta = design.fullPivLu().solve(mu);
    for (Eigen::Index j = 0; j < h.cols(); ++j) {
      CHECK(beta(j + 1) == doctest::Approx(mu(j + 1) - mu.head(j + 1).mean()).epsilon(1e-12));
    }
  }
}

TEST_CASE("build_design") {
  std::vector<AnalysisRow> one{row(MfaStatus::Reduced, AgeGroup::ag4, Gender::Female, AsrType::with_lm, 0.25)};
  const auto d = build_design(one, ModelKind::Wer);
  REQUIRE(d.X.rows() == 1);
  REQUIRE(d.X.cols() == 6);
  Eigen::RowVectorXd x(6);
  x << 1.0, 0.5, 0.0, 0.0, 0.75, 0.5;
  CHECK(d.X.row(0) == x);
  CHECK(d.y(0) == 0.25);
  CHECK(d.columns == std::vector<std::string>{"intercept", "mfa_status", "age_2v1", "age_3v12", "age_4v123", "gender"});

  std::vector<AnalysisRow> nb{
      row(MfaStatus::Original, AgeGroup::ag1, Gender::Male, AsrType::without_lm, 0.5, Attribution::Neighbor_Error),
      row(MfaStatus::Original, AgeGroup::ag1, Gender::Male, AsrType::with_lm, 0.5, Attribution::Non_Neighbor_Error)};
  const auto dn = build_design(nb, ModelKind::Neighborhood);
  CHECK(dn.X.cols() == 2);
  CHECK(dn.X(0, 1) == -0.5);
  CHECK(dn.X(1, 1) == 0.5);
  CHECK(dn.y(0) == 1.0);
  CHECK(dn.y(1) == 0.0);

  std::vector<AnalysisRow> bad{nb[0], row(MfaStatus::Other, AgeGroup::ag1, Gender::Male, AsrType::with_lm, 0.1),
                               row(MfaStatus::Original, AgeGroup::ag1, Gender::Male, AsrType::with_lm, 0.1)};
  CHECK_THROWS_WITH_AS(build_design(bad, ModelKind::Wer), doctest::Contains("1"), Error);
  CHECK_THROWS_WITH_AS(build_design(bad, ModelKind::Neighborhood), doctest::Contains("2"), Error);
  CHECK_THROWS_AS(build_design(std::vector<AnalysisRow>{}, ModelKind::Wer), Error);
}

TEST_CASE("OLS") {
  Rng rng(5);
  SUBCASE("noiseless") {
    Eigen::MatrixXd X(20, 3);
    Eigen::VectorXd b(3);
    b << 1.5, -2.0, 0.25;
    for (Eigen::Index i = 0; i < 20; ++i) X.row(i) << 1.0, normal(rng), normal(rng);
    const auto f = fit_ols(X, X * b);
    CHECK((f.coefficients - b).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(*f.residual_variance < 1e-24);
  }
  SUBCASE("matches a Gram-Schmidt solver; residuals orthogonal") {
    for (int trial = 0; trial < 10; ++trial) {
      const Eigen::Index n = 30 + static_cast<Eigen::Index>(rng.below(50));
      Eigen::MatrixXd X(n, 4);
      Eigen::VectorXd y(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        X.row(i) << 1.0, normal(rng), rng.chance(0.5) ? 0.5 : -0.5, normal(rng);
        y(i) = 0.3 + X(i, 1) - 2.0 * X(i, 2) + 0.5 * normal(rng);
      }
      const auto f = fit_ols(X, y);
      const auto ref = oracle::gram_schmidt_ols(X, y);
      CHECK((f.coefficients - ref).cwiseAbs().maxCoeff() < 1e-10);
      const Eigen::VectorXd resid = y - X * f.coefficients;
      for (Eigen::Index j = 0; j < 4; ++j) {
        CHECK(std::abs(X.col(j).dot(resid)) <= 1e-9 * std::max(1.0, X.col(j).norm() * y.norm()));
      }
      const double s2 = resid.squaredNorm() / static_cast<double>(n - 4);
      const Eigen::MatrixXd cov = (X.transpose() * X).inverse() * s2;
      CHECK((f.std_errors - cov.diagonal().cwiseSqrt()).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
  SUBCASE("intercept only gives the mean") {
    Eigen::MatrixXd X = Eigen::MatrixXd::Ones(5, 1);
    Eigen::VectorXd y(5);
    y << 1, 2, 3, 4, 10;
    CHECK(fit_ols(X, y).coefficients(0) == doctest::Approx(4.0).epsilon(1e-14));
  }
  SUBCASE("rank deficiency names the dependent column") {
    Eigen::MatrixXd X(6, 3);
    for (Eigen::Index i = 0; i < 6; ++i) X.row(i) << 1.0, double(i), 2.0 * double(i);
    CHECK_THROWS_WITH_AS(fit_ols(X, Eigen::VectorXd::Ones(6), {"intercept", "a", "b"}), doctest::Contains("rank"),
                         RankDeficient);
  }
}

TEST_CASE("logistic IRLS") {
  SUBCASE("intercept only equals logit of the mean") {
    Eigen::MatrixXd X = Eigen::MatrixXd::Ones(10, 1);
    Eigen::VectorXd y(10);
    y << 1, 1, 1, 0, 0, 0, 0, 0, 0, 0;
    const auto f = fit_logistic_irls(X, y);
    CHECK(f.converged);
    CHECK(f.coefficients(0) == doctest::Approx(std::log(0.3 / 0.7)).epsilon(1e-10));
  }
  SUBCASE("agrees with a Nelder-Mead maximizer; trace never decreases") {
    Eigen::VectorXd beta(3);
    beta << -0.4, 1.2, 0.7;
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const auto toy = logistic_toy(seed, 60, beta);
      const auto f = fit_logistic_irls(toy.X, toy.y);
      REQUIRE(f.converged);
      CHECK_FALSE(f.separated);
      CHECK(f.max_abs_gradient < 1e-8);
      auto nll = [&](const Eigen::VectorXd& b) { return -oracle::logistic_loglik(toy.X, toy.y, b); };
      const auto nm = oracle::nelder_mead(nll, Eigen::VectorXd::Zero(3));
      CHECK((f.coefficients - nm).cwiseAbs().maxCoeff() < 1e-6);
      for (std::size_t k = 1; k < f.loglik_trace.size(); ++k) CHECK(f.loglik_trace[k] >= f.loglik_trace[k - 1]);
      CHECK(f.loglik_trace.back() == doctest::Approx(*f.log_likelihood).epsilon(1e-10));
      CHECK(*f.log_likelihood == doctest::Approx(oracle::logistic_loglik(toy.X, toy.y, f.coefficients)).epsilon(1e-12));
    }
  }
  SUBCASE("gradient matches central differences") {
    Eigen::VectorXd beta(3);
    beta << 0.2, -0.8, 0.5;
    const auto toy = logistic_toy(17, 80, beta);
    Rng rng(3);
    for (int k = 0; k < 10; ++k) {
      Eigen::VectorXd b(3);
      for (Eigen::Index j = 0; j < 3; ++j) b(j) = 2.0 * rng.unit() - 1.0;
      const auto g = logistic_gradient(toy.X, toy.y, b);
      for (Eigen::Index j = 0; j < 3; ++j) {
        const double h = 1e-5;
        Eigen::VectorXd up = b, dn = b;
        up(j) += h;
        dn(j) -= h;
        const double fd =
            (logistic_log_likelihood(toy.X, toy.y, up) - logistic_log_likelihood(toy.X, toy.y, dn)) / (2 * h);
        CHECK(std::abs(fd - g(j)) <= 1e-6 * std::max(1.0, std::abs(g(j))));
      }
    }
  }
  SUBCASE("separation is reported, not thrown") {
    Eigen::MatrixXd X(8, 2);
    Eigen::VectorXd y(8);
    for (Eigen::Index i = 0; i < 8; ++i) {
      X.row(i) << 1.0, i < 4 ? -0.5 : 0.5;
      y(i) = i < 4 ? 0.0 : 1.0;
    }
    const auto f = fit_logistic_irls(X, y);
    CHECK_FALSE(f.converged);
    CHECK(f.separated);
    for (std::size_t k = 1; k < f.loglik_trace.size(); ++k) CHECK(f.loglik_trace[k] >= f.loglik_trace[k - 1]);
  }
  SUBCASE("bad outcome values") {
    Eigen::MatrixXd X = Eigen::MatrixXd::Ones(2, 1);
    Eigen::VectorXd y(2);
    y << 0.0, 0.5;
    CHECK_THROWS_AS(fit_logistic_irls(X, y), Error);
  }
}

TEST_CASE("flipping a sum-coded column flips only its coefficient") {
  Eigen::VectorXd beta(3);
  beta << -0.3, 0.9, -0.6;
  const auto toy = logistic_toy(8, 120, beta);
  const auto a = fit_logistic_irls(toy.X, toy.y);
  Eigen::MatrixXd flipped = toy.X;
  flipped.col(1) *= -1.0;
  const auto b = fit_logistic_irls(flipped, toy.y);
  CHECK(std::abs(a.coefficients(1) + b.coefficients(1)) < 1e-10);
  CHECK(std::abs(a.coefficients(0) - b.coefficients(0)) < 1e-10);
  CHECK((logistic_fitted(toy.X, a.coefficients) - logistic_fitted(flipped, b.coefficients)).cwiseAbs().maxCoeff() <
        1e-10);
}

TEST_CASE("quantile is R type 7") {
  CHECK(quantile({1, 2, 3, 4}, 0.5) == 2.5);
  CHECK(quantile({1, 2, 3, 4}, 0.25) == 1.75);
  CHECK(quantile({4, 1, 3, 2}, 0.75) == 3.25);
  CHECK(quantile({7}, 0.3) == 7);
  CHECK(std::isnan(quantile({}, 0.5)));
}

TEST_CASE("descriptive summary") {
  std::vector<AnalysisRow> rows;
  for (int i = 0; i < 9; ++i) {
    rows.push_back(row(MfaStatus::Original, AgeGroup::ag1, Gender::Male, AsrType::without_lm, 0.5,
                       Attribution::Non_Neighbor_Error));
  }
  rows.push_back(
      row(MfaStatus::Reduced, AgeGroup::ag1, Gender::Male, AsrType::without_lm, 0.25, Attribution::Neighbor_Error));
  rows.push_back(row(MfaStatus::Reduced, AgeGroup::ag1, Gender::Male, AsrType::with_lm, 0.0));
  rows.push_back(row(MfaStatus::Other, AgeGroup::ag1, Gender::Male, AsrType::with_lm, 0.0));
  rows.push_back(
      row(MfaStatus::Original, AgeGroup::ag1, Gender::Male, AsrType::with_lm, 1.0, Attribution::Unknown_Pron));

  const auto s = descriptive_summary(rows);
  CHECK(s.counts.rows == 13);
  CHECK(s.counts.other == 1);
  CHECK(s.counts.unknown_pron == 1);
  CHECK(s.counts.neighbor == 1);
  CHECK(s.counts.non_neighbor == 9);
  REQUIRE(s.neighbor_errors.size() == 1);  // with_lm has no attributable errors
  CHECK(s.neighbor_errors[0].asr_type == AsrType::without_lm);
  CHECK(s.neighbor_errors[0].proportion == 0.1);

  std::vector<AnalysisRow> clean{row(MfaStatus::Original, AgeGroup::ag2, Gender::Female, AsrType::with_lm, 0.0),
                                 row(MfaStatus::Reduced, AgeGroup::ag2, Gender::Female, AsrType::with_lm, 0.0)};
  const auto c = descriptive_summary(clean);
  CHECK(c.neighbor_errors.empty());
  for (const auto& g : c.wer_groups) CHECK(g.median == 0.0);
}

TEST_CASE("analysis CSV round trip and coded export") {
  std::vector<AnalysisRow> rows{
      row(MfaStatus::Reduced, AgeGroup::ag3, Gender::Female, AsrType::with_lm, 1.0 / 3.0, Attribution::Neighbor_Error),
      row(MfaStatus::Other, AgeGroup::ag1, Gender::Male, AsrType::without_lm, 0.0)};
  rows[0].target_word = "say, \"what\"";
  const std::string text = analysis_csv(rows);
  CHECK(text.starts_with(
      "target_word,speaker_id,utterance_id,variable,mfa_status,age_group,gender,ses,asr_type,wer,token_outcome,"
      "neighborhood_status\n"));
  const auto back = parse_analysis_csv(text);
  REQUIRE(back.size() == 2);
  CHECK(back[0].target_word == rows[0].target_word);
  CHECK(back[0].wer == rows[0].wer);
  CHECK(back[0].neighborhood == Attribution::Neighbor_Error);
  CHECK(back[1].mfa_status == MfaStatus::Other);
  CHECK(analysis_csv(back) == text);

  const std::string coded = coded_analysis_csv(rows);
  CHECK(coded.find("mfa_status_coded") != std::string::npos);
  CHECK(coded.find(",0.5,0,0.6666666666666666,-0.25,0.5,0.5,1\n") != std::string::npos);
}
